//! Named initial states: the two-term pure families and the two-parameter
//! mixed family.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix6;
use crate::state::{pure_to_density, row_of, DensityMatrix, PureState, NORM_TOLERANCE};

/// Tolerance on `2a + 3b + c = 1`.
pub const MIXED_SUM_TOLERANCE: f64 = 1e-12;

/// Weights of `c|Ψ⁻⟩⟨Ψ⁻| + b(|Ψ⁺⟩⟨Ψ⁺| + |00⟩⟨00| + |11⟩⟨11|) + a(|02⟩⟨02| + |12⟩⟨12|)`
/// with `Ψ± = (|01⟩ ± |10⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedFamilyParams {
    a: f64,
    b: f64,
    c: f64,
}

impl MixedFamilyParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = [a, b, c].iter().all(|x| x.is_finite() && *x >= 0.0)
            && (2.0 * a + 3.0 * b + c - 1.0).abs() <= MIXED_SUM_TOLERANCE;
        if !ok {
            return Err(Error::InvalidMixedParams { a, b, c });
        }
        Ok(MixedFamilyParams { a, b, c })
    }

    /// Fixes `a = (1 - 3b - c)/2`.
    pub fn from_bc(b: f64, c: f64) -> Result<Self> {
        let mut a = 0.5 * (1.0 - 3.0 * b - c);
        if a < 0.0 && a > -MIXED_SUM_TOLERANCE {
            a = 0.0;
        }
        Self::new(a, b, c)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The state assembled from its projectors.
    pub fn density(&self) -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = |sign: f64| PureState::two_term(s, (0, 1), sign * s, (1, 0)).expect("unit norm");
        let proj = |q, t| pure_to_density(&PureState::basis(q, t).expect("valid level"));
        let mut m = pure_to_density(&psi(-1.0)).into_matrix().scale(self.c);
        let b_part = pure_to_density(&psi(1.0)).into_matrix()
            + proj(0, 0).into_matrix()
            + proj(1, 1).into_matrix();
        m = m + b_part.scale(self.b);
        m = m + (proj(0, 2).into_matrix() + proj(1, 2).into_matrix()).scale(self.a);
        DensityMatrix::from_trusted(m)
    }
}

/// Initial states that the dynamics and the sudden-death analysis know about.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateFamily {
    /// `α|0,0⟩ + β|1,1⟩`
    Phi1 { alpha: f64, beta: f64 },
    /// `α|0,1⟩ + β|1,2⟩`
    Phi2Plus { alpha: f64, beta: f64 },
    /// `α|0,1⟩ - β|1,2⟩`
    Phi2Minus { alpha: f64, beta: f64 },
    /// `α|0,2⟩ + β|1,1⟩`
    Phi2Prime { alpha: f64, beta: f64 },
    /// `α|0,2⟩ + β|1,0⟩`
    Phi3Plus { alpha: f64, beta: f64 },
    /// `α|0,2⟩ - β|1,0⟩`
    Phi3Minus { alpha: f64, beta: f64 },
    MixedAC(MixedFamilyParams),
    Custom(DensityMatrix),
}

impl StateFamily {
    pub fn phi1(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi1 { alpha, beta })
    }

    pub fn phi2_plus(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi2Plus { alpha, beta })
    }

    pub fn phi2_minus(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi2Minus { alpha, beta })
    }

    pub fn phi2_prime(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi2Prime { alpha, beta })
    }

    pub fn phi3_plus(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi3Plus { alpha, beta })
    }

    pub fn phi3_minus(alpha: f64, beta: f64) -> Result<Self> {
        check_pair(alpha, beta).map(|_| StateFamily::Phi3Minus { alpha, beta })
    }

    pub fn mixed(b: f64, c: f64) -> Result<Self> {
        MixedFamilyParams::from_bc(b, c).map(StateFamily::MixedAC)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            StateFamily::Phi1 { .. } => "phi1",
            StateFamily::Phi2Plus { .. } => "phi2plus",
            StateFamily::Phi2Minus { .. } => "phi2minus",
            StateFamily::Phi2Prime { .. } => "phi2prime",
            StateFamily::Phi3Plus { .. } => "phi3plus",
            StateFamily::Phi3Minus { .. } => "phi3minus",
            StateFamily::MixedAC(_) => "mixed",
            StateFamily::Custom(_) => "custom",
        }
    }

    /// The state vector for the pure families.
    pub fn pure_state(&self) -> Option<PureState> {
        let (alpha, first, beta, second) = match *self {
            StateFamily::Phi1 { alpha, beta } => (alpha, (0, 0), beta, (1, 1)),
            StateFamily::Phi2Plus { alpha, beta } => (alpha, (0, 1), beta, (1, 2)),
            StateFamily::Phi2Minus { alpha, beta } => (alpha, (0, 1), -beta, (1, 2)),
            StateFamily::Phi2Prime { alpha, beta } => (alpha, (0, 2), beta, (1, 1)),
            StateFamily::Phi3Plus { alpha, beta } => (alpha, (0, 2), beta, (1, 0)),
            StateFamily::Phi3Minus { alpha, beta } => (alpha, (0, 2), -beta, (1, 0)),
            StateFamily::MixedAC(_) | StateFamily::Custom(_) => return None,
        };
        Some(PureState::two_term(alpha, first, beta, second).expect("validated at construction"))
    }

    pub fn initial_state(&self) -> DensityMatrix {
        match self {
            StateFamily::MixedAC(p) => p.density(),
            StateFamily::Custom(rho) => *rho,
            _ => pure_to_density(&self.pure_state().expect("pure family")),
        }
    }
}

fn check_pair(alpha: f64, beta: f64) -> Result<()> {
    if alpha.is_finite()
        && beta.is_finite()
        && (alpha * alpha + beta * beta - 1.0).abs() <= NORM_TOLERANCE
    {
        Ok(())
    } else {
        Err(Error::InvalidAmplitudes { alpha, beta })
    }
}

/// Sets a real symmetric pair of entries; used by the analytic solutions.
pub(crate) fn set_symmetric(m: &mut Matrix6, ket: (usize, usize), bra: (usize, usize), v: f64) {
    let r = row_of(ket.0, ket.1);
    let c = row_of(bra.0, bra.1);
    m[(r, c)] = Complex64::new(v, 0.0);
    m[(c, r)] = Complex64::new(v, 0.0);
}
