//! Qubit-qutrit states, partial transposition and negativity.
//!
//! Matrices are written in the descending product basis
//! `|1,2⟩, |1,1⟩, |1,0⟩, |0,2⟩, |0,1⟩, |0,0⟩` (qubit level first), so row
//! `r` holds `|i,j⟩` with `r = 3(1-i) + (2-j)`. Pure-state amplitudes are
//! stored in the ascending order `a00, a01, a02, a10, a11, a12`, which is the
//! same list read backwards.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMatrix, Matrix6};

/// Tolerance on `Σ|a|² = 1` for pure states.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Hermiticity tolerance for density matrices.
pub const DENSITY_HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Smallest eigenvalue accepted for a positive semidefinite matrix.
pub const POSITIVITY_TOLERANCE: f64 = -1e-10;
/// Partial-transpose eigenvalues in `(-NEGATIVITY_CUTOFF, 0)` count as zero.
pub const NEGATIVITY_CUTOFF: f64 = 1e-10;
/// States with negativity at or below this value are reported separable.
pub const SEPARABILITY_TOLERANCE: f64 = 1e-9;

pub const QUBIT_LEVELS: usize = 2;
pub const QUTRIT_LEVELS: usize = 3;
pub const DIM: usize = QUBIT_LEVELS * QUTRIT_LEVELS;

/// Row of a product basis vector `|i,j⟩` in the descending basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(usize);

impl BasisIndex {
    pub fn new(qubit: usize, qutrit: usize) -> Result<Self> {
        if qubit >= QUBIT_LEVELS || qutrit >= QUTRIT_LEVELS {
            return Err(Error::LevelOutOfRange { qubit, qutrit });
        }
        Ok(BasisIndex(3 * (1 - qubit) + (2 - qutrit)))
    }

    pub fn from_row(row: usize) -> Result<Self> {
        if row >= DIM {
            return Err(Error::RowOutOfRange(row));
        }
        Ok(BasisIndex(row))
    }

    pub fn row(self) -> usize {
        self.0
    }

    /// `(qubit, qutrit)` levels of this row.
    pub fn levels(self) -> (usize, usize) {
        levels_of_row(self.0)
    }
}

/// Row of `|i,j⟩`; see [`BasisIndex`].
pub fn basis_index(qubit: usize, qutrit: usize) -> Result<BasisIndex> {
    BasisIndex::new(qubit, qutrit)
}

pub(crate) const fn row_of(qubit: usize, qutrit: usize) -> usize {
    3 * (1 - qubit) + (2 - qutrit)
}

pub(crate) const fn levels_of_row(row: usize) -> (usize, usize) {
    (1 - row / 3, 2 - row % 3)
}

/// Which factor of the product space an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Qubit,
    Qutrit,
}

/// Normalized pure state `Σ a_ij |i,j⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    amps: [Complex64; DIM],
}

impl PureState {
    /// Amplitudes in the order `a00, a01, a02, a10, a11, a12`.
    pub fn new(amps: [Complex64; DIM]) -> Result<Self> {
        check_finite_amps(&amps)?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(PureState { amps })
    }

    /// Rescales `amps` to unit norm; fails on the zero vector.
    pub fn normalized(amps: [Complex64; DIM]) -> Result<Self> {
        check_finite_amps(&amps)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(PureState {
            amps: amps.map(|a| a / norm),
        })
    }

    /// The product basis vector `|i,j⟩`.
    pub fn basis(qubit: usize, qutrit: usize) -> Result<Self> {
        BasisIndex::new(qubit, qutrit)?;
        let mut amps = [Complex64::new(0.0, 0.0); DIM];
        amps[3 * qubit + qutrit] = Complex64::new(1.0, 0.0);
        Ok(PureState { amps })
    }

    /// `alpha |q1,t1⟩ + beta |q2,t2⟩` for two distinct basis vectors.
    pub fn two_term(
        alpha: f64,
        first: (usize, usize),
        beta: f64,
        second: (usize, usize),
    ) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite())
            || (alpha * alpha + beta * beta - 1.0).abs() > NORM_TOLERANCE
        {
            return Err(Error::InvalidAmplitudes { alpha, beta });
        }
        BasisIndex::new(first.0, first.1)?;
        BasisIndex::new(second.0, second.1)?;
        let mut amps = [Complex64::new(0.0, 0.0); DIM];
        amps[3 * first.0 + first.1] += alpha;
        amps[3 * second.0 + second.1] += beta;
        PureState::new(amps)
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amps
    }

    /// `a_ij`.
    pub fn amp(&self, qubit: usize, qutrit: usize) -> Complex64 {
        self.amps[3 * qubit + qutrit]
    }

    /// State vector in the descending basis.
    pub fn to_basis_vector(&self) -> [Complex64; DIM] {
        let mut v = self.amps;
        v.reverse();
        v
    }

    pub fn from_basis_vector(v: [Complex64; DIM]) -> Result<Self> {
        let mut amps = v;
        amps.reverse();
        PureState::new(amps)
    }

    /// Reduced qubit state `Tr_B |ψ⟩⟨ψ|`, indexed by qubit level.
    pub fn reduced_qubit(&self) -> CMatrix<2> {
        CMatrix::<2>::from_fn(|i, k| {
            (0..QUTRIT_LEVELS)
                .map(|j| self.amp(i, j) * self.amp(k, j).conj())
                .sum()
        })
    }
}

fn check_finite_amps(amps: &[Complex64; DIM]) -> Result<()> {
    if amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("amplitudes"))
    }
}

/// Hermitian, unit-trace, positive semidefinite 6×6 matrix in the
/// descending basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Matrix6);

/// Tolerances used when validating a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityTolerances {
    pub hermitian: f64,
    pub trace: f64,
    /// `None` skips the eigenvalue check.
    pub min_eigenvalue: Option<f64>,
}

impl Default for DensityTolerances {
    fn default() -> Self {
        DensityTolerances {
            hermitian: DENSITY_HERMITIAN_TOLERANCE,
            trace: TRACE_TOLERANCE,
            min_eigenvalue: Some(POSITIVITY_TOLERANCE),
        }
    }
}

impl DensityMatrix {
    pub fn new(m: Matrix6) -> Result<Self> {
        Self::with_tolerances(m, &DensityTolerances::default())
    }

    pub fn with_tolerances(m: Matrix6, tol: &DensityTolerances) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("density matrix"));
        }
        let defect = m.hermiticity_defect();
        if defect > tol.hermitian {
            return Err(Error::NotHermitian(defect));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::BadTrace(tr.re));
        }
        if let Some(floor) = tol.min_eigenvalue {
            let min = hermitian_eigenvalues(&m)?[0];
            if min < floor {
                return Err(Error::NotPositive(min));
            }
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps a matrix known to be a valid state by construction.
    pub(crate) fn from_trusted(m: Matrix6) -> Self {
        DensityMatrix(m)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.to_basis_vector();
        DensityMatrix(Matrix6::outer(&v, &v))
    }

    /// `|ψ⟩⟨ψ|` from raw amplitudes (`a00 … a12`), rejecting unnormalized input.
    pub fn from_amplitudes(amps: [Complex64; DIM]) -> Result<Self> {
        PureState::new(amps).map(|psi| Self::from_pure(&psi))
    }

    /// `I/6`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix(Matrix6::identity().scale(1.0 / DIM as f64))
    }

    /// Convex combination `Σ wₖ ρₖ`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let mut m = Matrix6::zeros();
        for (w, rho) in parts {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::BadTrace(*w));
            }
            m = m + rho.0.scale(*w);
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix6 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix6 {
        self.0
    }

    /// Entry by 0-based descending-basis rows.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    /// `⟨q,t|ρ|q',t'⟩`.
    pub fn element(&self, ket: (usize, usize), bra: (usize, usize)) -> Result<Complex64> {
        let r = BasisIndex::new(ket.0, ket.1)?.row();
        let c = BasisIndex::new(bra.0, bra.1)?.row();
        Ok(self.0[(r, c)])
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigenvalues(&self) -> Result<[f64; DIM]> {
        hermitian_eigenvalues(&self.0)
    }

    /// `(U ρ U†)` for a unitary `U` on the full space.
    pub fn conjugate_by(&self, u: &Matrix6) -> Result<Self> {
        Self::new(*u * self.0 * u.adjoint())
    }

    /// Trace distance `½ Σ |λ(ρ - σ)|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        let vals = hermitian_eigenvalues(&(self.0 - other.0))?;
        Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
    }
}

/// `ρ = |ψ⟩⟨ψ|`.
pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(psi)
}

/// The ground state `|0,0⟩⟨0,0|` reached by every state under pure decay.
pub fn ground_state() -> DensityMatrix {
    let mut m = Matrix6::zeros();
    m[(row_of(0, 0), row_of(0, 0))] = Complex64::new(1.0, 0.0);
    DensityMatrix(m)
}

/// Local operator `A ⊗ B` in the descending basis, with `A` and `B` indexed
/// by level.
pub fn local_operator(qubit_op: &CMatrix<2>, qutrit_op: &CMatrix<3>) -> Matrix6 {
    Matrix6::from_fn(|r, c| {
        let (i, j) = levels_of_row(r);
        let (k, l) = levels_of_row(c);
        qubit_op[(i, k)] * qutrit_op[(j, l)]
    })
}

/// Partial transpose of a 6×6 matrix on one subsystem.
///
/// Transposing the qutrit transposes each 3×3 block in place; transposing
/// the qubit swaps the off-diagonal blocks without transposing them.
pub fn partial_transpose(m: &Matrix6, side: Subsystem) -> Matrix6 {
    Matrix6::from_fn(|r, c| {
        let (i, j) = levels_of_row(r);
        let (k, l) = levels_of_row(c);
        match side {
            Subsystem::Qutrit => m[(row_of(i, l), row_of(k, j))],
            Subsystem::Qubit => m[(row_of(k, j), row_of(i, l))],
        }
    })
}

/// Eigenvalues of `ρ^{T_B}`, ascending.
pub fn pt_eigenvalues(rho: &DensityMatrix, side: Subsystem) -> Result<[f64; DIM]> {
    hermitian_eigenvalues(&partial_transpose(rho.matrix(), side))
}

/// Twice the absolute sum of the negative eigenvalues of the partial
/// transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let vals = pt_eigenvalues(rho, Subsystem::Qutrit)?;
    Ok(negativity_from_spectrum(&vals))
}

pub fn negativity_from_spectrum(vals: &[f64]) -> f64 {
    2.0 * vals
        .iter()
        .filter(|&&v| v <= -NEGATIVITY_CUTOFF)
        .map(|v| -v)
        .sum::<f64>()
}

/// Number of partial-transpose eigenvalues below `-NEGATIVITY_CUTOFF`.
pub fn negative_pt_eigenvalue_count(rho: &DensityMatrix) -> Result<usize> {
    Ok(pt_eigenvalues(rho, Subsystem::Qutrit)?
        .iter()
        .filter(|&&v| v <= -NEGATIVITY_CUTOFF)
        .count())
}

/// PPT test; in 2×3 positivity of the partial transpose is equivalent to
/// separability.
pub fn is_separable(rho: &DensityMatrix) -> Result<bool> {
    Ok(negativity(rho)? <= SEPARABILITY_TOLERANCE)
}

/// The pure-state invariant `f(a)` that fixes the whole partial-transpose
/// spectrum of `|ψ⟩⟨ψ|`; `0 ≤ f ≤ 1/4`.
pub fn f_invariant(psi: &PureState) -> f64 {
    let a = psi.amplitudes();
    let n = |x: usize| a[x - 1].norm_sqr();
    let re4 = |p: usize, q: usize, r: usize, s: usize| {
        (a[p - 1] * a[q - 1].conj() * a[r - 1].conj() * a[s - 1]).re
    };
    n(2) * n(4) + n(3) * n(4) - 2.0 * re4(1, 2, 4, 5) - 2.0 * re4(1, 3, 4, 6)
        + n(1) * n(5)
        + n(3) * n(5)
        + n(1) * n(6)
        + n(2) * n(6)
        - 2.0 * re4(2, 3, 5, 6)
}

/// Closed-form partial-transpose spectrum of a pure state, ascending:
/// `{-√f, 0, 0, ½(1-√(1-4f)), √f, ½(1+√(1-4f))}` up to ordering.
pub fn pt_spectrum_pure(psi: &PureState) -> [f64; DIM] {
    let f = f_invariant(psi).clamp(0.0, 0.25);
    let root = f.sqrt();
    let disc = (1.0 - 4.0 * f).max(0.0).sqrt();
    let mut vals = [
        0.0,
        0.0,
        -root,
        root,
        0.5 * (1.0 - disc),
        0.5 * (1.0 + disc),
    ];
    vals.sort_by(f64::total_cmp);
    vals
}

/// Scale-free entanglement witness: minus the smallest eigenvalue of
/// `S ρ^{T_B} S`, where `S` is the positive diagonal matrix with
/// `S_ii = 1/√(max_j |ρ^{T_B}_ij|)`.
///
/// A diagonal congruence preserves inertia, so the witness is positive
/// exactly when the partial transpose has a negative eigenvalue, but its size
/// no longer shrinks with the overall decay of the populations. Entries of
/// the scaled matrix are bounded by one. Rows that vanish identically are
/// replaced by a unit diagonal entry; they only carry zero eigenvalues.
pub fn npt_witness(rho: &DensityMatrix) -> Result<f64> {
    npt_witness_of_matrix(rho.matrix())
}

pub(crate) fn npt_witness_of_matrix(m: &Matrix6) -> Result<f64> {
    let pt = partial_transpose(m, Subsystem::Qutrit);
    let mut inv_scale = [0.0; DIM];
    for (r, s) in inv_scale.iter_mut().enumerate() {
        let row_max = (0..DIM).map(|c| pt[(r, c)].norm()).fold(0.0, f64::max);
        *s = if row_max > 0.0 {
            1.0 / row_max.sqrt()
        } else {
            0.0
        };
    }
    let scaled = Matrix6::from_fn(|r, c| {
        if inv_scale[r] == 0.0 || inv_scale[c] == 0.0 {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            pt[(r, c)] * (inv_scale[r] * inv_scale[c])
        }
    });
    Ok(-hermitian_eigen(&scaled)?.values[0])
}
