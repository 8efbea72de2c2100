//! Schmidt decomposition of qubit-qutrit pure states.

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::state::{PureState, QUTRIT_LEVELS};

/// Eigenvalue gap of the reduced qubit state below which the two Schmidt
/// coefficients are treated as equal.
const DEGENERACY_GAP: f64 = 1e-12;
const PHASE_THRESHOLD: f64 = 1e-14;

/// `|ψ⟩ = (U_A ⊗ U_B)(α|0,0⟩ + √(1-α²)|1,1⟩)` with `0 ≤ α ≤ 1/√2`.
///
/// Both rotations are indexed by level: column `k` of `qubit_rotation` is the
/// qubit Schmidt vector mapped from `|k⟩`, and likewise for the qutrit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtForm {
    pub alpha: f64,
    pub qubit_rotation: CMatrix<2>,
    pub qutrit_rotation: CMatrix<3>,
}

impl SchmidtForm {
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).max(0.0).sqrt()
    }

    /// Rebuilds the state from the canonical form.
    pub fn reconstruct(&self) -> [Complex64; 6] {
        let coeffs = [self.alpha, self.beta()];
        let mut amps = [Complex64::new(0.0, 0.0); 6];
        for (k, &coeff) in coeffs.iter().enumerate() {
            for i in 0..2 {
                for j in 0..QUTRIT_LEVELS {
                    amps[3 * i + j] +=
                        self.qubit_rotation[(i, k)] * self.qutrit_rotation[(j, k)] * coeff;
                }
            }
        }
        amps
    }
}

/// Schmidt decomposition from the eigen-decomposition of the reduced qubit
/// state.
///
/// The qubit Schmidt vectors have their first nonzero component real and
/// nonnegative; the qutrit vectors follow from applying the state to them.
/// With equal Schmidt coefficients the qubit basis is the computational one.
pub fn schmidt_decompose(psi: &PureState) -> SchmidtForm {
    let rho_a = psi.reduced_qubit();
    let p = rho_a[(0, 0)].re;
    let q = rho_a[(1, 1)].re;
    let r = rho_a[(0, 1)];
    let trace = p + q;
    let gap = ((p - q) * (p - q) + 4.0 * r.norm_sqr()).sqrt();
    let lambda_min = (0.5 * (trace - gap)).max(0.0);

    let u0 = if gap <= DEGENERACY_GAP {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    } else {
        // Two null vectors of ρ_A - λ; keep the better conditioned one.
        let first = [r, Complex64::new(lambda_min - p, 0.0)];
        let second = [Complex64::new(lambda_min - q, 0.0), r.conj()];
        let pick = if norm2(&first) >= norm2(&second) {
            first
        } else {
            second
        };
        fix_phase(normalize(&pick))
    };
    let u1 = fix_phase([-u0[1].conj(), u0[0].conj()]);
    let qubit_rotation = CMatrix::<2>([[u0[0], u1[0]], [u0[1], u1[1]]]);

    // w_k = (⟨u_k| ⊗ I)|ψ⟩ = √λ_k v_k.
    let apply = |u: &[Complex64; 2]| -> [Complex64; 3] {
        let mut w = [Complex64::new(0.0, 0.0); 3];
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = u[0].conj() * psi.amp(0, j) + u[1].conj() * psi.amp(1, j);
        }
        w
    };
    let w0 = apply(&u0);
    let w1 = apply(&u1);
    let alpha = norm3(&w0).min(std::f64::consts::FRAC_1_SQRT_2);

    let v1 = normalize3(&w1);
    let v0 = {
        let proj = inner3(&v1, &w0);
        let mut rest = [Complex64::new(0.0, 0.0); 3];
        for j in 0..3 {
            rest[j] = w0[j] - v1[j] * proj;
        }
        if norm3(&rest) > 0.0 {
            normalize3(&rest)
        } else {
            orthogonal_unit(&v1)
        }
    };
    let v2 = fix_phase3(cross_conj(&v0, &v1));
    let qutrit_rotation = CMatrix::<3>::from_fn(|j, k| [v0, v1, v2][k][j]);

    SchmidtForm {
        alpha,
        qubit_rotation,
        qutrit_rotation,
    }
}

fn norm2(v: &[Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn normalize(v: &[Complex64; 2]) -> [Complex64; 2] {
    let n = norm2(v);
    [v[0] / n, v[1] / n]
}

fn fix_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let lead = if v[0].norm() > PHASE_THRESHOLD { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    [v[0] * phase, v[1] * phase]
}

fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize3(v: &[Complex64; 3]) -> [Complex64; 3] {
    let n = norm3(v);
    v.map(|z| z / n)
}

/// `⟨a|b⟩`.
fn inner3(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    (0..3).map(|j| a[j].conj() * b[j]).sum()
}

fn fix_phase3(v: [Complex64; 3]) -> [Complex64; 3] {
    match v.iter().find(|z| z.norm() > PHASE_THRESHOLD) {
        Some(lead) => {
            let phase = lead.conj() / lead.norm();
            v.map(|z| z * phase)
        }
        None => v,
    }
}

/// `conj(a × b)`, orthogonal to both `a` and `b` under the Hermitian product.
fn cross_conj(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        (a[1] * b[2] - a[2] * b[1]).conj(),
        (a[2] * b[0] - a[0] * b[2]).conj(),
        (a[0] * b[1] - a[1] * b[0]).conj(),
    ]
}

fn orthogonal_unit(v: &[Complex64; 3]) -> [Complex64; 3] {
    // The basis vector least aligned with v always leaves a usable remainder.
    let j = (0..3)
        .min_by(|&x, &y| v[x].norm().total_cmp(&v[y].norm()))
        .unwrap_or(0);
    let mut e = [Complex64::new(0.0, 0.0); 3];
    e[j] = Complex64::new(1.0, 0.0);
    let proj = inner3(v, &e);
    for k in 0..3 {
        e[k] -= v[k] * proj;
    }
    fix_phase3(normalize3(&e))
}
