//! Random states and unitaries for sampling-based checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, Matrix6};
use crate::state::{local_operator, DensityMatrix, PureState, DIM};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Pure state drawn from the unitarily invariant measure.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let amps: [Complex64; DIM] = std::array::from_fn(|_| gaussian(rng));
        if let Ok(psi) = PureState::normalized(amps) {
            return psi;
        }
    }
}

/// Mixed state `G G† / tr(G G†)` with `G` a complex Gaussian matrix.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = Matrix6::from_fn(|_, _| gaussian(rng));
    let w = g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale(1.0 / tr))
}

/// Haar-random unitary from the QR decomposition of a Gaussian matrix, with
/// the phases of the triangular factor divided out.
pub fn random_unitary<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> CMatrix<N> {
    let mut cols: [[Complex64; N]; N] = std::array::from_fn(|_| std::array::from_fn(|_| gaussian(rng)));
    for k in 0..N {
        for p in 0..k {
            let proj: Complex64 = (0..N).map(|i| cols[p][i].conj() * cols[k][i]).sum();
            for i in 0..N {
                let v = cols[p][i];
                cols[k][i] -= v * proj;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[k].iter_mut() {
            *z /= norm;
        }
    }
    CMatrix::from_fn(|r, c| cols[c][r])
}

/// `U_A ⊗ U_B` with both factors Haar-random.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix6 {
    let ua = random_unitary::<2, R>(rng);
    let ub = random_unitary::<3, R>(rng);
    local_operator(&ua, &ub)
}
