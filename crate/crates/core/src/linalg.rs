//! Small fixed-size complex matrices and a cyclic Jacobi eigensolver for
//! Hermitian matrices.
//!
//! Everything in this crate lives in at most six dimensions, so matrices are
//! stack arrays and all operations are plain loops.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// Frobenius norm of the input.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
/// Hard cap on the number of cyclic sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity defect accepted by the eigensolver, relative to the matrix norm.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `N×N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[Complex64; N]; N]);

/// The 6×6 matrices acting on the qubit-qutrit space.
pub type Matrix6 = CMatrix<6>;

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    /// Diagonal matrix with the given real entries.
    pub fn from_diagonal(diag: &[f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Complex64::new(diag[i], 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64; N], v: &[Complex64; N]) -> Self {
        Self::from_fn(|r, c| u[r] * v[c].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r])
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..N {
            for c in 0..N {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// `max |m - m†|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[Complex64; N]) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> [Complex64; N] {
        let mut out = [ZERO; N];
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.0[r][c];
        }
        out
    }

    /// `max |U†U - I|`; zero for a unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for k in 0..N {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..N {
                    out.0[r][c] += a * rhs.0[k][c];
                }
            }
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [f64; N],
    /// Unitary whose column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<N>,
    pub sweeps: usize,
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<const N: usize>(m: &CMatrix<N>) -> Result<[f64; N]> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary and then applies an ordinary real Jacobi rotation, so the combined
/// transformation stays unitary and the diagonal stays real.
pub fn hermitian_eigen<const N: usize>(m: &CMatrix<N>) -> Result<HermitianEigen<N>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix passed to the eigensolver"));
    }
    let norm = m.frobenius_norm();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * norm.max(1.0) {
        return Err(Error::NotHermitian(defect));
    }

    // Work on the exactly Hermitian part.
    let mut a = CMatrix::<N>::from_fn(|r, c| {
        if r == c {
            Complex64::new(m.0[r][r].re, 0.0)
        } else {
            (m.0[r][c] + m.0[c][r].conj()) * 0.5
        }
    });
    let mut v = CMatrix::<N>::identity();
    let threshold = JACOBI_TOLERANCE * norm;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    let mut values = [0.0; N];
    let mut vectors = CMatrix::<N>::zeros();
    for (k, &i) in order.iter().enumerate() {
        values[k] = a.0[i][i].re;
        for r in 0..N {
            vectors.0[r][k] = v.0[r][i];
        }
    }
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm<const N: usize>(a: &CMatrix<N>) -> f64 {
    let mut s = 0.0;
    for r in 0..N {
        for c in 0..N {
            if r != c {
                s += a.0[r][c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<const N: usize>(a: &mut CMatrix<N>, v: &mut CMatrix<N>, p: usize, q: usize) {
    let apq = a.0[p][q];
    let modulus = apq.norm();
    if modulus == 0.0 {
        return;
    }
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    // Skip pivots that can no longer move the diagonal.
    if modulus < f64::EPSILON * 1e-3 * (app.abs().min(aqq.abs())) {
        a.0[p][q] = ZERO;
        a.0[q][p] = ZERO;
        return;
    }
    // e^{-iφ} with a_pq = |a_pq| e^{iφ}.
    let phase = (apq / modulus).conj();

    let theta = (aqq - app) / (2.0 * modulus);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag-phase · real rotation, acting on coordinates p and q:
    //   U_pp = c, U_pq = s, U_qp = -s e^{-iφ}, U_qq = c e^{-iφ}.
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = phase * (-s);
    let uqq = phase * c;

    // A ← A U (columns p, q).
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * upp + akq * uqp;
        a.0[k][q] = akp * upq + akq * uqq;
    }
    // A ← U† A (rows p, q).
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = upp.conj() * apk + uqp.conj() * aqk;
        a.0[q][k] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p] = Complex64::new(app - t * modulus, 0.0);
    a.0[q][q] = Complex64::new(aqq + t * modulus, 0.0);

    // V ← V U.
    for k in 0..N {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * upp + vkq * uqp;
        v.0[k][q] = vkp * upq + vkq * uqq;
    }
}
