#![allow(dead_code)]

use esd_core::linalg::CMatrix;
use num_complex::Complex64;

/// Number of eigenvalues of the Hermitian `a` below `x`, from the signs of
/// the pivots of an LDLᴴ factorization of `a - x·I` (Sylvester's law of
/// inertia).
pub fn count_below<const N: usize>(a: &CMatrix<N>, x: f64) -> usize {
    let mut m = a.0;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= Complex64::new(x, 0.0);
    }
    let scale = a.frobenius_norm().max(1.0);
    let mut count = 0;
    for k in 0..N {
        let mut d = m[k][k].re;
        if d.abs() < 1e-300 * scale {
            d = -1e-300 * scale;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in k + 1..N {
            let l = m[i][k] / d;
            for j in k + 1..N {
                let update = l * m[k][j];
                m[i][j] -= update;
            }
        }
    }
    count
}

/// Ascending eigenvalues by bisection on the inertia count.
pub fn bisection_eigenvalues<const N: usize>(a: &CMatrix<N>) -> [f64; N] {
    let bound = (0..N)
        .map(|r| (0..N).map(|c| a[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    std::array::from_fn(|k| {
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(a, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

pub fn max_sorted_diff(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `det ρ_A` for the reduced qubit state, written from the amplitudes
/// `a[3i + j]` as a sum of 2×2 minors.
pub fn reduced_determinant(a: &[Complex64; 6]) -> f64 {
    let mut f = 0.0;
    for j in 0..3 {
        for l in j + 1..3 {
            f += (a[j] * a[3 + l] - a[l] * a[3 + j]).norm_sqr();
        }
    }
    f
}
