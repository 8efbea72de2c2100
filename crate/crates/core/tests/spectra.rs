mod common;

use common::{bisection_eigenvalues, max_sorted_diff, reduced_determinant};
use esd_core::family::{MixedFamilyParams, StateFamily};
use esd_core::linalg::{hermitian_eigenvalues, Matrix6};
use esd_core::random::{random_local_unitary, random_mixed_state, random_pure_state};
use esd_core::schmidt::schmidt_decompose;
use esd_core::state::{
    f_invariant, is_separable, negative_pt_eigenvalue_count, negativity, partial_transpose,
    pt_eigenvalues, pt_spectrum_pure, pure_to_density, DensityMatrix, PureState, Subsystem,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_hermitian(r: &mut ChaCha8Rng) -> Matrix6 {
    let g = Matrix6::from_fn(|_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    (g + g.adjoint()).scale(0.5)
}

#[test]
fn jacobi_matches_inertia_bisection() {
    let mut r = rng(11);
    for _ in 0..200 {
        let a = random_hermitian(&mut r);
        let jac = hermitian_eigenvalues(&a).unwrap();
        let oracle = bisection_eigenvalues(&a);
        assert!(max_sorted_diff(&jac, &oracle) < 1e-10);
        let sum: f64 = jac.iter().sum();
        assert!((sum - a.trace().re).abs() < 1e-10);
        assert!(jac.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn jacobi_handles_repeated_eigenvalues() {
    let mut r = rng(12);
    let u = random_local_unitary(&mut r);
    let d = Matrix6::from_diagonal(&[0.5, 0.5, 0.5, -0.25, -0.25, 1.0]);
    let a = u * d * u.adjoint();
    let vals = hermitian_eigenvalues(&a).unwrap();
    assert!(max_sorted_diff(&vals, &[-0.25, -0.25, 0.5, 0.5, 0.5, 1.0]) < 1e-12);
}

#[test]
fn pure_pt_spectrum_closed_form() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let psi = random_pure_state(&mut r);
        let rho = pure_to_density(&psi);
        let numeric = pt_eigenvalues(&rho, Subsystem::Qutrit).unwrap();
        assert!(max_sorted_diff(&numeric, &pt_spectrum_pure(&psi)) < 1e-10);
    }
}

#[test]
fn maximally_entangled_pt_spectrum() {
    let psi = PureState::two_term(FRAC_1_SQRT_2, (0, 0), FRAC_1_SQRT_2, (1, 1)).unwrap();
    let want = [-0.5, 0.0, 0.0, 0.5, 0.5, 0.5];
    assert!(max_sorted_diff(&pt_spectrum_pure(&psi), &want) < 1e-15);
    let numeric = pt_eigenvalues(&pure_to_density(&psi), Subsystem::Qutrit).unwrap();
    assert!(max_sorted_diff(&numeric, &want) < 1e-12);
}

#[test]
fn product_state_pt_spectrum() {
    let psi = PureState::basis(1, 2).unwrap();
    assert!(max_sorted_diff(&pt_spectrum_pure(&psi), &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]) < 1e-15);
}

#[test]
fn either_side_of_the_partial_transpose() {
    let mut r = rng(2);
    for i in 0..1000 {
        let rho = if i % 2 == 0 {
            random_mixed_state(&mut r)
        } else {
            pure_to_density(&random_pure_state(&mut r))
        };
        let a = pt_eigenvalues(&rho, Subsystem::Qutrit).unwrap();
        let b = pt_eigenvalues(&rho, Subsystem::Qubit).unwrap();
        assert!(max_sorted_diff(&a, &b) < 1e-10);
    }
}

#[test]
fn partial_transpose_involution_and_trace() {
    let mut r = rng(3);
    for _ in 0..200 {
        let rho = random_mixed_state(&mut r);
        for side in [Subsystem::Qubit, Subsystem::Qutrit] {
            let pt = partial_transpose(rho.matrix(), side);
            assert!(partial_transpose(&pt, side).max_abs_diff(rho.matrix()) <= 1e-14);
            assert!(pt.hermiticity_defect() < 1e-14);
            assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-14);
        }
    }
}

#[test]
fn diagonal_state_is_its_own_partial_transpose() {
    let d = Matrix6::from_diagonal(&[0.1, 0.2, 0.05, 0.3, 0.15, 0.2]);
    for side in [Subsystem::Qubit, Subsystem::Qutrit] {
        assert_eq!(partial_transpose(&d, side), d);
    }
}

#[test]
fn qutrit_side_transposes_inside_blocks() {
    // ρ = |1,0⟩⟨0,2|: the qutrit-side transpose moves it to |1,2⟩⟨0,0|.
    let mut m = Matrix6::zeros();
    m[(2, 3)] = Complex64::new(0.0, 1.0);
    let pt = partial_transpose(&m, Subsystem::Qutrit);
    assert_eq!(pt[(0, 5)], Complex64::new(0.0, 1.0));
    assert_eq!(pt[(2, 3)], Complex64::new(0.0, 0.0));
    let pt = partial_transpose(&m, Subsystem::Qubit);
    assert_eq!(pt[(5, 0)], Complex64::new(0.0, 1.0));
}

#[test]
fn f_invariant_against_reduced_determinant() {
    let mut r = rng(4);
    for _ in 0..1000 {
        let psi = random_pure_state(&mut r);
        let f = f_invariant(&psi);
        assert!((f - reduced_determinant(psi.amplitudes())).abs() < 1e-14);
        assert!((-1e-15..=0.25 + 1e-12).contains(&f));
        let n = negativity(&pure_to_density(&psi)).unwrap();
        assert!((n - 2.0 * f.sqrt()).abs() < 1e-10);
    }
}

#[test]
fn f_invariant_examples() {
    let h = FRAC_1_SQRT_2;
    let psi = PureState::two_term(h, (0, 0), h, (1, 1)).unwrap();
    assert!((f_invariant(&psi) - 0.25).abs() < 1e-15);
    assert_eq!(f_invariant(&PureState::basis(0, 2).unwrap()), 0.0);
}

#[test]
fn negativity_bounds_and_counts() {
    let mut r = rng(5);
    for _ in 0..1000 {
        let psi = random_pure_state(&mut r);
        let rho = pure_to_density(&psi);
        let n = negativity(&rho).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&n));
        assert!(negative_pt_eigenvalue_count(&rho).unwrap() <= 1);

        let mixed = random_mixed_state(&mut r);
        let n = negativity(&mixed).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&n));
        assert!(negative_pt_eigenvalue_count(&mixed).unwrap() <= 2);
    }
}

#[test]
fn local_unitary_invariance() {
    let mut r = rng(6);
    for i in 0..200 {
        let rho = if i % 2 == 0 {
            pure_to_density(&random_pure_state(&mut r))
        } else {
            random_mixed_state(&mut r)
        };
        let u = random_local_unitary(&mut r);
        let rotated = rho.conjugate_by(&u).unwrap();
        let d = (negativity(&rotated).unwrap() - negativity(&rho).unwrap()).abs();
        assert!(d < 1e-10, "{d}");
    }
}

#[test]
fn schmidt_properties() {
    let mut r = rng(7);
    for _ in 0..500 {
        let psi = random_pure_state(&mut r);
        let s = schmidt_decompose(&psi);
        assert!((0.0..=FRAC_1_SQRT_2).contains(&s.alpha));
        let f = f_invariant(&psi);
        assert!((f - s.alpha * s.alpha * (1.0 - s.alpha * s.alpha)).abs() < 1e-10);

        // Smaller eigenvalue of the 2×2 reduced state, in closed form.
        let ra = psi.reduced_qubit();
        let (p, q, c) = (ra[(0, 0)].re, ra[(1, 1)].re, ra[(0, 1)].norm());
        let small = 0.5 * (p + q - ((p - q).powi(2) + 4.0 * c * c).sqrt());
        assert!((s.alpha * s.alpha - small).abs() < 1e-10);

        assert!(s.qubit_rotation.unitarity_defect() < 1e-10);
        assert!(s.qutrit_rotation.unitarity_defect() < 1e-10);
        let rebuilt = s.reconstruct();
        let overlap: Complex64 = psi
            .amplitudes()
            .iter()
            .zip(&rebuilt)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = overlap / overlap.norm();
        let err = psi
            .amplitudes()
            .iter()
            .zip(&rebuilt)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}

#[test]
fn schmidt_of_locally_equivalent_families() {
    for f in [
        StateFamily::phi1(0.6, 0.8).unwrap(),
        StateFamily::phi2_plus(0.6, 0.8).unwrap(),
        StateFamily::phi2_minus(0.6, 0.8).unwrap(),
        StateFamily::phi2_prime(0.6, 0.8).unwrap(),
        StateFamily::phi3_plus(0.6, 0.8).unwrap(),
        StateFamily::phi3_minus(0.6, 0.8).unwrap(),
    ] {
        let s = schmidt_decompose(&f.pure_state().unwrap());
        assert!((s.alpha - 0.6).abs() < 1e-12, "{}", f.tag());
        let n = negativity(&f.initial_state()).unwrap();
        assert!((n - 0.96).abs() < 1e-12, "{}", f.tag());
    }
}

#[test]
fn phi1_negativity_is_two_alpha_beta() {
    let mut r = rng(8);
    for _ in 0..100 {
        let theta: f64 = r.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let (alpha, beta) = (theta.cos(), theta.sin());
        let rho = pure_to_density(&PureState::two_term(alpha, (0, 0), beta, (1, 1)).unwrap());
        assert!((negativity(&rho).unwrap() - 2.0 * alpha * beta).abs() < 1e-12);
    }
}

#[test]
fn mixed_family_negativity_at_start() {
    // The only indefinite block pairs |1,1⟩ and |0,0⟩ with weight b and
    // coherence (b-c)/2, so N = max(0, c - 3b).
    for (b, c) in [(0.02, 0.2), (0.02, 0.5), (0.06, 0.4), (0.1, 0.2), (0.0, 0.3)] {
        let rho = MixedFamilyParams::from_bc(b, c).unwrap().density();
        let want = (c - 3.0 * b).max(0.0);
        assert!((negativity(&rho).unwrap() - want).abs() < 1e-12, "b={b} c={c}");
    }
    let rho = MixedFamilyParams::from_bc(0.02, 0.5).unwrap().density();
    assert!(!is_separable(&rho).unwrap());
    assert!(is_separable(&DensityMatrix::maximally_mixed()).unwrap());
}

#[test]
fn maximally_entangled_density_elements() {
    let h = FRAC_1_SQRT_2;
    let rho = pure_to_density(&PureState::two_term(h, (0, 0), h, (1, 1)).unwrap());
    for (r, c) in [(1, 1), (5, 5), (1, 5), (5, 1)] {
        assert!((rho.get(r, c).re - 0.5).abs() < 1e-15);
    }
    assert!(!is_separable(&rho).unwrap());
    let vals = rho.eigenvalues().unwrap();
    assert!(max_sorted_diff(&vals, &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]) < 1e-12);
}
