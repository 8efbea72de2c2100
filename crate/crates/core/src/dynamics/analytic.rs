//! Closed-form solutions of the decay dynamics for the named initial states.
//!
//! Populations are written with `expm1` so that short times keep full
//! relative precision, and the ground population is fixed by trace closure.

use crate::error::{Error, Result};
use crate::family::{set_symmetric, MixedFamilyParams};
use crate::linalg::Matrix6;
use crate::state::{row_of, DensityMatrix, NORM_TOLERANCE};

use super::DecayRates;

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime {
            name: "t",
            value: t,
        })
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

/// `e^{-rate·t}`.
fn decay(rate: f64, t: f64) -> f64 {
    (-rate * t).exp()
}

/// `1 - e^{-rate·t}`.
fn grown(rate: f64, t: f64) -> f64 {
    -(-rate * t).exp_m1()
}

fn close_trace(m: &mut Matrix6) {
    let others: f64 = (0..5).map(|i| m[(i, i)].re).sum();
    m[(5, 5)].re = 1.0 - others;
}

/// State at time `t` for the initial state `α|0,0⟩ + β|1,1⟩`.
///
/// Only `|1,1⟩`, `|1,0⟩`, `|0,1⟩`, `|0,0⟩` are ever populated, so `γ₂` plays
/// no role. A negative `beta` gives the `-` sign of the coherence.
pub fn evolve_phi1_analytic(
    alpha: f64,
    beta: f64,
    rates: &DecayRates,
    t: f64,
) -> Result<DensityMatrix> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    let (g, g1) = (rates.gamma(), rates.gamma1());
    let b2 = beta * beta;
    let mut m = Matrix6::zeros();
    m[(row_of(1, 1), row_of(1, 1))].re = b2 * decay(g + g1, t);
    set_symmetric(&mut m, (1, 1), (0, 0), alpha * beta * decay(0.5 * (g + g1), t));
    m[(row_of(1, 0), row_of(1, 0))].re = b2 * decay(g, t) * grown(g1, t);
    m[(row_of(0, 1), row_of(0, 1))].re = b2 * decay(g1, t) * grown(g, t);
    m[(row_of(0, 0), row_of(0, 0))].re = alpha * alpha + b2 * grown(g, t) * grown(g1, t);
    Ok(DensityMatrix::from_trusted(m))
}

/// State at time `t` for the initial state `α|0,1⟩ + β|1,2⟩`.
pub fn evolve_phi2_analytic(
    alpha: f64,
    beta: f64,
    rates: &DecayRates,
    t: f64,
) -> Result<DensityMatrix> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    let (g, g1, g2) = (rates.gamma(), rates.gamma1(), rates.gamma2());
    let b2 = beta * beta;
    let mut m = Matrix6::zeros();
    m[(row_of(1, 2), row_of(1, 2))].re = b2 * decay(g + g2, t);
    set_symmetric(
        &mut m,
        (1, 2),
        (0, 1),
        alpha * beta * decay(0.5 * (g + g1 + g2), t),
    );
    m[(row_of(1, 0), row_of(1, 0))].re = b2 * decay(g, t) * grown(g2, t);
    m[(row_of(0, 2), row_of(0, 2))].re = b2 * decay(g2, t) * grown(g, t);
    m[(row_of(0, 1), row_of(0, 1))].re = alpha * alpha * decay(g1, t);
    close_trace(&mut m);
    Ok(DensityMatrix::from_trusted(m))
}

/// State at time `t` for the two-parameter mixed family.
pub fn evolve_mixed_analytic(
    params: &MixedFamilyParams,
    rates: &DecayRates,
    t: f64,
) -> Result<DensityMatrix> {
    check_time(t)?;
    let (a, b, c) = (params.a(), params.b(), params.c());
    let (g, g1, g2) = (rates.gamma(), rates.gamma1(), rates.gamma2());
    let mut m = Matrix6::zeros();
    m[(row_of(1, 2), row_of(1, 2))].re = a * decay(g + g2, t);
    m[(row_of(1, 1), row_of(1, 1))].re = b * decay(g + g1, t);
    m[(row_of(1, 0), row_of(1, 0))].re =
        0.5 * decay(g, t) * (1.0 - 2.0 * (b * decay(g1, t) + a * decay(g2, t)));
    set_symmetric(&mut m, (1, 0), (0, 1), 0.5 * (b - c) * decay(0.5 * (g + g1), t));
    m[(row_of(0, 2), row_of(0, 2))].re = a * decay(g2, t) * (1.0 + grown(g, t));
    m[(row_of(0, 1), row_of(0, 1))].re =
        decay(g1, t) * (0.5 * (b + c) + b * grown(g, t));
    close_trace(&mut m);
    Ok(DensityMatrix::from_trusted(m))
}

/// The partial-transpose block of the first family pairs `|1,0⟩` and
/// `|0,1⟩` (populations `p`, `q`) with the coherence `c` of `|1,1⟩⟨0,0|`.
/// With `x = e^{-γt}`, `y = e^{-γ₁t}` both `|c|² ± pq` share the factor `β²xy`.
struct Phi1Block {
    /// `α² - β²(1-x)(1-y)`, sign of the entanglement.
    excess: f64,
    /// `α² + β²(1-x)(1-y)`.
    total: f64,
}

fn phi1_block(alpha: f64, beta: f64, rates: &DecayRates, t: f64) -> Phi1Block {
    let b2 = beta * beta;
    let x = decay(rates.gamma(), t);
    let y = decay(rates.gamma1(), t);
    let grown_both = grown(rates.gamma(), t) * grown(rates.gamma1(), t);
    // α² - β²(1-x)(1-y) = (α-β)(α+β) + β²(x + y(1-x)), exact when α = β.
    let excess = (alpha.abs() - beta.abs()) * (alpha.abs() + beta.abs())
        + b2 * (x + y * grown(rates.gamma(), t));
    Phi1Block {
        excess,
        total: alpha * alpha + b2 * grown_both,
    }
}

/// Negativity of the first family in closed form:
///
/// ```text
/// N = max{0, e^{-(γ+γ₁)t} (β²(2 - e^{γt} - e^{γ₁t})
///        + √(β⁴(e^{2γt} + e^{2γ₁t}) + (4β² - 6β⁴) e^{(γ+γ₁)t}))}
/// ```
///
/// evaluated in the rationalized form `4(|c|² - pq)/(√((p-q)² + 4|c|²) + p + q)`
/// of the 2×2 block with populations `p`, `q` and coherence `c`, which
/// avoids both overflow and cancellation at large `t`.
pub fn negativity_phi1_closed(beta: f64, rates: &DecayRates, t: f64) -> Result<f64> {
    if !(beta.is_finite() && (0.0..=1.0).contains(&beta)) {
        return Err(Error::InvalidAmplitudes {
            alpha: f64::NAN,
            beta,
        });
    }
    let alpha = (1.0 - beta * beta).sqrt();
    negativity_phi1_closed_for(alpha, beta, rates, t)
}

/// [`negativity_phi1_closed`] with both amplitudes given.
pub fn negativity_phi1_closed_for(alpha: f64, beta: f64, rates: &DecayRates, t: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    let b2 = beta * beta;
    let x = decay(rates.gamma(), t);
    let y = decay(rates.gamma1(), t);
    let p = b2 * x * grown(rates.gamma1(), t);
    let q = b2 * y * grown(rates.gamma(), t);
    let common = b2 * x * y;
    let block = phi1_block(alpha, beta, rates, t);
    if common == 0.0 || block.excess <= 0.0 {
        return Ok(0.0);
    }
    let coh2 = alpha * alpha * common;
    let root = ((p - q) * (p - q) + 4.0 * coh2).sqrt();
    Ok(4.0 * common * block.excess / (root + p + q))
}

/// Scale-free entanglement witness of the first family,
/// `(|c|² - pq)/(|c|² + pq)` for the partial-transpose block; positive
/// exactly when the negativity is.
pub fn phi1_closed_witness(alpha: f64, beta: f64, rates: &DecayRates, t: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    if alpha == 0.0 || beta == 0.0 {
        return Ok(0.0);
    }
    let block = phi1_block(alpha, beta, rates, t);
    if block.total == 0.0 {
        return Ok(0.0);
    }
    Ok(block.excess / block.total)
}

/// Negativity of `α|0,1⟩ ± β|1,2⟩`:
///
/// ```text
/// N = e^{-γ₂t} (β²(e^{-γt} - 1) + √(β⁴(1 - e^{-γt})² + 4α²β² e^{-(γ+γ₁-γ₂)t}))
/// ```
///
/// evaluated as `4|c|²/(√(p² + 4|c|²) + p)`.
pub fn negativity_phi2_closed(alpha: f64, beta: f64, rates: &DecayRates, t: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    let (g, g1, g2) = (rates.gamma(), rates.gamma1(), rates.gamma2());
    let p = beta * beta * decay(g2, t) * grown(g, t);
    let coh2 = alpha * alpha * beta * beta * decay(g + g1 + g2, t);
    if coh2 == 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * coh2 / ((p * p + 4.0 * coh2).sqrt() + p))
}

/// Witness for `α|0,1⟩ ± β|1,2⟩`. The partner population `|1,1⟩` of the
/// coherent block is never fed, so the block stays indefinite while the
/// coherence lives.
pub fn phi2_closed_witness(alpha: f64, beta: f64, rates: &DecayRates, t: f64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_time(t)?;
    let coh2 = alpha * alpha * beta * beta * decay(rates.gamma() + rates.gamma1() + rates.gamma2(), t);
    Ok(if coh2 > 0.0 { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn rates(g: f64, g1: f64, g2: f64) -> DecayRates {
        DecayRates::new(g, g1, g2).unwrap()
    }

    /// Negativity formula of the first family exactly as printed.
    fn phi1_printed(beta: f64, r: &DecayRates, t: f64) -> f64 {
        let (g, g1) = (r.gamma(), r.gamma1());
        let b2 = beta * beta;
        let b4 = b2 * b2;
        let inner = b2 * (2.0 - (g * t).exp() - (g1 * t).exp())
            + (b4 * ((2.0 * g * t).exp() + (2.0 * g1 * t).exp())
                + (4.0 * b2 - 6.0 * b4) * ((g + g1) * t).exp())
            .sqrt();
        (-(g + g1) * t).exp() * inner.max(0.0)
    }

    fn phi2_printed(alpha: f64, beta: f64, r: &DecayRates, t: f64) -> f64 {
        let (g, g1, g2) = (r.gamma(), r.gamma1(), r.gamma2());
        let b2 = beta * beta;
        (-g2 * t).exp()
            * (b2 * ((-g * t).exp() - 1.0)
                + (b2 * b2 * ((-g * t).exp() - 1.0).powi(2)
                    + 4.0 * alpha * alpha * b2 * (-(g + g1 - g2) * t).exp())
                .sqrt())
    }

    #[test]
    fn phi1_initial_elements() {
        let rho = evolve_phi1_analytic(0.6, 0.8, &rates(1.0, 1.0, 1.0), 0.0).unwrap();
        assert_abs_diff_eq!(rho.get(1, 1).re, 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(1, 5).re, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(5, 1).re, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(5, 5).re, 0.36, epsilon = 1e-15);
    }

    #[test]
    fn phi1_ground_population_matches_printed_form() {
        let r = rates(0.7, 1.9, 0.0);
        let beta: f64 = 0.9;
        let alpha = (1.0 - beta * beta).sqrt();
        for t in [0.0, 0.1, 1.0, 4.0] {
            let rho = evolve_phi1_analytic(alpha, beta, &r, t).unwrap();
            let printed = 1.0
                - beta * beta
                    * ((-0.7 * t).exp() + (-1.9 * t).exp() - (-(0.7 + 1.9) * t).exp());
            assert_abs_diff_eq!(rho.get(5, 5).re, printed, epsilon = 1e-15);
            assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn phi1_long_time_limit() {
        let rho = evolve_phi1_analytic(0.6, 0.8, &rates(1.0, 2.0, 0.5), 60.0).unwrap();
        assert_abs_diff_eq!(rho.get(5, 5).re, 1.0, epsilon = 1e-20);
    }

    #[test]
    fn phi2_initial_elements() {
        let rho = evolve_phi2_analytic(0.6, 0.8, &rates(1.0, 0.3, 2.0), 0.0).unwrap();
        assert_abs_diff_eq!(rho.get(0, 0).re, 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(0, 4).re, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(4, 4).re, 0.36, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(5, 5).re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phi2_ground_population_matches_corrected_printed_form() {
        // 1 - α² e^{-γ₁t} - β²(e^{-γt} + e^{-γ₂t} - e^{-(γ+γ₂)t})
        let (g, g1, g2) = (0.4, 1.2, 2.5);
        let (alpha, beta) = (0.6, 0.8);
        for t in [0.0, 0.3, 2.0] {
            let rho = evolve_phi2_analytic(alpha, beta, &rates(g, g1, g2), t).unwrap();
            let want = 1.0
                - alpha * alpha * (-g1 * t).exp()
                - beta * beta * ((-g * t).exp() + (-g2 * t).exp() - (-(g + g2) * t).exp());
            assert_abs_diff_eq!(rho.get(5, 5).re, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn phi2_strands_population_without_gamma1() {
        let rho = evolve_phi2_analytic(0.6, 0.8, &rates(1.0, 0.0, 1.0), 60.0).unwrap();
        assert_abs_diff_eq!(rho.get(4, 4).re, 0.36, epsilon = 1e-15);
        assert!(rho.get(5, 5).re < 1.0);
    }

    #[test]
    fn mixed_initial_elements_match_projector_sum() {
        let p = MixedFamilyParams::from_bc(0.02, 0.2).unwrap();
        let rho = evolve_mixed_analytic(&p, &rates(1.0, 1.0, 1.0), 0.0).unwrap();
        assert!(rho.matrix().max_abs_diff(p.density().matrix()) < 1e-15);
        let (a, b, c) = (p.a(), p.b(), p.c());
        let diag = [a, b, 0.5 * (b + c), a, 0.5 * (b + c), b];
        for (i, d) in diag.iter().enumerate() {
            assert_abs_diff_eq!(rho.get(i, i).re, *d, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(rho.get(2, 4).re, 0.5 * (b - c), epsilon = 1e-15);
    }

    #[test]
    fn mixed_ground_population_matches_printed_form() {
        let p = MixedFamilyParams::from_bc(0.06, 0.3).unwrap();
        let (a, b, c) = (p.a(), p.b(), p.c());
        let (g, g1, g2) = (0.9, 0.4, 1.7);
        for t in [0.0, 0.5, 1.5, 6.0] {
            let rho = evolve_mixed_analytic(&p, &rates(g, g1, g2), t).unwrap();
            let e = |x: f64| (x * t).exp();
            let printed = 1.0
                + 0.5
                    * (-(g + g1 + g2) * t).exp()
                    * (e(g1) * (2.0 * a - 4.0 * a * e(g))
                        + e(g2) * (2.0 * b + (-3.0 * b - c) * e(g) - e(g1)));
            assert_abs_diff_eq!(rho.get(5, 5).re, printed, epsilon = 1e-14);
        }
    }

    #[test]
    fn mixed_equal_weights_have_no_coherence() {
        let p = MixedFamilyParams::from_bc(0.1, 0.1).unwrap();
        for t in [0.0, 0.5, 3.0] {
            let rho = evolve_mixed_analytic(&p, &rates(1.0, 0.5, 2.0), t).unwrap();
            assert_eq!(rho.get(2, 4).re, 0.0);
        }
    }

    #[test]
    fn phi1_closed_form_values() {
        let r = rates(1.0, 1.0, 1.0);
        assert_abs_diff_eq!(negativity_phi1_closed(0.8, &r, 0.0).unwrap(), 0.96, epsilon = 1e-15);
        assert_abs_diff_eq!(
            negativity_phi1_closed(FRAC_1_SQRT_2, &r, 1.0).unwrap(),
            (-2.0f64).exp(),
            epsilon = 1e-15
        );
        assert_eq!(negativity_phi1_closed(0.8, &r, 2.0).unwrap(), 0.0);
        assert!(negativity_phi1_closed(1.2, &r, 0.0).is_err());
        assert!(negativity_phi1_closed(0.5, &r, -1.0).is_err());
    }

    #[test]
    fn phi1_matches_printed_formula() {
        for (beta, g, g1) in [(0.3, 1.0, 1.0), (0.8, 0.5, 2.0), (0.95, 1.3, 0.2), (0.7, 1.0, 3.0)] {
            let r = rates(g, g1, 0.0);
            for t in [0.0, 0.05, 0.4, 1.0, 2.5, 5.0] {
                let ours = negativity_phi1_closed(beta, &r, t).unwrap();
                let printed = phi1_printed(beta, &r, t);
                assert_abs_diff_eq!(ours, printed, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phi1_zero_crossing_at_ln4() {
        // With γ = γ₁ = 1 the block determinant vanishes at e^{-t} = 1 - α/β.
        let r = rates(1.0, 1.0, 1.0);
        let t_star = 2.0 * LN_2;
        let w = phi1_closed_witness(0.6, 0.8, &r, t_star).unwrap();
        assert!(w.abs() < 1e-15, "{w}");
        assert!(phi1_closed_witness(0.6, 0.8, &r, t_star - 1e-6).unwrap() > 0.0);
        assert!(phi1_closed_witness(0.6, 0.8, &r, t_star + 1e-6).unwrap() < 0.0);
    }

    #[test]
    fn maximal_phi1_witness_stays_positive() {
        let r = rates(1.0, 1.0, 1.0);
        let h = FRAC_1_SQRT_2;
        for t in [0.0, 10.0, 50.0, 200.0] {
            assert!(phi1_closed_witness(h, h, &r, t).unwrap() >= 0.0);
        }
        assert!(phi1_closed_witness(h, h, &r, 20.0).unwrap() > 0.0);
    }

    #[test]
    fn phi2_closed_form_values() {
        let h = FRAC_1_SQRT_2;
        let r = rates(1.0, 0.0, 1.0);
        assert_abs_diff_eq!(negativity_phi2_closed(h, h, &r, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(negativity_phi2_closed(1.0, 0.0, &r, 1.0).unwrap(), 0.0);
        assert_eq!(negativity_phi2_closed(0.0, 1.0, &r, 1.0).unwrap(), 0.0);
        for (a, b, g, g1, g2) in [(h, h, 1.0, 0.0, 1.0), (0.6, 0.8, 0.3, 1.5, 0.7), (0.9, 0.3f64.hypot(0.0), 1.0, 1.0, 1.0)] {
            let b = if (a * a + b * b - 1.0f64).abs() > 1e-12 { (1.0 - a * a).sqrt() } else { b };
            let r = rates(g, g1, g2);
            for t in [0.0, 0.2, 1.0, 3.0, 8.0] {
                assert_abs_diff_eq!(
                    negativity_phi2_closed(a, b, &r, t).unwrap(),
                    phi2_printed(a, b, &r, t),
                    epsilon = 1e-12
                );
            }
        }
    }
}
