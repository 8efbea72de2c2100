//! Self-check suite behind `esd validate`.

use std::f64::consts::FRAC_1_SQRT_2;

use esd_core::dynamics::{
    evolve_mixed_analytic, evolve_numeric_strided, evolve_phi1_analytic, evolve_phi2_analytic,
    negativity_phi1_closed_for, negativity_phi2_closed, DecayRates, Rk4,
};
use esd_core::esd::{scan_beta_boundary, scan_c_boundary, EsdOptions};
use esd_core::family::{MixedFamilyParams, StateFamily};
use esd_core::linalg::{hermitian_eigenvalues, Matrix6};
use esd_core::random::{random_local_unitary, random_mixed_state, random_pure_state};
use esd_core::state::{negativity, pt_eigenvalues, pt_spectrum_pure, DensityMatrix, Subsystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::fmt_num;

const SEED: u64 = 0x5eed_e5d0;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl Check {
    fn below(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        Check {
            name,
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            error: None,
        }
    }

    fn from_result(name: &'static str, tolerance: f64, r: anyhow::Result<f64>) -> Self {
        match r {
            Ok(e) => Check::below(name, e, tolerance),
            Err(e) => Check {
                name,
                passed: false,
                max_error: f64::INFINITY,
                tolerance,
                error: Some(format!("{e:#}")),
            },
        }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {} max_error={} tolerance={}",
            self.name,
            fmt_num(self.max_error),
            fmt_num(self.tolerance)
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error=\"{e}\""));
        }
        s
    }
}

fn rate_sets() -> Vec<DecayRates> {
    [(1.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 2.0, 0.5), (0.4, 1.3, 2.0)]
        .iter()
        .map(|&(a, b, c)| DecayRates::new(a, b, c).expect("fixed rates are valid"))
        .collect()
}

fn analytic_state(family: &StateFamily, rates: &DecayRates, t: f64) -> esd_core::Result<DensityMatrix> {
    match family {
        StateFamily::Phi1 { alpha, beta } => evolve_phi1_analytic(*alpha, *beta, rates, t),
        StateFamily::Phi2Plus { alpha, beta } => evolve_phi2_analytic(*alpha, *beta, rates, t),
        StateFamily::Phi2Minus { alpha, beta } => evolve_phi2_analytic(*alpha, -*beta, rates, t),
        StateFamily::MixedAC(p) => evolve_mixed_analytic(p, rates, t),
        other => unreachable!("no analytic solution for {}", other.tag()),
    }
}

/// Largest entrywise gap between the integrated and analytic states on
/// `[0, 5]`.
fn analytic_numeric_agreement(dt: f64) -> anyhow::Result<f64> {
    let families = [
        StateFamily::phi1(0.6, 0.8)?,
        StateFamily::phi1(FRAC_1_SQRT_2, FRAC_1_SQRT_2)?,
        StateFamily::phi2_plus(0.6, 0.8)?,
        StateFamily::phi2_minus(FRAC_1_SQRT_2, FRAC_1_SQRT_2)?,
        StateFamily::mixed(0.02, 0.2)?,
        StateFamily::mixed(0.06, 0.4)?,
    ];
    let mut worst: f64 = 0.0;
    for rates in rate_sets() {
        for f in &families {
            let traj = evolve_numeric_strided(&f.initial_state(), &rates, 5.0, dt, 50)?;
            for (t, rho) in traj.times.iter().zip(&traj.states) {
                let exact = analytic_state(f, &rates, *t)?;
                worst = worst.max(rho.matrix().max_abs_diff(exact.matrix()));
            }
        }
    }
    Ok(worst)
}

fn closed_form_negativity(rng: &mut ChaCha8Rng) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let theta = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let (alpha, beta) = (theta.cos(), theta.sin());
        let rates = DecayRates::new(
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..3.0),
        )?;
        let t = rng.random_range(0.0..6.0);
        let n1 = negativity(&evolve_phi1_analytic(alpha, beta, &rates, t)?)?;
        worst = worst.max((n1 - negativity_phi1_closed_for(alpha, beta, &rates, t)?).abs());
        let n2 = negativity(&evolve_phi2_analytic(alpha, beta, &rates, t)?)?;
        worst = worst.max((n2 - negativity_phi2_closed(alpha, beta, &rates, t)?).abs());
    }
    Ok(worst)
}

fn pt_spectrum_oracle(rng: &mut ChaCha8Rng) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let psi = random_pure_state(rng);
        let mut found = pt_eigenvalues(&DensityMatrix::from_pure(&psi), Subsystem::Qutrit)?;
        found.sort_by(f64::total_cmp);
        for (a, b) in found.iter().zip(pt_spectrum_pure(&psi)) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn local_unitary_invariance(rng: &mut ChaCha8Rng) -> anyhow::Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let rho = if i % 2 == 0 {
            DensityMatrix::from_pure(&random_pure_state(rng))
        } else {
            random_mixed_state(rng)
        };
        let u = random_local_unitary(rng);
        let n = negativity(&rho)?;
        worst = worst.max((negativity(&rho.conjugate_by(&u)?)? - n).abs());
    }
    Ok(worst)
}

/// Defects measured along raw integrator output, without re-validation.
struct Structural {
    trace: f64,
    hermiticity: f64,
    min_eigenvalue: f64,
}

fn structural(dt: f64, rng: &mut ChaCha8Rng) -> anyhow::Result<Structural> {
    let mut out = Structural {
        trace: 0.0,
        hermiticity: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    let mut starts: Vec<DensityMatrix> = (0..4).map(|_| random_mixed_state(rng)).collect();
    starts.extend((0..4).map(|_| DensityMatrix::from_pure(&random_pure_state(rng))));
    starts.push(StateFamily::phi1(0.6, 0.8)?.initial_state());
    for rates in rate_sets() {
        let rk = Rk4::new(rates, dt)?;
        for rho in &starts {
            let mut m: Matrix6 = *rho.matrix();
            for _ in 0..50 {
                m = rk.advance(&m, 0.2);
                out.trace = out.trace.max((m.trace().re - 1.0).abs().max(m.trace().im.abs()));
                out.hermiticity = out.hermiticity.max(m.hermiticity_defect());
                let herm = (m + m.adjoint()).scale(0.5);
                let lo = hermitian_eigenvalues(&herm)?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                out.min_eigenvalue = out.min_eigenvalue.min(lo);
            }
        }
    }
    Ok(out)
}

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                stop
            } else {
                start + (stop - start) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn threshold_beta() -> anyhow::Result<f64> {
    let rates = DecayRates::new(1.0, 1.0, 1.0)?;
    let scan = scan_beta_boundary(&rates, &grid(0.5, 0.99, 50), &EsdOptions::default())?;
    let found = scan.threshold.ok_or_else(|| anyhow::anyhow!("no threshold found"))?;
    Ok((found - FRAC_1_SQRT_2).abs())
}

fn threshold_c(b: f64, k: f64, expected: f64) -> anyhow::Result<f64> {
    MixedFamilyParams::from_bc(b, 0.0)?;
    let rates = DecayRates::with_interference(1.0, 1.0, k)?;
    let scan = scan_c_boundary(b, &rates, &grid(0.0, 1.0 - 3.0 * b, 41), &EsdOptions::default())?;
    let found = scan.threshold.ok_or_else(|| anyhow::anyhow!("no threshold found"))?;
    Ok((found - expected).abs())
}

/// Runs every check with integrator step `dt`.
pub fn run_validation(dt: f64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = vec![
        Check::from_result("analytic_numeric_agreement", 1e-7, analytic_numeric_agreement(dt)),
        Check::from_result("closed_form_negativity", 1e-8, closed_form_negativity(&mut rng)),
        Check::from_result("pt_spectrum_oracle", 1e-10, pt_spectrum_oracle(&mut rng)),
        Check::from_result("local_unitary_invariance", 1e-10, local_unitary_invariance(&mut rng)),
    ];
    match structural(dt, &mut rng) {
        Ok(s) => {
            checks.push(Check::below("trace_preservation", s.trace, 1e-9));
            checks.push(Check::below("hermiticity_preservation", s.hermiticity, 1e-10));
            checks.push(Check::below("positivity_preservation", (-s.min_eigenvalue).max(0.0), 1e-8));
        }
        Err(e) => {
            for (name, tol) in [
                ("trace_preservation", 1e-9),
                ("hermiticity_preservation", 1e-10),
                ("positivity_preservation", 1e-8),
            ] {
                checks.push(Check::from_result(name, tol, Err(anyhow::anyhow!("{e:#}"))));
            }
        }
    }
    checks.push(Check::from_result("threshold_beta", 1e-3, threshold_beta()));
    for (name, b, k, want) in [
        ("threshold_c_b0.02_k1", 0.02, 1.0, 0.302),
        ("threshold_c_b0.02_k0", 0.02, 0.0, 0.2775),
        ("threshold_c_b0.06_k1", 0.06, 1.0, 0.5493),
        ("threshold_c_b0.06_k0", 0.06, 0.0, 0.46295),
    ] {
        checks.push(Check::from_result(name, 5e-3, threshold_c(b, k, want)));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let c = Check::below("x", 1e-12, 1e-10);
        assert_eq!(c.line(), "PASS x max_error=1.00000000000e-12 tolerance=1.00000000000e-10");
        assert!(Check::from_result("y", 1.0, Err(anyhow::anyhow!("boom")))
            .line()
            .starts_with("FAIL y max_error=inf"));
    }
}
