//! Entanglement sudden death: death times, trajectory classification and
//! parameter sweeps for the phase boundary.
//!
//! Detection works on a signed entanglement margin rather than on the
//! negativity itself. The margin is positive exactly when the partial
//! transpose has a negative eigenvalue, and it does not shrink with the
//! overall decay of the state, so an exponentially small but nonzero
//! negativity is never mistaken for a finite-time zero. A trajectory is
//! dead once the margin falls to `-tol` or below.

use rayon::prelude::*;

use crate::dynamics::{
    evolve_mixed_analytic, negativity_phi1_closed_for, negativity_phi2_closed,
    phi1_closed_witness, phi2_closed_witness, CheckpointedEvolution, DecayRates, DEFAULT_DT,
    TRAJECTORY_TOLERANCES,
};
use crate::error::{Error, Result};
use crate::family::{MixedFamilyParams, StateFamily};
use crate::state::{negativity, npt_witness_of_matrix, DensityMatrix};

pub const DEFAULT_HORIZON: f64 = 50.0;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Coarse samples on `[0, t_max]` before bisection.
pub const COARSE_SAMPLES: usize = 512;
/// Width of the final bracket around a death time.
pub const DEATH_TIME_PRECISION: f64 = 1e-10;
/// Width of the final bracket around a scan threshold.
pub const THRESHOLD_PRECISION: f64 = 1e-4;
/// Bisection steps past the grid spacing, whatever the spacing.
pub const MIN_REFINEMENT_STEPS: usize = 8;
/// Spacing of stored checkpoints on the numeric path.
const CHECKPOINT_SPACING: f64 = 0.05;
/// Share of the horizon used for the log-linear decay fit.
const FIT_WINDOW: f64 = 0.1;
const FIT_SAMPLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EsdKind {
    SuddenDeath,
    Asymptotic,
    InitiallySeparable,
}

impl EsdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EsdKind::SuddenDeath => "sudden_death",
            EsdKind::Asymptotic => "asymptotic",
            EsdKind::InitiallySeparable => "initially_separable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EsdReport {
    SuddenDeath {
        death_time: f64,
        /// First sampled time after death at which the margin exceeded the
        /// tolerance again. Never expected for this model.
        revival: Option<f64>,
    },
    Asymptotic {
        /// Negativity at the horizon.
        residual_negativity: f64,
        /// Entanglement margin at the horizon.
        residual_margin: f64,
        /// Slope of `ln N` over the last tenth of the horizon, when the
        /// negativity there is resolvable.
        log_decay_rate: Option<f64>,
    },
    InitiallySeparable,
}

impl EsdReport {
    pub fn kind(&self) -> EsdKind {
        match self {
            EsdReport::SuddenDeath { .. } => EsdKind::SuddenDeath,
            EsdReport::Asymptotic { .. } => EsdKind::Asymptotic,
            EsdReport::InitiallySeparable => EsdKind::InitiallySeparable,
        }
    }

    pub fn death_time(&self) -> Option<f64> {
        match self {
            EsdReport::SuddenDeath { death_time, .. } => Some(*death_time),
            _ => None,
        }
    }

    pub fn residual_negativity(&self) -> Option<f64> {
        match self {
            EsdReport::Asymptotic {
                residual_negativity,
                ..
            } => Some(*residual_negativity),
            _ => None,
        }
    }
}

/// Which solution the classifier evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed form where one exists, numeric evolution otherwise.
    #[default]
    Auto,
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EsdOptions {
    pub horizon: f64,
    pub tol: f64,
    pub dt: f64,
    pub route: Route,
}

impl Default for EsdOptions {
    fn default() -> Self {
        EsdOptions {
            horizon: DEFAULT_HORIZON,
            tol: DEFAULT_TOLERANCE,
            dt: DEFAULT_DT,
            route: Route::Auto,
        }
    }
}

impl EsdOptions {
    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidTime {
                name: "horizon",
                value: self.horizon,
            });
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::InvalidTime {
                name: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

/// Outcome of sampling a margin function over `[0, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct MarginScan {
    death_time: Option<f64>,
    revival: Option<f64>,
    final_margin: f64,
}

fn sample_times(t_max: f64) -> impl Iterator<Item = f64> {
    let last = (COARSE_SAMPLES - 1) as f64;
    (0..COARSE_SAMPLES).map(move |i| t_max * i as f64 / last)
}

fn scan_margin<F>(margin: &F, t_max: f64, tol: f64) -> Result<MarginScan>
where
    F: Fn(f64) -> Result<f64>,
{
    let m0 = margin(0.0)?;
    if !(m0 > tol) {
        return Err(Error::InitiallySeparable(m0));
    }
    let mut last_alive = 0.0;
    let mut next_after_alive = None;
    let mut first_dead = None;
    let mut revival = None;
    let mut final_margin = m0;
    for t in sample_times(t_max).skip(1) {
        let m = margin(t)?;
        final_margin = m;
        match first_dead {
            None => {
                if m > 0.0 {
                    last_alive = t;
                    next_after_alive = None;
                } else if next_after_alive.is_none() {
                    next_after_alive = Some(t);
                }
                if m <= -tol {
                    first_dead = Some(t);
                }
            }
            Some(_) => {
                if m > tol && revival.is_none() {
                    revival = Some(t);
                }
            }
        }
    }
    let death_time = match (first_dead, next_after_alive) {
        (Some(_), Some(hi)) => Some(bisect_crossing(margin, last_alive, hi)?),
        _ => None,
    };
    Ok(MarginScan {
        death_time,
        revival,
        final_margin,
    })
}

/// Smallest `t` in `(lo, hi]` with `margin(t) ≤ 0`, given `margin(lo) > 0`
/// and `margin(hi) ≤ 0`.
fn bisect_crossing<F>(margin: &F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi - lo > DEATH_TIME_PRECISION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Finite-time death of a signed entanglement margin.
///
/// `margin` must be positive while the state is entangled. The trajectory
/// counts as dead once the margin drops to `-tol` or below and does not rise
/// above `tol` again before `t_max`; the returned time is the zero crossing
/// that precedes it, located on a 512-point grid and refined by bisection.
/// Margins that only approach zero from above, however closely, give `None`.
pub fn death_time<F>(margin: F, t_max: f64, tol: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidTime {
            name: "t_max",
            value: t_max,
        });
    }
    let scan = scan_margin(&margin, t_max, tol)?;
    Ok(match scan.revival {
        Some(_) => None,
        None => scan.death_time,
    })
}

/// Margin and negativity of one family under fixed rates.
enum Probe {
    Phi1 { alpha: f64, beta: f64 },
    Phi2 { alpha: f64, beta: f64 },
    Mixed(MixedFamilyParams),
    Numeric(Box<CheckpointedEvolution>),
}

impl Probe {
    fn new(family: &StateFamily, rates: &DecayRates, opts: &EsdOptions) -> Result<Self> {
        let closed = match *family {
            StateFamily::Phi1 { alpha, beta } => Some(Probe::Phi1 { alpha, beta }),
            StateFamily::Phi2Plus { alpha, beta } | StateFamily::Phi2Minus { alpha, beta } => {
                Some(Probe::Phi2 { alpha, beta })
            }
            StateFamily::MixedAC(p) => Some(Probe::Mixed(p)),
            _ => None,
        };
        match (opts.route, closed) {
            (Route::Numeric, _) | (Route::Auto, None) => {
                let evo = CheckpointedEvolution::new(
                    &family.initial_state(),
                    rates,
                    opts.horizon,
                    opts.dt,
                    CHECKPOINT_SPACING,
                )?;
                Ok(Probe::Numeric(Box::new(evo)))
            }
            (_, Some(p)) => Ok(p),
            (Route::Analytic, None) => Err(Error::NoClosedForm(family.tag())),
        }
    }

    fn margin(&self, rates: &DecayRates, t: f64) -> Result<f64> {
        match self {
            Probe::Phi1 { alpha, beta } => phi1_closed_witness(*alpha, *beta, rates, t),
            Probe::Phi2 { alpha, beta } => phi2_closed_witness(*alpha, *beta, rates, t),
            Probe::Mixed(p) => npt_witness_of_matrix(evolve_mixed_analytic(p, rates, t)?.matrix()),
            Probe::Numeric(evo) => npt_witness_of_matrix(&evo.matrix_at(t)),
        }
    }

    fn negativity(&self, rates: &DecayRates, t: f64) -> Result<f64> {
        match self {
            Probe::Phi1 { alpha, beta } => negativity_phi1_closed_for(*alpha, *beta, rates, t),
            Probe::Phi2 { alpha, beta } => negativity_phi2_closed(*alpha, *beta, rates, t),
            Probe::Mixed(p) => negativity(&evolve_mixed_analytic(p, rates, t)?),
            Probe::Numeric(evo) => negativity(&DensityMatrix::with_tolerances(
                evo.matrix_at(t),
                &TRAJECTORY_TOLERANCES,
            )?),
        }
    }
}

/// Least-squares slope of `ln N` against `t` over the last tenth of the
/// horizon, using only resolvable (positive) samples.
fn log_decay_rate<F>(neg: &F, horizon: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let start = horizon * (1.0 - FIT_WINDOW);
    let mut pts = Vec::with_capacity(FIT_SAMPLES);
    for i in 0..FIT_SAMPLES {
        let t = start + (horizon - start) * i as f64 / (FIT_SAMPLES - 1) as f64;
        let n = neg(t)?;
        if n > 0.0 && n.is_finite() {
            pts.push((t, n.ln()));
        }
    }
    if pts.len() < FIT_SAMPLES / 2 {
        return Ok(None);
    }
    let len = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    Ok(Some(sxy / sxx))
}

/// Sudden death or asymptotic decay of the entanglement of `family`.
pub fn classify(family: &StateFamily, rates: &DecayRates, opts: &EsdOptions) -> Result<EsdReport> {
    opts.validate()?;
    let probe = Probe::new(family, rates, opts)?;
    let margin = |t: f64| probe.margin(rates, t);
    let scan = match scan_margin(&margin, opts.horizon, opts.tol) {
        Ok(s) => s,
        Err(Error::InitiallySeparable(_)) => return Ok(EsdReport::InitiallySeparable),
        Err(e) => return Err(e),
    };
    if let Some(death_time) = scan.death_time {
        return Ok(EsdReport::SuddenDeath {
            death_time,
            revival: scan.revival,
        });
    }
    let neg = |t: f64| probe.negativity(rates, t);
    Ok(EsdReport::Asymptotic {
        residual_negativity: neg(opts.horizon)?,
        residual_margin: scan.final_margin,
        log_decay_rate: log_decay_rate(&neg, opts.horizon)?,
    })
}

/// Result of sweeping one parameter across the sudden-death boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryScan {
    /// Parameters held fixed, by name.
    pub fixed: Vec<(&'static str, f64)>,
    pub swept: &'static str,
    pub grid: Vec<f64>,
    pub reports: Vec<EsdReport>,
    pub threshold: Option<f64>,
    /// Whether every kind occupies a single contiguous run of the sweep.
    pub monotone: bool,
}

fn is_monotone(reports: &[EsdReport]) -> bool {
    let mut seen: Vec<EsdKind> = Vec::new();
    for r in reports {
        let k = r.kind();
        if seen.last() != Some(&k) {
            if seen.contains(&k) {
                return false;
            }
            seen.push(k);
        }
    }
    true
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(&v) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidGridPoint {
            value: v,
            reason: "not finite".into(),
        });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Bisects `[dead, alive]` (in either order) on the sudden-death predicate
/// and returns the endpoint still classified as sudden death.
fn refine<F>(mut dead: f64, mut alive: f64, is_dead: F) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let mut steps = 0;
    while (alive - dead).abs() > THRESHOLD_PRECISION || steps < MIN_REFINEMENT_STEPS {
        let mid = 0.5 * (dead + alive);
        if is_dead(mid)? {
            dead = mid;
        } else {
            alive = mid;
        }
        steps += 1;
    }
    Ok(dead)
}

fn phi1_of_beta(beta: f64) -> Result<StateFamily> {
    StateFamily::phi1((1.0 - beta * beta).sqrt(), beta)
}

/// Sweeps `β` of `√(1-β²)|0,0⟩ + β|1,1⟩`. The threshold is the smallest `β`
/// that shows sudden death.
pub fn scan_beta_boundary(
    rates: &DecayRates,
    grid: &[f64],
    opts: &EsdOptions,
) -> Result<BoundaryScan> {
    check_grid(grid)?;
    if let Some(&v) = grid.iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
        return Err(Error::InvalidGridPoint {
            value: v,
            reason: "beta must lie in (0, 1)".into(),
        });
    }
    let classify_beta = |beta: f64| classify(&phi1_of_beta(beta)?, rates, opts);
    let reports = grid
        .par_iter()
        .map(|&b| classify_beta(b))
        .collect::<Result<Vec<_>>>()?;
    let first_dead = reports
        .iter()
        .position(|r| r.kind() == EsdKind::SuddenDeath);
    let threshold = match first_dead {
        None => None,
        Some(0) => Some(grid[0]),
        Some(i) => Some(refine(grid[i], grid[i - 1], |b| {
            Ok(classify_beta(b)?.kind() == EsdKind::SuddenDeath)
        })?),
    };
    Ok(BoundaryScan {
        fixed: vec![
            ("gamma", rates.gamma()),
            ("gamma1", rates.gamma1()),
            ("gamma2", rates.gamma2()),
        ],
        swept: "beta",
        monotone: is_monotone(&reports),
        grid: grid.to_vec(),
        reports,
        threshold,
    })
}

/// Sweeps `c` of the mixed family at fixed `b`. The threshold is the largest
/// `c` that shows sudden death.
pub fn scan_c_boundary(
    b: f64,
    rates: &DecayRates,
    grid: &[f64],
    opts: &EsdOptions,
) -> Result<BoundaryScan> {
    check_grid(grid)?;
    for &c in grid {
        if let Err(e) = MixedFamilyParams::from_bc(b, c) {
            return Err(Error::InvalidGridPoint {
                value: c,
                reason: e.to_string(),
            });
        }
    }
    let classify_c = |c: f64| classify(&StateFamily::mixed(b, c)?, rates, opts);
    let reports = grid
        .par_iter()
        .map(|&c| classify_c(c))
        .collect::<Result<Vec<_>>>()?;
    let last_dead = reports
        .iter()
        .rposition(|r| r.kind() == EsdKind::SuddenDeath);
    let threshold = match last_dead {
        None => None,
        Some(i) if i + 1 == grid.len() => Some(grid[i]),
        Some(i) => Some(refine(grid[i], grid[i + 1], |c| {
            Ok(classify_c(c)?.kind() == EsdKind::SuddenDeath)
        })?),
    };
    let mut fixed = vec![
        ("b", b),
        ("gamma", rates.gamma()),
        ("gamma1", rates.gamma1()),
        ("gamma2", rates.gamma2()),
    ];
    if rates.gamma2() > 0.0 {
        fixed.push(("k", rates.gamma1() / rates.gamma2()));
    }
    Ok(BoundaryScan {
        fixed,
        swept: "c",
        monotone: is_monotone(&reports),
        grid: grid.to_vec(),
        reports,
        threshold,
    })
}
