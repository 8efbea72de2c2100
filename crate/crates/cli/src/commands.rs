//! The `negativity`, `evolve` and `scan` commands, producing text.

use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use esd_core::dynamics::{
    evolve_mixed_analytic, evolve_numeric_strided, negativity_phi1_closed_for,
    negativity_phi2_closed, DecayRates,
};
use esd_core::esd::{scan_beta_boundary, scan_c_boundary, BoundaryScan, EsdOptions, EsdReport};
use esd_core::family::StateFamily;
use esd_core::state::negativity;

use crate::format::{fmt_num, fmt_opt};
use crate::spec_text::StateSpec;

pub const TRAJECTORY_HEADER: &str = "t,negativity_analytic,negativity_numeric,rho_trace,min_eigenvalue";
pub const SCAN_HEADER: &str = "value,kind,death_time,residual_negativity";

/// `start:stop:count`, evenly spaced and inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        ensure!(parts.len() == 3, "grid `{s}` must have the form start:stop:count");
        let num = |p: &str| -> Result<f64> {
            let x: f64 = p.parse().with_context(|| format!("grid `{s}`: bad number `{p}`"))?;
            ensure!(x.is_finite(), "grid `{s}`: `{p}` is not finite");
            Ok(x)
        };
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2]
            .parse()
            .with_context(|| format!("grid `{s}`: bad count `{}`", parts[2]))?;
        ensure!(count >= 1, "grid `{s}`: count must be at least 1");
        ensure!(
            count == 1 || stop > start,
            "grid `{s}`: stop must exceed start"
        );
        Ok(GridSpec { start, stop, count })
    }
}

/// Rate flags as given on the command line. `k` sets `gamma1 = k·gamma2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RateArgs {
    pub gamma: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub k: Option<f64>,
}

impl RateArgs {
    pub fn resolve(&self) -> Result<DecayRates> {
        let gamma = self.gamma.unwrap_or(1.0);
        let gamma2 = self.gamma2.unwrap_or(1.0);
        let rates = match (self.gamma1, self.k) {
            (Some(_), Some(_)) => bail!("give either --gamma1 or --k, not both"),
            (_, Some(k)) => DecayRates::with_interference(gamma, gamma2, k)?,
            (g1, None) => DecayRates::new(gamma, g1.unwrap_or(1.0), gamma2)?,
        };
        Ok(rates)
    }
}

pub fn negativity_text(spec: &StateSpec) -> Result<String> {
    Ok(fmt_num(negativity(&spec.initial_state())?))
}

/// Closed-form or analytic-solution negativity, where the family has one.
pub fn analytic_negativity(family: &StateFamily, rates: &DecayRates, t: f64) -> Result<Option<f64>> {
    Ok(match *family {
        StateFamily::Phi1 { alpha, beta } => {
            Some(negativity_phi1_closed_for(alpha, beta, rates, t)?)
        }
        StateFamily::Phi2Plus { alpha, beta } | StateFamily::Phi2Minus { alpha, beta } => {
            Some(negativity_phi2_closed(alpha, beta, rates, t)?)
        }
        StateFamily::MixedAC(p) => Some(negativity(&evolve_mixed_analytic(&p, rates, t)?)?),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveArgs {
    pub state: StateSpec,
    pub rates: DecayRates,
    pub t_max: f64,
    pub dt: f64,
    pub stride: usize,
}

pub fn evolve_csv(args: &EvolveArgs) -> Result<String> {
    ensure!(args.stride >= 1, "--stride must be at least 1");
    let family = args.state.family();
    let traj = evolve_numeric_strided(
        &family.initial_state(),
        &args.rates,
        args.t_max,
        args.dt,
        args.stride,
    )?;
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for ((t, rho), n) in traj.times.iter().zip(&traj.states).zip(&traj.negativities) {
        let analytic = analytic_negativity(&family, &args.rates, *t)?;
        let min_eig = rho.eigenvalues()?[0];
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(*t),
            fmt_opt(analytic),
            fmt_num(*n),
            fmt_num(rho.trace()),
            fmt_num(min_eig)
        )?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Beta,
    MixedC,
}

impl FromStr for ScanMode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(ScanMode::Beta),
            "mixed-c" => Ok(ScanMode::MixedC),
            _ => bail!("unknown scan mode `{s}` (expected beta or mixed-c)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanArgs {
    pub mode: ScanMode,
    pub rates: DecayRates,
    pub b: Option<f64>,
    pub grid: Option<GridSpec>,
}

pub const DEFAULT_BETA_GRID: GridSpec = GridSpec {
    start: 0.01,
    stop: 0.99,
    count: 99,
};

/// `0 ≤ c ≤ 1 - 3b` in 100 steps.
pub fn default_c_grid(b: f64) -> GridSpec {
    GridSpec {
        start: 0.0,
        stop: 1.0 - 3.0 * b,
        count: 101,
    }
}

pub fn run_scan(args: &ScanArgs) -> Result<BoundaryScan> {
    let opts = EsdOptions::default();
    let scan = match args.mode {
        ScanMode::Beta => {
            let grid = args.grid.unwrap_or(DEFAULT_BETA_GRID).values();
            scan_beta_boundary(&args.rates, &grid, &opts)?
        }
        ScanMode::MixedC => {
            let b = args.b.context("mixed-c scans need --b")?;
            ensure!(
                b.is_finite() && (0.0..=1.0 / 3.0).contains(&b),
                "--b {b} must lie in [0, 1/3]"
            );
            let grid = args.grid.unwrap_or_else(|| default_c_grid(b)).values();
            scan_c_boundary(b, &args.rates, &grid, &opts)?
        }
    };
    Ok(scan)
}

pub fn scan_csv(scan: &BoundaryScan) -> String {
    let mut out = String::new();
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for (v, r) in scan.grid.iter().zip(&scan.reports) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(*v),
            r.kind().as_str(),
            fmt_opt(r.death_time()),
            fmt_opt(r.residual_negativity())
        );
    }
    let threshold = scan.threshold.map(fmt_num).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "threshold,{threshold},,");
    out
}

/// Findings about a scan that the CSV cannot carry.
pub fn scan_warnings(scan: &BoundaryScan) -> Vec<String> {
    let mut w = Vec::new();
    if !scan.monotone {
        w.push(format!(
            "classification along {} is not monotone; more than one boundary crossing",
            scan.swept
        ));
    }
    for (v, r) in scan.grid.iter().zip(&scan.reports) {
        if let EsdReport::SuddenDeath {
            revival: Some(t), ..
        } = r
        {
            w.push(format!("{} = {}: entanglement revived at t = {}", scan.swept, fmt_num(*v), fmt_num(*t)));
        }
    }
    w
}
