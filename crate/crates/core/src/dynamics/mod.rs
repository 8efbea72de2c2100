//! Spontaneous-emission dynamics of the qubit-qutrit pair.
//!
//! Three independent decay channels act on the state:
//!
//! ```text
//! dρ/dt = Σ_ch g_ch (L ρ L† - ½{L†L, ρ})
//!   L = σ₀₁ ⊗ I₃   (qubit |1⟩→|0⟩, rate γ)
//!   L = I₂ ⊗ σ₀₁   (qutrit |1⟩→|0⟩, rate γ₁)
//!   L = I₂ ⊗ σ₀₂   (qutrit |2⟩→|0⟩, rate γ₂)
//! ```
//!
//! with `σ_kl = |k⟩⟨l|`. There is no Hamiltonian part.

mod analytic;

pub use analytic::{
    evolve_mixed_analytic, evolve_phi1_analytic, evolve_phi2_analytic, negativity_phi1_closed,
    negativity_phi1_closed_for,
    negativity_phi2_closed, phi1_closed_witness, phi2_closed_witness,
};

use crate::error::{Error, Result};
use crate::linalg::Matrix6;
use crate::state::{
    ground_state, levels_of_row, negativity, row_of, DensityMatrix, DensityTolerances, DIM,
};

/// Default integration step in units where the largest rate is one.
pub const DEFAULT_DT: f64 = 1e-3;
/// Largest per-step trace drift the integrator accepts.
pub const MAX_TRACE_DRIFT: f64 = 1e-7;
/// Tolerances applied to every stored state of a numeric trajectory.
pub const TRAJECTORY_TOLERANCES: DensityTolerances = DensityTolerances {
    hermitian: 1e-10,
    trace: 1e-9,
    min_eigenvalue: None,
};

/// Spontaneous-emission rates (inverse time units).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRates {
    gamma: f64,
    gamma1: f64,
    gamma2: f64,
}

impl DecayRates {
    /// `gamma`: qubit `|1⟩→|0⟩`; `gamma1`: qutrit `|1⟩→|0⟩`; `gamma2`: qutrit `|2⟩→|0⟩`.
    pub fn new(gamma: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        for (name, value) in [("gamma", gamma), ("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidRate { name, value });
            }
        }
        Ok(DecayRates {
            gamma,
            gamma1,
            gamma2,
        })
    }

    /// Rates with `gamma1 = k · gamma2`.
    pub fn with_interference(gamma: f64, gamma2: f64, k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidRate {
                name: "k",
                value: k,
            });
        }
        Self::new(gamma, k * gamma2, gamma2)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn max_rate(&self) -> f64 {
        self.gamma.max(self.gamma1).max(self.gamma2)
    }

    pub fn min_rate(&self) -> f64 {
        self.gamma.min(self.gamma1).min(self.gamma2)
    }

    /// Same rates multiplied by `s`; used to move the time scale into the rates.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.gamma * s, self.gamma1 * s, self.gamma2 * s)
    }
}

/// `k = γ₁/γ₂`: 1 means no interference between the qutrit decay paths,
/// 0 means maximal interference.
pub fn interference_k(rates: &DecayRates) -> Result<f64> {
    if rates.gamma2 == 0.0 {
        return Err(Error::UndefinedInterference);
    }
    Ok(rates.gamma1 / rates.gamma2)
}

/// Which factor a decay channel acts on and the levels it connects.
#[derive(Clone, Copy, Debug)]
struct Channel {
    qubit: bool,
    from: usize,
    to: usize,
}

const CHANNELS: [Channel; 3] = [
    Channel {
        qubit: true,
        from: 1,
        to: 0,
    },
    Channel {
        qubit: false,
        from: 1,
        to: 0,
    },
    Channel {
        qubit: false,
        from: 2,
        to: 0,
    },
];

impl Channel {
    fn level(&self, row: usize) -> usize {
        let (i, j) = levels_of_row(row);
        if self.qubit {
            i
        } else {
            j
        }
    }

    /// Row obtained by replacing this channel's level `to` with `from`.
    fn source(&self, row: usize) -> usize {
        let (i, j) = levels_of_row(row);
        if self.qubit {
            row_of(self.from, j)
        } else {
            row_of(i, self.from)
        }
    }
}

fn channel_rates(rates: &DecayRates) -> [f64; 3] {
    [rates.gamma, rates.gamma1, rates.gamma2]
}

/// Right-hand side `dρ/dt` of the master equation.
///
/// Works on any 6×6 matrix; the map is linear, traceless and preserves
/// Hermiticity.
pub fn dissipator(rho: &Matrix6, rates: &DecayRates) -> Matrix6 {
    let mut out = Matrix6::zeros();
    for (ch, g) in CHANNELS.iter().zip(channel_rates(rates)) {
        if g == 0.0 {
            continue;
        }
        for r in 0..DIM {
            let lr = ch.level(r);
            for c in 0..DIM {
                let lc = ch.level(c);
                let occupied = (lr == ch.from) as u8 + (lc == ch.from) as u8;
                if occupied > 0 {
                    out[(r, c)] -= rho[(r, c)] * (0.5 * g * occupied as f64);
                }
                if lr == ch.to && lc == ch.to {
                    out[(r, c)] += rho[(ch.source(r), ch.source(c))] * g;
                }
            }
        }
    }
    out
}

/// Fixed-step classic Runge–Kutta propagator for the master equation.
#[derive(Clone, Copy, Debug)]
pub struct Rk4 {
    rates: DecayRates,
    dt: f64,
}

impl Rk4 {
    pub fn new(rates: DecayRates, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidTime {
                name: "dt",
                value: dt,
            });
        }
        Ok(Rk4 { rates, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn rates(&self) -> &DecayRates {
        &self.rates
    }

    pub fn step(&self, rho: &Matrix6, h: f64) -> Matrix6 {
        let k1 = dissipator(rho, &self.rates);
        let k2 = dissipator(&(*rho + k1.scale(0.5 * h)), &self.rates);
        let k3 = dissipator(&(*rho + k2.scale(0.5 * h)), &self.rates);
        let k4 = dissipator(&(*rho + k3.scale(h)), &self.rates);
        *rho + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0)
    }

    /// Number of equal steps (each at most `dt`) covering `duration`.
    pub fn steps_for(&self, duration: f64) -> usize {
        if duration <= 0.0 {
            0
        } else {
            ((duration / self.dt) - 1e-9).ceil().max(1.0) as usize
        }
    }

    /// Propagates `rho` forward by `duration` without storing intermediates.
    pub fn advance(&self, rho: &Matrix6, duration: f64) -> Matrix6 {
        let n = self.steps_for(duration);
        let mut m = *rho;
        if n == 0 {
            return m;
        }
        let h = duration / n as f64;
        for _ in 0..n {
            m = self.step(&m, h);
        }
        m
    }
}

/// Sampled solution of the master equation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub negativities: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// RK4 evolution to `t_end`, storing every step.
pub fn evolve_numeric(
    initial: &DensityMatrix,
    rates: &DecayRates,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    evolve_numeric_strided(initial, rates, t_end, dt, 1)
}

/// RK4 evolution to `t_end`, storing every `stride`-th step plus the final
/// state.
///
/// The step is shrunk slightly so that a whole number of steps ends exactly
/// at `t_end`. The run is aborted when the trace drifts by more than
/// [`MAX_TRACE_DRIFT`] in a step.
pub fn evolve_numeric_strided(
    initial: &DensityMatrix,
    rates: &DecayRates,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidTime {
            name: "t_end",
            value: t_end,
        });
    }
    let stride = stride.max(1);
    let rk = Rk4::new(*rates, dt)?;
    let n = rk.steps_for(t_end);
    let h = if n == 0 { 0.0 } else { t_end / n as f64 };

    let mut traj = Trajectory {
        times: Vec::with_capacity(n / stride + 2),
        states: Vec::with_capacity(n / stride + 2),
        negativities: Vec::with_capacity(n / stride + 2),
    };
    let push = |t: f64, m: &Matrix6, traj: &mut Trajectory| -> Result<()> {
        let rho = DensityMatrix::with_tolerances(*m, &TRAJECTORY_TOLERANCES).map_err(|e| {
            Error::InvalidEvolvedState {
                t,
                reason: e.to_string(),
            }
        })?;
        traj.negativities.push(negativity(&rho)?);
        traj.times.push(t);
        traj.states.push(rho);
        Ok(())
    };

    let mut m = *initial.matrix();
    push(0.0, &m, &mut traj)?;
    for k in 1..=n {
        let prev_trace = m.trace().re;
        m = rk.step(&m, h);
        let t = if k == n { t_end } else { k as f64 * h };
        let drift = (m.trace().re - prev_trace).abs();
        if !(drift <= MAX_TRACE_DRIFT) {
            return Err(Error::TraceDrift { t, drift });
        }
        if k % stride == 0 || k == n {
            push(t, &m, &mut traj)?;
        }
    }
    Ok(traj)
}

/// Numeric solution that can be queried at arbitrary times.
///
/// Checkpoints are stored at a fixed spacing; a query integrates forward
/// from the nearest earlier checkpoint with steps no longer than `dt`.
#[derive(Clone, Debug)]
pub struct CheckpointedEvolution {
    rk: Rk4,
    spacing: f64,
    checkpoints: Vec<Matrix6>,
}

impl CheckpointedEvolution {
    pub fn new(
        initial: &DensityMatrix,
        rates: &DecayRates,
        horizon: f64,
        dt: f64,
        spacing: f64,
    ) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::InvalidTime {
                name: "horizon",
                value: horizon,
            });
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidTime {
                name: "spacing",
                value: spacing,
            });
        }
        let rk = Rk4::new(*rates, dt)?;
        let count = (horizon / spacing).ceil() as usize + 1;
        let mut checkpoints = Vec::with_capacity(count);
        let mut m = *initial.matrix();
        checkpoints.push(m);
        for k in 1..count {
            m = rk.advance(&m, spacing);
            let drift = (m.trace().re - 1.0).abs();
            if !(drift <= MAX_TRACE_DRIFT) {
                return Err(Error::TraceDrift {
                    t: k as f64 * spacing,
                    drift,
                });
            }
            checkpoints.push(m);
        }
        Ok(CheckpointedEvolution {
            rk,
            spacing,
            checkpoints,
        })
    }

    pub fn matrix_at(&self, t: f64) -> Matrix6 {
        let t = t.max(0.0);
        let idx = ((t / self.spacing).floor() as usize).min(self.checkpoints.len() - 1);
        let base = idx as f64 * self.spacing;
        self.rk.advance(&self.checkpoints[idx], t - base)
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        DensityMatrix::with_tolerances(self.matrix_at(t), &TRAJECTORY_TOLERANCES)
    }
}

/// The long-time limit `|0,0⟩⟨0,0|` reached whenever all three rates are
/// positive.
pub fn asymptotic_state() -> DensityMatrix {
    ground_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::state::{local_operator, pure_to_density, PureState};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn rates(g: f64, g1: f64, g2: f64) -> DecayRates {
        DecayRates::new(g, g1, g2).unwrap()
    }

    /// The generator written with explicit jump-operator matrices.
    fn dense_dissipator(rho: &Matrix6, r: &DecayRates) -> Matrix6 {
        let one = Complex64::new(1.0, 0.0);
        let sigma2 = |k: usize, l: usize| {
            let mut s = CMatrix::<2>::zeros();
            s[(k, l)] = one;
            s
        };
        let sigma3 = |k: usize, l: usize| {
            let mut s = CMatrix::<3>::zeros();
            s[(k, l)] = one;
            s
        };
        let jumps = [
            (r.gamma(), local_operator(&sigma2(0, 1), &CMatrix::identity())),
            (r.gamma1(), local_operator(&CMatrix::identity(), &sigma3(0, 1))),
            (r.gamma2(), local_operator(&CMatrix::identity(), &sigma3(0, 2))),
        ];
        let mut out = Matrix6::zeros();
        for (g, l) in jumps {
            let ld = l.adjoint();
            let n = ld * l;
            let term = l * *rho * ld - (n * *rho + *rho * n).scale(0.5);
            out = out + term.scale(g);
        }
        out
    }

    fn test_matrix(seed: u64) -> Matrix6 {
        let mut x = seed as f64 + 0.5;
        Matrix6::from_fn(|_, _| {
            x = (x * 12.9898).sin() * 43758.5453;
            let re = x.fract();
            x = (x * 78.233).sin() * 24634.6345;
            Complex64::new(re, x.fract())
        })
    }

    #[test]
    fn matches_dense_lindblad_form() {
        let r = rates(0.7, 1.3, 0.4);
        for seed in 0..5 {
            let m = test_matrix(seed);
            let fast = dissipator(&m, &r);
            let dense = dense_dissipator(&m, &r);
            assert!(fast.max_abs_diff(&dense) < 1e-14);
        }
    }

    #[test]
    fn ground_state_is_dark() {
        let d = dissipator(ground_state().matrix(), &rates(1.0, 2.0, 3.0));
        assert_eq!(d, Matrix6::zeros());
    }

    #[test]
    fn excited_population_rate() {
        let (g, g1) = (0.8, 1.7);
        let rho = pure_to_density(&PureState::basis(1, 1).unwrap());
        let d = dissipator(rho.matrix(), &rates(g, g1, 0.3));
        assert_abs_diff_eq!(d[(1, 1)].re, -(g + g1), epsilon = 1e-15);
        // Population leaks into |1,0⟩ at γ₁ and into |0,1⟩ at γ.
        assert_abs_diff_eq!(d[(2, 2)].re, g1, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(4, 4)].re, g, epsilon = 1e-15);
        for r in 0..DIM {
            for c in 0..DIM {
                if ![(1, 1), (2, 2), (4, 4)].contains(&(r, c)) {
                    assert_eq!(d[(r, c)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn traceless_and_hermitian() {
        let r = rates(0.3, 1.1, 2.2);
        for seed in 0..5 {
            let a = test_matrix(seed);
            let h = a + a.adjoint();
            let d = dissipator(&h, &r);
            assert!(d.trace().norm() < 1e-13);
            assert!(d.hermiticity_defect() < 1e-15);
        }
    }

    #[test]
    fn linear() {
        let r = rates(0.3, 1.1, 2.2);
        let (a, b) = (test_matrix(1), test_matrix(2));
        let (x, y) = (0.37, -1.9);
        let lhs = dissipator(&(a.scale(x) + b.scale(y)), &r);
        let rhs = dissipator(&a, &r).scale(x) + dissipator(&b, &r).scale(y);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn interference_parameter() {
        assert_eq!(interference_k(&rates(1.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(interference_k(&rates(1.0, 0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(interference_k(&rates(1.0, 0.25, 0.5)).unwrap(), 0.5);
        assert_eq!(
            interference_k(&rates(1.0, 0.25, 0.0)),
            Err(Error::UndefinedInterference)
        );
    }

    #[test]
    fn rate_validation() {
        assert!(DecayRates::new(-1.0, 0.0, 0.0).is_err());
        assert!(DecayRates::new(1.0, f64::INFINITY, 0.0).is_err());
        let r = DecayRates::with_interference(1.0, 2.0, 0.5).unwrap();
        assert_eq!(r.gamma1(), 1.0);
    }

    #[test]
    fn zero_duration_trajectory() {
        let rho = pure_to_density(&PureState::basis(1, 2).unwrap());
        let traj = evolve_numeric(&rho, &rates(1.0, 1.0, 1.0), 0.0, 1e-3).unwrap();
        assert_eq!(traj.times, vec![0.0]);
        assert_eq!(traj.states[0], rho);
    }

    #[test]
    fn bad_step_rejected() {
        let rho = ground_state();
        assert!(evolve_numeric(&rho, &rates(1.0, 1.0, 1.0), 1.0, 0.0).is_err());
        assert!(evolve_numeric(&rho, &rates(1.0, 1.0, 1.0), -1.0, 1e-3).is_err());
    }

    #[test]
    fn unstable_step_trips_drift_check() {
        let psi = PureState::basis(1, 2).unwrap();
        let err = evolve_numeric(&pure_to_density(&psi), &rates(1.0, 1.0, 1.0), 400.0, 20.0)
            .unwrap_err();
        assert!(matches!(err, Error::TraceDrift { .. }), "{err}");
    }

    #[test]
    fn single_exponential_decay() {
        let psi = PureState::basis(1, 0).unwrap();
        let traj =
            evolve_numeric_strided(&pure_to_density(&psi), &rates(1.0, 0.0, 0.0), 2.0, 1e-3, 100)
                .unwrap();
        for (t, rho) in traj.times.iter().zip(&traj.states) {
            assert_abs_diff_eq!(rho.get(2, 2).re, (-t).exp(), epsilon = 1e-13);
        }
        assert_eq!(*traj.times.last().unwrap(), 2.0);
        assert_eq!(traj.len(), 21);
    }

    #[test]
    fn checkpoints_agree_with_plain_run() {
        let psi = PureState::two_term(0.6, (0, 1), 0.8, (1, 2)).unwrap();
        let rho = pure_to_density(&psi);
        let r = rates(0.5, 1.0, 2.0);
        let cp = CheckpointedEvolution::new(&rho, &r, 3.0, 1e-3, 0.25).unwrap();
        let direct = Rk4::new(r, 1e-3).unwrap().advance(rho.matrix(), 2.3456);
        assert!(cp.matrix_at(2.3456).max_abs_diff(&direct) < 1e-12);
    }
}
