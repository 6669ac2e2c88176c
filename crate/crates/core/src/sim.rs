//! Time-domain simulation of the consensus schemes.
//!
//! Every scheme is a linear recurrence over a short state history,
//!
//! ```text
//! x(k+1) = Σ_m ( a_m x(k−m) + b_m G x(k−m) )
//! ```
//!
//! with `G` either the Laplacian or the weight matrix, and histories
//! initialized with `x(−m) = x(0)`. For schemes that preserve the average the
//! simulation tracks the disagreement `x − x̄·1` and removes its mean after
//! each step, so rounding never accumulates along the consensus direction.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, SymMatrix};
use crate::polynomial::MemoryParams;
use crate::protocols::{ProtocolKind, ProtocolParams};

/// Runs whose error exceeds this are cut short and flagged divergent.
pub const DIVERGENCE_CUTOFF: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub steps: usize,
    pub tol: f64,
    /// Seed for uniform `[0, 1]` initial states when `x0` is absent.
    pub seed: u64,
    pub x0: Option<Vec<f64>>,
    /// Track the disagreement and re-center it each step (average-preserving schemes only).
    pub recenter: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { steps: 500, tol: 1e-6, seed: 0, x0: None, recenter: true }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidInput("steps must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        Ok(())
    }

    fn initial_state(&self, n: usize) -> Result<Vec<f64>> {
        match &self.x0 {
            Some(x) if x.len() != n => {
                Err(Error::InvalidInput(format!("x0 has length {}, expected {n}", x.len())))
            }
            Some(x) if x.iter().any(|v| !v.is_finite()) => {
                Err(Error::InvalidInput("x0 has non-finite entries".into()))
            }
            Some(x) => Ok(x.clone()),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok((0..n).map(|_| rng.gen::<f64>()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<Vec<f64>>,
    /// `‖x(k) − x̄·1‖ / ‖x(0) − x̄·1‖`.
    pub errors: Vec<f64>,
    pub xbar: f64,
    pub tol: f64,
    pub settled_at: Option<usize>,
    pub diverged: bool,
}

impl Trajectory {
    /// CSV with header `step,error,x_0,…,x_{N−1}` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut s = String::from("step,error");
        for i in 0..n {
            write!(s, ",x_{i}").unwrap();
        }
        s.push('\n');
        for (k, (x, e)) in self.states.iter().zip(&self.errors).enumerate() {
            write!(s, "{k},{e:.16e}").unwrap();
            for v in x {
                write!(s, ",{v:.16e}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// A linear recurrence: `phases[k % phases.len()][m] = (a_m, b_m)`.
struct LinearScheme<'a> {
    g: &'a SymMatrix,
    phases: Vec<Vec<(f64, f64)>>,
}

impl LinearScheme<'_> {
    fn lags(&self) -> usize {
        self.phases.iter().map(Vec::len).max().unwrap_or(1)
    }

    /// Whether `x̄·1` maps to `x̄·1` in every phase, given row sums `mu` of `G`.
    fn preserves_average(&self, mu: f64) -> bool {
        self.phases.iter().all(|ph| {
            let total: f64 = ph.iter().map(|(a, b)| a + b * mu).sum();
            (total - 1.0).abs() <= 1e-12
        })
    }

    fn run(&self, cfg: &SimConfig) -> Result<Trajectory> {
        cfg.validate()?;
        let n = self.g.n();
        let x0 = cfg.initial_state(n)?;
        let xbar = x0.iter().sum::<f64>() / n as f64;
        let row_sum: f64 = self.g.as_matrix().row(0).iter().sum();
        let recenter = cfg.recenter && self.preserves_average(row_sum);

        let shift = if recenter { xbar } else { 0.0 };
        let first: Vec<f64> = x0.iter().map(|v| v - shift).collect();
        // zero when recentering, so tiny disagreements are not lost to rounding
        let offset = if recenter { 0.0 } else { xbar };
        let disagreement = |y: &[f64]| -> f64 { y.iter().map(|v| (v - offset).powi(2)).sum::<f64>().sqrt() };
        let e0 = disagreement(&first);

        let lags = self.lags();
        // hist[0] is the newest state
        let mut hist: Vec<Vec<f64>> = vec![first.clone(); lags];
        let mut states = vec![x0];
        let mut errors = vec![if e0 == 0.0 { 0.0 } else { 1.0 }];
        let mut settled_at = (errors[0] <= cfg.tol).then_some(0);
        let mut aborted = false;

        let mut k = 0;
        while settled_at.is_none() && k < cfg.steps {
            let phase = &self.phases[k % self.phases.len()];
            let mut next = vec![0.0; n];
            for (m, &(a, b)) in phase.iter().enumerate() {
                let x = &hist[m];
                if a != 0.0 {
                    for (y, v) in next.iter_mut().zip(x) {
                        *y += a * v;
                    }
                }
                if b != 0.0 {
                    for (y, v) in next.iter_mut().zip(self.g.mul_vec(x)) {
                        *y += b * v;
                    }
                }
            }
            if recenter {
                let mean = next.iter().sum::<f64>() / n as f64;
                for v in next.iter_mut() {
                    *v -= mean;
                }
            }
            k += 1;
            let err = disagreement(&next) / e0;
            states.push(next.iter().map(|v| v + shift).collect());
            errors.push(err);
            if !err.is_finite() || err > DIVERGENCE_CUTOFF {
                aborted = true;
                break;
            }
            if err <= cfg.tol {
                settled_at = Some(k);
            }
            hist.rotate_right(1);
            hist[0] = next;
        }
        let last = *errors.last().unwrap();
        let diverged = aborted || (settled_at.is_none() && last >= 1.0);
        Ok(Trajectory { states, errors, xbar, tol: cfg.tol, settled_at, diverged })
    }
}

fn row_sums_near(g: &SymMatrix, target: f64) -> bool {
    (0..g.n()).all(|i| (g.as_matrix().row(i).iter().sum::<f64>() - target).abs() <= 1e-9)
}

/// Memory consensus `x(k+1) = ((1+θ0)I − αL)x(k) + Σ_{m≥1} θm x(k−m)`.
pub fn simulate_memory(l: &SymMatrix, p: &MemoryParams, cfg: &SimConfig) -> Result<Trajectory> {
    let th = p.theta();
    let mut lags = vec![(1.0 + th[0], -p.alpha)];
    lags.extend(th[1..].iter().map(|&t| (t, 0.0)));
    LinearScheme { g: l, phases: vec![lags] }.run(cfg)
}

/// Simulates a tagged protocol. Mem and GMem expect a weight matrix (rows sum
/// to 1); the other kinds expect a Laplacian (rows sum to 0).
pub fn simulate_weight_scheme(g: &SymMatrix, params: &ProtocolParams, cfg: &SimConfig) -> Result<Trajectory> {
    let kind = params.kind();
    let wants_weights = matches!(kind, ProtocolKind::Mem | ProtocolKind::GMem);
    if !row_sums_near(g, if wants_weights { 1.0 } else { 0.0 }) {
        return Err(Error::KindMismatch(kind.tag()));
    }
    let phases = match *params {
        ProtocolParams::Bc { eps } => vec![vec![(1.0, -eps)]],
        ProtocolParams::Gf { gains } => gains.iter().map(|&e| vec![(1.0, -e)]).collect(),
        ProtocolParams::Mem { alpha } => vec![vec![(0.0, 1.0 - alpha), (alpha, 0.0)]],
        ProtocolParams::GMem { alpha, beta1, beta2, beta3 } => {
            vec![vec![(alpha * beta2, 1.0 - alpha + alpha * beta3), (alpha * beta1, 0.0)]]
        }
        ProtocolParams::FirMem { beta0, beta1 } => vec![vec![(1.0, -beta0), (0.0, -beta1)]],
        ProtocolParams::OptMem(ref p) => return simulate_memory(g, p, cfg),
    };
    LinearScheme { g, phases }.run(cfg)
}

/// Simulates on a graph, choosing the Metropolis–Hastings weights or the
/// Laplacian as the protocol requires.
pub fn simulate_on_graph(graph: &Graph, params: &ProtocolParams, cfg: &SimConfig) -> Result<Trajectory> {
    let g = match params.kind() {
        ProtocolKind::Mem | ProtocolKind::GMem => graph.metropolis_weights(),
        _ => graph.laplacian(),
    };
    simulate_weight_scheme(&g, params, cfg)
}

/// `(e[k_hi] / e[k_lo])^{1/(k_hi − k_lo)}`; 0 when the window already hit zero error.
pub fn empirical_rate(t: &Trajectory, k_lo: usize, k_hi: usize) -> Result<f64> {
    if k_lo >= k_hi || k_hi >= t.errors.len() {
        return Err(Error::InvalidInput(format!(
            "window [{k_lo}, {k_hi}] invalid for {} recorded steps",
            t.errors.len()
        )));
    }
    let (lo, hi) = (t.errors[k_lo], t.errors[k_hi]);
    if lo == 0.0 || hi == 0.0 {
        return Ok(0.0);
    }
    Ok((hi / lo).powf(1.0 / (k_hi - k_lo) as f64))
}

/// Window `[min(20, k_hi/2), k_hi]` with `k_hi = min(120, last positive error)`,
/// both ends snapped to multiples of `period`.
pub fn default_window(t: &Trajectory, period: usize) -> Option<(usize, usize)> {
    let period = period.max(1);
    let last = t.errors.iter().rposition(|&e| e > 0.0)?;
    let k_hi = last.min(120) / period * period;
    let k_lo = 20.min(k_hi / 2).div_ceil(period) * period;
    (k_lo < k_hi).then_some((k_lo, k_hi))
}

/// Empirical rate over [`default_window`]; `None` when the run is too short.
pub fn default_empirical_rate(t: &Trajectory, period: usize) -> Option<f64> {
    let (lo, hi) = default_window(t, period)?;
    empirical_rate(t, lo, hi).ok()
}

pub fn settling_steps(t: &Trajectory) -> Option<usize> {
    t.settled_at
}
