//! Parameter choices and convergence rates for the consensus schemes.
//!
//! | kind    | update                                                  | rate                          |
//! |---------|---------------------------------------------------------|-------------------------------|
//! | BC      | `x ← (I − εL)x`                                          | `(λN−λ2)/(λN+λ2)`             |
//! | GF      | `x ← (I − ε_{k mod 3} L)x`                                | cube root of the period gain  |
//! | Mem     | `x(k+1) = (1−α)Wx(k) + αx(k−1)`                          | `ρ/(1+√(1−ρ²))`               |
//! | GMem    | `x(k+1) = (1−α+αβ3)Wx(k) + αβ2 x(k) + αβ1 x(k−1)`        | same as Mem                   |
//! | FIRMem  | `x(k+1) = x(k) − β0 L x(k) − β1 L x(k−1)`                | `(λN−λ2)/(3λ2+λN)`            |
//! | OptMem  | one-tap memory with `θ1 = −θ0`                           | `(√κ−1)/(√κ+1)`, `κ = λN/λ2`  |
//!
//! Laplacian-based kinds take `(λ2, λN)`; weight-based kinds take `ρ = ρ_s(W)`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polynomial::{build_h1, build_hi, MemoryParams};
use crate::spectral::{rho_s_weight, sym_eigenvalues, Spectrum, DEFAULT_JACOBI_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Bc,
    Gf,
    Mem,
    GMem,
    FirMem,
    OptMem,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 6] = [Self::Bc, Self::Gf, Self::Mem, Self::GMem, Self::FirMem, Self::OptMem];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Bc => "bc",
            Self::Gf => "gf",
            Self::Mem => "mem",
            Self::GMem => "gmem",
            Self::FirMem => "firmem",
            Self::OptMem => "optmem",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolParams {
    Bc { eps: f64 },
    Gf { gains: [f64; 3] },
    Mem { alpha: f64 },
    GMem { alpha: f64, beta1: f64, beta2: f64, beta3: f64 },
    FirMem { beta0: f64, beta1: f64 },
    OptMem(MemoryParams),
}

impl ProtocolParams {
    pub fn kind(&self) -> ProtocolKind {
        match self {
            Self::Bc { .. } => ProtocolKind::Bc,
            Self::Gf { .. } => ProtocolKind::Gf,
            Self::Mem { .. } => ProtocolKind::Mem,
            Self::GMem { .. } => ProtocolKind::GMem,
            Self::FirMem { .. } => ProtocolKind::FirMem,
            Self::OptMem(_) => ProtocolKind::OptMem,
        }
    }
}

fn check_pair(l2: f64, ln: f64) -> Result<()> {
    if !(l2 > 0.0 && l2 <= ln && ln.is_finite()) {
        return Err(Error::InvalidSpectrum(format!("need 0 < λ2 <= λN, got ({l2}, {ln})")));
    }
    Ok(())
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidInput(format!("ρ_s = {rho} outside [0, 1]")));
    }
    Ok(())
}

pub fn params_and_rate_bc(l2: f64, ln: f64) -> Result<(ProtocolParams, f64)> {
    check_pair(l2, ln)?;
    Ok((ProtocolParams::Bc { eps: 2.0 / (l2 + ln) }, (ln - l2) / (ln + l2)))
}

pub fn params_and_rate_gf(l2: f64, ln: f64) -> Result<(ProtocolParams, f64)> {
    check_pair(l2, ln)?;
    let mut gains = [0.0; 3];
    for (k, g) in gains.iter_mut().enumerate() {
        let c = ((2 * k + 1) as f64 * PI / 6.0).cos();
        *g = 2.0 / ((ln - l2) * c + ln + l2);
    }
    if l2 == ln {
        return Ok((ProtocolParams::Gf { gains }, 0.0));
    }
    let s = (ln / l2).sqrt();
    let denom = (1.0 - 2.0 / (s + 1.0)).powi(3) + (1.0 + 2.0 / (s - 1.0)).powi(3);
    Ok((ProtocolParams::Gf { gains }, (2.0 / denom).cbrt()))
}

pub fn params_and_rate_mem(rho: f64) -> Result<(ProtocolParams, f64)> {
    check_rho(rho)?;
    let s = (1.0 - rho * rho).sqrt();
    Ok((ProtocolParams::Mem { alpha: (s - 1.0) / (s + 1.0) }, rho / (1.0 + s)))
}

/// `eps` is the free parameter of the scheme; the rate does not depend on it.
pub fn params_and_rate_gmem(rho: f64, eps: f64) -> Result<(ProtocolParams, f64)> {
    check_rho(rho)?;
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::InvalidInput("GMem free parameter must be nonzero".into()));
    }
    let (alpha, gamma) = if rho == 0.0 {
        (0.0, 0.0)
    } else {
        let s = (1.0 - rho * rho).sqrt();
        let num = (2.0 - rho * rho - 2.0 * s).max(0.0);
        (num / (eps * rho * rho), num.sqrt() / rho)
    };
    Ok((ProtocolParams::GMem { alpha, beta1: -eps, beta2: 0.0, beta3: 1.0 + eps }, gamma))
}

pub fn params_and_rate_firmem(l2: f64, ln: f64) -> Result<(ProtocolParams, f64)> {
    check_pair(l2, ln)?;
    let d = ln + 3.0 * l2;
    let beta0 = (l2 + 3.0 * ln) / (ln * d);
    let beta1 = (ln - l2).powi(2) / (ln * d * d);
    Ok((ProtocolParams::FirMem { beta0, beta1 }, (ln - l2) / d))
}

/// `(√κ−1)/(√κ+1)` with `κ = hi/lo`.
fn optimal_rate(lo: f64, hi: f64) -> f64 {
    let s = (hi / lo).sqrt();
    (s - 1.0) / (s + 1.0)
}

fn optimal_one_tap(lo: f64, hi: f64, taps: usize) -> Result<(MemoryParams, f64)> {
    check_pair(lo, hi)?;
    let gamma = optimal_rate(lo, hi);
    let alpha = 4.0 / (hi.sqrt() + lo.sqrt()).powi(2);
    let theta0 = gamma * gamma;
    let mut theta = vec![0.0; taps + 1];
    theta[0] = theta0;
    theta[1] = -theta0;
    Ok((MemoryParams::new(alpha, theta)?, gamma))
}

/// Optimal one-tap parameters and rate for Laplacian eigenvalues in `[λ2, λN]`.
pub fn optmem_m1(l2: f64, ln: f64) -> Result<(MemoryParams, f64)> {
    optimal_one_tap(l2, ln, 1)
}

/// Optimal two-tap parameters; the second tap is zero and the rate equals the one-tap optimum.
pub fn optmem_m2(l2: f64, ln: f64) -> Result<(MemoryParams, f64)> {
    optimal_one_tap(l2, ln, 2)
}

/// Parameters minimizing the worst rate over every graph whose nonzero
/// Laplacian eigenvalues lie in `[lo, hi]`, for `M ≥ 1` taps.
pub fn optmem_worstcase(lo: f64, hi: f64, taps: usize) -> Result<(MemoryParams, f64)> {
    if taps == 0 {
        return Err(Error::InvalidInput("worst-case design needs M >= 1".into()));
    }
    optimal_one_tap(lo, hi, taps)
}

/// Rate as the largest root modulus over `h1` and every `h_i`, `i ≥ 2`.
pub fn rate_theorem1(spectrum: &Spectrum, p: &MemoryParams) -> Result<f64> {
    if spectrum.n() < 2 {
        return Err(Error::InvalidSpectrum("need at least two eigenvalues".into()));
    }
    let h1 = build_h1(p);
    let mut worst = if h1.degree() >= 1 { h1.max_modulus_root()? } else { 0.0 };
    for &l in &spectrum.values()[1..] {
        worst = worst.max(build_hi(p, l).max_modulus_root()?);
    }
    Ok(worst)
}

/// Rate from `h1`, `h2` and `hN` only; valid for `M ≤ 2`.
pub fn rate_theorem2(l2: f64, ln: f64, p: &MemoryParams) -> Result<f64> {
    check_pair(l2, ln)?;
    if p.taps() > 2 {
        return Err(Error::UnsupportedDegree { degree: p.taps() + 1, max: 3 });
    }
    let h1 = build_h1(p);
    let mut worst = if h1.degree() >= 1 { h1.max_modulus_root()? } else { 0.0 };
    for l in [l2, ln] {
        worst = worst.max(build_hi(p, l).max_modulus_root()?);
    }
    Ok(worst)
}

/// `(γ_Mem, γ1*, γ_Mem − γ1*)` for the weight matrix `W = I − L`.
pub fn corollary2_gap(l2: f64, ln: f64) -> Result<(f64, f64, f64)> {
    check_pair(l2, ln)?;
    let rho = (1.0 - l2).abs().max((1.0 - ln).abs());
    if rho >= 1.0 {
        return Err(Error::Divergent(rho));
    }
    let (_, mem) = params_and_rate_mem(rho)?;
    let opt = optimal_rate(l2, ln);
    Ok((mem, opt, mem - opt))
}

/// `γ_FIRMem / γ1*`.
pub fn remark3_ratio(l2: f64, ln: f64) -> Result<f64> {
    check_pair(l2, ln)?;
    if l2 == ln {
        return Ok(1.0);
    }
    Ok(1.0 + (2.0 * (ln * l2).sqrt() - 2.0 * l2) / (3.0 * l2 + ln))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateSource {
    ClosedForm,
    Theorem1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmRate {
    pub kind: ProtocolKind,
    pub params: ProtocolParams,
    pub gamma: f64,
    pub source: RateSource,
}

impl AlgorithmRate {
    pub fn divergent(&self) -> bool {
        self.gamma >= 1.0
    }
}

/// One column of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub lambda2: f64,
    pub lambda_n: f64,
    pub rho_s: f64,
    pub rates: Vec<AlgorithmRate>,
}

impl RateReport {
    pub fn eigenratio(&self) -> f64 {
        self.lambda2 / self.lambda_n
    }

    pub fn get(&self, kind: ProtocolKind) -> &AlgorithmRate {
        self.rates.iter().find(|r| r.kind == kind).expect("every kind is reported")
    }

    /// Closed-form rates from `(λ2, λN)` and `ρ_s(W)`.
    pub fn from_values(l2: f64, ln: f64, rho_s: f64, gmem_eps: f64) -> Result<Self> {
        let closed = |kind, (params, gamma): (ProtocolParams, f64)| AlgorithmRate {
            kind,
            params,
            gamma,
            source: RateSource::ClosedForm,
        };
        let (opt, opt_gamma) = optmem_m1(l2, ln)?;
        let rates = vec![
            closed(ProtocolKind::Bc, params_and_rate_bc(l2, ln)?),
            closed(ProtocolKind::Gf, params_and_rate_gf(l2, ln)?),
            closed(ProtocolKind::Mem, params_and_rate_mem(rho_s)?),
            closed(ProtocolKind::GMem, params_and_rate_gmem(rho_s, gmem_eps)?),
            closed(ProtocolKind::FirMem, params_and_rate_firmem(l2, ln)?),
            closed(ProtocolKind::OptMem, (ProtocolParams::OptMem(opt), opt_gamma)),
        ];
        Ok(Self { lambda2: l2, lambda_n: ln, rho_s, rates })
    }
}

/// All six rates for a graph, with Metropolis–Hastings weights for the
/// weight-based schemes. Rates `≥ 1` mark divergence.
pub fn table2_report(g: &Graph) -> Result<RateReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let spec = sym_eigenvalues(&g.laplacian(), DEFAULT_JACOBI_TOL)?;
    let (l2, ln) = spec.extreme_nonzero(None)?;
    // a weight eigenvalue of −1 (bipartite regular graphs) comes back within
    // rounding of modulus 1; report it as exactly 1 so divergence is flagged
    let mut rho = rho_s_weight(&g.metropolis_weights())?;
    if (rho - 1.0).abs() <= 1e-9 {
        rho = 1.0;
    }
    RateReport::from_values(l2, ln, rho, 1.0)
}
