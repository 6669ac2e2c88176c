//! Real polynomials, memory parameters and the augmented consensus matrix.
//!
//! Coefficients are stored in ascending order (`coeffs[k]` multiplies `z^k`).
//! For memory parameters `θ = [θ0, …, θM]` with `Σ θm = 0` the augmented
//! state matrix factors as
//!
//! ```text
//! det(zI − Φ) = (z − 1) · h1(z) · Π_{i≥2} h_i(z)
//! h1(z)  = z^M − θ0 z^{M−1} − (θ0+θ1) z^{M−2} − … − (θ0+…+θ_{M−1})
//! h_i(z) = z^{M+1} − (1 + θ0 − αλ_i) z^M − Σ_{m≥1} θm z^{M−m}
//! ```
//!
//! where `λ_i` runs over the nonzero Laplacian eigenvalues.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::linalg::{det_shifted, Matrix};
use crate::spectral::{general_eigenvalues, hessenberg_eigenvalues, Spectrum};

/// Largest augmented dimension `N(M+1)` accepted by [`build_phi`].
pub const PHI_DIM_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// From ascending coefficients; trailing zeros are trimmed.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
        }
        Ok(Self::trimmed(coeffs))
    }

    pub fn from_descending(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    fn trimmed(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c }
    }

    /// `z − r`.
    pub fn linear_root(r: f64) -> Self {
        Self { coeffs: vec![-r, 1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::trimmed(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::trimmed(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// All complex roots with multiplicity.
    ///
    /// Exact zero low-order coefficients are split off as roots at the origin;
    /// the remainder goes through its companion matrix.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Err(Error::InvalidInput("roots of a constant polynomial".into()));
        }
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        let rest = &self.coeffs[zeros..];
        let d = rest.len() - 1;
        let lead = rest[d];
        match d {
            0 => {}
            1 => out.push(Complex64::new(-rest[0] / lead, 0.0)),
            _ => {
                let mut c = Matrix::zeros(d, d);
                for j in 0..d {
                    c[(0, j)] = -rest[d - 1 - j] / lead;
                }
                for i in 1..d {
                    c[(i, i - 1)] = 1.0;
                }
                out.extend(hessenberg_eigenvalues(c)?);
            }
        }
        Ok(out)
    }

    /// Largest root modulus; the polynomial's roots all lie in the closed disc of this radius.
    pub fn max_modulus_root(&self) -> Result<f64> {
        Ok(self.roots()?.iter().fold(0.0, |m, z| m.max(z.norm())))
    }

    /// All roots strictly inside the unit circle.
    pub fn is_schur_stable(&self) -> Result<bool> {
        Ok(self.max_modulus_root()? < 1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && !(first && k == 0) {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a == 1.0 => {}
                _ => write!(f, "{a}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
        Polynomial::trimmed((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::trimmed(out)
    }
}

/// Gain `α` and memory taps `θ = [θ0, …, θM]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryParams {
    pub alpha: f64,
    theta: Vec<f64>,
}

impl MemoryParams {
    /// Requires a nonempty `θ` summing to zero within `1e-12`.
    pub fn new(alpha: f64, theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidInput("theta needs at least θ0".into()));
        }
        if !alpha.is_finite() || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("non-finite memory parameter".into()));
        }
        let sum: f64 = theta.iter().sum();
        if sum.abs() > 1e-12 {
            return Err(Error::ThetaSum(sum));
        }
        Ok(Self { alpha, theta })
    }

    /// Memoryless gain `α` (`M = 0`, `θ = [0]`).
    pub fn memoryless(alpha: f64) -> Self {
        Self { alpha, theta: vec![0.0] }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Number of memory taps `M`.
    pub fn taps(&self) -> usize {
        self.theta.len() - 1
    }
}

pub fn build_h1(p: &MemoryParams) -> Polynomial {
    let m = p.taps();
    let mut c = vec![0.0; m + 1];
    c[m] = 1.0;
    let mut partial = 0.0;
    for k in 0..m {
        partial += p.theta[k];
        c[m - 1 - k] = -partial;
    }
    Polynomial::trimmed(c)
}

pub fn build_hi(p: &MemoryParams, lambda: f64) -> Polynomial {
    let m = p.taps();
    let mut c = vec![0.0; m + 2];
    c[m + 1] = 1.0;
    c[m] = -(1.0 + p.theta[0] - p.alpha * lambda);
    for k in 1..=m {
        c[m - k] = -p.theta[k];
    }
    Polynomial::trimmed(c)
}

/// The augmented matrix of the `M`-tap recurrence, acting on
/// `X(k) = [x(k); x(k−1); …; x(k−M)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSystem {
    pub phi: Matrix,
    pub n_agents: usize,
    pub taps: usize,
}

pub fn build_phi(l: &SymMatrix, p: &MemoryParams) -> Result<AugmentedSystem> {
    let n = l.n();
    let m = p.taps();
    let dim = n
        .checked_mul(m + 1)
        .filter(|&d| d <= PHI_DIM_CAP)
        .ok_or(Error::DimensionTooLarge { dim: n.saturating_mul(m + 1), cap: PHI_DIM_CAP })?;
    let mut phi = Matrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            phi[(i, j)] = -p.alpha * l.get(i, j);
        }
        phi[(i, i)] += 1.0 + p.theta[0];
        for k in 1..=m {
            phi[(i, k * n + i)] = p.theta[k];
        }
    }
    for k in 1..=m {
        for i in 0..n {
            phi[(k * n + i, (k - 1) * n + i)] = 1.0;
        }
    }
    Ok(AugmentedSystem { phi, n_agents: n, taps: m })
}

/// Second largest eigenvalue modulus of `Φ`: the eigenvalue nearest 1 is
/// removed and the largest remaining modulus returned.
pub fn rho_s_phi(sys: &AugmentedSystem) -> Result<f64> {
    let mut ev = general_eigenvalues(&sys.phi)?;
    if ev.len() < 2 {
        return Ok(0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    let idx = (0..ev.len())
        .min_by(|&a, &b| (ev[a] - one).norm().total_cmp(&(ev[b] - one).norm()))
        .unwrap();
    ev.swap_remove(idx);
    Ok(ev.iter().fold(0.0, |m, z| m.max(z.norm())))
}

/// Max relative mismatch between `det(zI − Φ)` and `(z−1)·h1(z)·Π_{i≥2} h_i(z)`
/// over the sample points. `spectrum` is the Laplacian spectrum; its smallest
/// value is taken as the zero eigenvalue.
pub fn verify_charpoly_factorization(
    sys: &AugmentedSystem,
    p: &MemoryParams,
    spectrum: &Spectrum,
    z_samples: &[Complex64],
) -> Result<f64> {
    if spectrum.n() != sys.n_agents || p.taps() != sys.taps {
        return Err(Error::InvalidInput("spectrum/params do not match the system".into()));
    }
    let h1 = build_h1(p);
    let his: Vec<Polynomial> = spectrum.values()[1..].iter().map(|&l| build_hi(p, l)).collect();
    let mut worst = 0.0_f64;
    for &z in z_samples {
        let lhs = det_shifted(&sys.phi, z);
        let rhs = his.iter().fold((z - 1.0) * h1.eval(z), |acc, h| acc * h.eval(z));
        if rhs.norm() == 0.0 || lhs.norm() == 0.0 || !rhs.is_finite() {
            return Err(Error::SingularEvaluation);
        }
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(worst)
}

/// Left eigenvector `φ1` of `Φ` for eigenvalue 1 with `φ1 · 1 = 1`.
///
/// For a connected graph the first block is proportional to the all-ones
/// vector, and the block equations give the remaining blocks as
/// `−c Σ_{j<m} θj · 1`.
pub fn consensus_left_eigenvector(p: &MemoryParams, l: &SymMatrix) -> Result<Vec<f64>> {
    let n = l.n();
    let m = p.taps();
    let denom = build_h1(p).eval_real(1.0);
    if denom.abs() <= 1e-12 {
        return Err(Error::DegenerateNormalization(denom));
    }
    let c = 1.0 / (n as f64 * denom);
    let mut out = Vec::with_capacity(n * (m + 1));
    let mut partial = 0.0;
    for k in 0..=m {
        let block = if k == 0 { c } else { -c * partial };
        out.extend(std::iter::repeat(block).take(n));
        partial += p.theta[k];
    }
    Ok(out)
}
