//! Gain margin of a single controller over an interval of plant gains, and the
//! worst-case rate bound it implies.
//!
//! For a plant with unstable poles and non-minimum-phase zeros `c_i`
//! (`Re c_i > 0`) and interpolation values `b_i`,
//!
//! ```text
//! B1[i][j] = 1 / (c_i + conj(c_j))
//! B2[i][j] = b_i conj(b_j) / (c_i + conj(c_j))
//! γ_inf    = sqrt(λ_max(B1⁻¹ B2))
//! k_sup    = ((γ_inf + 1) / (γ_inf − 1))²
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polynomial::{build_h1, MemoryParams, Polynomial};
use crate::spectral::jacobi;

#[derive(Debug, Clone, PartialEq)]
pub struct MarginData {
    c: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl MarginData {
    pub fn new(c: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() || c.len() != b.len() {
            return Err(Error::InvalidInput("margin data needs equal, nonzero lengths".into()));
        }
        if c.iter().any(|z| !(z.re > 0.0)) {
            return Err(Error::InvalidInput("interpolation points must lie in Re s > 0".into()));
        }
        Ok(Self { c, b })
    }

    pub fn real(c: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            c.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            b.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }
}

type CMatrix = Vec<Vec<Complex64>>;

/// Lower-triangular `L` with `A = L Lᴴ`.
fn cholesky(a: &CMatrix) -> Result<CMatrix> {
    let n = a.len();
    let scale = (0..n).fold(0.0_f64, |m, i| m.max(a[i][i].re.abs()));
    let mut l = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k].conj();
        }
        if d.re <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        let djj = d.re.sqrt();
        l[j][j] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L X = B` column by column for lower-triangular `L`.
fn forward_solve(l: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = l.len();
    let mut x = b.clone();
    for col in 0..n {
        for i in 0..n {
            let mut s = b[i][col];
            for k in 0..i {
                s -= l[i][k] * x[k][col];
            }
            x[i][col] = s / l[i][i];
        }
    }
    x
}

fn conj_transpose(a: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// Largest eigenvalue of a Hermitian matrix via its real symmetric embedding
/// `[[Re, −Im], [Im, Re]]` (every eigenvalue appears twice).
fn hermitian_max_eigenvalue(h: &CMatrix) -> Result<f64> {
    let n = h.len();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // symmetrize away rounding asymmetry
            let z = (h[i][j] + h[j][i].conj()) * 0.5;
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let ev = jacobi(m, 1e-15)?;
    Ok(ev.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `sqrt(λ_max(B1⁻¹B2))` through the Cholesky factor of `B1`:
/// the pencil `B2 v = μ B1 v` has the spectrum of `L⁻¹ B2 L⁻ᴴ`.
pub fn gamma_inf(d: &MarginData) -> Result<f64> {
    let n = d.c.len();
    let mut b1 = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut b2 = b1.clone();
    for i in 0..n {
        for j in 0..n {
            let denom = d.c[i] + d.c[j].conj();
            b1[i][j] = 1.0 / denom;
            b2[i][j] = d.b[i] * d.b[j].conj() / denom;
        }
    }
    let l = cholesky(&b1)?;
    let y = forward_solve(&l, &b2); // L⁻¹ B2
    let c = conj_transpose(&forward_solve(&l, &conj_transpose(&y))); // L⁻¹ B2 L⁻ᴴ
    let mu = hermitian_max_eigenvalue(&c)?;
    if mu < -1e-10 {
        return Err(Error::InvalidInput(format!("negative pencil eigenvalue {mu:e}")));
    }
    Ok(mu.max(0.0).sqrt())
}

/// Largest admissible gain ratio; `None` means unbounded.
pub fn k_sup(gamma_inf_val: f64, stable_or_minphase: bool) -> Option<f64> {
    if stable_or_minphase || gamma_inf_val <= 1.0 {
        return None;
    }
    Some(((gamma_inf_val + 1.0) / (gamma_inf_val - 1.0)).powi(2))
}

/// Point-evaluated rational function `num / den`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Rational {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }
}

/// Coprime factors `U`, `V` of the mapped plant with Bezout partners `Y_u`, `Y_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoprimeFactorization {
    pub u: Rational,
    pub v: Rational,
    pub y_u: f64,
    pub y_v: f64,
}

impl CoprimeFactorization {
    /// Factorization for radius `r` and lower gain `lambda_lo`.
    pub fn new(r: f64, lambda_lo: f64) -> Result<Self> {
        check_radius(r)?;
        if !(lambda_lo > 0.0) {
            return Err(Error::InvalidInput("lower gain must be positive".into()));
        }
        let q = (1.0 + r) / (1.0 - r);
        let den = Polynomial::new(vec![1.0, 1.0])?;
        Ok(Self {
            u: Rational { num: Polynomial::new(vec![-1.0, 1.0])?.scale(lambda_lo / (1.0 - r)), den: den.clone() },
            v: Rational { num: Polynomial::new(vec![q, -1.0])?, den },
            y_u: (1.0 - r) / (lambda_lo * r),
            y_v: (1.0 - r) / r,
        })
    }

    /// `|U·Y_u + V·Y_v − 1|` maximized over the sample points.
    pub fn bezout_residual(&self, samples: &[Complex64]) -> f64 {
        samples
            .iter()
            .map(|&s| (self.u.eval(s) * self.y_u + self.v.eval(s) * self.y_v - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("radius {r} outside (0, 1)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma5Margin {
    pub data: MarginData,
    pub gamma_inf: f64,
    pub k_sup: f64,
    pub bezout_residual: f64,
}

/// Optimal gain margin for rate radius `r`: `γ_inf = 1/r`, `k_sup = ((1+r)/(1−r))²`.
pub fn lemma5_margin(r: f64) -> Result<Lemma5Margin> {
    check_radius(r)?;
    let fac = CoprimeFactorization::new(r, 1.0)?;
    let zeros = [1.0, (1.0 + r) / (1.0 - r)];
    let c: Vec<Complex64> = zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let b: Vec<Complex64> = c.iter().map(|&s| fac.u.eval(s) * fac.y_u).collect();
    let data = MarginData::new(c, b)?;
    let g = gamma_inf(&data)?;
    let k = k_sup(g, false).ok_or_else(|| Error::InvalidInput(format!("γ_inf = {g} <= 1")))?;
    let samples: Vec<Complex64> = [0.0, 0.3, 1.0, 2.5, 10.0, -0.7, -4.0]
        .iter()
        .map(|&w| Complex64::new(0.0, w))
        .collect();
    Ok(Lemma5Margin { data, gamma_inf: g, k_sup: k, bezout_residual: fac.bezout_residual(&samples) })
}

/// Smallest `r` with `((1+r)/(1−r))² ≥ ratio`.
pub fn worstcase_rate_lower_bound(ratio: f64) -> Result<f64> {
    if !(ratio >= 1.0) || !ratio.is_finite() {
        return Err(Error::InvalidInput(format!("gain ratio {ratio} must be >= 1")));
    }
    let s = ratio.sqrt();
    Ok((s - 1.0) / (s + 1.0))
}

/// Denominator of the closed loop `αλz^M / h(z; λ)`: `(z−1)h1(z) + αλz^M`.
pub fn closed_loop_poly(p: &MemoryParams, lambda: f64) -> Polynomial {
    let open = &Polynomial::linear_root(1.0) * &build_h1(p);
    &open + &Polynomial::monomial(p.taps()).scale(p.alpha * lambda)
}
