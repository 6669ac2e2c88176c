//! Root-location tests: disc-to-half-plane mapping, Routh arrays and
//! corner checks for interval polynomials.

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// Substitute for an exact zero pivot in the Routh first column.
pub const ROUTH_EPSILON: f64 = 1e-30;

/// Highest degree for which corner stability decides a discrete-time interval family.
pub const KHARITONOV_MAX_DEGREE: usize = 3;

/// `f(s) = (s−1)^d · h(γ(s+1)/(s−1))`.
///
/// Roots of `h` in the closed disc of radius `γ` map to roots of `f` in the
/// closed left half-plane.
pub fn bilinear_to_halfplane(h: &Polynomial, gamma: f64) -> Polynomial {
    let d = h.degree();
    let plus = Polynomial::new(vec![1.0, 1.0]).unwrap();
    let minus = Polynomial::new(vec![-1.0, 1.0]).unwrap();
    let mut plus_pows = vec![Polynomial::constant(1.0)];
    let mut minus_pows = vec![Polynomial::constant(1.0)];
    for k in 1..=d {
        plus_pows.push(&plus_pows[k - 1] * &plus);
        minus_pows.push(&minus_pows[k - 1] * &minus);
    }
    let mut f = Polynomial::constant(0.0);
    let mut gk = 1.0;
    for (k, &hk) in h.coeffs().iter().enumerate() {
        if hk != 0.0 {
            let term = (&plus_pows[k] * &minus_pows[d - k]).scale(hk * gk);
            f = &f + &term;
        }
        gk *= gamma;
    }
    f
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouthTable {
    /// Row `k` corresponds to `s^{n−k}`.
    pub rows: Vec<Vec<f64>>,
    /// A zero pivot in a nonzero row was replaced by [`ROUTH_EPSILON`].
    pub epsilon_substituted: bool,
    /// A row vanished and was rebuilt from the auxiliary polynomial's derivative.
    pub zero_row: bool,
}

impl RouthTable {
    pub fn first_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    pub fn sign_changes(&self) -> usize {
        let col = self.first_column();
        let signs: Vec<f64> = col.iter().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub fn routh_table(f: &Polynomial) -> Result<RouthTable> {
    let n = f.degree();
    if n == 0 || f.leading() == 0.0 {
        return Err(Error::InvalidInput("Routh table needs degree >= 1".into()));
    }
    let width = n / 2 + 1;
    let desc: Vec<f64> = f.coeffs().iter().rev().copied().collect();
    let mut rows = vec![vec![0.0; width]; n + 1];
    for (k, &c) in desc.iter().enumerate() {
        rows[k % 2][k / 2] = c;
    }
    let mut epsilon_substituted = false;
    let mut zero_row = false;
    for i in 2..=n {
        if rows[i - 1].iter().all(|&v| v == 0.0) {
            // auxiliary polynomial from the row above, in powers p, p−2, …
            let p = n - (i - 2);
            let upper = rows[i - 2].clone();
            for (j, slot) in rows[i - 1].iter_mut().enumerate() {
                let pow = p as isize - 2 * j as isize;
                *slot = if pow > 0 { pow as f64 * upper[j] } else { 0.0 };
            }
            zero_row = true;
        }
        if rows[i - 1][0] == 0.0 {
            rows[i - 1][0] = ROUTH_EPSILON;
            epsilon_substituted = true;
        }
        let (upper, lower) = (rows[i - 2].clone(), rows[i - 1].clone());
        for j in 0..width {
            let u = upper.get(j + 1).copied().unwrap_or(0.0);
            let l = lower.get(j + 1).copied().unwrap_or(0.0);
            rows[i][j] = (lower[0] * u - upper[0] * l) / lower[0];
        }
    }
    for (k, row) in rows.iter_mut().enumerate() {
        row.truncate((n - k) / 2 + 1);
    }
    Ok(RouthTable { rows, epsilon_substituted, zero_row })
}

/// Left half-plane test for the roots of `f`.
///
/// Non-strict mode admits imaginary-axis roots: degree ≤ 2 uses the
/// same-sign coefficient test, higher degrees require no negative entry in the
/// sign-normalized Routh first column. Strict mode requires a strictly
/// positive first column built without any zero-pivot repair.
pub fn halfplane_stable(f: &Polynomial, strict: bool) -> Result<bool> {
    let n = f.degree();
    if n == 0 {
        return Err(Error::InvalidInput("stability test needs degree >= 1".into()));
    }
    let lead_sign = f.leading().signum();
    if n <= 2 {
        let ok = f.coeffs().iter().all(|&c| {
            let c = c * lead_sign;
            if strict {
                c > 0.0
            } else {
                c >= 0.0
            }
        });
        return Ok(ok);
    }
    let table = routh_table(f)?;
    let col = table.first_column();
    Ok(if strict {
        !table.zero_row && !table.epsilon_substituted && col.iter().all(|&v| v * lead_sign > 0.0)
    } else {
        col.iter().all(|&v| v * lead_sign >= 0.0)
    })
}

/// Family `Σ a_k z^k` with `a_k ∈ [lo_k, hi_k]`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPolynomial {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl IntervalPolynomial {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() < 2 {
            return Err(Error::InvalidInput("interval bounds must have equal length >= 2".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput("interval bounds must satisfy lo <= hi".into()));
        }
        let (l, h) = (lo[lo.len() - 1], hi[hi.len() - 1]);
        if l <= 0.0 && h >= 0.0 {
            return Err(Error::InvalidInput("leading coefficient interval contains 0".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn degree(&self) -> usize {
        self.lo.len() - 1
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// All `2^{n+1}` extreme members.
    pub fn corners(&self) -> Vec<Polynomial> {
        let len = self.lo.len();
        (0..1usize << len)
            .map(|mask| {
                let c = (0..len)
                    .map(|k| if mask >> k & 1 == 1 { self.hi[k] } else { self.lo[k] })
                    .collect();
                Polynomial::new(c).unwrap()
            })
            .collect()
    }

    /// Member with coefficients `lo + t ⊙ (hi − lo)`, `t_k ∈ [0, 1]`.
    pub fn member(&self, t: &[f64]) -> Polynomial {
        let c = self
            .lo
            .iter()
            .zip(&self.hi)
            .zip(t)
            .map(|((l, h), s)| l + s * (h - l))
            .collect();
        Polynomial::new(c).unwrap()
    }
}

/// Schur stability of every member, decided by the corner polynomials.
///
/// Valid only up to degree 3; beyond that corner stability does not imply
/// stability of discrete-time interval families.
pub fn kharitonov_interval_stable(ip: &IntervalPolynomial) -> Result<bool> {
    let degree = ip.degree();
    if degree > KHARITONOV_MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree, max: KHARITONOV_MAX_DEGREE });
    }
    for corner in ip.corners() {
        if !corner.is_schur_stable()? {
            return Ok(false);
        }
    }
    Ok(true)
}
