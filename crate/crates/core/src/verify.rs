//! Self-check suites run by `memcons verify`.
//!
//! Each suite recomputes a family of reference numbers or identities and
//! reports one [`Check`] per item. Randomized suites use fixed seeds.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{gen_named, Graph, GraphFamily};
use crate::margin::{lemma5_margin, worstcase_rate_lower_bound};
use crate::polynomial::{build_hi, build_phi, rho_s_phi, verify_charpoly_factorization, MemoryParams, Polynomial};
use crate::protocols::{optmem_worstcase, rate_theorem1, table2_report, ProtocolKind, RateReport};
use crate::spectral::{sym_eigenvalues, DEFAULT_JACOBI_TOL};
use crate::stability::{bilinear_to_halfplane, halfplane_stable, kharitonov_interval_stable, routh_table, IntervalPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table2,
    Example1,
    Theorem1,
    Lemma4,
    Routh,
    Kharitonov,
    Margin,
    Worstcase,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Self::Table2,
        Self::Example1,
        Self::Theorem1,
        Self::Lemma4,
        Self::Routh,
        Self::Kharitonov,
        Self::Margin,
        Self::Worstcase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Table2 => "table2",
            Self::Example1 => "example1",
            Self::Theorem1 => "theorem1",
            Self::Lemma4 => "lemma4",
            Self::Routh => "routh",
            Self::Kharitonov => "kharitonov",
            Self::Margin => "margin",
            Self::Worstcase => "worstcase",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

/// Tolerances for comparisons against four-decimal reference values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub rate_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { rate_tol: 1e-3 }
    }
}

/// Rates of one reference column; `None` marks a divergent entry.
pub struct ReferenceColumn {
    pub name: &'static str,
    pub eigenratio: f64,
    pub rho_s: f64,
    /// bc, gf, mem, gmem, firmem, optmem
    pub rates: [Option<f64>; 6],
}

pub const REFERENCE_COLUMNS: [ReferenceColumn; 6] = [
    ReferenceColumn {
        name: "cycle8",
        eigenratio: 0.1464,
        rho_s: 1.0,
        rates: [Some(0.7445), Some(0.5610), None, None, Some(0.5930), Some(0.4465)],
    },
    ReferenceColumn {
        name: "path8",
        eigenratio: 0.0396,
        rho_s: 0.9239,
        rates: [Some(0.9239), Some(0.8183), Some(0.6682), Some(0.6682), Some(0.8585), Some(0.6682)],
    },
    ReferenceColumn {
        name: "star8",
        eigenratio: 0.1250,
        rho_s: 0.8571,
        rates: [Some(0.7778), Some(0.5994), Some(0.5657), Some(0.5657), Some(0.6364), Some(0.4776)],
    },
    ReferenceColumn {
        name: "bipartite3+5",
        eigenratio: 0.3750,
        rho_s: 0.6000,
        rates: [Some(0.4545), Some(0.3029), Some(0.3333), Some(0.3333), Some(0.2941), Some(0.2404)],
    },
    ReferenceColumn {
        name: "small-world",
        eigenratio: 0.2201,
        rho_s: 0.7211,
        rates: [Some(0.6392), Some(0.4549), Some(0.4260), Some(0.4260), Some(0.4697), Some(0.3613)],
    },
    ReferenceColumn {
        name: "scale-free",
        eigenratio: 0.2121,
        rho_s: 0.7105,
        rates: [Some(0.6501), Some(0.4650), Some(0.4170), Some(0.4170), Some(0.4815), Some(0.3694)],
    },
];

/// The four deterministic graphs of the reference table, by column name.
pub fn reference_graphs() -> Vec<(&'static str, Graph)> {
    let g = |f, n| gen_named(f, n, None).expect("fixed families are valid");
    vec![
        ("cycle8", g(GraphFamily::Cycle, 8)),
        ("path8", g(GraphFamily::Path, 8)),
        ("star8", g(GraphFamily::Star, 8)),
        ("bipartite3+5", g(GraphFamily::CompleteBipartite { p: 3, q: 5 }, 8)),
    ]
}

/// Star on nine vertices with three memory taps.
pub fn example_three_tap() -> (Graph, MemoryParams) {
    let g = gen_named(GraphFamily::Star, 9, None).expect("star is valid");
    let p = MemoryParams::new(0.258738, vec![0.293692, -0.301255, 0.0, 0.007563]).expect("taps sum to zero");
    (g, p)
}

pub const EXAMPLE_THREE_TAP_RATE: f64 = 0.3946;

fn compare_column(col: &ReferenceColumn, report: &RateReport, tol: f64, out: &mut Vec<Check>) {
    let numeric = |what: &str, got: f64, want: f64| {
        let pass = (got - want).abs() <= tol;
        check(format!("{} {what}", col.name), pass, format!("{got:.4} vs {want:.4}"))
    };
    out.push(numeric("eigenratio", report.eigenratio(), col.eigenratio));
    out.push(numeric("rho_s", report.rho_s, col.rho_s));
    for (kind, want) in ProtocolKind::ALL.into_iter().zip(col.rates) {
        let r = report.get(kind);
        out.push(match want {
            Some(w) => numeric(kind.tag(), r.gamma, w),
            None => {
                let got = if r.divergent() { "div".to_string() } else { format!("{:.4}", r.gamma) };
                check(format!("{} {}", col.name, kind.tag()), r.divergent(), format!("{got} vs div"))
            }
        });
    }
}

fn suite_table2(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for ((_, g), col) in reference_graphs().iter().zip(&REFERENCE_COLUMNS) {
        compare_column(col, &table2_report(g)?, opts.rate_tol, &mut out);
    }
    for col in &REFERENCE_COLUMNS[4..] {
        let report = RateReport::from_values(col.eigenratio, 1.0, col.rho_s, 1.0)?;
        compare_column(col, &report, opts.rate_tol, &mut out);
    }
    Ok(out)
}

fn suite_example1(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (g, p) = example_three_tap();
    let l = g.laplacian();
    let oracle = rho_s_phi(&build_phi(&l, &p)?)?;
    let roots = rate_theorem1(&sym_eigenvalues(&l, DEFAULT_JACOBI_TOL)?, &p)?;
    let tol = opts.rate_tol.min(5e-4);
    Ok(vec![
        check(
            "eigen oracle",
            (oracle - EXAMPLE_THREE_TAP_RATE).abs() <= tol,
            format!("gamma_3 = {oracle:.6}"),
        ),
        check(
            "root path",
            (roots - EXAMPLE_THREE_TAP_RATE).abs() <= tol,
            format!("gamma_3 = {roots:.6}"),
        ),
        check("agreement", (oracle - roots).abs() <= 1e-7, format!("|diff| = {:.2e}", (oracle - roots).abs())),
    ])
}

fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.25..0.8);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = Graph::new(n, edges).expect("generated edges are valid");
        if g.is_connected() {
            return g;
        }
    }
}

/// Random `(α, θ)` with `Σθ = 0` and up to `max_taps` taps.
fn random_params(rng: &mut ChaCha8Rng, max_taps: usize) -> MemoryParams {
    let m = rng.gen_range(0..=max_taps);
    let mut theta: Vec<f64> = (0..=m).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let rest: f64 = theta[1..].iter().sum();
    theta[0] = -rest;
    MemoryParams::new(rng.gen_range(0.02..0.6), theta).expect("taps sum to zero")
}

fn suite_theorem1() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    let cases = 50;
    for _ in 0..cases {
        let n = rng.gen_range(3..=10);
        let g = random_connected_graph(&mut rng, n);
        let p = random_params(&mut rng, 3);
        let l = g.laplacian();
        let a = rho_s_phi(&build_phi(&l, &p)?)?;
        let b = rate_theorem1(&sym_eigenvalues(&l, DEFAULT_JACOBI_TOL)?, &p)?;
        worst = worst.max((a - b).abs());
    }
    Ok(vec![check(
        format!("{cases} random systems"),
        worst <= 1e-7,
        format!("max |rho_s(Phi) - max root| = {worst:.2e}"),
    )])
}

fn suite_lemma4() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0_f64;
    let cases = 30;
    for _ in 0..cases {
        let n = rng.gen_range(2..=8);
        let g = random_connected_graph(&mut rng, n);
        let p = random_params(&mut rng, 3);
        let l = g.laplacian();
        let sys = build_phi(&l, &p)?;
        let spec = sym_eigenvalues(&l, DEFAULT_JACOBI_TOL)?;
        let zs: Vec<Complex64> = (0..=sys.phi.rows())
            .map(|_| Complex64::from_polar(rng.gen_range(1.5..2.5), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        worst = worst.max(verify_charpoly_factorization(&sys, &p, &spec, &zs)?);
    }
    Ok(vec![check(
        format!("{cases} random systems"),
        worst <= 1e-8,
        format!("max relative mismatch = {worst:.2e}"),
    )])
}

fn all_roots_left(f: &Polynomial) -> Result<bool> {
    Ok(f.roots()?.iter().all(|z| z.re < 0.0))
}

fn suite_routh() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut disagree = 0;
    let cases = 300;
    for _ in 0..cases {
        let mut c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        c[3] = c[3].signum() * c[3].abs().max(0.05);
        let f = Polynomial::new(c)?;
        let table = routh_table(&f)?;
        let lead = f.leading().signum();
        let routh = table.first_column().iter().all(|&v| v * lead > 0.0);
        if routh != all_roots_left(&f)? {
            disagree += 1;
        }
    }
    // boundary instance: imaginary-axis pair through a vanishing s¹ row
    let (g, t0, al) = (0.5, 0.25, 0.5);
    let h = Polynomial::from_descending(&[1.0, -(1.0 + t0 - al), t0, 0.0])?;
    let f = bilinear_to_halfplane(&h, g);
    let table = routh_table(&f)?;
    Ok(vec![
        check(format!("{cases} random cubics"), disagree == 0, format!("{disagree} disagreements with roots")),
        check(
            "boundary cubic",
            table.zero_row && halfplane_stable(&f, false)? && !halfplane_stable(&f, true)?,
            format!("first column {:?}", table.first_column()),
        ),
    ])
}

fn suite_kharitonov() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut disagree = 0;
    let cases = 60;
    for _ in 0..cases {
        let deg = rng.gen_range(1..=3);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for _ in 0..deg {
            let a = rng.gen_range(-0.6..0.6);
            let w = rng.gen_range(0.0..0.3);
            lo.push(a);
            hi.push(a + w);
        }
        lo.push(1.0);
        hi.push(1.0);
        let ip = IntervalPolynomial::new(lo, hi)?;
        if kharitonov_interval_stable(&ip)? {
            for _ in 0..200 {
                let t: Vec<f64> = (0..=deg).map(|_| rng.gen::<f64>()).collect();
                if !ip.member(&t).is_schur_stable()? {
                    disagree += 1;
                    break;
                }
            }
        }
    }
    let mut out = vec![check(
        format!("{cases} random families"),
        disagree == 0,
        format!("{disagree} families with an unstable interior member"),
    )];
    let big = IntervalPolynomial::new(vec![0.0, 0.0, 0.0, 0.0, 1.0], vec![0.1, 0.1, 0.1, 0.1, 1.0])?;
    out.push(check(
        "degree guard",
        matches!(kharitonov_interval_stable(&big), Err(Error::UnsupportedDegree { .. })),
        "degree 4 rejected",
    ));
    Ok(out)
}

fn suite_margin() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in 1..20 {
        let r = k as f64 * 0.05;
        let m = lemma5_margin(r)?;
        let want_k = ((1.0 + r) / (1.0 - r)).powi(2);
        let pass = (m.gamma_inf - 1.0 / r).abs() <= 1e-9 && (m.k_sup - want_k).abs() <= 1e-7 && m.bezout_residual <= 1e-10;
        out.push(check(
            format!("r = {r:.2}"),
            pass,
            format!("gamma_inf = {:.10}, k_sup = {:.8}", m.gamma_inf, m.k_sup),
        ));
    }
    Ok(out)
}

fn suite_worstcase() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let lo = rng.gen_range(0.1..5.0);
        let hi = lo * rng.gen_range(1.0..50.0);
        let (_, g) = optmem_worstcase(lo, hi, rng.gen_range(1..=4))?;
        worst = worst.max((worstcase_rate_lower_bound(hi / lo)? - g).abs());
    }
    let (p, g) = optmem_worstcase(1.0, 9.0, 3)?;
    let mut sup = 0.0_f64;
    for k in 0..=50 {
        let lambda = 1.0 + 8.0 * k as f64 / 50.0;
        sup = sup.max(build_hi(&p, lambda).max_modulus_root()?);
    }
    Ok(vec![
        check("bound matches design", worst <= 1e-12, format!("max |diff| = {worst:.2e}")),
        check("sup over [1, 9]", (sup - g).abs() <= 1e-9, format!("sup = {sup:.12}, gamma* = {g}")),
    ])
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::Table2 => suite_table2(opts),
        Suite::Example1 => suite_example1(opts),
        Suite::Theorem1 => suite_theorem1(),
        Suite::Lemma4 => suite_lemma4(),
        Suite::Routh => suite_routh(),
        Suite::Kharitonov => suite_kharitonov(),
        Suite::Margin => suite_margin(),
        Suite::Worstcase => suite_worstcase(),
    }
}
