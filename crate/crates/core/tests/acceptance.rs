//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{complex_det, dk_roots, h1_coeffs, hi_coeffs, laplacian_rows, max_root_modulus, random_connected_graph};
use memconsensus::margin::{lemma5_margin, worstcase_rate_lower_bound};
use memconsensus::polynomial::{build_phi, consensus_left_eigenvector, rho_s_phi, verify_charpoly_factorization};
use memconsensus::protocols::{
    corollary2_gap, optmem_m1, optmem_m2, optmem_worstcase, rate_theorem1, rate_theorem2, remark3_ratio,
    table2_report,
};
use memconsensus::sim::{empirical_rate, simulate_memory, simulate_on_graph};
use memconsensus::spectral::{sym_eigenvalues, DEFAULT_JACOBI_TOL};
use memconsensus::stability::{bilinear_to_halfplane, halfplane_stable, kharitonov_interval_stable, IntervalPolynomial};
use memconsensus::{gen_named, Graph, GraphFamily, MemoryParams, Polynomial, ProtocolKind, RateReport, SimConfig, Spectrum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

const KINDS: [ProtocolKind; 6] = ProtocolKind::ALL;

/// Published comparison table: eigenratio, ρ_s, then bc, gf, mem, gmem, firmem, optmem.
/// `None` marks a divergent entry.
struct Column {
    eigenratio: f64,
    rho: f64,
    rates: [Option<f64>; 6],
}

const G1: Column = Column { eigenratio: 0.1464, rho: 1.0, rates: [Some(0.7445), Some(0.5610), None, None, Some(0.5930), Some(0.4465)] };
const G2: Column = Column { eigenratio: 0.0396, rho: 0.9239, rates: [Some(0.9239), Some(0.8183), Some(0.6682), Some(0.6682), Some(0.8585), Some(0.6682)] };
const G3: Column = Column { eigenratio: 0.1250, rho: 0.8571, rates: [Some(0.7778), Some(0.5994), Some(0.5657), Some(0.5657), Some(0.6364), Some(0.4776)] };
const G4: Column = Column { eigenratio: 0.3750, rho: 0.6000, rates: [Some(0.4545), Some(0.3029), Some(0.3333), Some(0.3333), Some(0.2941), Some(0.2404)] };
const G5: Column = Column { eigenratio: 0.2201, rho: 0.7211, rates: [Some(0.6392), Some(0.4549), Some(0.4260), Some(0.4260), Some(0.4697), Some(0.3613)] };
const G6: Column = Column { eigenratio: 0.2121, rho: 0.7105, rates: [Some(0.6501), Some(0.4650), Some(0.4170), Some(0.4170), Some(0.4815), Some(0.3694)] };

fn deterministic_graphs() -> Vec<(&'static str, Graph, Column)> {
    let g = |f, n| gen_named(f, n, None).unwrap();
    vec![
        ("cycle8", g(GraphFamily::Cycle, 8), G1),
        ("path8", g(GraphFamily::Path, 8), G2),
        ("star8", g(GraphFamily::Star, 8), G3),
        ("bipartite3+5", g(GraphFamily::CompleteBipartite { p: 3, q: 5 }, 8), G4),
    ]
}

fn compare_report(name: &str, report: &RateReport, col: &Column, tol: f64, bad: &mut Vec<String>) {
    let num = |what: &str, got: f64, want: f64| {
        ((got - want).abs() > tol).then(|| format!("{name} {what}: {got:.5} vs {want:.4}"))
    };
    bad.extend(num("eigenratio", report.eigenratio(), col.eigenratio));
    bad.extend(num("rho_s", report.rho_s, col.rho));
    for (kind, want) in KINDS.iter().zip(col.rates) {
        let rate = report.get(*kind);
        match want {
            Some(w) if rate.divergent() => bad.push(format!("{name} {kind}: div vs {w:.4}")),
            Some(w) => bad.extend(num(kind.tag(), rate.gamma, w)),
            None if !rate.divergent() => bad.push(format!("{name} {kind}: {:.4} vs div", rate.gamma)),
            None => {}
        }
    }
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (name, g, col) in deterministic_graphs() {
        match table2_report(&g) {
            Ok(r) => compare_report(name, &r, &col, 1e-3, &mut bad),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 1.0 {
        bad.push(format!("took {secs:.2}s"));
    }
    (bad.is_empty(), format!("4 columns x 8 entries, {secs:.3}s {}", bad.join("; ")))
}

fn criterion2() -> Outcome {
    let mut bad = Vec::new();
    for (name, col) in [("small-world", G5), ("scale-free", G6)] {
        // every Laplacian-based closed form depends only on the ratio
        match RateReport::from_values(col.eigenratio, 1.0, col.rho, 1.0) {
            Ok(r) => compare_report(name, &r, &col, 1e-3, &mut bad),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    (bad.is_empty(), format!("2 columns from published eigenratio and rho_s {}", bad.join("; ")))
}

fn criterion3() -> Outcome {
    let g = gen_named(GraphFamily::Star, 9, None).unwrap();
    let theta = vec![0.293692, -0.301255, 0.0, 0.007563];
    let p = MemoryParams::new(0.258738, theta.clone()).unwrap();
    let start = Instant::now();
    let sys = build_phi(&g.laplacian(), &p).unwrap();
    let dense = rho_s_phi(&sys).unwrap();
    let spec = sym_eigenvalues(&g.laplacian(), DEFAULT_JACOBI_TOL).unwrap();
    let poly = rate_theorem1(&spec, &p).unwrap();
    let secs = start.elapsed().as_secs_f64();
    // star spectrum is {0, 1 (x7), 9}
    let oracle = [1.0, 9.0]
        .iter()
        .map(|&l| max_root_modulus(&hi_coeffs(p.alpha, &theta, l)))
        .fold(max_root_modulus(&h1_coeffs(&theta)), f64::max);
    let pass = (dense - 0.3946).abs() <= 5e-4
        && (poly - 0.3946).abs() <= 5e-4
        && (dense - poly).abs() <= 1e-7
        && (oracle - poly).abs() <= 1e-7
        && secs < 1.0;
    (pass, format!("dense {dense:.7}, polynomial {poly:.7}, root oracle {oracle:.7}, {secs:.3}s"))
}

fn random_params(rng: &mut ChaCha8Rng, taps: usize, lambda_max: f64) -> MemoryParams {
    let alpha = rng.gen_range(0.05..1.5) / lambda_max;
    let mut theta: Vec<f64> = (0..taps).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let last = -theta.iter().sum::<f64>();
    theta.push(last);
    MemoryParams::new(alpha, theta).unwrap()
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=12);
        let density = rng.gen_range(0.1..0.6);
        let g = random_connected_graph(&mut rng, n, density);
        let l = g.laplacian();
        let spec = sym_eigenvalues(&l, DEFAULT_JACOBI_TOL).unwrap();
        let taps = rng.gen_range(1..=3);
        let p = random_params(&mut rng, taps, spec.values()[n - 1]);
        let dense = rho_s_phi(&build_phi(&l, &p).unwrap()).unwrap();
        let poly = rate_theorem1(&spec, &p).unwrap();
        let oracle = spec.values()[1..]
            .iter()
            .map(|&lam| max_root_modulus(&hi_coeffs(p.alpha, p.theta(), lam)))
            .fold(max_root_modulus(&h1_coeffs(p.theta())), f64::max);
        worst = worst.max((dense - poly).abs());
        worst_oracle = worst_oracle.max((oracle - poly).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-7 && worst_oracle <= 1e-7 && secs < 30.0;
    (pass, format!("200 cases, max |dense - polynomial| {worst:.2e}, root oracle {worst_oracle:.2e}, {secs:.2}s"))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.gen_range(3..=12);
        let density = rng.gen_range(0.1..0.6);
        let g = random_connected_graph(&mut rng, n, density);
        let spec = sym_eigenvalues(&g.laplacian(), DEFAULT_JACOBI_TOL).unwrap();
        let (l2, ln) = spec.extreme_nonzero(None).unwrap();
        let taps = rng.gen_range(1..=2);
        let p = random_params(&mut rng, taps, ln);
        let full = rate_theorem1(&spec, &p).unwrap();
        let corners = rate_theorem2(l2, ln, &p).unwrap();
        worst = worst.max((full - corners).abs());
    }
    (worst <= 1e-9, format!("200 cases, max |full - corners| {worst:.2e}"))
}

/// Schur test for a monic quadratic `z^2 + a1 z + a0` scaled to radius `r`.
fn quadratic_inside(a1: f64, a0: f64, r: f64) -> bool {
    let (a1, a0) = (a1 / r, a0 / (r * r));
    a0.abs() < 1.0 && 1.0 + a1 + a0 > 0.0 && 1.0 - a1 + a0 > 0.0
}

/// Schur test for a monic cubic `z^3 + a2 z^2 + a1 z + a0` scaled to radius `r`.
fn cubic_inside(a2: f64, a1: f64, a0: f64, r: f64) -> bool {
    let (a2, a1, a0) = (a2 / r, a1 / (r * r), a0 / (r * r * r));
    1.0 + a2 + a1 + a0 > 0.0
        && 1.0 - a2 + a1 - a0 > 0.0
        && a0.abs() < 1.0
        && (a0 * a0 - 1.0).abs() > (a0 * a2 - a1).abs()
}

fn quadratic_rate(b: f64, c: f64) -> f64 {
    // roots of z^2 − b z + c
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        c.sqrt()
    } else {
        (b.abs() + disc.sqrt()) / 2.0
    }
}

/// Grid indices `k` with `k·step` strictly inside `(lo, hi)` and `k >= min_k`.
fn grid(lo: f64, hi: f64, step: f64, min_k: i64) -> std::ops::RangeInclusive<i64> {
    let a = ((lo / step).floor() as i64 + 1).max(min_k);
    let b = (hi / step).ceil() as i64 - 1;
    a..=b
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let step = 1e-3;
    let mut notes = Vec::new();
    let mut pass = true;
    for (l2, ln) in [(1.0, 9.0), (1.0, 8.0), (3.0, 8.0)] {
        let s = f64::sqrt(ln / l2);
        let gstar = (s - 1.0) / (s + 1.0);
        let r = gstar - 1e-3;

        // one tap: h1 = z − θ0, h_i = z^2 − (1+θ0−αλ) z + θ0.
        // Any point beating r has |θ0| < r and |1+θ0−αλ| < 2r at both ends.
        let mut below1 = 0usize;
        let mut best1 = f64::INFINITY;
        for t in grid(-r, r, step, i64::MIN) {
            let th0 = t as f64 * step;
            let lo = ((1.0 + th0 - 2.0 * r) / l2).max((1.0 + th0 - 2.0 * r) / ln);
            let hi = ((1.0 + th0 + 2.0 * r) / l2).min((1.0 + th0 + 2.0 * r) / ln);
            for k in grid(lo - 2.0 * step, hi + 2.0 * step, step, 1) {
                let a = k as f64 * step;
                let rate = th0
                    .abs()
                    .max(quadratic_rate(1.0 + th0 - a * l2, th0))
                    .max(quadratic_rate(1.0 + th0 - a * ln, th0));
                best1 = best1.min(rate);
                if rate < r {
                    below1 += 1;
                }
            }
        }

        // two taps with θ1 = −θ0 − θ2: h1 = z^2 − θ0 z + θ2,
        // h_i = z^3 − (1+θ0−αλ) z^2 + (θ0+θ2) z − θ2.
        // Pruned: |θ2| < r^3 (root product), |θ0| < 2r and |1+θ0−αλ| < 3r (root sums).
        let mut below2 = 0usize;
        let mut visited = 0usize;
        let th2_lim = r.powi(3).min(0.5);
        for t2 in grid(-th2_lim - step, th2_lim + step, step, i64::MIN) {
            let th2 = t2 as f64 * step;
            for t0 in grid(-2.0 * r - step, 2.0 * r + step, step, i64::MIN) {
                let th0 = t0 as f64 * step;
                if !quadratic_inside(-th0, th2, r) {
                    continue;
                }
                let lo = ((1.0 + th0 - 3.0 * r) / l2).max((1.0 + th0 - 3.0 * r) / ln);
                let hi = ((1.0 + th0 + 3.0 * r) / l2).min((1.0 + th0 + 3.0 * r) / ln);
                for k in grid(lo - 2.0 * step, hi + 2.0 * step, step, 1) {
                    let a = k as f64 * step;
                    visited += 1;
                    if cubic_inside(-(1.0 + th0 - a * l2), th0 + th2, -th2, r)
                        && cubic_inside(-(1.0 + th0 - a * ln), th0 + th2, -th2, r)
                    {
                        below2 += 1;
                    }
                }
            }
        }

        let (p1, g1) = optmem_m1(l2, ln).unwrap();
        let (p2, g2) = optmem_m2(l2, ln).unwrap();
        let spec = Spectrum::new(vec![0.0, l2, ln]).unwrap();
        let achieved = [
            rate_theorem2(l2, ln, &p1).unwrap(),
            rate_theorem2(l2, ln, &p2).unwrap(),
            rate_theorem1(&spec, &p1).unwrap(),
            rate_theorem1(&spec, &p2).unwrap(),
        ];
        let closed_ok = (g1 - gstar).abs() <= 1e-9
            && (g2 - gstar).abs() <= 1e-9
            && achieved.iter().all(|a| (a - gstar).abs() <= 1e-9);
        pass &= below1 == 0 && below2 == 0 && closed_ok;
        notes.push(format!(
            "({l2},{ln}) gamma* {gstar:.6}: grid best M=1 {best1:.6}, below M=1 {below1}, M=2 {below2} of {visited}, closed forms {}",
            if closed_ok { "ok" } else { "off" }
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 120.0;
    (pass, format!("{}; {secs:.1}s", notes.join("; ")))
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_lib = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let l = g.laplacian();
        let spec = sym_eigenvalues(&l, DEFAULT_JACOBI_TOL).unwrap();
        let taps = rng.gen_range(1..=3);
        let p = random_params(&mut rng, taps, spec.values()[n - 1]);
        let sys = build_phi(&l, &p).unwrap();
        let degree = n * (taps + 1);
        let zs: Vec<Complex64> = (0..=degree)
            .map(|k| Complex64::from_polar(1.1 + 0.05 * k as f64, 0.7 + 2.3 * k as f64))
            .collect();
        worst_lib = worst_lib.max(verify_charpoly_factorization(&sys, &p, &spec, &zs).unwrap());

        // oracle: build Φ from the recurrence by hand and eliminate directly
        let lr = laplacian_rows(&g);
        let dim = degree;
        let th = p.theta();
        for &z in &zs {
            let mut a = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = Complex64::new(p.alpha * lr[i][j], 0.0);
                }
                a[i][i] += z - (1.0 + th[0]);
                for m in 1..=taps {
                    a[i][m * n + i] = Complex64::new(-th[m], 0.0);
                }
            }
            for m in 1..=taps {
                for i in 0..n {
                    a[m * n + i][(m - 1) * n + i] = Complex64::new(-1.0, 0.0);
                    a[m * n + i][m * n + i] += z;
                }
            }
            let lhs = complex_det(a);
            let ev = |c: &[f64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * z + v);
            let rhs = spec.values()[1..]
                .iter()
                .fold((z - 1.0) * ev(&h1_coeffs(th)), |acc, &lam| acc * ev(&hi_coeffs(p.alpha, th, lam)));
            worst_oracle = worst_oracle.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    let pass = worst_lib <= 1e-8 && worst_oracle <= 1e-8;
    (pass, format!("100 systems, max relative mismatch {worst_lib:.2e}, elimination oracle {worst_oracle:.2e}"))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_inv = 0.0_f64;
    let mut worst_limit = 0.0_f64;
    let mut worst_left = 0.0_f64;
    let mut runs = 0;
    while runs < 100 {
        let n = rng.gen_range(2..=10);
        let g = random_connected_graph(&mut rng, n, 0.3);
        let l = g.laplacian();
        let spec = sym_eigenvalues(&l, DEFAULT_JACOBI_TOL).unwrap();
        let taps = rng.gen_range(1..=3);
        let p = random_params(&mut rng, taps, spec.values()[n - 1]);
        let rate = rate_theorem1(&spec, &p).unwrap();
        if rate >= 0.95 {
            continue;
        }
        runs += 1;
        let phi1 = consensus_left_eigenvector(&p, &l).unwrap();
        let sys = build_phi(&l, &p).unwrap();
        let back = sys.phi.vec_mul(&phi1);
        worst_left = worst_left.max(back.iter().zip(&phi1).fold(0.0, |m, (a, b)| m.max((a - b).abs())));

        let steps = ((1e-13_f64).ln() / rate.max(1e-3).ln()).ceil() as usize + 60;
        let cfg = SimConfig { steps, tol: 1e-300, seed: runs as u64, x0: None, recenter: false };
        let t = simulate_memory(&l, &p, &cfg).unwrap();
        let stacked = |k: usize| -> f64 {
            (0..=taps)
                .map(|m| {
                    let x = &t.states[k.saturating_sub(m)];
                    x.iter().zip(&phi1[m * n..(m + 1) * n]).map(|(a, b)| a * b).sum::<f64>()
                })
                .sum()
        };
        let first = stacked(0);
        for k in 0..t.states.len() {
            worst_inv = worst_inv.max((stacked(k) - first).abs() / first.abs());
        }
        let last = t.states.last().unwrap();
        worst_limit = worst_limit.max(last.iter().fold(0.0, |m, v| m.max((v - t.xbar).abs())));
    }
    let pass = worst_inv <= 1e-9 && worst_limit <= 1e-9 && worst_left <= 1e-12;
    (
        pass,
        format!("100 runs, invariant drift {worst_inv:.2e}, limit error {worst_limit:.2e}, |phi1 Phi - phi1| {worst_left:.2e}"),
    )
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut routh_bad = 0;
    let mut stable_count = 0;
    for _ in 0..1000 {
        // cubic from random roots, tested against a random radius
        let r1: f64 = rng.gen_range(-1.2..1.2);
        let m: f64 = rng.gen_range(0.0..1.2);
        let arg: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let (re, im) = (m * arg.cos(), m * arg.sin());
        let lead: f64 = rng.gen_range(0.5..2.0);
        // (z − r1)(z^2 − 2 re z + re^2 + im^2)
        let q = re * re + im * im;
        let asc = [-r1 * q * lead, (q + 2.0 * re * r1) * lead, (-2.0 * re - r1) * lead, lead];
        let gamma: f64 = rng.gen_range(0.2..1.1);
        let oracle = dk_roots(&asc).iter().all(|z| z.norm() < gamma);
        let f = bilinear_to_halfplane(&Polynomial::new(asc.to_vec()).unwrap(), gamma);
        let routh = halfplane_stable(&f, true).unwrap();
        stable_count += oracle as usize;
        routh_bad += (routh != oracle) as usize;
    }

    let mut kh_bad = 0;
    let mut kh_stable = 0;
    for _ in 0..200 {
        let degree = rng.gen_range(1..=3);
        // centre from random roots inside the disc, widths random
        let roots: Vec<f64> = (0..degree).map(|_| rng.gen_range(-0.9..0.9)).collect();
        let mut centre = vec![1.0];
        for &z in &roots {
            let mut next = vec![0.0; centre.len() + 1];
            for (k, &c) in centre.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= z * c;
            }
            centre = next;
        }
        let width: f64 = rng.gen_range(0.0..0.3);
        let lo: Vec<f64> = centre.iter().map(|c| c - width * rng.gen::<f64>()).collect();
        let mut hi: Vec<f64> = centre.iter().map(|c| c + width * rng.gen::<f64>()).collect();
        hi[degree] = hi[degree].max(lo[degree]);
        let ip = IntervalPolynomial::new(lo.clone(), hi.clone()).unwrap();
        let claimed = kharitonov_interval_stable(&ip).unwrap();
        let inside = |c: &[f64]| dk_roots(c).iter().all(|z| z.norm() < 1.0);
        if claimed {
            kh_stable += 1;
            for _ in 0..500 {
                let c: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + rng.gen::<f64>() * (b - a)).collect();
                if !inside(&c) {
                    kh_bad += 1;
                    break;
                }
            }
        } else {
            // some corner is a member with a root outside
            let any_out = ip.corners().iter().any(|p| !inside(p.coeffs()));
            kh_bad += (!any_out) as usize;
        }
    }
    let pass = routh_bad == 0 && kh_bad == 0;
    (
        pass,
        format!(
            "routh {routh_bad} disagreements on 1000 cubics ({stable_count} inside), kharitonov {kh_bad} disagreements on 200 families ({kh_stable} stable)"
        ),
    )
}

fn criterion10() -> Outcome {
    let mut worst_g = 0.0_f64;
    let mut worst_k = 0.0_f64;
    for i in 1..=19 {
        let r = 0.05 * i as f64;
        let m = lemma5_margin(r).unwrap();
        worst_g = worst_g.max((m.gamma_inf - 1.0 / r).abs());
        worst_k = worst_k.max((m.k_sup - ((1.0 + r) / (1.0 - r)).powi(2)).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_w = 0.0_f64;
    for _ in 0..100 {
        let lo: f64 = rng.gen_range(0.01..5.0);
        let hi = lo * rng.gen_range(1.0..200.0);
        let taps = rng.gen_range(1..=4);
        let bound = worstcase_rate_lower_bound(hi / lo).unwrap();
        let (_, design) = optmem_worstcase(lo, hi, taps).unwrap();
        worst_w = worst_w.max((bound - design).abs());
    }
    let pass = worst_g <= 1e-9 && worst_k <= 1e-7 && worst_w <= 1e-12;
    (pass, format!("gamma_inf err {worst_g:.2e}, k_sup err {worst_k:.2e}, worst-case bound err {worst_w:.2e}"))
}

fn criterion11() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for (name, g, _) in deterministic_graphs() {
        let report = table2_report(&g).unwrap();
        for kind in KINDS {
            let rate = report.get(kind);
            let cfg = SimConfig { steps: 120, tol: 1e-200, seed: 11, x0: None, recenter: true };
            let t = simulate_on_graph(&g, &rate.params, &cfg).unwrap();
            if rate.divergent() {
                if !t.diverged {
                    bad.push(format!("{name} {kind} not flagged divergent"));
                }
                continue;
            }
            let lo = if kind == ProtocolKind::Gf { 21 } else { 20 };
            let emp = empirical_rate(&t, lo, 120).unwrap();
            let rel = (emp - rate.gamma).abs() / rate.gamma;
            worst = worst.max(rel);
            if rel > 0.05 || t.diverged {
                bad.push(format!("{name} {kind}: {emp:.4} vs {:.4}", rate.gamma));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        bad.push(format!("took {secs:.2}s"));
    }
    (bad.is_empty(), format!("max relative deviation {worst:.4}, {secs:.2}s {}", bad.join("; ")))
}

fn criterion12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut bad = Vec::new();
    let mut equal_cases = 0;
    for i in 0..1000 {
        // every tenth pair sits on the equality line λ2 + λN = 2
        let (l2, ln) = if i % 10 == 0 {
            let l2: f64 = rng.gen_range(0.01..1.0);
            (l2, 2.0 - l2)
        } else {
            let l2: f64 = rng.gen_range(0.01..1.9);
            (l2, rng.gen_range(l2..1.99))
        };
        let (mem, opt, gap) = corollary2_gap(l2, ln).unwrap();
        let rho = (1.0 - l2).abs().max((1.0 - ln).abs());
        let s = (1.0 - rho * rho).sqrt();
        let k = (ln / l2).sqrt();
        let (mem_o, opt_o) = (rho / (1.0 + s), (k - 1.0) / (k + 1.0));
        if (mem - mem_o).abs() > 1e-12 || (opt - opt_o).abs() > 1e-12 {
            bad.push(format!("closed forms differ at ({l2}, {ln})"));
        }
        if gap < -1e-12 {
            bad.push(format!("negative gap {gap:.2e} at ({l2}, {ln})"));
        }
        let on_line = (l2 + ln - 2.0).abs() <= 1e-12;
        equal_cases += on_line as usize;
        if on_line != (gap.abs() <= 1e-9) {
            bad.push(format!("equality mismatch at ({l2}, {ln}): gap {gap:.2e}"));
        }
    }
    let mut ratio_bad = 0;
    for _ in 0..1000 {
        let l2: f64 = rng.gen_range(0.01..10.0);
        let ln = l2 * rng.gen_range(1.0001..100.0);
        let ratio = remark3_ratio(l2, ln).unwrap();
        let k = (ln / l2).sqrt();
        let oracle = ((ln - l2) / (3.0 * l2 + ln)) / ((k - 1.0) / (k + 1.0));
        if !(ratio > 1.0) || (ratio - oracle).abs() > 1e-9 {
            ratio_bad += 1;
        }
    }
    if ratio_bad > 0 {
        bad.push(format!("{ratio_bad} FIRMem ratio failures"));
    }
    bad.truncate(5);
    (bad.is_empty(), format!("1000 + 1000 pairs, {equal_cases} on the equality line {}", bad.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("reference table, deterministic graphs", criterion1),
        ("reference table, random-graph columns", criterion2),
        ("three-tap star example", criterion3),
        ("dense vs polynomial rate", criterion4),
        ("extreme-eigenvalue reduction", criterion5),
        ("grid-search optimality", criterion6),
        ("characteristic polynomial factorization", criterion7),
        ("consensus invariant", criterion8),
        ("routh and kharitonov", criterion9),
        ("gain margin and worst-case bound", criterion10),
        ("simulation vs theory", criterion11),
        ("memory and FIR gaps", criterion12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = run();
        failed += (!pass) as usize;
        println!("{} criterion {} ({name}): {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
