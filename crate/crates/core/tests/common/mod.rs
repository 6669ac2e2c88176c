//! Helpers shared by the integration tests. Everything here is written
//! against plain slices so it does not lean on the library's own numerics.

#![allow(dead_code)]

use memconsensus::Graph;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Roots of `Σ c_k z^k` (ascending) by Durand–Kerner followed by Newton polishing.
pub fn dk_roots(asc: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = asc.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0] == 0.0 {
        c.remove(0);
        zeros += 1;
    }
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let deriv = |z: Complex64| {
        (1..=n).rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + monic[k] * k as f64)
    };
    let radius = 1.0 + monic[..n].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            if step.is_finite() {
                z[i] -= step;
                delta = delta.max(step.norm());
            }
        }
        if delta < 1e-16 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let d = deriv(*r);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(*r) / d;
            if !step.is_finite() || step.norm() > 1e-6 {
                break;
            }
            *r -= step;
        }
    }
    z.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros));
    z
}

pub fn max_root_modulus(asc: &[f64]) -> f64 {
    dk_roots(asc).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `h1` in ascending order: `z^M − θ0 z^{M−1} − (θ0+θ1) z^{M−2} − …`.
pub fn h1_coeffs(theta: &[f64]) -> Vec<f64> {
    let m = theta.len() - 1;
    let mut c = vec![0.0; m + 1];
    c[m] = 1.0;
    let mut acc = 0.0;
    for k in 0..m {
        acc += theta[k];
        c[m - 1 - k] = -acc;
    }
    c
}

/// `h_i` in ascending order: `z^{M+1} − (1+θ0−αλ) z^M − Σ θm z^{M−m}`.
pub fn hi_coeffs(alpha: f64, theta: &[f64], lambda: f64) -> Vec<f64> {
    let m = theta.len() - 1;
    let mut c = vec![0.0; m + 2];
    c[m + 1] = 1.0;
    c[m] = -(1.0 + theta[0] - alpha * lambda);
    for k in 1..=m {
        c[m - k] = -theta[k];
    }
    c
}

/// Spanning tree on random parents plus extra edges with probability `p`.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        present[i][j] = true;
        present[j][i] = true;
        edges.push((j, i, 1.0));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present[i][j] && rng.gen::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::new(n, edges).expect("valid edge list")
}

/// Dense Laplacian built straight from the edge list.
pub fn laplacian_rows(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut l = vec![vec![0.0; n]; n];
    for e in g.edges() {
        l[e.i][e.j] -= e.w;
        l[e.j][e.i] -= e.w;
        l[e.i][e.i] += e.w;
        l[e.j][e.j] += e.w;
    }
    l
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.norm() != 0.0 {
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    det
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
