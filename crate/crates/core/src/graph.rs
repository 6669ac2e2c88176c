//! Undirected weighted graphs, their Laplacians and Metropolis–Hastings weights.
//!
//! Vertices are 0-indexed everywhere (files and APIs); agent `i` in the usual
//! 1-based notation is vertex `i - 1` here.
//!
//! Edge-list text format:
//!
//! ```text
//! # comment
//! n 8
//! 0 1 1.0
//! 1 2 1.0
//! ```
//!
//! The header `n <count>` must precede the edges. Edges are stored once per
//! unordered pair with `i < j`, which is also the canonical serialized order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Connectivity retries for the random families.
pub const MAX_GENERATION_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from `(i, j, w)` triples, canonicalizing each pair to `i < j`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { line: 0, index: a.max(b), n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight(a, b, w));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateEdge(i, j));
            }
            out.push(Edge { i, j, w });
        }
        out.sort_by_key(|e| (e.i, e.j));
        Ok(Self { n, edges: out })
    }

    fn unweighted(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().map(|(i, j)| (i, j, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weighted degrees `d_i = Σ_j a_ij`.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.i] += e.w;
            d[e.j] += e.w;
        }
        d
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees().into_iter().fold(0.0, f64::max)
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }

    pub fn laplacian(&self) -> SymMatrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for e in &self.edges {
            m[(e.i, e.j)] -= e.w;
            m[(e.j, e.i)] -= e.w;
            m[(e.i, e.i)] += e.w;
            m[(e.j, e.j)] += e.w;
        }
        SymMatrix(m)
    }

    /// `w_ij = 1 / max(d_i, d_j)` on edges, self-weight fills each row to one.
    ///
    /// Degrees are edge counts; edge weights are ignored.
    pub fn metropolis_weights(&self) -> SymMatrix {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        let mut m = Matrix::zeros(self.n, self.n);
        for e in &self.edges {
            let w = 1.0 / deg[e.i].max(deg[e.j]) as f64;
            m[(e.i, e.j)] = w;
            m[(e.j, e.i)] = w;
        }
        for i in 0..self.n {
            let off: f64 = (0..self.n).filter(|&j| j != i).map(|j| m[(i, j)]).sum();
            m[(i, i)] = 1.0 - off;
        }
        SymMatrix(m)
    }

    pub fn save_edgelist(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for e in &self.edges {
            writeln!(s, "{} {} {}", e.i, e.j, e.w).unwrap();
        }
        s
    }

    pub fn load_edgelist(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let parse_err = |msg: String| Error::Parse { line, msg };
            match (n, fields.as_slice()) {
                (None, ["n", count]) => {
                    let c: usize = count.parse().map_err(|_| parse_err(format!("bad vertex count `{count}`")))?;
                    if c == 0 {
                        return Err(parse_err("vertex count must be positive".into()));
                    }
                    n = Some(c);
                }
                (None, _) => return Err(parse_err("expected header `n <count>`".into())),
                (Some(_), ["n", ..]) => return Err(parse_err("duplicate header".into())),
                (Some(nv), [a, b, w]) => {
                    let i: usize = a.parse().map_err(|_| parse_err(format!("bad vertex `{a}`")))?;
                    let j: usize = b.parse().map_err(|_| parse_err(format!("bad vertex `{b}`")))?;
                    let w: f64 = w.parse().map_err(|_| parse_err(format!("bad weight `{w}`")))?;
                    for v in [i, j] {
                        if v >= nv {
                            return Err(Error::IndexOutOfRange { line, index: v, n: nv });
                        }
                    }
                    if i == j {
                        return Err(Error::SelfLoop(i));
                    }
                    if !(w.is_finite() && w > 0.0) {
                        return Err(Error::InvalidWeight(i, j, w));
                    }
                    let key = (i.min(j), i.max(j));
                    if !seen.insert(key) {
                        return Err(Error::DuplicateEdge(key.0, key.1));
                    }
                    edges.push((i, j, w));
                }
                (Some(_), _) => return Err(parse_err("expected `i j w`".into())),
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing header `n <count>`".into() })?;
        Self::new(n, edges)
    }
}

/// Symmetric dense matrix; constructed symmetric, never mutated afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Wraps `m` after checking exact symmetry.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("symmetric matrix must be square".into()));
        }
        for i in 0..m.rows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidInput(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.0.mul_vec(x)
    }
}

/// Named graph families with their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphFamily {
    Cycle,
    Path,
    /// Hub is vertex 0.
    Star,
    Complete,
    /// Parts `{0..p}` and `{p..p+q}`.
    CompleteBipartite { p: usize, q: usize },
    /// Ring of even degree `k`, each lattice edge rewired with probability `p`.
    WattsStrogatz { k: usize, p: f64 },
    /// Clique on `m0` vertices, then each new vertex attaches to `m` distinct
    /// existing vertices chosen proportionally to degree.
    BarabasiAlbert { m0: usize, m: usize },
}

impl GraphFamily {
    pub const DEFAULT_WS: Self = Self::WattsStrogatz { k: 4, p: 0.3 };
    pub const DEFAULT_BA: Self = Self::BarabasiAlbert { m0: 3, m: 2 };

    /// Resolves a family tag; parameterized families take their defaults.
    pub fn from_tag(tag: &str) -> Result<Self> {
        Ok(match tag {
            "cycle" => Self::Cycle,
            "path" => Self::Path,
            "star" => Self::Star,
            "complete" => Self::Complete,
            "complete_bipartite" | "bipartite" => Self::CompleteBipartite { p: 0, q: 0 },
            "watts_strogatz" | "ws" => Self::DEFAULT_WS,
            "barabasi_albert" | "ba" => Self::DEFAULT_BA,
            other => return Err(Error::InvalidFamily(other.to_string())),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Cycle => "cycle",
            Self::Path => "path",
            Self::Star => "star",
            Self::Complete => "complete",
            Self::CompleteBipartite { .. } => "complete_bipartite",
            Self::WattsStrogatz { .. } => "watts_strogatz",
            Self::BarabasiAlbert { .. } => "barabasi_albert",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Self::WattsStrogatz { .. } | Self::BarabasiAlbert { .. })
    }
}

/// Generates a connected graph of the given family on `n` vertices.
///
/// Random families need a seed and are deterministic given it; they are
/// regenerated from the same RNG stream until connected.
pub fn gen_named(family: GraphFamily, n: usize, seed: Option<u64>) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams(format!("n = {n}, need n >= 2")));
    }
    let g = match family {
        GraphFamily::Cycle => {
            if n < 3 {
                return Err(Error::InfeasibleParams("cycle needs n >= 3".into()));
            }
            Graph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        GraphFamily::Path => Graph::unweighted(n, (0..n - 1).map(|i| (i, i + 1)))?,
        GraphFamily::Star => Graph::unweighted(n, (1..n).map(|i| (0, i)))?,
        GraphFamily::Complete => {
            Graph::unweighted(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))?
        }
        GraphFamily::CompleteBipartite { p, q } => {
            if p == 0 || q == 0 || p + q != n {
                return Err(Error::InfeasibleParams(format!(
                    "complete bipartite parts ({p}, {q}) must be positive and sum to n = {n}"
                )));
            }
            Graph::unweighted(n, (0..p).flat_map(|i| (p..n).map(move |j| (i, j))))?
        }
        GraphFamily::WattsStrogatz { k, p } => {
            if k < 2 || k % 2 != 0 || k >= n {
                return Err(Error::InfeasibleParams(format!(
                    "ring degree k = {k} must be even, >= 2 and < n = {n}"
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InfeasibleParams(format!("rewire probability {p} outside [0, 1]")));
            }
            let mut rng = seeded(seed)?;
            retry_connected(|| watts_strogatz(n, k, p, &mut rng))?
        }
        GraphFamily::BarabasiAlbert { m0, m } => {
            if m == 0 || m > m0 || m0 < 2 || m0 > n {
                return Err(Error::InfeasibleParams(format!(
                    "need 1 <= m ({m}) <= m0 ({m0}), 2 <= m0 <= n ({n})"
                )));
            }
            let mut rng = seeded(seed)?;
            retry_connected(|| barabasi_albert(n, m0, m, &mut rng))?
        }
    };
    Ok(g)
}

fn seeded(seed: Option<u64>) -> Result<ChaCha8Rng> {
    seed.map(ChaCha8Rng::seed_from_u64)
        .ok_or_else(|| Error::InfeasibleParams("random graph family requires a seed".into()))
}

fn retry_connected(mut attempt: impl FnMut() -> Result<Graph>) -> Result<Graph> {
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        let g = attempt()?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::ConnectivityRetries { attempts: MAX_GENERATION_ATTEMPTS })
}

fn watts_strogatz(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        for d in 1..=k / 2 {
            edges.insert(key(i, (i + d) % n));
        }
    }
    for d in 1..=k / 2 {
        for i in 0..n {
            let old = key(i, (i + d) % n);
            if rng.gen::<f64>() >= p || !edges.contains(&old) {
                continue;
            }
            let candidates: Vec<usize> =
                (0..n).filter(|&v| v != i && !edges.contains(&key(i, v))).collect();
            if let Some(&target) = candidates.choose(rng) {
                edges.remove(&old);
                edges.insert(key(i, target));
            }
        }
    }
    Graph::unweighted(n, edges)
}

fn barabasi_albert(n: usize, m0: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    // one entry per edge endpoint: sampling uniformly is degree-proportional
    let mut endpoints = Vec::new();
    for i in 0..m0 {
        for j in i + 1..m0 {
            edges.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    for v in m0..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(endpoints[rng.gen_range(0..endpoints.len())]);
        }
        for t in targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Graph::unweighted(n, edges)
}
