use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use memconsensus::protocols::{table2_report, ProtocolKind, RateReport};
use memconsensus::sim::{default_empirical_rate, simulate_on_graph, SimConfig, Trajectory};
use memconsensus::spectral::{sym_eigenvalues, DEFAULT_JACOBI_TOL};
use memconsensus::verify::{reference_graphs, run_suite, Suite, VerifyOptions};
use memconsensus::{gen_named, Graph, GraphFamily, ProtocolParams};

#[derive(Parser)]
#[command(name = "memcons", version, about = "Memory-accelerated average consensus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named graph and print its Laplacian extremes
    Graph {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write the edge list here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal rates of every scheme as CSV
    Rates {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print an aligned table rounded to 4 decimals instead of CSV
        #[arg(long)]
        pretty: bool,
    },
    /// Simulate a scheme and export the trajectory
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum)]
        alg: Alg,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// CSV file, or a directory when `--alg all`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run built-in verification suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// cycle, path, star, complete, complete_bipartite, ws, ba
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Part sizes for complete_bipartite, e.g. 3,5
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<usize>>,
    /// Ring degree for ws
    #[arg(long)]
    k: Option<usize>,
    /// Rewire probability for ws
    #[arg(long)]
    p: Option<f64>,
    /// Initial clique size for ba
    #[arg(long)]
    m0: Option<usize>,
    /// Attachments per new vertex for ba
    #[arg(long)]
    m: Option<usize>,
    /// Seed for random families (and initial states when simulating)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SourceArgs {
    /// Edge-list file
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Bc,
    Gf,
    Mem,
    Gmem,
    Firmem,
    Optmem,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Table2,
    Example1,
    Theorem1,
    Lemma4,
    Routh,
    Kharitonov,
    Margin,
    Worstcase,
    All,
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, msg).exit()
}

impl FamilyArgs {
    fn family(&self) -> AnyResult<Option<GraphFamily>> {
        let Some(tag) = &self.family else { return Ok(None) };
        let fam = match GraphFamily::from_tag(tag)? {
            GraphFamily::CompleteBipartite { .. } => match self.parts.as_deref() {
                Some(&[p, q]) => GraphFamily::CompleteBipartite { p, q },
                _ => usage_error("complete_bipartite needs --parts P,Q"),
            },
            GraphFamily::WattsStrogatz { k, p } => {
                GraphFamily::WattsStrogatz { k: self.k.unwrap_or(k), p: self.p.unwrap_or(p) }
            }
            GraphFamily::BarabasiAlbert { m0, m } => {
                GraphFamily::BarabasiAlbert { m0: self.m0.unwrap_or(m0), m: self.m.unwrap_or(m) }
            }
            other => other,
        };
        Ok(Some(fam))
    }

    fn build(&self) -> AnyResult<Option<(String, Graph)>> {
        let Some(fam) = self.family()? else { return Ok(None) };
        let n = match (self.n, fam) {
            (Some(n), _) => n,
            (None, GraphFamily::CompleteBipartite { p, q }) => p + q,
            (None, _) => usage_error("--n is required with --family"),
        };
        let seed = if fam.is_random() { Some(self.seed.unwrap_or(0)) } else { self.seed };
        let g = gen_named(fam, n, seed)?;
        Ok(Some((format!("{}{n}", fam.tag()), g)))
    }
}

impl SourceArgs {
    fn load(&self) -> AnyResult<Option<(String, Graph)>> {
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = Graph::load_edgelist(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let name = path.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
            return Ok(Some((name, g)));
        }
        self.family.build()
    }
}

fn cmd_graph(family: &FamilyArgs, out: Option<&Path>) -> AnyResult<()> {
    let Some((_, g)) = family.build()? else { usage_error("--family is required") };
    let spec = sym_eigenvalues(&g.laplacian(), DEFAULT_JACOBI_TOL)?;
    let (l2, ln) = spec.extreme_nonzero(None)?;
    println!("n {}", g.n());
    println!("edges {}", g.edge_count());
    println!("lambda2 {l2:.6}");
    println!("lambdaN {ln:.6}");
    println!("eigenratio {:.4}", l2 / ln);
    match out {
        Some(path) => fs::write(path, g.save_edgelist())?,
        None => print!("{}", g.save_edgelist()),
    }
    Ok(())
}

const RATE_HEADER: &str = "graph,eigenratio,rho_s,gamma_bc,gamma_gf,gamma_mem,gamma_gmem,gamma_firmem,gamma_optmem";

fn rate_row(name: &str, r: &RateReport, fmt: impl Fn(f64) -> String) -> Vec<String> {
    let mut row = vec![name.to_string(), fmt(r.eigenratio()), fmt(r.rho_s)];
    for kind in ProtocolKind::ALL {
        let a = r.get(kind);
        row.push(if a.divergent() { "div".into() } else { fmt(a.gamma) });
    }
    row
}

fn cmd_rates(source: &SourceArgs, out: Option<&Path>, pretty: bool) -> AnyResult<()> {
    let graphs = match source.load()? {
        Some(g) => vec![g],
        None => reference_graphs().into_iter().map(|(n, g)| (n.to_string(), g)).collect(),
    };
    let mut reports = Vec::new();
    for (name, g) in &graphs {
        let r = table2_report(g).map_err(|e| format!("{name}: {e}"))?;
        reports.push((name.as_str(), r));
    }
    if pretty {
        let header: Vec<&str> = RATE_HEADER.split(',').collect();
        let rows: Vec<Vec<String>> = reports.iter().map(|(n, r)| rate_row(n, r, |v| format!("{v:.4}"))).collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|j| rows.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap())
            .collect();
        let line = |cells: &[&str]| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
        };
        println!("{}", line(&header));
        for r in &rows {
            println!("{}", line(&r.iter().map(String::as_str).collect::<Vec<_>>()));
        }
    }
    let mut csv = format!("{RATE_HEADER}\n");
    for (n, r) in &reports {
        csv.push_str(&rate_row(n, r, |v| format!("{v}")).join(","));
        csv.push('\n');
    }
    match out {
        Some(path) => fs::write(path, csv)?,
        None if !pretty => print!("{csv}"),
        None => {}
    }
    Ok(())
}

fn params_for(kind: ProtocolKind, report: &RateReport) -> (ProtocolParams, f64) {
    let a = report.get(kind);
    (a.params.clone(), a.gamma)
}

fn report_run(kind: ProtocolKind, t: &Trajectory, gamma: f64) {
    let period = if kind == ProtocolKind::Gf { 3 } else { 1 };
    let settled = t.settled_at.map_or("none".to_string(), |k| k.to_string());
    let rate = default_empirical_rate(t, period).map_or("n/a".to_string(), |r| format!("{r:.4}"));
    let theory = if gamma >= 1.0 { "div".to_string() } else { format!("{gamma:.4}") };
    print!("{kind}: settled_at {settled}, empirical_rate {rate}, theoretical_rate {theory}");
    if t.diverged {
        print!(", DIVERGED");
    }
    println!();
}

fn cmd_simulate(source: &SourceArgs, alg: Alg, cfg: SimConfig, out: Option<&Path>) -> AnyResult<()> {
    let Some((_, g)) = source.load()? else { usage_error("--graph or --family is required") };
    let report = table2_report(&g)?;
    let kinds: Vec<ProtocolKind> = match alg {
        Alg::All => ProtocolKind::ALL.to_vec(),
        Alg::Bc => vec![ProtocolKind::Bc],
        Alg::Gf => vec![ProtocolKind::Gf],
        Alg::Mem => vec![ProtocolKind::Mem],
        Alg::Gmem => vec![ProtocolKind::GMem],
        Alg::Firmem => vec![ProtocolKind::FirMem],
        Alg::Optmem => vec![ProtocolKind::OptMem],
    };
    if let (Alg::All, Some(dir)) = (alg, out) {
        fs::create_dir_all(dir)?;
    }
    for kind in kinds {
        let (params, gamma) = params_for(kind, &report);
        let t = simulate_on_graph(&g, &params, &cfg)?;
        report_run(kind, &t, gamma);
        let target = match (alg, out) {
            (Alg::All, Some(dir)) => Some(dir.join(format!("{kind}.csv"))),
            (_, Some(path)) => Some(path.to_path_buf()),
            _ => None,
        };
        if let Some(path) = target {
            fs::write(&path, t.to_csv()).map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    Ok(())
}

fn cmd_verify(suite: SuiteArg) -> AnyResult<bool> {
    let mut opts = VerifyOptions::default();
    if let Ok(v) = std::env::var("RATE_TOL") {
        opts.rate_tol = v.parse().map_err(|_| format!("RATE_TOL: cannot parse `{v}`"))?;
    }
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Table2 => vec![Suite::Table2],
        SuiteArg::Example1 => vec![Suite::Example1],
        SuiteArg::Theorem1 => vec![Suite::Theorem1],
        SuiteArg::Lemma4 => vec![Suite::Lemma4],
        SuiteArg::Routh => vec![Suite::Routh],
        SuiteArg::Kharitonov => vec![Suite::Kharitonov],
        SuiteArg::Margin => vec![Suite::Margin],
        SuiteArg::Worstcase => vec![Suite::Worstcase],
    };
    let mut all_pass = true;
    for s in suites {
        let checks = run_suite(s, &opts)?;
        let pass = checks.iter().all(|c| c.pass);
        all_pass &= pass;
        for c in &checks {
            println!("[{}] {c}", s.name());
        }
        println!("{}: {}", s.name(), if pass { "PASS" } else { "FAIL" });
    }
    Ok(all_pass)
}

fn run(cli: Cli) -> AnyResult<bool> {
    match cli.command {
        Command::Graph { family, out } => cmd_graph(&family, out.as_deref()).map(|_| true),
        Command::Rates { source, out, pretty } => cmd_rates(&source, out.as_deref(), pretty).map(|_| true),
        Command::Simulate { source, alg, steps, tol, out } => {
            let seed = source.family.seed.unwrap_or(0);
            let cfg = SimConfig { steps, tol, seed, ..SimConfig::default() };
            cmd_simulate(&source, alg, cfg, out.as_deref()).map(|_| true)
        }
        Command::Verify { suite } => cmd_verify(suite),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
