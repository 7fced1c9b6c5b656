//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or refused run, 2 inadmissible input,
//! 3 failed verification, 4 non-convergence.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{
    check_admissible, generate_admissible_instance, partite_defect, threshold_c, DefectPlan, GraphFile,
    MultipartiteGraph, PartiteStructure,
};
use crate::oracle::{self, xval};
use crate::rational::{self, Rational};
use crate::scheme::{intersection_table, Eigenmatrices};
use crate::solver::{self, read_records, verify_records, SolveOptions};
use crate::spectral::{eta_star, spectrum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_UNVERIFIED: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fracclique", version, about = "Fractional K_s-decompositions of dense balanced multipartite graphs")]
pub struct Cli {
    /// Worker threads for the parallel passes (default: all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an admissible instance and write it as JSON
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the admissibility report and threshold comparison
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Solve for clique weights, verify them, and write weights and report
    Decompose {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Weights file
        #[arg(long)]
        output: PathBuf,
        /// Report file (default: stdout)
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Shift for r = s+1, as "p/q" or a decimal (default η*)
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        include_zero_weights: bool,
        /// Attempt instances beyond the degree threshold or failing the degree condition
        #[arg(long)]
        force: bool,
    },
    /// Recompute every edge's coverage from a weights file
    Verify {
        /// Graph file
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Intersection numbers and eigenmatrices for (r, n)
    Tables {
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 'n')]
        n: usize,
        /// Also write JSON here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Eigenvalues and multiplicities of M_Γ (and the η-shifted host for r = s+1)
    Spectrum {
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 's')]
        s: usize,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run every oracle comparison over a grid of (r, s, n)
    Xval {
        /// Grid as "r:s:n,r:s:n,..."
        #[arg(long, conflicts_with_all = ["r", "s", "n"])]
        grid: Option<String>,
        #[arg(short = 'r', requires_all = ["s", "n"])]
        r: Option<usize>,
        #[arg(short = 's')]
        s: Option<usize>,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        oracle_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time matrix-free against dense solves across part sizes
    Bench {
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 's')]
        s: usize,
        /// Part sizes, comma separated
        #[arg(long, default_value = "2,4,6,8,12,16")]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        defects: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        oracle_cap: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A graph file, or a generated instance.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Graph file
    #[arg(long, conflicts_with_all = ["r", "s", "n", "defects", "cap", "seed"])]
    pub input: Option<PathBuf>,
    #[arg(short = 'r', requires_all = ["s", "n"])]
    pub r: Option<usize>,
    #[arg(short = 's')]
    pub s: Option<usize>,
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Transversal cliques (r = s+1) or single edges to delete
    #[arg(long, default_value_t = 0)]
    pub defects: usize,
    /// Most edges a vertex may lose towards one part (default: ⌊c·n⌋ for the
    /// exact threshold c, at least 1)
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl InstanceArgs {
    pub fn load(&self) -> Result<MultipartiteGraph> {
        if let Some(path) = &self.input {
            return GraphFile::read(path);
        }
        let (Some(r), Some(s), Some(n)) = (self.r, self.s, self.n) else {
            return Err(Error::InvalidParameters("give --input or all of -r, -s, -n".into()));
        };
        let st = PartiteStructure::new(r, s, n)?;
        let cap = match self.cap {
            Some(c) => c,
            None => threshold_c(r, s)
                .map(|t| rational::floor_to_usize(&(t.exact * rational::int(n as i64))))
                .unwrap_or(0)
                .max(1),
        };
        generate_admissible_instance(st, DefectPlan::new(self.defects, cap), self.seed)
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    if let Ok(q) = Rational::from_str(text.trim()) {
        return Ok(q);
    }
    text.trim()
        .parse::<f64>()
        .ok()
        .and_then(Rational::from_float)
        .ok_or_else(|| Error::InvalidParameters(format!("cannot read {text:?} as a number")))
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidParameters(format!("bad size {t:?}"))))
        .collect()
}

fn parse_grid(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    text.split(',')
        .map(|item| {
            let parts = parse_list(&item.replace(':', ","))?;
            match parts[..] {
                [r, s, n] => Ok((r, s, n)),
                _ => Err(Error::InvalidParameters(format!("grid entry {item:?} is not r:s:n"))),
            }
        })
        .collect()
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Inadmissible(_) => EXIT_INADMISSIBLE,
        Error::NegativeWeight { .. } => EXIT_UNVERIFIED,
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::InvalidParameters(format!("cannot start {w} workers: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Gen { instance, output } => {
            let graph = instance.load()?;
            GraphFile::write(&graph, &output)?;
            eprintln!(
                "wrote {}: {} missing edges, δ̂ = {}",
                output.display(),
                graph.missing().len(),
                graph.partite_min_degree()
            );
            Ok(EXIT_OK)
        }
        Command::Check { instance } => check(&instance.load()?),
        Command::Decompose { instance, output, report, tol, max_iter, eta, include_zero_weights, force } => {
            let graph = instance.load()?;
            let eta = eta.as_deref().map(parse_rational).transpose()?;
            let opts = SolveOptions { tol, max_iter, eta, ..SolveOptions::default() };
            decompose(&graph, &opts, &output, report.as_deref(), include_zero_weights, force)
        }
        Command::Verify { input, weights, tol } => {
            let graph = GraphFile::read(&input)?;
            let records = read_records(&weights)?;
            let v = verify_records(&graph, &records, tol);
            print_json(&v)?;
            if v.passed {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "verification failed: worst edge {} has coverage {} (error {:.3e})",
                    v.worst_edge.as_deref().unwrap_or("-"),
                    v.worst_edge_sum,
                    v.max_edge_sum_error
                );
                for p in &v.problems {
                    eprintln!("  {p}");
                }
                Ok(EXIT_UNVERIFIED)
            }
        }
        Command::Tables { r, n, output } => tables(r, n, output.as_deref()),
        Command::Spectrum { r, s, n, eta, json } => spectrum_cmd(r, s, n, eta.as_deref(), json),
        Command::Xval { grid, r, s, n, oracle_cap, seed, output } => {
            let grid = match (grid, r, s, n) {
                (Some(g), ..) => parse_grid(&g)?,
                (None, Some(r), Some(s), Some(n)) => vec![(r, s, n)],
                _ => vec![(4, 3, 2), (5, 3, 2), (5, 4, 2), (6, 4, 2)],
            };
            let mut rows = Vec::new();
            for (r, s, n) in grid {
                let row = xval::cross_validate(r, s, n, oracle_cap, seed)?;
                eprintln!("({r},{s},{n}) {}", if row.passed { "pass" } else { "FAIL" });
                for c in row.checks.iter().filter(|c| !c.passed) {
                    eprintln!("  {}: {}", c.name, c.detail);
                }
                rows.push(row);
            }
            let all = rows.iter().all(|r| r.passed);
            let out = json!({ "passed": all, "rows": rows });
            match output {
                Some(p) => write_json(&out, &p)?,
                None => print_json(&out)?,
            }
            Ok(if all { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Bench { r, s, sizes, defects, seed, oracle_cap, output } => {
            bench(r, s, &parse_list(&sizes)?, defects, seed, oracle_cap, output.as_deref())
        }
    }
}

fn check(graph: &MultipartiteGraph) -> Result<i32> {
    let st = graph.structure();
    let report = check_admissible(graph);
    let c_actual = partite_defect(graph);
    let threshold = threshold_c(st.r, st.s).ok();
    let out = json!({
        "admissible": report.is_admissible(),
        "report": report,
        "c_actual": c_actual.to_string(),
        "threshold": threshold,
        "within_threshold": threshold.as_ref().map(|t| c_actual <= t.exact),
    });
    print_json(&out)?;
    match report.describe_failure() {
        Some(msg) => {
            eprintln!("not admissible: {msg}");
            Ok(EXIT_INADMISSIBLE)
        }
        None => Ok(EXIT_OK),
    }
}

fn decompose(
    graph: &MultipartiteGraph,
    opts: &SolveOptions,
    output: &Path,
    report_path: Option<&Path>,
    include_zero: bool,
    force: bool,
) -> Result<i32> {
    let st = graph.structure();
    if !force {
        let adm = check_admissible(graph);
        if let Some(msg) = adm.describe_failure() {
            eprintln!("not admissible: {msg}");
            return Ok(EXIT_INADMISSIBLE);
        }
        let c_actual = partite_defect(graph);
        let bound = threshold_c(st.r, st.s)?.exact;
        if c_actual > bound {
            eprintln!("c = {c_actual} exceeds the threshold {bound} for (r,s) = ({},{}); pass --force to attempt", st.r, st.s);
            return Ok(EXIT_USAGE);
        }
    }
    let d = solver::decompose(graph, opts)?;
    d.weights.write(output, include_zero)?;
    match report_path {
        Some(p) => write_json(&d.report, p)?,
        None => print_json(&d.report)?,
    }
    let r = &d.report;
    eprintln!(
        "{:?}: {} cliques, {} iterations, residual {:.2e}, max coverage error {:.2e}",
        r.guarantee, r.cliques, r.iterations, r.final_residual_inf, r.max_edge_sum_error
    );
    if r.verified {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed at edge {}", r.worst_edge.as_deref().unwrap_or("-"));
        Ok(EXIT_UNVERIFIED)
    }
}

fn format_rows<T: ToString>(rows: &[Vec<T>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(T::to_string).collect()).collect();
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| cells.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(1))
        .collect();
    cells
        .iter()
        .map(|r| {
            r.iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn tables(r: usize, n: usize, output: Option<&Path>) -> Result<i32> {
    let tables: Vec<[[i64; 6]; 6]> = (0..6).map(|k| intersection_table(k, r, n)).collect::<Result<_>>()?;
    let em = Eigenmatrices::new(r, n)?;
    for (k, t) in tables.iter().enumerate() {
        println!("p_ij^{k}  (r = {r}, n = {n}; row i, column j)");
        println!("{}\n", format_rows(&t.iter().map(|row| row.to_vec()).collect::<Vec<_>>()));
    }
    println!("C");
    println!("{}\n", format_rows(&em.c.iter().map(|row| row.to_vec()).collect::<Vec<_>>()));
    println!("D");
    println!("{}", format_rows(&em.d.iter().map(|row| row.to_vec()).collect::<Vec<_>>()));
    if let Some(p) = output {
        write_json(&json!({ "r": r, "n": n, "intersection_numbers": tables, "eigenmatrices": em }), p)?;
    }
    Ok(EXIT_OK)
}

fn spectrum_cmd(r: usize, s: usize, n: usize, eta: Option<&str>, as_json: bool) -> Result<i32> {
    let mut tables = vec![spectrum(r, s, n, None)?];
    if r == s + 1 {
        let eta = match eta {
            Some(t) => parse_rational(t)?,
            None => eta_star(s, n),
        };
        tables.push(spectrum(r, s, n, Some(eta))?);
    } else if eta.is_some() {
        return Err(Error::InvalidParameters("--eta applies only when r = s + 1".into()));
    }
    if as_json {
        print_json(&tables)?;
        return Ok(EXIT_OK);
    }
    for t in &tables {
        match &t.eta {
            None => println!("M_Γ at (r,s,n) = ({r},{s},{n})"),
            Some(e) => println!("M_Γ + ηE₂ at (r,s,n) = ({r},{s},{n}), η = {e}"),
        }
        let mut rows = vec![vec!["i".to_string(), "eigenvalue".into(), "≈".into(), "multiplicity".into()]];
        for i in 0..6 {
            rows.push(vec![
                i.to_string(),
                t.eigenvalues[i].to_string(),
                format!("{:.6}", t.eigenvalues_f64[i]),
                t.multiplicities[i].to_string(),
            ]);
        }
        println!("{}\n", format_rows(&rows));
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    edges: usize,
    cliques: usize,
    iterations: usize,
    matrix_free_s: f64,
    dense_s: Option<f64>,
    max_z_difference: Option<f64>,
}

fn bench(
    r: usize,
    s: usize,
    sizes: &[usize],
    defects: usize,
    seed: u64,
    cap: usize,
    output: Option<&Path>,
) -> Result<i32> {
    const REPEATS: usize = 3;
    let mut rows = Vec::new();
    for &n in sizes {
        let st = PartiteStructure::new(r, s, n)?;
        let graph = generate_admissible_instance(st, DefectPlan::new(defects, 1), seed)?;
        let opts = SolveOptions::default();
        let mut best = f64::INFINITY;
        let mut last = None;
        for _ in 0..REPEATS {
            let t = Instant::now();
            let d = solver::decompose(&graph, &opts)?;
            best = best.min(t.elapsed().as_secs_f64());
            last = Some(d);
        }
        let d = last.expect("at least one repeat");
        let (dense_s, diff) = if st.num_edges() <= cap {
            let mut best_dense = f64::INFINITY;
            let mut z = Vec::new();
            for _ in 0..REPEATS {
                let t = Instant::now();
                z = oracle::DenseSystem::build(&graph, d.report.eta.as_ref(), cap)?.solve()?;
                best_dense = best_dense.min(t.elapsed().as_secs_f64());
            }
            let diff = z.iter().zip(d.z.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            (Some(best_dense), Some(diff))
        } else {
            (None, None)
        };
        rows.push(BenchRow {
            n,
            edges: st.num_edges(),
            cliques: d.report.cliques,
            iterations: d.report.iterations,
            matrix_free_s: best,
            dense_s,
            max_z_difference: diff,
        });
    }
    let mut text = vec![vec![
        "n".to_string(),
        "|E|".into(),
        "cliques".into(),
        "iters".into(),
        "matrix-free s".into(),
        "dense s".into(),
    ]];
    for row in &rows {
        text.push(vec![
            row.n.to_string(),
            row.edges.to_string(),
            row.cliques.to_string(),
            row.iterations.to_string(),
            format!("{:.4}", row.matrix_free_s),
            row.dense_s.map_or("-".into(), |t| format!("{t:.4}")),
        ]);
    }
    println!("{}", format_rows(&text));
    if let Some(p) = output {
        write_json(&rows, p)?;
    }
    Ok(EXIT_OK)
}
