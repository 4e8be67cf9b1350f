//! Command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench_analysis, bench_solver, edge_queries, loglog_slope, Kind};
use crate::eigen::Sweep;
use crate::error::Error;
use crate::geometry::SolverKind;
use crate::morse_flow::{FlowConfig, FlowVariant};
use crate::oracle::{self, Scope};
use crate::pipeline::{analyze, AnalysisConfig, DEFAULT_THETA};
use crate::plot::{render_svg, PlotInput};
use crate::sampled::{parse_metric, SampledSystem};

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_LIPSCHITZ: u8 = 3;
pub const EXIT_ORACLE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "eigenflow", version, about = "Eigenspace persistence of sampled self-maps")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a synthetic sampled system as JSON
    Generate(GenerateArgs),
    /// Compute eigenspace diagrams of a sample
    Analyze(AnalyzeArgs),
    /// Time the pipeline or the sphere solver
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Compare the algorithms against brute-force references
    Oracle(OracleArgs),
    /// Render diagrams from a results file as SVG
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Standard deviation of the Gaussian noise on circle points
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, env = "EIGENFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Auto,
    Full,
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    FlatTorus,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Sample file, JSON or CSV with rows `x,y,image_index`
    pub sample: PathBuf,
    /// Density estimate; required for CSV input
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Period of the flat torus metric
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long, default_value_t = crate::field::DEFAULT_PRIME)]
    pub prime: u32,
    /// Comma-separated eigenvalues; negative values count down from the prime
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eigenvalues: Vec<i64>,
    #[arg(long, value_enum, default_value_t = SweepMode::Auto)]
    pub sweep: SweepMode,
    /// Significance threshold as a fraction of the largest H1 persistence
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    #[arg(long, env = "EIGENFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FlowVariant::Full)]
    pub flow: FlowVariant,
    #[arg(long, value_enum, default_value_t = SolverKind::MoveToFront)]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Results path; JSON goes to stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Wall time of the full analysis against sample size
    Analysis(BenchAnalysisArgs),
    /// Separating-sphere queries for nearest-neighbour edges
    Solver(BenchSolverArgs),
}

#[derive(Args, Debug)]
pub struct BenchAnalysisArgs {
    #[arg(value_enum, default_value_t = Kind::Circle)]
    pub kind: Kind,
    #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,5000")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, env = "EIGENFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchSolverArgs {
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub queries: usize,
    #[arg(long, env = "EIGENFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = "EIGENFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Results JSON written by `analyze`
    pub results: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Diagrams to draw; defaults to every nonempty one
    #[arg(long, value_delimiter = ',')]
    pub eigenvalues: Vec<u32>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_lipschitz_overflow() => EXIT_LIPSCHITZ,
            Error::Sample(_) | Error::Config(_) => EXIT_INPUT,
            Error::Geometry(_) => EXIT_INPUT,
            _ => EXIT_OTHER,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_OTHER, message: format!("{}: {e}", path.display()) }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Maps negative entries to `p - |k|` and checks the range.
pub fn resolve_eigenvalues(values: &[i64], p: u32) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for &v in values {
        let r = if v < 0 { p as i64 + v } else { v };
        if r < 0 || r >= p as i64 {
            return Err(format!("eigenvalue {v} is outside Z_{p}"));
        }
        out.push(r as u32);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn run_generate(a: GenerateArgs) -> Result<(), Failure> {
    if !(a.sigma >= 0.0 && a.sigma.is_finite()) {
        return Err(input_error("sigma must be a nonnegative number"));
    }
    let sys = a.kind.generate(a.n, a.sigma, a.seed)?;
    write_or_print(a.out.as_deref(), &(sys.to_json() + "\n"))
}

fn run_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let metric = match a.metric {
        None => None,
        Some(MetricArg::Euclidean) => Some(parse_metric("euclidean", None).map_err(Error::from)?),
        Some(MetricArg::FlatTorus) => Some(parse_metric("flat_torus", a.period).map_err(Error::from)?),
    };
    let sys = SampledSystem::load(&a.sample, a.rho, metric)
        .map_err(|e| input_error(format!("{}: {e}", a.sample.display())))?;
    let eigenvalues = resolve_eigenvalues(&a.eigenvalues, a.prime).map_err(input_error)?;
    let sweep = match a.sweep {
        SweepMode::Auto => Sweep::Auto(eigenvalues),
        SweepMode::Full => Sweep::Full,
        SweepMode::List if eigenvalues.is_empty() => {
            return Err(input_error("--sweep list needs --eigenvalues"));
        }
        SweepMode::List => Sweep::List(eigenvalues),
    };
    let cfg = AnalysisConfig {
        prime: a.prime,
        sweep,
        theta: a.theta,
        flow: FlowConfig { variant: a.flow, solver: a.solver, seed: a.seed, ..FlowConfig::default() },
        threads: a.threads.max(1),
    };
    let res = analyze(&sys, &cfg)?;
    let json = res.to_json() + "\n";
    match &a.out {
        Some(p) => {
            std::fs::write(p, &json).map_err(|e| io_error(p, e))?;
            println!(
                "{} points, {} simplices, {} eigenvalues tested, {} significant intervals",
                res.input.n,
                res.filtration.simplices,
                res.eigenvalues.len(),
                res.significant.len()
            );
            for s in &res.significant {
                let death = s.death.map_or("inf".to_string(), |d| format!("{d:.4}"));
                println!("  t = {:>4}  [{:.4}, {death})  persistence {:.4}", s.t, s.birth, s.persistence);
            }
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn run_bench(cmd: BenchCommand) -> Result<(), Failure> {
    match cmd {
        BenchCommand::Analysis(a) => {
            if a.n_list.is_empty() {
                return Err(input_error("--n-list is empty"));
            }
            let report =
                bench_analysis(a.kind, &a.n_list, a.sigma, a.repeats, &AnalysisConfig::default(), a.seed)?;
            print!("{}", report.table());
            if let Some(p) = &a.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                std::fs::write(p, text + "\n").map_err(|e| io_error(p, e))?;
            }
        }
        BenchCommand::Solver(a) => {
            if a.n_list.iter().any(|&n| n < 2) {
                return Err(input_error("every n must be at least 2"));
            }
            let mut rows = Vec::new();
            println!("{:>8}  {:>14}  {:>14}  {:>14}", "n", "mtf [s]", "recursive [s]", "mtf side tests");
            for &n in &a.n_list {
                let (pts, edges) = edge_queries(n, a.queries, a.seed);
                let (mtf, stats, _) = bench_solver(&pts, &edges, SolverKind::MoveToFront, a.seed);
                let (rec, _, _) = bench_solver(&pts, &edges, SolverKind::Recursive, a.seed);
                let (mtf, rec) = (mtf.as_secs_f64(), rec.as_secs_f64());
                println!("{n:>8}  {mtf:>14.4}  {rec:>14.4}  {:>14}", stats.side_tests);
                rows.push(serde_json::json!({
                    "n": n, "mtf_s": mtf, "recursive_s": rec, "mtf_side_tests": stats.side_tests,
                }));
            }
            let xs: Vec<f64> = a.n_list.iter().map(|&n| n as f64).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r["mtf_s"].as_f64().unwrap_or(0.0)).collect();
            let slope = if xs.len() >= 2 { loglog_slope(&xs, &ys) } else { f64::NAN };
            println!("log-log slope (mtf): {slope:.3}");
            if let Some(p) = &a.json {
                let text = serde_json::json!({ "rows": rows, "slope": slope });
                let text = serde_json::to_string_pretty(&text).expect("report serializes");
                std::fs::write(p, text + "\n").map_err(|e| io_error(p, e))?;
            }
        }
    }
    Ok(())
}

fn run_oracle(a: OracleArgs) -> Result<(), Failure> {
    let reports = oracle::run(a.scope, a.trials, a.seed);
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "ok" } else { "FAIL" };
        println!("{:<44} {:>6} trials  {:>4} failures  {status}", r.name, r.trials, r.failures);
        for d in &r.details {
            println!("    {d}");
        }
        failed += usize::from(!r.passed());
    }
    if failed > 0 {
        return Err(Failure { code: EXIT_ORACLE, message: format!("{failed} oracle suites failed") });
    }
    Ok(())
}

fn run_plot(a: PlotArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.results).map_err(|e| io_error(&a.results, e))?;
    let input = PlotInput::from_json(&text).map_err(|e| input_error(format!("{}: {e}", a.results.display())))?;
    let chosen: Vec<_> = if a.eigenvalues.is_empty() {
        input.diagrams.into_iter().filter(|d| !d.intervals.is_empty()).collect()
    } else {
        input.diagrams.into_iter().filter(|d| a.eigenvalues.contains(&d.t)).collect()
    };
    let svg = render_svg(&chosen, input.filtration.last_radius);
    std::fs::write(&a.out, svg).map_err(|e| io_error(&a.out, e))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Bench(c) => run_bench(c),
        Command::Oracle(a) => run_oracle(a),
        Command::Plot(a) => run_plot(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    ExitCode::from(run(cli))
}
