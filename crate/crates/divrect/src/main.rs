use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use divrect::bench::emit;
use divrect::bench::profile::{DEFAULT_MAX_BETA, DEFAULT_POINTS};
use divrect::bench::{aggregate, cost_matrix, log_grid, perf_profile, run_suite, Metric};
use divrect::{default_workers, run};
use divrect_core::partition::StorageKind;
use divrect_core::problem::{lookup_problem, problem_names, suite, ProblemSpec, Suite};
use divrect_core::solve::{
    strategy, RunConfig, Status, ALGORITHMS, DEFAULT_EPS_PE, FAILURE_SENTINEL,
};

const USAGE_ERROR: u8 = 1;
const FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "divrect",
    version,
    about = "DIRECT-type global optimization solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem with one algorithm.
    Solve(SolveArgs),
    /// Run algorithms over a suite and write per-run results.
    Bench(BenchArgs),
    /// Build performance profiles from a results file.
    Profile(ProfileArgs),
    /// List algorithm ids and problem names.
    List,
}

#[derive(Args)]
struct Budget {
    /// Target percent error to the known optimum.
    #[arg(long, default_value_t = DEFAULT_EPS_PE)]
    eps_pe: f64,
    #[arg(long, default_value_t = FAILURE_SENTINEL)]
    max_evals: usize,
    /// Wall-clock limit per run in seconds.
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Override of the catalog epsilon.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Worker threads per run (default from DIVRECT_WORKERS, else 1).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_parser = ["static", "dynamic"], default_value = "static")]
    storage: String,
}

impl Budget {
    fn config(&self, algorithm: &str) -> RunConfig {
        let mut cfg = RunConfig::new(algorithm);
        cfg.eps_pe = self.eps_pe;
        cfg.max_evals = self.max_evals;
        cfg.max_time = self.max_time;
        cfg.max_iters = self.max_iters;
        cfg.epsilon = self.epsilon;
        cfg.workers = self.workers.unwrap_or_else(default_workers);
        cfg.storage = match self.storage.as_str() {
            "dynamic" => StorageKind::Dynamic,
            _ => StorageKind::StaticPool,
        };
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    alg: String,
    #[arg(long)]
    problem: String,
    /// Dimension of scalable problems.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    budget: Budget,
    /// Write the per-iteration history as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated algorithm ids.
    #[arg(long, value_delimiter = ',', required = true)]
    algs: Vec<String>,
    #[arg(long, value_parser = ["box", "linear", "nonlinear", "hidden", "engineering"])]
    suite: Option<String>,
    /// Comma-separated problem names, used instead of or after the suite.
    #[arg(long, value_delimiter = ',')]
    problems: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    /// Aggregate report path (default: the results path with `.report.txt`).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Runs executed at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = ["fevals", "time"], default_value = "fevals")]
    metric: String,
    #[arg(long)]
    out: PathBuf,
    /// Numeric curves (default: the SVG path with `.csv`).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_BETA)]
    max_beta: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Profile(a) => profile(a),
        Command::List => {
            list();
            Ok(ExitCode::SUCCESS)
        }
    };
    outcome.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(USAGE_ERROR)
    })
}

fn check_algorithm(id: &str) -> Result<(), String> {
    strategy(id)
        .map(|_| ())
        .map_err(|e| format!("{e}; run `divrect list` for the catalog"))
}

fn check_budget(b: &Budget) -> Result<(), String> {
    if b.workers == Some(0) {
        return Err("--workers must be at least 1".into());
    }
    if b.eps_pe.is_nan() || b.eps_pe < 0.0 {
        return Err("--eps-pe must be non-negative".into());
    }
    Ok(())
}

fn solve(a: SolveArgs) -> Result<ExitCode, String> {
    check_algorithm(&a.alg)?;
    check_budget(&a.budget)?;
    let spec = lookup_problem(&a.problem, a.n).map_err(|e| e.to_string())?;
    let cfg = a.budget.config(&a.alg);
    let r = run(&spec, &cfg).map_err(|e| e.to_string())?;
    println!("algorithm  {}", a.alg);
    println!(
        "problem    {} (n = {}, {})",
        spec.name,
        spec.dim(),
        spec.class()
    );
    println!("status     {}", r.status.as_str());
    println!("f_min      {}", r.f_min);
    println!("x_min      {:?}", r.x_min);
    if let Some(fstar) = spec.fstar() {
        println!("f*         {fstar}");
    }
    println!("evals      {}", r.evals);
    println!("iters      {}", r.iters);
    println!("time_s     {:.6}", r.elapsed);
    println!("workers    {}", cfg.workers);
    if let Some(path) = &a.trace {
        emit::write_trace_file(path, &r.trace).map_err(|e| e.to_string())?;
    }
    Ok(if r.status == Status::Solved {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILED)
    })
}

fn bench(a: BenchArgs) -> Result<ExitCode, String> {
    for id in &a.algs {
        check_algorithm(id)?;
    }
    check_budget(&a.budget)?;
    let mut problems: Vec<ProblemSpec> = match &a.suite {
        Some(name) => suite(Suite::parse(name).expect("validated by clap")),
        None => Vec::new(),
    };
    for name in &a.problems {
        problems.push(lookup_problem(name, None).map_err(|e| e.to_string())?);
    }
    if problems.is_empty() {
        return Err("give --suite or --problems".into());
    }
    let base = a.budget.config("");
    let result = run_suite(&a.algs, &problems, &base, a.jobs.max(1));
    emit::write_csv(&a.out, &result.records).map_err(|e| e.to_string())?;
    let report_path = a
        .report
        .unwrap_or_else(|| a.out.with_extension("report.txt"));
    let report = emit::render_report(&aggregate(&result.records));
    emit::write_text(&report_path, &report).map_err(|e| e.to_string())?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn profile(a: ProfileArgs) -> Result<ExitCode, String> {
    if a.max_beta.is_nan() || a.max_beta <= 1.0 || a.points < 2 {
        return Err("--max-beta must exceed 1 and --points must be at least 2".into());
    }
    let metric = Metric::parse(&a.metric).expect("validated by clap");
    let records = emit::read_csv(&a.input).map_err(|e| e.to_string())?;
    let matrix = cost_matrix(&records, metric).map_err(|e| e.to_string())?;
    let prof = perf_profile(&matrix, &log_grid(1.0, a.max_beta, a.points));
    let svg = emit::render_profile_svg(&prof, &format!("performance profile ({})", a.metric));
    emit::write_text(&a.out, &svg).map_err(|e| e.to_string())?;
    let csv_path = a.csv.unwrap_or_else(|| a.out.with_extension("csv"));
    emit::write_profile_csv(&csv_path, &prof).map_err(|e| e.to_string())?;
    for (s, name) in prof.solvers.iter().enumerate() {
        println!("{name}\twins {}", prof.win_fraction(s));
    }
    Ok(ExitCode::SUCCESS)
}

fn list() {
    println!("algorithms:");
    for id in ALGORITHMS {
        println!("  {id}");
    }
    println!("problems:");
    for name in problem_names() {
        println!("  {name}");
    }
}
