//! `tv`: TV deblurring, analysis-sparse recovery and benchmark suites.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tvsam::harness::suite::{deblur_params, run_suite, Scale, SolverKind, Suite, SuiteOptions};
use tvsam::harness::{gen_recovery_problem, rel_error, FrameKind, RecoverySpec};
use tvsam::imaging::{load_image, mu_auto, save_image, snr_db_slice, DegradationSpec};
use tvsam::solvers::{SolveOutput, SolverConfig};
use tvsam::{Image, KernelSpec, TvError};

const EXIT_BAD_ARGS: u8 = 2;
const EXIT_INPUT_MISSING: u8 = 3;
const EXIT_SOLVER: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "tv",
    version,
    about = "Total-variation restoration and analysis-sparse recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Blur and noise an image, then restore it.
    Deblur(DeblurArgs),
    /// Generate and solve a synthetic analysis-sparse recovery problem.
    Recover(RecoverArgs),
    /// Run a benchmark suite and write its CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy)]
enum MuArg {
    Auto,
    Value(f64),
}

impl FromStr for MuArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MuArg::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(MuArg::Value(v)),
            _ => Err(format!("expected \"auto\" or a positive number, got {s:?}")),
        }
    }
}

impl MuArg {
    fn resolve(self, sigma: f64) -> Result<f64, TvError> {
        match self {
            MuArg::Auto => mu_auto(sigma),
            MuArg::Value(v) => Ok(v),
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, default_value = "sam", value_parser = SolverKind::from_str)]
    solver: SolverKind,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// ADMM penalty; defaults to beta.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-iteration trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeblurArgs {
    /// Clean P5/P6 image; it is degraded before restoration.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = KernelSpec::from_str)]
    kernel: KernelSpec,
    #[arg(long, default_value_t = 1e-3)]
    sigma: f64,
    #[arg(long, default_value = "auto")]
    mu: MuArg,
    /// Restored image.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Degraded observation.
    #[arg(long)]
    observed: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct RecoverArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "tight", value_parser = FrameKind::from_str)]
    frame: FrameKind,
    #[arg(long = "frame-ratio", default_value_t = 2)]
    frame_ratio: usize,
    /// Sparsity; defaults to m/8.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    sigma: f64,
    #[arg(long, default_value = "auto")]
    mu: MuArg,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_parser = Suite::from_str)]
    suite: Suite,
    #[arg(long, default_value = "desk", value_parser = Scale::from_str)]
    scale: Scale,
    /// Directory holding boat/man/mandrill/sandiego as .pgm or .ppm.
    #[arg(long)]
    images: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the scale's repetition count.
    #[arg(long)]
    reps: Option<usize>,
}

enum Failure {
    BadArgs(String),
    InputMissing(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::BadArgs(_) => EXIT_BAD_ARGS,
            Failure::InputMissing(_) => EXIT_INPUT_MISSING,
            Failure::Solver(_) => EXIT_SOLVER,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::BadArgs(m) | Failure::InputMissing(m) | Failure::Solver(m) => m,
        }
    }
}

fn bad_args(e: TvError) -> Failure {
    Failure::BadArgs(e.to_string())
}

fn solver_failure(e: TvError) -> Failure {
    match e {
        TvError::InvalidParameter(_)
        | TvError::KernelTooLarge { .. }
        | TvError::KernelSpec { .. } => bad_args(e),
        e => Failure::Solver(e.to_string()),
    }
}

fn io_failure(e: TvError) -> Failure {
    Failure::Solver(e.to_string())
}

fn solver_config(args: &SolveArgs, tol: f64, max_iter: usize) -> Result<SolverConfig, Failure> {
    let config = SolverConfig {
        admm_rho: args.rho,
        record_trace: args.trace.is_some(),
        ..SolverConfig::new(args.tol.unwrap_or(tol), args.max_iter.unwrap_or(max_iter))
    };
    config.validate().map_err(bad_args)?;
    Ok(config)
}

fn write_trace(args: &SolveArgs, out: &SolveOutput) -> Result<(), Failure> {
    if let Some(path) = &args.trace {
        out.trace.save_csv(path).map_err(io_failure)?;
    }
    Ok(())
}

fn save(like: &Image, data: Vec<f64>, path: &Path) -> Result<(), Failure> {
    let image = like.with_data(data).map_err(io_failure)?;
    save_image(&image, path, 255).map_err(|e| io_failure(e.into()))
}

fn print_summary(solver: SolverKind, out: &SolveOutput, seconds: f64, metric: &str, value: f64) {
    println!(
        "solver={solver} iterations={} converged={} time_s={seconds:.3} {metric}={value:.6e}",
        out.iterations, out.converged
    );
}

fn deblur(args: DeblurArgs) -> Result<(), Failure> {
    if !args.input.is_file() {
        return Err(Failure::InputMissing(format!(
            "input image {} not found",
            args.input.display()
        )));
    }
    let truth = load_image(&args.input).map_err(|e| Failure::InputMissing(e.to_string()))?;
    let mu = args.mu.resolve(args.sigma).map_err(bad_args)?;
    let spec = DegradationSpec {
        kernel: args.kernel,
        sigma: args.sigma,
        seed: args.solve.seed,
    };
    let beta = args.solve.beta.unwrap_or(tvsam::harness::suite::IMAGE_BETA);
    let params = deblur_params(&truth, &spec, mu, beta).map_err(solver_failure)?;
    let config = solver_config(&args.solve, tvsam::harness::suite::IMAGE_TOL, 1000)?;
    let start = Instant::now();
    let out = args
        .solve
        .solver
        .run(&params, &config, Some(truth.data()))
        .map_err(solver_failure)?;
    let seconds = start.elapsed().as_secs_f64();
    write_trace(&args.solve, &out)?;
    if let Some(path) = &args.observed {
        save(&truth, params.f.clone(), path)?;
    }
    if let Some(path) = &args.output {
        save(&truth, out.x.clone(), path)?;
    }
    print_summary(
        args.solve.solver,
        &out,
        seconds,
        "snr_db",
        snr_db_slice(&out.x, truth.data()),
    );
    Ok(())
}

fn recover(args: RecoverArgs) -> Result<(), Failure> {
    let problem = gen_recovery_problem(&RecoverySpec {
        m: args.m,
        n: args.n,
        frame: args.frame,
        frame_ratio: args.frame_ratio,
        s: args
            .s
            .unwrap_or_else(|| tvsam::harness::default_sparsity(args.m)),
        sigma: args.sigma,
        seed: args.solve.seed,
    })
    .map_err(bad_args)?;
    let mu = args.mu.resolve(args.sigma).map_err(bad_args)?;
    let beta = args
        .solve
        .beta
        .unwrap_or(tvsam::harness::suite::RECOVERY_BETA);
    let params = problem.params(mu, beta).map_err(bad_args)?;
    let config = solver_config(&args.solve, tvsam::harness::suite::RECOVERY_TOL, 20_000)?;
    let start = Instant::now();
    let out = args
        .solve
        .solver
        .run(&params, &config, Some(&problem.x_true))
        .map_err(solver_failure)?;
    let seconds = start.elapsed().as_secs_f64();
    write_trace(&args.solve, &out)?;
    let err = rel_error(&out.x, &problem.x_true).map_err(solver_failure)?;
    print_summary(args.solve.solver, &out, seconds, "rel_error", err);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    if let Some(dir) = &args.images {
        if !dir.is_dir() {
            return Err(Failure::InputMissing(format!(
                "image directory {} not found",
                dir.display()
            )));
        }
    }
    let options = SuiteOptions {
        images_dir: args.images,
        seed: args.seed,
        repetitions: args.reps,
        ..SuiteOptions::new(args.scale)
    };
    let result = run_suite(args.suite, &options, &args.out).map_err(solver_failure)?;
    for note in &result.skipped {
        eprintln!("skipped: {note}");
    }
    for path in &result.trace_files {
        println!("trace: {}", path.display());
    }
    println!(
        "{} rows written to {}",
        result.rows.len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_BAD_ARGS)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Deblur(a) => deblur(a),
        Command::Recover(a) => recover(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
