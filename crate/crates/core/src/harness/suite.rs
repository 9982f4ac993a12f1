//! Benchmark suites mirroring the deblurring tables, the recovery tables and
//! the SNR-per-iteration comparison.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use super::recovery::{default_sparsity, gen_recovery_problem, rel_error, FrameKind, RecoverySpec};
use crate::error::{Result, TvError};
use crate::imaging::{degrade, load_image, mu_auto, snr_db_slice, DegradationSpec};
use crate::operators::{AnalysisOp, Image, KernelSpec, LinearMap};
use crate::prox::ObjectiveParams;
use crate::solvers::{admm_solve, am_solve, sam_solve, SolveOutput, SolverConfig};

pub const IMAGE_BETA: f64 = 128.0;
pub const RECOVERY_BETA: f64 = 2048.0;
pub const IMAGE_SIGMA: f64 = 1e-3;
pub const RECOVERY_SIGMA: f64 = 1e-3;
pub const IMAGE_TOL: f64 = 1e-3;
pub const RECOVERY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Table2,
    Table3,
    Table4,
    Fig2,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
            Suite::Table3 => "table3",
            Suite::Table4 => "table4",
            Suite::Fig2 => "fig2",
        })
    }
}

impl FromStr for Suite {
    type Err = TvError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => Suite::Table1,
            "table2" => Suite::Table2,
            "table3" => Suite::Table3,
            "table4" => Suite::Table4,
            "fig2" => Suite::Fig2,
            _ => return Err(TvError::InvalidParameter(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// ≤256×256 crops, n ≤ 1024, 3 repetitions.
    Desk,
    /// Original sizes, 10 repetitions.
    Full,
}

impl Scale {
    pub fn repetitions(self) -> usize {
        match self {
            Scale::Desk => 3,
            Scale::Full => 10,
        }
    }
}

impl FromStr for Scale {
    type Err = TvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "full" => Ok(Scale::Full),
            _ => Err(TvError::InvalidParameter(format!("unknown scale {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Sam,
    Am,
    Admm,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Sam, SolverKind::Am, SolverKind::Admm];

    pub fn run(
        self,
        params: &ObjectiveParams,
        config: &SolverConfig,
        reference: Option<&[f64]>,
    ) -> Result<SolveOutput> {
        match self {
            SolverKind::Sam => sam_solve(params, config, reference),
            SolverKind::Am => am_solve(params, config, reference),
            SolverKind::Admm => admm_solve(params, config, reference),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Sam => "sam",
            SolverKind::Am => "am",
            SolverKind::Admm => "admm",
        })
    }
}

impl FromStr for SolverKind {
    type Err = TvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sam" => Ok(SolverKind::Sam),
            "am" => Ok(SolverKind::Am),
            "admm" => Ok(SolverKind::Admm),
            _ => Err(TvError::InvalidParameter(format!("unknown solver {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    SnrDb,
    RelError,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::SnrDb => "snr_db",
            Metric::RelError => "rel_error",
        })
    }
}

/// One (case, solver) cell, aggregated over repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub case: String,
    pub solver: SolverKind,
    pub reps: usize,
    pub time_mean: f64,
    pub time_std: f64,
    pub metric: Metric,
    pub value_mean: f64,
    pub value_std: f64,
    pub iterations_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub suite: Suite,
    pub rows: Vec<BenchRow>,
    /// Cases that could not run, with the reason.
    pub skipped: Vec<String>,
    pub trace_files: Vec<PathBuf>,
}

pub const BENCH_HEADER: [&str; 10] = [
    "suite",
    "case",
    "solver",
    "reps",
    "time_s_mean",
    "time_s_std",
    "metric",
    "value_mean",
    "value_std",
    "iterations_mean",
];

impl BenchResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(BENCH_HEADER)?;
        for r in &self.rows {
            w.write_record([
                self.suite.to_string(),
                r.case.clone(),
                r.solver.to_string(),
                r.reps.to_string(),
                format!("{:.6}", r.time_mean),
                format!("{:.6}", r.time_std),
                r.metric.to_string(),
                format!("{:.10e}", r.value_mean),
                format!("{:.10e}", r.value_std),
                format!("{:.2}", r.iterations_mean),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn row(&self, case: &str, solver: SolverKind) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.case == case && r.solver == solver)
    }
}

/// Inputs of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub scale: Scale,
    pub images_dir: Option<PathBuf>,
    pub seed: u64,
    /// Overrides the scale's repetition count.
    pub repetitions: Option<usize>,
    /// Restricts recovery suites to the given (m, n) rows.
    pub recovery_sizes: Option<Vec<(usize, usize)>>,
    pub solvers: Vec<SolverKind>,
}

impl SuiteOptions {
    pub fn new(scale: Scale) -> Self {
        Self {
            scale,
            images_dir: None,
            seed: 0,
            repetitions: None,
            recovery_sizes: None,
            solvers: SolverKind::ALL.to_vec(),
        }
    }

    fn reps(&self) -> usize {
        self.repetitions
            .unwrap_or_else(|| self.scale.repetitions())
            .max(1)
    }
}

/// Blur kernels of the deblurring tables.
pub fn table_kernels() -> Vec<KernelSpec> {
    vec![
        KernelSpec::Gaussian {
            size: 11,
            sigma: 9.0,
        },
        KernelSpec::Gaussian {
            size: 21,
            sigma: 11.0,
        },
        KernelSpec::Gaussian {
            size: 31,
            sigma: 13.0,
        },
        KernelSpec::Motion {
            len: 21.0,
            theta: 45.0,
        },
        KernelSpec::Motion {
            len: 41.0,
            theta: 90.0,
        },
        KernelSpec::Motion {
            len: 61.0,
            theta: 135.0,
        },
        KernelSpec::Average { size: 11 },
        KernelSpec::Average { size: 13 },
        KernelSpec::Average { size: 15 },
    ]
}

pub fn recovery_sizes(scale: Scale) -> Vec<(usize, usize)> {
    let all = [
        (256, 1024),
        (256, 2048),
        (256, 4096),
        (256, 8192),
        (512, 2048),
        (512, 4096),
        (512, 8192),
        (1024, 2048),
        (1024, 4096),
        (1024, 8192),
    ];
    all.into_iter()
        .filter(|&(_, n)| scale == Scale::Full || n <= 1024)
        .collect()
}

/// Finds `<name>.pgm` or `<name>.ppm` under `dir`.
pub fn find_image(dir: Option<&Path>, name: &str) -> Option<PathBuf> {
    let dir = dir?;
    ["pgm", "ppm"]
        .iter()
        .map(|ext| dir.join(format!("{name}.{ext}")))
        .find(|p| p.is_file())
}

/// Blurs and noises `truth`, returning the deblurring instance.
pub fn deblur_params(
    truth: &Image,
    spec: &DegradationSpec,
    mu: f64,
    beta: f64,
) -> Result<ObjectiveParams> {
    let (f, op) = degrade(truth, spec)?;
    let (h, w, c) = (truth.height(), truth.width(), truth.channels());
    ObjectiveParams::new(
        mu,
        beta,
        LinearMap::Circulant { op, channels: c },
        AnalysisOp::TvPeriodic {
            height: h,
            width: w,
            channels: c,
        },
        f.into_data(),
    )
}

struct Samples {
    time: Vec<f64>,
    value: Vec<f64>,
    iterations: Vec<f64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn aggregate(case: &str, solver: SolverKind, metric: Metric, s: &Samples) -> BenchRow {
    let (time_mean, time_std) = mean_std(&s.time);
    let (value_mean, value_std) = mean_std(&s.value);
    let (iterations_mean, _) = mean_std(&s.iterations);
    BenchRow {
        case: case.to_string(),
        solver,
        reps: s.time.len(),
        time_mean,
        time_std,
        metric,
        value_mean,
        value_std,
        iterations_mean,
    }
}

/// Runs `suite`, writes its CSV to `out_path` and returns the rows.
pub fn run_suite(suite: Suite, options: &SuiteOptions, out_path: &Path) -> Result<BenchResult> {
    let mut result = BenchResult {
        suite,
        rows: Vec::new(),
        skipped: Vec::new(),
        trace_files: Vec::new(),
    };
    match suite {
        Suite::Table1 => image_table(&mut result, options, &["boat", "man"])?,
        Suite::Table2 => image_table(&mut result, options, &["mandrill", "sandiego"])?,
        Suite::Table3 => recovery_table(&mut result, options, FrameKind::Tight)?,
        Suite::Table4 => recovery_table(&mut result, options, FrameKind::Dct)?,
        Suite::Fig2 => fig2(&mut result, options, out_path)?,
    }
    let file = std::fs::File::create(out_path)?;
    result.write_csv(std::io::BufWriter::new(file))?;
    Ok(result)
}

fn load_truth(result: &mut BenchResult, options: &SuiteOptions, name: &str) -> Option<Image> {
    let Some(path) = find_image(options.images_dir.as_deref(), name) else {
        let dir = options
            .images_dir
            .as_ref()
            .map(|d| d.display().to_string())
            .unwrap_or_else(|| "<no image directory>".into());
        result
            .skipped
            .push(format!("{name}: no {name}.pgm or {name}.ppm in {dir}"));
        return None;
    };
    match load_image(&path) {
        Ok(img) => Some(match options.scale {
            Scale::Desk => img.center_crop(256, 256),
            Scale::Full => img,
        }),
        Err(e) => {
            result.skipped.push(format!("{name}: {e}"));
            None
        }
    }
}

fn image_table(result: &mut BenchResult, options: &SuiteOptions, names: &[&str]) -> Result<()> {
    let mu = mu_auto(IMAGE_SIGMA)?;
    let config = SolverConfig {
        record_trace: false,
        ..SolverConfig::new(IMAGE_TOL, 1000)
    };
    for name in names {
        let Some(truth) = load_truth(result, options, name) else {
            continue;
        };
        for kernel in table_kernels() {
            let case = format!("{name} {kernel}");
            let mut samples: Vec<Samples> = options
                .solvers
                .iter()
                .map(|_| Samples {
                    time: vec![],
                    value: vec![],
                    iterations: vec![],
                })
                .collect();
            let mut failed = None;
            for rep in 0..options.reps() {
                let spec = DegradationSpec {
                    kernel,
                    sigma: IMAGE_SIGMA,
                    seed: options.seed.wrapping_add(rep as u64),
                };
                let params = match deblur_params(&truth, &spec, mu, IMAGE_BETA) {
                    Ok(p) => p,
                    Err(e) => {
                        failed = Some(e.to_string());
                        break;
                    }
                };
                for (solver, s) in options.solvers.iter().zip(samples.iter_mut()) {
                    let start = Instant::now();
                    let out = solver.run(&params, &config, None)?;
                    s.time.push(start.elapsed().as_secs_f64());
                    s.value.push(snr_db_slice(&out.x, truth.data()));
                    s.iterations.push(out.iterations as f64);
                }
            }
            if let Some(reason) = failed {
                result.skipped.push(format!("{case}: {reason}"));
                continue;
            }
            for (solver, s) in options.solvers.iter().zip(&samples) {
                result
                    .rows
                    .push(aggregate(&case, *solver, Metric::SnrDb, s));
            }
        }
    }
    Ok(())
}

fn recovery_table(
    result: &mut BenchResult,
    options: &SuiteOptions,
    frame: FrameKind,
) -> Result<()> {
    let mu = mu_auto(RECOVERY_SIGMA)?;
    let config = SolverConfig {
        record_trace: false,
        ..SolverConfig::new(RECOVERY_TOL, 20_000)
    };
    let sizes = options
        .recovery_sizes
        .clone()
        .unwrap_or_else(|| recovery_sizes(options.scale));
    for (m, n) in sizes {
        let case = format!("{m}/{n} {frame}");
        let mut samples: Vec<Samples> = options
            .solvers
            .iter()
            .map(|_| Samples {
                time: vec![],
                value: vec![],
                iterations: vec![],
            })
            .collect();
        for rep in 0..options.reps() {
            let problem = gen_recovery_problem(&RecoverySpec {
                m,
                n,
                frame,
                frame_ratio: 2,
                s: default_sparsity(m),
                sigma: RECOVERY_SIGMA,
                seed: options.seed.wrapping_add(rep as u64),
            })?;
            let params = problem.params(mu, RECOVERY_BETA)?;
            for (solver, s) in options.solvers.iter().zip(samples.iter_mut()) {
                let start = Instant::now();
                let out = solver.run(&params, &config, None)?;
                s.time.push(start.elapsed().as_secs_f64());
                s.value.push(rel_error(&out.x, &problem.x_true)?);
                s.iterations.push(out.iterations as f64);
            }
        }
        for (solver, s) in options.solvers.iter().zip(&samples) {
            result
                .rows
                .push(aggregate(&case, *solver, Metric::RelError, s));
        }
    }
    Ok(())
}

/// Iterations recorded per solver in the SNR-per-iteration comparison.
pub const FIG2_ITERATIONS: usize = 100;

fn fig2(result: &mut BenchResult, options: &SuiteOptions, out_path: &Path) -> Result<()> {
    let Some(truth) = load_truth(result, options, "man") else {
        return Ok(());
    };
    let kernel = KernelSpec::Motion {
        len: 41.0,
        theta: 91.0,
    };
    let case = format!("man {kernel}");
    let spec = DegradationSpec {
        kernel,
        sigma: IMAGE_SIGMA,
        seed: options.seed,
    };
    let params = deblur_params(&truth, &spec, mu_auto(IMAGE_SIGMA)?, IMAGE_BETA)?;
    let config = SolverConfig::new(0.0, FIG2_ITERATIONS);
    for solver in [SolverKind::Am, SolverKind::Sam] {
        let start = Instant::now();
        let out = solver.run(&params, &config, Some(truth.data()))?;
        let elapsed = start.elapsed().as_secs_f64();
        let path = trace_path(out_path, solver);
        out.trace.save_csv(&path)?;
        result.trace_files.push(path);
        result.rows.push(aggregate(
            &case,
            solver,
            Metric::SnrDb,
            &Samples {
                time: vec![elapsed],
                value: vec![snr_db_slice(&out.x, truth.data())],
                iterations: vec![out.iterations as f64],
            },
        ));
    }
    Ok(())
}

/// `<dir>/<stem>_<solver>_trace.csv` next to the suite CSV.
pub fn trace_path(out_path: &Path, solver: SolverKind) -> PathBuf {
    let stem = out_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "fig2".into());
    out_path.with_file_name(format!("{stem}_{solver}_trace.csv"))
}
