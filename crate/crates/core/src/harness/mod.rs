//! Experiment drivers: sparse-recovery instances and benchmark suites.

pub mod recovery;
pub mod suite;

pub use recovery::{
    default_sparsity, gen_recovery_problem, rel_error, FrameKind, RecoveryProblem, RecoverySpec,
};
pub use suite::{run_suite, BenchResult, BenchRow, Metric, Scale, SolverKind, Suite, SuiteOptions};
