mod common;

use std::collections::HashSet;

use common::*;
use tvsam::harness::suite::{
    run_suite, Metric, Scale, SolverKind, Suite, SuiteOptions, FIG2_ITERATIONS,
};
use tvsam::harness::{gen_recovery_problem, rel_error, FrameKind, RecoverySpec};
use tvsam::imaging::{mu_auto, save_image};
use tvsam::solvers::SolverConfig;

fn csv_without_times(path: &std::path::Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let keep: Vec<usize> = (0..headers.len())
        .filter(|i| !headers[*i].starts_with("time"))
        .collect();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            keep.iter().map(|i| r[*i].to_string()).collect()
        })
        .collect()
}

fn tiny_recovery_options(seed: u64) -> SuiteOptions {
    SuiteOptions {
        seed,
        repetitions: Some(2),
        recovery_sizes: Some(vec![(16, 64), (24, 64)]),
        ..SuiteOptions::new(Scale::Desk)
    }
}

#[test]
fn missing_images_give_empty_result_with_notes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t1.csv");
    let options = SuiteOptions {
        images_dir: Some(dir.path().to_path_buf()),
        ..SuiteOptions::new(Scale::Desk)
    };
    let result = run_suite(Suite::Table1, &options, &out).unwrap();
    assert!(result.rows.is_empty());
    assert_eq!(result.skipped.len(), 2);
    assert!(result.skipped[0].starts_with("boat") && result.skipped[1].starts_with("man"));
    assert_eq!(csv_without_times(&out).len(), 0);

    let result = run_suite(
        Suite::Fig2,
        &SuiteOptions::new(Scale::Desk),
        &dir.path().join("f.csv"),
    )
    .unwrap();
    assert!(result.rows.is_empty() && result.trace_files.is_empty() && result.skipped.len() == 1);
}

#[test]
fn recovery_suite_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let ra = run_suite(Suite::Table4, &tiny_recovery_options(3), &a).unwrap();
    run_suite(Suite::Table4, &tiny_recovery_options(3), &b).unwrap();
    assert_eq!(csv_without_times(&a), csv_without_times(&b));

    let pairs: HashSet<(String, String)> = ra
        .rows
        .iter()
        .map(|r| (r.case.clone(), r.solver.to_string()))
        .collect();
    assert_eq!(pairs.len(), ra.rows.len());
    assert_eq!(ra.rows.len(), 2 * 3);
    assert!(ra
        .rows
        .iter()
        .all(|r| r.metric == Metric::RelError && r.reps == 2));

    let rc = run_suite(
        Suite::Table4,
        &tiny_recovery_options(4),
        &dir.path().join("c.csv"),
    )
    .unwrap();
    assert_ne!(ra.rows[0].value_mean, rc.rows[0].value_mean);
}

#[test]
fn bench_rows_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let options = SuiteOptions {
        repetitions: Some(1),
        ..tiny_recovery_options(7)
    };
    let result = run_suite(Suite::Table3, &options, &dir.path().join("t3.csv")).unwrap();
    let problem = gen_recovery_problem(&RecoverySpec {
        m: 16,
        n: 64,
        frame: FrameKind::Tight,
        frame_ratio: 2,
        s: 2,
        sigma: 1e-3,
        seed: 7,
    })
    .unwrap();
    let params = problem.params(mu_auto(1e-3).unwrap(), 2048.0).unwrap();
    let config = SolverConfig {
        record_trace: false,
        ..SolverConfig::new(1e-6, 20_000)
    };
    for solver in SolverKind::ALL {
        let out = solver.run(&params, &config, None).unwrap();
        let err = rel_error(&out.x, &problem.x_true).unwrap();
        let row = result.row("16/64 tight", solver).unwrap();
        assert!((row.value_mean - err).abs() <= 1e-10, "{solver}");
        assert_eq!(row.iterations_mean, out.iterations as f64);
    }
}

#[test]
fn image_suite_runs_on_available_images() {
    let dir = tempfile::tempdir().unwrap();
    save_image(&phantom(64, 64), dir.path().join("boat.pgm"), 255).unwrap();
    let options = SuiteOptions {
        images_dir: Some(dir.path().to_path_buf()),
        repetitions: Some(1),
        solvers: vec![SolverKind::Sam],
        ..SuiteOptions::new(Scale::Desk)
    };
    let result = run_suite(Suite::Table1, &options, &dir.path().join("t1.csv")).unwrap();
    assert_eq!(result.rows.len(), 9);
    assert_eq!(result.skipped.len(), 1);
    assert!(result
        .rows
        .iter()
        .all(|r| r.metric == Metric::SnrDb && r.value_mean.is_finite()));
    assert_eq!(result.rows[0].case, "boat gaussian:11:9");
}

#[test]
fn fig2_writes_two_traces() {
    let dir = tempfile::tempdir().unwrap();
    save_image(&phantom(48, 48), dir.path().join("man.pgm"), 255).unwrap();
    let options = SuiteOptions {
        images_dir: Some(dir.path().to_path_buf()),
        ..SuiteOptions::new(Scale::Desk)
    };
    let result = run_suite(Suite::Fig2, &options, &dir.path().join("fig2.csv")).unwrap();
    assert_eq!(result.trace_files.len(), 2);
    for path in &result.trace_files {
        let rows = csv_without_times(path);
        assert_eq!(rows.len(), FIG2_ITERATIONS);
        assert!(rows.iter().all(|r| r[3].parse::<f64>().is_ok()));
    }
}
