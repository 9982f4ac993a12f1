mod common;

use common::*;
use nalgebra::{DVector, SymmetricEigen};
use tvsam::harness::FrameKind;
use tvsam::linsolve::{opnorm_dwinvdt, NormalSystem, Strategy};
use tvsam::operators::{gen_gaussian_matrix, gen_tight_frame, make_kernel};
use tvsam::prox::ObjectiveParams;
use tvsam::{AnalysisOp, GradField, KernelSpec, LinearMap, TvError};

fn dense_solve(params: &ObjectiveParams, rhs: &[f64]) -> Vec<f64> {
    let w = dense_w(params);
    w.cholesky()
        .unwrap()
        .solve(&DVector::from_column_slice(rhs))
        .as_slice()
        .to_vec()
}

fn rel(a: &[f64], b: &[f64]) -> f64 {
    norm(&tvsam::vecops::sub(a, b)) / norm(b).max(1e-300)
}

#[test]
fn spectral_matches_dense_factorisation() {
    let params = small_deblur(8, 1);
    let sys = NormalSystem::build(&params).unwrap();
    assert_eq!(sys.strategy(), Strategy::Spectral);
    let rhs = randn(64, &mut rng(2));
    let got = sys.solve_rhs(&rhs).unwrap();
    assert!(max_abs(&got, &dense_solve(&params, &rhs)) <= 1e-9);
}

#[test]
fn woodbury_matches_dense_factorisation() {
    let params = small_recovery(32, 128, FrameKind::Tight, 50.0, 10.0, 3);
    let sys = NormalSystem::build(&params).unwrap();
    assert_eq!(sys.strategy(), Strategy::Woodbury);
    let rhs = randn(128, &mut rng(4));
    let got = sys.solve_rhs(&rhs).unwrap();
    assert!(max_abs(&got, &dense_solve(&params, &rhs)) <= 1e-9);
}

#[test]
fn routes_agree_pairwise() {
    let cases = [
        (small_deblur(12, 5), vec![Strategy::Spectral, Strategy::Cg]),
        (small_deblur(16, 6), vec![Strategy::Spectral, Strategy::Cg]),
        (
            small_recovery(64, 256, FrameKind::Tight, 5.0, 2.0, 7),
            vec![Strategy::Woodbury, Strategy::Cg],
        ),
        (
            small_recovery(64, 256, FrameKind::Dct, 5.0, 2.0, 8),
            vec![Strategy::Woodbury, Strategy::Cg],
        ),
    ];
    for (params, routes) in &cases {
        let rhs = randn(params.dim(), &mut rng(9));
        let sols: Vec<Vec<f64>> = routes
            .iter()
            .map(|r| {
                let sys = NormalSystem::new(
                    &params.k,
                    &params.d,
                    &params.f,
                    params.mu,
                    params.beta,
                    Some(*r),
                )
                .unwrap();
                assert_eq!(sys.strategy(), *r);
                sys.solve_rhs(&rhs).unwrap()
            })
            .collect();
        assert!(rel(&sols[0], &sols[1]) <= 1e-8, "{routes:?}");
    }
}

#[test]
fn manufactured_rhs_recovers_known_solution() {
    for params in [
        small_deblur(10, 11),
        small_recovery(24, 96, FrameKind::Tight, 3.0, 1.0, 12),
    ] {
        let sys = NormalSystem::build(&params).unwrap();
        let x_hat = randn(params.dim(), &mut rng(13));
        let rhs = sys.apply_w(&x_hat).unwrap();
        assert!(max_abs(&sys.solve_rhs(&rhs).unwrap(), &x_hat) <= 1e-9);
        // and through the z-form: Dᵀz + b = Wx̂ with z = Dx̂ - ratio·D⁺… is awkward,
        // so check the residual contract of solve_normal instead
        let z = params.d.apply(&x_hat).unwrap();
        let x = sys.solve_normal(&z).unwrap();
        let r = sys.rhs(&z).unwrap();
        let wx = sys.apply_w(&x).unwrap();
        assert!(norm(&tvsam::vecops::sub(&wx, &r)) <= 1e-9 * (1.0 + norm(&r)));
    }
}

#[test]
fn solve_is_linear() {
    let params = small_deblur(8, 14);
    let sys = NormalSystem::build(&params).unwrap();
    let mut r = rng(15);
    let (a, b) = (randn(64, &mut r), randn(64, &mut r));
    let combo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - 0.5 * y).collect();
    let sa = sys.solve_rhs(&a).unwrap();
    let sb = sys.solve_rhs(&b).unwrap();
    let want: Vec<f64> = sa.iter().zip(&sb).map(|(x, y)| 2.0 * x - 0.5 * y).collect();
    assert!(max_abs(&sys.solve_rhs(&combo).unwrap(), &want) <= 1e-10);
}

#[test]
fn delta_blur_eigenvalues_match_dense() {
    let op = make_kernel(&KernelSpec::Delta, (4, 4)).unwrap();
    let params = ObjectiveParams::new(
        1.0,
        1.0,
        LinearMap::circulant(op),
        AnalysisOp::tv(4, 4),
        vec![0.0; 16],
    )
    .unwrap();
    let sys = NormalSystem::build(&params).unwrap();
    let mut spectral = sys.eigs_w().unwrap().to_vec();
    spectral.sort_by(f64::total_cmp);
    let mut dense: Vec<f64> = SymmetricEigen::new(dense_w(&params))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    dense.sort_by(f64::total_cmp);
    assert!(max_abs(&spectral, &dense) <= 1e-10);
    // closed form 4sin²(πj/4) + 4sin²(πk/4) + 1
    let mut closed: Vec<f64> = (0..4)
        .flat_map(|j| (0..4).map(move |k| (j, k)))
        .map(|(j, k)| {
            let s = |t: usize| (std::f64::consts::PI * t as f64 / 4.0).sin().powi(2);
            4.0 * s(j) + 4.0 * s(k) + 1.0
        })
        .collect();
    closed.sort_by(f64::total_cmp);
    assert!(max_abs(&spectral, &closed) <= 1e-12);
}

#[test]
fn singular_system_is_rejected() {
    let op = tvsam::CirculantOp::new(vec![0.0; 9], 3, 3, (6, 6)).unwrap();
    let err = ObjectiveParams::new(
        1.0,
        1.0,
        LinearMap::circulant(op),
        AnalysisOp::tv(6, 6),
        vec![0.0; 36],
    )
    .and_then(|p| NormalSystem::build(&p));
    assert!(matches!(err, Err(TvError::SingularNormal(_))));
}

#[test]
fn woodbury_route_for_table_sized_recovery() {
    let k = LinearMap::Dense(gen_gaussian_matrix(256, 1024, 1).unwrap());
    let d = AnalysisOp::TightFrame(gen_tight_frame(2048, 1024, 2).unwrap());
    assert_eq!(tvsam::linsolve::select_strategy(&k, &d), Strategy::Woodbury);
}

fn dense_opnorm(params: &ObjectiveParams) -> f64 {
    let d = dense_analysis(&params.d);
    let w_inv = dense_w(params).try_inverse().unwrap();
    let m = &d * w_inv * d.transpose();
    SymmetricEigen::new((&m + m.transpose()) * 0.5)
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
}

#[test]
fn coupling_norm_examples() {
    let delta = |ratio: f64| {
        let op = make_kernel(&KernelSpec::Delta, (4, 4)).unwrap();
        ObjectiveParams::new(
            ratio,
            1.0,
            LinearMap::circulant(op),
            AnalysisOp::tv(4, 4),
            vec![0.0; 16],
        )
        .unwrap()
    };
    let p1 = delta(1.0);
    let est = opnorm_dwinvdt(&NormalSystem::build(&p1).unwrap()).unwrap();
    let want = dense_opnorm(&p1);
    assert!(est > 0.0 && est < 1.0);
    assert!((est - want).abs() < 1e-8);
    // largest DᵀD eigenvalue 8 gives 8 / (8 + ratio)
    assert!((want - 8.0 / 9.0).abs() < 1e-12);

    let p2 = delta(1e-8);
    let est = opnorm_dwinvdt(&NormalSystem::build(&p2).unwrap()).unwrap();
    assert!(est < 1.0 && est > 1.0 - 1e-8);
}

#[test]
fn coupling_norm_never_exceeds_one() {
    let systems = [
        small_deblur(8, 21),
        small_deblur(13, 22),
        small_recovery(16, 64, FrameKind::Tight, 100.0, 1.0, 23),
        small_recovery(16, 64, FrameKind::Dct, 0.01, 10.0, 24),
    ];
    for params in &systems {
        let est = opnorm_dwinvdt(&NormalSystem::build(params).unwrap()).unwrap();
        assert!(est <= 1.0 + 1e-8, "{est}");
        assert!(
            (est - dense_opnorm(params)).abs() < 1e-6,
            "{est} vs {}",
            dense_opnorm(params)
        );
    }
}

#[test]
fn field_rhs_uses_adjoint() {
    let params = small_deblur(6, 25);
    let sys = NormalSystem::build(&params).unwrap();
    let z = GradField::new(36, 2, randn(72, &mut rng(26))).unwrap();
    let d = explicit_d(6, 6);
    let dtz = d.transpose() * DVector::from_column_slice(z.data());
    let want: Vec<f64> = dtz.iter().zip(sys.b()).map(|(a, b)| a + b).collect();
    assert!(max_abs(&sys.rhs(&z).unwrap(), &want) <= 1e-12);
}
