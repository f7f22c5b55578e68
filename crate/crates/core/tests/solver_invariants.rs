use graal_core::linalg::norm2;
use graal_core::problems::{random_connected_graph, DenseMatrix, LogRegDataset, LogisticRegression, MatrixGame};
use graal_core::solver::{
    iterate_agraal, iterate_bgraal_fixed, iterate_modified, run, run_observed, Algorithm, AgraalParams, GammaSchedule, NoClock,
    OperatorProblem, Problem, SolverConfig, SolverState, StepBranch, StepSizeController,
};
use graal_core::{Geometry, Regularizer, PHI};

fn two_node() -> MatrixGame {
    MatrixGame::new(DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap()
}

#[test]
fn two_node_game_stays_uniform_from_uniform_start() {
    let game = two_node();
    let w0 = game.initial_point();
    let ctrl = StepSizeController::new(0.5, 0.8, 0.75, GammaSchedule::MATRIX_GAME, 1.0).unwrap();
    let mut st = SolverState::new(&game, &w0, &w0, ctrl).unwrap();
    for i in 0..50 {
        match i % 3 {
            0 => iterate_modified(&game, &mut st).unwrap(),
            1 => iterate_bgraal_fixed(&game, &mut st, PHI / 2.0).unwrap(),
            _ => iterate_agraal(&game, &mut st, &AgraalParams::default()).unwrap(),
        };
        assert!(st.w().iter().all(|&v| (v - 0.5).abs() <= 1e-15));
        assert!(st.w_bar().iter().all(|&v| (v - 0.5).abs() <= 1e-15));
    }
}

#[test]
fn every_algorithm_solves_two_node_game() {
    let game = two_node();
    for algo in Algorithm::ALL {
        let out = run(&game, &SolverConfig::default().with_algorithm(algo)).unwrap();
        assert!(out.converged, "{algo}");
        assert!(out.final_residual() <= 1e-6);
        assert!(out.final_point.iter().all(|&v| (v - 0.5).abs() <= 1e-6), "{algo}: {:?}", out.final_point);
        assert!(game.duality_gap(&out.final_point).unwrap() <= 1e-6);
    }
}

#[test]
fn agraal_step_never_exceeds_cap() {
    let game = MatrixGame::from_graph(&random_connected_graph(8, 0.3, 1).unwrap()).unwrap();
    let cfg = SolverConfig {
        max_iter: 5_000,
        ..SolverConfig::default().with_algorithm(Algorithm::AGraal)
    };
    let out = run(&game, &cfg).unwrap();
    assert!(out.records.iter().all(|r| r.lambda <= 1e6 && r.branch == StepBranch::Adaptive));
}

#[test]
fn game_iterates_stay_feasible_and_steps_bounded() {
    for seed in 0..4 {
        let game = MatrixGame::from_graph(&random_connected_graph(12, 0.3, seed).unwrap()).unwrap();
        let l = game.lipschitz().unwrap();
        for algo in [Algorithm::Modified, Algorithm::BGraal] {
            let cfg = SolverConfig {
                max_iter: 3_000,
                seed,
                ..SolverConfig::default().with_algorithm(algo)
            };
            let mut lambda0 = None;
            let mut gamma_sum = 0.0;
            let out = run_observed(&game, &cfg, &NoClock, |st, rec| {
                let l0 = *lambda0.get_or_insert(st.controller().lambda0());
                for block in [&st.w()[..12], &st.w()[12..]] {
                    assert!((block.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                }
                // mirror coordinates are finite even where w underflows
                assert!(st.dual_w().iter().all(|v| v.is_finite()));
                if algo == Algorithm::Modified {
                    assert!(rec.lambda >= (0.75 / l).min(l0) - 1e-12);
                    gamma_sum += cfg.gamma.for_iteration(rec.iter);
                    assert!(rec.lambda <= l0 * gamma_sum.exp() + 1e-9);
                }
            })
            .unwrap();
            assert_eq!(out.iterations(), 3_000);
            assert!(game.duality_gap(&out.final_point).unwrap() <= game.duality_gap(&out.start.0).unwrap());
        }
    }
}

#[test]
fn decrease_branch_dies_out_with_small_growth() {
    // With a quickly vanishing growth sequence the step size settles and
    // only increases are taken from some point on.
    let p = OperatorProblem::new(
        Geometry::euclidean(2),
        Regularizer::l1(0.05).unwrap(),
        |w: &[f64], out: &mut [f64]| {
            out[0] = 2.0 * w[0] + w[1];
            out[1] = -w[0] + w[1];
        },
        vec![3.0, -2.0],
    );
    let cfg = SolverConfig {
        gamma: GammaSchedule::new(1e-4, 1.0, 2.0).unwrap(),
        tol: 1e-12,
        ..SolverConfig::default()
    };
    let out = run(&p, &cfg).unwrap();
    assert!(out.converged);
    assert!(out.iterations() >= 20);
    let tail = &out.records[out.records.len() * 4 / 5..];
    assert!(tail.iter().all(|r| r.branch == StepBranch::Increase));
}

#[test]
fn logistic_regression_converges_and_decreases_objective() {
    let ds = LogRegDataset::synthetic(60, 6, 0.1, 5).unwrap();
    let prob = LogisticRegression::new(ds).unwrap();
    let start = prob.objective(&prob.initial_point()).unwrap();
    for algo in Algorithm::ALL {
        let cfg = SolverConfig {
            tol: 1e-6,
            max_iter: 50_000,
            gamma: GammaSchedule::LOGREG,
            ..SolverConfig::default().with_algorithm(algo)
        };
        let out = run(&prob, &cfg).unwrap();
        assert!(out.converged, "{algo}: {}", out.final_residual());
        assert!(out.final_merit() < start);
        assert_eq!(out.final_merit(), prob.objective(&out.final_point).unwrap());
    }
}

#[test]
fn identity_operator_decays_geometrically() {
    let p = OperatorProblem::new(
        Geometry::euclidean(3),
        Regularizer::Zero,
        |w: &[f64], out: &mut [f64]| out.copy_from_slice(w),
        vec![1.0, -2.0, 0.5],
    )
    .with_lipschitz(1.0);
    for algo in Algorithm::ALL {
        let cfg = SolverConfig {
            tol: 1e-10,
            ..SolverConfig::default().with_algorithm(algo)
        };
        let out = run(&p, &cfg).unwrap();
        assert!(out.converged, "{algo}");
        assert!(norm2(&out.final_point) < 1e-9, "{algo}");
        assert!(out.iterations() < 500, "{algo}: {}", out.iterations());
    }
}
