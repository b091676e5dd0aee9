#![allow(clippy::needless_range_loop)]

mod support;

use gazetrack::filtering::{
    gating_distance, predict, scalar_fuse, update, KalmanTrackState, Measurement, MotionModel, StateMatrix, StateVector,
};
use gazetrack::geometry::BBox;
use gazetrack::Error;
use proptest::prelude::*;
use support::{cv_transition, matvec7, predict_oracle, Mat7};

fn model() -> MotionModel {
    MotionModel::default()
}

fn to_mat7(m: &StateMatrix) -> Mat7 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn random_psd(seed: &[f64]) -> StateMatrix {
    // A Aᵀ + I is symmetric positive definite
    let a = StateMatrix::from_iterator(seed.iter().copied());
    a * a.transpose() + StateMatrix::identity()
}

#[test]
fn zero_velocity_is_fixed_point() {
    let st = KalmanTrackState {
        mean: StateVector::from([0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0]),
        cov: StateMatrix::identity() * 3.0,
    };
    for dt in [0.01, 1.0, 7.5] {
        let m = MotionModel { dt, ..model() };
        assert_eq!(predict(&st, &m).mean, st.mean);
    }
}

#[test]
fn predict_matches_explicit_multiply() {
    let st =
        KalmanTrackState { mean: StateVector::from([0.0, 0.0, 1.0, 1.0, 2.0, 0.0, 0.0]), cov: StateMatrix::identity() };
    let m = MotionModel { dt: 1.0, ..model() };
    let p = predict(&st, &m);
    assert_eq!(p.mean.as_slice(), &[2.0, 0.0, 1.0, 1.0, 2.0, 0.0, 0.0]);
    let oracle = matvec7(&cv_transition(1.0), &[0.0, 0.0, 1.0, 1.0, 2.0, 0.0, 0.0]);
    assert_eq!(p.mean.as_slice(), &oracle);
}

#[test]
fn tiny_measurement_noise_pins_posterior_to_measurement() {
    let m = MotionModel { r_diag: [1e-12; 4], ..model() };
    let st = predict(&KalmanTrackState::initiate(&BBox::new(100.0, 100.0, 40.0, 20.0), &m), &m);
    let z = Measurement::new(107.0, 95.0, 900.0, 1.8);
    let post = update(&st, &z, &m).unwrap();
    for k in 0..4 {
        assert!((post.mean[k] - z[k]).abs() < 1e-6, "component {k}: {} vs {}", post.mean[k], z[k]);
    }
}

#[test]
fn uninformative_prior_follows_measurement() {
    let m = MotionModel { q_diag: [1e12; 7], p0_diag: [1e12; 7], ..model() };
    let st = predict(&KalmanTrackState::initiate(&BBox::new(0.0, 0.0, 10.0, 10.0), &m), &m);
    let z = Measurement::new(50.0, -20.0, 400.0, 0.5);
    let post = update(&st, &z, &m).unwrap();
    for k in 0..4 {
        assert!((post.mean[k] - z[k]).abs() < 1e-3 * z[k].abs().max(1.0));
    }
}

#[test]
fn gating_zero_innovation_and_translation() {
    let m = model();
    let st = predict(&KalmanTrackState::initiate(&BBox::new(300.0, 200.0, 96.0, 64.0), &m), &m);
    let z = st.measurement_mean();
    assert!(gating_distance(&st, &z, &m).unwrap().abs() < 1e-12);

    let z2 = Measurement::new(z[0] + 5.0, z[1] - 3.0, z[2] * 1.05, z[3]);
    let d = gating_distance(&st, &z2, &m).unwrap();
    let mut moved = st.clone();
    moved.mean[0] += 1000.0;
    moved.mean[1] -= 250.0;
    let z3 = Measurement::new(z2[0] + 1000.0, z2[1] - 250.0, z2[2], z2[3]);
    assert!((gating_distance(&moved, &z3, &m).unwrap() - d).abs() < 1e-9 * d);
}

#[test]
fn fuse_examples() {
    let v = scalar_fuse(20.0, 0.90, 22.0, 0.95).unwrap();
    assert!((v - 21.027).abs() < 5e-4);
    assert_eq!(scalar_fuse(0.0, 1.0, 10.0, 1.0).unwrap(), 5.0);
    assert_eq!(scalar_fuse(3.5, 0.2, 3.5, 0.9).unwrap(), 3.5);
    assert!(matches!(scalar_fuse(1.0, 0.0, 2.0, 0.0), Err(Error::DegenerateWeights)));
    assert!(matches!(scalar_fuse(1.0, -0.5, 2.0, 1.0), Err(Error::DegenerateWeights)));
}

proptest! {
    #[test]
    fn predict_cov_minus_fpft_is_q(seed in prop::collection::vec(-3.0..3.0f64, 49), dt in 0.001..2.0f64) {
        let m = MotionModel { dt, ..model() };
        let cov = random_psd(&seed);
        let st = KalmanTrackState { mean: StateVector::zeros(), cov };
        let (_, oracle) = predict_oracle(&[0.0; 7], &to_mat7(&cov), dt, &m.q_diag);
        let p = predict(&st, &m);
        for i in 0..7 {
            for j in 0..7 {
                prop_assert!((p.cov[(i, j)] - oracle[i][j]).abs() <= 1e-12 * oracle[i][j].abs().max(1.0));
            }
        }
    }

    #[test]
    fn predict_is_linear_in_mean(
        x in prop::collection::vec(-1e3..1e3f64, 7),
        y in prop::collection::vec(-1e3..1e3f64, 7),
        a in -5.0..5.0f64,
        b in -5.0..5.0f64,
    ) {
        let m = model();
        let cov = StateMatrix::identity();
        let sx = KalmanTrackState { mean: StateVector::from_column_slice(&x), cov };
        let sy = KalmanTrackState { mean: StateVector::from_column_slice(&y), cov };
        let sxy = KalmanTrackState { mean: sx.mean * a + sy.mean * b, cov };
        let lhs = predict(&sxy, &m).mean;
        let rhs = predict(&sx, &m).mean * a + predict(&sy, &m).mean * b;
        for k in 0..7 {
            prop_assert!((lhs[k] - rhs[k]).abs() <= 1e-9 * rhs[k].abs().max(1.0));
        }
    }

    #[test]
    fn update_never_raises_trace(
        seed in prop::collection::vec(-3.0..3.0f64, 49),
        z in prop::collection::vec(-50.0..50.0f64, 4),
    ) {
        let m = model();
        let st = KalmanTrackState { mean: StateVector::from([100.0, 100.0, 500.0, 1.5, 0.0, 0.0, 0.0]), cov: random_psd(&seed) };
        let zz = Measurement::new(100.0 + z[0], 100.0 + z[1], 500.0 + 10.0 * z[2], 1.5 + 0.01 * z[3]);
        let post = update(&st, &zz, &m).unwrap();
        prop_assert!(post.cov.trace() <= st.cov.trace() * (1.0 + 1e-12));
    }

    #[test]
    fn covariance_stays_symmetric_psd(zs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64, 0.8..1.2f64), 1..200)) {
        let m = model();
        let mut st = KalmanTrackState::initiate(&BBox::new(0.0, 0.0, 96.0, 64.0), &m);
        for (dx, dy, ds) in zs {
            st = predict(&st, &m);
            let z = Measurement::new(st.mean[0] + dx, st.mean[1] + dy, 6144.0 * ds, 1.5);
            st = update(&st, &z, &m).unwrap();
            let scale = st.cov.abs().max();
            prop_assert!((st.cov - st.cov.transpose()).abs().max() <= 1e-9 * scale);
            prop_assert!(st.cov.symmetric_eigen().eigenvalues.min() >= -1e-6 * scale);
        }
    }

    #[test]
    fn fuse_stays_between_inputs(p in -1e6..1e6f64, q in -1e6..1e6f64, a in 0.0..1.0f64, b in 0.001..1.0f64) {
        let v = scalar_fuse(p, a, q, b).unwrap();
        prop_assert!(v >= p.min(q) - 1e-9 && v <= p.max(q) + 1e-9);
    }
}
