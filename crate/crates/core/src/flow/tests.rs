use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::courant::{LieFrame, ThreeForm, TwoForm};
use crate::geometry::{cartan_three_form, InvariantMetric};

fn state(g: InvariantMetric, h: ThreeForm) -> FlowState {
    FlowState::new(g, h).unwrap()
}

fn e123(n: usize, c: f64) -> ThreeForm {
    ThreeForm::basis(n, 0, 1, 2, c).unwrap()
}

#[test]
fn einstein_sphere_is_fixed() {
    let s = state(InvariantMetric::identity(3), e123(3, 2.0));
    let r = grf_rhs(&LieFrame::milnor(), &s, 0.0).unwrap();
    assert!(r.dg.amax() < 1e-13 && r.dh.max_abs() < 1e-13);
}

#[test]
fn flat_torus_is_fixed() {
    let s = state(InvariantMetric::diagonal(&[1.0, 3.0, 0.5]).unwrap(), ThreeForm::zeros(3));
    assert_eq!(grf_rhs(&LieFrame::abelian(3), &s, 0.0).unwrap().dg.amax(), 0.0);
}

#[test]
fn normalization_adds_lambda_g() {
    let frame = LieFrame::milnor();
    let s = state(InvariantMetric::diagonal(&[1.0, 2.0, 3.0]).unwrap(), e123(3, 0.4));
    let r0 = grf_rhs(&frame, &s, 0.0).unwrap();
    let r1 = grf_rhs(&frame, &s, -1.0).unwrap();
    assert!((&r1.dg - &r0.dg + s.g.matrix()).amax() < 1e-14);
    assert!((&r1.dh - &(&r0.dh - &s.h)).max_abs() < 1e-14);
}

#[test]
fn scalar_ansatz_examples() {
    assert_eq!(sphere_ode_rhs(1.0, 2.0).unwrap(), 0.0);
    assert!(sphere_ode_rhs(0.0, 1.0).is_err());
    assert_eq!(hyperbolic_ode_rhs(2.0, 2.0).unwrap(), 5.0);
    assert_eq!(milnor_su2_rhs(0.5, 0.5, 0.5).unwrap(), (0.0, 0.0, 0.0));
    assert!(milnor_su2_rhs(1.0, -1.0, 1.0).is_err());
    assert_eq!(circle_bundle_rhs(1.0, 1.0, 1.0).unwrap(), (-1.0, -1.0));
    assert_eq!(circle_bundle_rhs(2.0, 3.0, 0.0).unwrap(), (-0.0, -2.0));
    assert_eq!(circle_bundle_dual_rhs(1.0, 1.0, 1.0).unwrap(), (1.0, -1.0));
    assert!(neck_ode_rhs(1.0, 0.0).is_err());
}

#[test]
fn dual_circle_system_is_pushforward() {
    // K̂ = 1/K, L̂ = L maps one system onto the other
    for (k, l) in [(1.0, 1.0), (0.3, 2.0), (4.0, 0.7)] {
        let (dk, dl) = circle_bundle_rhs(k, l, 1.0).unwrap();
        let (dkh, dlh) = circle_bundle_dual_rhs(1.0 / k, l, 1.0).unwrap();
        assert!((dkh + dk / (k * k)).abs() < 1e-14);
        assert!((dlh - dl).abs() < 1e-14);
    }
}

#[test]
fn hyperbolic_ansatz_matches_generic() {
    let frame = LieFrame::hyperbolic(3);
    for (lam, eta) in [(0.5, 0.0), (1.3, 2.0), (3.0, -1.0)] {
        let s = state(InvariantMetric::diagonal(&[lam; 3]).unwrap(), e123(3, eta));
        let r = grf_rhs(&frame, &s, 0.0).unwrap();
        let want = hyperbolic_ode_rhs(lam, eta).unwrap();
        assert!((r.dg - DMatrix::identity(3, 3) * want).amax() < 1e-12);
        assert!(r.dh.max_abs() < 1e-13);
    }
}

#[test]
fn threefold_matches_generic() {
    let frame = LieFrame::milnor();
    let g = InvariantMetric::diagonal(&[0.8, 1.1, 1.7]).unwrap();
    let phi = 0.9;
    let h = g.volume_three_form().unwrap().scaled(phi);
    let (dg, dphi) = threefold_rhs(&frame, &g, phi).unwrap();
    let r = grf_rhs(&frame, &state(g.clone(), h), 0.0).unwrap();
    assert!((&dg - &r.dg).amax() < 1e-12);
    // H = φ dV_g stays fixed, so φ̇ = −½φ tr(g⁻¹ġ)
    assert!(r.dh.max_abs() < 1e-13);
    let trace = (g.inverse() * &dg).trace();
    assert!((dphi + 0.5 * phi * trace).abs() < 1e-12);
    assert!(threefold_rhs(&LieFrame::su2_plus_r(), &InvariantMetric::identity(4), 1.0).is_err());
    assert!(threefold_rhs(&frame, &g, 0.0).unwrap().0 == crate::geometry::ricci_lc(&frame, &g) * -2.0);
}

#[test]
fn threefold_einstein_point() {
    // round ansatz g = λI: φ² = 2R/3 makes ġ vanish
    let frame = LieFrame::milnor();
    let g = InvariantMetric::diagonal(&[2.0; 3]).unwrap();
    let r = crate::geometry::scalar_lc(&frame, &g);
    let phi = (2.0 * r / 3.0).sqrt();
    let (dg, _) = threefold_rhs(&frame, &g, phi).unwrap();
    assert!(dg.amax() < 1e-13);
}

#[test]
fn sphere_without_torsion_shrinks_linearly() {
    let frame = LieFrame::milnor();
    let cfg = FlowConfig {
        dt: 1e-3,
        steps: 400,
        ..FlowConfig::default()
    };
    let traj = integrate(&frame, &state(InvariantMetric::identity(3), ThreeForm::zeros(3)), &cfg).unwrap();
    for s in &traj.samples {
        assert!((s.g[(0, 0)] - (1.0 - 4.0 * s.t)).abs() < 1e-12);
        assert_eq!(s.h.max_abs(), 0.0);
    }
    match &traj.stop {
        Stop::Singularity(_) => assert!((traj.last.t - 0.25).abs() < 2e-3, "{}", traj.last.t),
        other => panic!("{other:?}"),
    }
    assert!(traj.last.g.min_eigenvalue() > 0.0);
    assert!(traj.clone().into_result().is_err());
}

#[test]
fn sphere_with_torsion_approaches_fixed_size() {
    let frame = LieFrame::milnor();
    for lam0 in [0.5, 3.0] {
        let cfg = FlowConfig {
            dt: 1e-2,
            steps: 500,
            sample_every: 50,
            ..FlowConfig::default()
        };
        let s = state(InvariantMetric::diagonal(&[lam0; 3]).unwrap(), e123(3, 2.0));
        let traj = integrate(&frame, &s, &cfg).unwrap();
        assert!((traj.last.g.get(0, 0) - 1.0).abs() < 1e-6, "{lam0}: {}", traj.last.g.get(0, 0));
    }
}

#[test]
fn milnor_flow_converges_to_bi_invariant() {
    let frame = LieFrame::milnor();
    let s = state(InvariantMetric::diagonal(&[1.0, 1.2, 1.5]).unwrap(), e123(3, 1.0));
    let cfg = FlowConfig {
        dt: 1e-2,
        steps: 20_000,
        sample_every: 100,
        ..FlowConfig::default()
    };
    let traj = integrate(&frame, &s, &cfg).unwrap();
    assert_eq!(traj.stop, Stop::FixedPoint);
    let g = traj.last.g.matrix();
    assert!((g[(0, 0)] - 0.5).abs() < 1e-8 && (g[(2, 2)] - 0.5).abs() < 1e-8);
    for w in traj.samples.windows(2) {
        assert!(w[1].lambda >= w[0].lambda - 1e-8 * cfg.dt * 100.0);
    }
}

#[test]
fn product_evolves_blockwise() {
    let frame = LieFrame::milnor().direct_sum(&LieFrame::milnor());
    let h = e123(6, 2.0);
    let s = state(InvariantMetric::identity(6), h);
    let cfg = FlowConfig {
        dt: 1e-3,
        steps: 150,
        ..FlowConfig::default()
    };
    let traj = integrate(&frame, &s, &cfg).unwrap();
    let g = traj.last.g.matrix();
    let t = traj.last.t;
    assert!((g.view((0, 0), (3, 3)) - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);
    assert!((g.view((3, 3), (3, 3)) - DMatrix::<f64>::identity(3, 3) * (1.0 - 4.0 * t)).amax() < 1e-12);
    assert!(g.view((0, 3), (3, 3)).amax() < 1e-14);
}

#[test]
fn adaptive_halving_approaches_singularity_closer() {
    let frame = LieFrame::milnor();
    let s = state(InvariantMetric::identity(3), ThreeForm::zeros(3));
    let cfg = FlowConfig {
        dt: 1e-2,
        steps: 100,
        adaptive: true,
        ..FlowConfig::default()
    };
    let traj = integrate(&frame, &s, &cfg).unwrap();
    assert!(matches!(traj.stop, Stop::Singularity(_)));
    assert!(traj.last.g.min_eigenvalue() > 0.0);
    assert!(traj.last.t > 0.2499, "{}", traj.last.t);
}

#[test]
fn config_validation() {
    let bad = [
        FlowConfig { dt: -1.0, ..FlowConfig::default() },
        FlowConfig { dt: f64::NAN, ..FlowConfig::default() },
        FlowConfig { lambda: 0.5, ..FlowConfig::default() },
        FlowConfig { sample_every: 0, ..FlowConfig::default() },
    ];
    for cfg in bad {
        assert!(matches!(cfg.validate(), Err(crate::Error::Config(_))));
    }
}

#[test]
fn csv_schema() {
    assert_eq!(
        Trajectory::csv_header(3),
        "t,g_1_1,g_1_2,g_1_3,g_2_2,g_2_3,g_3_3,H_1_2_3,R,H2,lambda,rhs_norm"
    );
    let frame = LieFrame::milnor();
    let cfg = FlowConfig { dt: 1e-2, steps: 3, ..FlowConfig::default() };
    let traj = integrate(&frame, &state(InvariantMetric::identity(3), e123(3, 1.0)), &cfg).unwrap();
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 12);
}

#[test]
fn soliton_residuals() {
    let frame = LieFrame::su2();
    let g = InvariantMetric::diagonal(&[1.3; 3]).unwrap();
    let h = cartan_three_form(&frame, &g);
    let zero = DVector::zeros(3);
    let (a, b) = soliton_residual(&frame, &g, &h, &zero, &TwoForm::zeros(3)).unwrap();
    assert!(a.amax() < 1e-13 && b.max_abs() < 1e-14);
    // invariant X on a bi-invariant metric is Killing
    let x = DVector::from_vec(vec![0.3, -1.0, 0.2]);
    assert!(lie_derivative_metric(&frame, &g, &x).amax() < 1e-14);
}

#[test]
fn hopf_soliton_residual_vanishes_in_naive_gauge() {
    let (k, x) = (1.7, 0.6);
    let frame = LieFrame::su2_plus_r();
    let g = InvariantMetric::diagonal(&[k, k, k, k * x * x]).unwrap();
    let h = ThreeForm::basis(4, 0, 1, 2, -k).unwrap();
    let (a, b) = soliton_residual(&frame, &g, &h, &DVector::zeros(4), &TwoForm::zeros(4)).unwrap();
    assert!(a.amax() < 1e-13 && b.max_abs() < 1e-14);
}

#[test]
fn soliton_residual_continuous_in_perturbation() {
    let frame = LieFrame::su2();
    let h = cartan_three_form(&frame, &InvariantMetric::identity(3));
    let mut prev = 0.0;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let g = InvariantMetric::diagonal(&[1.0 + eps, 1.0, 1.0 - 0.5 * eps]).unwrap();
        let (a, _) = soliton_residual(&frame, &g, &h, &DVector::zeros(3), &TwoForm::zeros(3)).unwrap();
        let r = a.amax();
        assert!(r > 0.0);
        if prev > 0.0 {
            assert!(r < prev * 0.2, "{r} vs {prev}");
        }
        prev = r;
    }
}

#[test]
fn lambda_values() {
    let frame = LieFrame::milnor();
    let g = InvariantMetric::identity(3);
    assert!((lambda_homogeneous(&frame, &g, &ThreeForm::zeros(3)) - 6.0).abs() < 1e-13);
    assert!((lambda_homogeneous(&frame, &g, &e123(3, 2.0)) - 4.0).abs() < 1e-13);
}

#[test]
fn neck_trajectory() {
    let path = rk4_path(|y| neck_ode_rhs(y[0], y[1]).map(|(a, b)| vec![a, b]), &[1.0, 1.0], 1e-4, 2.0);
    let phi = path.component(0);
    let psi = path.component(1);
    assert!(phi.windows(2).all(|w| w[1] < w[0]));
    assert!(psi.windows(2).all(|w| w[1] > w[0]));
    assert!(path.stopped.is_some(), "neck should pinch in finite time");
    assert!(*phi.last().unwrap() < 0.05 && *psi.last().unwrap() > 3.0, "{:?}", path.last());
}

fn diag_state() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64)
}

proptest! {
    #[test]
    fn sphere_ansatz_matches_generic(lam in 0.1..5.0f64, eta in -3.0..3.0f64) {
        let s = state(InvariantMetric::diagonal(&[lam; 3]).unwrap(), e123(3, eta));
        let r = grf_rhs(&LieFrame::milnor(), &s, 0.0).unwrap();
        let want = sphere_ode_rhs(lam, eta).unwrap();
        prop_assert!((r.dg - DMatrix::identity(3, 3) * want).amax() < 1e-10);
    }

    #[test]
    fn milnor_ansatz_matches_generic((a, b, c) in diag_state()) {
        let s = state(InvariantMetric::diagonal(&[a, b, c]).unwrap(), e123(3, 1.0));
        let r = grf_rhs(&LieFrame::milnor(), &s, 0.0).unwrap();
        let (da, db, dc) = milnor_su2_rhs(a, b, c).unwrap();
        prop_assert!((r.dg - DMatrix::from_diagonal(&DVector::from_vec(vec![da, db, dc]))).amax() < 1e-10);
        prop_assert!(r.dh.max_abs() < 1e-12);
    }

    #[test]
    fn circle_bundle_ansatz_matches_generic(k in 0.1..3.0f64, l in 0.1..3.0f64, a in 0.2..2.0f64) {
        let s = state(InvariantMetric::diagonal(&[4.0 * a * a * k, 4.0 * l, 4.0 * l]).unwrap(), ThreeForm::zeros(3));
        let r = grf_rhs(&LieFrame::milnor(), &s, 0.0).unwrap();
        let (dk, dl) = circle_bundle_rhs(k, l, a).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0 * a * a * dk, 4.0 * dl, 4.0 * dl]));
        prop_assert!((r.dg - want).amax() < 1e-10);
    }

    #[test]
    fn torsion_free_stays_torsion_free((a, b, c) in diag_state()) {
        let s = state(InvariantMetric::diagonal(&[a, b, c]).unwrap(), ThreeForm::zeros(3));
        let cfg = FlowConfig { dt: 1e-3, steps: 20, ..FlowConfig::default() };
        let traj = integrate(&LieFrame::milnor(), &s, &cfg).unwrap();
        prop_assert!(traj.samples.iter().all(|s| s.h.max_abs() == 0.0));
    }
}
