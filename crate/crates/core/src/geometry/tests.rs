use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::courant::{Form, LieFrame, ThreeForm};
use crate::tensor::{idx3, permutation_sign};

fn milnor_metric(a: f64, b: f64, c: f64) -> InvariantMetric {
    InvariantMetric::diagonal(&[a, b, c]).unwrap()
}

/// `∇_X Y = ½[X,Y] + U(X,Y)` with `2g(U(X,Y),Z) = g([Z,X],Y) + g(X,[Z,Y])`,
/// evaluated on basis vectors through `ad` matrices.
fn koszul_oracle(frame: &LieFrame, g: &InvariantMetric) -> Vec<f64> {
    let n = frame.dim();
    let gm = g.matrix();
    let e = |i: usize| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (e(i), e(j));
            let half = frame.bracket(&x, &y) * 0.5;
            let mut u_low = DVector::zeros(n);
            for k in 0..n {
                let z = e(k);
                let zx = frame.ad(&z) * &x;
                let zy = frame.ad(&z) * &y;
                u_low[k] = 0.5 * ((zx.transpose() * gm * &y)[(0, 0)] + (x.transpose() * gm * &zy)[(0, 0)]);
            }
            let u = g.inverse() * u_low;
            for k in 0..n {
                out[idx3(n, i, j, k)] = half[k] + u[k];
            }
        }
    }
    out
}

fn full_norm2(g: &InvariantMetric, h: &ThreeForm) -> f64 {
    let n = g.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            s += h.get(i, j, k) * h.get(a, b, c) * g.inv(i, a) * g.inv(j, b) * g.inv(k, c);
                        }
                    }
                }
            }
        }
    }
    s
}

/// Hodge star for the identity metric with orientation `e^{1…n}`.
fn hodge(f: &Form) -> Form {
    let n = f.dim();
    let p = f.degree();
    let mut data = vec![0.0; n.pow((n - p) as u32)];
    let fact: f64 = (1..=p).product::<usize>() as f64;
    for (flat, out) in data.iter_mut().enumerate() {
        let mut jdx = vec![0; n - p];
        let mut r = flat;
        for s in (0..n - p).rev() {
            jdx[s] = r % n;
            r /= n;
        }
        let mut acc = 0.0;
        for flat_i in 0..n.pow(p as u32) {
            let mut idx = vec![0; p];
            let mut r = flat_i;
            for s in (0..p).rev() {
                idx[s] = r % n;
                r /= n;
            }
            let mut all = idx.clone();
            all.extend_from_slice(&jdx);
            acc += f.get(&idx) * permutation_sign(&all) as f64;
        }
        *out = acc / fact;
    }
    Form::antisymmetrize(n, n - p, data)
}

#[test]
fn levi_civita_bi_invariant_su2_is_half_bracket() {
    let frame = LieFrame::su2();
    let lc = levi_civita(&frame, &InvariantMetric::identity(3));
    for (a, c) in lc.components().iter().zip(frame.structure_constants()) {
        assert!((a - 0.5 * c).abs() < 1e-15);
    }
}

#[test]
fn levi_civita_abelian_is_zero() {
    let lc = levi_civita(&LieFrame::abelian(4), &InvariantMetric::identity(4));
    assert_eq!(lc.max_abs(), 0.0);
}

#[test]
fn levi_civita_matches_oracle_on_milnor() {
    let frame = LieFrame::milnor();
    let g = milnor_metric(1.0, 2.0, 3.0);
    let lc = levi_civita(&frame, &g);
    let oracle = koszul_oracle(&frame, &g);
    for (a, b) in lc.components().iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-13, "{a} vs {b}");
    }
    assert!(crate::tensor::max_abs(&lc.torsion(&frame)) < 1e-14);
    assert!(lc.metric_compatibility_defect(&g) < 1e-14);
}

#[test]
fn round_sphere_ricci() {
    let g = InvariantMetric::identity(3);
    let rc = ricci_lc(&LieFrame::milnor(), &g);
    assert!((rc - DMatrix::identity(3, 3) * 2.0).amax() < 1e-13);
    assert!((scalar_lc(&LieFrame::milnor(), &g) - 6.0).abs() < 1e-13);
}

#[test]
fn flat_torus_curvature_vanishes() {
    let frame = LieFrame::abelian(3);
    let g = InvariantMetric::diagonal(&[1.0, 2.0, 5.0]).unwrap();
    assert_eq!(riemann(&frame, &g, &levi_civita(&frame, &g)).max_abs(), 0.0);
}

#[test]
fn milnor_ricci_diagonal_entries() {
    let (a, b, c) = (1.0, 2.0, 3.0);
    let rc = ricci_lc(&LieFrame::milnor(), &milnor_metric(a, b, c));
    let want = [
        2.0 / (b * c) * (a * a - (b - c) * (b - c)),
        2.0 / (c * a) * (b * b - (c - a) * (c - a)),
        2.0 / (a * b) * (c * c - (a - b) * (a - b)),
    ];
    for i in 0..3 {
        assert!((rc[(i, i)] - want[i]).abs() < 1e-13, "{i}: {} vs {}", rc[(i, i)], want[i]);
    }
    assert!((rc.clone() - DMatrix::from_diagonal(&rc.diagonal())).amax() < 1e-13);
}

#[test]
fn h_squared_of_volume_form() {
    let g = InvariantMetric::new(DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 0.7])).unwrap();
    let lambda = 1.3;
    let h = g.volume_three_form().unwrap().scaled(lambda);
    let h2 = h_squared(&g, &h);
    assert!((h2 - g.matrix() * (2.0 * lambda * lambda)).amax() < 1e-12);
    assert!((h_norm2(&g, &h) - 6.0 * lambda * lambda).abs() < 1e-12);
    assert_eq!(h_squared(&g, &ThreeForm::zeros(3)).amax(), 0.0);
}

#[test]
fn codifferential_vanishes_for_bi_invariant() {
    let frame = LieFrame::su2();
    let g = InvariantMetric::identity(3);
    let h = cartan_three_form(&frame, &g);
    assert!(codifferential_h(&frame, &g, &h).max_abs() < 1e-15);
    assert_eq!(codifferential_h(&frame, &g, &ThreeForm::zeros(3)).max_abs(), 0.0);
}

#[test]
fn codifferential_on_milnor_three_dimensional() {
    // in dimension three every invariant 3-form is a constant multiple of dV, hence coclosed
    let frame = LieFrame::milnor();
    let g = milnor_metric(0.7, 1.1, 2.3);
    let h = ThreeForm::basis(3, 0, 1, 2, 1.0).unwrap();
    assert!(codifferential_h(&frame, &g, &h).max_abs() < 1e-14);
}

#[test]
fn codifferential_matches_hodge_route() {
    // d*H = −⋆d⋆H for 3-forms in dimension four
    let frame = LieFrame::su2_plus_r();
    let g = InvariantMetric::identity(4);
    let h = ThreeForm::from_upper(4, |i, j, k| [0.3, -1.2, 0.8, 2.0][(i + 2 * j + k) % 4]);
    let star = hodge(&h.to_form());
    let via_hodge = hodge(&frame.exterior_d(&star).unwrap());
    let direct = codifferential_h(&frame, &g, &h).to_form();
    assert!(direct.max_abs() > 0.1);
    assert!((&direct + &via_hodge).max_abs() < 1e-13);
}

#[test]
fn bismut_basic_cases() {
    let frame = LieFrame::su2();
    let g = InvariantMetric::identity(3);
    let lc = levi_civita(&frame, &g);
    assert_eq!(bismut_connection(&frame, &g, &ThreeForm::zeros(3), Sign::Plus), lc);
    let h = cartan_three_form(&frame, &g);
    assert!(bismut_connection(&frame, &g, &h, Sign::Minus).max_abs() < 1e-15);
}

#[test]
fn bismut_torsion_is_plus_minus_h() {
    let frame = LieFrame::milnor();
    let g = milnor_metric(1.0, 1.5, 2.0);
    let h = ThreeForm::basis(3, 0, 1, 2, 0.8).unwrap();
    for sign in [Sign::Plus, Sign::Minus] {
        let conn = bismut_connection(&frame, &g, &h, sign);
        let t = conn.torsion(&frame);
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let low: f64 = (0..n).map(|m| t[idx3(n, i, j, m)] * g.get(m, k)).sum();
                    assert!((low - sign.value() * h.get(i, j, k)).abs() < 1e-14);
                }
            }
        }
        assert!(conn.metric_compatibility_defect(&g) < 1e-14);
    }
}

#[test]
fn round_sphere_bismut_ricci_flat() {
    let frame = LieFrame::milnor();
    let g = InvariantMetric::identity(3);
    let h = g.volume_three_form().unwrap().scaled(2.0);
    let br = bismut_ricci(&frame, &g, &h, Sign::Plus);
    assert!(br.traced.amax() < 1e-13);
    assert!(br.formula.amax() < 1e-13);
    assert!(bismut_scalar(&frame, &g, &h).abs() < 1e-13);
}

#[test]
fn bismut_ricci_without_torsion_is_ricci() {
    let frame = LieFrame::milnor();
    let g = milnor_metric(1.0, 2.0, 3.0);
    let br = bismut_ricci(&frame, &g, &ThreeForm::zeros(3), Sign::Plus);
    assert!((br.traced - ricci_lc(&frame, &g)).amax() < 1e-13);
}

#[test]
fn bi_invariant_flatness() {
    for frame in [LieFrame::su2(), LieFrame::su2_plus_r()] {
        let n = frame.dim();
        let g = InvariantMetric::identity(n);
        let h = cartan_three_form(&frame, &g);
        for (sign, hh) in [(Sign::Minus, h.clone()), (Sign::Plus, h.clone())] {
            let r = riemann(&frame, &g, &bismut_connection(&frame, &g, &hh, sign));
            assert!(r.max_abs() < 1e-14);
        }
    }
}

#[test]
fn bianchi_bi_invariant_and_classical() {
    let frame = LieFrame::su2();
    let g = InvariantMetric::identity(3);
    let rep = bianchi_suite(&frame, &g, &cartan_three_form(&frame, &g));
    assert!(rep.passes(1e-12), "{rep:?}");
    let frame = LieFrame::milnor();
    let g = milnor_metric(1.0, 1.5, 2.0);
    let rep = bianchi_suite(&frame, &g, &ThreeForm::zeros(3));
    assert!(rep.passes(1e-12), "{rep:?}");
    let h = cartan_three_form(&frame, &InvariantMetric::identity(3));
    let rep = bianchi_suite(&frame, &g, &h);
    assert!(rep.passes(1e-10), "{rep:?}");
}

#[test]
fn bianchi_gated_on_non_unimodular() {
    let frame = LieFrame::hyperbolic(3);
    let rep = bianchi_suite(&frame, &InvariantMetric::identity(3), &ThreeForm::zeros(3));
    assert!(rep.gate.is_some());
    assert!(!rep.passes(1.0));
}

#[test]
fn hyperbolic_frame_has_negative_curvature() {
    let frame = LieFrame::hyperbolic(3);
    let rc = ricci_lc(&frame, &InvariantMetric::identity(3));
    assert!((rc + DMatrix::identity(3, 3) * 2.0).amax() < 1e-14);
}

fn hopf(k: f64, x: f64) -> (LieFrame, InvariantMetric, ThreeForm, DVector<f64>) {
    let frame = LieFrame::su2_plus_r();
    let g = InvariantMetric::diagonal(&[k, k, k, k * x * x]).unwrap();
    let h = ThreeForm::basis(4, 0, 1, 2, -k).unwrap();
    let phi = DVector::from_vec(vec![0.0, 0.0, 0.0, -x]);
    (frame, g, h, phi)
}

#[test]
fn hopf_pair_is_bismut_ricci_flat() {
    let (frame, g, h, phi) = hopf(1.7, 0.6);
    let (p, m) = generalized_ricci(&frame, &g, &h, &DivergenceData::from_covector(&phi)).unwrap();
    assert!(p.amax() < 1e-13 && m.amax() < 1e-13);
    // ∇^± φ = 0 here, so dropping φ leaves the Ricci tensors unchanged
    let (p0, m0) = generalized_ricci(&frame, &g, &h, &DivergenceData::zero(4)).unwrap();
    assert!(p0.amax() < 1e-13 && m0.amax() < 1e-13);
}

#[test]
fn hopf_scalar_value() {
    // R = 3/(2k), |H|² = 6/k, |φ|² = 1/k, d*φ = 0, so S = 3/(4k) rather than 0
    let k = 1.7;
    let (frame, g, h, phi) = hopf(k, 0.6);
    let s = generalized_scalar(&frame, &g, &h, &phi).unwrap();
    assert!((s - 0.75 / k).abs() < 1e-13, "{s}");
    assert!((scalar_lc(&frame, &g) - 1.5 / k).abs() < 1e-13);
    assert!((h_norm2(&g, &h) - 6.0 / k).abs() < 1e-13);
    assert!(codifferential_covector(&frame, &g, &phi).abs() < 1e-15);
    // doubling φ balances the identity
    let s2 = generalized_scalar(&frame, &g, &h, &(phi * 2.0)).unwrap();
    assert!((s2 - (1.5 / k - 0.5 / k - 1.0 / k)).abs() < 1e-13);
}

#[test]
fn generalized_scalar_simple_cases() {
    let frame = LieFrame::milnor();
    let g = milnor_metric(1.0, 2.0, 3.0);
    let s = generalized_scalar(&frame, &g, &ThreeForm::zeros(3), &DVector::zeros(3)).unwrap();
    assert!((s - scalar_lc(&frame, &g)).abs() < 1e-14);
    let g = InvariantMetric::identity(3);
    let h = g.volume_three_form().unwrap().scaled(2.0);
    let s = generalized_scalar(&frame, &g, &h, &DVector::zeros(3)).unwrap();
    assert!((s - 4.0).abs() < 1e-13, "{s}");
}

#[test]
fn divergence_split_matches_covector_rule() {
    let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let b = crate::courant::TwoForm::basis(2, 0, 1).scaled(0.4);
    let metric = crate::courant::generalized_metric(&g, &b).unwrap();
    let phi = DVector::from_vec(vec![0.3, -1.1]);
    let e = crate::courant::GeneralizedVector::cotangent(phi.clone());
    let d = DivergenceData::from_element(&metric, &e).unwrap();
    let want = DivergenceData::from_covector(&phi);
    assert!((d.phi_plus - want.phi_plus).amax() < 1e-14);
    assert!((d.phi_minus - want.phi_minus).amax() < 1e-14);
}

fn spd3() -> impl Strategy<Value = InvariantMetric> {
    proptest::collection::vec(-1.0..1.0f64, 9).prop_map(|v| {
        let a = DMatrix::from_row_slice(3, 3, &v);
        InvariantMetric::new(&a * a.transpose() + DMatrix::identity(3, 3) * 0.3).unwrap()
    })
}

fn spd(n: usize) -> impl Strategy<Value = InvariantMetric> {
    proptest::collection::vec(-1.0..1.0f64, n * n).prop_map(move |v| {
        let a = DMatrix::from_row_slice(n, n, &v);
        InvariantMetric::new(&a * a.transpose() + DMatrix::identity(n, n) * 0.3).unwrap()
    })
}

proptest! {
    #[test]
    fn connections_are_metric_with_expected_torsion(g in spd3(), hv in -2.0..2.0f64) {
        let frame = LieFrame::milnor();
        let h = ThreeForm::basis(3, 0, 1, 2, hv).unwrap();
        let lc = levi_civita(&frame, &g);
        prop_assert!(lc.metric_compatibility_defect(&g) < 1e-12);
        prop_assert!(crate::tensor::max_abs(&lc.torsion(&frame)) < 1e-12);
        let oracle = koszul_oracle(&frame, &g);
        prop_assert!(lc.components().iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-11));
        for s in [Sign::Plus, Sign::Minus] {
            prop_assert!(bismut_connection(&frame, &g, &h, s).metric_compatibility_defect(&g) < 1e-12);
        }
    }

    #[test]
    fn h_squared_psd_and_trace(g in spd(4), hv in proptest::collection::vec(-1.0..1.0f64, 4)) {
        let h = ThreeForm::from_upper(4, |i, j, k| hv[(i + j + k) % 4] * (1.0 + i as f64));
        let h2 = h_squared(&g, &h);
        prop_assert!((&h2 - h2.transpose()).amax() < 1e-12);
        prop_assert!(h2.clone().symmetric_eigen().eigenvalues.min() > -1e-12);
        let direct = full_norm2(&g, &h);
        prop_assert!((h_norm2(&g, &h) - direct).abs() < 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn bismut_ricci_routes_agree(g in spd(4), hv in proptest::collection::vec(-1.0..1.0f64, 4)) {
        // every invariant 3-form on su(2) ⊕ ℝ is closed
        let frame = LieFrame::su2_plus_r();
        let h = ThreeForm::from_upper(4, |i, j, k| hv[i + j + k - 3]);
        for s in [Sign::Plus, Sign::Minus] {
            let br = bismut_ricci(&frame, &g, &h, s);
            prop_assert!(br.dh < 1e-14);
            prop_assert!(br.agreement() < 1e-10, "{}", br.agreement());
        }
        let rep = bianchi_suite(&frame, &g, &h);
        prop_assert!(rep.passes(1e-10), "{:?}", rep);
    }

    #[test]
    fn bismut_ricci_routes_agree_su2(g in spd3(), hv in -2.0..2.0f64) {
        let frame = LieFrame::su2();
        let h = ThreeForm::basis(3, 0, 1, 2, hv).unwrap();
        let br = bismut_ricci(&frame, &g, &h, Sign::Plus);
        prop_assert!(br.agreement() < 1e-10);
    }
}
