use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;

fn spd(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-1.0..1.0f64, n * n).prop_map(move |v| {
        let a = DMatrix::from_row_slice(n, n, &v);
        &a * a.transpose() + DMatrix::identity(n, n) * 0.2
    })
}

fn two_form(n: usize) -> impl Strategy<Value = TwoForm> {
    proptest::collection::vec(-2.0..2.0f64, n * n).prop_map(move |v| TwoForm::from_upper(n, |i, j| v[i * n + j]))
}

fn gvec(n: usize) -> impl Strategy<Value = GeneralizedVector> {
    proptest::collection::vec(-2.0..2.0f64, 2 * n)
        .prop_map(move |v| GeneralizedVector::from_slices(&v[..n], &v[n..]).unwrap())
}

fn sized_metric() -> impl Strategy<Value = (DMatrix<f64>, TwoForm)> {
    (1usize..=8).prop_flat_map(|n| (spd(n), two_form(n)))
}

fn sized_metric_and_vectors() -> impl Strategy<Value = (DMatrix<f64>, TwoForm, GeneralizedVector, GeneralizedVector)> {
    (1usize..=8).prop_flat_map(|n| (spd(n), two_form(n), gvec(n), gvec(n)))
}

fn su2_r2() -> LieFrame {
    LieFrame::su2().direct_sum(&LieFrame::abelian(2))
}

proptest! {
    #[test]
    fn generalized_metric_invariants((g, b) in sized_metric()) {
        let m = generalized_metric(&g, &b).unwrap();
        prop_assert!(m.involution_defect() < 1e-12 * (1.0 + m.matrix().amax().powi(2)));
        prop_assert!(m.orthogonality_defect() < 1e-12 * (1.0 + m.matrix().amax().powi(2)));
        prop_assert!(m.min_metric_eigenvalue() > 0.0);
        let sym = m.metric_form();
        prop_assert!((&sym - sym.transpose()).amax() < 1e-12 * (1.0 + sym.amax()));
        for plus in [true, false] {
            let basis = m.eigenbundle_basis(plus);
            let image = m.matrix() * &basis;
            let s = if plus { 1.0 } else { -1.0 };
            prop_assert!((image - &basis * s).amax() < 1e-10 * (1.0 + m.matrix().amax().powi(2)));
        }
    }

    #[test]
    fn b_field_is_isometry((g, b, x, y) in sized_metric_and_vectors()) {
        let _ = g;
        let lhs = neutral_pair(&b_field_transform(&b, &x).unwrap(), &b_field_transform(&b, &y).unwrap()).unwrap();
        let rhs = neutral_pair(&x, &y).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        let via_matrix = GeneralizedVector::from_stacked(&(b_field_matrix(&b) * x.stacked())).unwrap();
        prop_assert!((&via_matrix - &b_field_transform(&b, &x).unwrap()).max_abs() < 1e-14);
    }

    #[test]
    fn projections_split((g, b, a, c) in sized_metric_and_vectors()) {
        let m = generalized_metric(&g, &b).unwrap();
        let (p, q) = eigenbundle_projections(&m, &a).unwrap();
        let scale = 1.0 + m.matrix().amax() * a.max_abs();
        prop_assert!((&(&p + &q) - &a).max_abs() < 1e-14 * scale);
        prop_assert!((&m.apply(&p).unwrap() - &p).max_abs() < 1e-10 * scale * m.matrix().amax());
        prop_assert!((&m.apply(&q).unwrap() + &q).max_abs() < 1e-10 * scale * m.matrix().amax());
        prop_assert!(neutral_pair(&p, &q).unwrap().abs() < 1e-10 * scale * scale);
        // V₊ is positive and V₋ negative for ⟨,⟩
        let (pc, _) = eigenbundle_projections(&m, &c).unwrap();
        let _ = pc;
        prop_assert!(neutral_pair(&p, &p).unwrap() >= -1e-10 * scale * scale);
        prop_assert!(neutral_pair(&q, &q).unwrap() <= 1e-10 * scale * scale);
    }

    #[test]
    fn pairing_is_symmetric(a in gvec(5), b in gvec(5)) {
        prop_assert_eq!(neutral_pair(&a, &b).unwrap(), neutral_pair(&b, &a).unwrap());
    }

    #[test]
    fn d_squared_is_zero(coef in proptest::collection::vec(-1.0..1.0f64, 10), deg in 0usize..4) {
        for frame in [LieFrame::su2_plus_r(), LieFrame::hyperbolic(4), LieFrame::milnor().direct_sum(&LieFrame::su2())] {
            let n = frame.dim();
            let mut data = vec![0.0; n.pow(deg as u32)];
            for (i, v) in data.iter_mut().enumerate() {
                *v = coef[i % coef.len()] * (1.0 + (i % 7) as f64);
            }
            let f = Form::antisymmetrize(n, deg, data);
            let dd = frame.exterior_d(&frame.exterior_d(&f).unwrap()).unwrap();
            prop_assert!(dd.max_abs() < 1e-12);
        }
    }

    #[test]
    fn dorfman_jacobi_closed(x in gvec(4), y in gvec(4), z in gvec(4), k in -2.0..2.0f64) {
        let frame = LieFrame::su2_plus_r();
        let h = ThreeForm::basis(4, 0, 1, 2, -k).unwrap();
        let rep = courant_axiom_report(&frame, &h, &[x, y, z]).unwrap();
        prop_assert!(rep.passes(1e-12), "{:?}", rep);
    }
}

#[test]
fn exterior_d_examples() {
    let frame = LieFrame::abelian(3);
    let f = Form::basis(3, &[0, 2]).unwrap();
    assert_eq!(frame.exterior_d(&f).unwrap().max_abs(), 0.0);
    let frame = LieFrame::su2_plus_r();
    let e1 = Form::basis(4, &[0]).unwrap();
    assert_eq!(frame.exterior_d(&e1).unwrap(), TwoForm::basis(4, 1, 2).to_form());
    let h = ThreeForm::basis(4, 0, 1, 2, -1.3).unwrap();
    assert_eq!(frame.exterior_d(&h.to_form()).unwrap().max_abs(), 0.0);
}

#[test]
fn every_three_form_on_su2_plus_r_is_closed() {
    let frame = LieFrame::su2_plus_r();
    for (i, j, k) in [(0, 1, 3), (0, 2, 3), (1, 2, 3), (0, 1, 2)] {
        let h = ThreeForm::basis(4, i, j, k, 1.0).unwrap();
        assert_eq!(frame.exterior_d(&h.to_form()).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn jacobi_fails_iff_h_not_closed() {
    let frame = su2_r2();
    let samples: Vec<_> = (0..5)
        .flat_map(|i| [GeneralizedVector::e(5, i), GeneralizedVector::e_dual(5, i)])
        .collect();
    let open = ThreeForm::basis(5, 0, 3, 4, 1.0).unwrap();
    let rep = courant_axiom_report(&frame, &open, &samples).unwrap();
    assert!(rep.dh > 0.5);
    assert!(rep.jacobi > 1e-6);
    assert!(rep.pairing < 1e-15 && rep.symmetric < 1e-15 && rep.anchor == 0.0);
    let closed = ThreeForm::basis(5, 0, 1, 2, 1.0).unwrap();
    let rep = courant_axiom_report(&frame, &closed, &samples).unwrap();
    assert!(rep.h_closed(1e-14) && rep.jacobi < 1e-14);
}

#[test]
fn jacobiator_is_dh() {
    // [a,[b,c]] − [[a,b],c] − [b,[a,c]] = i_c i_b i_a dH up to sign for vector sections
    let frame = su2_r2();
    let h = ThreeForm::basis(5, 0, 3, 4, 1.0).unwrap();
    let dh = frame.exterior_d(&h.to_form()).unwrap();
    let e = |i| GeneralizedVector::e(5, i);
    let br = |a: &GeneralizedVector, b: &GeneralizedVector| dorfman_invariant(&frame, &h, a, b).unwrap();
    let (a, b, c) = (e(1), e(3), e(4));
    let jac = &br(&a, &br(&b, &c)) - &(&br(&br(&a, &b), &c) + &br(&b, &br(&a, &c)));
    let want = DVector::from_fn(5, |z, _| dh.get(&[1, 3, 4, z]));
    assert!((jac.xi() - &want).amax() < 1e-14 || (jac.xi() + &want).amax() < 1e-14);
    assert!(want.amax() > 0.5);
}
