//! Generalized metric on V ⊕ V*, B-field transforms and the twisted Dorfman
//! bracket on su(2) ⊕ ℝ, with and without a closed three-form.

use genricci::courant::{
    courant_axiom_report, dorfman_invariant, dorfman_jacobiator, generalized_metric, neutral_pair, GeneralizedVector,
    LieFrame, ThreeForm, TwoForm,
};
use genricci::Result;
use nalgebra::DMatrix;

fn main() -> Result<()> {
    let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5]);
    let b = TwoForm::from_upper(3, |i, j| 0.2 * (i + 2 * j) as f64);
    let gm = generalized_metric(&g, &b)?;
    println!("G² − 1 defect          {:.2e}", gm.involution_defect());
    println!("Gᵀ⟨,⟩G − ⟨,⟩ defect    {:.2e}", gm.orthogonality_defect());
    println!("smallest eigenvalue    {:.4}", gm.min_metric_eigenvalue());

    let frame = LieFrame::su2_plus_r();
    let h = ThreeForm::basis(4, 0, 1, 2, 1.0)?;
    let a = GeneralizedVector::from_slices(&[1.0, 0.0, 0.5, 0.0], &[0.0, 1.0, 0.0, 0.0])?;
    let bb = GeneralizedVector::from_slices(&[0.0, 1.0, 0.0, 1.0], &[0.3, 0.0, 0.0, 1.0])?;
    let c = GeneralizedVector::from_slices(&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 2.0, 0.0])?;
    let ab = dorfman_invariant(&frame, &h, &a, &bb)?;
    println!("[a, b]_H  x = {:?}  ξ = {:?}", ab.x().as_slice(), ab.xi().as_slice());
    println!("⟨a, b⟩ = {}", neutral_pair(&a, &bb)?);
    println!("Jacobiator, closed H   {:.2e}", dorfman_jacobiator(&frame, &h, &a, &bb, &c)?.max_abs());

    let report = courant_axiom_report(&frame, &h, &[a, bb, c])?;
    println!("axiom residuals: jacobi {:.1e} anchor {:.1e} pairing {:.1e} (|dH| = {:.1e})",
        report.jacobi, report.anchor, report.pairing, report.dh);
    for s in &report.skipped {
        println!("skipped: {s}");
    }

    // e¹ ∧ e⁴ ∧ e⁵ is not closed on su(2) ⊕ ℝ²
    let big = LieFrame::su2().direct_sum(&LieFrame::abelian(2));
    let bad = ThreeForm::basis(5, 0, 3, 4, 1.0)?;
    let e = |i| GeneralizedVector::e(5, i);
    println!("|dH| = {:.3}, Jacobiator on (e₂, e₃, e₄) = {:.3}",
        big.exterior_d(&bad.to_form())?.max_abs(),
        dorfman_jacobiator(&big, &bad, &e(1), &e(2), &e(3))?.max_abs());
    Ok(())
}
