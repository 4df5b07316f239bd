//! Levi-Civita and Bismut curvature of left-invariant metrics: flatness of
//! the bi-invariant SU(2) Bismut connections and the generalized Ricci
//! tensor of the Hopf pair on SU(2) × S¹.

use genricci::courant::{LieFrame, ThreeForm};
use genricci::geometry::{
    bianchi_suite, bismut_connection, bismut_ricci, cartan_three_form, generalized_ricci, generalized_scalar,
    riemann, scalar_lc, DivergenceData, InvariantMetric, Sign,
};
use genricci::Result;
use nalgebra::DVector;

fn main() -> Result<()> {
    let su2 = LieFrame::milnor();
    let g = InvariantMetric::identity(3);
    let h = cartan_three_form(&su2, &g);
    println!("round S³: R = {}", scalar_lc(&su2, &g));
    for sign in [Sign::Plus, Sign::Minus] {
        let rm = riemann(&su2, &g, &bismut_connection(&su2, &g, &h, sign));
        println!("Bismut {sign:?}: max |R| = {:.2e}", rm.max_abs());
    }

    let berger = InvariantMetric::diagonal(&[0.5, 1.0, 1.0])?;
    let hb = ThreeForm::basis(3, 0, 1, 2, 0.7)?;
    let rc = bismut_ricci(&su2, &berger, &hb, Sign::Plus);
    println!("Berger sphere Rc⁺ (traced curvature):\n{:.6}", rc.traced);
    println!("closed formula agreement {:.2e}", rc.agreement());
    println!("Bianchi suite residual {:.2e}", bianchi_suite(&su2, &berger, &hb).max_residual());

    let (k, x) = (1.0, 1.0);
    let frame = LieFrame::su2_plus_r();
    let gh = InvariantMetric::diagonal(&[k, k, k, k * x * x])?;
    let hh = ThreeForm::basis(4, 0, 1, 2, -k)?;
    let phi = DVector::from_vec(vec![0.0, 0.0, 0.0, -x]);
    let (p, m) = generalized_ricci(&frame, &gh, &hh, &DivergenceData::from_covector(&phi))?;
    println!("Hopf pair: max |Rc⁺| = {:.2e}, max |Rc⁻| = {:.2e}", p.amax(), m.amax());
    println!("Hopf pair: generalized scalar = {:.6}", generalized_scalar(&frame, &gh, &hh, &phi)?);
    Ok(())
}
