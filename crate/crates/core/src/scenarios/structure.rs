use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::Ctx;
use crate::courant::{courant_axiom_report, dorfman_jacobiator, GeneralizedVector, LieFrame, ThreeForm, TwoForm};
use crate::flow::soliton_residual;
use crate::geometry::{
    bianchi_suite, bismut_connection, cartan_three_form, codifferential_covector, generalized_ricci, generalized_scalar,
    h_norm2, riemann, DivergenceData, InvariantMetric, Sign,
};
use crate::tduality::{
    buscher_dual, dilaton_shift, einstein_exchange_check, flow_commutation_check, CircleBundleData, VerticalDensity,
};
use crate::Result;

fn random_bundle(rng: &mut impl Rng) -> Result<CircleBundleData> {
    let m = rng.random_range(1..=4);
    let g0 = rng.random_range(0.2..5.0);
    let g1 = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    let l = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    let h = &l * l.transpose() + DMatrix::identity(m, m) * 0.1;
    let g2 = h + &g1 * g1.transpose() / g0;
    let b1 = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    let vals = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    let b2 = TwoForm::from_upper(m, |i, j| vals[(i, j)]);
    CircleBundleData::new(g0, g1, (&g2 + g2.transpose()) * 0.5, b1, b2)
}

pub(super) fn hopf_tduality(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (k0, l0, a, dt, t_end) = (sc.param("k0"), sc.param("l0"), sc.param("a"), sc.param("dt"), sc.param("t_end"));
    let report = flow_commutation_check(k0, l0, a, dt, t_end)?;
    let half = flow_commutation_check(k0, l0, a, dt / 2.0, t_end)?;
    ctx.at_most("max deviation, Buscher-pushed flow vs dual flow", report.max_deviation, 1e-6);
    ctx.info("max deviation at dt/2", half.max_deviation);
    if report.max_deviation > 0.0 {
        ctx.at_least("deviation ratio when halving dt", report.max_deviation / half.max_deviation, 12.0);
    }

    let mut rng = ctx.rng();
    let (mut worst, mut lost) = (0.0_f64, 0usize);
    for _ in 0..sc.count("involutions") {
        let d = random_bundle(&mut rng)?;
        let dual = buscher_dual(&d)?;
        if dual.assembled_metric().cholesky().is_none() {
            lost += 1;
        }
        worst = worst.max(buscher_dual(&dual)?.max_abs_diff(&d));
    }
    ctx.at_most("Buscher involution, max componentwise error", worst, 1e-12);
    ctx.at_most("dual metrics that lost positivity", lost as f64, 0.0);

    // ν = e^s on a line: the shift is −4 ds
    let n = 101;
    let hs = 1.0 / (n - 1) as f64;
    let nu = VerticalDensity::from_log_nu((0..n).map(|i| i as f64 * hs).collect())?;
    let shift = dilaton_shift(&vec![0.0; n], &nu, &nu.dual(), hs)?;
    ctx.at_most("dilaton shift of ν = e^s minus (−4)", shift.iter().map(|v| (v + 4.0).abs()).fold(0.0, f64::max), 1e-12);

    let ex = einstein_exchange_check(sc.param("k"), sc.param("x"))?;
    ctx.at_most("dual metric: Buscher image vs closed form", ex.dual_metric_error, 1e-14);
    ctx.at_most("dilaton shift on the Hopf pair", ex.dilaton_shift, 0.0);
    ctx.at_most("dual max |Rc±|", ex.dual_ricci, 1e-10);
    ctx.at_most("dual |S⁺|", ex.dual_scalar_pm.0.abs(), 1e-10);
    ctx.at_most("dual |S⁻|", ex.dual_scalar_pm.1.abs(), 1e-10);
    ctx.at_least("dual max |Rc±| after ĝ₁₁ → k + 0.1", ex.perturbed_ricci, 1e-3);
    ctx.info("primal S⁺ (same formula, for comparison)", ex.primal_scalar_pm.0);
    if !ex.scalar_flat(1e-10) {
        ctx.note(format!(
            "both sides give S± = {:.6} = 3/(4k); with |φ|² = 1/k the scalar identity balances only for 2φ",
            ex.dual_scalar_pm.0
        ));
    }
    ctx.csv(
        "commutation.csv",
        Some(("Hopf T-duality: K̂ direct vs via Buscher", &[4, 5], false)),
        |p| report.write_csv(p),
    )
}

pub(super) fn hopf_bismut_flat(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (k, x, eps) = (sc.param("k"), sc.param("x"), sc.param("perturbation"));

    let start = Instant::now();
    let su2 = LieFrame::su2();
    let g = InvariantMetric::diagonal(&[k; 3])?;
    let h = cartan_three_form(&su2, &g);
    let mut flat: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        flat = flat.max(riemann(&su2, &g, &bismut_connection(&su2, &g, &h, sign)).max_abs());
    }
    ctx.at_most("bi-invariant SU(2): max |R±| entry", flat, 1e-10);
    ctx.at_most("Bismut flatness wall time (s)", start.elapsed().as_secs_f64(), 1.0);

    let frame = LieFrame::su2_plus_r();
    let gh = InvariantMetric::diagonal(&[k, k, k, k * x * x])?;
    let hh = ThreeForm::basis(4, 0, 1, 2, -k)?;
    let phi = DVector::from_vec(vec![0.0, 0.0, 0.0, -x]);
    let div = DivergenceData::from_covector(&phi);
    let (p, m) = generalized_ricci(&frame, &gh, &hh, &div)?;
    ctx.at_most("Hopf pair max |Rc±|", p.amax().max(m.amax()), 1e-10);
    let identity = h_norm2(&gh, &hh) / 6.0 - codifferential_covector(&frame, &gh, &phi) - 0.25 * gh.covector_norm2(&phi);
    ctx.at_most("|⅙|H|² − d*φ − ¼|φ|²|", identity.abs(), 1e-10);
    ctx.info("generalized scalar S", generalized_scalar(&frame, &gh, &hh, &phi)?);

    let mut pert = gh.matrix().clone();
    pert[(0, 0)] += eps;
    let (pp, pm) = generalized_ricci(&frame, &InvariantMetric::new(pert)?, &hh, &div)?;
    ctx.at_least("max |Rc±| after g₁₁ → k + perturbation", pp.amax().max(pm.amax()), 1e-3);

    let (rs, rb) = soliton_residual(&frame, &gh, &hh, &DVector::zeros(4), &TwoForm::zeros(4))?;
    ctx.info("Hopf soliton residual, X = 0 and B = 0", rs.amax().max(rb.max_abs()));
    Ok(())
}

fn random_section(rng: &mut impl Rng, n: usize) -> Result<GeneralizedVector> {
    GeneralizedVector::new(
        DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)),
        DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)),
    )
}

fn jacobi_over_triples(frame: &LieFrame, h: &ThreeForm, rng: &mut impl Rng, triples: usize) -> Result<f64> {
    let n = frame.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..triples {
        let (a, b, c) = (random_section(rng, n)?, random_section(rng, n)?, random_section(rng, n)?);
        worst = worst.max(dorfman_jacobiator(frame, h, &a, &b, &c)?.max_abs());
    }
    Ok(worst)
}

pub(super) fn courant_axioms(ctx: &mut Ctx) -> Result<()> {
    let triples = ctx.sc.count("triples");
    let mut rng = ctx.rng();
    let frame = LieFrame::su2_plus_r();
    let vals: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
    let h = ThreeForm::from_upper(4, |i, j, k| vals[16 * i + 4 * j + k]);
    ctx.at_most("|dH| of a random invariant H on su(2)⊕ℝ", frame.exterior_d(&h.to_form())?.max_abs(), 1e-14);
    ctx.at_most("Jacobi residual, closed H", jacobi_over_triples(&frame, &h, &mut rng, triples)?, 1e-12);
    let pool = (0..4).map(|_| random_section(&mut rng, 4)).collect::<Result<Vec<_>>>()?;
    let rep = courant_axiom_report(&frame, &h, &pool)?;
    ctx.at_most("anchor residual", rep.anchor, 1e-12);
    ctx.at_most("pairing invariance residual", rep.pairing, 1e-12);
    ctx.info("symmetric part vs d⟨·,·⟩ (zero for invariant sections)", rep.symmetric);
    for s in &rep.skipped {
        ctx.note(format!("skipped axiom {s}"));
    }

    // every invariant 3-form on su(2)⊕ℝ is closed; e¹∧e⁴∧e⁵ on su(2)⊕ℝ² is not
    let big = LieFrame::su2().direct_sum(&LieFrame::abelian(2));
    let bad = ThreeForm::basis(5, 0, 3, 4, 1.0)?;
    ctx.info("|dH| of the non-closed H", big.exterior_d(&bad.to_form())?.max_abs());
    ctx.at_least("Jacobi residual, non-closed H on su(2)⊕ℝ²", jacobi_over_triples(&big, &bad, &mut rng, triples)?, 1e-6);
    Ok(())
}

pub(super) fn bianchi(ctx: &mut Ctx) -> Result<()> {
    let mut rng = ctx.rng();
    let frame = LieFrame::milnor();
    let h = ThreeForm::basis(3, 0, 1, 2, 1.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.sc.count("metrics") {
        let d: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..3.0)).collect();
        let rep = bianchi_suite(&frame, &InvariantMetric::diagonal(&d)?, &h);
        worst = worst.max(rep.max_residual());
    }
    ctx.at_most("max Bianchi-suite residual over random Milnor metrics", worst, 1e-10);
    let gated = bianchi_suite(&LieFrame::hyperbolic(3), &InvariantMetric::identity(3), &ThreeForm::zeros(3));
    if let Some(why) = gated.gate {
        ctx.note(format!("non-unimodular frame gated: {why}"));
    }
    Ok(())
}
