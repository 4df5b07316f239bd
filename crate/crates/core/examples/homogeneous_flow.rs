//! Generalized Ricci flow of a left-invariant metric and closed three-form
//! on SU(2), starting from a Berger-type metric. Writes `milnor_flow.csv`
//! to the directory given as the first argument (default: a temp dir).

use genricci::courant::{LieFrame, ThreeForm};
use genricci::flow::{grf_rhs, integrate, lambda_homogeneous, FlowConfig, FlowState, Stop};
use genricci::geometry::InvariantMetric;
use genricci::Result;

fn main() -> Result<()> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let frame = LieFrame::milnor();
    let state = FlowState::new(InvariantMetric::diagonal(&[0.3, 0.5, 0.9])?, ThreeForm::basis(3, 0, 1, 2, 1.0)?)?;

    let rhs = grf_rhs(&frame, &state, 0.0)?;
    println!("initial ∂g diagonal: {:.6?}", rhs.dg.diagonal().as_slice());
    println!("initial λ = {:.6}", lambda_homogeneous(&frame, &state.g, &state.h));

    let cfg = FlowConfig { dt: 1e-3, steps: 10_000, sample_every: 100, ..FlowConfig::default() };
    let traj = integrate(&frame, &state, &cfg)?;
    for s in traj.samples.iter().step_by(2) {
        let d = s.g.diagonal();
        println!("t = {:6.3}  A, B, C = {:.6} {:.6} {:.6}  λ = {:.6}", s.t, d[0], d[1], d[2], s.lambda);
    }
    match &traj.stop {
        Stop::FixedPoint => println!("reached a fixed point at t = {:.3}", traj.last.t),
        Stop::Completed => println!("completed at t = {:.3}", traj.last.t),
        Stop::Singularity(why) => println!("stopped: {why}"),
    }
    let path = out.join("milnor_flow.csv");
    traj.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
