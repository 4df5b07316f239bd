//! Runs the thirteen acceptance criteria through the scenario runner and
//! prints one line per criterion. Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use genricci::scenarios::{run, Bound, RunReport, Scenario, ScenarioName};

/// Scenario configurations, keyed by a short label.
fn configs() -> Vec<(&'static str, Scenario)> {
    let sc = |name: ScenarioName, set: &[(&str, f64)]| {
        set.iter()
            .try_fold(Scenario::new(name), |s, &(k, v)| s.set(k, v))
            .expect("valid acceptance parameters")
    };
    vec![
        ("bismut", sc(ScenarioName::HopfBismutFlat, &[("k", 1.0), ("x", 1.0), ("perturbation", 0.1)])),
        ("sphere-linear", sc(ScenarioName::Sphere, &[("eta0", 0.0), ("lambda0", 1.0), ("dt", 1e-4), ("t_end", 0.2)])),
        ("sphere-0.5", sc(ScenarioName::Sphere, &[("eta0", 2.0), ("lambda0", 0.5), ("t_end", 5.0)])),
        ("sphere-3", sc(ScenarioName::Sphere, &[("eta0", 2.0), ("lambda0", 3.0), ("t_end", 5.0)])),
        ("milnor", sc(ScenarioName::Su2Milnor, &[("a", 0.3), ("b", 0.5), ("c", 0.9), ("t_end", 10.0), ("samples", 50.0)])),
        ("lambda", sc(ScenarioName::LambdaMonotone, &[("eigen_n", 64.0)])),
        ("tduality", sc(ScenarioName::HopfTduality, &[("k0", 1.0), ("l0", 1.0), ("dt", 1e-3), ("t_end", 0.3), ("involutions", 1000.0)])),
        ("courant", sc(ScenarioName::CourantAxioms, &[("triples", 100.0)])),
        ("bianchi", sc(ScenarioName::BianchiSuite, &[("metrics", 20.0)])),
        ("krf", sc(ScenarioName::TorusKrf, &[("n", 64.0), ("amp", 0.1), ("steps", 20000.0), ("stop_tol", 1e-6)])),
        ("gkrf", sc(ScenarioName::TorusGkrf, &[("n", 64.0), ("amp", 0.1), ("osc_tol", 1e-5)])),
        ("rym", sc(ScenarioName::HopfRym, &[("samples", 50.0)])),
    ]
}

/// Criterion number, title and the `(config, check)` pairs it depends on.
type Criterion = (u32, &'static str, &'static [(&'static str, &'static str)]);

const CRITERIA: &[Criterion] = &[
    (1, "Bismut flatness of bi-invariant SU(2)", &[
        ("bismut", "bi-invariant SU(2): max |R±| entry"),
        ("bismut", "Bismut flatness wall time (s)"),
    ]),
    (2, "Hopf generalized Einstein pair", &[
        ("bismut", "Hopf pair max |Rc±|"),
        ("bismut", "|⅙|H|² − d*φ − ¼|φ|²|"),
        ("bismut", "max |Rc±| after g₁₁ → k + perturbation"),
    ]),
    (3, "sphere ODE", &[
        ("sphere-linear", "|λ(t) − (λ₀ − 4t)| for t ≤ λ₀/5"),
        ("sphere-0.5", "|λ(T) − |η₀|/2|"),
        ("sphere-3", "|λ(T) − |η₀|/2|"),
    ]),
    (4, "Milnor SU(2) convergence", &[
        ("milnor", "max(A − B, B − C) along the flow"),
        ("milnor", "per-step increase of (C − A)/A"),
        ("milnor", "C − A at the end"),
        ("milnor", "R² of log(C − A) against t"),
    ]),
    (5, "λ monotonicity", &[
        ("lambda", "λ per-step decrease / dt, sphere η₀=0 λ₀=1"),
        ("lambda", "λ per-step decrease / dt, sphere η₀=2 λ₀=0.5"),
        ("lambda", "λ per-step decrease / dt, sphere η₀=2 λ₀=3"),
        ("lambda", "λ per-step decrease / dt, Milnor (0.3, 0.5, 0.9)"),
    ]),
    (6, "T-duality commutes with the flow", &[
        ("tduality", "max deviation, Buscher-pushed flow vs dual flow"),
        ("tduality", "deviation ratio when halving dt"),
    ]),
    (7, "Buscher involution", &[
        ("tduality", "Buscher involution, max componentwise error"),
        ("tduality", "dual metrics that lost positivity"),
    ]),
    (8, "Dorfman/Courant suite", &[
        ("courant", "Jacobi residual, closed H"),
        ("courant", "Jacobi residual, non-closed H on su(2)⊕ℝ²"),
    ]),
    (9, "Bianchi suite", &[("bianchi", "max Bianchi-suite residual over random Milnor metrics")]),
    (10, "torus Kähler-Ricci flow", &[
        ("krf", "smallest factor 1 + ½Δu"),
        ("krf", "max per-step growth of sup u̇, sup|u̇| or −inf u̇"),
        ("krf", "final sup|u̇|"),
        ("krf", "spatial order of u̇ (Richardson, three grids)"),
        ("krf", "wall time (s)"),
    ]),
    (11, "torus generalized Kähler-Ricci flow", &[
        ("gkrf", "final osc(u)"),
        ("gkrf", "smallest factor min(1 + ½D²ₓu, 1 − ½D²ᵧu)"),
    ]),
    (12, "cross-engine oracle", &[
        ("sphere-3", "cross-engine: generic vs sphere rhs (random states)"),
        ("milnor", "cross-engine: generic vs Milnor rhs (random states)"),
        ("rym", "cross-engine: generic vs circle-bundle rhs (random states)"),
    ]),
    (13, "eigen oracle", &[
        ("lambda", "grid λ vs dense eigensolve (cosine potential)"),
        ("lambda", "grid λ of constant potential minus the constant"),
    ]),
];

fn describe(value: f64, bound: Bound) -> String {
    match bound {
        Bound::AtMost(b) => format!("{value:.3e} ≤ {b:e}"),
        Bound::AtLeast(b) => format!("{value:.3e} ≥ {b:e}"),
        Bound::Info => format!("{value:.3e}"),
    }
}

fn main() -> ExitCode {
    let configs = configs();
    let reports: BTreeMap<&str, RunReport> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|(label, sc)| (*label, s.spawn(move || run(sc)))).collect();
        handles.into_iter().map(|(l, h)| (l, h.join().expect("scenario thread"))).collect()
    });

    let mut failed = 0;
    for &(id, title, checks) in CRITERIA {
        let mut ok = true;
        let mut detail = Vec::new();
        for &(cfg, name) in checks {
            let report = &reports[cfg];
            if let Some((code, msg)) = &report.error {
                ok = false;
                detail.push(format!("{cfg}: exit {code}: {msg}"));
                continue;
            }
            match report.check(name) {
                Some(c) => {
                    if !c.passed() {
                        ok = false;
                        detail.push(format!("{name} = {} FAILED", describe(c.value, c.bound)));
                    } else {
                        detail.push(describe(c.value, c.bound));
                    }
                }
                None => {
                    ok = false;
                    detail.push(format!("{name}: not reported"));
                }
            }
        }
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {title}: {}",
            if ok { "PASS" } else { "FAIL" },
            detail.join("; ")
        );
    }
    println!("{}/{} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
