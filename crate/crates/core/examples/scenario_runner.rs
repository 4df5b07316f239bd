//! Programmatic use of the scenario runner: build a manifest, override
//! parameters, run in parallel and inspect checks and artifacts.

use genricci::scenarios::{run, run_all, Manifest, Scenario, ScenarioName};
use genricci::Result;

fn main() -> Result<()> {
    for name in ScenarioName::ALL {
        println!("{:18} {}", name.as_str(), name.summary());
    }

    let out = std::env::temp_dir().join("genricci-example");
    let single = run(&Scenario::new(ScenarioName::Neck).set("dt", 2e-4)?.with_out_dir(&out));
    print!("{}", single.to_text());

    let mut manifest = Manifest::from_toml(
        "[run]\ntol = 1e-9\n\n[sphere]\neta0 = 2\nlambda0 = 0.5\n\n[courant-axioms]\ntriples = 20\n\n[bianchi-suite]\n",
    )?;
    manifest.set_all("seed=11")?;
    let agg = run_all(&manifest)?;
    print!("{}", agg.to_text());
    println!("exit code {}", agg.exit_code());
    Ok(())
}
