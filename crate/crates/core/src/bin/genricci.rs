use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use genricci::scenarios::{apply_env, exit_code_for, run_all, Manifest, ScenarioName};

/// Run generalized Ricci flow scenarios and report pass/fail checks.
///
/// Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
/// 3 numerical failure. Environment overrides: GENRICCI_OUT, GENRICCI_TOL and
/// GENRICCI_SET="key=value;key=value"; flags take precedence.
#[derive(Parser, Debug)]
#[command(name = "genricci", version)]
struct Cli {
    /// Scenario to run (repeatable); defaults to every scenario.
    #[arg(long, value_name = "NAME")]
    scenario: Vec<String>,
    /// Parameter override applied to every selected scenario that has KEY.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Directory for CSV files, reports and plot scripts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// TOML manifest listing scenarios and parameters.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// List scenarios and their parameters.
    #[arg(long)]
    list: bool,
    /// Replace every residual tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
}

fn list() -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    for name in ScenarioName::ALL {
        writeln!(out, "{:<18} {}", name.as_str(), name.summary())?;
        for (k, v, help) in name.parameters() {
            writeln!(out, "    {k:<14} = {v:<10} {help}")?;
        }
    }
    Ok(())
}

fn manifest(cli: &Cli) -> genricci::Result<Manifest> {
    let mut m = match &cli.manifest {
        Some(path) => Manifest::from_file(path)?,
        None if cli.scenario.is_empty() => Manifest::all(),
        None => Manifest::default(),
    };
    if !cli.scenario.is_empty() {
        let names = cli
            .scenario
            .iter()
            .map(|s| s.parse::<ScenarioName>())
            .collect::<genricci::Result<Vec<_>>>()?;
        if cli.manifest.is_some() {
            m.scenarios.retain(|s| names.contains(&s.name));
        } else {
            m.scenarios = names.into_iter().map(genricci::scenarios::Scenario::new).collect();
        }
    }
    apply_env(&mut m, std::env::vars())?;
    for a in &cli.set {
        m.set_all(a)?;
    }
    if let Some(out) = &cli.out {
        m.out = Some(out.clone());
    }
    if cli.tol.is_some() {
        m.tol = cli.tol;
    }
    Ok(m)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.list {
        // a closed pipe just ends the listing
        let _ = list();
        return ExitCode::SUCCESS;
    }
    let report = match manifest(&cli).and_then(|m| run_all(&m)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    print!("{}", report.to_text());
    ExitCode::from(report.exit_code() as u8)
}
