use std::path::{Path, PathBuf};

use super::{run, RunReport, Scenario, ScenarioName, EXIT_OK};
use crate::{Error, Result};

/// Prefix of the environment overrides: `GENRICCI_OUT`, `GENRICCI_TOL` and
/// `GENRICCI_SET` (`key=value` pairs separated by `;`).
pub const ENV_PREFIX: &str = "GENRICCI_";

/// A list of scenarios with shared output settings.
///
/// The text form has an optional `[run]` table with `out` and `tol`, and one
/// table per scenario holding its numeric parameters:
///
/// ```toml
/// [run]
/// out = "results"
///
/// [sphere]
/// eta0 = 2.0
/// lambda0 = 0.5
///
/// [courant-axioms]
/// ```
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub scenarios: Vec<Scenario>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
}

impl Manifest {
    /// Every scenario with default parameters.
    pub fn all() -> Self {
        Self {
            scenarios: ScenarioName::ALL.into_iter().map(Scenario::new).collect(),
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut m = Manifest::default();
        for (key, value) in table {
            let toml::Value::Table(t) = value else {
                return Err(Error::Config(format!("top-level key {key:?} must be a table")));
            };
            if key == "run" {
                for (k, v) in t {
                    match (k.as_str(), v) {
                        ("out", toml::Value::String(s)) => m.out = Some(s.into()),
                        ("tol", v) => m.tol = Some(number(&v, "tol")?),
                        (other, _) => return Err(Error::Config(format!("unknown [run] key {other:?}"))),
                    }
                }
                continue;
            }
            let mut sc = Scenario::new(key.parse()?);
            for (k, v) in t {
                let x = number(&v, &k)?;
                sc = sc.set(&k, x)?;
            }
            m.scenarios.push(sc);
        }
        m.scenarios.sort_by_key(|s| s.name);
        Ok(m)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read manifest {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies `key=value` to every scenario that has `key`.
    pub fn set_all(&mut self, assignment: &str) -> Result<()> {
        let key = assignment.split_once('=').map(|(k, _)| k.trim()).unwrap_or(assignment);
        let mut hit = false;
        for sc in &mut self.scenarios {
            if sc.name.parameters().iter().any(|(k, _, _)| *k == key) {
                *sc = sc.clone().set_str(assignment)?;
                hit = true;
            }
        }
        if !hit && !self.scenarios.is_empty() {
            return Err(Error::Config(format!("no selected scenario has a parameter {key:?}")));
        }
        Ok(())
    }

    /// The scenarios with shared settings applied.
    pub fn resolved(&self) -> Result<Vec<Scenario>> {
        self.scenarios
            .iter()
            .map(|s| {
                let mut s = s.clone();
                if let Some(out) = &self.out {
                    s.out_dir = Some(out.clone());
                }
                match self.tol {
                    Some(t) => s.with_tol(t),
                    None => Ok(s),
                }
            })
            .collect()
    }
}

fn number(v: &toml::Value, key: &str) -> Result<f64> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::Config(format!("{key} must be a number"))),
    }
}

/// Applies `GENRICCI_*` variables from `vars` (normally `std::env::vars()`).
pub fn apply_env(manifest: &mut Manifest, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    for (k, v) in vars {
        let Some(name) = k.strip_prefix(ENV_PREFIX) else {
            continue;
        };
        match name {
            "OUT" => manifest.out = Some(v.into()),
            "TOL" => {
                manifest.tol = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("{k} is not a number: {v:?}")))?,
                )
            }
            "SET" => {
                for a in v.split(';').map(str::trim).filter(|a| !a.is_empty()) {
                    manifest.set_all(a)?;
                }
            }
            // logging is configured through RUST_LOG; other names are ignored
            _ => log::warn!("ignoring unknown override {k}"),
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct AggregateReport {
    pub reports: Vec<RunReport>,
}

impl AggregateReport {
    /// The largest individual exit code, or 0 when nothing ran.
    pub fn exit_code(&self) -> i32 {
        self.reports.iter().map(RunReport::exit_code).max().unwrap_or(EXIT_OK)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.to_text());
            s.push('\n');
        }
        let passed = self.reports.iter().filter(|r| r.passed()).count();
        s.push_str(&format!(
            "{passed}/{} scenarios passed, exit code {}\n",
            self.reports.len(),
            self.exit_code()
        ));
        s
    }
}

/// Runs every scenario concurrently and collects the reports in scenario order.
pub fn run_all(manifest: &Manifest) -> Result<AggregateReport> {
    let scenarios = manifest.resolved()?;
    let mut reports: Vec<RunReport> = std::thread::scope(|s| {
        let handles: Vec<_> = scenarios.iter().map(|sc| s.spawn(move || run(sc))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    reports.sort_by_key(|r| r.scenario);
    let agg = AggregateReport { reports };
    if let Some(out) = &manifest.out {
        std::fs::create_dir_all(out)?;
        std::fs::write(out.join("summary.txt"), agg.to_text())?;
    }
    Ok(agg)
}
