//! Named experiments, their parameters, reports and the manifest runner.
//!
//! Each scenario writes, when given an output directory, its CSV files, a
//! plain-text `report.txt` and a gnuplot script `plot.gp` under
//! `<out>/<scenario>/`.

mod homogeneous;
mod manifest;
mod output;
mod structure;
mod torus;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use manifest::{apply_env, run_all, AggregateReport, Manifest, ENV_PREFIX};

use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioName {
    Sphere,
    Hyperbolic,
    Neck,
    Su2Milnor,
    ProductS3S3,
    HopfRym,
    HopfTduality,
    HopfBismutFlat,
    TorusKrf,
    TorusGkrf,
    CourantAxioms,
    BianchiSuite,
    LambdaMonotone,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Positive,
    NonNegative,
    Count,
    Real,
}

struct Param {
    key: &'static str,
    default: f64,
    kind: Kind,
    help: &'static str,
}

macro_rules! p {
    ($key:literal, $default:expr, $kind:ident, $help:literal) => {
        Param {
            key: $key,
            default: $default,
            kind: $kind,
            help: $help,
        }
    };
}

use Kind::*;

impl ScenarioName {
    pub const ALL: [ScenarioName; 13] = [
        ScenarioName::Sphere,
        ScenarioName::Hyperbolic,
        ScenarioName::Neck,
        ScenarioName::Su2Milnor,
        ScenarioName::ProductS3S3,
        ScenarioName::HopfRym,
        ScenarioName::HopfTduality,
        ScenarioName::HopfBismutFlat,
        ScenarioName::TorusKrf,
        ScenarioName::TorusGkrf,
        ScenarioName::CourantAxioms,
        ScenarioName::BianchiSuite,
        ScenarioName::LambdaMonotone,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Sphere => "sphere",
            ScenarioName::Hyperbolic => "hyperbolic",
            ScenarioName::Neck => "neck",
            ScenarioName::Su2Milnor => "su2-milnor",
            ScenarioName::ProductS3S3 => "product-s3s3",
            ScenarioName::HopfRym => "hopf-rym",
            ScenarioName::HopfTduality => "hopf-tduality",
            ScenarioName::HopfBismutFlat => "hopf-bismut-flat",
            ScenarioName::TorusKrf => "torus-krf",
            ScenarioName::TorusGkrf => "torus-gkrf",
            ScenarioName::CourantAxioms => "courant-axioms",
            ScenarioName::BianchiSuite => "bianchi-suite",
            ScenarioName::LambdaMonotone => "lambda-monotone",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ScenarioName::Sphere => "round S³ with H = η₀ dV: linear shrinking or approach to λ = |η₀|/2",
            ScenarioName::Hyperbolic => "hyperbolic 3-space with flux: λ grows like 4t",
            ScenarioName::Neck => "neckpinch ODE: φ → 0 while ψ grows",
            ScenarioName::Su2Milnor => "left-invariant metrics on SU(2) with bi-invariant H converge to the round metric",
            ScenarioName::ProductS3S3 => "S³ × S³ with Einstein and shrinking factors evolves blockwise",
            ScenarioName::HopfRym => "Hopf circle bundle under the Ricci–Yang–Mills reduction",
            ScenarioName::HopfTduality => "Buscher rules, flow commutation and the dual Hopf Einstein pair",
            ScenarioName::HopfBismutFlat => "Bismut flatness of bi-invariant SU(2) and the Hopf generalized Einstein pair",
            ScenarioName::TorusKrf => "Kähler–Ricci potential flow on the flat 2-torus",
            ScenarioName::TorusGkrf => "generalized Kähler–Ricci potential flow on the torus",
            ScenarioName::CourantAxioms => "twisted Dorfman bracket axioms on invariant sections",
            ScenarioName::BianchiSuite => "Bismut curvature pair symmetry and Bianchi identities",
            ScenarioName::LambdaMonotone => "λ-functional monotonicity and the grid Schrödinger eigenvalue",
        }
    }

    fn schema(self) -> &'static [Param] {
        match self {
            ScenarioName::Sphere => &[
                p!("eta0", 2.0, Real, "flux H = η₀ dV"),
                p!("lambda0", 3.0, Positive, "initial scale"),
                p!("dt", 1e-2, Positive, "time step"),
                p!("t_end", 5.0, NonNegative, "final time"),
                p!("samples", 50.0, Count, "random states for the cross-engine check"),
                p!("seed", 1.0, Count, "RNG seed"),
            ],
            ScenarioName::Hyperbolic => &[
                p!("eta0", 1.0, Real, "flux H = η₀ dV"),
                p!("lambda0", 1.0, Positive, "initial scale"),
                p!("dt", 1e-2, Positive, "time step"),
                p!("t_end", 50.0, Positive, "final time"),
            ],
            ScenarioName::Neck => &[
                p!("phi0", 1.0, Positive, "initial φ"),
                p!("psi0", 1.0, Positive, "initial ψ"),
                p!("dt", 1e-4, Positive, "time step"),
                p!("t_end", 2.0, NonNegative, "final time"),
            ],
            ScenarioName::Su2Milnor => &[
                p!("a", 0.3, Positive, "initial A"),
                p!("b", 0.5, Positive, "initial B"),
                p!("c", 0.9, Positive, "initial C"),
                p!("dt", 1e-3, Positive, "time step"),
                p!("t_end", 10.0, NonNegative, "final time"),
                p!("samples", 50.0, Count, "random states for the cross-engine check"),
                p!("seed", 2.0, Count, "RNG seed"),
            ],
            ScenarioName::ProductS3S3 => &[
                p!("eta", 2.0, Real, "flux on the first factor"),
                p!("dt", 1e-3, Positive, "time step"),
                p!("t_end", 0.2, NonNegative, "final time"),
            ],
            ScenarioName::HopfRym => &[
                p!("k0", 1.0, Positive, "initial fiber size K"),
                p!("l0", 1.0, Positive, "initial base size L"),
                p!("a", 1.0, Real, "curvature F = a ω"),
                p!("dt", 1e-3, Positive, "time step"),
                p!("t_end", 0.3, NonNegative, "final time"),
                p!("samples", 50.0, Count, "random states for the cross-engine check"),
                p!("seed", 3.0, Count, "RNG seed"),
            ],
            ScenarioName::HopfTduality => &[
                p!("k0", 1.0, Positive, "initial fiber size K"),
                p!("l0", 1.0, Positive, "initial base size L"),
                p!("a", 1.0, Real, "curvature F = a ω"),
                p!("dt", 1e-3, Positive, "time step"),
                p!("t_end", 0.3, NonNegative, "final time"),
                p!("involutions", 1000.0, Count, "random Buscher round trips"),
                p!("k", 1.0, Positive, "Hopf scale k"),
                p!("x", 1.0, Positive, "Hopf circle radius x"),
                p!("seed", 4.0, Count, "RNG seed"),
            ],
            ScenarioName::HopfBismutFlat => &[
                p!("k", 1.0, Positive, "Hopf scale k"),
                p!("x", 1.0, Positive, "Hopf circle radius x"),
                p!("perturbation", 0.1, Real, "shift of g₁₁"),
            ],
            ScenarioName::TorusKrf => &[
                p!("n", 64.0, Count, "grid points per axis"),
                p!("amp", 0.1, Real, "u₀ = amp·sin x·sin y"),
                p!("steps", 20_000.0, Count, "maximum steps"),
                p!("stop_tol", 1e-6, Positive, "stop once sup|u̇| is below this"),
                p!("richardson_n", 32.0, Count, "coarsest grid of the order check"),
                p!("sample_every", 10.0, Count, "summary interval in steps"),
                p!("lambda_every", 0.0, Count, "λ every this many samples (0 disables)"),
            ],
            ScenarioName::TorusGkrf => &[
                p!("n", 64.0, Count, "grid points per axis"),
                p!("amp", 0.1, Real, "u₀ = amp·sin x·sin y"),
                p!("steps", 20_000.0, Count, "maximum steps"),
                p!("osc_tol", 1e-5, Positive, "stop once osc(u) is below this"),
                p!("sample_every", 10.0, Count, "summary interval in steps"),
            ],
            ScenarioName::CourantAxioms => &[
                p!("triples", 100.0, Count, "random section triples"),
                p!("seed", 5.0, Count, "RNG seed"),
            ],
            ScenarioName::BianchiSuite => &[
                p!("metrics", 20.0, Count, "random Milnor metrics"),
                p!("seed", 6.0, Count, "RNG seed"),
            ],
            ScenarioName::LambdaMonotone => &[
                p!("eigen_n", 64.0, Count, "points of the 1-D eigenvalue oracle"),
                p!("torus_n", 16.0, Count, "grid for λ along the torus flow"),
            ],
        }
    }

    /// `(key, default, help)` for every parameter.
    pub fn parameters(self) -> Vec<(&'static str, f64, &'static str)> {
        self.schema().iter().map(|p| (p.key, p.default, p.help)).collect()
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario {s:?}; see --list")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    params: BTreeMap<String, f64>,
    pub out_dir: Option<PathBuf>,
    /// Replaces every upper-bound tolerance when set.
    pub tol: Option<f64>,
}

impl Scenario {
    pub fn new(name: ScenarioName) -> Self {
        Self {
            name,
            params: BTreeMap::new(),
            out_dir: None,
            tol: None,
        }
    }

    pub fn set(mut self, key: &str, value: f64) -> Result<Self> {
        let Some(entry) = self.name.schema().iter().find(|p| p.key == key) else {
            let keys: Vec<&str> = self.name.schema().iter().map(|p| p.key).collect();
            return Err(Error::Config(format!(
                "{} has no parameter {key:?} (expected one of {})",
                self.name,
                keys.join(", ")
            )));
        };
        let ok = match entry.kind {
            Positive => value > 0.0 && value.is_finite(),
            NonNegative => value >= 0.0 && value.is_finite(),
            Count => value >= 0.0 && value.fract() == 0.0 && value < 1e15,
            Real => value.is_finite(),
        };
        if !ok {
            return Err(Error::Config(format!("{}: invalid value {value} for {key} ({:?})", self.name, entry.kind)));
        }
        self.params.insert(key.to_string(), value);
        Ok(self)
    }

    /// Parses `key=value`.
    pub fn set_str(self, assignment: &str) -> Result<Self> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        let value = v
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("{}: value of {} is not a number: {v:?}", self.name, k.trim())))?;
        self.set(k.trim(), value)
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {tol}")));
        }
        self.tol = Some(tol);
        Ok(self)
    }

    /// Effective value: the override if present, otherwise the default.
    pub fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or_else(|| {
            self.name
                .schema()
                .iter()
                .find(|p| p.key == key)
                .map(|p| p.default)
                .unwrap_or_else(|| panic!("{} has no parameter {key}", self.name))
        })
    }

    pub fn effective_params(&self) -> BTreeMap<String, f64> {
        self.name
            .schema()
            .iter()
            .map(|p| (p.key.to_string(), self.param(p.key)))
            .collect()
    }

    pub(crate) fn count(&self, key: &str) -> usize {
        self.param(key) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    /// Reported without a pass/fail bound.
    Info,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(b) => self.value <= b,
            Bound::AtLeast(b) => self.value >= b,
            Bound::Info => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub scenario: ScenarioName,
    pub params: BTreeMap<String, f64>,
    pub wall_time: Duration,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
    /// Exit code and message when the run did not complete.
    pub error: Option<(i32, String)>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::passed)
    }

    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some((code, _)) => *code,
            None if self.passed() => EXIT_OK,
            None => EXIT_CHECK_FAILED,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_text(&self) -> String {
        output::report_text(self)
    }
}

/// Error classification for exit codes.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

pub(crate) struct Plot {
    pub file: PathBuf,
    pub title: String,
    /// 1-based columns plotted against column 1.
    pub columns: Vec<usize>,
    pub log_y: bool,
}

/// Collects the outcome of one scenario while it runs.
pub(crate) struct Ctx<'a> {
    pub sc: &'a Scenario,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
    pub plots: Vec<Plot>,
}

impl Ctx<'_> {
    pub fn at_most(&mut self, name: &str, value: f64, tol: f64) {
        let tol = self.sc.tol.unwrap_or(tol);
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: Bound::AtMost(tol),
        });
    }

    pub fn at_least(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: Bound::AtLeast(bound),
        });
    }

    pub fn info(&mut self, name: &str, value: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            bound: Bound::Info,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn dir(&self) -> Result<Option<PathBuf>> {
        match &self.sc.out_dir {
            None => Ok(None),
            Some(out) => {
                let dir = out.join(self.sc.name.as_str());
                std::fs::create_dir_all(&dir)?;
                Ok(Some(dir))
            }
        }
    }

    /// Writes a CSV through `write` if an output directory is configured.
    pub fn csv(
        &mut self,
        file: &str,
        plot: Option<(&str, &[usize], bool)>,
        write: impl FnOnce(&Path) -> Result<()>,
    ) -> Result<()> {
        let Some(dir) = self.dir()? else {
            return Ok(());
        };
        let path = dir.join(file);
        write(&path)?;
        if let Some((title, columns, log_y)) = plot {
            self.plots.push(Plot {
                file: path.clone(),
                title: title.into(),
                columns: columns.to_vec(),
                log_y,
            });
        }
        self.files.push(path);
        Ok(())
    }

    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.sc.param("seed") as u64)
    }
}

/// Runs one scenario. Failures are folded into the report's exit code.
pub fn run(sc: &Scenario) -> RunReport {
    let start = Instant::now();
    let mut ctx = Ctx {
        sc,
        checks: Vec::new(),
        notes: Vec::new(),
        files: Vec::new(),
        plots: Vec::new(),
    };
    let outcome = match sc.name {
        ScenarioName::Sphere => homogeneous::sphere(&mut ctx),
        ScenarioName::Hyperbolic => homogeneous::hyperbolic(&mut ctx),
        ScenarioName::Neck => homogeneous::neck(&mut ctx),
        ScenarioName::Su2Milnor => homogeneous::su2_milnor(&mut ctx),
        ScenarioName::ProductS3S3 => homogeneous::product(&mut ctx),
        ScenarioName::HopfRym => homogeneous::hopf_rym(&mut ctx),
        ScenarioName::LambdaMonotone => homogeneous::lambda_monotone(&mut ctx),
        ScenarioName::HopfTduality => structure::hopf_tduality(&mut ctx),
        ScenarioName::HopfBismutFlat => structure::hopf_bismut_flat(&mut ctx),
        ScenarioName::CourantAxioms => structure::courant_axioms(&mut ctx),
        ScenarioName::BianchiSuite => structure::bianchi(&mut ctx),
        ScenarioName::TorusKrf => torus::krf(&mut ctx),
        ScenarioName::TorusGkrf => torus::gkrf(&mut ctx),
    };
    let mut report = RunReport {
        scenario: sc.name,
        params: sc.effective_params(),
        wall_time: start.elapsed(),
        checks: std::mem::take(&mut ctx.checks),
        notes: std::mem::take(&mut ctx.notes),
        files: std::mem::take(&mut ctx.files),
        error: outcome.err().map(|e| (exit_code_for(&e), e.to_string())),
    };
    if let Err(e) = output::write_artifacts(&ctx, &mut report) {
        report.error.get_or_insert((exit_code_for(&e), e.to_string()));
    }
    report
}
