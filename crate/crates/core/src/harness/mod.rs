//! Seeded theorem checks and their machine-readable reports.

pub mod gen;
mod pairs;
mod props;
mod structured;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chains::PointClassification;
use crate::error::{Error, Result};
use crate::io::{Axis, Instance};
use crate::kinds::SpectrumKind;
use crate::linalg::{point_to_c64, Mode, RankConfig, Scalar};

pub use structured::{grid_for, StructuredFamily};

/// Default steps per real axis.
pub const DEFAULT_GRID_STEPS: usize = 41;
/// Counterexamples kept per instance.
const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    /// Koszul homology of `(S⊗I, I⊗T)` against the convolution of factors.
    Kunneth,
    /// `σ_δ`, `σ_π` (and split twins) of the tensor tuple.
    TensorSpectra,
    /// Semi-Fredholm sets of the tensor tuple.
    TensorEssential,
    /// Semi-Browder sets of the tensor tuple.
    TensorBrowder,
    /// Grid check of all spectra of diagonal⊗diagonal and shift⊗diagonal.
    StructuredBrowder,
    MultSpectra,
    MultEssential,
    MultBrowder,
    Projection,
    Mapping,
    InclusionChains,
    Compactness,
}

impl CheckName {
    pub const ALL: [CheckName; 12] = [
        CheckName::Kunneth,
        CheckName::TensorSpectra,
        CheckName::TensorEssential,
        CheckName::TensorBrowder,
        CheckName::StructuredBrowder,
        CheckName::MultSpectra,
        CheckName::MultEssential,
        CheckName::MultBrowder,
        CheckName::Projection,
        CheckName::Mapping,
        CheckName::InclusionChains,
        CheckName::Compactness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Kunneth => "kunneth",
            CheckName::TensorSpectra => "tensor-spectra",
            CheckName::TensorEssential => "tensor-essential",
            CheckName::TensorBrowder => "tensor-browder",
            CheckName::StructuredBrowder => "structured-browder",
            CheckName::MultSpectra => "mult-spectra",
            CheckName::MultEssential => "mult-essential",
            CheckName::MultBrowder => "mult-browder",
            CheckName::Projection => "projection",
            CheckName::Mapping => "mapping",
            CheckName::InclusionChains => "inclusion-chains",
            CheckName::Compactness => "compactness",
        }
    }

    /// Pair checks take `{"left", "right"}` input files.
    pub fn takes_pair(self) -> bool {
        !matches!(
            self,
            CheckName::Projection | CheckName::Mapping | CheckName::InclusionChains | CheckName::Compactness
        )
    }

    fn salt(self) -> u64 {
        CheckName::ALL.iter().position(|&c| c == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CheckName::ALL.iter().map(|c| c.name()).collect();
                Error::Input(format!("unknown check {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Deliberate faults, used to show that a check can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Add one to the top-right entry of the first operator of the combined
    /// tuple.
    FlipEntry,
    /// Use the semi-Fredholm product rule where the semi-Browder one belongs.
    SwapRule,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Relative rank tolerance in float mode.
    pub tolerance: Option<f64>,
    /// Explicit grid; otherwise a box of 1.5 × the spectral radius.
    pub grid: Option<Vec<Axis>>,
    pub grid_steps: usize,
    /// Largest factor dimension for random finite tuples.
    pub max_dim: usize,
    pub family: StructuredFamily,
    pub mutation: Option<Mutation>,
    /// Report `timing_ms = 0` so reports are byte-identical across runs.
    pub stable: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 20,
            seed: 0,
            mode: Mode::Exact,
            tolerance: None,
            grid: None,
            grid_steps: DEFAULT_GRID_STEPS,
            max_dim: 5,
            family: StructuredFamily::Mixed,
            mutation: None,
            stable: false,
        }
    }
}

impl CheckConfig {
    pub fn rank_config(&self) -> Result<RankConfig> {
        match (self.mode, self.tolerance) {
            (Mode::Exact, _) => Ok(RankConfig::exact()),
            (Mode::Float, None) => Ok(RankConfig::float()),
            (Mode::Float, Some(t)) => RankConfig::float_with(t),
        }
    }

    fn echo(&self) -> Value {
        json!({
            "trials": self.trials,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "grid": self.grid.as_ref().map(|g| g.iter().map(|a| format!("{}:{}:{}", a.min, a.max, a.steps)).collect::<Vec<_>>()),
            "grid_steps": self.grid_steps,
            "max_dim": self.max_dim,
            "family": self.family,
            "mutation": self.mutation,
        })
    }
}

/// Where instances come from.
#[derive(Clone, Debug)]
pub enum Source {
    Random,
    Pair(Instance, Instance),
    Single(Instance),
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub point: Vec<[f64; 2]>,
    pub lhs_flags: Value,
    pub rhs_flags: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Counterexample {
    fn at<F: Scalar>(point: &[F]) -> Self {
        Counterexample {
            point: c64_pairs(&point_to_c64(point)),
            lhs_flags: Value::Null,
            rhs_flags: Value::Null,
            traces: None,
            note: None,
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub desc: String,
    pub pass: bool,
    /// Points (or point pairs) compared.
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl InstanceReport {
    fn new(desc: String, checked: usize, mut counterexamples: Vec<Counterexample>) -> Self {
        counterexamples.truncate(MAX_COUNTEREXAMPLES);
        InstanceReport {
            desc,
            pass: counterexamples.is_empty(),
            checked,
            counterexamples,
        }
    }

    /// An instance that could not be evaluated still names a point.
    fn error(desc: String, n: usize, e: &Error) -> Self {
        let origin = vec![Complex64::new(0.0, 0.0); n.max(1)];
        InstanceReport::new(desc, 0, vec![Counterexample::at(&origin).note(e.to_string())])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: CheckName,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
    pub config: Value,
    pub timing_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.pass).count()
    }

    pub fn checked(&self) -> usize {
        self.instances.iter().map(|i| i.checked).sum()
    }
}

fn c64_pairs(p: &[Complex64]) -> Vec<[f64; 2]> {
    p.iter().map(|z| [z.re, z.im]).collect()
}

fn flag_map(pairs: impl IntoIterator<Item = (SpectrumKind, bool)>) -> Value {
    let m: BTreeMap<&str, bool> = pairs.into_iter().map(|(k, b)| (k.name(), b)).collect();
    json!(m)
}

fn traces_of<F>(c: &PointClassification<F>) -> Value {
    json!({"lower": c.lower, "upper": c.upper})
}

/// Runs one check. Errors mean unusable input; failing instances are
/// reported, not returned as errors.
pub fn run_check(check: CheckName, cfg: &CheckConfig, source: &Source) -> Result<Report> {
    let started = Instant::now();
    let instances = match source {
        Source::Random => (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = gen::instance_rng(cfg.seed, check.salt(), i);
                random_instance(check, cfg, i, &mut rng)
            })
            .collect(),
        Source::Pair(a, b) => {
            if !check.takes_pair() {
                return Err(Error::Input(format!("{check} takes a single operator file")));
            }
            vec![explicit_pair(check, cfg, a, b)?]
        }
        Source::Single(a) => {
            if check.takes_pair() {
                return Err(Error::Input(format!("{check} takes a {{\"left\", \"right\"}} pair file")));
            }
            vec![props::explicit(check, cfg, a)?]
        }
    };
    let timing_ms = if cfg.stable { 0 } else { started.elapsed().as_millis() as u64 };
    Ok(Report {
        check,
        seed: cfg.seed,
        instances,
        config: cfg.echo(),
        timing_ms,
    })
}

fn random_instance(check: CheckName, cfg: &CheckConfig, i: usize, rng: &mut rand_chacha::ChaCha8Rng) -> InstanceReport {
    use rand::Rng;
    match check {
        CheckName::StructuredBrowder => structured::random(cfg, i, rng),
        c if c.takes_pair() => {
            let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let s = gen::random_tuple(rng, n, cfg.max_dim);
            let t = gen::random_tuple(rng, m, cfg.max_dim);
            let desc = format!("#{i} S: {n} on C^{}, T: {m} on C^{}", s.dim(), t.dim());
            pairs::run_pair(c, cfg, desc, &s, &t, rng)
        }
        c => props::random(c, cfg, i, rng),
    }
}

fn explicit_pair(check: CheckName, cfg: &CheckConfig, a: &Instance, b: &Instance) -> Result<InstanceReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    match (check, a, b) {
        (CheckName::StructuredBrowder, Instance::Structured(s), Instance::Structured(t)) => {
            structured::explicit(cfg, s, t)
        }
        (CheckName::StructuredBrowder, _, _) => {
            Err(Error::Input("structured-browder needs two l2 operator files".into()))
        }
        (c, Instance::Finite(s), Instance::Finite(t)) => {
            Ok(pairs::run_pair(c, cfg, "input pair".into(), s, t, &mut rng))
        }
        (c, _, _) => Err(Error::Input(format!("{c} needs two finite operator files"))),
    }
}
