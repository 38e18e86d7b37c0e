//! Experiment configuration: one JSON document per run.
//!
//! ```json
//! { "experiment": "probe", "gallery": { "kind": "jordan", "dim": 8 },
//!   "params": { ... }, "output_dir": "out" }
//! ```
//!
//! `params` is typed per experiment and rejects unknown keys. A run manifest
//! is also accepted: its embedded `config` is used.

use std::fmt;
use std::path::{Path, PathBuf};

use qnil_core::gallery::GallerySpec;
use qnil_core::probe::PhiSpec;
use qnil_core::zero_count::AnnulusConfig;
use qnil_core::{Complex, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Pseudospec,
    PerturbSweep,
    Probe,
    Pipeline,
    Zerocount,
    Certificate,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Pseudospec,
        ExperimentKind::PerturbSweep,
        ExperimentKind::Probe,
        ExperimentKind::Pipeline,
        ExperimentKind::Zerocount,
        ExperimentKind::Certificate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Pseudospec => "pseudospec",
            ExperimentKind::PerturbSweep => "perturb_sweep",
            ExperimentKind::Probe => "probe",
            ExperimentKind::Pipeline => "pipeline",
            ExperimentKind::Zerocount => "zerocount",
            ExperimentKind::Certificate => "certificate",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Nonzero `alpha` values, either listed as `[re, im]` pairs or spanned by a
/// rectangular lattice (the origin is dropped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaGrid {
    Points(Vec<[f64; 2]>),
    Lattice(AlphaLattice),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaLattice {
    pub re: [f64; 2],
    pub im: [f64; 2],
    /// Nodes along the real and imaginary axes.
    pub n: [usize; 2],
}

impl AlphaGrid {
    pub fn values(&self) -> Vec<C64> {
        match self {
            AlphaGrid::Points(p) => p.iter().map(|[re, im]| Complex::new(*re, *im)).collect(),
            AlphaGrid::Lattice(l) => {
                let axis = |[lo, hi]: [f64; 2], n: usize, k: usize| {
                    if n == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * k as f64 / (n - 1) as f64
                    }
                };
                let mut out = Vec::with_capacity(l.n[0] * l.n[1]);
                for j in 0..l.n[1] {
                    for i in 0..l.n[0] {
                        let z = Complex::new(axis(l.re, l.n[0], i), axis(l.im, l.n[1], j));
                        if z != Complex::new(0.0, 0.0) {
                            out.push(z);
                        }
                    }
                }
                out
            }
        }
    }

    fn check(&self) -> Result<(), String> {
        if let AlphaGrid::Lattice(l) = self {
            if l.n[0] == 0 || l.n[1] == 0 {
                return Err("lattice node counts must be positive".into());
            }
            if !(l.re[0] <= l.re[1] && l.im[0] <= l.im[1]) {
                return Err("lattice ranges must be ordered [min, max]".into());
            }
        }
        let vals = self.values();
        if vals.is_empty() {
            return Err("alpha grid is empty".into());
        }
        if vals.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err("alpha values must be finite".into());
        }
        if vals.iter().any(|z| *z == Complex::new(0.0, 0.0)) {
            return Err("alpha values must be nonzero".into());
        }
        Ok(())
    }
}

/// A fixed rank-one perturbation `x -> <x, e> f`, entries as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub label: String,
    pub e: Vec<[f64; 2]>,
    pub f: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudospecParams {
    /// Rescale the model to this operator norm first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// `[re_min, re_max, im_min, im_max]`.
    pub region: [f64; 4],
    /// Grid step `h`.
    pub resolution: f64,
    pub eps: Vec<f64>,
    #[serde(default)]
    pub refine: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Norm of every sampled `F`.
    pub b: f64,
    pub alpha_grid: AlphaGrid,
    /// Which family is swept: `T* + alpha F` (the default) or `T + alpha F`.
    #[serde(default)]
    pub family: SweepFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_range: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<Vec<PerturbationSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Base operator of a perturbation sweep. Kernel/range perturbations are
/// built so that the adjoint family stays quasinilpotent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    #[default]
    Adjoint,
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// `[a, b, t]` triples probed one after another, instead of `a`, `b`, `t`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<[f64; 3]>>,
    pub phi: PhiSpec,
    pub alpha_grid: AlphaGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_range: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<Vec<PerturbationSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub phi: PhiSpec,
    pub alpha_grid: AlphaGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_range: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<Vec<PerturbationSpec>>,
    #[serde(default = "default_per_edge")]
    pub samples_per_edge: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub phi: PhiSpec,
    pub alpha_grid: AlphaGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_range: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<Vec<PerturbationSpec>>,
    #[serde(default = "default_per_edge")]
    pub samples_per_edge: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Functions whose annulus zeros are counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ZeroSource {
    /// Random polynomials with planted roots inside and outside the annulus.
    Polynomial {
        #[serde(default = "default_inside")]
        max_inside: usize,
        #[serde(default = "default_outside")]
        max_outside: usize,
    },
    /// `g(z + lambda) - 1/alpha` for the gallery model with random unit `e`,
    /// `f`, with `|alpha <f, e>|` drawn from `alpha_modulus`.
    ShiftedG { alpha_modulus: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerocountConfig {
    pub rho: f64,
    pub phi: f64,
    pub a_point: [f64; 2],
    pub instances: usize,
    pub source: ZeroSource,
    /// Operator norm of the model for `shifted_g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_per_edge() -> usize {
    64
}

fn default_trials() -> usize {
    20
}

fn default_inside() -> usize {
    5
}

fn default_outside() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    Pseudospec(PseudospecParams),
    PerturbSweep(SweepParams),
    Probe(ProbeConfig),
    Pipeline(PipelineConfig),
    Zerocount(ZerocountConfig),
    Certificate(CertificateConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub gallery: GallerySpec,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document<P> {
    #[allow(dead_code)]
    experiment: ExperimentKind,
    gallery: GallerySpec,
    params: P,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

/// A config problem, located by key path and, when known, source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: Option<PathBuf>,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(message: impl Into<String>) -> Self {
        ConfigError { path: None, key: None, line: None, column: None, message: message.into() }
    }

    fn at_key(key: &str, message: impl Into<String>) -> Self {
        ConfigError { key: Some(key.to_string()), ..Self::new(message) }
    }

    fn in_file(mut self, path: &Path) -> Self {
        self.path = Some(path.to_path_buf());
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(p) = &self.path {
            write!(f, " in {}", p.display())?;
        }
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, " at line {l}, column {c}")?,
            (Some(l), None) => write!(f, " at line {l}")?,
            _ => {}
        }
        if let Some(k) = &self.key {
            write!(f, " (key `{k}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Line of the key path `a.b.c` in `text`: each segment is searched for as a
/// quoted key after the previous one. Array indices are skipped.
fn locate(text: &str, key: &str) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for seg in key.split('.') {
        let seg = seg.split('[').next().unwrap_or(seg);
        if seg.is_empty() || seg.chars().all(|c| c.is_ascii_digit()) {
            continue;
        }
        let needle = format!("\"{seg}\"");
        let at = pos + text[pos..].find(&needle)?;
        pos = at + needle.len();
        found = Some(at);
    }
    found.map(|at| text[..at].matches('\n').count() + 1)
}

fn typed<P: DeserializeOwned>(text: &str) -> Result<Document<P>, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let key = err.path().to_string();
        let inner = err.into_inner();
        ConfigError {
            key: (key != ".").then_some(key),
            line: Some(inner.line()),
            column: Some(inner.column()),
            message: strip_position(&inner.to_string()),
            path: None,
        }
    })
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::load_with_seed(path, None)
    }

    /// Loads `path`, with `seed` (if any) replacing the experiment seed before
    /// validation, so a seed given on the command line can satisfy it.
    pub fn load_with_seed(path: &Path, seed: Option<u64>) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read config: {e}")).in_file(path))?;
        Self::parse_with_seed(&text, seed).map_err(|e| e.in_file(path))
    }

    /// Parses a config document or the `config` block of a run manifest.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::parse_with_seed(text, None)
    }

    pub fn parse_with_seed(text: &str, seed: Option<u64>) -> Result<Self, ConfigError> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| ConfigError {
            line: Some(e.line()),
            column: Some(e.column()),
            ..ConfigError::new(strip_position(&e.to_string()))
        })?;
        if value.get("manifest_version").is_some() {
            let config = value.get("config").ok_or_else(|| ConfigError::at_key("config", "manifest has no config block"))?;
            let inner = String::from_utf8(crate::format::to_json(config)).expect("utf-8");
            return Self::parse_with_seed(&inner, seed);
        }
        if let Some(seed) = seed {
            let randomized = value["experiment"].as_str().is_some_and(|s| s != ExperimentKind::Pseudospec.name());
            if let Some(params) = value.get_mut("params").and_then(Value::as_object_mut).filter(|_| randomized) {
                params.insert("seed".into(), seed.into());
                let inner = String::from_utf8(crate::format::to_json(&value)).expect("utf-8");
                return Self::parse_with_seed(&inner, None);
            }
        }
        let Some(obj) = value.as_object() else {
            return Err(ConfigError { line: Some(1), ..ConfigError::new("config must be a JSON object") });
        };
        let kind = match obj.get("experiment") {
            None => return Err(ConfigError::at_key("experiment", "missing required key")),
            Some(Value::String(s)) => ExperimentKind::from_name(s).ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                ConfigError {
                    line: locate(text, "experiment"),
                    ..ConfigError::at_key("experiment", format!("unknown experiment `{s}`, expected one of {}", names.join(", ")))
                }
            })?,
            Some(_) => {
                return Err(ConfigError { line: locate(text, "experiment"), ..ConfigError::at_key("experiment", "must be a string") })
            }
        };
        fn assemble<P>(kind: ExperimentKind, d: Document<P>, wrap: fn(P) -> Params) -> ExperimentConfig {
            ExperimentConfig { experiment: kind, gallery: d.gallery, params: wrap(d.params), output_dir: d.output_dir }
        }
        let cfg = match kind {
            ExperimentKind::Pseudospec => assemble(kind, typed(text)?, Params::Pseudospec),
            ExperimentKind::PerturbSweep => assemble(kind, typed(text)?, Params::PerturbSweep),
            ExperimentKind::Probe => assemble(kind, typed(text)?, Params::Probe),
            ExperimentKind::Pipeline => assemble(kind, typed(text)?, Params::Pipeline),
            ExperimentKind::Zerocount => assemble(kind, typed(text)?, Params::Zerocount),
            ExperimentKind::Certificate => assemble(kind, typed(text)?, Params::Certificate),
        };
        cfg.validate().map_err(|mut e| {
            if e.line.is_none() {
                e.line = e.key.as_deref().and_then(|k| locate(text, k));
            }
            e
        })?;
        Ok(cfg)
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.params {
            Params::Pseudospec(_) => None,
            Params::PerturbSweep(p) => p.seed,
            Params::Probe(p) => p.seed,
            Params::Pipeline(p) => p.seed,
            Params::Zerocount(p) => p.seed,
            Params::Certificate(p) => p.seed,
        }
    }

    /// The config as it should be replayed: everything but the output directory.
    pub fn echo(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output_dir");
        }
        v
    }

    /// Checks required keys, value ranges and seed presence.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.gallery.validate().map_err(|e| ConfigError::at_key("gallery", e.to_string()))?;
        match &self.params {
            Params::Pseudospec(p) => validate_pseudospec(p),
            Params::PerturbSweep(p) => {
                positive("params.b", p.b)?;
                optional_positive("params.a", p.a)?;
                p.alpha_grid.check().map_err(|m| ConfigError::at_key("params.alpha_grid", m))?;
                sampler_check(self.gallery.dim, p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed)
            }
            Params::Probe(p) => {
                match (&p.sweep, p.a, p.b, p.t) {
                    (Some(s), None, None, None) => {
                        if s.is_empty() {
                            return Err(ConfigError::at_key("params.sweep", "sweep needs at least one [a, b, t] triple"));
                        }
                        for (k, [a, b, t]) in s.iter().enumerate() {
                            let key = format!("params.sweep[{k}]");
                            for x in [a, b, t] {
                                positive(&key, *x)?;
                            }
                        }
                    }
                    (Some(_), ..) => {
                        return Err(ConfigError::at_key("params.sweep", "give either `sweep` or `a`, `b`, `t`, not both"))
                    }
                    (None, a, b, t) => {
                        for (key, x) in [("params.a", a), ("params.b", b), ("params.t", t)] {
                            match x {
                                None => return Err(ConfigError::at_key(key, "missing required key (or use `sweep`)")),
                                Some(x) => positive(key, x)?,
                            }
                        }
                    }
                }
                optional_positive("params.grid_step", p.grid_step)?;
                phi_check(&p.phi, &p.alpha_grid)?;
                sampler_check(self.gallery.dim, p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed)
            }
            Params::Pipeline(p) => {
                for (key, x) in [("params.a", p.a), ("params.b", p.b), ("params.t", p.t)] {
                    positive(key, x)?;
                }
                if p.samples_per_edge == 0 {
                    return Err(ConfigError::at_key("params.samples_per_edge", "must be positive"));
                }
                phi_check(&p.phi, &p.alpha_grid)?;
                sampler_check(self.gallery.dim, p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed)?;
                if p.trials > 0 && p.seed.is_none() {
                    return Err(ConfigError::at_key("params.seed", "semicontinuity trials are randomized and need a seed"));
                }
                Ok(())
            }
            Params::Certificate(p) => {
                for (key, x) in [("params.a", p.a), ("params.b", p.b), ("params.t", p.t)] {
                    positive(key, x)?;
                }
                optional_positive("params.grid_step", p.grid_step)?;
                if p.samples_per_edge == 0 {
                    return Err(ConfigError::at_key("params.samples_per_edge", "must be positive"));
                }
                phi_check(&p.phi, &p.alpha_grid)?;
                sampler_check(self.gallery.dim, p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed)
            }
            Params::Zerocount(p) => {
                let cfg = AnnulusConfig::new(p.rho, p.phi, Complex::new(p.a_point[0], p.a_point[1]));
                cfg.validate().map_err(|e| ConfigError::at_key("params.rho", e.to_string()))?;
                if p.instances == 0 {
                    return Err(ConfigError::at_key("params.instances", "must be positive"));
                }
                optional_positive("params.a", p.a)?;
                if let ZeroSource::ShiftedG { alpha_modulus: [lo, hi] } = p.source {
                    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                        return Err(ConfigError::at_key("params.source.alpha_modulus", "need 0 < min <= max"));
                    }
                    let a = p.a.unwrap_or(1.0);
                    if !(1.5 * p.phi > a) {
                        return Err(ConfigError::at_key("params.a", format!("model norm {a} must stay below 1.5 phi = {}", 1.5 * p.phi)));
                    }
                }
                if p.seed.is_none() {
                    return Err(ConfigError::at_key("params.seed", "zero-count instances are randomized and need a seed"));
                }
                Ok(())
            }
        }
    }
}

fn positive(key: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::at_key(key, format!("must be positive and finite, got {x}")))
    }
}

fn optional_positive(key: &str, x: Option<f64>) -> Result<(), ConfigError> {
    x.map_or(Ok(()), |x| positive(key, x))
}

fn validate_pseudospec(p: &PseudospecParams) -> Result<(), ConfigError> {
    optional_positive("params.a", p.a)?;
    positive("params.resolution", p.resolution)?;
    let [x0, x1, y0, y1] = p.region;
    if !(x0 < x1 && y0 < y1) || p.region.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::at_key("params.region", "need finite [re_min, re_max, im_min, im_max] with min < max"));
    }
    if p.eps.is_empty() {
        return Err(ConfigError::at_key("params.eps", "list at least one epsilon"));
    }
    for e in &p.eps {
        positive("params.eps", *e)?;
    }
    Ok(())
}

fn phi_check(phi: &PhiSpec, grid: &AlphaGrid) -> Result<(), ConfigError> {
    grid.check().map_err(|m| ConfigError::at_key("params.alpha_grid", m))?;
    phi.validate().map_err(|e| ConfigError::at_key("params.phi", e.to_string()))?;
    for alpha in grid.values() {
        phi.radius::<f64>(alpha).map_err(|e| ConfigError::at_key("params.phi", e.to_string()))?;
    }
    Ok(())
}

fn sampler_check(
    dim: usize,
    random_pairs: Option<usize>,
    kernel_range: Option<bool>,
    fixed: Option<&[PerturbationSpec]>,
    seed: Option<u64>,
) -> Result<(), ConfigError> {
    match fixed {
        Some(list) => {
            if random_pairs.is_some() || kernel_range.is_some() {
                return Err(ConfigError::at_key(
                    "params.perturbations",
                    "fixed perturbations exclude `random_pairs` and `kernel_range`",
                ));
            }
            if list.is_empty() {
                return Err(ConfigError::at_key("params.perturbations", "list at least one perturbation"));
            }
            for (k, p) in list.iter().enumerate() {
                if p.e.len() != dim || p.f.len() != dim {
                    return Err(ConfigError::at_key(
                        &format!("params.perturbations[{k}]"),
                        format!("`e` and `f` need {dim} entries to match the gallery dimension"),
                    ));
                }
                let norm = |v: &[[f64; 2]]| v.iter().map(|[re, im]| re * re + im * im).sum::<f64>().sqrt();
                let overlap = p.f.iter().zip(&p.e).fold((0.0, 0.0), |(sr, si), ([fr, fi], [er, ei])| {
                    (sr + fr * er + fi * ei, si + fi * er - fr * ei)
                });
                let scale = norm(&p.e) * norm(&p.f);
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(ConfigError::at_key(&format!("params.perturbations[{k}]"), "`e` and `f` must be nonzero and finite"));
                }
                if overlap.0.hypot(overlap.1) > 1e-12 * scale {
                    return Err(ConfigError::at_key(
                        &format!("params.perturbations[{k}]"),
                        "`f` must be orthogonal to `e` for the perturbation to be nilpotent",
                    ));
                }
            }
            Ok(())
        }
        None => {
            if random_pairs.unwrap_or(qnil_core::probe::SamplerSpec::new(0).random_pairs) > 0 && seed.is_none() {
                return Err(ConfigError::at_key("params.seed", "random perturbation pairs need a seed"));
            }
            Ok(())
        }
    }
}
