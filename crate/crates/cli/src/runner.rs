//! Runs one configured experiment and writes its artifacts.
//!
//! [`execute`] is pure: it turns a config into named byte buffers and a
//! summary. [`run`] adds the output directory, the resolved config echo and
//! the manifest. Everything but `manifest.json` is a deterministic function
//! of the config.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use nalgebra::DVector;
use qnil_core::gallery::{build, normalize_to};
use qnil_core::probe::{
    probe_conjecture, r_boundability_certificate, resolve_samples, separation_pipeline, ChainOptions, ChainStatus,
    CertificateReport, FSample, FSampler, PipelineReport, ProbeParams, ProbeReport, Reading, SamplerSpec,
};
use qnil_core::rank_one::{make_rank_one, random_vector, trichotomy_classify};
use qnil_core::spectra::{connected_components, dilate_and_test, pseudospectrum_grid, GridOptions, PseudospectrumGrid, Region};
use qnil_core::zero_count::{heuristic_m, verify_zero_bound, AnnulusConfig, Polynomial, ShiftedG, WindingOptions};
use qnil_core::{Complex, Operator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{
    CertificateConfig, ConfigError, ExperimentConfig, Params, PerturbationSpec, PipelineConfig, ProbeConfig,
    PseudospecParams, SweepFamily, SweepParams, ZeroSource, ZerocountConfig,
};
use crate::format::{sci, to_json, write_atomic, Table};
use crate::svg::contour_plot;

/// JSON Schema for `report.json` of the probe experiment.
pub const PROBE_REPORT_SCHEMA: &str = include_str!("../schemas/probe_report.schema.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: &str, bytes: Vec<u8>) -> Self {
        Artifact { name: name.to_string(), bytes }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] qnil_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// 2 for configuration and output-directory problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 2,
            RunError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

/// Written last; the only artifact that varies between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub config: Value,
    pub threads: usize,
    pub timing: Timing,
    pub artifacts: Vec<ArtifactRecord>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Runs `cfg` and writes config echo, data files, summary and manifest into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Manifest, RunError> {
    cfg.validate()?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let clock = Instant::now();
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io { path: out_dir.to_path_buf(), source })?;
    let output = execute(cfg)?;
    let mut files = vec![Artifact::new("config.json", to_json(&cfg.echo()))];
    files.extend(output.artifacts);
    files.push(Artifact::new("summary.txt", output.summary.into_bytes()));
    let mut records = Vec::with_capacity(files.len());
    for a in &files {
        let path = out_dir.join(&a.name);
        write_atomic(&path, &a.bytes).map_err(|source| RunError::Io { path, source })?;
        records.push(ArtifactRecord { name: a.name.clone(), bytes: a.bytes.len(), sha256: hex(&Sha256::digest(&a.bytes)) });
    }
    let manifest = Manifest {
        manifest_version: 1,
        tool: "qnil",
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment.name().to_string(),
        config: cfg.echo(),
        threads: rayon::current_num_threads(),
        timing: Timing { started_unix_ms: started, elapsed_ms: clock.elapsed().as_millis() },
        artifacts: records,
    };
    let path = out_dir.join("manifest.json");
    write_atomic(&path, &to_json(&manifest)).map_err(|source| RunError::Io { path, source })?;
    Ok(manifest)
}

/// Computes every data artifact of the experiment, without touching the disk.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, qnil_core::Error> {
    let model: Operator<f64> = build(&cfg.gallery)?;
    let mut out = match &cfg.params {
        Params::Pseudospec(p) => pseudospec(&model, p)?,
        Params::PerturbSweep(p) => perturb_sweep(&model, p)?,
        Params::Probe(p) => probe(&model, p)?,
        Params::Pipeline(p) => pipeline(&model, p)?,
        Params::Zerocount(p) => zerocount(&model, p)?,
        Params::Certificate(p) => certificate(&model, p)?,
    };
    out.summary = format!(
        "qnil {} | experiment {} | model {:?} dim {}\n{}",
        env!("CARGO_PKG_VERSION"),
        cfg.experiment,
        cfg.gallery.kind,
        cfg.gallery.dim,
        out.summary
    );
    Ok(out)
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn rescaled(model: &Operator<f64>, a: Option<f64>) -> Result<(Operator<f64>, f64), qnil_core::Error> {
    match a {
        Some(a) => normalize_to(model, a),
        None => Ok((model.clone(), 1.0)),
    }
}

fn vector(entries: &[[f64; 2]]) -> DVector<C64> {
    DVector::from_iterator(entries.len(), entries.iter().map(|[re, im]| Complex::new(*re, *im)))
}

/// Fixed perturbations are rescaled to `|F| = b` (only `f` changes).
fn sampler(
    random_pairs: Option<usize>,
    kernel_range: Option<bool>,
    fixed: Option<&[PerturbationSpec]>,
    seed: Option<u64>,
    b: f64,
) -> FSampler<f64> {
    match fixed {
        Some(list) => FSampler::Fixed(
            list.iter()
                .map(|p| {
                    let (e, f) = (vector(&p.e), vector(&p.f));
                    let scale = b / (e.norm() * f.norm());
                    FSample::new(p.label.clone(), e, f.scale(scale))
                })
                .collect(),
        ),
        None => {
            let mut spec = SamplerSpec::new(seed.unwrap_or(0));
            if let Some(k) = random_pairs {
                spec.random_pairs = k;
            }
            if let Some(k) = kernel_range {
                spec.kernel_range = k;
            }
            FSampler::Generated(spec)
        }
    }
}

// ---------------------------------------------------------------- pseudospec

/// Grid nodes as `i, j, re, im, resolvent_norm`.
pub fn grid_table(grid: &PseudospectrumGrid<f64>) -> Table {
    let mut t = Table::new(&["i", "j", "re", "im", "resolvent_norm"]);
    for (i, j, z, v) in grid.nodes() {
        t.push(vec![i.to_string(), j.to_string(), sci(z.re), sci(z.im), sci(v)]);
    }
    t
}

/// Inverse of [`grid_table`] given the grid's region and step (recorded in
/// the pseudospec report). Node coordinates must match exactly.
pub fn read_grid_csv(bytes: &[u8], region: Region<f64>, h: f64) -> Result<PseudospectrumGrid<f64>, String> {
    let mut reader = csv::Reader::from_reader(bytes);
    let mut values = Vec::new();
    let mut coords = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |k: usize| rec.get(k).ok_or("short row".to_string())?.parse::<f64>().map_err(|e| e.to_string());
        let idx = |k: usize| rec.get(k).ok_or("short row".to_string())?.parse::<usize>().map_err(|e| e.to_string());
        coords.push((idx(0)?, idx(1)?, Complex::new(num(2)?, num(3)?)));
        values.push(num(4)?);
    }
    let grid = PseudospectrumGrid::from_values(region, h, values).map_err(|e| e.to_string())?;
    for (k, (i, j, z)) in coords.into_iter().enumerate() {
        let (nx, _) = grid.shape();
        if (i, j) != (k % nx, k / nx) || grid.node(i, j) != z {
            return Err(format!("row {k}: node ({i}, {j}) at {z} does not match the grid"));
        }
    }
    Ok(grid)
}

fn pseudospec(model: &Operator<f64>, p: &PseudospecParams) -> Result<RunOutput, qnil_core::Error> {
    let (a, m) = rescaled(model, p.a)?;
    let [x0, x1, y0, y1] = p.region;
    let region = Region::new(x0, x1, y0, y1);
    let opts = GridOptions { refine: p.refine, levels: p.eps.clone(), ..GridOptions::default() };
    let grid = pseudospectrum_grid(&a, region, p.resolution, &opts)?;
    let spec = a.eigenvalues()?;

    let mut spectrum = Table::new(&["re", "im"]);
    for z in spec.points() {
        spectrum.push(vec![sci(z.re), sci(z.im)]);
    }
    let plot = contour_plot(&grid, &p.eps).with_points(spec.points().to_vec());
    let mut comps = Table::new(&["eps", "grid_components", "dilation_components", "closed_loops", "clipped"]);
    let mut levels = Vec::new();
    let mut summary = String::new();
    let (nx, ny) = grid.shape();
    let _ = writeln!(summary, "grid {nx} x {ny} nodes, step {}, |A| = {}", sci(p.resolution), sci(a.norm()));
    for (eps, level) in p.eps.iter().zip(&plot.levels) {
        let c = connected_components(&grid, *eps)?;
        let d = dilate_and_test(&spec, *eps)?;
        comps.push(vec![sci(*eps), c.count.to_string(), d.count().to_string(), level.closed_loops().to_string(), flag(level.clipped())]);
        let _ = writeln!(
            summary,
            "eps {:.3e}: {} grid component(s), {} dilation component(s){}",
            eps,
            c.count,
            d.count(),
            if level.clipped() { ", contour clipped by the region" } else { "" }
        );
        levels.push(json!({
            "eps": eps,
            "grid_components": c.count,
            "component_sizes": c.sizes,
            "dilation_components": d.count(),
            "closed_loops": level.closed_loops(),
            "open_polylines": level.loops.len() - level.closed_loops(),
        }));
    }
    let report = json!({
        "dim": a.dim(),
        "norm": a.norm(),
        "scale": m,
        "spectrum": spec.points().iter().map(|z| pair(*z)).collect::<Vec<_>>(),
        "grid": {
            "region": [x0, x1, y0, y1],
            "step": p.resolution,
            "shape": [nx, ny],
            "refined_cells": grid.refined_cells().len(),
        },
        "levels": levels,
    });
    Ok(RunOutput {
        artifacts: vec![
            Artifact::new("grid.csv", grid_table(&grid).to_bytes()),
            Artifact::new("spectrum.csv", spectrum.to_bytes()),
            Artifact::new("components.csv", comps.to_bytes()),
            Artifact::new("contours.svg", plot.to_svg().into_bytes()),
            Artifact::new("report.json", to_json(&report)),
        ],
        summary,
    })
}

// ------------------------------------------------------------- perturb_sweep

/// One row of `sweep.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub f_label: String,
    pub alpha: C64,
    pub n_nonzero_eigs: usize,
    pub max_abs_eig: f64,
    pub case: String,
    pub qtol: f64,
    pub borderline: bool,
}

pub const SWEEP_HEADER: [&str; 8] =
    ["f_label", "alpha_re", "alpha_im", "n_nonzero_eigs", "max_abs_eig", "case", "qtol", "borderline"];

pub fn read_sweep_csv(bytes: &[u8]) -> Result<Vec<SweepRow>, String> {
    let mut reader = csv::Reader::from_reader(bytes);
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if header != SWEEP_HEADER {
        return Err(format!("unexpected header {header:?}"));
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            let f = |k: usize| rec[k].parse::<f64>().map_err(|e| e.to_string());
            Ok(SweepRow {
                f_label: rec[0].to_string(),
                alpha: Complex::new(f(1)?, f(2)?),
                n_nonzero_eigs: rec[3].parse().map_err(|e: std::num::ParseIntError| e.to_string())?,
                max_abs_eig: f(4)?,
                case: rec[5].to_string(),
                qtol: f(6)?,
                borderline: rec[7].parse().map_err(|e: std::str::ParseBoolError| e.to_string())?,
            })
        })
        .collect()
}

fn perturb_sweep(model: &Operator<f64>, p: &SweepParams) -> Result<RunOutput, qnil_core::Error> {
    let (t, m) = rescaled(model, p.a)?;
    let samples = resolve_samples(&t, p.b, &sampler(p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed, p.b))?;
    let base = match p.family {
        SweepFamily::Adjoint => t.adjoint(),
        SweepFamily::Direct => t.clone(),
    };
    let alphas = p.alpha_grid.values();
    let mut table = Table::new(&SWEEP_HEADER);
    let mut per_f = Vec::new();
    let mut summary = String::new();
    let family = match p.family {
        SweepFamily::Adjoint => "adjoint",
        SweepFamily::Direct => "direct",
    };
    let _ = writeln!(
        summary,
        "{} perturbation(s) x {} alpha value(s), {family} family, |T| = {}",
        samples.len(),
        alphas.len(),
        sci(t.norm())
    );
    for s in &samples {
        let class = trichotomy_classify(&base, &s.e, &s.f, &alphas)?;
        let case = class.case.label();
        for o in &class.samples {
            table.push(vec![
                s.label.clone(),
                sci(o.alpha.re),
                sci(o.alpha.im),
                o.n_nonzero.to_string(),
                sci(o.max_abs_eig),
                case.to_string(),
                sci(o.qtol),
                flag(o.borderline),
            ]);
        }
        let k = match class.case {
            qnil_core::rank_one::Trichotomy::UniformlyFinite { k } => Some(k),
            qnil_core::rank_one::Trichotomy::QuasinilpotentForAll => None,
        };
        let borderline = class.borderline().count();
        let _ = writeln!(
            summary,
            "{}: {case}{}{}",
            s.label,
            k.map(|k| format!(", fewer than {k} nonzero eigenvalues")).unwrap_or_default(),
            if borderline > 0 { format!(", {borderline} borderline sample(s)") } else { String::new() }
        );
        per_f.push(json!({ "label": s.label, "norm": s.norm(), "case": case, "k": k, "borderline": borderline }));
    }
    let report = json!({ "dim": t.dim(), "norm": t.norm(), "scale": m, "b": p.b, "family": family, "per_f": per_f });
    Ok(RunOutput {
        artifacts: vec![Artifact::new("sweep.csv", table.to_bytes()), Artifact::new("report.json", to_json(&report))],
        summary,
    })
}

// --------------------------------------------------------------------- probe

fn probe_tables(run: usize, report: &ProbeReport, cells: &mut Table, summary: &mut Table) {
    for pf in &report.per_f {
        for cell in &pf.per_alpha {
            for (orientation, c) in [("adjoint", &cell.adjoint), ("direct", &cell.direct)] {
                cells.push(vec![
                    run.to_string(),
                    pf.label.clone(),
                    sci(cell.alpha[0]),
                    sci(cell.alpha[1]),
                    sci(cell.phi),
                    orientation.to_string(),
                    sci(c.spectral_radius),
                    flag(c.not_quasinilpotent),
                    flag(c.inclusion_holds),
                    c.inclusion_violations.to_string(),
                    flag(c.dilated_disconnected),
                    c.components.to_string(),
                    sci(c.grid_step),
                ]);
            }
        }
    }
    for v in &report.verdicts {
        let outcomes = || report.per_f.iter().flat_map(|pf| pf.readings.iter().filter(|r| r.reading == v.reading));
        summary.push(vec![
            run.to_string(),
            sci(report.params.a),
            sci(report.params.b),
            sci(report.params.t),
            sci(report.params.m),
            reading_name(v.reading).to_string(),
            format!("{:?}", v.verdict).to_lowercase(),
            outcomes().filter(|r| r.constrains).count().to_string(),
            outcomes().filter(|r| r.constrains && r.satisfied).count().to_string(),
            report.counterexamples.iter().filter(|c| c.reading == v.reading).count().to_string(),
        ]);
    }
}

fn reading_name(r: Reading) -> &'static str {
    match r {
        Reading::Adjoint => "adjoint",
        Reading::Direct => "direct",
        Reading::Mixed => "mixed",
    }
}

fn probe(model: &Operator<f64>, p: &ProbeConfig) -> Result<RunOutput, qnil_core::Error> {
    let triples = match &p.sweep {
        Some(s) => s.clone(),
        None => vec![[p.a.unwrap_or(1.0), p.b.unwrap_or(1.0), p.t.unwrap_or(1.0)]],
    };
    let alphas = p.alpha_grid.values();
    let mut cells = Table::new(&[
        "run",
        "f_label",
        "alpha_re",
        "alpha_im",
        "phi",
        "orientation",
        "spectral_radius",
        "not_quasinilpotent",
        "inclusion_holds",
        "inclusion_violations",
        "dilated_disconnected",
        "components",
        "grid_step",
    ]);
    let mut verdicts = Table::new(&[
        "run",
        "a",
        "b",
        "t",
        "m",
        "reading",
        "verdict",
        "constraining_f",
        "satisfied_f",
        "counterexamples",
    ]);
    let mut artifacts = Vec::new();
    let mut summary = String::new();
    for (run, [a, b, t]) in triples.iter().copied().enumerate() {
        let mut params = ProbeParams::new(a, b, t, p.phi.clone(), alphas.clone());
        params.grid_step = p.grid_step;
        let s = sampler(p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed, b);
        let report = probe_conjecture(model, &params, &s)?;
        probe_tables(run, &report, &mut cells, &mut verdicts);
        let _ = write!(summary, "a = {a}, b = {b}, t = {t}:");
        for v in &report.verdicts {
            let _ = write!(summary, " {} {:?};", reading_name(v.reading), v.verdict);
        }
        let _ = writeln!(summary, " {} counterexample(s)", report.counterexamples.len());
        let name = if triples.len() == 1 { "report.json".to_string() } else { format!("report_{run}.json") };
        artifacts.push(Artifact { name, bytes: to_json(&report) });
    }
    artifacts.push(Artifact::new("probe_cells.csv", cells.to_bytes()));
    artifacts.push(Artifact::new("probe_summary.csv", verdicts.to_bytes()));
    artifacts.push(Artifact::new("report.schema.json", PROBE_REPORT_SCHEMA.as_bytes().to_vec()));
    Ok(RunOutput { artifacts, summary })
}

// ------------------------------------------------------------------ pipeline

fn pipeline_table(report: &PipelineReport) -> Table {
    let mut t = Table::new(&[
        "f_label",
        "alpha_re",
        "alpha_im",
        "phi",
        "spectral_radius",
        "status",
        "components",
        "delta",
        "delta_lower",
        "max_resolvent",
        "chain_holds",
        "trials",
        "separated",
        "merged",
        "curve_hit",
    ]);
    for c in &report.cases {
        let head = vec![c.f_label.clone(), sci(c.alpha[0]), sci(c.alpha[1]), sci(c.phi), sci(c.spectral_radius)];
        let tail = match &c.status {
            ChainStatus::Evaluated(o) => vec![
                "evaluated".to_string(),
                o.components.to_string(),
                sci(o.delta),
                sci(o.delta_lower),
                sci(o.max_resolvent),
                flag(o.chain_holds),
                o.trials.to_string(),
                o.separated.to_string(),
                o.merged.to_string(),
                o.curve_hit.to_string(),
            ],
            other => {
                let name = match other {
                    ChainStatus::Connected => "connected",
                    _ => "no_rectangular_separation",
                };
                let mut v = vec![name.to_string()];
                v.extend(std::iter::repeat_n(String::new(), 9));
                v
            }
        };
        t.push(head.into_iter().chain(tail).collect());
    }
    t
}

fn pipeline(model: &Operator<f64>, p: &PipelineConfig) -> Result<RunOutput, qnil_core::Error> {
    let params = ProbeParams::new(p.a, p.b, p.t, p.phi.clone(), p.alpha_grid.values());
    let s = sampler(p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed, p.b);
    let opts = ChainOptions { samples_per_edge: p.samples_per_edge, trials: p.trials, seed: p.seed.unwrap_or(0) };
    let report = separation_pipeline(model, &params, &s, &opts)?;
    let evaluated: Vec<_> = report
        .cases
        .iter()
        .filter_map(|c| match &c.status {
            ChainStatus::Evaluated(o) => Some(o),
            _ => None,
        })
        .collect();
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "{} case(s), {} evaluated, chain 2/t < delta holds in {}, fails in {}; trials consistent: {}",
        report.cases.len(),
        evaluated.len(),
        evaluated.iter().filter(|o| o.chain_holds).count(),
        report.chain_failures.len(),
        report.consistent
    );
    Ok(RunOutput {
        artifacts: vec![
            Artifact::new("pipeline.csv", pipeline_table(&report).to_bytes()),
            Artifact::new("pipeline.json", to_json(&report)),
        ],
        summary,
    })
}

// --------------------------------------------------------------- certificate

fn certificate_table(report: &CertificateReport, t: f64) -> Table {
    let mut table = Table::new(&[
        "f_label",
        "alpha_re",
        "alpha_im",
        "max_resolvent",
        "max_resolvent_dense",
        "bound",
        "holds",
        "resolvent_floor",
    ]);
    for w in &report.witnesses {
        for b in &w.bounds {
            table.push(vec![
                w.f_label.clone(),
                sci(b.alpha[0]),
                sci(b.alpha[1]),
                sci(b.max_resolvent),
                sci(b.max_resolvent_dense),
                sci(1.0 / t),
                flag(b.holds),
                sci(w.resolvent_floor),
            ]);
        }
    }
    table
}

fn certificate(model: &Operator<f64>, p: &CertificateConfig) -> Result<RunOutput, qnil_core::Error> {
    let mut params = ProbeParams::new(p.a, p.b, p.t, p.phi.clone(), p.alpha_grid.values());
    params.grid_step = p.grid_step;
    let s = sampler(p.random_pairs, p.kernel_range, p.perturbations.as_deref(), p.seed, p.b);
    let report = r_boundability_certificate(model, &params, &s, p.samples_per_edge)?;
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "status {:?}; {} witness(es){}",
        report.status,
        report.witnesses.len(),
        report.certified_by.as_ref().map(|l| format!(", certified by {l}")).unwrap_or_default()
    );
    Ok(RunOutput {
        artifacts: vec![
            Artifact::new("certificate.csv", certificate_table(&report, p.t).to_bytes()),
            Artifact::new("certificate.json", to_json(&report)),
        ],
        summary,
    })
}

// ----------------------------------------------------------------- zerocount

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    let r = if lo < hi { rng.random_range(lo..hi) } else { lo };
    Complex::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

struct ZeroRow {
    n_actual: Option<usize>,
    n_bound: f64,
    fa_abs: f64,
    m: f64,
    sampled_max: f64,
    holds: Option<bool>,
    status: String,
}

impl ZeroRow {
    fn failed(status: String) -> Self {
        ZeroRow { n_actual: None, n_bound: f64::NAN, fa_abs: f64::NAN, m: f64::NAN, sampled_max: f64::NAN, holds: None, status }
    }
}

fn zero_instance(
    model: &Operator<f64>,
    p: &ZerocountConfig,
    cfg: &AnnulusConfig<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<ZeroRow, qnil_core::Error> {
    let opts = WindingOptions::default();
    let (inner, outer) = (cfg.inner_radius(), cfg.outer_radius());
    let outcome = match &p.source {
        ZeroSource::Polynomial { max_inside, max_outside } => {
            let k_in = rng.random_range(0..=*max_inside);
            let mut roots: Vec<C64> = (0..k_in).map(|_| cfg.center + polar(rng, inner * 1.02, outer * 0.98)).collect();
            for _ in 0..rng.random_range(0..=*max_outside) {
                let z = if rng.random_bool(0.5) { polar(rng, 0.0, inner * 0.95) } else { polar(rng, outer * 1.05, 1.5 * p.rho) };
                roots.push(cfg.center + z);
            }
            let poly = Polynomial::from_roots(gaussian(rng), &roots);
            let m = poly.certified_max_modulus(cfg.center, p.rho, 4096)?;
            verify_zero_bound(&poly, cfg, m, &opts)
        }
        ZeroSource::ShiftedG { alpha_modulus: [lo, hi] } => {
            let n = model.dim();
            let e = random_vector::<f64, _>(rng, n).normalize();
            let f = random_vector::<f64, _>(rng, n).normalize();
            let overlap = e.dotc(&f);
            let alpha = polar(rng, *lo, *hi) / overlap;
            let z0 = polar(rng, inner * 1.05, outer * 0.95);
            let pert = model.add_scaled(alpha, &make_rank_one(&e, &f)?)?;
            let eig = pert.eigenvalues()?;
            let mu = eig.points().iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
            let lambda = mu - z0 - cfg.center;
            if !(lambda.norm() > p.rho + 1.5 * p.phi) {
                return Ok(ZeroRow::failed("outside_regime".into()));
            }
            let h = ShiftedG::new(model.clone(), e.clone(), f.clone(), alpha, lambda)?;
            let m = heuristic_m(e.norm(), f.norm(), p.phi, model.norm())?;
            verify_zero_bound(&h, cfg, m, &opts)
        }
    };
    Ok(match outcome {
        Ok(c) => ZeroRow {
            n_actual: Some(c.n_actual),
            n_bound: c.n_bound,
            fa_abs: c.fa_abs,
            m: c.m,
            sampled_max: c.sampled_max,
            holds: Some(c.holds),
            status: "ok".into(),
        },
        Err(
            e @ (qnil_core::Error::Hypothesis { .. }
            | qnil_core::Error::NearBoundaryZero { .. }
            | qnil_core::Error::BoundaryZero { .. }),
        ) => ZeroRow::failed(e.to_string()),
        Err(e) => return Err(e),
    })
}

fn zerocount(model: &Operator<f64>, p: &ZerocountConfig) -> Result<RunOutput, qnil_core::Error> {
    let cfg = AnnulusConfig::new(p.rho, p.phi, Complex::new(p.a_point[0], p.a_point[1]));
    cfg.validate()?;
    let (model, _) = normalize_to(model, p.a.unwrap_or(1.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.unwrap_or(0));
    let mut table = Table::new(&["instance", "n_actual", "n_bound", "fa_abs", "m", "sampled_max", "holds", "status"]);
    let (mut holds, mut violated, mut skipped) = (0usize, 0usize, 0usize);
    for k in 0..p.instances {
        let row = zero_instance(&model, p, &cfg, &mut rng)?;
        match row.holds {
            Some(true) => holds += 1,
            Some(false) => violated += 1,
            None => skipped += 1,
        }
        table.push(vec![
            k.to_string(),
            row.n_actual.map(|n| n.to_string()).unwrap_or_default(),
            sci(row.n_bound),
            sci(row.fa_abs),
            sci(row.m),
            sci(row.sampled_max),
            row.holds.map(flag).unwrap_or_default(),
            row.status,
        ]);
    }
    let report = json!({
        "source": p.source,
        "rho": p.rho,
        "phi": p.phi,
        "a_point": p.a_point,
        "annulus": [cfg.inner_radius(), cfg.outer_radius()],
        "instances": p.instances,
        "holds": holds,
        "violated": violated,
        "not_evaluated": skipped,
    });
    let summary = format!(
        "{} instance(s) on 4 phi = {} < |z - c| <= rho/3 = {}: {holds} hold, {violated} violated, {skipped} not evaluated\n",
        p.instances,
        sci(cfg.inner_radius()),
        sci(cfg.outer_radius())
    );
    Ok(RunOutput {
        artifacts: vec![Artifact::new("zerocount.csv", table.to_bytes()), Artifact::new("report.json", to_json(&report))],
        summary,
    })
}
