//! Falsifiable experiments on rank-one perturbations `T~ + alpha F` of a
//! scaled nilpotent model `T~ = mT` with `|T~| = a` and `|F| = b`.
//!
//! Three harnesses live here:
//!
//! * [`probe_conjecture`] checks, for each sampled `F` and each `alpha`, that
//!   the operator is not quasinilpotent, that its `t`-pseudospectrum sits inside
//!   `σ + B(0, Φ(alpha))`, and that this dilation is disconnected.
//! * [`separation_pipeline`] builds a separating curve for every disconnected
//!   case of `T~* + alpha F` and checks `2/t < δ` before running semicontinuity
//!   trials with perturbations of norm `2/t`.
//! * [`r_boundability_certificate`] looks for `F` and `alpha`s on which a
//!   uniform resolvent bound `1/t` holds on separating curves.
//!
//! Which operator carries which check matters: `(T~ + alpha F)* = T~* +
//! conj(alpha) F*`, so the spectra of `T~ + alpha F` and `T~* + alpha F` are
//! not conjugates of each other. Reports record both and three readings of the
//! combined verdict (see [`Reading`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::normalize_to;
use crate::matrix::{inner, Operator};
use crate::rank_one::{kernel_range_perturbation, make_rank_one, random_orthogonal_pair, Vector};
use crate::scalar::{cabs, cplx, Complex, Real};
use crate::spectra::{
    delta_bound, dilate_and_test, inclusion_scan, separating_curve, ComponentSelector, Region, SemicontinuityTrial,
    SeparatingCurve, TrialOutcome,
};
use crate::spectrum::SpectrumSet;

/// Dilation radius as a function of `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Constant { value: f64 },
    /// Looked up by exact `alpha`; no interpolation.
    Table { entries: Vec<PhiEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub alpha: [f64; 2],
    pub radius: f64,
}

impl PhiSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |r: f64| r.is_finite() && r >= 0.0;
        match self {
            PhiSpec::Constant { value } if !ok(*value) => {
                Err(Error::InvalidArgument(format!("phi must be finite and nonnegative, got {value}")))
            }
            PhiSpec::Table { entries } => match entries.iter().find(|e| !ok(e.radius)) {
                Some(e) => Err(Error::InvalidArgument(format!("phi radius must be finite and nonnegative, got {}", e.radius))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn radius<T: Real>(&self, alpha: Complex<T>) -> Result<T> {
        match self {
            PhiSpec::Constant { value } => Ok(T::lit(*value)),
            PhiSpec::Table { entries } => {
                let key = [alpha.re.as_f64(), alpha.im.as_f64()];
                entries
                    .iter()
                    .find(|e| e.alpha == key)
                    .map(|e| T::lit(e.radius))
                    .ok_or(Error::PhiMissing { re: key[0], im: key[1] })
            }
        }
    }
}

/// How perturbations `F = e ⊗ f` are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    /// Random pairs with `<f, e> = 0`, rescaled to `|F| = b`.
    #[serde(default = "default_random_pairs")]
    pub random_pairs: usize,
    pub seed: u64,
    /// Also include the kernel/range pair of the scaled model (when it is nilpotent).
    #[serde(default = "default_true")]
    pub kernel_range: bool,
}

fn default_random_pairs() -> usize {
    32
}

fn default_true() -> bool {
    true
}

impl SamplerSpec {
    pub fn new(seed: u64) -> Self {
        SamplerSpec { random_pairs: default_random_pairs(), seed, kernel_range: true }
    }
}

/// One perturbation direction; the operator is `make_rank_one(e, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSample<T: Real> {
    pub label: String,
    pub e: Vector<T>,
    pub f: Vector<T>,
}

impl<T: Real> FSample<T> {
    pub fn new(label: impl Into<String>, e: Vector<T>, f: Vector<T>) -> Self {
        FSample { label: label.into(), e, f }
    }

    pub fn operator(&self) -> Result<Operator<T>> {
        make_rank_one(&self.e, &self.f)
    }

    pub fn norm(&self) -> T {
        self.e.norm() * self.f.norm()
    }
}

/// Where the perturbations come from.
#[derive(Debug, Clone)]
pub enum FSampler<T: Real> {
    Generated(SamplerSpec),
    Fixed(Vec<FSample<T>>),
}

/// Draws the perturbations of `spec` for the scaled model `t_tilde`, each with
/// `|F| = b`. The kernel/range pair comes first when present.
pub fn sample_perturbations<T: Real>(t_tilde: &Operator<T>, b: T, spec: &SamplerSpec) -> Result<Vec<FSample<T>>> {
    let mut out = Vec::with_capacity(spec.random_pairs + 1);
    if spec.kernel_range {
        match kernel_range_perturbation(t_tilde) {
            Ok((e, f)) => out.push(FSample::new("kernel_range", e, f.scale(b))),
            Err(Error::NotNilpotent { .. } | Error::TrivialKernel { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for k in 0..spec.random_pairs {
        let (e, f) = random_orthogonal_pair::<T, _>(&mut rng, t_tilde.dim())?;
        out.push(FSample::new(format!("random_{k}"), e, f.scale(b)));
    }
    Ok(out)
}

/// The perturbations `sampler` yields for `t_tilde`, checked for dimension,
/// `|F| = b` and nilpotency.
pub fn resolve_samples<T: Real>(t_tilde: &Operator<T>, b: T, sampler: &FSampler<T>) -> Result<Vec<FSample<T>>> {
    let samples = match sampler {
        FSampler::Generated(spec) => sample_perturbations(t_tilde, b, spec)?,
        FSampler::Fixed(samples) => samples.clone(),
    };
    let tol = T::lit(1e-12);
    for (index, s) in samples.iter().enumerate() {
        let bad = |reason: String| Err(Error::BadPerturbation { index, reason });
        if s.e.len() != t_tilde.dim() || s.f.len() != t_tilde.dim() {
            return bad(format!("dimension {} / {}, expected {}", s.e.len(), s.f.len(), t_tilde.dim()));
        }
        let norm = s.norm();
        if !((norm - b).abs() <= tol * b) {
            return bad(format!("|F| = {norm}, expected {b}"));
        }
        let overlap = cabs(inner(&s.f, &s.e));
        if !(overlap <= tol * norm) {
            return bad(format!("F is not nilpotent: |<f, e>| = {overlap}"));
        }
    }
    Ok(samples)
}

/// Parameters shared by the three harnesses.
#[derive(Debug, Clone)]
pub struct ProbeParams<T: Real> {
    pub a: T,
    pub b: T,
    pub t: T,
    pub phi: PhiSpec,
    pub alphas: Vec<Complex<T>>,
    /// Grid step for the pseudospectrum inclusion test. The grid covers
    /// `B(0, |A| + t)`, which contains the whole `t`-pseudospectrum; the default
    /// step is `min(t/4, (|A| + t)/128)`.
    pub grid_step: Option<T>,
}

impl<T: Real> ProbeParams<T> {
    pub fn new(a: T, b: T, t: T, phi: PhiSpec, alphas: Vec<Complex<T>>) -> Self {
        ProbeParams { a, b, t, phi, alphas, grid_step: None }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("t", self.t)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(h) = self.grid_step {
            if !(h > T::zero()) || !h.is_finite() {
                return Err(Error::InvalidArgument(format!("grid_step must be positive, got {h}")));
            }
        }
        if self.alphas.is_empty() {
            return Err(Error::InvalidArgument("alpha grid is empty".into()));
        }
        self.phi.validate()?;
        for alpha in &self.alphas {
            self.phi.radius(*alpha)?;
        }
        Ok(())
    }

    fn qtol(&self, alpha: Complex<T>) -> T {
        T::QTOL * (self.a + cabs(alpha) * self.b).max(T::one())
    }
}

fn pair<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

/// `T~ = mT` with `|T~| = a`.
pub fn scaled_model<T: Real>(t: &Operator<T>, a: T) -> Result<(Operator<T>, T)> {
    normalize_to(t, a)
}

/// The checks on one operator `A = T~ (*) + alpha F`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checks {
    pub spectral_radius: f64,
    pub not_quasinilpotent: bool,
    /// Every grid node with `|R_A| > 1/t` lies within `Φ(alpha)` of `σ(A)`.
    pub inclusion_holds: bool,
    pub inclusion_violations: usize,
    /// `σ(A) + B(0, Φ(alpha))` has at least two components.
    pub dilated_disconnected: bool,
    pub components: usize,
    pub grid_step: f64,
}

fn run_checks<T: Real>(a_op: &Operator<T>, t: T, phi: T, qtol: T, step: Option<T>) -> Result<(Checks, SpectrumSet<T>)> {
    let spec = a_op.eigenvalues()?;
    let radius = spec.radius();
    // σ_t(A) ⊆ B(0, |A| + t).
    let half = a_op.norm() + t;
    let h = step.unwrap_or_else(|| (t / T::lit(4.0)).min(half / T::lit(128.0)));
    let scan = inclusion_scan(a_op, Region::square(cplx(T::zero(), T::zero()), half), h, t, &spec, phi)?;
    let dil = dilate_and_test(&spec, phi)?;
    let checks = Checks {
        spectral_radius: radius.as_f64(),
        not_quasinilpotent: radius > qtol,
        inclusion_holds: scan.check.holds,
        inclusion_violations: scan.check.violations,
        dilated_disconnected: dil.count() >= 2,
        components: dil.count(),
        grid_step: h.as_f64(),
    };
    Ok((checks, spec))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaChecks {
    pub alpha: [f64; 2],
    pub phi: f64,
    /// `T~* + alpha F`.
    pub adjoint: Checks,
    /// `T~ + alpha F`.
    pub direct: Checks,
}

/// Which operator each condition is read on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// Every check on `T~* + alpha F`.
    Adjoint,
    /// Every check on `T~ + alpha F`.
    Direct,
    /// Non-quasinilpotency on `T~* + alpha F`, inclusion and disconnectedness on `T~ + alpha F`.
    Mixed,
}

impl Reading {
    pub const ALL: [Reading; 3] = [Reading::Adjoint, Reading::Direct, Reading::Mixed];

    fn split<'a>(&self, c: &'a AlphaChecks) -> (&'a Checks, &'a Checks) {
        match self {
            Reading::Adjoint => (&c.adjoint, &c.adjoint),
            Reading::Direct => (&c.direct, &c.direct),
            Reading::Mixed => (&c.adjoint, &c.direct),
        }
    }

    /// Names of the failed checks for one `alpha`; empty when all pass.
    pub fn failures(&self, c: &AlphaChecks) -> Vec<&'static str> {
        let (first, rest) = self.split(c);
        let mut failed = Vec::new();
        if !first.not_quasinilpotent {
            failed.push("not_quasinilpotent");
        }
        if !rest.inclusion_holds {
            failed.push("inclusion");
        }
        if !rest.dilated_disconnected {
            failed.push("disconnectedness");
        }
        failed
    }

    fn not_quasinilpotent(&self, c: &AlphaChecks) -> bool {
        self.split(c).0.not_quasinilpotent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Supported,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadingOutcome {
    pub reading: Reading,
    pub non_quasinilpotent: usize,
    /// Every sampled `alpha` passing all checks.
    pub s_set: Vec<[f64; 2]>,
    /// The `F` has at least two non-quasinilpotent `alpha`s.
    pub constrains: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FDescriptor {
    pub label: String,
    pub norm: f64,
    pub e: Vec<[f64; 2]>,
    pub f: Vec<[f64; 2]>,
}

impl FDescriptor {
    fn of<T: Real>(s: &FSample<T>) -> Self {
        FDescriptor {
            label: s.label.clone(),
            norm: s.norm().as_f64(),
            e: s.e.iter().map(|z| pair(*z)).collect(),
            f: s.f.iter().map(|z| pair(*z)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerF {
    pub label: String,
    pub per_alpha: Vec<AlphaChecks>,
    pub readings: Vec<ReadingOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub reading: Reading,
    pub f_label: String,
    pub alpha: [f64; 2],
    pub failed: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadingVerdict {
    pub reading: Reading,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeParamsEcho {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub m: f64,
    pub phi: PhiSpec,
    pub alphas: Vec<[f64; 2]>,
}

impl ProbeParamsEcho {
    fn of<T: Real>(p: &ProbeParams<T>, m: T) -> Self {
        ProbeParamsEcho {
            a: p.a.as_f64(),
            b: p.b.as_f64(),
            t: p.t.as_f64(),
            m: m.as_f64(),
            phi: p.phi.clone(),
            alphas: p.alphas.iter().map(|z| pair(*z)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub params: ProbeParamsEcho,
    pub f_samples: Vec<FDescriptor>,
    pub per_f: Vec<PerF>,
    pub verdicts: Vec<ReadingVerdict>,
    /// For each violated reading, every `(F, alpha)` that kept a constraining
    /// `F` from reaching two passing `alpha`s, with the checks it failed.
    pub counterexamples: Vec<Counterexample>,
}

impl ProbeReport {
    pub fn verdict(&self, reading: Reading) -> Verdict {
        self.verdicts.iter().find(|v| v.reading == reading).map(|v| v.verdict).unwrap_or(Verdict::Vacuous)
    }
}

fn alpha_checks<T: Real>(t_tilde: &Operator<T>, t_adj: &Operator<T>, f_op: &Operator<T>, p: &ProbeParams<T>, alpha: Complex<T>) -> Result<AlphaChecks> {
    let phi = p.phi.radius(alpha)?;
    let qtol = p.qtol(alpha);
    let (adjoint, _) = run_checks(&t_adj.add_scaled(alpha, f_op)?, p.t, phi, qtol, p.grid_step)?;
    let (direct, _) = run_checks(&t_tilde.add_scaled(alpha, f_op)?, p.t, phi, qtol, p.grid_step)?;
    Ok(AlphaChecks { alpha: pair(alpha), phi: phi.as_f64(), adjoint, direct })
}

/// Runs every `(F, alpha)` cell for the scaled model and assembles verdicts.
///
/// Per reading, an `F` constrains when at least two `alpha`s leave the
/// operator non-quasinilpotent; it is satisfied when at least two `alpha`s
/// pass every check. The verdict is vacuous when no `F` constrains, supported
/// when every constraining `F` is satisfied, violated otherwise.
pub fn probe_conjecture<T: Real>(t: &Operator<T>, params: &ProbeParams<T>, sampler: &FSampler<T>) -> Result<ProbeReport> {
    params.validate()?;
    let (t_tilde, m) = scaled_model(t, params.a)?;
    let t_adj = t_tilde.adjoint();
    let samples = resolve_samples(&t_tilde, params.b, sampler)?;
    let ops: Vec<Operator<T>> = samples.iter().map(|s| s.operator()).collect::<Result<_>>()?;
    let na = params.alphas.len();
    let cells: Vec<AlphaChecks> = (0..samples.len() * na)
        .into_par_iter()
        .map(|k| alpha_checks(&t_tilde, &t_adj, &ops[k / na], params, params.alphas[k % na]))
        .collect::<Result<_>>()?;
    let mut per_f = Vec::with_capacity(samples.len());
    let mut cells = cells.into_iter();
    for s in &samples {
        let per_alpha: Vec<AlphaChecks> = cells.by_ref().take(na).collect();
        let readings = Reading::ALL
            .iter()
            .map(|r| {
                let non_quasinilpotent = per_alpha.iter().filter(|c| r.not_quasinilpotent(c)).count();
                let s_set: Vec<[f64; 2]> = per_alpha.iter().filter(|c| r.failures(c).is_empty()).map(|c| c.alpha).collect();
                ReadingOutcome {
                    reading: *r,
                    non_quasinilpotent,
                    constrains: non_quasinilpotent >= 2,
                    satisfied: s_set.len() >= 2,
                    s_set,
                }
            })
            .collect();
        per_f.push(PerF { label: s.label.clone(), per_alpha, readings });
    }
    let mut verdicts = Vec::new();
    let mut counterexamples = Vec::new();
    for (ri, r) in Reading::ALL.iter().enumerate() {
        let constraining: Vec<&PerF> = per_f.iter().filter(|pf| pf.readings[ri].constrains).collect();
        let verdict = if constraining.is_empty() {
            Verdict::Vacuous
        } else if constraining.iter().all(|pf| pf.readings[ri].satisfied) {
            Verdict::Supported
        } else {
            Verdict::Violated
        };
        if verdict == Verdict::Violated {
            for pf in constraining.iter().filter(|pf| !pf.readings[ri].satisfied) {
                for c in &pf.per_alpha {
                    let failed = r.failures(c);
                    if !failed.is_empty() {
                        counterexamples.push(Counterexample { reading: *r, f_label: pf.label.clone(), alpha: c.alpha, failed });
                    }
                }
            }
        }
        verdicts.push(ReadingVerdict { reading: *r, verdict });
    }
    Ok(ProbeReport {
        params: ProbeParamsEcho::of(params, m),
        f_samples: samples.iter().map(FDescriptor::of).collect(),
        per_f,
        verdicts,
        counterexamples,
    })
}

/// Sampling and trial settings for [`separation_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainOptions {
    #[serde(default = "default_per_edge")]
    pub samples_per_edge: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
}

fn default_per_edge() -> usize {
    64
}

fn default_trials() -> usize {
    20
}

impl ChainOptions {
    pub fn new(seed: u64) -> Self {
        ChainOptions { samples_per_edge: default_per_edge(), trials: default_trials(), seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ChainStatus {
    /// The dilation is connected; nothing to separate.
    Connected,
    NoRectangularSeparation,
    Evaluated(ChainOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainOutcome {
    pub components: usize,
    pub curve: Vec<[f64; 2]>,
    /// Smallest sampled `σ_min(ξI - A)` on the curve.
    pub delta: f64,
    /// `delta` minus half the largest sample spacing: a guaranteed lower bound
    /// for the true minimum over the curve, since `σ_min` is 1-Lipschitz.
    pub delta_lower: f64,
    pub max_resolvent: f64,
    /// `max |R| <= 1/t` on the curve samples.
    pub resolvent_bound_holds: bool,
    /// `2/t < delta_lower`.
    pub chain_holds: bool,
    pub trials: usize,
    pub separated: usize,
    pub merged: usize,
    pub curve_hit: usize,
}

/// Complex Gaussian matrix rescaled to operator norm `norm`.
pub fn random_perturbation<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, norm: T) -> Result<Operator<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m = nalgebra::DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(T::lit(re * s), T::lit(im * s))
    });
    let (b, _) = normalize_to(&Operator::new(m)?, norm)?;
    Ok(b)
}

/// Separating curve around the component of `σ(A) + B(0, phi)` farthest from
/// the origin, `δ` on it, the check `2/t < δ`, and (when it holds)
/// semicontinuity trials with random perturbations of norm `2/t`.
pub fn separation_chain<T: Real>(a_op: &Operator<T>, phi: T, t: T, opts: &ChainOptions, stream: u64) -> Result<ChainStatus> {
    let spec = a_op.eigenvalues()?;
    let dil = dilate_and_test(&spec, phi)?;
    if dil.is_connected() {
        return Ok(ChainStatus::Connected);
    }
    let curve = match separating_curve(&spec, phi, ComponentSelector::FarthestFromOrigin) {
        Ok(c) => c,
        Err(Error::NoRectangularSeparation) => return Ok(ChainStatus::NoRectangularSeparation),
        Err(e) => return Err(e),
    };
    let est = delta_bound(a_op, &curve, opts.samples_per_edge)?;
    let spacing = curve.edges().map(|(p, q)| cabs(q - p)).fold(T::zero(), T::max) / T::from_usize_lossy(opts.samples_per_edge);
    let delta_lower = est.delta - spacing * T::lit(0.5);
    let eps = T::lit(2.0) / t;
    let chain_holds = eps < delta_lower;
    let (mut separated, mut merged, mut curve_hit) = (0, 0, 0);
    let trials = if chain_holds { opts.trials } else { 0 };
    if trials > 0 {
        let trial = SemicontinuityTrial::new(a_op, &curve)?;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(stream);
        for _ in 0..trials {
            let b = random_perturbation(&mut rng, a_op.dim(), eps)?;
            match trial.run(&b)? {
                TrialOutcome::Separated => separated += 1,
                TrialOutcome::Merged => merged += 1,
                TrialOutcome::CurveHit => curve_hit += 1,
            }
        }
    }
    Ok(ChainStatus::Evaluated(ChainOutcome {
        components: dil.count(),
        curve: curve.vertices().iter().map(|z| pair(*z)).collect(),
        delta: est.delta.as_f64(),
        delta_lower: delta_lower.as_f64(),
        max_resolvent: est.max_resolvent.as_f64(),
        resolvent_bound_holds: est.max_resolvent <= T::one() / t,
        chain_holds,
        trials,
        separated,
        merged,
        curve_hit,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineCase {
    pub f_label: String,
    pub alpha: [f64; 2],
    pub phi: f64,
    pub spectral_radius: f64,
    #[serde(flatten)]
    pub status: ChainStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub params: ProbeParamsEcho,
    pub f_samples: Vec<FDescriptor>,
    /// Every non-quasinilpotent `(F, alpha)` whose dilated spectrum is disconnected.
    pub cases: Vec<PipelineCase>,
    /// Cases where the curve keeps `|R| <= 1/t` but `2/t < δ` still fails.
    pub chain_failures: Vec<(String, [f64; 2])>,
    /// Every trial run (only where the chain holds) ended separated.
    pub consistent: bool,
}

/// The separation argument run on `T~* + alpha F` for every sampled `F` and
/// `alpha` whose spectrum, dilated by `Φ(alpha)`, is disconnected.
pub fn separation_pipeline<T: Real>(
    t: &Operator<T>,
    params: &ProbeParams<T>,
    sampler: &FSampler<T>,
    opts: &ChainOptions,
) -> Result<PipelineReport> {
    params.validate()?;
    let (t_tilde, m) = scaled_model(t, params.a)?;
    let t_adj = t_tilde.adjoint();
    let samples = resolve_samples(&t_tilde, params.b, sampler)?;
    let ops: Vec<Operator<T>> = samples.iter().map(|s| s.operator()).collect::<Result<_>>()?;
    let na = params.alphas.len();
    let cells: Vec<Option<PipelineCase>> = (0..samples.len() * na)
        .into_par_iter()
        .map(|k| -> Result<Option<PipelineCase>> {
            let alpha = params.alphas[k % na];
            let a_op = t_adj.add_scaled(alpha, &ops[k / na])?;
            let radius = a_op.spectral_radius()?;
            if radius <= params.qtol(alpha) {
                return Ok(None);
            }
            let phi = params.phi.radius(alpha)?;
            let status = separation_chain(&a_op, phi, params.t, opts, k as u64)?;
            if status == ChainStatus::Connected {
                return Ok(None);
            }
            Ok(Some(PipelineCase {
                f_label: samples[k / na].label.clone(),
                alpha: pair(alpha),
                phi: phi.as_f64(),
                spectral_radius: radius.as_f64(),
                status,
            }))
        })
        .collect::<Result<_>>()?;
    let cases: Vec<PipelineCase> = cells.into_iter().flatten().collect();
    let mut chain_failures = Vec::new();
    let mut consistent = true;
    for c in &cases {
        if let ChainStatus::Evaluated(o) = &c.status {
            if o.resolvent_bound_holds && !o.chain_holds {
                chain_failures.push((c.f_label.clone(), c.alpha));
            }
            if o.separated != o.trials {
                consistent = false;
            }
        }
    }
    Ok(PipelineReport {
        params: ProbeParamsEcho::of(params, m),
        f_samples: samples.iter().map(FDescriptor::of).collect(),
        cases,
        chain_failures,
        consistent,
    })
}

/// Length of the longest edge of a minimum spanning tree of the points.
/// Every split of the points into two nonempty parts has a cross pair at
/// most this far apart.
fn longest_tree_edge<T: Real>(points: &[Complex<T>]) -> T {
    let n = points.len();
    if n < 2 {
        return T::zero();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![T::INFINITY; n];
    best[0] = T::zero();
    let mut longest = T::zero();
    for _ in 0..n {
        let (k, _) = (0..n)
            .filter(|&i| !in_tree[i])
            .map(|i| (i, best[i]))
            .fold((usize::MAX, T::INFINITY), |acc, x| if acc.0 == usize::MAX || x.1 < acc.1 { x } else { acc });
        in_tree[k] = true;
        longest = longest.max(best[k]);
        for i in 0..n {
            if !in_tree[i] {
                best[i] = best[i].min(cabs(points[i] - points[k]));
            }
        }
    }
    longest
}

/// Lower bound for `max_Γ |R_A(ξ)|` over every closed curve `Γ` that
/// separates `σ(A)`: some cross pair `p, q` lies within the longest spanning
/// tree edge `L`, `Γ` meets the segment between them at a point within `L/2`
/// of the spectrum, and `|R(ξ)| >= 1/dist(ξ, σ)`. Hence `2/L`.
pub fn separating_resolvent_floor<T: Real>(spec: &SpectrumSet<T>) -> T {
    let l = longest_tree_edge(spec.points());
    if l > T::zero() {
        T::lit(2.0) / l
    } else {
        T::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    /// Some `F` has two or more `alpha`s with verified resolvent bounds.
    Certified,
    /// No sampled `F` disconnects the spectrum for two `alpha`s.
    NoWitness,
    /// Witnesses exist, but `1/t` lies below the resolvent floor of every
    /// separating curve for every disconnecting `alpha`.
    Impossible,
    /// Witnesses exist but none yields two verified `alpha`s.
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveBound {
    pub alpha: [f64; 2],
    pub curve: Vec<[f64; 2]>,
    pub max_resolvent: f64,
    /// Re-check at four times the sampling density.
    pub max_resolvent_dense: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub f_label: String,
    /// `alpha`s for which `σ(A~ + alpha F)` has two or more clusters.
    pub disconnecting: Vec<[f64; 2]>,
    /// `alpha`s among those where inclusion and dilated disconnectedness hold.
    pub s_set: Vec<[f64; 2]>,
    /// Curves and bounds for `s_set` (empty when `s_set` is too small).
    pub bounds: Vec<CurveBound>,
    /// Smallest resolvent floor over `disconnecting`.
    pub resolvent_floor: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub status: CertificateStatus,
    pub params: ProbeParamsEcho,
    pub connectivity_tolerance: f64,
    pub witnesses: Vec<Witness>,
    pub certified_by: Option<String>,
}

/// Looks for an `F` and at least two `alpha`s for which `σ(A~ + alpha F)` is
/// disconnected, its `t`-pseudospectrum lies in the `Φ`-dilation, the
/// dilation is disconnected, and `|R(ξ)| <= 1/t` on a separating curve
/// (checked at two sampling densities).
///
/// `A` must have connected spectrum at the clustering tolerance.
pub fn r_boundability_certificate<T: Real>(
    a_op: &Operator<T>,
    params: &ProbeParams<T>,
    sampler: &FSampler<T>,
    samples_per_edge: usize,
) -> Result<CertificateReport> {
    params.validate()?;
    if samples_per_edge == 0 {
        return Err(Error::InvalidArgument("samples_per_edge must be positive".into()));
    }
    let spec = a_op.eigenvalues()?;
    let tol = spec.cluster_tolerance();
    let clusters = dilate_and_test(&spec, tol)?;
    if !clusters.is_connected() {
        return Err(Error::SpectrumNotConnected { tolerance: tol.as_f64(), components: clusters.count() });
    }
    let (a_tilde, m) = scaled_model(a_op, params.a)?;
    let samples = resolve_samples(&a_tilde, params.b, sampler)?;
    let level = T::one() / params.t;
    let witnesses: Vec<Option<Witness>> = samples
        .par_iter()
        .map(|s| -> Result<Option<Witness>> {
            let f_op = s.operator()?;
            let mut disconnecting = Vec::new();
            let mut s_set = Vec::new();
            let mut floor = T::INFINITY;
            let mut cases = Vec::new();
            for alpha in &params.alphas {
                let pert = a_tilde.add_scaled(*alpha, &f_op)?;
                let phi = params.phi.radius(*alpha)?;
                let (checks, spec) = run_checks(&pert, params.t, phi, params.qtol(*alpha), params.grid_step)?;
                if dilate_and_test(&spec, spec.cluster_tolerance())?.is_connected() {
                    continue;
                }
                disconnecting.push(pair(*alpha));
                floor = floor.min(separating_resolvent_floor(&spec));
                if checks.inclusion_holds && checks.dilated_disconnected {
                    s_set.push(pair(*alpha));
                    cases.push((*alpha, phi, pert, spec));
                }
            }
            if disconnecting.len() < 2 {
                return Ok(None);
            }
            let mut bounds = Vec::new();
            if s_set.len() >= 2 {
                for (alpha, phi, pert, spec) in &cases {
                    let curve = match separating_curve(spec, *phi, ComponentSelector::FarthestFromOrigin) {
                        Ok(c) => c,
                        Err(Error::NoRectangularSeparation) => continue,
                        Err(e) => return Err(e),
                    };
                    bounds.push(curve_bound(pert, &curve, *alpha, samples_per_edge, level)?);
                }
            }
            let certified = bounds.iter().filter(|b| b.holds).count() >= 2;
            Ok(Some(Witness {
                f_label: s.label.clone(),
                disconnecting,
                s_set,
                bounds,
                resolvent_floor: floor.as_f64(),
                certified,
            }))
        })
        .collect::<Result<_>>()?;
    let witnesses: Vec<Witness> = witnesses.into_iter().flatten().collect();
    let certified_by = witnesses.iter().find(|w| w.certified).map(|w| w.f_label.clone());
    let status = if witnesses.is_empty() {
        CertificateStatus::NoWitness
    } else if certified_by.is_some() {
        CertificateStatus::Certified
    } else if witnesses.iter().all(|w| w.resolvent_floor > level.as_f64()) {
        CertificateStatus::Impossible
    } else {
        CertificateStatus::NotCertified
    };
    Ok(CertificateReport {
        status,
        params: ProbeParamsEcho::of(params, m),
        connectivity_tolerance: tol.as_f64(),
        witnesses,
        certified_by,
    })
}

fn curve_bound<T: Real>(a_op: &Operator<T>, curve: &SeparatingCurve<T>, alpha: Complex<T>, per_edge: usize, level: T) -> Result<CurveBound> {
    let coarse = delta_bound(a_op, curve, per_edge)?;
    let dense = delta_bound(a_op, curve, 4 * per_edge)?;
    Ok(CurveBound {
        alpha: pair(alpha),
        curve: curve.vertices().iter().map(|z| pair(*z)).collect(),
        max_resolvent: coarse.max_resolvent.as_f64(),
        max_resolvent_dense: dense.max_resolvent.as_f64(),
        holds: coarse.max_resolvent <= level && dense.max_resolvent <= level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build, GallerySpec};

    fn c(re: f64, im: f64) -> Complex<f64> {
        cplx(re, im)
    }

    #[test]
    fn phi_lookup() {
        let table = PhiSpec::Table { entries: vec![PhiEntry { alpha: [1.0, 0.0], radius: 0.5 }] };
        assert_eq!(table.radius(c(1.0, 0.0)).unwrap(), 0.5);
        assert!(matches!(table.radius(c(1.0, 1e-17)), Err(Error::PhiMissing { .. })));
        assert!(matches!(table.radius(c(2.0, 0.0)), Err(Error::PhiMissing { .. })));
        assert_eq!(PhiSpec::Constant { value: 0.1 }.radius(c(5.0, 5.0)).unwrap(), 0.1);
        assert!(PhiSpec::Constant { value: -1.0 }.validate().is_err());
    }

    #[test]
    fn sampler_respects_norm_and_nilpotency() {
        let t = build::<f64>(&GallerySpec::jordan(6)).unwrap();
        let s = sample_perturbations(&t, 2.0, &SamplerSpec::new(1)).unwrap();
        assert_eq!(s.len(), 33);
        assert_eq!(s[0].label, "kernel_range");
        for x in &s {
            assert!((x.norm() - 2.0).abs() < 1e-12);
            assert!(inner(&x.f, &x.e).norm() < 1e-12);
        }
        let bad = FSampler::Fixed(vec![FSample::new("x", s[1].e.clone(), s[1].f.scale(3.0))]);
        assert!(matches!(resolve_samples(&t, 2.0, &bad), Err(Error::BadPerturbation { index: 0, .. })));
    }

    #[test]
    fn tree_edge_floor() {
        let spec = SpectrumSet::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(5.0, 0.0)], 5.0);
        assert_eq!(longest_tree_edge(spec.points()), 4.0);
        assert_eq!(separating_resolvent_floor(&spec), 0.5);
    }

    #[test]
    fn chain_on_a_normal_toy() {
        // diag(0, 3): the curve is the square of half-side 1.5 around 3, so δ = 1.5
        // exactly (edge midpoints are samples).
        let a = Operator::from_real_diagonal(&[0.0, 3.0]);
        let opts = ChainOptions { samples_per_edge: 64, trials: 10, seed: 4 };
        let ChainStatus::Evaluated(o) = separation_chain(&a, 0.5, 2.0, &opts, 0).unwrap() else { panic!() };
        assert!((o.delta - 1.5).abs() < 1e-14);
        assert!((o.delta_lower - (1.5 - 3.0 / 64.0 / 2.0)).abs() < 1e-14);
        assert!(o.chain_holds);
        assert_eq!(o.separated, 10);
        let ChainStatus::Evaluated(o) = separation_chain(&a, 0.5, 1.0, &opts, 0).unwrap() else { panic!() };
        assert!(!o.chain_holds);
        assert_eq!(o.trials, 0);
        assert_eq!(separation_chain(&a, 2.0, 1.0, &opts, 0).unwrap(), ChainStatus::Connected);
    }
}
