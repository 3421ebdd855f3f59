//! Replicated experiments with confidence intervals and bound verdicts.
//!
//! Replicate `r` of an experiment with seed `s` draws from stream `(s, r)`
//! (and `(s, r | AUX_STREAM)` for auxiliary draws), results are collected in
//! replicate order, and reductions run sequentially over that order. Reports
//! are therefore identical for any worker count.
//!
//! Proportions use the normal approximation `p̂ ± 1.96 √(p̂(1-p̂)/R)` without
//! continuity correction; when no replicate (or every replicate) hits, the
//! interval is the exact one-sided 97.5% bound `1 - 0.025^{1/R} ≈ 3.69/R`.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    cluster_tail_upper, degree_pmf, diagnostics, egamma_upper, theorem1_bound, theorem1_threshold, theorem2_threshold,
    EGammaBound,
};
use crate::bp::{default_bp_cap, run_marked_bp, run_walk, GammaConfig, MixedPoisson, OffspringLaw, OffspringSource};
use crate::dist::{build_weights, critical_cf, DistributionSpec, SpecKind, WeightSequence};
use crate::error::{Error, Result};
use crate::explore::{cluster_of_random_vertex, components_union_find, Adjacency};
use crate::numeric::pairwise_sum;
use crate::oracle::{exact_component_laws, MAX_ORACLE_N};
use crate::poisson;
use crate::rng::RngContract;
use crate::sampler::{degree_histogram, PoissonCollapseSampler};

/// High bit of the stream id, reserved for draws that must not share a
/// stream with the replicate's main sample.
pub const AUX_STREAM: u64 = 1 << 63;

pub const MIN_REPLICATES: u64 = 100;

/// Slack on the leading constant of the `τ > 4` largest-component bound,
/// standing in for its unquantified `1 + O(·)` factor.
pub const THEOREM1_SLACK: f64 = 1.5;

/// Total-variation tolerance for the distributional checks.
pub const TV_TOLERANCE: f64 = 0.02;

/// Largest vertex count an experiment may request.
pub const MAX_N: usize = 20_000_000;

/// Largest `n · R` for quantities that sample a whole graph per replicate.
pub const MAX_GRAPH_WORK: f64 = 2e11;

/// Largest `R · H'` for walk quantities.
pub const MAX_WALK_WORK: f64 = 1e13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Quantity {
    /// `P(|C_max| > ω n^{e})` with `e = 2/3` for `τ > 4` and `(τ-2)/(τ-1)` for `τ ∈ (3, 4)`.
    CmaxTail { omega: f64 },
    /// `P(|C(V)| > k)`; with `gamma` set, compared against the stopped-walk bound.
    ClusterTail {
        k: usize,
        #[serde(default)]
        gamma: Option<GammaConfig>,
    },
    /// `P(S_t > 0 for all t <= k)` for the dominating walk.
    WalkPositivity { k: usize },
    /// `P(1 + Σ_{i≤t} (|M̃_i| - 1) > 0 for all t <= k)` for the thinned branching process.
    BpPositivity { k: usize },
    /// `E(γ)` against its analytic upper bound.
    GammaMean { cfg: GammaConfig },
    /// `P(S_γ - H >= k | S_γ >= H)` against `P(Poisson(w_1) >= k)`.
    Overshoot { cfg: GammaConfig, k: u64 },
    /// Total variation between the explored-marks law at `T*` and the exact
    /// law of `|C(V)|`; needs `n <= 6`.
    Prop24Tv,
    /// Mean over replicates of the total variation between one sample's
    /// degree frequencies and the limiting mixed-Poisson law.
    DegreeTv { k_max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BoundHolds,
    BoundViolated,
    Vacuous,
    Informational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub spec: DistributionSpec,
    pub n: usize,
    pub replicates: u64,
    pub quantity: Quantity,
    pub seed: u64,
    pub offspring_law: OffspringLaw,
}

impl Experiment {
    pub fn new(spec: DistributionSpec, n: usize, replicates: u64, quantity: Quantity, seed: u64) -> Self {
        Self {
            spec,
            n,
            replicates,
            quantity,
            seed,
            offspring_law: OffspringLaw::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidExperiment(m));
        if self.replicates < MIN_REPLICATES {
            return bad(format!(
                "need at least {MIN_REPLICATES} replicates, got {}",
                self.replicates
            ));
        }
        if self.n < 2 {
            return bad(format!("need n >= 2, got {}", self.n));
        }
        match self.quantity {
            Quantity::CmaxTail { omega } => {
                if !(omega > 1.0 && omega.is_finite()) {
                    return bad(format!("omega must exceed 1, got {omega}"));
                }
                match self.spec.tau() {
                    Some(t) if t != 4.0 => {}
                    _ => return bad("largest-component tails need a Pareto tail with tau != 4".into()),
                }
            }
            Quantity::ClusterTail { k, gamma } => {
                if k < 1 {
                    return bad("k must be positive".into());
                }
                if let Some(g) = gamma {
                    g.validate()?;
                    if g.k as usize != k {
                        return bad(format!("gamma.k = {} differs from k = {k}", g.k));
                    }
                }
            }
            Quantity::WalkPositivity { k } | Quantity::BpPositivity { k } => {
                if k < 1 {
                    return bad("k must be positive".into());
                }
            }
            Quantity::GammaMean { cfg } => cfg.validate()?,
            Quantity::Overshoot { cfg, .. } => cfg.validate()?,
            Quantity::Prop24Tv => {
                if self.n > MAX_ORACLE_N {
                    return bad(format!(
                        "the exact cluster law needs n <= {MAX_ORACLE_N}, got {}",
                        self.n
                    ));
                }
            }
            Quantity::DegreeTv { k_max } => {
                if k_max < 1 {
                    return bad("k_max must be positive".into());
                }
            }
        }
        Ok(())
    }

    /// Refuses experiments whose estimated cost is out of reach.
    pub fn check_resources(&self) -> Result<()> {
        if self.n > MAX_N {
            return Err(Error::Refused(format!(
                "n = {} exceeds the supported maximum {MAX_N}; weight tables alone would not fit in memory",
                self.n
            )));
        }
        let r = self.replicates as f64;
        match self.quantity {
            Quantity::CmaxTail { .. } | Quantity::ClusterTail { .. } | Quantity::DegreeTv { .. } => {
                let work = self.n as f64 * r;
                if work > MAX_GRAPH_WORK {
                    return Err(Error::Refused(format!(
                        "n * R = {work:.3e} graph-vertex samples exceeds {MAX_GRAPH_WORK:.0e}; lower n or R"
                    )));
                }
            }
            Quantity::GammaMean { cfg } | Quantity::Overshoot { cfg, .. } => {
                let work = cfg.h_prime as f64 * r;
                if work > MAX_WALK_WORK {
                    return Err(Error::Refused(format!(
                        "R * H' = {work:.3e} walk steps in the worst case exceeds {MAX_WALK_WORK:.0e}; lower H' or R"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McReport {
    pub estimate: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub bound_value: Option<f64>,
    pub verdict: Verdict,
    pub runtime_s: f64,
    pub censored_fraction: f64,
}

impl McReport {
    /// The report with its wall-clock field zeroed; equal inputs give equal
    /// canonical reports.
    pub fn canonical(&self) -> Self {
        Self {
            runtime_s: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn canonical_json(&self) -> Result<String> {
        self.canonical().to_json()
    }

    pub const CSV_HEADER: [&'static str; 8] = [
        "estimate",
        "stderr",
        "ci95_lo",
        "ci95_hi",
        "bound_value",
        "verdict",
        "runtime_s",
        "censored_fraction",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.estimate.to_string(),
            self.stderr.to_string(),
            self.ci95.0.to_string(),
            self.ci95.1.to_string(),
            self.bound_value.map(|b| b.to_string()).unwrap_or_default(),
            serde_json::to_value(self.verdict)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string(),
            self.runtime_s.to_string(),
            self.censored_fraction.to_string(),
        ]
    }

    pub fn write_csv<W: Write>(reports: &[McReport], out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(Self::CSV_HEADER)?;
        for r in reports {
            wtr.write_record(r.csv_record())?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Point estimate, standard error and 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub estimate: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

pub fn proportion_summary(successes: u64, trials: u64) -> Summary {
    if trials == 0 {
        return Summary {
            estimate: 0.0,
            stderr: 0.0,
            ci95: (0.0, 1.0),
        };
    }
    let r = trials as f64;
    let p = successes as f64 / r;
    let se = (p * (1.0 - p) / r).sqrt();
    let edge = 1.0 - 0.025f64.powf(1.0 / r);
    let ci95 = if successes == 0 {
        (0.0, edge)
    } else if successes == trials {
        (1.0 - edge, 1.0)
    } else {
        ((p - 1.96 * se).max(0.0), (p + 1.96 * se).min(1.0))
    };
    Summary {
        estimate: p,
        stderr: se,
        ci95,
    }
}

pub fn mean_summary(values: &[f64]) -> Summary {
    let r = values.len() as f64;
    let mean = pairwise_sum(values) / r;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if values.len() > 1 {
        pairwise_sum(&dev) / (r - 1.0)
    } else {
        0.0
    };
    let se = (var / r).sqrt();
    Summary {
        estimate: mean,
        stderr: se,
        ci95: (mean - 1.96 * se, mean + 1.96 * se),
    }
}

/// A value compared by [`dominance_check`]: a Monte Carlo estimate or an
/// exact number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Side {
    Estimate { value: f64, stderr: f64 },
    Exact(f64),
}

impl Side {
    fn parts(self) -> (f64, f64) {
        match self {
            Side::Estimate { value, stderr } => (value, stderr),
            Side::Exact(v) => (v, 0.0),
        }
    }
}

impl From<&McReport> for Side {
    fn from(r: &McReport) -> Self {
        Side::Estimate {
            value: r.estimate,
            stderr: r.stderr,
        }
    }
}

/// `BoundHolds` iff `lhs <= rhs + 3 √(se_lhs² + se_rhs²)`.
pub fn dominance_check(lhs: Side, rhs: Side) -> Verdict {
    let (l, sl) = lhs.parts();
    let (r, sr) = rhs.parts();
    if l <= r + 3.0 * (sl * sl + sr * sr).sqrt() {
        Verdict::BoundHolds
    } else {
        Verdict::BoundViolated
    }
}

/// Evaluates `f(r)` for `r in 0..replicates` on `workers` threads and
/// returns the results in replicate order.
pub fn map_replicates<T, F>(workers: usize, replicates: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidExperiment(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..replicates).into_par_iter().map(&f).collect()))
}

enum Bound {
    None,
    Value(f64),
    Vacuous,
}

struct Outcome {
    summary: Summary,
    bound: Bound,
    censored_fraction: f64,
    /// Set when the estimate rests on no data (e.g. no conditioning events).
    no_data: bool,
}

/// Runs experiments, sharing largest-component samples between experiments
/// that differ only in `ω`.
#[derive(Default)]
pub struct Runner {
    workers: usize,
    cmax_cache: Mutex<HashMap<String, Arc<Vec<u32>>>>,
}

impl Runner {
    pub fn new(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
            cmax_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn run(&self, e: &Experiment) -> Result<McReport> {
        e.validate()?;
        e.check_resources()?;
        let start = Instant::now();
        let mut outcome = self.evaluate(e, e.replicates)?;
        let mut verdict = verdict_for(&outcome);
        if verdict == Verdict::BoundViolated {
            outcome = self.evaluate(e, 4 * e.replicates)?;
            verdict = verdict_for(&outcome);
        }
        if outcome.censored_fraction > 0.01 {
            verdict = Verdict::Informational;
        }
        Ok(McReport {
            estimate: outcome.summary.estimate,
            stderr: outcome.summary.stderr,
            ci95: outcome.summary.ci95,
            bound_value: match outcome.bound {
                Bound::Value(b) => Some(b),
                _ => None,
            },
            verdict,
            runtime_s: start.elapsed().as_secs_f64(),
            censored_fraction: outcome.censored_fraction,
        })
    }

    fn evaluate(&self, e: &Experiment, r: u64) -> Result<Outcome> {
        let ws = build_weights(&e.spec, e.n)?;
        let seed = e.seed;
        let w = self.workers;
        let proportion = |hits: u64, bound: Bound| Outcome {
            summary: proportion_summary(hits, r),
            bound,
            censored_fraction: 0.0,
            no_data: false,
        };
        Ok(match e.quantity {
            Quantity::CmaxTail { omega } => {
                let tau = e.spec.tau().unwrap();
                let (threshold, bound) = if tau > 4.0 {
                    let b = theorem1_bound(&e.spec, omega)?.leading * THEOREM1_SLACK;
                    (theorem1_threshold(e.n, omega)?, Bound::Value(b))
                } else {
                    (theorem2_threshold(e.n, tau, omega)?, Bound::None)
                };
                let cmax = self.cmax_samples(e, &ws, r)?;
                let hits = cmax.iter().filter(|&&c| c as usize > threshold).count() as u64;
                proportion(hits, bound)
            }
            Quantity::ClusterTail { k, gamma } => {
                let sampler = PoissonCollapseSampler::new(&ws)?;
                let hits = count(map_replicates(w, r, |i| {
                    let g = sampler.sample(RngContract::new(seed, i));
                    let mut aux = RngContract::new(seed, i | AUX_STREAM).rng();
                    cluster_of_random_vertex(&Adjacency::new(&g), &mut aux) > k
                })?);
                let bound = match gamma {
                    None => Bound::None,
                    Some(cfg) => match egamma_upper(&diagnostics(&ws, &cfg)?) {
                        EGammaBound::Bound(eg) => {
                            Bound::Value(cluster_tail_upper(&diagnostics(&ws, &cfg)?, eg.max(1.0))?)
                        }
                        EGammaBound::Vacuous => Bound::Vacuous,
                    },
                };
                proportion(hits, bound)
            }
            Quantity::WalkPositivity { k } => {
                let src = MixedPoisson::new(&ws)?;
                let hits = count(map_replicates(w, r, |i| {
                    walk_positive_through(&src, k, &mut RngContract::new(seed, i).rng())
                })?);
                proportion(hits, Bound::None)
            }
            Quantity::BpPositivity { k } => {
                let src = MixedPoisson::new(&ws)?;
                let cap = default_bp_cap(e.n).max(k);
                let law = e.offspring_law;
                let runs = map_replicates(w, r, |i| {
                    run_marked_bp(&src, &mut RngContract::new(seed, i).rng(), cap, law).thinned_positive_through(k)
                })?;
                let hits = runs.iter().filter(|x| **x == Some(true)).count() as u64;
                let censored = runs.iter().filter(|x| x.is_none()).count() as f64 / r as f64;
                Outcome {
                    censored_fraction: censored,
                    ..proportion(hits, Bound::None)
                }
            }
            Quantity::GammaMean { cfg } => {
                let src = MixedPoisson::new(&ws)?;
                let walk_cfg = GammaConfig { k: 1, ..cfg };
                let gammas: Vec<f64> = map_replicates(w, r, |i| {
                    run_walk(&src, &walk_cfg, &mut RngContract::new(seed, i).rng(), true, false).gamma as f64
                })?;
                let bound = match egamma_upper(&diagnostics(&ws, &cfg)?) {
                    EGammaBound::Bound(b) => Bound::Value(b),
                    EGammaBound::Vacuous => Bound::Vacuous,
                };
                Outcome {
                    summary: mean_summary(&gammas),
                    bound,
                    censored_fraction: 0.0,
                    no_data: false,
                }
            }
            Quantity::Overshoot { cfg, k } => {
                let src = MixedPoisson::new(&ws)?;
                let walk_cfg = GammaConfig { k: 1, ..cfg };
                let h = cfg.h as i64;
                let over: Vec<Option<u64>> = map_replicates(w, r, |i| {
                    let p = run_walk(&src, &walk_cfg, &mut RngContract::new(seed, i).rng(), true, false);
                    (p.s_gamma >= h).then(|| (p.s_gamma - h) as u64)
                })?;
                let events = over.iter().flatten().count() as u64;
                let hits = over.iter().flatten().filter(|&&o| o >= k).count() as u64;
                Outcome {
                    summary: proportion_summary(hits, events),
                    bound: Bound::Value(poisson::upper_tail(ws.max_weight(), k)),
                    censored_fraction: 0.0,
                    no_data: events == 0,
                }
            }
            Quantity::Prop24Tv => {
                let src = MixedPoisson::new(&ws)?;
                let cap = default_bp_cap(e.n);
                let law = e.offspring_law;
                let runs = map_replicates(w, r, |i| {
                    run_marked_bp(&src, &mut RngContract::new(seed, i).rng(), cap, law).t_star
                })?;
                let mut counts = BTreeMap::new();
                for t in runs.iter().flatten() {
                    *counts.entry(*t).or_insert(0u64) += 1;
                }
                let censored = runs.iter().filter(|t| t.is_none()).count() as f64 / r as f64;
                let exact = exact_component_laws(&ws)?.1;
                let tv = exact.tv_from_counts(&counts);
                Outcome {
                    summary: Summary {
                        estimate: tv,
                        stderr: 0.0,
                        ci95: (tv, tv),
                    },
                    bound: Bound::Value(TV_TOLERANCE),
                    censored_fraction: censored,
                    no_data: false,
                }
            }
            Quantity::DegreeTv { k_max } => {
                let sampler = PoissonCollapseSampler::new(&ws)?;
                let pmf = degree_pmf(&e.spec, k_max);
                let tvs: Vec<f64> = map_replicates(w, r, |i| {
                    degree_tv(
                        &degree_histogram(&sampler.sample(RngContract::new(seed, i))),
                        e.n,
                        &pmf.p,
                    )
                })?;
                Outcome {
                    summary: mean_summary(&tvs),
                    bound: Bound::Value(TV_TOLERANCE),
                    censored_fraction: 0.0,
                    no_data: false,
                }
            }
        })
    }

    fn cmax_samples(&self, e: &Experiment, ws: &WeightSequence, r: u64) -> Result<Arc<Vec<u32>>> {
        let key = format!("{:?}|{}|{}|{}", e.spec, e.n, e.seed, r);
        if let Some(v) = self.cmax_cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(v));
        }
        let sampler = PoissonCollapseSampler::new(ws)?;
        let seed = e.seed;
        let v = Arc::new(map_replicates(self.workers, r, |i| {
            components_union_find(&sampler.sample(RngContract::new(seed, i))).c_max() as u32
        })?);
        self.cmax_cache.lock().unwrap().insert(key, Arc::clone(&v));
        Ok(v)
    }
}

fn count(v: Vec<bool>) -> u64 {
    v.into_iter().filter(|&b| b).count() as u64
}

fn verdict_for(o: &Outcome) -> Verdict {
    if o.no_data {
        return Verdict::Informational;
    }
    match o.bound {
        Bound::None => Verdict::Informational,
        Bound::Vacuous => Verdict::Vacuous,
        Bound::Value(b) => {
            if o.summary.estimate - 3.0 * o.summary.stderr > b {
                Verdict::BoundViolated
            } else {
                Verdict::BoundHolds
            }
        }
    }
}

/// `S_t > 0` for all `t <= k`, with the dominated first step.
pub fn walk_positive_through<S: OffspringSource, R: rand::Rng + ?Sized>(source: &S, k: usize, rng: &mut R) -> bool {
    let mut s: i64 = 1;
    for t in 1..=k {
        let y = if t == 1 {
            source.draw_first(rng, true)
        } else {
            source.draw(rng)
        };
        s += y as i64 - 1;
        if s <= 0 {
            return false;
        }
    }
    true
}

/// Total variation between the degree frequencies of an `n`-vertex sample
/// and `p_0..p_{k_max}`, with all mass above `k_max` pooled into one cell.
pub fn degree_tv(hist: &BTreeMap<usize, usize>, n: usize, p: &[f64]) -> f64 {
    let k_max = p.len() - 1;
    let freq = |k: usize| *hist.get(&k).unwrap_or(&0) as f64 / n as f64;
    let head: f64 = (0..=k_max).map(|k| (freq(k) - p[k]).abs()).sum();
    let emp_tail: f64 = hist.range(k_max + 1..).map(|(_, &c)| c as f64).sum::<f64>() / n as f64;
    let pmf_tail = (1.0 - p.iter().sum::<f64>()).max(0.0);
    0.5 * (head + (emp_tail - pmf_tail).abs())
}

pub fn run_experiment(e: &Experiment, workers: usize) -> Result<McReport> {
    Runner::new(workers).run(e)
}

/// `c_F` in a configuration: a number or the word `"critical"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CfValue {
    Named(CfName),
    Value(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CfName {
    Critical,
}

impl Default for CfValue {
    fn default() -> Self {
        CfValue::Named(CfName::Critical)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecConfig {
    ParetoTail {
        tau: f64,
        #[serde(default)]
        c_f: CfValue,
    },
    ExplicitQuantile {
        knots: Vec<(f64, f64)>,
    },
}

impl SpecConfig {
    pub fn build(&self) -> Result<DistributionSpec> {
        match self {
            SpecConfig::ParetoTail { tau, c_f } => {
                let c = match c_f {
                    CfValue::Named(CfName::Critical) => critical_cf(*tau)?,
                    CfValue::Value(v) => *v,
                };
                DistributionSpec::pareto(*tau, c)
            }
            SpecConfig::ExplicitQuantile { knots } => DistributionSpec::explicit_quantile(knots.clone()),
        }
    }

    pub fn from_spec(spec: &DistributionSpec) -> Self {
        match spec.kind() {
            SpecKind::ParetoTail { tau, c_f } => SpecConfig::ParetoTail {
                tau: *tau,
                c_f: CfValue::Value(*c_f),
            },
            SpecKind::ExplicitQuantile(t) => SpecConfig::ExplicitQuantile {
                knots: t.knots().collect(),
            },
        }
    }
}

/// Serialized form of an [`Experiment`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spec: SpecConfig,
    pub n: usize,
    pub replicates: u64,
    pub quantity: Quantity,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub offspring_law: OffspringLaw,
}

impl ExperimentConfig {
    pub fn build(&self, default_seed: u64) -> Result<Experiment> {
        let e = Experiment {
            spec: self.spec.build()?,
            n: self.n,
            replicates: self.replicates,
            quantity: self.quantity,
            seed: self.seed.unwrap_or(default_seed),
            offspring_law: self.offspring_law,
        };
        e.validate()?;
        Ok(e)
    }
}
