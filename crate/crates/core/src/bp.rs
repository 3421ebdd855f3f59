//! The thinned marked mixed-Poisson branching process, the dominating
//! i.i.d. walk `S_t = 1 + Σ_{i≤t} (Υ_i - 1)`, and its stopping time `γ`.
//!
//! `γ` is the first `t` in `1..H'` with `S_t = 0` or `S_t >= H`, and `H'` when
//! no such `t` exists; in that case `S_{H'}` is drawn like any other step.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alias::AliasTable;
use crate::dist::WeightSequence;
use crate::error::{Error, Result};
use crate::poisson::{self, Poisson};

/// Source of i.i.d. walk increments `Υ_i`.
pub trait OffspringSource {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64;

    /// `Υ_1`. With `dominate` unset the source may use the exact first-step
    /// law of the exploration instead of its dominator.
    fn draw_first<R: Rng + ?Sized>(&self, rng: &mut R, dominate: bool) -> u64 {
        let _ = dominate;
        self.draw(rng)
    }
}

/// Mixed Poisson offspring with the size-biased weight `w_M` as parameter.
#[derive(Clone, Debug)]
pub struct MixedPoisson {
    marks: AliasTable,
    per_vertex: Vec<Poisson>,
    w1: f64,
}

impl MixedPoisson {
    pub fn new(ws: &WeightSequence) -> Result<Self> {
        Ok(Self {
            marks: AliasTable::new(ws.weights())?,
            per_vertex: ws.weights().iter().map(|&w| Poisson::new(w)).collect::<Result<_>>()?,
            w1: ws.max_weight(),
        })
    }

    pub fn n(&self) -> usize {
        self.per_vertex.len()
    }

    pub fn max_weight(&self) -> f64 {
        self.w1
    }

    #[inline]
    pub fn draw_mark<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.marks.sample(rng)
    }

    #[inline]
    pub fn poisson_at<R: Rng + ?Sized>(&self, vertex: usize, rng: &mut R) -> u64 {
        self.per_vertex[vertex].sample(rng)
    }
}

impl OffspringSource for MixedPoisson {
    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let m = self.draw_mark(rng);
        self.poisson_at(m, rng)
    }

    /// Without domination, `Υ_1 ~ Poisson(w_J)` with `J` uniform.
    fn draw_first<R: Rng + ?Sized>(&self, rng: &mut R, dominate: bool) -> u64 {
        if dominate {
            self.draw(rng)
        } else {
            let j = rng.random_range(0..self.n());
            self.poisson_at(j, rng)
        }
    }
}

/// Point mass; for exercising the walk logic.
#[derive(Clone, Copy, Debug)]
pub struct ConstantOffspring(pub u64);

impl OffspringSource for ConstantOffspring {
    fn draw<R: Rng + ?Sized>(&self, _rng: &mut R) -> u64 {
        self.0
    }
}

/// One `Υ` draw: a mark `M` with `P(M = m) = w_m / l_n`, then `Poisson(w_M)`.
pub fn sample_offspring<R: Rng + ?Sized>(source: &MixedPoisson, rng: &mut R) -> u64 {
    source.draw(rng)
}

/// Offspring parameter of the individual explored at step `t >= 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffspringLaw {
    /// `Poisson(w_m)` for the explored mark `m`. This is the law under which
    /// the explored marks at `T*` match the cluster of a uniform vertex.
    #[default]
    MarkWeight,
    /// `Poisson(w_M)` for a fresh, independent mark `M`.
    FreshMark,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpStep {
    /// `|M_t|`: children of the explored individual.
    pub offspring: u64,
    /// `|M̃_t|`: children whose mark was not seen before.
    pub new_marks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpTrace {
    pub initial_mark: usize,
    pub steps: Vec<BpStep>,
    /// First step at which no active marks remain; `None` when censored.
    pub t_star: Option<usize>,
    pub explored_marks: usize,
    pub censored: bool,
}

impl BpTrace {
    /// Whether `1 + Σ_{i≤t} (|M̃_i| - 1) > 0` for every `t <= k`.
    /// `None` when censoring hides the answer.
    pub fn thinned_positive_through(&self, k: usize) -> Option<bool> {
        match self.t_star {
            Some(t) => Some(t > k),
            None if self.steps.len() >= k => Some(true),
            None => None,
        }
    }

    /// Whether `1 + Σ_{i≤t} (|M_i| - 1) > 0` for every `t <= k`, from the
    /// unthinned counts. `None` when the trace is too short to tell.
    pub fn unthinned_positive_through(&self, k: usize) -> Option<bool> {
        let mut s: i64 = 1;
        for step in self.steps.iter().take(k) {
            s += step.offspring as i64 - 1;
            if s <= 0 {
                return Some(false);
            }
        }
        (self.steps.len() >= k).then_some(true)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["step", "value"])?;
        for (t, s) in self.steps.iter().enumerate() {
            wtr.write_record([(t + 1).to_string(), s.new_marks.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Runs the thinned marked branching process until the active marks run out
/// or `cap` marks have been explored.
pub fn run_marked_bp<R: Rng + ?Sized>(source: &MixedPoisson, rng: &mut R, cap: usize, law: OffspringLaw) -> BpTrace {
    assert!(cap >= 1, "censoring cap must be positive");
    let j0 = rng.random_range(0..source.n());
    let mut seen: HashSet<u32> = HashSet::from([j0 as u32]);
    let mut active: BTreeSet<u32> = BTreeSet::from([j0 as u32]);
    let mut steps = Vec::new();
    let mut t_star = None;
    while let Some(m) = active.pop_first() {
        let t = steps.len() + 1;
        let offspring = if t == 1 || law == OffspringLaw::MarkWeight {
            source.poisson_at(m as usize, rng)
        } else {
            source.draw(rng)
        };
        let mut new_marks = 0;
        for _ in 0..offspring {
            let j = source.draw_mark(rng) as u32;
            if seen.insert(j) {
                active.insert(j);
                new_marks += 1;
            }
        }
        steps.push(BpStep { offspring, new_marks });
        if active.is_empty() {
            t_star = Some(t);
            break;
        }
        if t == cap {
            break;
        }
    }
    BpTrace {
        initial_mark: j0,
        explored_marks: steps.len(),
        censored: t_star.is_none(),
        t_star,
        steps,
    }
}

/// Default censoring horizon `10 n`.
pub fn default_bp_cap(n: usize) -> usize {
    10 * n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaConfig {
    pub h: u64,
    pub h_prime: u64,
    pub k: u64,
}

impl GammaConfig {
    pub fn new(h: u64, h_prime: u64, k: u64) -> Result<Self> {
        let cfg = Self { h, h_prime, k };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h < 1 || self.k < 1 || self.h_prime < self.k {
            return Err(Error::Domain(format!(
                "need H >= 1 and H' >= k >= 1; got H = {}, H' = {}, k = {}",
                self.h, self.h_prime, self.k
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WalkPath {
    /// `Υ_1, Υ_2, …`; empty unless recorded.
    pub upsilon: Vec<u64>,
    /// `S_0 = 1, S_1, …`; empty unless recorded.
    pub s: Vec<i64>,
    pub gamma: u64,
    pub s_gamma: i64,
    /// `Σ_{t<γ} S_t`.
    pub sum_s_before_gamma: i64,
    /// `S_t > 0` for every `t <= k`.
    pub positive_through_k: bool,
    /// Steps simulated, which is at least `γ`.
    pub steps: u64,
}

/// Simulates the walk until both `γ` and the positivity of `S_1..S_k` are
/// decided.
pub fn run_walk<S: OffspringSource, R: Rng + ?Sized>(
    source: &S,
    cfg: &GammaConfig,
    rng: &mut R,
    dominate_first_step: bool,
    record: bool,
) -> WalkPath {
    let (h, hp) = (cfg.h as i64, cfg.h_prime);
    let mut path = WalkPath {
        positive_through_k: true,
        ..WalkPath::default()
    };
    if record {
        path.s.push(1);
    }
    let mut s: i64 = 1;
    let mut gamma: Option<u64> = None;
    let mut sum_before: i64 = 0;
    let mut t: u64 = 0;
    loop {
        if gamma.is_none() {
            sum_before += s;
        }
        t += 1;
        let y = if t == 1 {
            source.draw_first(rng, dominate_first_step)
        } else {
            source.draw(rng)
        };
        s += y as i64 - 1;
        if record {
            path.upsilon.push(y);
            path.s.push(s);
        }
        if gamma.is_none() && ((t < hp && (s == 0 || s >= h)) || t == hp) {
            gamma = Some(t);
            path.s_gamma = s;
            path.sum_s_before_gamma = sum_before;
        }
        if s <= 0 && t <= cfg.k {
            path.positive_through_k = false;
        }
        let k_decided = t >= cfg.k || !path.positive_through_k;
        if gamma.is_some() && k_decided {
            break;
        }
    }
    path.gamma = gamma.unwrap();
    path.steps = t;
    path
}

impl WalkPath {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["step", "value"])?;
        for (t, s) in self.s.iter().enumerate() {
            wtr.write_record([t.to_string(), s.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `M_γ - M_0` for `M_t = S_t² + t[ν_n - 1 - E((W_n*)²)] - 2(ν_n - 1) Σ_{j<t} S_j`.
pub fn martingale_residual(ws: &WeightSequence, path: &WalkPath) -> f64 {
    let nu = ws.nu();
    let sg = path.s_gamma as f64;
    sg * sg - 1.0 + path.gamma as f64 * (nu - 1.0 - ws.ew2_star()) - 2.0 * (nu - 1.0) * path.sum_s_before_gamma as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvershootTail {
    pub replicates: u64,
    /// Replicates with `S_γ >= H`.
    pub conditioning_events: u64,
    /// `P̂(S_γ - H >= k | S_γ >= H)` for `k = 0..=k_max`; empty without
    /// conditioning events.
    pub empirical: Vec<f64>,
    /// `P(Y >= k)` for `Y ~ Poisson(w_1)`.
    pub poisson_tail: Vec<f64>,
}

/// Counts of `S_γ - H` over replicates with `S_γ >= H`, binned at `0..=k_max`
/// (the last bin collects everything above).
pub fn overshoot_counts<S: OffspringSource, R: Rng + ?Sized>(
    source: &S,
    cfg: &GammaConfig,
    rng: &mut R,
    replicates: u64,
    k_max: usize,
) -> Vec<u64> {
    let mut hist = vec![0u64; k_max + 1];
    let walk_cfg = GammaConfig { k: 1, ..*cfg };
    for _ in 0..replicates {
        let p = run_walk(source, &walk_cfg, rng, true, false);
        if p.s_gamma >= cfg.h as i64 {
            hist[((p.s_gamma - cfg.h as i64) as usize).min(k_max)] += 1;
        }
    }
    hist
}

/// Turns overshoot counts into the conditional tail paired with the
/// `Poisson(w_1)` tail.
pub fn overshoot_tail(hist: &[u64], replicates: u64, w1: f64) -> OvershootTail {
    let events: u64 = hist.iter().sum();
    let k_max = hist.len() - 1;
    let empirical = if events == 0 {
        Vec::new()
    } else {
        (0..=k_max)
            .map(|k| hist[k..].iter().sum::<u64>() as f64 / events as f64)
            .collect()
    };
    OvershootTail {
        replicates,
        conditioning_events: events,
        empirical,
        poisson_tail: (0..=k_max).map(|k| poisson::upper_tail(w1, k as u64)).collect(),
    }
}

pub fn overshoot_conditional<R: Rng + ?Sized>(
    source: &MixedPoisson,
    cfg: &GammaConfig,
    rng: &mut R,
    replicates: u64,
    k_max: usize,
) -> OvershootTail {
    let hist = overshoot_counts(source, cfg, rng, replicates, k_max);
    overshoot_tail(&hist, replicates, source.max_weight())
}
