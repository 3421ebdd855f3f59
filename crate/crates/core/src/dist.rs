//! Weight distributions, the generalized-inverse weight construction, and the
//! size-biased mark law.
//!
//! A [`DistributionSpec`] describes the law `F` of a vertex weight `W`. The
//! weight of vertex `j` (1-based) is `[1 - F]^{-1}(j / n)`, where the
//! generalized inverse is `inf { s : 1 - F(s) <= u }` for `u < 1` and is 0 at
//! `u = 1`. With 0-based storage, `w[i]` is the weight of vertex `i + 1`.

use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alias::AliasTable;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Tabulated `[1 - F]^{-1}` as a left-continuous step function: the value at
/// `u` is `values[i]` for the first knot `u_knots[i] >= u`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantileTable {
    u_knots: Vec<f64>,
    values: Vec<f64>,
}

impl QuantileTable {
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u_knots.iter().copied().zip(self.values.iter().copied())
    }

    /// Probability mass carried by each step, paired with its value.
    pub fn steps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mut prev = 0.0;
        self.knots().map(move |(u, q)| {
            let mass = u - prev;
            prev = u;
            (mass, q)
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecKind {
    /// `1 - F(x) = min(1, c_F x^{-(τ-1)})`.
    ParetoTail {
        tau: f64,
        c_f: f64,
    },
    ExplicitQuantile(QuantileTable),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSpec {
    kind: SpecKind,
}

impl DistributionSpec {
    pub fn pareto(tau: f64, c_f: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 3.0) {
            return Err(Error::InvalidSpec(format!("tau must exceed 3, got {tau}")));
        }
        if !(c_f.is_finite() && c_f > 0.0) {
            return Err(Error::InvalidSpec(format!("c_F must be positive, got {c_f}")));
        }
        Ok(Self {
            kind: SpecKind::ParetoTail { tau, c_f },
        })
    }

    /// Pareto tail with `c_F` chosen so that `E(W^2) / E(W) = 1`.
    pub fn critical_pareto(tau: f64) -> Result<Self> {
        Self::pareto(tau, critical_cf(tau)?)
    }

    /// Knots `(u, value)` with `u` strictly increasing in `(0, 1]`, ending at
    /// `u = 1`, and values non-increasing and non-negative.
    pub fn explicit_quantile(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidSpec("quantile table is empty".into()));
        }
        let mut prev_u = 0.0;
        let mut prev_q = f64::INFINITY;
        for &(u, q) in &knots {
            if !(u > prev_u && u <= 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "quantile knots must be strictly increasing in (0, 1], got u = {u} after {prev_u}"
                )));
            }
            if !(q.is_finite() && q >= 0.0 && q <= prev_q) {
                return Err(Error::InvalidSpec(format!(
                    "quantile values must be finite, non-negative and non-increasing, got {q} after {prev_q}"
                )));
            }
            prev_u = u;
            prev_q = q;
        }
        if prev_u != 1.0 {
            return Err(Error::InvalidSpec("last quantile knot must sit at u = 1".into()));
        }
        let (u_knots, values) = knots.into_iter().unzip();
        Ok(Self {
            kind: SpecKind::ExplicitQuantile(QuantileTable { u_knots, values }),
        })
    }

    pub fn kind(&self) -> &SpecKind {
        &self.kind
    }

    pub fn tau(&self) -> Option<f64> {
        match self.kind {
            SpecKind::ParetoTail { tau, .. } => Some(tau),
            SpecKind::ExplicitQuantile(_) => None,
        }
    }

    /// `x_m = c_F^{1/(τ-1)}`, the point below which a Pareto `F` vanishes.
    pub fn pareto_scale(&self) -> Option<f64> {
        match self.kind {
            SpecKind::ParetoTail { tau, c_f } => Some(c_f.powf(1.0 / (tau - 1.0))),
            SpecKind::ExplicitQuantile(_) => None,
        }
    }

    /// `1 - F(x) = P(W > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match &self.kind {
            SpecKind::ParetoTail { tau, c_f } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (c_f * x.powf(-(tau - 1.0))).min(1.0)
                }
            }
            SpecKind::ExplicitQuantile(t) => {
                // W = q(U): P(q(U) > x) is the largest knot whose value exceeds x.
                let idx = t.values.partition_point(|&q| q > x);
                if idx == 0 {
                    0.0
                } else {
                    t.u_knots[idx - 1]
                }
            }
        }
    }

    /// `[1 - F]^{-1}(u)` for `u` in `(0, 1]`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1], got {u}")));
        }
        if u == 1.0 {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            SpecKind::ParetoTail { tau, c_f } => {
                let x_m = c_f.powf(1.0 / (tau - 1.0));
                (c_f / u).powf(1.0 / (tau - 1.0)).max(x_m)
            }
            SpecKind::ExplicitQuantile(t) => {
                let idx = t.u_knots.partition_point(|&k| k < u);
                t.values[idx]
            }
        })
    }
}

pub fn quantile(spec: &DistributionSpec, u: f64) -> Result<f64> {
    spec.quantile(u)
}

/// The unique `c_F = ((τ-3)/(τ-2))^{τ-1}` making a Pareto tail critical.
pub fn critical_cf(tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 3.0) {
        return Err(Error::Domain(format!("tau must exceed 3, got {tau}")));
    }
    Ok(((tau - 3.0) / (tau - 2.0)).powf(tau - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub ew: f64,
    pub ew2: f64,
    /// `+inf` when the third moment diverges (`τ <= 4`).
    pub ew3: f64,
    pub nu: f64,
}

pub fn exact_moments(spec: &DistributionSpec) -> MomentSet {
    match &spec.kind {
        SpecKind::ParetoTail { tau, .. } => {
            let tau = *tau;
            let x_m = spec.pareto_scale().unwrap();
            let ew = x_m * (tau - 1.0) / (tau - 2.0);
            let ew2 = x_m * x_m * (tau - 1.0) / (tau - 3.0);
            let ew3 = if tau > 4.0 {
                x_m.powi(3) * (tau - 1.0) / (tau - 4.0)
            } else {
                f64::INFINITY
            };
            MomentSet {
                ew,
                ew2,
                ew3,
                nu: ew2 / ew,
            }
        }
        SpecKind::ExplicitQuantile(t) => {
            // W = q(U) with q a step function, so each moment is a finite sum.
            let moment = |k: i32| compensated_sum(t.steps().map(|(m, q)| m * q.powi(k)));
            let (ew, ew2, ew3) = (moment(1), moment(2), moment(3));
            MomentSet {
                ew,
                ew2,
                ew3,
                nu: ew2 / ew,
            }
        }
    }
}

/// Descending vertex weights with cached power sums.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    w: Vec<f64>,
    l_n: f64,
    m2: f64,
    m3: f64,
}

impl WeightSequence {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeights("weight sequence is empty".into()));
        }
        if w.len() > u32::MAX as usize {
            return Err(Error::InvalidWeights("more vertices than u32 labels".into()));
        }
        if let Some(bad) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and non-negative, found {bad}"
            )));
        }
        if let Some(i) = w.windows(2).position(|p| p[0] < p[1]) {
            return Err(Error::InvalidWeights(format!(
                "weights must be non-increasing; w[{i}] = {} < w[{}] = {}",
                w[i],
                i + 1,
                w[i + 1]
            )));
        }
        let l_n = compensated_sum(w.iter().copied());
        if l_n <= 0.0 {
            return Err(Error::InvalidWeights("total weight must be positive".into()));
        }
        let m2 = compensated_sum(w.iter().map(|x| x * x));
        let m3 = compensated_sum(w.iter().map(|x| x * x * x));
        Ok(Self { w, l_n, m2, m3 })
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn total(&self) -> f64 {
        self.l_n
    }

    pub fn sum_squares(&self) -> f64 {
        self.m2
    }

    pub fn sum_cubes(&self) -> f64 {
        self.m3
    }

    /// `ν_n = Σ w_i² / Σ w_i`, the mean of the size-biased weight.
    pub fn nu(&self) -> f64 {
        self.m2 / self.l_n
    }

    /// `E[(W_n^*)^2] = Σ w_i³ / Σ w_i`.
    pub fn ew2_star(&self) -> f64 {
        self.m3 / self.l_n
    }

    pub fn max_weight(&self) -> f64 {
        self.w[0]
    }

    /// Edge probability `1 - exp(-w_i w_j / l_n)` for distinct `i`, `j`.
    #[inline]
    pub fn edge_probability(&self, i: usize, j: usize) -> f64 {
        -(-self.w[i] * self.w[j] / self.l_n).exp_m1()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["index", "weight"])?;
        for (i, w) in self.w.iter().enumerate() {
            wtr.write_record([i.to_string(), w.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["index", "weight"] {
            return Err(Error::InvalidWeights(format!(
                "expected header `index,weight`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut w = Vec::new();
        for (row, rec) in rdr.deserialize::<(usize, f64)>().enumerate() {
            let (idx, weight) = rec?;
            if idx != row {
                return Err(Error::InvalidWeights(format!(
                    "row {row} carries index {idx}; indices must be 0, 1, 2, ..."
                )));
            }
            w.push(weight);
        }
        Self::new(w)
    }
}

/// `w_j = [1 - F]^{-1}(j / n)` for `j = 1..=n`. The last weight is always 0.
pub fn build_weights(spec: &DistributionSpec, n: usize) -> Result<WeightSequence> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 vertices, got {n}")));
    }
    let w = (1..=n)
        .map(|j| spec.quantile(j as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    WeightSequence::new(w)
}

/// `F_n(x) = #{i : w_i <= x} / n`.
pub fn empirical_df(ws: &WeightSequence, x: f64) -> f64 {
    let above = ws.w.partition_point(|&w| w > x);
    (ws.n() - above) as f64 / ws.n() as f64
}

/// Draws marks `M` with `P(M = m) = w_m / l_n`; `w_M` is then distributed as
/// the size-biased weight `W_n^*`.
#[derive(Clone, Debug)]
pub struct MarkSampler {
    table: AliasTable,
}

impl MarkSampler {
    pub fn new(ws: &WeightSequence) -> Result<Self> {
        Ok(Self {
            table: AliasTable::new(ws.weights())?,
        })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.table.sample(rng)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.table.probabilities()
    }
}

pub fn size_biased_sampler(ws: &WeightSequence) -> Result<MarkSampler> {
    MarkSampler::new(ws)
}

/// Finite-n distance from the limiting criticality parameters, scaled by the
/// rates at which they are expected to close.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceGaps {
    pub n: usize,
    pub nu_n: f64,
    /// `|ν_n - ν| · n^{(τ-3)/(τ-1)}`.
    pub nu_gap_scaled: f64,
    /// `|Σw³/Σw - E(W³)/E(W)| · n^{(τ-4)/(τ-1)}`, only for `τ > 4`.
    pub third_gap_scaled: Option<f64>,
}

pub fn convergence_gaps(spec: &DistributionSpec, n: usize) -> Result<ConvergenceGaps> {
    let tau = spec
        .tau()
        .ok_or_else(|| Error::InvalidSpec("convergence rates need a Pareto tail".into()))?;
    let ws = build_weights(spec, n)?;
    let m = exact_moments(spec);
    let nf = n as f64;
    let nu_gap_scaled = (ws.nu() - m.nu).abs() * nf.powf((tau - 3.0) / (tau - 1.0));
    let third_gap_scaled =
        (tau > 4.0).then(|| (ws.ew2_star() - m.ew3 / m.ew).abs() * nf.powf((tau - 4.0) / (tau - 1.0)));
    Ok(ConvergenceGaps {
        n,
        nu_n: ws.nu(),
        nu_gap_scaled,
        third_gap_scaled,
    })
}

/// Smallest `n0` in `2..=n_max` such that `ν_n < 1` for every `n` in
/// `n0..=n_max`, or `None` if `ν_{n_max} >= 1`.
pub fn subcritical_onset(spec: &DistributionSpec, n_max: usize) -> Result<Option<usize>> {
    let mut onset = None;
    for n in (2..=n_max).rev() {
        if build_weights(spec, n)?.nu() < 1.0 {
            onset = Some(n);
        } else {
            break;
        }
    }
    Ok(onset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_power_tail};
    use crate::rng::RngContract;
    use proptest::prelude::*;

    /// Independent route to `[1-F]^{-1}(u)`: bisection for the infimum of
    /// `{ s >= 0 : S(s) <= u }` using only the survival function.
    fn bisect_quantile(spec: &DistributionSpec, u: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while spec.survival(hi) > u {
            hi *= 2.0;
        }
        if spec.survival(lo) <= u {
            return lo;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if spec.survival(mid) <= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `E[W^k] = ∫ k x^{k-1} S(x) dx`, by quadrature.
    fn quadrature_moment(spec: &DistributionSpec, k: i32) -> f64 {
        let x_m = spec.pareto_scale().unwrap();
        let f = |x: f64| k as f64 * x.powi(k - 1) * spec.survival(x);
        integrate(f, 0.0, x_m, 1e-13, 0.0).value + integrate_power_tail(f, x_m, 1e-13, 0.0).value
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn quantile_examples() {
        let s = DistributionSpec::pareto(3.5, 1.0).unwrap();
        let q = s.quantile(0.5).unwrap();
        assert!(close(q, 2f64.powf(0.4), 1e-14));
        assert!(close(q, 1.319_507_910_772_894, 1e-12));
        assert!(close(bisect_quantile(&s, 0.5), q, 1e-9));

        assert_eq!(s.quantile(1.0).unwrap(), 0.0);
        let e = DistributionSpec::explicit_quantile(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(e.quantile(1.0).unwrap(), 0.0);

        // (c_F / u)^{1/(τ-1)} never drops below x_m for u < 1, so no clamping occurs.
        let s5 = DistributionSpec::pareto(5.0, (2.0f64 / 3.0).powi(4)).unwrap();
        let q = s5.quantile(0.9).unwrap();
        assert!(close(q, bisect_quantile(&s5, 0.9), 1e-9));
        assert!(close(q, 0.684_460_064_053_560_6, 1e-12));
        assert!(q > 2.0 / 3.0);
    }

    #[test]
    fn quantile_domain() {
        let s = DistributionSpec::pareto(3.5, 1.0).unwrap();
        for u in [0.0, -0.1, 1.0000001, f64::NAN] {
            assert!(matches!(s.quantile(u), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(DistributionSpec::pareto(3.0, 1.0).is_err());
        assert!(DistributionSpec::pareto(2.5, 1.0).is_err());
        assert!(DistributionSpec::pareto(4.0, 0.0).is_err());
        assert!(DistributionSpec::explicit_quantile(vec![(0.5, 1.0)]).is_err());
        assert!(DistributionSpec::explicit_quantile(vec![(0.5, 1.0), (1.0, 2.0)]).is_err());
        assert!(DistributionSpec::explicit_quantile(vec![(0.5, 1.0), (0.5, 1.0), (1.0, 0.5)]).is_err());
        assert!(critical_cf(3.0).is_err());
    }

    #[test]
    fn build_weights_examples() {
        let s = DistributionSpec::pareto(3.5, 1.0).unwrap();
        let ws = build_weights(&s, 4).unwrap();
        let want = [4f64.powf(0.4), 2f64.powf(0.4), (4.0f64 / 3.0).powf(0.4), 0.0];
        for (i, (got, want)) in ws.weights().iter().zip(want).enumerate() {
            assert!(close(*got, want, 1e-14), "w[{i}] = {got}, want {want}");
            if i < 3 {
                assert!(close(*got, bisect_quantile(&s, (i + 1) as f64 / 4.0), 1e-9));
            }
        }
        assert!(close(ws.weights()[0], 1.741_101_126_592_248, 1e-12));

        let unit = DistributionSpec::explicit_quantile(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(build_weights(&unit, 2).unwrap().weights(), &[1.0, 0.0]);

        let s5 = DistributionSpec::pareto(5.0, (2.0f64 / 3.0).powi(4)).unwrap();
        let ws = build_weights(&s5, 1000).unwrap();
        assert!(close(ws.max_weight(), 3.748_942_167_935_660_5, 1e-12));
        assert!(close(ws.max_weight() / 1000f64.powf(0.25), 2.0 / 3.0, 1e-12));

        assert!(matches!(build_weights(&s, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_moments_examples() {
        let s5 = DistributionSpec::critical_pareto(5.0).unwrap();
        let m = exact_moments(&s5);
        assert!(close(m.ew, 8.0 / 9.0, 1e-14));
        assert!(close(m.ew2, 8.0 / 9.0, 1e-14));
        assert!(close(m.ew3, 32.0 / 27.0, 1e-14));
        assert!((m.nu - 1.0).abs() < 1e-12);
        for (k, want) in [(1, m.ew), (2, m.ew2), (3, m.ew3)] {
            assert!(close(quadrature_moment(&s5, k), want, 1e-10), "k={k}");
        }

        assert_eq!(
            exact_moments(&DistributionSpec::pareto(3.5, 0.3).unwrap()).ew3,
            f64::INFINITY
        );

        let s = DistributionSpec::pareto(5.0, 1.0).unwrap();
        let m = exact_moments(&s);
        assert!(close(m.nu, 1.5, 1e-14));
        let nu_quad = quadrature_moment(&s, 2) / quadrature_moment(&s, 1);
        assert!(close(nu_quad, 1.5, 1e-10));
    }

    #[test]
    fn explicit_quantile_moments_are_step_sums() {
        let s = DistributionSpec::explicit_quantile(vec![(0.25, 3.0), (0.5, 2.0), (1.0, 1.0)]).unwrap();
        let m = exact_moments(&s);
        assert!(close(m.ew, 0.75 + 0.5 + 0.5, 1e-15));
        assert!(close(m.ew2, 2.25 + 1.0 + 0.5, 1e-15));
        assert!(close(s.survival(1.5), 0.5, 0.0));
        assert!(close(s.survival(2.5), 0.25, 0.0));
        assert_eq!(s.survival(3.0), 0.0);
        assert_eq!(s.quantile(0.25).unwrap(), 3.0);
        assert_eq!(s.quantile(0.2500001).unwrap(), 2.0);
    }

    #[test]
    fn critical_cf_examples_match_root_solve() {
        // Oracle: bisection on c_F for ν(c_F) = 1 with ν from quadrature moments.
        let root = |tau: f64| {
            let nu = |c: f64| {
                let s = DistributionSpec::pareto(tau, c).unwrap();
                quadrature_moment(&s, 2) / quadrature_moment(&s, 1)
            };
            let (mut lo, mut hi) = (1e-6, 1.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if nu(mid) < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        for (tau, want) in [(3.5, 0.064_150_029_909_958_3), (5.0, 16.0 / 81.0), (4.0, 0.125)] {
            let got = critical_cf(tau).unwrap();
            assert!(close(got, want, 1e-12), "tau={tau}: {got}");
            assert!(close(root(tau), got, 1e-8), "tau={tau}");
        }
    }

    #[test]
    fn empirical_df_examples() {
        let ws = WeightSequence::new(vec![2.0, 1.0, 1.0]).unwrap();
        assert!(close(empirical_df(&ws, 1.0), 2.0 / 3.0, 1e-15));
        assert_eq!(empirical_df(&ws, 0.5), 0.0);
        assert_eq!(empirical_df(&ws, 2.0), 1.0);
    }

    #[test]
    fn size_biased_examples() {
        let ws = WeightSequence::new(vec![2.0, 1.0, 1.0]).unwrap();
        let m = size_biased_sampler(&ws).unwrap();
        for (p, want) in m.probabilities().iter().zip([0.5, 0.25, 0.25]) {
            assert!(close(*p, want, 1e-15));
        }
        let ws2 = WeightSequence::new(vec![1.0, 1.0]).unwrap();
        for p in size_biased_sampler(&ws2).unwrap().probabilities() {
            assert!(close(p, 0.5, 1e-15));
        }

        // E[w_M] = ν_n = 1.5; Var[w_M] = E[w_M²] - ν² = 2.5 - 2.25.
        assert!(close(ws.nu(), 1.5, 1e-15));
        let mut rng = RngContract::new(2024, 0).rng();
        let r = 1_000_000;
        let mean = (0..r).map(|_| ws.weights()[m.sample(&mut rng)]).sum::<f64>() / r as f64;
        let se = (0.25f64 / r as f64).sqrt();
        assert!((mean - 1.5).abs() < 3.0 * se, "mean {mean}");

        assert!(WeightSequence::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn nu_identity_uses_same_sums() {
        let ws = build_weights(&DistributionSpec::critical_pareto(3.5).unwrap(), 500).unwrap();
        let p = size_biased_sampler(&ws).unwrap().probabilities();
        let mean: f64 = p.iter().zip(ws.weights()).map(|(p, w)| p * w).sum();
        assert!(close(mean, ws.nu(), 1e-12));
    }

    #[test]
    fn cached_sums_match_recomputation() {
        let ws = build_weights(&DistributionSpec::critical_pareto(3.5).unwrap(), 10_000).unwrap();
        let naive: f64 = ws.weights().iter().rev().sum();
        assert!((ws.total() - naive).abs() <= 8.0 * f64::EPSILON * ws.total() + 1e-9);
        let recomputed = compensated_sum(ws.weights().iter().rev().copied());
        assert!((ws.total() - recomputed).abs() <= 8.0 * f64::EPSILON * ws.total());
    }

    #[test]
    fn weights_validation() {
        assert!(WeightSequence::new(vec![]).is_err());
        assert!(WeightSequence::new(vec![1.0, 2.0]).is_err());
        assert!(WeightSequence::new(vec![1.0, -0.5]).is_err());
        assert!(WeightSequence::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let ws = build_weights(&DistributionSpec::critical_pareto(4.5).unwrap(), 7).unwrap();
        let mut buf = Vec::new();
        ws.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("index,weight\n0,"));
        assert_eq!(WeightSequence::read_csv(&buf[..]).unwrap(), ws);
        assert!(WeightSequence::read_csv(&b"index,weight\n1,2.0\n"[..]).is_err());
        assert!(WeightSequence::read_csv(&b"i,w\n0,2.0\n"[..]).is_err());
    }

    #[test]
    fn subcritical_onset_for_heavy_tail() {
        let s = DistributionSpec::critical_pareto(3.5).unwrap();
        let onset = subcritical_onset(&s, 400).unwrap();
        assert_eq!(onset, Some(2));
        for n in [100, 1000, 10_000, 100_000] {
            assert!(build_weights(&s, n).unwrap().nu() < 1.0);
        }
    }

    proptest! {
        #[test]
        fn weights_monotone(tau in 3.05f64..8.0, c_f in 0.01f64..5.0, n in 2usize..400) {
            let ws = build_weights(&DistributionSpec::pareto(tau, c_f).unwrap(), n).unwrap();
            prop_assert!(ws.weights().windows(2).all(|p| p[0] >= p[1]));
            prop_assert_eq!(*ws.weights().last().unwrap(), 0.0);
        }

        #[test]
        fn quantile_is_infimum(tau in 3.05f64..8.0, c_f in 0.01f64..5.0, u in 1e-6f64..0.999_999) {
            let s = DistributionSpec::pareto(tau, c_f).unwrap();
            let q = s.quantile(u).unwrap();
            prop_assert!(s.survival(q) <= u * (1.0 + 1e-12));
            let b = bisect_quantile(&s, u);
            prop_assert!((q - b).abs() <= 1e-9 * q.max(1e-12));
        }
    }
}
