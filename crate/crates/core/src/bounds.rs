//! Closed-form bound quantities: finite-n diagnostics, the `E(γ)` bound, the
//! stopped-walk cluster tail bound, the largest-component tail bound for
//! `τ > 4`, event thresholds, and the limiting mixed-Poisson degree law.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bp::GammaConfig;
use crate::dist::{exact_moments, DistributionSpec, SpecKind, WeightSequence};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, ln_factorial};
use crate::poisson;
use crate::quad::{integrate, integrate_power_tail};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticSet {
    pub nu_n: f64,
    /// `E[(W_n*)²] = Σ w_i³ / Σ w_i`.
    pub ew2_star: f64,
    pub w1: f64,
    /// `max(2H², E[(W_n*)²] + 1 - ν_n)`.
    pub b_h: f64,
    pub h: u64,
    pub h_prime: u64,
    pub k: u64,
}

pub fn diagnostics(ws: &WeightSequence, cfg: &GammaConfig) -> Result<DiagnosticSet> {
    cfg.validate()?;
    let (nu_n, ew2_star) = (ws.nu(), ws.ew2_star());
    let h = cfg.h as f64;
    Ok(DiagnosticSet {
        nu_n,
        ew2_star,
        w1: ws.max_weight(),
        b_h: (2.0 * h * h).max(ew2_star + 1.0 - nu_n),
        h: cfg.h,
        h_prime: cfg.h_prime,
        k: cfg.k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EGammaBound {
    Bound(f64),
    /// The bracket is not positive, so the inequality bounds nothing.
    Vacuous,
}

impl EGammaBound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            EGammaBound::Bound(v) => Some(v),
            EGammaBound::Vacuous => None,
        }
    }
}

/// Upper bound on `E(γ)`; the bracket depends on the sign of `1 - ν_n`.
pub fn egamma_upper(ds: &DiagnosticSet) -> EGammaBound {
    let h = ds.h as f64;
    let hp = ds.h_prime as f64;
    let numerator = h + 3.0 * ds.w1 + ds.w1 * ds.w1 / h;
    let boundary = 2.0 * ds.b_h / (ds.ew2_star * hp);
    let drift = if ds.nu_n <= 1.0 {
        (1.0 - ds.nu_n) * h / ds.ew2_star
    } else {
        (ds.nu_n - 1.0) * (numerator - 1.0) / ds.ew2_star
    };
    let bracket = 1.0 - drift - boundary;
    if bracket > 0.0 {
        EGammaBound::Bound(numerator / (ds.ew2_star * bracket))
    } else {
        EGammaBound::Vacuous
    }
}

/// `(1 - (1 - ν_n) E(γ)) / H + E(γ) / k`, an upper bound on `P(|C(V)| > k)`.
pub fn cluster_tail_upper(ds: &DiagnosticSet, egamma: f64) -> Result<f64> {
    if egamma.is_nan() || egamma < 1.0 {
        return Err(Error::Domain(format!("E(γ) is at least 1, got {egamma}")));
    }
    Ok((1.0 - (1.0 - ds.nu_n) * egamma) / ds.h as f64 + egamma / ds.k as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Bound {
    /// `2 ω^{-3/2} max(E(W)/E(W³), 1)`.
    pub leading: f64,
    /// The neglected factor is `1 + O(ω^{-1/2} n^{-e})` with `e` this exponent.
    pub correction_exponent: f64,
}

/// Leading term of the `P(|C_max| > ω n^{2/3})` bound for `τ > 4`.
pub fn theorem1_bound(spec: &DistributionSpec, omega: f64) -> Result<Theorem1Bound> {
    if !(omega > 1.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must exceed 1, got {omega}")));
    }
    let m = exact_moments(spec);
    if !m.ew3.is_finite() {
        return Err(Error::Domain("the bound needs a finite third moment (tau > 4)".into()));
    }
    let tau = spec.tau().unwrap_or(f64::INFINITY);
    let correction_exponent = if tau.is_finite() {
        (tau - 4.0) / (3.0 * (tau - 1.0))
    } else {
        1.0 / 3.0
    };
    Ok(Theorem1Bound {
        leading: 2.0 * omega.powf(-1.5) * (m.ew / m.ew3).max(1.0),
        correction_exponent,
    })
}

/// `⌊x⌋`, treating values within rounding error of an integer as that integer.
fn floor_snapped(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// `⌊ω n^{2/3}⌋`: `|C_max| > ω n^{2/3}` iff `|C_max|` exceeds this integer.
pub fn theorem1_threshold(n: usize, omega: f64) -> Result<usize> {
    if !(omega > 1.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must exceed 1, got {omega}")));
    }
    Ok(floor_snapped(omega * (n as f64).powf(2.0 / 3.0)))
}

/// `⌊ω n^{(τ-2)/(τ-1)}⌋` for `τ ∈ (3, 4)`.
pub fn theorem2_threshold(n: usize, tau: f64, omega: f64) -> Result<usize> {
    if !(tau > 3.0 && tau < 4.0) {
        return Err(Error::Domain(format!("tau must lie in (3, 4), got {tau}")));
    }
    if !(omega > 1.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must exceed 1, got {omega}")));
    }
    Ok(floor_snapped(omega * (n as f64).powf((tau - 2.0) / (tau - 1.0))))
}

/// `H = ⌊ω^{1/2} n^{1/3}⌋` (at least 1), the choice for `τ > 4`.
pub fn default_h_light_tail(n: usize, omega: f64) -> u64 {
    ((omega.sqrt() * (n as f64).cbrt()).floor() as u64).max(1)
}

/// `H = ⌊δ n^{1/(τ-1)}⌋` (at least 1), the choice for `τ ∈ (3, 4)`.
pub fn default_h_heavy_tail(n: usize, tau: f64, delta: f64) -> u64 {
    ((delta * (n as f64).powf(1.0 / (tau - 1.0))).floor() as u64).max(1)
}

pub const DEFAULT_DELTA: f64 = 0.1;

/// `H' = 100 H²`, so that `b_H / H'` stays small.
pub fn default_h_prime(h: u64) -> u64 {
    100 * h * h
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreePmf {
    /// `p_k = E[e^{-W} W^k / k!]` for `k = 0..=k_max`.
    pub p: Vec<f64>,
    /// `1 - Σ p_k`, the mass above `k_max` plus quadrature error.
    pub deficit: f64,
}

/// Limiting degree law: mixed Poisson with mixing distribution `F`.
pub fn degree_pmf(spec: &DistributionSpec, k_max: usize) -> DegreePmf {
    let p: Vec<f64> = match spec.kind() {
        SpecKind::ParetoTail { tau, c_f } => {
            let (tau, c_f) = (*tau, *c_f);
            let x_m = spec.pareto_scale().unwrap();
            let ln_density_const = ((tau - 1.0) * c_f).ln();
            (0..=k_max)
                .map(|k| {
                    let lk = ln_factorial(k as u64);
                    // density (τ-1) c_F x^{-τ} times the Poisson(x) pmf at k, in logs.
                    let f = |x: f64| (ln_density_const - tau * x.ln() - x + k as f64 * x.ln() - lk).exp();
                    let mode = k as f64;
                    if mode > x_m {
                        integrate(f, x_m, mode, 1e-12, 0.0).value + integrate_power_tail(f, mode, 1e-12, 0.0).value
                    } else {
                        integrate_power_tail(f, x_m, 1e-12, 0.0).value
                    }
                })
                .collect()
        }
        SpecKind::ExplicitQuantile(t) => {
            let steps: Vec<(f64, f64)> = t.steps().collect();
            (0..=k_max)
                .map(|k| compensated_sum(steps.iter().map(|&(m, q)| m * poisson::pmf(q, k as u64))))
                .collect()
        }
    };
    let deficit = 1.0 - compensated_sum(p.iter().copied());
    DegreePmf { p, deficit }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub tau: f64,
    pub omega: f64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "Hprime")]
    pub h_prime: u64,
    pub k: u64,
    /// Empty when vacuous.
    pub bound: Option<f64>,
    pub source: String,
}

pub fn write_bound_table<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    wtr.write_record(["n", "tau", "omega", "H", "Hprime", "k", "bound", "source"])?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}
