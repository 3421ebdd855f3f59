//! Poisson variates and probabilities.
//!
//! Means below [`INVERSION_LIMIT`] are drawn by sequential inversion of the
//! CDF; larger means use Hörmann's transformed rejection with squeeze (PTRS).
//! Vertex weights grow like `n^{1/(τ-1)}` and the pair-event count of the
//! collapse sampler is `Poisson(l_n / 2)`, so both regimes are exercised.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

pub const INVERSION_LIMIT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Method {
    Zero,
    Inversion { exp_neg_lambda: f64 },
    Ptrs(Ptrs),
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Ptrs {
    lambda: f64,
    ln_lambda: f64,
    a: f64,
    b: f64,
    inv_alpha: f64,
    v_r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Poisson {
    lambda: f64,
    method: Method,
}

impl Poisson {
    /// `lambda` may be zero (the variate is then identically 0).
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Domain(format!(
                "Poisson mean must be finite and non-negative, got {lambda}"
            )));
        }
        let method = if lambda == 0.0 {
            Method::Zero
        } else if lambda < INVERSION_LIMIT {
            Method::Inversion {
                exp_neg_lambda: (-lambda).exp(),
            }
        } else {
            let b = 0.931 + 2.53 * lambda.sqrt();
            Method::Ptrs(Ptrs {
                lambda,
                ln_lambda: lambda.ln(),
                a: -0.059 + 0.02483 * b,
                b,
                inv_alpha: 1.1239 + 1.1328 / (b - 3.4),
                v_r: 0.9277 - 3.6224 / (b - 2.0),
            })
        };
        Ok(Self { lambda, method })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.method {
            Method::Zero => 0,
            Method::Inversion { exp_neg_lambda } => {
                let u: f64 = rng.random();
                let mut k = 0u64;
                let mut p = exp_neg_lambda;
                let mut cdf = p;
                // The loop guard only matters when u lands in the last ulp below 1.
                while u > cdf && k < 1000 {
                    k += 1;
                    p *= self.lambda / k as f64;
                    cdf += p;
                }
                k
            }
            Method::Ptrs(ref c) => c.sample(rng),
        }
    }
}

impl Ptrs {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        loop {
            let u: f64 = rng.random::<f64>() - 0.5;
            let v: f64 = rng.random();
            let us = 0.5 - u.abs();
            let k = ((2.0 * self.a / us + self.b) * u + self.lambda + 0.43).floor();
            if us >= 0.07 && v <= self.v_r {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = v.ln() + self.inv_alpha.ln() - (self.a / (us * us) + self.b).ln();
            let rhs = -self.lambda + k * self.ln_lambda - ln_factorial(k as u64);
            if lhs <= rhs {
                return k as u64;
            }
        }
    }
}

/// One-off draw for a mean that is not reused.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    Poisson::new(lambda)
        .expect("Poisson mean must be finite and non-negative")
        .sample(rng)
}

/// P(Y = k) for Y ~ Poisson(lambda).
pub fn pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp()
}

/// P(Y ≥ k) for Y ~ Poisson(lambda).
///
/// Summed from whichever side is the smaller tail, so values far below 1 keep
/// their relative accuracy.
pub fn upper_tail(lambda: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    if (k as f64) > lambda {
        let mut term = pmf(lambda, k);
        let mut sum = term;
        let mut j = k;
        loop {
            j += 1;
            term *= lambda / j as f64;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum.min(1.0)
    } else {
        let lower: f64 = (0..k).map(|j| pmf(lambda, j)).sum();
        (1.0 - lower).max(0.0)
    }
}
