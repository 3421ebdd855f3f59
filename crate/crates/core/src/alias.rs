//! Walker–Vose alias table for constant-time draws from a finite
//! distribution given by non-negative weights.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AliasTable {
    /// Probability of keeping column `i` rather than jumping to `alias[i]`.
    keep: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidWeights("alias table needs at least one weight".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidWeights("too many categories for the alias table".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(
                "alias weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = crate::numeric::compensated_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }

        let scale = n as f64 / total;
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let mut keep = vec![0.0; n];
        let mut alias: Vec<u32> = (0..n as u32).collect();
        let mut small = Vec::with_capacity(n);
        let mut large = Vec::with_capacity(n);
        for (i, &p) in scaled.iter().enumerate() {
            if p < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            keep[s] = scaled[s];
            alias[s] = l as u32;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for l in large {
            keep[l] = 1.0;
        }
        // Leftovers in `small` are rounding residue. A zero-weight category must
        // stay unreachable, so it points at the heaviest category instead.
        let heaviest = weights
            .iter()
            .enumerate()
            .fold(0usize, |best, (i, &w)| if w > weights[best] { i } else { best });
        for s in small {
            if weights[s] > 0.0 {
                keep[s] = 1.0;
            } else {
                keep[s] = 0.0;
                alias[s] = heaviest as u32;
            }
        }
        Ok(Self { keep, alias })
    }

    pub fn len(&self) -> usize {
        self.keep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keep.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.random_range(0..self.keep.len());
        let u: f64 = rng.random();
        if u < self.keep[i] {
            i
        } else {
            self.alias[i] as usize
        }
    }

    /// The distribution encoded by the table, reconstructed column by column.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut p = vec![0.0; self.len()];
        for (i, (&k, &a)) in self.keep.iter().zip(&self.alias).enumerate() {
            p[i] += k / n;
            p[a as usize] += (1.0 - k) / n;
        }
        p
    }
}
