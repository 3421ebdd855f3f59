//! Exact laws at tiny `n` by enumerating every edge subset under the product
//! measure.
//!
//! Graphs on `n` vertices are indexed by a bitmask over the `n(n-1)/2` pairs
//! taken in lexicographic order `(0,1), (0,2), …, (n-2,n-1)`.

use std::collections::BTreeMap;
use std::io::Write;

use crate::dist::WeightSequence;
use crate::error::{Error, Result};
use crate::explore::UnionFind;
use crate::numeric::Neumaier;
use crate::sampler::GraphSample;

pub const MAX_ORACLE_N: usize = 6;

/// A law on non-negative integers with strictly increasing support.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLaw {
    pub support: Vec<usize>,
    pub probs: Vec<f64>,
}

impl ExactLaw {
    fn from_bins(bins: BTreeMap<usize, Neumaier>) -> Self {
        let (support, probs) = bins.into_iter().map(|(v, acc)| (v, acc.value())).unzip();
        Self { support, probs }
    }

    pub fn prob(&self, v: usize) -> f64 {
        self.support.binary_search(&v).map(|i| self.probs[i]).unwrap_or(0.0)
    }

    /// `P(X > k)`.
    pub fn tail(&self, k: usize) -> f64 {
        let start = self.support.partition_point(|&v| v <= k);
        self.probs[start..].iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Total-variation distance to the empirical law given by `counts`.
    pub fn tv_from_counts(&self, counts: &BTreeMap<usize, u64>) -> f64 {
        let r: u64 = counts.values().sum();
        let mut keys: Vec<usize> = self.support.clone();
        keys.extend(counts.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|v| (self.prob(v) - *counts.get(&v).unwrap_or(&0) as f64 / r as f64).abs())
            .sum::<f64>()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["value", "prob"])?;
        for (v, p) in self.support.iter().zip(&self.probs) {
            wtr.write_record([v.to_string(), format!("{p:e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn check_size(ws: &WeightSequence) -> Result<()> {
    if ws.n() > MAX_ORACLE_N {
        return Err(Error::Refused(format!(
            "exact enumeration is capped at n = {MAX_ORACLE_N} (2^15 graphs); got n = {}",
            ws.n()
        )));
    }
    Ok(())
}

/// Vertex pairs in the order used for graph masks.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Bitmask of `g` over [`pairs`]`(g.n())`; requires `g.n() <= 6`.
pub fn graph_mask(g: &GraphSample) -> usize {
    debug_assert!(g.n() <= MAX_ORACLE_N);
    let n = g.n();
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (u, v) = (u as usize, v as usize);
            // Index of (u, v) in lexicographic order.
            let before = u * n - u * (u + 1) / 2;
            1usize << (before + v - u - 1)
        })
        .sum()
}

/// Symmetric matrix of edge probabilities with a zero diagonal.
pub fn exact_edge_marginals(ws: &WeightSequence) -> Result<Vec<Vec<f64>>> {
    check_size(ws)?;
    let n = ws.n();
    let mut p = vec![vec![0.0; n]; n];
    for (i, j) in pairs(n) {
        let q = ws.edge_probability(i, j);
        p[i][j] = q;
        p[j][i] = q;
    }
    Ok(p)
}

/// Probability of each graph, indexed by [`graph_mask`].
pub fn exact_graph_law(ws: &WeightSequence) -> Result<Vec<f64>> {
    check_size(ws)?;
    let prs = pairs(ws.n());
    // ln p and ln(1 - p) = -w_i w_j / l_n per pair.
    let logs: Vec<(f64, f64)> = prs
        .iter()
        .map(|&(i, j)| {
            let x = ws.weights()[i] * ws.weights()[j] / ws.total();
            ((-(-x).exp_m1()).ln(), -x)
        })
        .collect();
    Ok((0..1usize << prs.len())
        .map(|mask| {
            let lp: f64 = logs
                .iter()
                .enumerate()
                .map(|(b, &(on, off))| if mask >> b & 1 == 1 { on } else { off })
                .sum();
            lp.exp()
        })
        .collect())
}

fn component_sizes(n: usize, prs: &[(usize, usize)], mask: usize) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for (b, &(i, j)) in prs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            uf.union(i, j);
        }
    }
    let mut size = vec![0usize; n];
    for v in 0..n {
        size[uf.find(v)] += 1;
    }
    size.retain(|&s| s > 0);
    size
}

/// Exact laws of `|C_max|` and of `|C(V)|` for `V` uniform on the vertices.
pub fn exact_component_laws(ws: &WeightSequence) -> Result<(ExactLaw, ExactLaw)> {
    let law = exact_graph_law(ws)?;
    let n = ws.n();
    let prs = pairs(n);
    let mut cmax: BTreeMap<usize, Neumaier> = BTreeMap::new();
    let mut cluster: BTreeMap<usize, Neumaier> = BTreeMap::new();
    for (mask, &p) in law.iter().enumerate() {
        let sizes = component_sizes(n, &prs, mask);
        cmax.entry(*sizes.iter().max().unwrap()).or_default().add(p);
        // A uniform vertex lands in a component of size s with probability s/n.
        for s in sizes {
            cluster.entry(s).or_default().add(p * s as f64 / n as f64);
        }
    }
    Ok((ExactLaw::from_bins(cmax), ExactLaw::from_bins(cluster)))
}
