//! Sampling `NR_n(w)`: edge `{i, j}` is present independently with probability
//! `1 - exp(-w_i w_j / l_n)`.
//!
//! Two mechanisms produce the same law. [`sample_naive`] flips one coin per
//! pair. [`sample_poisson_collapse`] throws `K ~ Poisson(l_n / 2)` ordered
//! pairs with i.i.d. endpoints from the mark law `w_m / l_n`, drops self-loops
//! and merges repeats; the multiplicity of `{i, j}` is then
//! `Poisson(w_i w_j / l_n)`, so presence has exactly the target probability.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alias::AliasTable;
use crate::dist::WeightSequence;
use crate::error::{Error, Result};
use crate::poisson::Poisson;
use crate::rng::RngContract;

/// Largest `n` accepted by [`sample_naive`] without the override flag.
pub const NAIVE_MAX_N: usize = 10_000;

const BINARY_MAGIC: &[u8; 4] = b"NRG1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    Naive,
    PoissonCollapse,
    /// Read from a file; provenance unknown.
    Imported,
}

/// A simple graph on `0..n` as a sorted list of pairs `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSample {
    n: usize,
    edges: Vec<(u32, u32)>,
    pub method: SampleMethod,
    pub rng: Option<RngContract>,
    /// Pair events with equal endpoints dropped by the collapse sampler.
    pub self_loops_discarded: u64,
}

impl GraphSample {
    /// Canonicalizes, sorts and deduplicates `edges`; rejects self-loops and
    /// endpoints outside `0..n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("vertex count {n} out of range")));
        }
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) leaves 0..{n}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self {
            n,
            edges: out,
            method: SampleMethod::Imported,
            rng: None,
            self_loops_discarded: 0,
        })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let n32 = n as u32;
        Self::from_edges(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    pub fn write_edge_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["u", "v"])?;
        for &(u, v) in &self.edges {
            wtr.write_record([u.to_string(), v.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Edge lists do not record isolated trailing vertices, so `n` is given.
    pub fn read_edge_csv<R: Read>(input: R, n: usize) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["u", "v"] {
            return Err(Error::InvalidGraph("expected header `u,v`".into()));
        }
        let edges = rdr
            .deserialize::<(u32, u32)>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::from_edges(n, edges)
    }

    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = Vec::with_capacity(20 + 8 * self.edges.len());
        buf.extend_from_slice(BINARY_MAGIC);
        buf.extend_from_slice(&(self.n as u64).to_le_bytes());
        buf.extend_from_slice(&(self.edges.len() as u64).to_le_bytes());
        for &(u, v) in &self.edges {
            buf.extend_from_slice(&u.to_le_bytes());
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() < 20 || &bytes[..4] != BINARY_MAGIC {
            return Err(Error::InvalidGraph("missing NRG1 header".into()));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let n = word(4) as usize;
        let m = word(12) as usize;
        let body = &bytes[20..];
        if body.len() != m.saturating_mul(8) {
            return Err(Error::InvalidGraph(format!(
                "header announces {m} edges but body holds {} bytes",
                body.len()
            )));
        }
        let half = |c: &[u8]| u32::from_le_bytes(c.try_into().unwrap());
        let edges = body.chunks_exact(8).map(|c| (half(&c[..4]), half(&c[4..])));
        Self::from_edges(n, edges)
    }
}

/// One Bernoulli trial per pair. Quadratic; refused above [`NAIVE_MAX_N`]
/// vertices unless `allow_large` is set.
pub fn sample_naive(ws: &WeightSequence, contract: RngContract, allow_large: bool) -> Result<GraphSample> {
    let n = ws.n();
    if n > NAIVE_MAX_N && !allow_large {
        return Err(Error::Refused(format!(
            "per-pair sampling at n = {n} costs n^2/2 coin flips; use the Poisson-collapse sampler or pass the override"
        )));
    }
    let mut rng = contract.rng();
    let w = ws.weights();
    let scale = 1.0 / ws.total();
    let mut edges = Vec::new();
    for i in 0..n {
        let wi = w[i] * scale;
        if wi == 0.0 {
            // Weights are descending, so every later vertex is isolated too.
            break;
        }
        for (j, &wj) in w.iter().enumerate().skip(i + 1) {
            let p = -(-wi * wj).exp_m1();
            if rng.random::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Ok(GraphSample {
        n,
        edges,
        method: SampleMethod::Naive,
        rng: Some(contract),
        self_loops_discarded: 0,
    })
}

/// Reusable state for repeated collapse sampling from one weight sequence.
#[derive(Clone, Debug)]
pub struct PoissonCollapseSampler {
    n: usize,
    marks: AliasTable,
    events: Poisson,
}

impl PoissonCollapseSampler {
    pub fn new(ws: &WeightSequence) -> Result<Self> {
        Ok(Self {
            n: ws.n(),
            marks: AliasTable::new(ws.weights())?,
            events: Poisson::new(0.5 * ws.total())?,
        })
    }

    pub fn sample(&self, contract: RngContract) -> GraphSample {
        let mut rng = contract.rng();
        let k = self.events.sample(&mut rng);
        let mut edges = Vec::with_capacity(k as usize);
        let mut loops = 0u64;
        for _ in 0..k {
            let i = self.marks.sample(&mut rng) as u32;
            let j = self.marks.sample(&mut rng) as u32;
            if i == j {
                loops += 1;
            } else {
                edges.push((i.min(j), i.max(j)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        GraphSample {
            n: self.n,
            edges,
            method: SampleMethod::PoissonCollapse,
            rng: Some(contract),
            self_loops_discarded: loops,
        }
    }
}

pub fn sample_poisson_collapse(ws: &WeightSequence, contract: RngContract) -> Result<GraphSample> {
    Ok(PoissonCollapseSampler::new(ws)?.sample(contract))
}

/// Degree → number of vertices with that degree.
pub fn degree_histogram(g: &GraphSample) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for d in g.degrees() {
        *h.entry(d as usize).or_insert(0) += 1;
    }
    h
}
