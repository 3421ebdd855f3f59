//! Cluster exploration with active / explored / unseen statuses, and a
//! union-find path for whole-graph component summaries.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::GraphSample;

/// Compressed adjacency lists; each list is sorted ascending.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn new(g: &GraphSample) -> Self {
        let n = g.n();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in g.edges() {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        // Edges are sorted by (u, v) with u < v, so each list comes out sorted.
        for &(u, v) in g.edges() {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Self { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: usize,
    pub active: usize,
    pub unseen: usize,
    pub explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorationTrace {
    pub start_vertex: usize,
    /// `(t, |A_t|, |U_t|, |E_t|)` from `t = 0` until the active set empties;
    /// empty unless a trace was requested.
    pub steps: Vec<TraceStep>,
    pub component_size: usize,
}

impl ExplorationTrace {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for s in &self.steps {
            wtr.serialize(s)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Unseen,
    Active,
    Explored,
}

/// Explores `C(v)`, always expanding the active vertex with the smallest label.
pub fn explore_cluster(adj: &Adjacency, v: usize, record_trace: bool) -> Result<ExplorationTrace> {
    let n = adj.n();
    if v >= n {
        return Err(Error::Domain(format!("start vertex {v} outside 0..{n}")));
    }
    let mut status = vec![Status::Unseen; n];
    let mut active = BTreeSet::from([v as u32]);
    status[v] = Status::Active;
    let mut steps = Vec::new();
    let mut unseen = n - 1;
    let mut record = |t: usize, active: usize, unseen: usize| {
        debug_assert_eq!(active + unseen + t, n);
        if record_trace {
            steps.push(TraceStep {
                t,
                active,
                unseen,
                explored: t,
            });
        }
    };
    record(0, 1, unseen);
    let mut t = 0;
    while let Some(m) = active.pop_first() {
        t += 1;
        status[m as usize] = Status::Explored;
        for &j in adj.neighbors(m as usize) {
            if status[j as usize] == Status::Unseen {
                status[j as usize] = Status::Active;
                active.insert(j);
                unseen -= 1;
            }
        }
        record(t, active.len(), unseen);
    }
    Ok(ExplorationTrace {
        start_vertex: v,
        steps,
        component_size: t,
    })
}

/// Runs the exploration until every vertex is explored, restarting from the
/// smallest unseen label whenever the active set empties.
pub fn exploration_sweep(adj: &Adjacency) -> ComponentSummary {
    let n = adj.n();
    let mut status = vec![Status::Unseen; n];
    let mut active = BTreeSet::new();
    let mut next_unseen = 0usize;
    let mut sizes = Vec::new();
    let (mut n_active, mut n_explored) = (0usize, 0usize);
    let mut current = 0usize;
    while n_explored < n {
        let m = match active.pop_first() {
            Some(m) => m as usize,
            None => {
                while status[next_unseen] != Status::Unseen {
                    next_unseen += 1;
                }
                if current > 0 {
                    sizes.push(current);
                }
                current = 0;
                n_active += 1;
                next_unseen
            }
        };
        status[m] = Status::Explored;
        n_active -= 1;
        n_explored += 1;
        current += 1;
        for &j in adj.neighbors(m) {
            if status[j as usize] == Status::Unseen {
                status[j as usize] = Status::Active;
                active.insert(j);
                n_active += 1;
            }
        }
        debug_assert_eq!(n_active, active.len());
        debug_assert!(n_active + n_explored <= n);
    }
    if current > 0 {
        sizes.push(current);
    }
    ComponentSummary::from_sizes(n, sizes)
}

/// `|C(V)|` for `V` uniform on the vertex set.
pub fn cluster_of_random_vertex<R: Rng + ?Sized>(adj: &Adjacency, rng: &mut R) -> usize {
    let v = rng.random_range(0..adj.n());
    cluster_size(adj, v)
}

/// `|C(v)|` by breadth-first search; the expansion order does not change the size.
pub fn cluster_size(adj: &Adjacency, v: usize) -> usize {
    let mut seen = vec![false; adj.n()];
    let mut stack = vec![v as u32];
    seen[v] = true;
    let mut size = 0;
    while let Some(u) = stack.pop() {
        size += 1;
        for &j in adj.neighbors(u as usize) {
            if !seen[j as usize] {
                seen[j as usize] = true;
                stack.push(j);
            }
        }
    }
    size
}

/// Disjoint sets with union by rank and full path compression.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Component sizes of a graph as a size → number-of-components table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
}

impl ComponentSummary {
    pub fn from_sizes(n: usize, sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        for s in sizes {
            *counts.entry(s).or_insert(0) += 1;
        }
        let summary = Self { n, counts };
        debug_assert_eq!(summary.counts.iter().map(|(s, c)| s * c).sum::<usize>(), n);
        summary
    }

    pub fn c_max(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn component_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// `N_k`: vertices lying in components with more than `k` vertices.
    pub fn n_k(&self, k: usize) -> usize {
        self.counts.range(k + 1..).map(|(s, c)| s * c).sum()
    }

    /// Sizes in descending order, one entry per component.
    pub fn sizes(&self) -> Vec<usize> {
        self.counts
            .iter()
            .rev()
            .flat_map(|(&s, &c)| std::iter::repeat_n(s, c))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["size", "count"])?;
        for (s, c) in &self.counts {
            wtr.write_record([s.to_string(), c.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn components_union_find(g: &GraphSample) -> ComponentSummary {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    for &(u, v) in g.edges() {
        uf.union(u as usize, v as usize);
    }
    let mut size = vec![0usize; n];
    for v in 0..n {
        size[uf.find(v)] += 1;
    }
    ComponentSummary::from_sizes(n, size.into_iter().filter(|&s| s > 0))
}
