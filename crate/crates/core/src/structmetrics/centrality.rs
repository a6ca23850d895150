//! PageRank on the weighted head-to-tail projection and HITS on the
//! bipartite representation.

use std::collections::BTreeMap;

use crate::diagnostics::ndcg;
use crate::hypercore::{BipartiteDigraph, DirectedHypergraph};
use crate::{Error, Result};

const MAX_PAGERANK_ITERATIONS: usize = 10_000;
const MAX_HITS_ITERATIONS: usize = 100_000;

/// Directed graph with positive arc weights over dense node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    out: Vec<Vec<(u32, f64)>>,
}

impl WeightedDigraph {
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        let mut acc: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (u, v, w) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidArgument(format!("arc {u}->{v} outside 0..{n}")));
            }
            *acc.entry((u, v)).or_insert(0.0) += w;
        }
        let mut out = vec![Vec::new(); n];
        for ((u, v), w) in acc {
            out[u as usize].push((v, w));
        }
        Ok(WeightedDigraph { out })
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn out_arcs(&self, u: u32) -> &[(u32, f64)] {
        &self.out[u as usize]
    }

    pub fn weight(&self, u: u32, v: u32) -> f64 {
        let arcs = self.out_arcs(u);
        arcs.binary_search_by_key(&v, |a| a.0).map_or(0.0, |i| arcs[i].1)
    }
}

/// One arc from every head node to every tail node of each hyperedge,
/// weighted by the number of hyperedges inducing it.
pub fn project_weighted(h: &DirectedHypergraph) -> WeightedDigraph {
    let arcs = h
        .edges()
        .iter()
        .flat_map(|e| e.head.iter().flat_map(move |&u| e.tail.iter().map(move |&v| (u, v, e.multiplicity as f64))));
    WeightedDigraph::from_arcs(h.node_count(), arcs).expect("indices in range")
}

pub fn pagerank(g: &WeightedDigraph, damping: f64, tol: f64) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let out_weight: Vec<f64> = g.out.iter().map(|a| a.iter().map(|x| x.1).sum()).collect();
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_PAGERANK_ITERATIONS {
        let dangling: f64 = (0..n).filter(|&u| out_weight[u] == 0.0).map(|u| x[u]).sum();
        next.fill((1.0 - damping + damping * dangling) / n as f64);
        for u in 0..n {
            if out_weight[u] > 0.0 {
                let share = damping * x[u] / out_weight[u];
                for &(v, w) in &g.out[u] {
                    next[v as usize] += share * w;
                }
            }
        }
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= s);
        let diff: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            return Ok(x);
        }
    }
    Err(Error::NotConverged { iterations: MAX_PAGERANK_ITERATIONS, residual: residual(&x, &next) })
}

fn residual(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Hub and authority scores over `L ∪ R`: indices `0..L` are nodes and
/// `L + α` is hyperedge copy `α`. Head memberships point from the node to
/// the copy, tail memberships from the copy to the node.
#[derive(Debug, Clone, PartialEq)]
pub struct Hits {
    pub hub: Vec<f64>,
    pub authority: Vec<f64>,
}

impl Hits {
    /// Scores of the original nodes only.
    pub fn node_scores(&self, left_count: usize) -> (&[f64], &[f64]) {
        (&self.hub[..left_count], &self.authority[..left_count])
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

pub fn hits(g: &BipartiteDigraph, tol: f64) -> Result<Hits> {
    let (nl, nr) = (g.left_count(), g.right_count());
    let n = nl + nr;
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..nl as u32 {
        succ[v as usize].extend(g.left_out(v).iter().map(|&a| nl + a as usize));
    }
    for a in 0..nr as u32 {
        succ[nl + a as usize].extend(g.right_out(a).iter().map(|&v| v as usize));
    }
    let mut hub = vec![1.0; n];
    if !normalize(&mut hub) || g.total_edges() == 0 {
        return Ok(Hits { hub: vec![0.0; n], authority: vec![0.0; n] });
    }
    let mut auth = vec![0.0; n];
    for _ in 0..MAX_HITS_ITERATIONS {
        let mut new_auth = vec![0.0; n];
        for (x, s) in succ.iter().enumerate() {
            for &y in s {
                new_auth[y] += hub[x];
            }
        }
        normalize(&mut new_auth);
        let mut new_hub: Vec<f64> = succ.iter().map(|s| s.iter().map(|&y| new_auth[y]).sum()).collect();
        normalize(&mut new_hub);
        let diff = residual(&hub, &new_hub) + residual(&auth, &new_auth);
        hub = new_hub;
        auth = new_auth;
        if diff < tol {
            return Ok(Hits { hub, authority: auth });
        }
    }
    Err(Error::NotConverged { iterations: MAX_HITS_ITERATIONS, residual: f64::NAN })
}

/// nDCG of the sample-averaged scores against the observed ranking.
pub fn centrality_ndcg(observed: &[f64], samples: &[Vec<f64>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no sample scores".into()));
    }
    let mut mean = vec![0.0; observed.len()];
    for s in samples {
        if s.len() != observed.len() {
            return Err(Error::InvalidArgument("sample scores of different length".into()));
        }
        for (m, x) in mean.iter_mut().zip(s) {
            *m += x / samples.len() as f64;
        }
    }
    ndcg(observed, &mean)
}
