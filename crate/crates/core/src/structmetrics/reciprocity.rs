//! Hyperedge reciprocity.
//!
//! For `e = (h, t)` and a set `R` of other hyperedges, a walker at `u ∈ h`
//! picks uniformly among the members of `R` whose tail contains `u` and then
//! a uniform node of that hyperedge's head. Its destination distribution is
//! compared with the uniform distribution over `t` by Jensen-Shannon
//! divergence in base 2. A head node that no member of `R` reaches scores the
//! maximal divergence.

use std::collections::BTreeMap;

use crate::exec::{self, Execution};
use crate::hypercore::{DirectedHypergraph, Hyperedge};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocityConfig {
    /// Exponent of the `(1/|R|)^α` size penalty.
    pub alpha: f64,
    /// Candidate sets up to this size are searched exhaustively.
    pub exact_limit: usize,
}

impl Default for ReciprocityConfig {
    fn default() -> Self {
        ReciprocityConfig { alpha: 1e-6, exact_limit: 15 }
    }
}

impl ReciprocityConfig {
    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        Ok(())
    }
}

fn jsd(p: &BTreeMap<u32, f64>, q: &[u32]) -> f64 {
    let qv = 1.0 / q.len() as f64;
    let term = |a: f64, m: f64| if a > 0.0 { a * (a / m).log2() } else { 0.0 };
    let mut total = 0.0;
    for (&v, &pv) in p {
        let qq = if q.binary_search(&v).is_ok() { qv } else { 0.0 };
        let m = 0.5 * (pv + qq);
        total += term(pv, m) + term(qq, m);
    }
    for &v in q {
        if !p.contains_key(&v) {
            total += term(qv, 0.5 * qv);
        }
    }
    (0.5 * total).clamp(0.0, 1.0)
}

/// Walker state of one head node: number of reaching hyperedges and the
/// unnormalized destination mass.
#[derive(Debug, Clone, Default)]
struct Walker {
    reach: u32,
    mass: BTreeMap<u32, f64>,
}

impl Walker {
    fn add(&mut self, c: &Hyperedge) {
        self.reach += 1;
        let w = 1.0 / c.head.len() as f64;
        for &v in &c.head {
            *self.mass.entry(v).or_insert(0.0) += w;
        }
    }

    fn divergence(&self, target: &[u32]) -> f64 {
        if self.reach == 0 {
            return 1.0;
        }
        let r = self.reach as f64;
        let p: BTreeMap<u32, f64> = self.mass.iter().map(|(&v, &m)| (v, m / r)).collect();
        jsd(&p, target)
    }
}

fn combine(set_size: usize, divergence: f64, heads: usize, alpha: f64) -> f64 {
    if set_size == 0 {
        return 0.0;
    }
    ((set_size as f64).powf(-alpha) * (1.0 - divergence / heads as f64)).clamp(0.0, 1.0)
}

/// `r(e, R)`; 0 when `R` is empty or either side of `e` is.
pub fn hyperedge_reciprocity(e: &Hyperedge, set: &[&Hyperedge], cfg: &ReciprocityConfig) -> f64 {
    if set.is_empty() || e.head.is_empty() || e.tail.is_empty() {
        return 0.0;
    }
    let mut div = 0.0;
    for &u in &e.head {
        let mut w = Walker::default();
        for c in set.iter().filter(|c| c.in_tail(u)) {
            w.add(c);
        }
        div += w.divergence(&e.tail);
    }
    combine(set.len(), div, e.head.len(), cfg.alpha)
}

fn intersects(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Hyperedges `(h', t')` with `t' ∩ h ≠ ∅` and `h' ∩ t ≠ ∅`, as indices into
/// `h.edges()`; each copy is listed separately and `edge` contributes its
/// other copies only.
pub fn reciprocal_candidates(h: &DirectedHypergraph, edge: usize) -> Vec<usize> {
    let e = &h.edges()[edge];
    let mut out = Vec::new();
    for (i, c) in h.edges().iter().enumerate() {
        if intersects(&c.tail, &e.head) && intersects(&c.head, &e.tail) {
            let copies = if i == edge { c.multiplicity - 1 } else { c.multiplicity };
            out.extend(std::iter::repeat_n(i, copies as usize));
        }
    }
    out
}

/// Maximizes `r(e, R)` over subsets of the candidates: exhaustively up to
/// `cfg.exact_limit` candidates, otherwise by greedy forward selection that
/// stops when no addition improves the score. Ties keep the earlier set.
pub fn search_reciprocal_set(h: &DirectedHypergraph, edge: usize, cfg: &ReciprocityConfig) -> (Vec<usize>, f64) {
    let e = &h.edges()[edge];
    let cands = reciprocal_candidates(h, edge);
    if cands.is_empty() || e.head.is_empty() {
        return (Vec::new(), 0.0);
    }
    if cands.len() <= cfg.exact_limit {
        exact(h, e, &cands, cfg)
    } else {
        greedy(h, e, &cands, cfg)
    }
}

fn exact(h: &DirectedHypergraph, e: &Hyperedge, cands: &[usize], cfg: &ReciprocityConfig) -> (Vec<usize>, f64) {
    let mut best = (0u32, 0.0);
    let mut set = Vec::with_capacity(cands.len());
    for mask in 1u32..(1 << cands.len()) {
        set.clear();
        set.extend((0..cands.len()).filter(|b| mask >> b & 1 == 1).map(|b| &h.edges()[cands[b]]));
        let r = hyperedge_reciprocity(e, &set, cfg);
        if r > best.1 {
            best = (mask, r);
        }
    }
    let chosen = (0..cands.len()).filter(|b| best.0 >> b & 1 == 1).map(|b| cands[b]).collect();
    (chosen, best.1)
}

fn greedy(h: &DirectedHypergraph, e: &Hyperedge, cands: &[usize], cfg: &ReciprocityConfig) -> (Vec<usize>, f64) {
    let mut walkers = vec![Walker::default(); e.head.len()];
    let mut div: Vec<f64> = vec![1.0; e.head.len()];
    let mut used = vec![false; cands.len()];
    let mut chosen = Vec::new();
    let mut score = 0.0;
    loop {
        let total: f64 = div.iter().sum();
        let mut best: Option<(usize, f64)> = None;
        for (ci, &c) in cands.iter().enumerate() {
            if used[ci] {
                continue;
            }
            let c = &h.edges()[c];
            let mut d = total;
            for (ui, &u) in e.head.iter().enumerate() {
                if c.in_tail(u) {
                    let mut w = walkers[ui].clone();
                    w.add(c);
                    d += w.divergence(&e.tail) - div[ui];
                }
            }
            let r = combine(chosen.len() + 1, d, e.head.len(), cfg.alpha);
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((ci, r));
            }
        }
        match best {
            Some((ci, r)) if r > score => {
                used[ci] = true;
                chosen.push(cands[ci]);
                score = r;
                let c = &h.edges()[cands[ci]];
                for (ui, &u) in e.head.iter().enumerate() {
                    if c.in_tail(u) {
                        walkers[ui].add(c);
                        div[ui] = walkers[ui].divergence(&e.tail);
                    }
                }
            }
            _ => break,
        }
    }
    chosen.sort_unstable();
    (chosen, score)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReciprocity {
    /// Index into `edges()` of the hypergraph.
    pub edge: usize,
    pub score: f64,
    pub set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocityReport {
    pub per_edge: Vec<EdgeReciprocity>,
    /// Mean over hyperedge copies.
    pub mean: f64,
}

pub fn hypergraph_reciprocity(
    h: &DirectedHypergraph,
    cfg: &ReciprocityConfig,
    execution: Execution,
) -> Result<ReciprocityReport> {
    cfg.validate()?;
    if h.edges().is_empty() {
        return Err(Error::InvalidArgument("reciprocity of a hypergraph without hyperedges".into()));
    }
    let per_edge = exec::map_indexed(execution, h.edges().len(), |i| {
        let (set, score) = search_reciprocal_set(h, i, cfg);
        EdgeReciprocity { edge: i, score, set }
    });
    let total: f64 = per_edge.iter().map(|r| r.score * h.edges()[r.edge].multiplicity as f64).sum();
    Ok(ReciprocityReport { mean: total / h.edge_count() as f64, per_edge })
}
