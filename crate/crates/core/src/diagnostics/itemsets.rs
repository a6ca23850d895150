//! Top-f frequent itemsets of the head and tail databases and the average
//! relative support difference (ARSD) between an observed hypergraph and a
//! sample.

use std::collections::BTreeMap;

use crate::hypercore::{to_bipartite, to_hypergraph, DirectedHypergraph, NodeId};
use crate::rng::{self, role};
use crate::samplers::{ChainState, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Head,
    Tail,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Head => "head",
            Side::Tail => "tail",
        }
    }
}

/// One transaction per hyperedge copy: its head or its tail, as sorted
/// external node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDB {
    pub transactions: Vec<Vec<NodeId>>,
    pub side: Side,
}

impl TransactionDB {
    pub fn from_hypergraph(h: &DirectedHypergraph, side: Side) -> Self {
        let transactions = h
            .copies()
            .map(|e| {
                let s = match side {
                    Side::Head => &e.head,
                    Side::Tail => &e.tail,
                };
                s.iter().map(|&v| h.node_id(v)).collect()
            })
            .collect();
        TransactionDB { transactions, side }
    }

    pub fn new(mut transactions: Vec<Vec<NodeId>>, side: Side) -> Self {
        for t in &mut transactions {
            t.sort_unstable();
            t.dedup();
        }
        TransactionDB { transactions, side }
    }
}

pub type Itemset = Vec<NodeId>;

/// Itemsets sorted by support descending, ties by itemset ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemsetSet {
    pub itemsets: Vec<(Itemset, u64)>,
    pub f: usize,
    pub l: usize,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

struct Miner {
    f: usize,
    l: usize,
    best: Vec<(Itemset, u64)>,
}

impl Miner {
    fn full(&self) -> bool {
        self.best.len() >= self.f
    }

    fn worst_support(&self) -> u64 {
        self.best.iter().map(|(_, s)| *s).min().unwrap_or(0)
    }

    /// Itemsets are offered in lexicographic order, so an itemset whose
    /// support ties the current worst never displaces it.
    fn offer(&mut self, set: &[NodeId], support: u64) {
        if !self.full() {
            self.best.push((set.to_vec(), support));
            return;
        }
        if support > self.worst_support() {
            let w = self.worst_support();
            let idx = self.best.iter().rposition(|(_, s)| *s == w).expect("worst exists");
            self.best.remove(idx);
            self.best.push((set.to_vec(), support));
        }
    }

    fn admits(&self, support: u64) -> bool {
        support > 0 && (!self.full() || support > self.worst_support())
    }

    fn dfs(&mut self, prefix: &mut Vec<NodeId>, ext: &[(NodeId, Bits, u64)]) {
        for (i, (item, tids, support)) in ext.iter().enumerate() {
            if !self.admits(*support) {
                continue;
            }
            prefix.push(*item);
            if prefix.len() >= self.l {
                self.offer(prefix, *support);
            }
            let mut children = Vec::new();
            for (other, otids, _) in &ext[i + 1..] {
                let t = tids.and(otids);
                let s = t.count();
                if self.admits(s) {
                    children.push((*other, t, s));
                }
            }
            if !children.is_empty() {
                self.dfs(prefix, &children);
            }
            prefix.pop();
        }
    }
}

/// Exact top-f itemsets of size at least `l`.
///
/// Depth-first search over the item prefix tree visits itemsets in
/// lexicographic order; a branch is pruned as soon as its support cannot
/// beat the current f-th best, which is exact because support is
/// anti-monotone and ties are resolved in favor of earlier itemsets.
pub fn mine_top_frequent(db: &TransactionDB, f: usize, l: usize) -> Result<FrequentItemsetSet> {
    if f == 0 || l == 0 {
        return Err(Error::InvalidArgument("f and l must be at least 1".into()));
    }
    let n = db.transactions.len();
    let words = n.div_ceil(64);
    let mut tidsets: BTreeMap<NodeId, Bits> = BTreeMap::new();
    for (t, items) in db.transactions.iter().enumerate() {
        for &it in items {
            tidsets.entry(it).or_insert_with(|| Bits(vec![0; words])).0[t / 64] |= 1 << (t % 64);
        }
    }
    let ext: Vec<(NodeId, Bits, u64)> = tidsets
        .into_iter()
        .map(|(it, b)| {
            let s = b.count();
            (it, b, s)
        })
        .collect();
    let mut miner = Miner { f, l, best: Vec::new() };
    miner.dfs(&mut Vec::new(), &ext);
    let mut itemsets = miner.best;
    itemsets.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(FrequentItemsetSet { itemsets, f, l })
}

fn contains_all(transaction: &[NodeId], set: &[NodeId]) -> bool {
    let mut i = 0;
    for &x in set {
        while i < transaction.len() && transaction[i] < x {
            i += 1;
        }
        if i == transaction.len() || transaction[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

/// Number of transactions containing every item of `set` (sorted).
pub fn support(db: &TransactionDB, set: &[NodeId]) -> u64 {
    db.transactions.iter().filter(|t| contains_all(t, set)).count() as u64
}

/// Mean over mined itemsets `A` of `|supp_obs(A) − supp_sample(A)| / supp_obs(A)`.
pub fn arsd(observed: &TransactionDB, sample: &TransactionDB, fi: &FrequentItemsetSet) -> Result<f64> {
    if fi.itemsets.is_empty() {
        return Err(Error::NoItemsets { f: fi.f, l: fi.l });
    }
    let mut sum = 0.0;
    for (set, _) in &fi.itemsets {
        let obs = support(observed, set);
        if obs == 0 {
            return Err(Error::InvalidArgument("itemset not supported by the observed database".into()));
        }
        let s = support(sample, set);
        sum += (obs as f64 - s as f64).abs() / obs as f64;
    }
    Ok(sum / fi.itemsets.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub model: Model,
    pub seed: u64,
    pub f: usize,
    pub l: usize,
    pub k_max: u64,
    /// Independent chains averaged per checkpoint.
    pub replicates: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { model: Model::Degs, seed: 0, f: 20, l: 3, k_max: 50, replicates: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArsdRow {
    pub k: u64,
    pub side: Side,
    pub arsd: f64,
}

/// ARSD of one chain checkpointed at `s = k·w` for `k = 0..=k_max`, with
/// `w` the number of bipartite edges; averaged over `replicates` chains.
/// Sides without any itemset of size `l` are omitted.
pub fn arsd_trace(h: &DirectedHypergraph, cfg: &TraceConfig) -> Result<Vec<ArsdRow>> {
    if cfg.model == Model::Null {
        return Err(Error::InvalidArgument("convergence traces need a Markov chain model".into()));
    }
    let w = h.incidence_count() as u64;
    let mut sides = Vec::new();
    for side in [Side::Head, Side::Tail] {
        let db = TransactionDB::from_hypergraph(h, side);
        let fi = mine_top_frequent(&db, cfg.f, cfg.l)?;
        if fi.itemsets.is_empty() {
            log::warn!("no itemsets of size {} on the {} side; skipped", cfg.l, side.name());
        } else {
            sides.push((side, db, fi));
        }
    }
    let reps = cfg.replicates.max(1);
    let mut sums = vec![vec![0.0; (cfg.k_max + 1) as usize]; sides.len()];
    for r in 0..reps {
        let rng = rng::stream(cfg.seed, role::TRACE, r as u64);
        let mut state = ChainState::new(to_bipartite(h), rng, cfg.model, None)?;
        for k in 0..=cfg.k_max {
            if k > 0 {
                state.run(w)?;
            }
            let sample = to_hypergraph(state.graph())?;
            for (si, (side, db, fi)) in sides.iter().enumerate() {
                let sdb = TransactionDB::from_hypergraph(&sample, *side);
                sums[si][k as usize] += arsd(db, &sdb, fi)?;
            }
        }
    }
    let mut rows = Vec::new();
    for k in 0..=cfg.k_max {
        for (si, (side, _, _)) in sides.iter().enumerate() {
            rows.push(ArsdRow { k, side: *side, arsd: sums[si][k as usize] / reps as f64 });
        }
    }
    Ok(rows)
}

/// Least-squares slope of the last `window` values per checkpoint, divided
/// by their mean.
pub fn relative_slope(values: &[f64], window: usize) -> f64 {
    let tail = &values[values.len().saturating_sub(window)..];
    let n = tail.len() as f64;
    if tail.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = tail.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in tail.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    if my == 0.0 {
        if slope == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (slope / my).abs()
    }
}

pub fn is_plateau(values: &[f64], window: usize, tolerance: f64) -> bool {
    values.len() >= window && relative_slope(values, window) < tolerance
}
