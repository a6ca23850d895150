use std::collections::BTreeMap;

use rand::Rng as _;

use super::count::{delta_state_degree_pso, state_degree_pso};
use super::swap::{apply_pso, apply_rpso, SwapProposal};
use super::Model;
use crate::hypercore::{degree_profile, BipartiteDigraph, DirectedEdge, Direction};
use crate::rng::Rng;
use crate::{Error, Result};

/// Vertices grouped by (in, out) degree with a cumulative table of
/// `C(|class|, 2)` for sampling a class proportionally to its pair count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ClassTable {
    members: Vec<Vec<u32>>,
    cumulative: Vec<u64>,
}

impl ClassTable {
    fn build(keys: impl Iterator<Item = ((u32, u32), u32)>) -> Self {
        let mut classes: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for (key, v) in keys {
            classes.entry(key).or_default().push(v);
        }
        let members: Vec<Vec<u32>> = classes.into_values().collect();
        let mut acc = 0u64;
        let cumulative = members
            .iter()
            .map(|m| {
                let n = m.len() as u64;
                acc += n * n.saturating_sub(1) / 2;
                acc
            })
            .collect();
        ClassTable { members, cumulative }
    }

    pub(crate) fn total_pairs(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Probability of drawing each class, in class order.
    #[cfg(test)]
    pub(crate) fn probabilities(&self) -> Vec<f64> {
        let total = self.total_pairs() as f64;
        let mut prev = 0u64;
        self.cumulative
            .iter()
            .map(|&c| {
                let p = (c - prev) as f64 / total;
                prev = c;
                p
            })
            .collect()
    }

    fn sample(&self, rng: &mut Rng) -> Option<&[u32]> {
        let total = self.total_pairs();
        if total == 0 {
            return None;
        }
        let x = rng.random_range(0..total);
        let idx = self.cumulative.partition_point(|&c| c <= x);
        Some(&self.members[idx])
    }
}

/// The four class tables of the JOINT chain: left vertices with positive
/// out-degree (θ) or in-degree (η), right vertices with positive in-degree
/// (φ) or out-degree (ν).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct JointClasses {
    pub(crate) theta: ClassTable,
    pub(crate) eta: ClassTable,
    pub(crate) phi: ClassTable,
    pub(crate) nu: ClassTable,
}

impl JointClasses {
    fn build(g: &BipartiteDigraph) -> Self {
        let p = degree_profile(g);
        let left = |v: usize| ((p.left_in[v], p.left_out[v]), v as u32);
        let right = |a: usize| ((p.right_in[a], p.right_out[a]), a as u32);
        let nl = p.left_in.len();
        let nr = p.right_in.len();
        JointClasses {
            theta: ClassTable::build((0..nl).filter(|&v| p.left_out[v] > 0).map(left)),
            eta: ClassTable::build((0..nl).filter(|&v| p.left_in[v] > 0).map(left)),
            phi: ClassTable::build((0..nr).filter(|&a| p.right_in[a] > 0).map(right)),
            nu: ClassTable::build((0..nr).filter(|&a| p.right_out[a] > 0).map(right)),
        }
    }
}

#[derive(Debug, Clone)]
struct MhState {
    edges: Vec<DirectedEdge>,
    swaps: u64,
}

/// Counters kept by every chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChainStats {
    pub steps: u64,
    pub accepted: u64,
}

/// Mutable state of one Markov chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    graph: BipartiteDigraph,
    rng: Rng,
    model: Model,
    heads_probability: f64,
    positive_out_left: Vec<u32>,
    positive_out_right: Vec<u32>,
    classes: Option<JointClasses>,
    mh: Option<MhState>,
    stats: ChainStats,
    scratch_a: Vec<u32>,
    scratch_b: Vec<u32>,
}

fn difference_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() {
        if j == b.len() || a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
}

fn distinct_pair(rng: &mut Rng, items: &[u32]) -> (u32, u32) {
    let n = items.len();
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (items[i], items[j])
}

impl ChainState {
    /// Prepares a chain for `model`. `heads_probability` overrides the
    /// default coin bias `|D⁺| / |D|`.
    pub fn new(graph: BipartiteDigraph, rng: Rng, model: Model, heads_probability: Option<f64>) -> Result<Self> {
        if model == Model::Null {
            return Err(Error::InvalidArgument("the null baseline is not a Markov chain".into()));
        }
        let total = graph.total_edges();
        let heads_probability = match heads_probability {
            Some(p) if (0.0..=1.0).contains(&p) => p,
            Some(p) => return Err(Error::InvalidArgument(format!("heads probability {p} outside [0,1]"))),
            None if total == 0 => 0.5,
            None => graph.edge_count(Direction::Head) as f64 / total as f64,
        };
        let positive_out_left = (0..graph.left_count() as u32).filter(|&v| !graph.left_out(v).is_empty()).collect();
        let positive_out_right = (0..graph.right_count() as u32).filter(|&a| !graph.right_out(a).is_empty()).collect();
        let classes = (model == Model::Joint).then(|| JointClasses::build(&graph));
        let mh = (model == Model::DegsMh)
            .then(|| MhState { edges: graph.edges().collect(), swaps: state_degree_pso(&graph) });
        Ok(ChainState {
            graph,
            rng,
            model,
            heads_probability,
            positive_out_left,
            positive_out_right,
            classes,
            mh,
            stats: ChainStats::default(),
            scratch_a: Vec::new(),
            scratch_b: Vec::new(),
        })
    }

    pub fn graph(&self) -> &BipartiteDigraph {
        &self.graph
    }

    pub fn into_graph(self) -> BipartiteDigraph {
        self.graph
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn stats(&self) -> ChainStats {
        self.stats
    }

    /// Current `d(G)` for the Metropolis-Hastings chain.
    pub fn swap_count(&self) -> Option<u64> {
        self.mh.as_ref().map(|m| m.swaps)
    }

    #[cfg(test)]
    pub(crate) fn classes(&self) -> Option<&JointClasses> {
        self.classes.as_ref()
    }

    /// One step of the configured model; returns whether the graph changed.
    pub fn step(&mut self) -> Result<bool> {
        let moved = match self.model {
            Model::Degs => nudhy_degs_step(self),
            Model::Joint => nudhy_joint_step(self),
            Model::DegsMh => nudhy_degs_mh_step(self)?,
            Model::Null => unreachable!("rejected in new"),
        };
        Ok(moved)
    }

    pub fn run(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Checks that the graph and all derived indices are consistent.
    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        let fresh = ChainState::new(self.graph.clone(), self.rng.clone(), self.model, Some(self.heads_probability))?;
        if fresh.positive_out_left != self.positive_out_left || fresh.positive_out_right != self.positive_out_right {
            return Err(Error::Invariant("positive out-degree index out of date".into()));
        }
        if fresh.classes != self.classes {
            return Err(Error::Invariant("degree classes out of date".into()));
        }
        if let (Some(a), Some(b)) = (&self.mh, &fresh.mh) {
            if a.swaps != b.swaps {
                return Err(Error::Invariant(format!("swap count {} != recount {}", a.swaps, b.swaps)));
            }
            let mut edges = a.edges.clone();
            edges.sort();
            let mut expect = b.edges.clone();
            expect.sort();
            if edges != expect {
                return Err(Error::Invariant("edge list out of date".into()));
            }
        }
        Ok(())
    }

    fn heads(&mut self) -> bool {
        self.rng.random_bool(self.heads_probability)
    }

    /// Draws a swap of two edges of direction `d` between left vertices `u`
    /// and `v`, uniformly over `Δ(u, v)`.
    fn left_pair_swap(&mut self, u: u32, v: u32, d: Direction) -> Option<SwapProposal> {
        difference_into(self.graph.left_adj(u, d), self.graph.left_adj(v, d), &mut self.scratch_a);
        if self.scratch_a.is_empty() {
            return None;
        }
        difference_into(self.graph.left_adj(v, d), self.graph.left_adj(u, d), &mut self.scratch_b);
        if self.scratch_b.is_empty() {
            return None;
        }
        let alpha = self.scratch_a[self.rng.random_range(0..self.scratch_a.len())];
        let beta = self.scratch_b[self.rng.random_range(0..self.scratch_b.len())];
        Some(SwapProposal::new(DirectedEdge::new(u, alpha, d), DirectedEdge::new(v, beta, d)))
    }

    /// As [`Self::left_pair_swap`] for right vertices `a` and `b`.
    fn right_pair_swap(&mut self, a: u32, b: u32, d: Direction) -> Option<SwapProposal> {
        difference_into(self.graph.right_adj(a, d), self.graph.right_adj(b, d), &mut self.scratch_a);
        if self.scratch_a.is_empty() {
            return None;
        }
        difference_into(self.graph.right_adj(b, d), self.graph.right_adj(a, d), &mut self.scratch_b);
        if self.scratch_b.is_empty() {
            return None;
        }
        let u = self.scratch_a[self.rng.random_range(0..self.scratch_a.len())];
        let v = self.scratch_b[self.rng.random_range(0..self.scratch_b.len())];
        Some(SwapProposal::new(DirectedEdge::new(u, a, d), DirectedEdge::new(v, b, d)))
    }

    fn record(&mut self, moved: bool) -> bool {
        self.stats.steps += 1;
        self.stats.accepted += moved as u64;
        moved
    }
}

/// One step of the degree-preserving chain. With probability `p_heads` a
/// pair of nodes with positive out-degree exchanges one head membership each;
/// otherwise a pair of hyperedge copies with non-empty tails exchanges one
/// tail node each. Empty difference sets make the step a self-loop.
pub fn nudhy_degs_step(state: &mut ChainState) -> bool {
    let proposal = if state.heads() {
        if state.positive_out_left.len() < 2 {
            None
        } else {
            let (u, v) = distinct_pair(&mut state.rng, &state.positive_out_left);
            state.left_pair_swap(u, v, Direction::Head)
        }
    } else if state.positive_out_right.len() < 2 {
        None
    } else {
        let (a, b) = distinct_pair(&mut state.rng, &state.positive_out_right);
        state.right_pair_swap(a, b, Direction::Tail)
    };
    let moved = match proposal {
        Some(p) => {
            apply_pso(&mut state.graph, &p);
            true
        }
        None => false,
    };
    state.record(moved)
}

/// One step of the JOINT-preserving chain. A fair coin chooses whether the
/// two endpoints sharing a degree class are nodes or hyperedge copies, the
/// biased coin chooses the direction; the class is drawn with probability
/// proportional to its number of vertex pairs.
pub fn nudhy_joint_step(state: &mut ChainState) -> bool {
    let node_side = state.rng.random_bool(0.5);
    let heads = state.heads();
    let dir = if heads { Direction::Head } else { Direction::Tail };
    let pair = {
        let classes = state.classes.as_ref().expect("JOINT chain has degree classes");
        let table = match (node_side, heads) {
            (true, true) => &classes.theta,
            (true, false) => &classes.eta,
            (false, true) => &classes.phi,
            (false, false) => &classes.nu,
        };
        table.sample(&mut state.rng).map(|members| distinct_pair(&mut state.rng, members))
    };
    let proposal =
        pair.and_then(
            |(x, y)| {
                if node_side {
                    state.left_pair_swap(x, y, dir)
                } else {
                    state.right_pair_swap(x, y, dir)
                }
            },
        );
    let moved = match proposal {
        Some(p) => {
            apply_rpso(&mut state.graph, &p);
            true
        }
        None => false,
    };
    state.record(moved)
}

/// One Metropolis-Hastings step: uniform edge pairs are drawn until they
/// form a valid swap, which is accepted with probability
/// `min(1, d(G) / d(G'))`.
pub fn nudhy_degs_mh_step(state: &mut ChainState) -> Result<bool> {
    let mh = state.mh.as_ref().expect("MH chain has swap bookkeeping");
    if mh.swaps == 0 {
        return Err(Error::Frozen);
    }
    let n = mh.edges.len();
    let (i, j, p) = loop {
        let i = state.rng.random_range(0..n);
        let mut j = state.rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (e1, e2) = (state.mh.as_ref().unwrap().edges[i], state.mh.as_ref().unwrap().edges[j]);
        if e1.dir != e2.dir || e1.left == e2.left || e1.right == e2.right {
            continue;
        }
        let p = SwapProposal::new(e1, e2);
        if state.graph.has_edge(p.e3) || state.graph.has_edge(p.e4) {
            continue;
        }
        break (i, j, p);
    };
    let current = state.mh.as_ref().unwrap().swaps;
    let next = (current as i64 + delta_state_degree_pso(&state.graph, &p)) as u64;
    debug_assert!(next > 0, "the reverse swap is always applicable");
    let accept = next <= current || state.rng.random_bool(current as f64 / next as f64);
    if accept {
        apply_pso(&mut state.graph, &p);
        let mh = state.mh.as_mut().unwrap();
        mh.edges[i] = p.e3;
        mh.edges[j] = p.e4;
        mh.swaps = next;
    }
    Ok(state.record(accept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{compute_joint, to_bipartite, toy};
    use rand::SeedableRng;

    fn binom2(n: usize) -> f64 {
        (n * n.saturating_sub(1) / 2) as f64
    }

    #[test]
    fn class_probabilities_are_normalized_pair_counts() {
        let g = to_bipartite(&toy::fig1());
        let st = ChainState::new(g.clone(), Rng::seed_from_u64(0), Model::Joint, None).unwrap();
        let c = st.classes().unwrap();
        for table in [&c.theta, &c.eta, &c.phi, &c.nu] {
            let total: f64 = table.members.iter().map(|m| binom2(m.len())).sum();
            assert_eq!(table.total_pairs() as f64, total);
            if total > 0.0 {
                let p = table.probabilities();
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for (m, pi) in table.members.iter().zip(&p) {
                    assert_eq!(*pi, binom2(m.len()) / total);
                }
            }
        }
        // θ groups left vertices with out-degree > 0 by (in, out).
        let p = degree_profile(&g);
        let mut theta: Vec<u32> = c.theta.members.concat();
        theta.sort_unstable();
        let expect: Vec<u32> = (0..g.left_count() as u32).filter(|&v| p.left_out[v as usize] > 0).collect();
        assert_eq!(theta, expect);
    }

    #[test]
    fn class_sampling_frequencies() {
        let table = ClassTable::build(
            [((0, 1), 0), ((0, 1), 1), ((1, 1), 2), ((1, 1), 3), ((1, 1), 4), ((2, 0), 5)].into_iter(),
        );
        let p = table.probabilities();
        assert_eq!(p, vec![0.25, 0.75, 0.0]);
        let mut rng = Rng::seed_from_u64(9);
        let mut counts = [0u32; 3];
        for _ in 0..200_000 {
            let m = table.sample(&mut rng).unwrap();
            counts[table.members.iter().position(|x| x == m).unwrap()] += 1;
        }
        assert!((counts[0] as f64 / 200_000.0 - 0.25).abs() < 5e-3);
        assert_eq!(counts[2], 0);
    }

    #[test]
    fn joint_chain_keeps_tensor_and_classes() {
        let h = crate::synth::ecoli_scale(&mut Rng::seed_from_u64(4));
        let g = to_bipartite(&h);
        let joint = compute_joint(&g);
        let mut st = ChainState::new(g, Rng::seed_from_u64(5), Model::Joint, None).unwrap();
        let classes = st.classes().unwrap().clone();
        st.run(20_000).unwrap();
        st.validate().unwrap();
        assert_eq!(compute_joint(st.graph()), joint);
        assert_eq!(JointClasses::build(st.graph()), classes);
        assert!(st.stats().accepted > 0);
    }

    #[test]
    fn mh_reports_frozen_state() {
        let h = crate::hypercore::parse_hypergraph("1|2\n").unwrap();
        let r = ChainState::new(to_bipartite(&h), Rng::seed_from_u64(1), Model::DegsMh, None);
        assert!(matches!(r.and_then(|mut s| s.step()), Err(Error::Frozen)));
    }

    #[test]
    fn mh_keeps_swap_count_exact() {
        let h = crate::synth::random_directed(
            &mut Rng::seed_from_u64(2),
            12,
            15,
            crate::synth::SizeDistribution::Uniform(1, 3),
            crate::synth::SizeDistribution::Uniform(1, 3),
        );
        let mut st = ChainState::new(to_bipartite(&h), Rng::seed_from_u64(3), Model::DegsMh, None).unwrap();
        for _ in 0..2_000 {
            st.step().unwrap();
            assert_eq!(st.swap_count(), Some(state_degree_pso(st.graph())));
        }
    }

    #[test]
    fn heads_probability_one_only_moves_heads() {
        let h = crate::hypercore::parse_hypergraph("1|2\n3|4\n").unwrap();
        let g = to_bipartite(&h);
        let mut st = ChainState::new(g.clone(), Rng::seed_from_u64(3), Model::Degs, Some(1.0)).unwrap();
        st.run(100).unwrap();
        for v in 0..g.left_count() as u32 {
            assert_eq!(st.graph().left_in(v), g.left_in(v));
        }
        assert!(ChainState::new(g, Rng::seed_from_u64(3), Model::Degs, Some(1.5)).is_err());
    }
}
