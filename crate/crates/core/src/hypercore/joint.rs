use std::collections::BTreeMap;

use super::bipartite::{degree_profile, BipartiteDigraph, DegreeHistograms, Direction};

/// Index of a JOINT entry: left vertex with in-degree `i` and out-degree `j`,
/// right vertex with in-degree `k` and out-degree `l`, edge direction `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointKey {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub l: u32,
    pub dir: Direction,
}

/// Sparse joint out-in degree tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct JointTensor {
    entries: BTreeMap<JointKey, u64>,
}

impl JointTensor {
    pub fn entries(&self) -> &BTreeMap<JointKey, u64> {
        &self.entries
    }

    pub fn get(&self, key: &JointKey) -> u64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self, dir: Direction) -> u64 {
        self.entries.iter().filter(|(k, _)| k.dir == dir).map(|(_, &c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn compute_joint(g: &BipartiteDigraph) -> JointTensor {
    let p = degree_profile(g);
    let mut entries = BTreeMap::new();
    for e in g.edges() {
        let (v, a) = (e.left as usize, e.right as usize);
        let key = JointKey { i: p.left_in[v], j: p.left_out[v], k: p.right_in[a], l: p.right_out[a], dir: e.dir };
        *entries.entry(key).or_insert(0) += 1;
    }
    JointTensor { entries }
}

/// Recovers the four degree histograms from the tensor. A right vertex of
/// head size `k` contributes `k` entries with `dir = Head` and right in-degree
/// `k`, so the sum over those entries divided by `k` counts such vertices;
/// the other three histograms follow the same pattern.
pub fn joint_marginals(t: &JointTensor) -> DegreeHistograms {
    let mut head = BTreeMap::new();
    let mut tail = BTreeMap::new();
    let mut indeg = BTreeMap::new();
    let mut outdeg = BTreeMap::new();
    for (key, &c) in &t.entries {
        match key.dir {
            Direction::Head => {
                *head.entry(key.k).or_insert(0u64) += c;
                *outdeg.entry(key.j).or_insert(0u64) += c;
            }
            Direction::Tail => {
                *tail.entry(key.l).or_insert(0u64) += c;
                *indeg.entry(key.i).or_insert(0u64) += c;
            }
        }
    }
    let divide = |m: BTreeMap<u32, u64>| -> BTreeMap<u32, u64> {
        m.into_iter()
            .map(|(deg, sum)| {
                debug_assert!(deg > 0 && sum % deg as u64 == 0, "tensor not produced by compute_joint");
                (deg, sum / deg as u64)
            })
            .collect()
    };
    DegreeHistograms {
        head_size: divide(head),
        tail_size: divide(tail),
        in_degree: divide(indeg),
        out_degree: divide(outdeg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{to_bipartite, toy, DirectedHypergraph};

    #[test]
    fn fig1_cells() {
        let j = compute_joint(&to_bipartite(&toy::fig1()));
        let sum =
            |f: &dyn Fn(&JointKey) -> bool| -> u64 { j.entries().iter().filter(|(k, _)| f(k)).map(|(_, &c)| c).sum() };
        let a = sum(&|k| k.dir == Direction::Tail && k.i == 1 && k.j == 0 && k.k == 1);
        assert_eq!(a, 3);
        let b = sum(&|k| k.dir == Direction::Tail && k.i == 1 && k.j == 1 && k.l == 2);
        assert_eq!(b, 2);
        assert_eq!(j.total(Direction::Head), 3);
        assert_eq!(j.total(Direction::Tail), 5);
    }

    #[test]
    fn fig1_marginals() {
        let g = to_bipartite(&toy::fig1());
        let m = joint_marginals(&compute_joint(&g));
        assert_eq!(m.head_size, BTreeMap::from([(1, 3)]));
        assert_eq!(m, degree_profile(&g).histograms());
    }

    #[test]
    fn empty_and_single() {
        assert!(compute_joint(&to_bipartite(&DirectedHypergraph::empty())).is_empty());
        assert_eq!(joint_marginals(&JointTensor::default()), DegreeHistograms::default());
        let h = DirectedHypergraph::from_ids([], vec![(vec![1], vec![], 1)]).unwrap();
        let j = compute_joint(&to_bipartite(&h));
        assert_eq!(j.entries().len(), 1);
        assert_eq!(*j.entries().values().next().unwrap(), 1);
    }
}
