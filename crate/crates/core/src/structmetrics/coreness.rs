//! Directed (k, m)-hyper-cores.
//!
//! On the head side, a node counts one membership (times multiplicity) for
//! every hyperedge whose head contains it and whose size is at least `m`.
//! Removing a node drops it from heads only, so the size of a hyperedge
//! during peeling is `|h ∩ S| + |t|`. The tail side is symmetric.

use crate::diagnostics::Side;
use crate::hypercore::{DirectedHypergraph, Hyperedge};

fn sides(e: &Hyperedge, side: Side) -> (&[u32], usize) {
    match side {
        Side::Head => (&e.head, e.tail.len()),
        Side::Tail => (&e.tail, e.head.len()),
    }
}

struct Peel<'a> {
    h: &'a DirectedHypergraph,
    side: Side,
    m: usize,
    incident: Vec<Vec<usize>>,
    size: Vec<usize>,
    degree: Vec<u64>,
    alive: Vec<bool>,
}

impl<'a> Peel<'a> {
    fn new(h: &'a DirectedHypergraph, side: Side, m: usize) -> Self {
        let n = h.node_count();
        let mut incident = vec![Vec::new(); n];
        let mut degree = vec![0u64; n];
        let mut size = Vec::with_capacity(h.edges().len());
        for (i, e) in h.edges().iter().enumerate() {
            let (members, other) = sides(e, side);
            size.push(members.len() + other);
            for &v in members {
                incident[v as usize].push(i);
                if members.len() + other >= m {
                    degree[v as usize] += e.multiplicity as u64;
                }
            }
        }
        Peel { h, side, m, incident, size, degree, alive: vec![true; n] }
    }

    fn remove(&mut self, v: usize) {
        self.alive[v] = false;
        for &i in &self.incident[v] {
            let before = self.size[i];
            self.size[i] -= 1;
            if before == self.m {
                let e = &self.h.edges()[i];
                for &w in sides(e, self.side).0 {
                    if self.alive[w as usize] {
                        self.degree[w as usize] -= e.multiplicity as u64;
                    }
                }
            }
        }
    }

    fn next_min(&self) -> Option<usize> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).min_by_key(|&v| (self.degree[v], v))
    }
}

/// Shell index of every node for size threshold `m`: the largest `k` such
/// that the node lies in the `(k, m)`-core, 0 if none.
pub fn core_shells(h: &DirectedHypergraph, side: Side, m: usize) -> Vec<u32> {
    let mut p = Peel::new(h, side, m);
    let mut shell = vec![0u32; h.node_count()];
    let mut k = 0u64;
    while let Some(v) = p.next_min() {
        k = k.max(p.degree[v]);
        shell[v] = k as u32;
        p.remove(v);
    }
    shell
}

/// Membership mask of the `(k, m)`-core.
pub fn core_members(h: &DirectedHypergraph, side: Side, k: u64, m: usize) -> Vec<bool> {
    let mut p = Peel::new(h, side, m);
    while let Some(v) = (0..p.alive.len()).find(|&v| p.alive[v] && p.degree[v] < k) {
        p.remove(v);
    }
    p.alive
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorenessProfile {
    pub side: Side,
    /// `shells[m - 2][v]` for `m = 2..=max_size`.
    pub shells: Vec<Vec<u32>>,
    /// Sum of shell indices over `m`.
    pub hyper_coreness: Vec<u64>,
}

impl CorenessProfile {
    pub fn max_size(&self) -> usize {
        self.shells.len() + 1
    }

    pub fn shell(&self, m: usize, v: u32) -> u32 {
        if m < 2 || m > self.max_size() {
            return 0;
        }
        self.shells[m - 2][v as usize]
    }
}

pub fn hyper_core_decomposition(h: &DirectedHypergraph, side: Side) -> CorenessProfile {
    let shells: Vec<Vec<u32>> = (2..=h.max_edge_size()).map(|m| core_shells(h, side, m)).collect();
    let mut hc = vec![0u64; h.node_count()];
    for s in &shells {
        for (acc, &c) in hc.iter_mut().zip(s) {
            *acc += c as u64;
        }
    }
    CorenessProfile { side, shells, hyper_coreness: hc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::parse_hypergraph;
    use crate::rng::{stream, Rng};
    use crate::synth::{random_directed, SizeDistribution::Uniform};
    use rand::{Rng as _, SeedableRng};

    /// Union of every node set satisfying the core condition.
    fn oracle_core(h: &DirectedHypergraph, side: Side, k: u64, m: usize) -> Vec<bool> {
        let n = h.node_count();
        let mut union = 0u32;
        for s in 0u32..(1 << n) {
            let ok = (0..n).filter(|v| s >> v & 1 == 1).all(|v| {
                let mut d = 0;
                for e in h.edges() {
                    let (members, other) = sides(e, side);
                    if members.contains(&(v as u32)) {
                        let inside = members.iter().filter(|&&w| s >> w & 1 == 1).count();
                        if inside + other >= m {
                            d += e.multiplicity as u64;
                        }
                    }
                }
                d >= k
            });
            if ok {
                union |= s;
            }
        }
        (0..n).map(|v| union >> v & 1 == 1).collect()
    }

    #[test]
    fn single_edge_example() {
        // Nodes a, b, c = 1, 2, 3.
        let h = parse_hypergraph("1|2,3\n").unwrap();
        assert_eq!(core_shells(&h, Side::Head, 3), vec![1, 0, 0]);
        assert_eq!(core_shells(&h, Side::Tail, 3), vec![0, 1, 1]);
        let p = hyper_core_decomposition(&h, Side::Tail);
        assert_eq!(p.max_size(), 3);
        assert_eq!(p.hyper_coreness, vec![0, 2, 2]);
    }

    #[test]
    fn empty_is_all_zero() {
        let h = DirectedHypergraph::empty();
        assert!(hyper_core_decomposition(&h, Side::Head).shells.is_empty());
        let iso = parse_hypergraph("# isolated: 1,2\n").unwrap();
        assert_eq!(hyper_core_decomposition(&iso, Side::Head).hyper_coreness, vec![0, 0]);
    }

    #[test]
    fn matches_subset_oracle() {
        let mut rng = stream(7, 9, 0);
        for trial in 0..50 {
            let n = rng.random_range(3..=10);
            let m = rng.random_range(1..=12);
            let h = random_directed(&mut rng, n, m, Uniform(1, 3), Uniform(0, 3));
            let side = if trial % 2 == 0 { Side::Head } else { Side::Tail };
            for m in 2..=h.max_edge_size() {
                let shells = core_shells(&h, side, m);
                let kmax = shells.iter().copied().max().unwrap_or(0) as u64 + 1;
                for k in 1..=kmax {
                    let oracle = oracle_core(&h, side, k, m);
                    let expect: Vec<bool> = shells.iter().map(|&c| c as u64 >= k).collect();
                    assert_eq!(oracle, expect, "trial {trial} m {m} k {k}");
                    assert_eq!(core_members(&h, side, k, m), oracle);
                }
            }
        }
    }

    #[test]
    fn nesting_holds() {
        let mut rng = Rng::seed_from_u64(3);
        let h = random_directed(&mut rng, 40, 120, Uniform(1, 4), Uniform(1, 4));
        for side in [Side::Head, Side::Tail] {
            let p = hyper_core_decomposition(&h, side);
            for m in 2..p.max_size() {
                for v in 0..h.node_count() as u32 {
                    assert!(p.shell(m + 1, v) <= p.shell(m, v));
                }
            }
        }
    }
}
