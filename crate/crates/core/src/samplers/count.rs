//! Exact number of applicable parity swaps, `d(G) = J − C + 2B`, and its
//! change under a single swap.
//!
//! Per direction, `J` counts same-direction edge pairs sharing no endpoint,
//! `C` counts caterpillars (three-edge paths, each blocking the pair formed by
//! its end edges) and `B` counts butterflies (2×2 bicliques, counted twice in
//! `C`).

use super::swap::SwapProposal;
use crate::hypercore::{BipartiteDigraph, Direction};

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn disjoint_pairs(g: &BipartiteDigraph, d: Direction) -> u64 {
    let m = g.edge_count(d) as u64;
    let sq = |x: usize| (x as u64) * (x as u64);
    let left: u64 = (0..g.left_count() as u32).map(|v| sq(g.left_adj(v, d).len())).sum();
    let right: u64 = (0..g.right_count() as u32).map(|a| sq(g.right_adj(a, d).len())).sum();
    (m * (m + 1) - left - right) / 2
}

fn caterpillars(g: &BipartiteDigraph, d: Direction) -> u64 {
    let mut c = 0u64;
    for v in 0..g.left_count() as u32 {
        let dv = g.left_adj(v, d).len() as u64;
        for &a in g.left_adj(v, d) {
            c += (dv - 1) * (g.right_adj(a, d).len() as u64 - 1);
        }
    }
    c
}

/// Sum over unordered left pairs of `C(common neighbors, 2)`.
fn butterflies(g: &BipartiteDigraph, d: Direction) -> u64 {
    let n = g.left_count();
    let mut common = vec![0u64; n];
    let mut touched = Vec::new();
    let mut b = 0u64;
    for u in 0..n as u32 {
        for &a in g.left_adj(u, d) {
            for &w in g.right_adj(a, d) {
                if w > u {
                    if common[w as usize] == 0 {
                        touched.push(w);
                    }
                    common[w as usize] += 1;
                }
            }
        }
        for &w in &touched {
            let c = common[w as usize];
            b += c * (c - 1) / 2;
            common[w as usize] = 0;
        }
        touched.clear();
    }
    b
}

/// Number of unordered edge pairs that form a valid parity swap.
pub fn state_degree_pso(g: &BipartiteDigraph) -> u64 {
    [Direction::Head, Direction::Tail]
        .into_iter()
        .map(|d| disjoint_pairs(g, d) + 2 * butterflies(g, d) - caterpillars(g, d))
        .sum()
}

/// `d(G') − d(G)` where `G'` results from applying `p` to `g`.
///
/// The disjoint-pair term is invariant because degrees are. Caterpillars
/// change by `(deg u − deg v)(deg β − deg α)`. Butterflies only change for
/// pairs `(u, w)` and `(v, w)` with `w` adjacent to exactly one of `α`, `β`;
/// the pair `(u, v)` keeps its common neighborhood.
pub fn delta_state_degree_pso(g: &BipartiteDigraph, p: &SwapProposal) -> i64 {
    let d = p.e1.dir;
    let (u, v, alpha, beta) = (p.e1.left, p.e2.left, p.e1.right, p.e2.right);
    let deg_l = |x: u32| g.left_adj(x, d).len() as i64;
    let deg_r = |x: u32| g.right_adj(x, d).len() as i64;
    let dc = (deg_l(u) - deg_l(v)) * (deg_r(beta) - deg_r(alpha));

    let common = |x: u32, w: u32| sorted_intersection_len(g.left_adj(x, d), g.left_adj(w, d)) as i64;
    let na = g.right_adj(alpha, d);
    let nb = g.right_adj(beta, d);
    let mut db = 0i64;
    for &w in nb {
        if w != u && w != v && na.binary_search(&w).is_err() {
            db += common(u, w) - common(v, w) + 1;
        }
    }
    for &w in na {
        if w != u && w != v && nb.binary_search(&w).is_err() {
            db += common(v, w) - common(u, w) + 1;
        }
    }
    2 * db - dc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{to_bipartite, DirectedEdge, DirectedHypergraph};
    use crate::samplers::swap::{apply_pso, is_valid_pso};

    #[test]
    fn single_edge_has_no_swap() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![1], vec![], 1)]).unwrap();
        assert_eq!(state_degree_pso(&to_bipartite(&h)), 0);
    }

    #[test]
    fn two_disjoint_edges_have_one_swap() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![1], vec![], 1), (vec![2], vec![], 1)]).unwrap();
        assert_eq!(state_degree_pso(&to_bipartite(&h)), 1);
    }

    #[test]
    fn reverse_delta_negates() {
        let h = crate::hypercore::toy::fig1();
        let mut g = to_bipartite(&h);
        let p = SwapProposal::new(
            DirectedEdge::new(h.index_of(1).unwrap(), 0, Direction::Head),
            DirectedEdge::new(h.index_of(6).unwrap(), 2, Direction::Head),
        );
        assert!(is_valid_pso(&g, &p));
        let before = state_degree_pso(&g) as i64;
        let delta = delta_state_degree_pso(&g, &p);
        apply_pso(&mut g, &p);
        assert_eq!(state_degree_pso(&g) as i64, before + delta);
        assert_eq!(delta_state_degree_pso(&g, &p.reverse()), -delta);
    }

    #[test]
    fn symmetric_swap_has_zero_delta() {
        // Two disjoint copies of the same star: swapping the mirrored edges
        // maps the graph to an isomorphic one with the same local structure.
        let h = DirectedHypergraph::from_ids([], vec![(vec![1], vec![], 1), (vec![2], vec![], 1)]).unwrap();
        let g = to_bipartite(&h);
        let p = SwapProposal::new(DirectedEdge::new(0, 0, Direction::Head), DirectedEdge::new(1, 1, Direction::Head));
        assert_eq!(delta_state_degree_pso(&g, &p), 0);
    }

    /// Unordered same-direction edge pairs with distinct endpoints whose
    /// swapped edges are both absent.
    fn brute_force(g: &BipartiteDigraph) -> u64 {
        let edges: Vec<DirectedEdge> = g.edges().collect();
        let set: std::collections::HashSet<DirectedEdge> = edges.iter().copied().collect();
        let mut n = 0;
        for (i, a) in edges.iter().enumerate() {
            for b in &edges[i + 1..] {
                if a.dir == b.dir
                    && a.left != b.left
                    && a.right != b.right
                    && !set.contains(&DirectedEdge::new(a.left, b.right, a.dir))
                    && !set.contains(&DirectedEdge::new(b.left, a.right, a.dir))
                {
                    n += 1;
                }
            }
        }
        n
    }

    fn random_graph(rng: &mut crate::rng::Rng, max_edges: usize) -> BipartiteDigraph {
        use crate::synth::{random_directed, SizeDistribution::Uniform};
        use rand::Rng as _;
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=4);
        let mut g = to_bipartite(&random_directed(rng, n, m, Uniform(0, 2), Uniform(0, 2)));
        while g.total_edges() > max_edges {
            g = to_bipartite(&random_directed(rng, n, m, Uniform(0, 2), Uniform(0, 2)));
        }
        g
    }

    #[test]
    fn matches_brute_force_count() {
        let mut rng = crate::rng::stream(21, 0, 0);
        for _ in 0..100 {
            let g = random_graph(&mut rng, 12);
            assert_eq!(state_degree_pso(&g), brute_force(&g));
        }
    }

    #[test]
    fn delta_tracks_recount_along_walk() {
        use rand::seq::IndexedRandom;
        let mut rng = crate::rng::stream(22, 0, 0);
        let h = crate::synth::random_directed(
            &mut rng,
            10,
            12,
            crate::synth::SizeDistribution::Uniform(1, 3),
            crate::synth::SizeDistribution::Uniform(1, 3),
        );
        let mut g = to_bipartite(&h);
        let mut d = state_degree_pso(&g) as i64;
        assert!(d > 0);
        let mut applied = 0;
        while applied < 10_000 {
            let edges: Vec<DirectedEdge> = g.edges().collect();
            let pair: Vec<&DirectedEdge> = edges.choose_multiple(&mut rng, 2).collect();
            if pair[0].dir != pair[1].dir {
                continue;
            }
            let p = SwapProposal::new(*pair[0], *pair[1]);
            if !is_valid_pso(&g, &p) {
                continue;
            }
            d += delta_state_degree_pso(&g, &p);
            apply_pso(&mut g, &p);
            assert_eq!(d, state_degree_pso(&g) as i64);
            assert_eq!(d as u64, brute_force(&g));
            applied += 1;
        }
    }
}
