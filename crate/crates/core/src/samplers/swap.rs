use crate::hypercore::{BipartiteDigraph, DirectedEdge};

/// A parity swap: edges `e1 = (u, α, d)` and `e2 = (v, β, d)` are replaced by
/// `e3 = (u, β, d)` and `e4 = (v, α, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapProposal {
    pub e1: DirectedEdge,
    pub e2: DirectedEdge,
    pub e3: DirectedEdge,
    pub e4: DirectedEdge,
}

impl SwapProposal {
    pub fn new(e1: DirectedEdge, e2: DirectedEdge) -> Self {
        debug_assert_eq!(e1.dir, e2.dir);
        SwapProposal {
            e1,
            e2,
            e3: DirectedEdge::new(e1.left, e2.right, e1.dir),
            e4: DirectedEdge::new(e2.left, e1.right, e1.dir),
        }
    }

    /// The swap that undoes this one.
    pub fn reverse(&self) -> Self {
        SwapProposal::new(self.e3, self.e4)
    }
}

/// Whether `p` is a parity swap applicable to `g`.
pub fn is_valid_pso(g: &BipartiteDigraph, p: &SwapProposal) -> bool {
    p.e1.dir == p.e2.dir
        && p.e1.left != p.e2.left
        && p.e1.right != p.e2.right
        && p.e3 == DirectedEdge::new(p.e1.left, p.e2.right, p.e1.dir)
        && p.e4 == DirectedEdge::new(p.e2.left, p.e1.right, p.e1.dir)
        && g.has_edge(p.e1)
        && g.has_edge(p.e2)
        && !g.has_edge(p.e3)
        && !g.has_edge(p.e4)
}

fn left_degrees(g: &BipartiteDigraph, v: u32) -> (usize, usize) {
    (g.left_in(v).len(), g.left_out(v).len())
}

fn right_degrees(g: &BipartiteDigraph, a: u32) -> (usize, usize) {
    (g.right_in(a).len(), g.right_out(a).len())
}

/// Whether `p` is a restricted parity swap: a valid PSO whose two left
/// endpoints share (in, out) degrees, or whose two right endpoints do.
pub fn is_valid_rpso(g: &BipartiteDigraph, p: &SwapProposal) -> bool {
    is_valid_pso(g, p)
        && (left_degrees(g, p.e1.left) == left_degrees(g, p.e2.left)
            || right_degrees(g, p.e1.right) == right_degrees(g, p.e2.right))
}

pub fn apply_pso(g: &mut BipartiteDigraph, p: &SwapProposal) {
    debug_assert!(is_valid_pso(g, p), "invalid PSO {p:?}");
    g.remove_edge(p.e1);
    g.remove_edge(p.e2);
    g.insert_edge(p.e3);
    g.insert_edge(p.e4);
}

pub fn apply_rpso(g: &mut BipartiteDigraph, p: &SwapProposal) {
    debug_assert!(is_valid_rpso(g, p), "invalid RPSO {p:?}");
    apply_pso(g, p);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{compute_joint, degree_profile, to_bipartite, DirectedHypergraph, Direction};

    fn fig1() -> (DirectedHypergraph, BipartiteDigraph) {
        let h = crate::hypercore::toy::fig1();
        let g = to_bipartite(&h);
        (h, g)
    }

    fn right_of(h: &DirectedHypergraph, head: u64) -> u32 {
        let v = h.index_of(head).unwrap();
        h.edges().iter().position(|e| e.head == vec![v]).unwrap() as u32
    }

    #[test]
    fn fig5a_pso() {
        let (h, mut g) = fig1();
        let (green, orange) = (right_of(&h, 1), right_of(&h, 6));
        let (n1, n6) = (h.index_of(1).unwrap(), h.index_of(6).unwrap());
        let p = SwapProposal::new(
            DirectedEdge::new(n1, green, Direction::Head),
            DirectedEdge::new(n6, orange, Direction::Head),
        );
        assert!(is_valid_pso(&g, &p));
        let before = degree_profile(&g);
        apply_pso(&mut g, &p);
        assert_eq!(degree_profile(&g), before);
        assert!(g.has_edge(DirectedEdge::new(n1, orange, Direction::Head)));
        assert!(g.has_edge(DirectedEdge::new(n6, green, Direction::Head)));
        apply_pso(&mut g, &p.reverse());
        assert_eq!(g, to_bipartite(&h));
    }

    #[test]
    fn fig5a_rpso() {
        let (h, mut g) = fig1();
        let (green, orange) = (right_of(&h, 1), right_of(&h, 6));
        let (n2, n5) = (h.index_of(2).unwrap(), h.index_of(5).unwrap());
        let p = SwapProposal::new(
            DirectedEdge::new(n2, green, Direction::Tail),
            DirectedEdge::new(n5, orange, Direction::Tail),
        );
        assert!(is_valid_rpso(&g, &p));
        let before = compute_joint(&g);
        apply_rpso(&mut g, &p);
        assert_eq!(compute_joint(&g), before);
        apply_rpso(&mut g, &p.reverse());
        assert_eq!(g, to_bipartite(&h));
    }

    #[test]
    fn invalid_swaps_detected() {
        let (h, g) = fig1();
        let green = right_of(&h, 1);
        let n1 = h.index_of(1).unwrap();
        let e = DirectedEdge::new(n1, green, Direction::Head);
        assert!(!is_valid_pso(&g, &SwapProposal::new(e, e)));
    }
}
