use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hypergraph::{DirectedHypergraph, Hyperedge, NodeId};
use crate::{Error, Result};

/// Direction of a bipartite edge: `Head` (+1) joins a node to a hyperedge
/// whose head contains it, `Tail` (−1) to one whose tail contains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Head,
    Tail,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Head => 1,
            Direction::Tail => -1,
        }
    }
}

/// Signed edge `(left, right, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub left: u32,
    pub right: u32,
    pub dir: Direction,
}

impl DirectedEdge {
    pub fn new(left: u32, right: u32, dir: Direction) -> Self {
        DirectedEdge { left, right, dir }
    }
}

/// Bipartite digraph with sorted adjacency lists on both sides.
///
/// For a left vertex `v`: `N⁺(v)` lists right vertices whose head contains
/// `v`, `N⁻(v)` those whose tail contains `v`. For a right vertex `α`:
/// `N⁻(α)` is its head and `N⁺(α)` its tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteDigraph {
    node_ids: Arc<[NodeId]>,
    left_out: Vec<Vec<u32>>,
    left_in: Vec<Vec<u32>>,
    right_in: Vec<Vec<u32>>,
    right_out: Vec<Vec<u32>>,
}

impl BipartiteDigraph {
    /// Builds from an edge list. Left vertex `i` carries external id
    /// `node_ids[i]`.
    pub fn from_edges(
        node_ids: Arc<[NodeId]>,
        right_count: usize,
        edges: impl IntoIterator<Item = DirectedEdge>,
    ) -> Result<Self> {
        let n = node_ids.len();
        let mut g = BipartiteDigraph {
            node_ids,
            left_out: vec![Vec::new(); n],
            left_in: vec![Vec::new(); n],
            right_in: vec![Vec::new(); right_count],
            right_out: vec![Vec::new(); right_count],
        };
        for e in edges {
            if e.left as usize >= n || e.right as usize >= right_count {
                return Err(Error::InvalidArgument(format!("edge {e:?} out of range")));
            }
            match e.dir {
                Direction::Head => {
                    g.left_out[e.left as usize].push(e.right);
                    g.right_in[e.right as usize].push(e.left);
                }
                Direction::Tail => {
                    g.left_in[e.left as usize].push(e.right);
                    g.right_out[e.right as usize].push(e.left);
                }
            }
        }
        for list in g.left_out.iter_mut().chain(&mut g.left_in).chain(&mut g.right_in).chain(&mut g.right_out) {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument("duplicate bipartite edge".into()));
            }
        }
        Ok(g)
    }

    pub fn node_ids(&self) -> &Arc<[NodeId]> {
        &self.node_ids
    }

    pub fn left_count(&self) -> usize {
        self.left_out.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_in.len()
    }

    /// `N⁺(v)`: hyperedge copies with `v` in the head.
    pub fn left_out(&self, v: u32) -> &[u32] {
        &self.left_out[v as usize]
    }

    /// `N⁻(v)`: hyperedge copies with `v` in the tail.
    pub fn left_in(&self, v: u32) -> &[u32] {
        &self.left_in[v as usize]
    }

    /// `N⁻(α)`: the head of copy `α`.
    pub fn right_in(&self, a: u32) -> &[u32] {
        &self.right_in[a as usize]
    }

    /// `N⁺(α)`: the tail of copy `α`.
    pub fn right_out(&self, a: u32) -> &[u32] {
        &self.right_out[a as usize]
    }

    /// Neighbors of left vertex `v` through edges of direction `d`.
    pub fn left_adj(&self, v: u32, d: Direction) -> &[u32] {
        match d {
            Direction::Head => self.left_out(v),
            Direction::Tail => self.left_in(v),
        }
    }

    /// Neighbors of right vertex `a` through edges of direction `d`.
    pub fn right_adj(&self, a: u32, d: Direction) -> &[u32] {
        match d {
            Direction::Head => self.right_in(a),
            Direction::Tail => self.right_out(a),
        }
    }

    pub fn has_edge(&self, e: DirectedEdge) -> bool {
        self.left_adj(e.left, e.dir).binary_search(&e.right).is_ok()
    }

    pub fn edge_count(&self, d: Direction) -> usize {
        match d {
            Direction::Head => self.left_out.iter().map(Vec::len).sum(),
            Direction::Tail => self.left_in.iter().map(Vec::len).sum(),
        }
    }

    pub fn total_edges(&self) -> usize {
        self.edge_count(Direction::Head) + self.edge_count(Direction::Tail)
    }

    /// All edges, ordered by left vertex, then direction, then right vertex.
    pub fn edges(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        (0..self.left_count() as u32).flat_map(move |v| {
            let h = self.left_out(v).iter().map(move |&a| DirectedEdge::new(v, a, Direction::Head));
            let t = self.left_in(v).iter().map(move |&a| DirectedEdge::new(v, a, Direction::Tail));
            h.chain(t)
        })
    }

    pub(crate) fn insert_edge(&mut self, e: DirectedEdge) {
        let (l, r) = match e.dir {
            Direction::Head => (&mut self.left_out[e.left as usize], &mut self.right_in[e.right as usize]),
            Direction::Tail => (&mut self.left_in[e.left as usize], &mut self.right_out[e.right as usize]),
        };
        let i = l.binary_search(&e.right).expect_err("edge already present");
        l.insert(i, e.right);
        let j = r.binary_search(&e.left).expect_err("edge already present");
        r.insert(j, e.left);
    }

    pub(crate) fn remove_edge(&mut self, e: DirectedEdge) {
        let (l, r) = match e.dir {
            Direction::Head => (&mut self.left_out[e.left as usize], &mut self.right_in[e.right as usize]),
            Direction::Tail => (&mut self.left_in[e.left as usize], &mut self.right_out[e.right as usize]),
        };
        let i = l.binary_search(&e.right).expect("edge present");
        l.remove(i);
        let j = r.binary_search(&e.left).expect("edge present");
        r.remove(j);
    }

    /// Checks that the left and right adjacency indices describe the same
    /// edge set and are sorted without duplicates.
    pub fn validate(&self) -> Result<()> {
        let sorted = |l: &Vec<u32>| l.windows(2).all(|w| w[0] < w[1]);
        let all = self.left_out.iter().chain(&self.left_in).chain(&self.right_in).chain(&self.right_out);
        if !all.into_iter().all(sorted) {
            return Err(Error::Invariant("adjacency list unsorted or duplicated".into()));
        }
        for d in [Direction::Head, Direction::Tail] {
            let mut from_left = 0usize;
            for v in 0..self.left_count() as u32 {
                for &a in self.left_adj(v, d) {
                    if self.right_adj(a, d).binary_search(&v).is_err() {
                        return Err(Error::Invariant(format!("edge ({v},{a},{d:?}) missing on right side")));
                    }
                    from_left += 1;
                }
            }
            let from_right: usize = (0..self.right_count() as u32).map(|a| self.right_adj(a, d).len()).sum();
            if from_left != from_right {
                return Err(Error::Invariant("left and right edge counts differ".into()));
            }
        }
        Ok(())
    }
}

/// Maps a hypergraph to its bipartite digraph. Hyperedge copies become
/// consecutive right vertices in canonical edge order.
pub fn to_bipartite(h: &DirectedHypergraph) -> BipartiteDigraph {
    let n = h.node_count();
    let mut g = BipartiteDigraph {
        node_ids: Arc::from(h.nodes()),
        left_out: vec![Vec::new(); n],
        left_in: vec![Vec::new(); n],
        right_in: Vec::with_capacity(h.edge_count()),
        right_out: Vec::with_capacity(h.edge_count()),
    };
    for (a, e) in h.copies().enumerate() {
        let a = a as u32;
        for &v in &e.head {
            g.left_out[v as usize].push(a);
        }
        for &v in &e.tail {
            g.left_in[v as usize].push(a);
        }
        g.right_in.push(e.head.clone());
        g.right_out.push(e.tail.clone());
    }
    g
}

/// Inverse of [`to_bipartite`]: right vertices with identical neighborhoods
/// fold into one hyperedge with multiplicity.
pub fn to_hypergraph(g: &BipartiteDigraph) -> Result<DirectedHypergraph> {
    let edges = (0..g.right_count() as u32)
        .map(|a| Hyperedge::new(g.right_in(a).to_vec(), g.right_out(a).to_vec(), 1))
        .collect::<Result<Vec<_>>>()?;
    DirectedHypergraph::from_dense(g.node_ids.to_vec(), edges)
}

/// The four degree sequences of a bipartite digraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DegreeProfile {
    /// Tail memberships per node.
    pub left_in: Vec<u32>,
    /// Head memberships per node.
    pub left_out: Vec<u32>,
    /// Head size per hyperedge copy.
    pub right_in: Vec<u32>,
    /// Tail size per hyperedge copy.
    pub right_out: Vec<u32>,
}

/// Degree histograms, excluding degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeHistograms {
    pub head_size: BTreeMap<u32, u64>,
    pub tail_size: BTreeMap<u32, u64>,
    pub in_degree: BTreeMap<u32, u64>,
    pub out_degree: BTreeMap<u32, u64>,
}

fn histogram(xs: &[u32]) -> BTreeMap<u32, u64> {
    let mut h = BTreeMap::new();
    for &x in xs.iter().filter(|&&x| x > 0) {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

impl DegreeProfile {
    pub fn histograms(&self) -> DegreeHistograms {
        DegreeHistograms {
            head_size: histogram(&self.right_in),
            tail_size: histogram(&self.right_out),
            in_degree: histogram(&self.left_in),
            out_degree: histogram(&self.left_out),
        }
    }
}

pub fn degree_profile(g: &BipartiteDigraph) -> DegreeProfile {
    let lens = |ls: &[Vec<u32>]| ls.iter().map(|l| l.len() as u32).collect();
    DegreeProfile {
        left_in: lens(&g.left_in),
        left_out: lens(&g.left_out),
        right_in: lens(&g.right_in),
        right_out: lens(&g.right_out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::toy;

    fn left(g: &BipartiteDigraph, id: NodeId) -> u32 {
        g.node_ids().iter().position(|&x| x == id).unwrap() as u32
    }

    #[test]
    fn fig1_degrees() {
        let g = to_bipartite(&toy::fig1());
        let p = degree_profile(&g);
        let mut in1out0: Vec<NodeId> = (0..6u32)
            .filter(|&v| p.left_in[v as usize] == 1 && p.left_out[v as usize] == 0)
            .map(|v| g.node_ids()[v as usize])
            .collect();
        in1out0.sort();
        assert_eq!(in1out0, vec![2, 4, 5]);
        let v2 = left(&g, 2) as usize;
        assert_eq!((p.left_in[v2], p.left_out[v2]), (1, 0));
        let mut tails = p.right_out.clone();
        tails.sort();
        assert_eq!(tails, vec![1, 2, 2]);
        assert_eq!(p.right_in, vec![1, 1, 1]);
    }

    #[test]
    fn round_trip_fig1() {
        let h = toy::fig1();
        assert_eq!(to_hypergraph(&to_bipartite(&h)).unwrap(), h);
    }

    #[test]
    fn empty_graph() {
        let g = to_bipartite(&DirectedHypergraph::empty());
        assert_eq!(g.total_edges(), 0);
        assert_eq!(degree_profile(&g), DegreeProfile::default());
    }

    #[test]
    fn overlapping_sides_give_two_edges() {
        let h = DirectedHypergraph::from_ids([], vec![(vec![7], vec![7], 1)]).unwrap();
        let g = to_bipartite(&h);
        let es: Vec<_> = g.edges().collect();
        assert_eq!(es, vec![DirectedEdge::new(0, 0, Direction::Head), DirectedEdge::new(0, 0, Direction::Tail)]);
    }

    #[test]
    fn empty_right_vertex_is_rejected() {
        let g =
            BipartiteDigraph::from_edges(Arc::from(vec![1u64]), 2, [DirectedEdge::new(0, 0, Direction::Head)]).unwrap();
        assert!(to_hypergraph(&g).is_err());
    }

    #[test]
    fn duplicate_right_vertices_fold() {
        let ids: Arc<[NodeId]> = Arc::from(vec![1u64, 2]);
        let edges = [
            DirectedEdge::new(0, 0, Direction::Head),
            DirectedEdge::new(1, 0, Direction::Tail),
            DirectedEdge::new(0, 1, Direction::Head),
            DirectedEdge::new(1, 1, Direction::Tail),
        ];
        let g = BipartiteDigraph::from_edges(ids, 2, edges).unwrap();
        let h = to_hypergraph(&g).unwrap();
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].multiplicity, 2);
        let back: Vec<_> = to_bipartite(&h).edges().collect();
        let orig: Vec<_> = g.edges().collect();
        assert_eq!(back, orig);
    }

    #[test]
    fn insert_remove_keep_valid() {
        let mut g = to_bipartite(&toy::fig1());
        let e = DirectedEdge::new(0, 1, Direction::Head);
        assert!(!g.has_edge(e));
        g.insert_edge(e);
        g.validate().unwrap();
        assert!(g.has_edge(e));
        g.remove_edge(e);
        g.validate().unwrap();
        assert_eq!(g, to_bipartite(&toy::fig1()));
    }
}
