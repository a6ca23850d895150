//! Directed hypergraphs, their bipartite representation, degree sequences
//! and the joint out-in degree tensor.
//!
//! A [`DirectedHypergraph`] stores hyperedges in canonical form: node sides
//! sorted, hyperedges sorted by `(head, tail)` and identical hyperedges folded
//! into one entry with a multiplicity. Two hypergraphs are equal exactly when
//! they have the same node set and the same multiset of hyperedges.
//!
//! The bipartite view ([`BipartiteDigraph`]) has one left vertex per node and
//! one right vertex per hyperedge copy, so a hyperedge of multiplicity `w`
//! becomes `w` independent right vertices.

mod bipartite;
mod hypergraph;
mod io;
mod joint;

pub use bipartite::{
    degree_profile, to_bipartite, to_hypergraph, BipartiteDigraph, DegreeHistograms, DegreeProfile, DirectedEdge,
    Direction,
};
pub use hypergraph::{
    merge_to_undirected, undirected_to_directed, DirectedHypergraph, Hyperedge, NodeId, UndirectedEdge,
    UndirectedHypergraph,
};
pub use io::{
    parse_hypergraph, parse_labels, parse_undirected, read_hypergraph, read_undirected, serialize_hypergraph,
    serialize_undirected,
};
pub use joint::{compute_joint, joint_marginals, JointKey, JointTensor};

#[cfg(test)]
pub(crate) mod toy {
    use super::*;

    /// Three hyperedges on nodes 1..=6: every head is a singleton, tails
    /// have sizes 2, 1, 2.
    pub const FIG1: &str = "1|2,6\n3|4\n6|3,5\n";

    pub fn fig1() -> DirectedHypergraph {
        parse_hypergraph(FIG1).unwrap()
    }
}
