//! Structural measures compared between observed and sampled hypergraphs:
//! reciprocity, hyper-coreness, structural entropy, centrality on the
//! weighted projection and the bipartite graph, and multi-order Laplacian
//! spectra.

mod centrality;
mod coreness;
mod entropy;
mod reciprocity;
mod spectrum;

pub use centrality::{centrality_ndcg, hits, pagerank, project_weighted, Hits, WeightedDigraph};
pub use coreness::{core_members, core_shells, hyper_core_decomposition, CorenessProfile};
pub use entropy::{binary_entropy, structural_entropy, GroupEntropy};
pub use reciprocity::{
    hyperedge_reciprocity, hypergraph_reciprocity, reciprocal_candidates, search_reciprocal_set, EdgeReciprocity,
    ReciprocityConfig, ReciprocityReport,
};
pub use spectrum::{
    multi_order_laplacian, spectral_distance, spectrum, LaplacianOrder, SpectrumConfig, SpectrumSummary,
};

pub use crate::diagnostics::Side;
