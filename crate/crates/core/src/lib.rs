//! Null models for directed hypergraphs.
//!
//! The crate samples directed hypergraphs uniformly from two micro-canonical
//! ensembles: all hypergraphs sharing the node in/out-degrees and the
//! head/tail size sequences ([`samplers::Model::Degs`]), and the stricter
//! ensemble that also fixes the joint out-in degree tensor
//! ([`samplers::Model::Joint`]). Sampling runs on the bipartite
//! representation of the hypergraph ([`hypercore::BipartiteDigraph`]) through
//! degree-preserving edge swaps.
//!
//! The remaining modules compare observed hypergraphs against samples:
//! convergence and ranking statistics ([`diagnostics`]), group affinity
//! ([`affinity`]), reciprocity, cores, entropy, centrality and spectra
//! ([`structmetrics`]), economic-complexity indices ([`econ`]) and nonlinear
//! SIS contagion ([`contagion`]).

pub mod affinity;
pub mod contagion;
pub mod diagnostics;
pub mod econ;
mod error;
pub mod exec;
pub mod fmt;
pub mod hypercore;
pub mod rng;
pub mod samplers;
pub mod structmetrics;
pub mod synth;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
