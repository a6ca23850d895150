//! Markov-chain samplers over the bipartite representation.
//!
//! * [`Model::Degs`] – parity swaps; preserves all four degree sequences.
//! * [`Model::Joint`] – restricted parity swaps; also preserves the JOINT.
//! * [`Model::DegsMh`] – Metropolis-Hastings over uniformly drawn swaps,
//!   with exact swap-count bookkeeping. Same ensemble as `Degs`, slower.
//! * [`Model::Null`] – independent baseline keeping only head/tail sizes.

mod count;
mod null;
mod state;
mod swap;

use std::fmt;
use std::str::FromStr;

pub use count::{delta_state_degree_pso, state_degree_pso};
pub use null::null_sample;
pub use state::{nudhy_degs_mh_step, nudhy_degs_step, nudhy_joint_step, ChainState, ChainStats};
pub use swap::{apply_pso, apply_rpso, is_valid_pso, is_valid_rpso, SwapProposal};

use crate::exec::{self, Execution};
use crate::hypercore::{to_bipartite, to_hypergraph, DirectedHypergraph};
use crate::rng::{self, role};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Degs,
    Joint,
    DegsMh,
    Null,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degs" => Ok(Model::Degs),
            "joint" => Ok(Model::Joint),
            "degs-mh" => Ok(Model::DegsMh),
            "null" => Ok(Model::Null),
            _ => Err(Error::InvalidArgument(format!("unknown model '{s}'"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Degs => "degs",
            Model::Joint => "joint",
            Model::DegsMh => "degs-mh",
            Model::Null => "null",
        })
    }
}

/// Chain length: a fixed count, or `ceil(20·w)` with `w` the number of
/// bipartite edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Steps {
    #[default]
    Auto,
    Fixed(u64),
}

impl Steps {
    pub fn resolve(self, h: &DirectedHypergraph) -> u64 {
        match self {
            Steps::Auto => 20 * h.incidence_count() as u64,
            Steps::Fixed(s) => s,
        }
    }
}

impl FromStr for Steps {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Steps::Auto);
        }
        s.parse()
            .map(Steps::Fixed)
            .map_err(|_| Error::InvalidArgument(format!("steps must be 'auto' or an integer, got '{s}'")))
    }
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Auto => f.write_str("auto"),
            Steps::Fixed(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub model: Model,
    pub steps: Steps,
    pub seed: u64,
    pub sample_count: usize,
    /// `None`: every sample comes from its own chain restarted at the
    /// observed graph. `Some(t)`: one chain runs `steps` steps, emits a
    /// sample, then emits another every `t` steps.
    pub thinning: Option<u64>,
    /// Overrides the coin bias `|D⁺| / |D|`.
    pub heads_probability: Option<f64>,
    pub execution: Execution,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            model: Model::Degs,
            steps: Steps::Auto,
            seed: 0,
            sample_count: 33,
            thinning: None,
            heads_probability: None,
            execution: Execution::Parallel,
        }
    }
}

fn chain_from(h: &DirectedHypergraph, cfg: &ChainConfig, index: u64) -> Result<ChainState> {
    ChainState::new(to_bipartite(h), rng::stream(cfg.seed, role::SAMPLE, index), cfg.model, cfg.heads_probability)
}

/// Draws `cfg.sample_count` samples; deterministic in `(h, cfg)` and
/// independent of the execution mode.
pub fn run_chain(h: &DirectedHypergraph, cfg: &ChainConfig) -> Result<Vec<DirectedHypergraph>> {
    let steps = cfg.steps.resolve(h);
    if cfg.model == Model::Null {
        return exec::try_map_indexed(cfg.execution, cfg.sample_count, |i| {
            null_sample(h, &mut rng::stream(cfg.seed, role::NULL, i as u64))
        });
    }
    match cfg.thinning {
        None => exec::try_map_indexed(cfg.execution, cfg.sample_count, |i| {
            let mut state = chain_from(h, cfg, i as u64)?;
            state.run(steps)?;
            to_hypergraph(state.graph())
        }),
        Some(t) => {
            let mut state = chain_from(h, cfg, 0)?;
            state.run(steps)?;
            let mut out = Vec::with_capacity(cfg.sample_count);
            for i in 0..cfg.sample_count {
                if i > 0 {
                    state.run(t)?;
                }
                out.push(to_hypergraph(state.graph())?);
            }
            Ok(out)
        }
    }
}
