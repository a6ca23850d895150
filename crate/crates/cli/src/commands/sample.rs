use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use nudhy::diagnostics::{arsd_trace, is_plateau, TraceConfig};
use nudhy::fmt::g12;
use nudhy::hypercore::{
    compute_joint, degree_profile, parse_hypergraph, parse_undirected, serialize_hypergraph, to_bipartite,
    undirected_to_directed, DirectedHypergraph,
};
use nudhy::samplers::{run_chain, ChainConfig, Model, Steps};

use crate::run::{csv_bytes, sha256_hex, Run};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Read the input as an undirected hypergraph and lift each hyperedge
    /// `S` to `(S, S)`.
    #[arg(long)]
    pub undirected: bool,
    #[arg(long, default_value = "degs", value_parser = parse_model)]
    pub model: Model,
    #[arg(long, default_value_t = 33)]
    pub samples: usize,
    #[arg(long, default_value = "auto", value_parser = parse_steps)]
    pub steps: Steps,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw all samples from one chain, `THINNING` steps apart.
    #[arg(long)]
    pub thinning: Option<u64>,
    /// Probability of proposing a head swap instead of `|D+|/|D|`.
    #[arg(long)]
    pub heads_probability: Option<f64>,
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: nudhy::Error| e.to_string())
}

pub fn parse_steps(s: &str) -> Result<Steps, String> {
    s.parse().map_err(|e: nudhy::Error| e.to_string())
}

fn load_input(run: &mut Run, a: &SampleArgs) -> Result<DirectedHypergraph> {
    let text = run.read_input_string(&a.input)?;
    Ok(if a.undirected { undirected_to_directed(&parse_undirected(&text)?) } else { parse_hypergraph(&text)? })
}

/// Node degrees in node order and the sorted `(head, tail)` size pairs.
fn degree_signature(h: &DirectedHypergraph) -> String {
    let p = degree_profile(&to_bipartite(h));
    let mut sizes: Vec<(u32, u32)> = p.right_in.iter().copied().zip(p.right_out.iter().copied()).collect();
    sizes.sort_unstable();
    let mut s = String::new();
    for (i, id) in h.nodes().iter().enumerate() {
        let _ = writeln!(s, "{id}:{}:{}", p.left_in[i], p.left_out[i]);
    }
    s.push_str(&size_signature_of(&sizes));
    s
}

fn size_signature_of(sizes: &[(u32, u32)]) -> String {
    sizes.iter().map(|(h, t)| format!("{h}|{t}\n")).collect()
}

fn size_signature(h: &DirectedHypergraph) -> String {
    let mut sizes: Vec<(u32, u32)> = h.copies().map(|e| (e.head.len() as u32, e.tail.len() as u32)).collect();
    sizes.sort_unstable();
    size_signature_of(&sizes)
}

fn joint_signature(h: &DirectedHypergraph) -> String {
    compute_joint(&to_bipartite(h)).entries().iter().map(|(k, v)| format!("{k:?}={v}\n")).collect()
}

/// Invariants each model must preserve, as canonical strings.
fn signatures(h: &DirectedHypergraph, model: Model) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    match model {
        Model::Null => {
            m.insert("sizes".into(), size_signature(h));
        }
        Model::Degs | Model::DegsMh => {
            m.insert("degrees".into(), degree_signature(h));
        }
        Model::Joint => {
            m.insert("degrees".into(), degree_signature(h));
            m.insert("joint".into(), joint_signature(h));
        }
    }
    m
}

pub fn run(ctx: &Ctx, a: &SampleArgs) -> Result<()> {
    let mut run = Run::new("sample", &a.out_dir, ctx.record_timings)?;
    let h = load_input(&mut run, a)?;
    let cfg = ChainConfig {
        model: a.model,
        steps: a.steps,
        seed: a.seed,
        sample_count: a.samples,
        thinning: a.thinning,
        heads_probability: a.heads_probability,
        execution: ctx.execution,
    };
    run.seed(a.seed);
    run.param("model", a.model.to_string());
    run.param("steps", a.steps.resolve(&h));
    run.param("samples", a.samples);
    run.param("thinning", a.thinning);
    run.param("heads_probability", a.heads_probability);
    let samples = run.timed("sampling", || run_chain(&h, &cfg))?;
    let expected = signatures(&h, a.model);
    for (i, s) in samples.iter().enumerate() {
        let text = serialize_hypergraph(s);
        let mut checks = BTreeMap::new();
        if !a.no_verify {
            let back = parse_hypergraph(&text)?;
            let got = signatures(&back, a.model);
            for (key, want) in &expected {
                if &got[key] != want {
                    let dump = format!("sample_{i}.{key}.mismatch.txt");
                    run.write(&dump, format!("expected:\n{want}\nfound:\n{}", got[key]).as_bytes())?;
                    bail!("sample {i}: {key} invariant differs from the input (details in {dump})");
                }
            }
            checks = got.into_iter().map(|(k, v)| (k, sha256_hex(v.as_bytes()))).collect();
        }
        run.write_with(&format!("sample_{i}.dhg"), text.as_bytes(), checks)?;
    }
    log::info!("wrote {} samples to {}", samples.len(), a.out_dir.display());
    run.finish()
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "degs", value_parser = parse_model)]
    pub model: Model,
    /// Number of most frequent itemsets compared.
    #[arg(long, default_value_t = 20)]
    pub f: usize,
    /// Minimum itemset size.
    #[arg(long, default_value_t = 3)]
    pub l: usize,
    #[arg(long, default_value_t = 50)]
    pub k_max: u64,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn converge(ctx: &Ctx, a: &ConvergeArgs) -> Result<()> {
    let mut run = Run::new("converge", &a.out_dir, ctx.record_timings)?;
    let text = run.read_input_string(&a.input)?;
    let h = parse_hypergraph(&text)?;
    run.seed(a.seed);
    run.param("model", a.model.to_string());
    run.param("f", a.f);
    run.param("l", a.l);
    run.param("k_max", a.k_max);
    run.param("replicates", a.replicates);
    let cfg = TraceConfig { model: a.model, seed: a.seed, f: a.f, l: a.l, k_max: a.k_max, replicates: a.replicates };
    let rows = run.timed("trace", || arsd_trace(&h, &cfg))?;
    for side in ["head", "tail"] {
        let v: Vec<f64> = rows.iter().filter(|r| r.side.name() == side).map(|r| r.arsd).collect();
        if v.len() > 10 {
            log::info!("{side}: plateau over the last 10 checkpoints: {}", is_plateau(&v, 10, 0.01));
        }
    }
    let bytes =
        csv_bytes(&["k", "side", "arsd"], rows.iter().map(|r| [r.k.to_string(), r.side.name().into(), g12(r.arsd)]))?;
    run.write("arsd_trace.csv", &bytes)?;
    run.finish()
}
