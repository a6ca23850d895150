use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use nudhy::exec;
use nudhy::fmt::g12;
use nudhy::hypercore::{merge_to_undirected, to_bipartite, DirectedHypergraph};
use nudhy::structmetrics::{
    binary_entropy, centrality_ndcg, hits, hyper_core_decomposition, hypergraph_reciprocity, pagerank,
    project_weighted, spectral_distance, spectrum, structural_entropy, LaplacianOrder, ReciprocityConfig, Side,
    SpectrumConfig, SpectrumSummary,
};

use super::{check_node_sets, mean_std, read_hypergraph, read_samples, SampleDir, Samples};
use crate::run::{csv_bytes, Run};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[command(subcommand)]
    pub metric: Metric,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub observed: PathBuf,
    /// Sample directory, as `NAME=DIR` or `DIR`; repeatable.
    #[arg(long = "samples")]
    pub samples: Vec<SampleDir>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Metric {
    Reciprocity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-6)]
        alpha: f64,
        /// Candidate count up to which the reciprocal set is searched exactly.
        #[arg(long, default_value_t = 15)]
        exact_limit: usize,
    },
    Coreness {
        #[command(flatten)]
        common: Common,
    },
    Entropy {
        #[command(flatten)]
        common: Common,
        /// Group sizes, comma separated.
        #[arg(long, default_value = "2")]
        k: String,
    },
    Centrality {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, value_enum, default_value = "size")]
        order: Order,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Size,
    SizeMinusOne,
}

const OBSERVED: &str = "observed";

struct Loaded {
    run: Run,
    observed: DirectedHypergraph,
    samples: Vec<Samples>,
}

fn load(ctx: &Ctx, name: &str, c: &Common) -> Result<Loaded> {
    let mut run = Run::new(&format!("metric {name}"), &c.out_dir, ctx.record_timings)?;
    let observed = read_hypergraph(&mut run, &c.observed)?;
    let samples = read_samples(&mut run, &c.samples)?;
    Ok(Loaded { run, observed, samples })
}

pub fn run(ctx: &Ctx, a: &MetricArgs) -> Result<()> {
    match &a.metric {
        Metric::Reciprocity { common, alpha, exact_limit } => {
            reciprocity(ctx, common, &ReciprocityConfig { alpha: *alpha, exact_limit: *exact_limit })
        }
        Metric::Coreness { common } => coreness(ctx, common),
        Metric::Entropy { common, k } => entropy(ctx, common, &super::parse_list(k)?),
        Metric::Centrality { common, damping, tol } => centrality(ctx, common, *damping, *tol),
        Metric::Spectrum { common, k, max_size, order } => {
            let order = match order {
                Order::Size => LaplacianOrder::Size,
                Order::SizeMinusOne => LaplacianOrder::SizeMinusOne,
            };
            spectra(ctx, common, &SpectrumConfig { k: *k, max_size: *max_size, order })
        }
    }
}

fn reciprocity(ctx: &Ctx, c: &Common, cfg: &ReciprocityConfig) -> Result<()> {
    let Loaded { mut run, observed, samples } = load(ctx, "reciprocity", c)?;
    run.param("alpha", cfg.alpha);
    run.param("exact_limit", cfg.exact_limit);
    let obs = hypergraph_reciprocity(&observed, cfg, ctx.execution)?;
    let ids = observed.nodes();
    let side = |v: &[u32]| v.iter().map(|&i| ids[i as usize].to_string()).collect::<Vec<_>>().join(" ");
    let edges = csv_bytes(
        &["edge", "head", "tail", "score", "reciprocalSet"],
        obs.per_edge.iter().map(|r| {
            let e = &observed.edges()[r.edge];
            let set = r.set.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            [r.edge.to_string(), side(&e.head), side(&e.tail), g12(r.score), set]
        }),
    )?;
    run.write("reciprocity_edges.csv", &edges)?;

    let mut rows = vec![[OBSERVED.to_string(), String::new(), g12(obs.mean)]];
    let mut summary = Vec::new();
    for s in &samples {
        // Per-edge searches already run in parallel; samples go one by one.
        let vals = s
            .graphs
            .iter()
            .map(|g| hypergraph_reciprocity(g, cfg, ctx.execution).map(|r| r.mean))
            .collect::<nudhy::Result<Vec<_>>>()?;
        for (id, v) in s.ids.iter().zip(&vals) {
            rows.push([s.name.clone(), id.to_string(), g12(*v)]);
        }
        let (m, sd) = mean_std(&vals);
        summary.push([s.name.clone(), g12(obs.mean), g12(m), g12(sd), vals.len().to_string()]);
    }
    run.write("reciprocity.csv", &csv_bytes(&["sampler", "sampleId", "reciprocity"], rows)?)?;
    run.write("reciprocity_summary.csv", &csv_bytes(&["sampler", "observed", "mean", "std", "samples"], summary)?)?;
    run.finish()
}

fn coreness(ctx: &Ctx, c: &Common) -> Result<()> {
    let Loaded { mut run, observed, samples } = load(ctx, "coreness", c)?;
    check_node_sets(&observed, &samples)?;
    let ids = observed.nodes().to_vec();
    let profile =
        |g: &DirectedHypergraph| [Side::Head, Side::Tail].map(|side| hyper_core_decomposition(g, side).hyper_coreness);
    let obs = profile(&observed);
    let mut rows = Vec::new();
    let mut push = |sampler: &str, id: String, p: &[Vec<u64>; 2]| {
        for (side, hc) in [Side::Head, Side::Tail].iter().zip(p) {
            for (v, x) in hc.iter().enumerate() {
                rows.push([sampler.to_string(), id.clone(), side.name().into(), ids[v].to_string(), x.to_string()]);
            }
        }
    };
    push(OBSERVED, String::new(), &obs);
    let mut summary = Vec::new();
    for s in &samples {
        let profiles = exec::map_indexed(ctx.execution, s.graphs.len(), |i| profile(&s.graphs[i]));
        for (id, p) in s.ids.iter().zip(&profiles) {
            push(&s.name, id.to_string(), p);
        }
        for (j, side) in [Side::Head, Side::Tail].iter().enumerate() {
            let as_f = |v: &[u64]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
            let sample_scores: Vec<Vec<f64>> = profiles.iter().map(|p| as_f(&p[j])).collect();
            let ndcg = centrality_ndcg(&as_f(&obs[j]), &sample_scores)?;
            summary.push([s.name.clone(), side.name().to_string(), g12(ndcg)]);
        }
    }
    run.write("coreness.csv", &csv_bytes(&["sampler", "sampleId", "side", "node", "hyperCoreness"], rows)?)?;
    run.write("coreness_summary.csv", &csv_bytes(&["sampler", "side", "ndcg"], summary)?)?;
    run.finish()
}

fn entropy(ctx: &Ctx, c: &Common, ks: &[usize]) -> Result<()> {
    let Loaded { mut run, observed, samples } = load(ctx, "entropy", c)?;
    run.param("k", ks);
    let threshold = binary_entropy(0.1);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for s in &samples {
        for &k in ks {
            for side in [Side::Head, Side::Tail] {
                let groups = structural_entropy(&observed, &s.graphs, k, side)?;
                let vals: Vec<f64> = groups.iter().map(|g| g.entropy).collect();
                let certain = vals.iter().filter(|&&x| x <= threshold).count();
                let (m, _) = mean_std(&vals);
                let frac = if vals.is_empty() { f64::NAN } else { certain as f64 / vals.len() as f64 };
                summary.push([
                    s.name.clone(),
                    side.name().into(),
                    k.to_string(),
                    groups.len().to_string(),
                    g12(m),
                    g12(frac),
                ]);
                for g in groups {
                    let members = g.group.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                    rows.push([
                        s.name.clone(),
                        side.name().into(),
                        k.to_string(),
                        members,
                        g12(g.probability),
                        g12(g.entropy),
                    ]);
                }
            }
        }
    }
    run.write("entropy.csv", &csv_bytes(&["sampler", "side", "k", "group", "probability", "entropy"], rows)?)?;
    run.write(
        "entropy_summary.csv",
        &csv_bytes(&["sampler", "side", "k", "groups", "meanEntropy", "certainFraction"], summary)?,
    )?;
    run.finish()
}

struct Scores {
    pagerank: Vec<f64>,
    hub: Vec<f64>,
    authority: Vec<f64>,
}

fn centrality(ctx: &Ctx, c: &Common, damping: f64, tol: f64) -> Result<()> {
    let Loaded { mut run, observed, samples } = load(ctx, "centrality", c)?;
    check_node_sets(&observed, &samples)?;
    run.param("damping", damping);
    run.param("tol", tol);
    let scores = |g: &DirectedHypergraph| -> nudhy::Result<Scores> {
        let pr = pagerank(&project_weighted(g), damping, tol)?;
        let h = hits(&to_bipartite(g), tol)?;
        let (hub, authority) = h.node_scores(g.node_count());
        Ok(Scores { pagerank: pr, hub: hub.to_vec(), authority: authority.to_vec() })
    };
    let ids = observed.nodes().to_vec();
    let obs = scores(&observed)?;
    let mut rows = Vec::new();
    let mut push = |sampler: &str, id: String, s: &Scores| {
        for (v, node) in ids.iter().enumerate() {
            rows.push([
                sampler.to_string(),
                id.clone(),
                node.to_string(),
                g12(s.pagerank[v]),
                g12(s.hub[v]),
                g12(s.authority[v]),
            ]);
        }
    };
    push(OBSERVED, String::new(), &obs);
    let mut summary = Vec::new();
    for s in &samples {
        let all = exec::try_map_indexed(ctx.execution, s.graphs.len(), |i| scores(&s.graphs[i]))?;
        for (id, sc) in s.ids.iter().zip(&all) {
            push(&s.name, id.to_string(), sc);
        }
        type Pick = fn(&Scores) -> &Vec<f64>;
        let measures: [(&str, Pick); 3] =
            [("pagerank", |s| &s.pagerank), ("hub", |s| &s.hub), ("authority", |s| &s.authority)];
        for (name, pick) in measures {
            let sample_scores: Vec<Vec<f64>> = all.iter().map(|x| pick(x).clone()).collect();
            let ndcg = centrality_ndcg(pick(&obs), &sample_scores)?;
            summary.push([s.name.clone(), name.to_string(), g12(ndcg)]);
        }
    }
    run.write("centrality.csv", &csv_bytes(&["sampler", "sampleId", "node", "pagerank", "hub", "authority"], rows)?)?;
    run.write("centrality_summary.csv", &csv_bytes(&["sampler", "measure", "ndcg"], summary)?)?;
    run.finish()
}

fn spectra(ctx: &Ctx, c: &Common, cfg: &SpectrumConfig) -> Result<()> {
    let Loaded { mut run, observed, samples } = load(ctx, "spectrum", c)?;
    check_node_sets(&observed, &samples)?;
    run.param("k", cfg.k);
    run.param("max_size", cfg.max_size);
    run.param("order", format!("{:?}", cfg.order));
    let obs = spectrum(&merge_to_undirected(&observed), cfg)?;
    let mut header = vec!["sampler".to_string(), "sampleId".to_string()];
    header.extend((1..=cfg.k).map(|i| format!("lambda{i}")));
    let row = |sampler: &str, id: String, s: &SpectrumSummary| {
        let mut r = vec![sampler.to_string(), id];
        r.extend(s.eigenvalues.iter().map(|&x| g12(x)));
        r.resize(cfg.k + 2, nudhy::fmt::UNDEFINED.to_string());
        r
    };
    let mut rows = vec![row(OBSERVED, String::new(), &obs)];
    let mut summary = Vec::new();
    for s in &samples {
        let all = exec::try_map_indexed(ctx.execution, s.graphs.len(), |i| {
            spectrum(&merge_to_undirected(&s.graphs[i]), cfg)
        })?;
        let mut dist = Vec::new();
        for (id, sp) in s.ids.iter().zip(&all) {
            rows.push(row(&s.name, id.to_string(), sp));
            dist.push(spectral_distance(&obs, sp)?);
        }
        let (m, sd) = mean_std(&dist);
        summary.push([s.name.clone(), g12(m), g12(sd), dist.len().to_string()]);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    run.write("spectrum.csv", &csv_bytes(&header, rows)?)?;
    run.write("spectrum_summary.csv", &csv_bytes(&["sampler", "meanDistance", "stdDistance", "samples"], summary)?)?;
    run.finish()
}
