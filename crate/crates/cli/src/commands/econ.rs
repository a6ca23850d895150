use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use nudhy::econ::{
    biadjacency_from_hypergraph, build_biadjacency, complexity_scores, rank_compare, rca, trade_to_hypergraph,
    ComplexityScores, EciMethod, FitnessConfig, TradeTable,
};
use nudhy::exec;
use nudhy::fmt::{g12, g12_opt};
use nudhy::hypercore::{serialize_hypergraph, DirectedHypergraph};

use super::{read_hypergraph, read_samples, SampleDir};
use crate::run::{csv_bytes, Run};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct EconArgs {
    #[command(subcommand)]
    pub command: EconCommand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Coupled,
    Proximity,
}

impl From<Method> for EciMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Coupled => EciMethod::Coupled,
            Method::Proximity => EciMethod::Proximity,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreOptions {
    #[arg(long, value_enum, default_value = "coupled")]
    pub method: Method,
    #[arg(long, default_value_t = 1e-9)]
    pub fitness_tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub fitness_max_iter: usize,
}

impl ScoreOptions {
    fn fitness(&self) -> FitnessConfig {
        FitnessConfig { tol: self.fitness_tol, max_iter: self.fitness_max_iter }
    }
}

#[derive(Debug, Subcommand)]
pub enum EconCommand {
    /// Trade hypergraph and country-product matrix of one year.
    Build {
        /// CSV `year,country,product,export_value,import_value`.
        #[arg(long)]
        trade: PathBuf,
        /// CSV `country,population,avg_trade`.
        #[arg(long)]
        meta: Option<PathBuf>,
        #[arg(long)]
        year: i32,
        #[arg(long, default_value_t = 1.0)]
        r_star: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// ECI, PCI, Fitness, Quality and GENEPY of a trade hypergraph.
    Scores {
        #[arg(long)]
        input: PathBuf,
        /// CSV `nodeId,country` written by `econ build`.
        #[arg(long)]
        countries: PathBuf,
        #[command(flatten)]
        options: ScoreOptions,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Rank correlation of observed country scores with the scores of samples.
    Compare {
        #[arg(long)]
        observed: PathBuf,
        #[arg(long)]
        countries: PathBuf,
        /// Sample directory, as `NAME=DIR` or `DIR`; repeatable.
        #[arg(long = "samples", required = true)]
        samples: Vec<SampleDir>,
        #[command(flatten)]
        options: ScoreOptions,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

pub fn run(ctx: &Ctx, a: &EconArgs) -> Result<()> {
    match &a.command {
        EconCommand::Build { trade, meta, year, r_star, out_dir } => {
            build(ctx, trade, meta.as_deref(), *year, *r_star, out_dir)
        }
        EconCommand::Scores { input, countries, options, out_dir } => scores(ctx, input, countries, options, out_dir),
        EconCommand::Compare { observed, countries, samples, options, out_dir } => {
            compare(ctx, observed, countries, samples, options, out_dir)
        }
    }
}

fn build(ctx: &Ctx, trade: &Path, meta: Option<&Path>, year: i32, r_star: f64, out_dir: &Path) -> Result<()> {
    let mut run = Run::new("econ build", out_dir, ctx.record_timings)?;
    run.param("year", year);
    run.param("r_star", r_star);
    // Digests only; the table reader parses the files itself.
    run.read_input(trade)?;
    if let Some(m) = meta {
        run.read_input(m)?;
    }
    let t = TradeTable::read(trade, meta)?;
    let (h, names) = trade_to_hypergraph(&t, year, r_star)?;
    run.write("hypergraph.dhg", serialize_hypergraph(&h).as_bytes())?;
    run.write(
        "countries.csv",
        &csv_bytes(&["nodeId", "country"], names.iter().enumerate().map(|(i, n)| [i.to_string(), n.clone()]))?,
    )?;
    let b = build_biadjacency(&rca(&t, year)?, r_star, &t)?;
    let mut header = vec!["country".to_string()];
    header.extend(b.products.iter().cloned());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..b.countries.len()).map(|c| {
        let mut r = vec![b.countries[c].clone()];
        r.extend((0..b.products.len()).map(|p| g12(b.m[(c, p)])));
        r
    });
    run.write("biadjacency.csv", &csv_bytes(&header, rows)?)?;
    log::info!(
        "{} countries, {} hyperedges; biadjacency {}x{}",
        h.node_count(),
        h.edge_count(),
        b.countries.len(),
        b.products.len()
    );
    run.finish()
}

fn read_countries(run: &mut Run, path: &Path) -> Result<Vec<String>> {
    let bytes = run.read_input(path)?;
    let mut r = csv::Reader::from_reader(bytes.as_slice());
    let mut names = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let id: usize = rec.get(0).context("missing nodeId")?.trim().parse().context("bad nodeId")?;
        if id != i {
            bail!("{}: node ids must be 0.. in order (row {i} has {id})", path.display());
        }
        names.push(rec.get(1).context("missing country")?.to_string());
    }
    Ok(names)
}

fn scores_of(h: &DirectedHypergraph, names: &[String], o: &ScoreOptions) -> nudhy::Result<ComplexityScores> {
    complexity_scores(&biadjacency_from_hypergraph(h, names)?, o.method.into(), &o.fitness())
}

fn scores(ctx: &Ctx, input: &Path, countries: &Path, o: &ScoreOptions, out_dir: &Path) -> Result<()> {
    let mut run = Run::new("econ scores", out_dir, ctx.record_timings)?;
    run.param("method", format!("{:?}", o.method).to_lowercase());
    run.param("fitness_tol", o.fitness_tol);
    run.param("fitness_max_iter", o.fitness_max_iter);
    let h = read_hypergraph(&mut run, input)?;
    let names = read_countries(&mut run, countries)?;
    let s = scores_of(&h, &names, o)?;
    let at = |v: &Option<Vec<f64>>, i: usize| v.as_ref().map(|v| v[i]);
    let rows = (0..s.countries.len())
        .map(|i| [s.countries[i].clone(), g12(s.eci[i]), g12_opt(at(&s.fitness, i)), g12(s.genepy[i])]);
    run.write("scores.csv", &csv_bytes(&["country", "eci", "fitness", "genepy"], rows)?)?;
    let rows = (0..s.products.len()).map(|i| [s.products[i].clone(), g12(s.pci[i]), g12_opt(at(&s.quality, i))]);
    run.write("product_scores.csv", &csv_bytes(&["product", "pci", "quality"], rows)?)?;
    run.finish()
}

fn compare(
    ctx: &Ctx,
    observed: &Path,
    countries: &Path,
    samples: &[SampleDir],
    o: &ScoreOptions,
    out_dir: &Path,
) -> Result<()> {
    let mut run = Run::new("econ compare", out_dir, ctx.record_timings)?;
    run.param("method", format!("{:?}", o.method).to_lowercase());
    run.param("fitness_tol", o.fitness_tol);
    run.param("fitness_max_iter", o.fitness_max_iter);
    let h = read_hypergraph(&mut run, observed)?;
    let names = read_countries(&mut run, countries)?;
    let sets = read_samples(&mut run, samples)?;
    let obs = scores_of(&h, &names, o)?;
    let mut rows = Vec::new();
    for set in &sets {
        let all = exec::try_map_indexed(ctx.execution, set.graphs.len(), |i| scores_of(&set.graphs[i], &names, o))?;
        type Pick = fn(&ComplexityScores) -> Option<&Vec<f64>>;
        let metrics: [(&str, Pick); 3] =
            [("eci", |s| Some(&s.eci)), ("fitness", |s| s.fitness.as_ref()), ("genepy", |s| Some(&s.genepy))];
        for (metric, pick) in metrics {
            let Some(o) = pick(&obs) else {
                log::warn!("{metric}: undefined on the observed hypergraph");
                continue;
            };
            let paired: Vec<(Vec<String>, Vec<f64>)> =
                all.iter().filter_map(|s| pick(s).map(|v| (s.countries.clone(), v.clone()))).collect();
            if paired.len() < all.len() {
                log::warn!("{}: {metric} undefined on {} samples", set.name, all.len() - paired.len());
            }
            if paired.is_empty() {
                continue;
            }
            let r = rank_compare(&obs.countries, o, &paired)?;
            for (stat, mean, std) in
                [("spearman", r.spearman_mean, r.spearman_std), ("kendall", r.kendall_mean, r.kendall_std)]
            {
                rows.push([set.name.clone(), metric.into(), stat.into(), g12(mean), g12(std), r.samples.to_string()]);
            }
        }
    }
    run.write("rankcompare.csv", &csv_bytes(&["sampler", "metric", "statistic", "mean", "std", "samples"], rows)?)?;
    run.finish()
}
