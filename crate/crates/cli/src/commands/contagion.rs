use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use nudhy::contagion::{run_replicate, Method, SisConfig};
use nudhy::exec;
use nudhy::fmt::{g12, g12_opt};
use nudhy::hypercore::{merge_to_undirected, parse_hypergraph, parse_undirected, UndirectedHypergraph};
use serde::Deserialize;

use super::{parse_list, read_samples, SampleDir};
use crate::run::{csv_bytes, Run};
use crate::Ctx;

const DEFAULT_THRESHOLDS: &str = include_str!("../../thresholds.json");

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Thresholds {
    pub lambda_c_linear: f64,
    pub lambda_c_superlinear: f64,
    pub nu_c: f64,
}

impl Thresholds {
    /// Invasion threshold for `nu`: the linear one for `nu <= 1`.
    pub fn lambda_c(&self, nu: f64) -> f64 {
        if nu <= 1.0 {
            self.lambda_c_linear
        } else {
            self.lambda_c_superlinear
        }
    }
}

pub fn default_thresholds() -> BTreeMap<String, Thresholds> {
    serde_json::from_str(DEFAULT_THRESHOLDS).expect("bundled thresholds parse")
}

#[derive(Debug, Args)]
pub struct ContagionArgs {
    /// Observed hypergraph: undirected format, or `.dhg` merged to
    /// undirected.
    #[arg(long)]
    pub input: PathBuf,
    /// Name used for the threshold lookup and the `dataset` column;
    /// defaults to the input file stem.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Directed sample directory, as `NAME=DIR` or `DIR`; repeatable.
    /// Samples are merged to undirected hyperedges.
    #[arg(long = "samples")]
    pub samples: Vec<SampleDir>,
    /// Non-linearity exponents, comma separated.
    #[arg(long, default_value = "1")]
    pub nu: String,
    /// Infection rates, comma separated.
    #[arg(long, conflicts_with = "scaled")]
    pub lambda: Option<String>,
    /// Infection rates as multiples of the invasion threshold.
    #[arg(long)]
    pub scaled: Option<String>,
    /// Invasion threshold; overrides the thresholds file.
    #[arg(long)]
    pub lambda_c: Option<f64>,
    /// JSON map `dataset -> {lambda_c_linear, lambda_c_superlinear, nu_c}`.
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    #[arg(long, default_value = "ordinary", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.01)]
    pub rho0: f64,
    #[arg(long, default_value_t = 10000.0)]
    pub burn_in: f64,
    /// Number of density measurements after burn-in.
    #[arg(long, default_value_t = 10000)]
    pub measurements: usize,
    #[arg(long, default_value_t = 1.0)]
    pub decorrelation: f64,
    #[arg(long, default_value_t = 50)]
    pub qs_history: usize,
    #[arg(long, default_value_t = 1.0)]
    pub qs_interval: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: nudhy::Error| e.to_string())
}

struct Graph {
    sampler: String,
    id: String,
    graph: UndirectedHypergraph,
}

pub fn run(ctx: &Ctx, a: &ContagionArgs) -> Result<()> {
    let mut run = Run::new("contagion", &a.out_dir, ctx.record_timings)?;
    let dataset = a
        .dataset
        .clone()
        .unwrap_or_else(|| a.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let mut table = default_thresholds();
    if let Some(p) = &a.thresholds {
        let extra: BTreeMap<String, Thresholds> =
            serde_json::from_str(&run.read_input_string(p)?).with_context(|| format!("parsing {}", p.display()))?;
        table.extend(extra);
    }
    let known = table.get(&dataset.to_lowercase()).copied();
    let lambda_c = |nu: f64| a.lambda_c.or(known.map(|t| t.lambda_c(nu)));

    let text = run.read_input_string(&a.input)?;
    let observed = if a.input.extension().is_some_and(|e| e == "dhg") {
        merge_to_undirected(&parse_hypergraph(&text)?)
    } else {
        parse_undirected(&text)?
    };
    let mut graphs = vec![Graph { sampler: "observed".into(), id: String::new(), graph: observed }];
    for s in read_samples(&mut run, &a.samples)? {
        for (id, g) in s.ids.iter().zip(&s.graphs) {
            graphs.push(Graph { sampler: s.name.clone(), id: id.to_string(), graph: merge_to_undirected(g) });
        }
    }

    let nus: Vec<f64> = parse_list(&a.nu)?;
    let mut points = Vec::new();
    for &nu in &nus {
        if let Some(t) = known.filter(|t| nu > t.nu_c && a.method == Method::Ordinary) {
            log::warn!("nu={nu} exceeds nu_c={} for {dataset}: the upper branch needs --method qs", t.nu_c);
        }
        let (lambdas, scale) = match (&a.lambda, &a.scaled) {
            (Some(l), _) => (parse_list::<f64>(l)?, lambda_c(nu)),
            (None, Some(s)) => {
                let Some(c) = lambda_c(nu) else {
                    bail!("--scaled needs --lambda-c or a thresholds entry for '{dataset}'");
                };
                (parse_list::<f64>(s)?.into_iter().map(|x| x * c).collect(), Some(c))
            }
            (None, None) => bail!("give --lambda or --scaled"),
        };
        points.extend(lambdas.into_iter().map(|l| (nu, l, scale)));
    }

    let base = SisConfig {
        lambda: 0.0,
        nu: 1.0,
        mu: a.mu,
        rho0: a.rho0,
        burn_in: a.burn_in,
        sample_count: a.measurements,
        decorrelation: a.decorrelation,
        qs_history: a.qs_history,
        qs_interval: a.qs_interval,
        seed: a.seed,
    };
    base.validate()?;
    run.seed(a.seed);
    run.param("dataset", &dataset);
    run.param(
        "config",
        serde_json::json!({
            "mu": a.mu, "rho0": a.rho0, "burn_in": a.burn_in, "measurements": a.measurements,
            "decorrelation": a.decorrelation, "qs_history": a.qs_history, "qs_interval": a.qs_interval,
        }),
    );
    run.param("method", a.method.name());
    run.param("points", points.iter().map(|&(nu, l, c)| (nu, l, c)).collect::<Vec<_>>());

    let jobs = graphs.len() * points.len();
    let results = run.timed("simulation", || {
        exec::try_map_indexed(ctx.execution, jobs, |j| {
            let (g, p) = (j / points.len(), j % points.len());
            let (nu, lambda, _) = points[p];
            run_replicate(&graphs[g].graph, &SisConfig { lambda, nu, ..base.clone() }, a.method, j as u64)
        })
    })?;
    let mut rows = Vec::with_capacity(jobs);
    for (j, r) in results.iter().enumerate() {
        let (g, p) = (j / points.len(), j % points.len());
        let (nu, lambda, c) = points[p];
        if r.absorbed {
            log::info!("{} {} nu={nu} lambda={lambda}: absorbed", graphs[g].sampler, graphs[g].id);
        }
        rows.push([
            dataset.clone(),
            graphs[g].sampler.clone(),
            graphs[g].id.clone(),
            g12(nu),
            g12(lambda),
            g12_opt(c.map(|c| lambda / c)),
            g12(r.mean),
            g12(r.std),
            a.method.name().to_string(),
        ]);
    }
    let header = ["dataset", "sampler", "sampleId", "nu", "lambda", "lambdaOverLambdaC", "rhoMean", "rhoStd", "method"];
    run.write("contagion.csv", &csv_bytes(&header, rows)?)?;
    run.finish()
}
