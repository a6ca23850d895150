use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nudhy::affinity::{affinity_table, homophily, CategoryPartition};
use nudhy::fmt::{g12, g12_opt};
use nudhy::hypercore::parse_labels;

use super::{read_hypergraph, read_samples, SampleDir};
use crate::run::{csv_bytes, Run};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct AffinityArgs {
    #[arg(long)]
    pub observed: PathBuf,
    /// CSV of `node_id,category`.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub degs: PathBuf,
    #[arg(long)]
    pub joint: PathBuf,
    /// Identifier written in the first column; defaults to the observed
    /// file stem.
    #[arg(long)]
    pub congress_id: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 14)]
    pub k_max: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(ctx: &Ctx, a: &AffinityArgs) -> Result<()> {
    let mut run = Run::new("affinity", &a.out_dir, ctx.record_timings)?;
    run.param("k_min", a.k_min);
    run.param("k_max", a.k_max);
    let h = read_hypergraph(&mut run, &a.observed)?;
    let labels = parse_labels(&run.read_input_string(&a.labels)?)?;
    let p = CategoryPartition::new(&h, &labels)?;
    let sets = read_samples(
        &mut run,
        &[
            SampleDir { name: "degs".into(), dir: a.degs.clone() },
            SampleDir { name: "joint".into(), dir: a.joint.clone() },
        ],
    )?;
    let (degs, joint) = (&sets[0].graphs, &sets[1].graphs);
    let id = a
        .congress_id
        .clone()
        .unwrap_or_else(|| a.observed.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let rows = run.timed("affinity", || affinity_table(&h, &p, a.k_min..=a.k_max, degs, joint))?;
    let bytes = csv_bytes(
        &[
            "congressId",
            "category",
            "k",
            "observed",
            "baselineVeldt",
            "meanDegs",
            "meanJoint",
            "ratioDegs",
            "ratioJoint",
        ],
        rows.iter().map(|r| {
            [
                id.clone(),
                r.category.clone(),
                r.k.to_string(),
                g12_opt(r.observed),
                g12(r.baseline),
                g12_opt(r.mean_degs),
                g12_opt(r.mean_joint),
                g12_opt(r.ratio_degs),
                g12_opt(r.ratio_joint),
            ]
        }),
    )?;
    run.write("affinity.csv", &bytes)?;

    // Homophily is only defined when every head is a single node.
    if h.copies().all(|e| e.head.len() == 1) {
        let mut rows = Vec::new();
        for name in p.names() {
            let d = homophily(&h, &p, name, degs)?;
            let j = homophily(&h, &p, name, joint)?;
            rows.push([
                id.clone(),
                name.clone(),
                g12(d.observed),
                g12(d.sample_mean),
                g12(j.sample_mean),
                g12_opt(d.ratio),
                g12_opt(j.ratio),
            ]);
        }
        let header = ["congressId", "category", "observed", "meanDegs", "meanJoint", "ratioDegs", "ratioJoint"];
        run.write("homophily.csv", &csv_bytes(&header, rows)?)?;
    } else {
        log::info!("skipping homophily: some heads have more than one node");
    }
    run.finish()
}
