use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use nudhy::hypercore::{
    merge_to_undirected, parse_hypergraph, parse_undirected, serialize_hypergraph, serialize_undirected, to_bipartite,
    undirected_to_directed, Direction,
};

use crate::run::{csv_bytes, Run};
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Directed hypergraph, `head|tail` per line.
    Dhg,
    /// Undirected hypergraph, one comma-separated hyperedge per line.
    Undirected,
    /// Bipartite edge list `node,copy,direction` (output only).
    Bipartite,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "dhg")]
    pub from: Format,
    #[arg(long, value_enum, default_value = "dhg")]
    pub to: Format,
}

pub fn run(ctx: &Ctx, a: &ConvertArgs) -> Result<()> {
    let dir = a.output.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
    let name = a.output.file_name().context("output has no file name")?.to_string_lossy().into_owned();
    let mut run = Run::new("convert", dir, ctx.record_timings)?.with_manifest_name(format!("{name}.manifest.json"));
    run.param("from", format!("{:?}", a.from).to_lowercase());
    run.param("to", format!("{:?}", a.to).to_lowercase());
    let text = run.read_input_string(&a.input)?;
    let h = match a.from {
        Format::Dhg => parse_hypergraph(&text)?,
        Format::Undirected => undirected_to_directed(&parse_undirected(&text)?),
        Format::Bipartite => anyhow::bail!("bipartite is an output-only format"),
    };
    let bytes = match a.to {
        Format::Dhg => serialize_hypergraph(&h).into_bytes(),
        Format::Undirected => serialize_undirected(&merge_to_undirected(&h)).into_bytes(),
        Format::Bipartite => {
            let g = to_bipartite(&h);
            let ids = g.node_ids().clone();
            csv_bytes(
                &["node", "copy", "direction"],
                g.edges().map(|e| {
                    let dir = match e.dir {
                        Direction::Head => "head",
                        Direction::Tail => "tail",
                    };
                    [ids[e.left as usize].to_string(), e.right.to_string(), dir.to_string()]
                }),
            )?
        }
    };
    run.write(&name, &bytes)?;
    run.finish()
}
