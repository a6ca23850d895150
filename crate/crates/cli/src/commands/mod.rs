pub mod affinity;
pub mod contagion;
pub mod convert;
pub mod econ;
pub mod metric;
pub mod sample;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use nudhy::hypercore::{parse_hypergraph, DirectedHypergraph};

use crate::run::Run;

/// A directory of `sample_<i>.dhg` files, optionally labelled `name=dir`.
#[derive(Debug, Clone)]
pub struct SampleDir {
    pub name: String,
    pub dir: PathBuf,
}

impl FromStr for SampleDir {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('=') {
            Some((name, dir)) if !name.is_empty() && !dir.is_empty() => {
                Ok(SampleDir { name: name.into(), dir: dir.into() })
            }
            Some(_) => Err(format!("expected NAME=DIR, got '{s}'")),
            None => {
                let dir = PathBuf::from(s);
                let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| s.into());
                Ok(SampleDir { name, dir })
            }
        }
    }
}

/// Sample files of `dir` ordered by index.
pub fn sample_files(dir: &Path) -> Result<Vec<(usize, PathBuf)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if let Some(i) = name.strip_prefix("sample_").and_then(|r| r.strip_suffix(".dhg")).and_then(|i| i.parse().ok())
        {
            files.push((i, path));
        }
    }
    files.sort();
    if files.is_empty() {
        bail!("no sample_<i>.dhg files in {}", dir.display());
    }
    Ok(files)
}

pub struct Samples {
    pub name: String,
    pub ids: Vec<usize>,
    pub graphs: Vec<DirectedHypergraph>,
}

pub fn read_hypergraph(run: &mut Run, path: &Path) -> Result<DirectedHypergraph> {
    let text = run.read_input_string(path)?;
    parse_hypergraph(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_samples(run: &mut Run, dirs: &[SampleDir]) -> Result<Vec<Samples>> {
    let mut out = Vec::new();
    for d in dirs {
        let mut ids = Vec::new();
        let mut graphs = Vec::new();
        for (i, path) in sample_files(&d.dir)? {
            ids.push(i);
            graphs.push(read_hypergraph(run, &path)?);
        }
        out.push(Samples { name: d.name.clone(), ids, graphs });
    }
    Ok(out)
}

/// Fails unless every sample has the observed node set.
pub fn check_node_sets(observed: &DirectedHypergraph, samples: &[Samples]) -> Result<()> {
    for s in samples {
        for (id, g) in s.ids.iter().zip(&s.graphs) {
            if g.nodes() != observed.nodes() {
                bail!("{} sample {id}: node set differs from the observed hypergraph", s.name);
            }
        }
    }
    Ok(())
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| anyhow::anyhow!("bad list element '{x}': {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_dir_names() {
        let d: SampleDir = "joint=/tmp/x".parse().unwrap();
        assert_eq!((d.name.as_str(), d.dir.as_path()), ("joint", Path::new("/tmp/x")));
        let d: SampleDir = "runs/degs".parse().unwrap();
        assert_eq!(d.name, "degs");
        assert!("=dir".parse::<SampleDir>().is_err());
    }

    #[test]
    fn sample_files_sorted_numerically() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["sample_10.dhg", "sample_2.dhg", "manifest.json", "sample_x.dhg"] {
            fs::write(dir.path().join(name), "").unwrap();
        }
        let ids: Vec<usize> = sample_files(dir.path()).unwrap().into_iter().map(|(i, _)| i).collect();
        assert_eq!(ids, vec![2, 10]);
    }

    #[test]
    fn lists_and_moments() {
        assert_eq!(parse_list::<f64>("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_list::<f64>("1,x").is_err());
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 1.0));
    }
}
