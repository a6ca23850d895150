//! Output bookkeeping shared by all subcommands: files written under one
//! directory, their digests, and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub invariants: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

pub struct Run {
    dir: PathBuf,
    manifest_name: String,
    manifest: Manifest,
    started: Instant,
    timings: Option<BTreeMap<String, f64>>,
}

impl Run {
    pub fn new(command: &str, dir: &Path, record_timings: bool) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let versions = BTreeMap::from([("nudhy-cli", env!("CARGO_PKG_VERSION")), ("nudhy-core", nudhy::VERSION)]);
        Ok(Run {
            dir: dir.to_path_buf(),
            manifest_name: "manifest.json".into(),
            manifest: Manifest {
                command: command.into(),
                args: std::env::args().skip(1).collect(),
                versions,
                seed: None,
                parameters: BTreeMap::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                timings: None,
            },
            started: Instant::now(),
            timings: record_timings.then(BTreeMap::new),
        })
    }

    pub fn with_manifest_name(mut self, name: impl Into<String>) -> Self {
        self.manifest_name = name.into();
        self
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable parameter");
        self.manifest.parameters.insert(key.into(), v);
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.manifest.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            invariants: BTreeMap::new(),
        });
        Ok(bytes)
    }

    pub fn read_input_string(&mut self, path: &Path) -> Result<String> {
        String::from_utf8(self.read_input(path)?).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        self.write_with(name, bytes, BTreeMap::new())
    }

    pub fn write_with(&mut self, name: &str, bytes: &[u8], invariants: BTreeMap<String, String>) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(FileDigest { path: name.into(), sha256: sha256_hex(bytes), invariants });
        Ok(())
    }

    /// Runs `f`, recording its wall-clock time when timings are enabled.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        if let Some(t) = self.timings.as_mut() {
            t.insert(phase.into(), t0.elapsed().as_secs_f64());
        }
        out
    }

    pub fn finish(mut self) -> Result<()> {
        if let Some(mut t) = self.timings.take() {
            t.insert("total".into(), self.started.elapsed().as_secs_f64());
            self.manifest.timings = Some(t);
        }
        let mut json = serde_json::to_string_pretty(&self.manifest)?;
        json.push('\n');
        let path = self.dir.join(&self.manifest_name);
        fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

/// CSV with a header row, LF line endings.
pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("flushing csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn csv_uses_lf_and_quotes_when_needed() {
        let b = csv_bytes(&["a", "b"], [["1", "x,y"], ["2", ""]]).unwrap();
        assert_eq!(String::from_utf8(b).unwrap(), "a,b\n1,\"x,y\"\n2,\n");
    }

    #[test]
    fn manifest_lists_outputs_in_write_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut run = Run::new("test", dir.path(), false).unwrap();
        run.seed(3);
        run.write("b.txt", b"b").unwrap();
        run.write("a.txt", b"a").unwrap();
        run.finish().unwrap();
        let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m["outputs"][0]["path"], "b.txt");
        assert_eq!(m["outputs"][1]["path"], "a.txt");
        assert_eq!(m["seed"], 3);
    }
}
