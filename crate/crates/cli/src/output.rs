//! Artifact writing: 12-significant-digit numbers, atomic replacement and
//! the run manifest.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SIGNIFICANT_DIGITS: usize = 12;
/// Keys written at full precision. Rounding 1/n to 12 digits would break
/// the sum-to-one check on scenario probabilities.
pub const EXACT_KEYS: [&str; 1] = ["probability"];
pub const TOOL: &str = "flexplan";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// CSV cell for a number: shortest representation of the rounded value.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let r = round_sig(x);
        // Avoid "-0" cells.
        format!("{:?}", if r == 0.0 { 0.0 } else { r })
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_sig)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o
            .iter_mut()
            .filter(|(k, _)| !EXACT_KEYS.contains(&k.as_str()))
            .for_each(|(_, v)| round_value(v)),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits, except
/// under [`EXACT_KEYS`]. Infinite and NaN values become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("artifact types serialize");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// Builds a CSV document in memory from a header and numeric or text cells.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(cells).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run, plus digests of what it wrote.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub verb: String,
    pub seed: u64,
    pub config_hash: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    /// False when a stage failed after some outputs were written.
    pub complete: bool,
    pub error: Option<String>,
}

/// Collects artifacts of one run in an output directory.
pub struct ArtifactWriter {
    dir: PathBuf,
    manifest: Manifest,
}

impl ArtifactWriter {
    pub fn new(
        dir: PathBuf,
        verb: &str,
        seed: u64,
        config_hash: String,
        inputs: Vec<FileDigest>,
    ) -> Self {
        let manifest = Manifest {
            tool: TOOL.into(),
            version: VERSION.into(),
            verb: verb.into(),
            seed,
            config_hash,
            inputs,
            outputs: Vec::new(),
            complete: false,
            error: None,
        };
        Self { dir, manifest }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.manifest.outputs.retain(|f| f.path != name);
        self.manifest.outputs.push(FileDigest {
            path: name.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        self.write(name, to_json(value).as_bytes())
    }

    pub fn manifest_name(verb: &str) -> String {
        format!("{verb}.manifest.json")
    }

    /// Writes the manifest, marking the run complete or failed.
    pub fn finish(mut self, error: Option<&CliError>) -> Result<Manifest, CliError> {
        self.manifest.complete = error.is_none();
        self.manifest.error = error.map(|e| e.to_string());
        let name = Self::manifest_name(&self.manifest.verb);
        write_atomic(&self.dir.join(name), to_json(&self.manifest).as_bytes())?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(1.234567890123456), 1.23456789012);
        assert_eq!(round_sig(-98765.43210987654), -98765.4321099);
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(2.0), "2.0");
        assert_eq!(fmt_num(-0.0), "0.0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(1.5e-9), "1.5e-9");
    }

    #[test]
    fn json_numbers_are_rounded_and_non_finite_is_null() {
        let s = to_json(&(1.0 / 3.0, f64::INFINITY, 7u64));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0].as_f64(), Some(0.333333333333));
        assert!(v[1].is_null());
        assert_eq!(v[2].as_u64(), Some(7));
        let s = to_json(&serde_json::json!({ "probability": 1.0 / 3.0, "x": [1.0 / 3.0] }));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["probability"].as_f64(), Some(1.0 / 3.0));
        assert_eq!(v["x"][0].as_f64(), Some(0.333333333333));
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
