//! CSV tables and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("manifest serialization: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    /// Floats use 17 significant digits, which round-trip every `f64`.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Renders the table as RFC 4180 CSV with `\n` record terminators.
pub fn render_csv(table: &Table) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Writes `table` to `path`, returning the file record for the manifest.
pub fn write_csv(table: &Table, path: &Path) -> Result<OutputFile, OutputError> {
    let bytes = render_csv(table).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    fs::write(path, &bytes).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(OutputFile {
        file: path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        bytes: bytes.len() as u64,
        sha256: sha256_hex(&bytes),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedRoot {
    pub experiment: String,
    /// `derive_seed(master_seed, experiment, 0)`
    pub first_chain_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub master_seed: u64,
    pub config: serde_json::Value,
    pub workers: usize,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub seed_roots: Vec<SeedRoot>,
    pub outputs: Vec<OutputFile>,
}

/// Writes the manifest to a temporary file and renames it into place.
pub fn write_manifest(manifest: &RunManifest, dir: &Path) -> Result<PathBuf, OutputError> {
    let path = dir.join("manifest.json");
    let tmp = dir.join(".manifest.json.tmp");
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| OutputError::Io { path: p, source }
    };
    let mut text = serde_json::to_vec_pretty(manifest)?;
    text.push(b'\n');
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(&text).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(render_csv(&t).unwrap(), b"a,b\n");
    }

    #[test]
    fn float_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, 3.289868133696453, 0.0] {
            let s = Cell::Float(v).render();
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(Cell::Int(-4).render(), "-4");
    }

    #[test]
    fn written_hash_matches_disk() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(&["t", "x"]);
        t.push(vec![0usize.into(), 0i64.into()]);
        t.push(vec![1usize.into(), Cell::Float(0.5)]);
        let path = dir.path().join("t.csv");
        let rec = write_csv(&t, &path).unwrap();
        let disk = fs::read(&path).unwrap();
        assert_eq!(rec.sha256, sha256_hex(&disk));
        assert_eq!(rec.bytes, disk.len() as u64);
        assert_eq!(disk, b"t,x\n0,0\n1,5.0000000000000000e-1\n");
    }

    #[test]
    fn io_errors_name_the_path() {
        let t = Table::new(&["a"]);
        let err = write_csv(&t, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
