//! On-disk formats.
//!
//! A KZM1 blob is the four magic bytes `KZM1`, the row count and column
//! count as little-endian `u64`, then `rows · cols` little-endian `f64`
//! values in row-major order. Vectors are stored as `len × 1` blobs.
//!
//! A dataset is a directory entry `<name>` holding the matrix blob plus
//! `<name>.b` (right-hand side), `<name>.ref` (reference solution) and a
//! JSON sidecar `<name>.json`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use kaczmarz_core::rng::{NORMAL_ALGORITHM, PRNG_NAME};
use kaczmarz_core::{DenseMatrix, DenseSystem, Family, GeneratedSystem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"KZM1";
const HEADER_LEN: usize = 20;

/// Writes a KZM1 blob.
pub fn write_kzm<W: Write>(
    mut w: W,
    rows: usize,
    cols: usize,
    data: &[f64],
) -> std::io::Result<()> {
    assert_eq!(
        rows * cols,
        data.len(),
        "blob shape does not match data length"
    );
    w.write_all(MAGIC)?;
    w.write_all(&(rows as u64).to_le_bytes())?;
    w.write_all(&(cols as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

/// Reads a KZM1 blob into `(rows, cols, data)`. Truncated payloads and
/// trailing bytes are both rejected.
pub fn read_kzm<R: Read>(mut r: R) -> std::result::Result<(usize, usize, Vec<f64>), String> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| format!("short header: {e}"))?;
    if &header[..4] != MAGIC {
        return Err(format!("bad magic {:?}, expected KZM1", &header[..4]));
    }
    let rows = u64::from_le_bytes(header[4..12].try_into().unwrap());
    let cols = u64::from_le_bytes(header[12..20].try_into().unwrap());
    let len = rows
        .checked_mul(cols)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| format!("shape {rows}×{cols} overflows"))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| e.to_string())?;
    if bytes.len() != len * 8 {
        return Err(format!(
            "payload holds {} bytes, shape {rows}×{cols} needs {}",
            bytes.len(),
            len * 8
        ));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((rows as usize, cols as usize, data))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn save_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    write_kzm(create(path)?, a.rows(), a.cols(), a.data()).map_err(|e| Error::io(path, e))
}

pub fn load_matrix(path: &Path) -> Result<DenseMatrix> {
    let (rows, cols, data) = read_kzm(open(path)?).map_err(|m| Error::format(path, m))?;
    Ok(DenseMatrix::from_row_major(rows, cols, data)?)
}

pub fn save_vector(path: &Path, v: &[f64]) -> Result<()> {
    write_kzm(create(path)?, v.len(), 1, v).map_err(|e| Error::io(path, e))
}

pub fn load_vector(path: &Path) -> Result<Vec<f64>> {
    let (rows, cols, data) = read_kzm(open(path)?).map_err(|m| Error::format(path, m))?;
    if cols != 1 {
        return Err(Error::format(
            path,
            format!("expected a vector, found {rows}×{cols}"),
        ));
    }
    Ok(data)
}

/// Writes a matrix as CSV, one row per line, shortest round-trip decimals.
pub fn write_csv<W: Write>(w: W, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    assert_eq!(rows * cols, data.len(), "shape does not match data length");
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for row in data.chunks_exact(cols.max(1)) {
        out.write_record(row.iter().map(|v| v.to_string()))?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

/// Reads CSV written by [`write_csv`] (or any rectangular numeric CSV
/// without a header).
pub fn read_csv<R: Read>(r: R) -> Result<(usize, usize, Vec<f64>)> {
    let mut input = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut data = Vec::new();
    let mut rows = 0;
    let mut cols = 0;
    for record in input.records() {
        let record = record?;
        if rows == 0 {
            cols = record.len();
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| {
                Error::format(
                    "<csv>",
                    format!("line {}: `{field}` is not a number", rows + 1),
                )
            })?;
            data.push(v);
        }
        rows += 1;
    }
    Ok((rows, cols, data))
}

pub fn export_matrix_csv(path: &Path, a: &DenseMatrix) -> Result<()> {
    write_csv(create(path)?, a.rows(), a.cols(), a.data())
}

pub fn import_matrix_csv(path: &Path) -> Result<DenseMatrix> {
    let (rows, cols, data) = read_csv(open(path)?)?;
    Ok(DenseMatrix::from_row_major(rows, cols, data)?)
}

/// JSON metadata stored next to a dataset's matrix blob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    /// `DS1`, `DS2`, `DS3`, or a free-form label for hand-built systems.
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub prng: String,
    pub normal_algorithm: String,
    pub reference_solution_file: String,
    pub rhs_file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_sigma: Option<f64>,
}

impl Sidecar {
    /// Metadata for a hand-built system stored under `matrix_path`.
    pub fn custom(label: &str, system: &DenseSystem, seed: u64, matrix_path: &Path) -> Self {
        let (rhs, reference) = companion_paths(matrix_path);
        Self {
            family: label.to_string(),
            m: system.rows(),
            n: system.cols(),
            seed,
            prng: PRNG_NAME.to_string(),
            normal_algorithm: NORMAL_ALGORITHM.to_string(),
            reference_solution_file: file_name(&reference),
            rhs_file: file_name(&rhs),
            noise_seed: None,
            fixed_sigma: None,
        }
    }

    /// The reference is `x_LS` for DS3 and `x*` otherwise.
    pub fn reference_is_least_squares(&self) -> bool {
        self.family.parse::<Family>() == Ok(Family::Ds3)
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// `(<matrix>.b, <matrix>.ref)`.
fn companion_paths(matrix_path: &Path) -> (PathBuf, PathBuf) {
    (
        with_suffix(matrix_path, ".b"),
        with_suffix(matrix_path, ".ref"),
    )
}

pub fn sidecar_path(matrix_path: &Path) -> PathBuf {
    with_suffix(matrix_path, ".json")
}

/// A dataset loaded from disk.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub system: DenseSystem,
    pub sidecar: Sidecar,
}

/// Writes the matrix blob, right-hand side, reference and sidecar.
pub fn save_dataset(matrix_path: &Path, system: &DenseSystem, sidecar: &Sidecar) -> Result<()> {
    let reference = system
        .reference()
        .ok_or_else(|| Error::Runtime("dataset has no reference solution".into()))?;
    let dir = matrix_path.parent().unwrap_or(Path::new(""));
    save_matrix(matrix_path, &system.a)?;
    save_vector(&dir.join(&sidecar.rhs_file), &system.b)?;
    save_vector(&dir.join(&sidecar.reference_solution_file), reference)?;
    let side = sidecar_path(matrix_path);
    let mut w = create(&side)?;
    serde_json::to_writer_pretty(&mut w, sidecar)?;
    w.write_all(b"\n").map_err(|e| Error::io(&side, e))?;
    w.flush().map_err(|e| Error::io(&side, e))
}

pub fn save_generated(matrix_path: &Path, generated: &GeneratedSystem) -> Result<Sidecar> {
    let spec = &generated.spec;
    let mut sidecar = Sidecar::custom(spec.family.id(), &generated.system, spec.seed, matrix_path);
    if spec.family == Family::Ds3 {
        sidecar.noise_seed = Some(spec.noise_seed());
    }
    sidecar.fixed_sigma = spec.fixed_sigma;
    save_dataset(matrix_path, &generated.system, &sidecar)?;
    Ok(sidecar)
}

pub fn load_dataset(matrix_path: &Path) -> Result<Dataset> {
    let side = sidecar_path(matrix_path);
    let sidecar: Sidecar =
        serde_json::from_reader(open(&side)?).map_err(|e| Error::format(&side, e.to_string()))?;
    let a = load_matrix(matrix_path)?;
    if (a.rows(), a.cols()) != (sidecar.m, sidecar.n) {
        return Err(Error::format(
            &side,
            format!(
                "sidecar says {}×{}, matrix blob is {}×{}",
                sidecar.m,
                sidecar.n,
                a.rows(),
                a.cols()
            ),
        ));
    }
    let dir = matrix_path.parent().unwrap_or(Path::new(""));
    let b = load_vector(&dir.join(&sidecar.rhs_file))?;
    let reference = load_vector(&dir.join(&sidecar.reference_solution_file))?;
    let system = DenseSystem::new(a, b)?;
    let system = if sidecar.reference_is_least_squares() {
        system.with_x_ls(reference)?
    } else {
        system.with_x_star(reference)?
    };
    Ok(Dataset { system, sidecar })
}
