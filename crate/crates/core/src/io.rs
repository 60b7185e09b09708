//! File formats: JSON and binary matrices, lattice functions, symbol
//! tensors, and norm-estimate reports with witness matrices by reference.
//!
//! JSON matrices round-trip bitwise (serde_json prints shortest-exact f64).
//! The binary format is "MSMT" magic, u32 rows, u32 cols, then row-major
//! little-endian (f64 re, f64 im) pairs.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::matrix::ComplexMatrix;
use crate::normest::NormEstimate;
use crate::symbols::SymbolTensor;

const MAGIC: &[u8; 4] = b"MSMT";

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn split_re_im(entries: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    (entries.iter().map(|z| z.re).collect(), entries.iter().map(|z| z.im).collect())
}

fn join_re_im(re: &[f64], im: &[f64]) -> Result<Vec<Complex64>> {
    if re.len() != im.len() {
        return Err(Error::format("re/im arrays differ in length"));
    }
    Ok(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let (re, im) = split_re_im(m.entries());
    serde_json::to_string(&MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        re,
        im,
    })
    .expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::format(e.to_string()))?;
    ComplexMatrix::new(raw.rows, raw.cols, join_re_im(&raw.re, &raw.im)?)
}

pub fn matrix_to_binary(m: &ComplexMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 16 * m.entries().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for z in m.entries() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn matrix_from_binary(bytes: &[u8]) -> Result<ComplexMatrix> {
    if bytes.len() < 12 || &bytes[0..4] != MAGIC {
        return Err(Error::format("not an MSMT binary matrix"));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let need = 12 + 16 * rows.checked_mul(cols).ok_or_else(|| Error::format("matrix too large"))?;
    if bytes.len() != need {
        return Err(Error::format(format!(
            "binary matrix length {} does not match {}x{}",
            bytes.len(),
            rows,
            cols
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for chunk in bytes[12..].chunks_exact(16) {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        entries.push(Complex64::new(re, im));
    }
    ComplexMatrix::new(rows, cols, entries)
}

/// Writes a matrix; `.msmt`/`.bin` extensions choose the binary format,
/// anything else JSON.
pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    let binary = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("msmt") | Some("bin")
    );
    if binary {
        fs::File::create(path)?.write_all(&matrix_to_binary(m))?;
    } else {
        fs::write(path, matrix_to_json(m))?;
    }
    Ok(())
}

/// Reads a matrix, detecting the binary format by its magic bytes.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.starts_with(MAGIC) {
        matrix_from_binary(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| Error::format("matrix file is neither MSMT nor UTF-8 JSON"))?;
        matrix_from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(rename = "M")]
    m: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn lattice_to_json(f: &LatticeFunction) -> String {
    let (re, im) = split_re_im(f.values());
    serde_json::to_string(&LatticeJson { m: f.radius(), re, im }).expect("serialization cannot fail")
}

pub fn lattice_from_json(text: &str) -> Result<LatticeFunction> {
    let raw: LatticeJson = serde_json::from_str(text).map_err(|e| Error::format(e.to_string()))?;
    LatticeFunction::new(raw.m, join_re_im(&raw.re, &raw.im)?)
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    arity: usize,
    axis: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn symbol_to_json(s: &SymbolTensor) -> String {
    let (re, im) = split_re_im(s.values());
    serde_json::to_string(&SymbolJson {
        arity: s.arity(),
        axis: s.axis(),
        re,
        im,
    })
    .expect("serialization cannot fail")
}

pub fn symbol_from_json(text: &str) -> Result<SymbolTensor> {
    let raw: SymbolJson = serde_json::from_str(text).map_err(|e| Error::format(e.to_string()))?;
    SymbolTensor::new(raw.arity, raw.axis, join_re_im(&raw.re, &raw.im)?)
}

pub fn read_symbol(path: &Path) -> Result<SymbolTensor> {
    symbol_from_json(&fs::read_to_string(path)?)
}

pub fn read_lattice(path: &Path) -> Result<LatticeFunction> {
    lattice_from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EstimateJson {
    pub value: f64,
    pub objective_check: f64,
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub converged: bool,
    pub method: String,
    /// Witness matrix files, relative to the report's directory.
    pub witnesses: Vec<String>,
    pub dual_witness: Option<String>,
}

/// Writes an estimate as `<stem>.json` plus witness matrix files
/// `<stem>.witness<k>.json` (and `<stem>.dual.json`) next to it.
pub fn save_estimate(stem: &Path, est: &NormEstimate) -> Result<PathBuf> {
    let dir = stem.parent().map(Path::to_path_buf).unwrap_or_default();
    let base = stem
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::input("save_estimate needs a file stem"))?;
    let mut witness_names = Vec::new();
    for (k, w) in est.witnesses.iter().enumerate() {
        let name = format!("{base}.witness{k}.json");
        write_matrix(&dir.join(&name), w)?;
        witness_names.push(name);
    }
    let dual_name = match &est.dual_witness {
        Some(d) => {
            let name = format!("{base}.dual.json");
            write_matrix(&dir.join(&name), d)?;
            Some(name)
        }
        None => None,
    };
    let report = EstimateJson {
        value: est.value,
        objective_check: est.objective_check,
        seed: est.seed,
        restarts: est.restarts_used,
        iterations: est.iterations,
        converged: est.converged,
        method: est.method.clone(),
        witnesses: witness_names,
        dual_witness: dual_name,
    };
    let path = dir.join(format!("{base}.json"));
    fs::write(&path, serde_json::to_string_pretty(&report).expect("serialization cannot fail"))?;
    Ok(path)
}
