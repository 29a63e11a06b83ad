use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rank};
use crate::grid::GridSpec;
use crate::scalar::Real;

/// JSON header stored next to the raw sample file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub dim: usize,
    pub points_per_axis: usize,
    pub extent: f64,
    pub rank: Rank,
}

pub fn header_of<T: Real>(u: &Field<T>) -> FieldHeader {
    let g = u.grid();
    FieldHeader { dim: g.dim(), points_per_axis: g.points_per_axis(), extent: g.extent().as_f64(), rank: u.rank() }
}

/// Little-endian `f64` encoding of the samples.
pub fn encode_samples<T: Real>(u: &Field<T>) -> Vec<u8> {
    u.samples().iter().flat_map(|x| x.as_f64().to_le_bytes()).collect()
}

pub fn decode_field<T: Real>(header: &FieldHeader, bytes: &[u8]) -> Result<Field<T>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Format(format!("sample file length {} is not a multiple of 8", bytes.len())));
    }
    let grid = GridSpec::new(header.dim, header.points_per_axis, T::lit(header.extent))?;
    let samples = bytes
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().unwrap())))
        .collect();
    Field::new(grid, header.rank, samples)
}

/// Writes `<stem>.json` and `<stem>.bin` into `dir`.
pub fn write_field<T: Real>(u: &Field<T>, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let header_path = dir.join(format!("{stem}.json"));
    let data_path = dir.join(format!("{stem}.bin"));
    let header = serde_json::to_string_pretty(&header_of(u)).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(&header_path, header)?;
    fs::write(&data_path, encode_samples(u))?;
    Ok((header_path, data_path))
}

/// Reads a field given the path of its JSON header; samples are expected in
/// the sibling `.bin` file.
pub fn read_field<T: Real>(header_path: &Path) -> Result<Field<T>> {
    let text = fs::read_to_string(header_path)?;
    let header: FieldHeader = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    let bytes = fs::read(header_path.with_extension("bin"))?;
    decode_field(&header, &bytes)
}
