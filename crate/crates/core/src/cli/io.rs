//! Input formats and atomic output.
//!
//! * points: headerless CSV of reals, one sample per row
//! * precomputed: square CSV matrix, entry `(i, j)` is `d(i, j)`
//! * sequences: JSON lines `{"id": .., "pitches": [..], "durations": [..], "transpose": n}`
//! * trajectories: JSON lines `{"id": .., "points": [[x, y], ..], "rotate": radians}`
//!
//! Samples are numbered by their position in the file; `id` fields are
//! informational.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, DistanceMatrix};
use crate::distances::{DistanceKind, MusicSegment, Trajectory};
use crate::error::{Error, Result};
use crate::numeric::format_g17;

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Reads a headerless CSV of reals; blank lines are skipped.
pub fn read_real_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    parse_real_rows(path, &text)
}

fn parse_real_rows(path: &Path, text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_error(path, line, format!("'{field}' is not a finite number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceRecord {
    #[allow(dead_code)]
    id: Option<serde_json::Value>,
    pitches: Vec<i32>,
    durations: Vec<f64>,
    transpose: Option<i32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryRecord {
    #[allow(dead_code)]
    id: Option<serde_json::Value>,
    points: Vec<(f64, f64)>,
    rotate: Option<f64>,
}

fn parse_json_lines<T, U>(
    path: &Path,
    text: &str,
    mut convert: impl FnMut(T) -> Result<U>,
) -> Result<Vec<U>>
where
    T: for<'de> Deserialize<'de>,
{
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: T =
            serde_json::from_str(line).map_err(|e| parse_error(path, line_no, e.to_string()))?;
        out.push(convert(record).map_err(|e| match e {
            Error::Parameter(msg) => parse_error(path, line_no, msg),
            other => other,
        })?);
    }
    Ok(out)
}

/// Loads `path` in the format implied by `kind`.
pub fn read_dataset(path: &Path, kind: DistanceKind) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    match kind {
        DistanceKind::Euclidean => {
            let rows = parse_real_rows(path, &text)?;
            if let Some(dim) = rows.first().map(Vec::len) {
                if let Some(i) = rows.iter().position(|r| r.len() != dim) {
                    return Err(parse_error(
                        path,
                        i as u64 + 1,
                        format!("row has {} values, expected {dim}", rows[i].len()),
                    ));
                }
            }
            Ok(Dataset::Points(rows))
        }
        DistanceKind::Precomputed => {
            let rows = parse_real_rows(path, &text)?;
            let n = rows.len();
            if let Some(i) = rows.iter().position(|r| r.len() != n) {
                return Err(parse_error(
                    path,
                    i as u64 + 1,
                    format!("matrix row has {} entries, expected {n}", rows[i].len()),
                ));
            }
            Ok(Dataset::Opaque(DistanceMatrix::from_rows(rows)?))
        }
        DistanceKind::Music => parse_json_lines(path, &text, |r: SequenceRecord| {
            let segment = MusicSegment::new(r.pitches, r.durations)?;
            Ok(segment.transposed(r.transpose.unwrap_or(0)))
        })
        .map(Dataset::Sequences),
        DistanceKind::Trajectory => parse_json_lines(path, &text, |r: TrajectoryRecord| {
            Trajectory::new(r.points, r.rotate)
        })
        .map(Dataset::Trajectories),
    }
}

#[derive(Serialize)]
struct SequenceOut<'a> {
    id: usize,
    pitches: &'a [i32],
    durations: &'a [f64],
}

#[derive(Serialize)]
struct TrajectoryOut<'a> {
    id: usize,
    points: &'a [(f64, f64)],
}

/// Serializes `dataset` in its input format.
pub fn format_dataset(dataset: &Dataset) -> Result<String> {
    let mut out = String::new();
    match dataset {
        Dataset::Points(rows) => {
            for row in rows {
                out.push_str(&join_reals(row.iter().copied()));
                out.push('\n');
            }
        }
        Dataset::Opaque(m) => {
            for row in m.rows() {
                out.push_str(&join_reals(row.iter().copied()));
                out.push('\n');
            }
        }
        Dataset::Sequences(segments) => {
            for (id, s) in segments.iter().enumerate() {
                let rec = SequenceOut {
                    id,
                    pitches: s.pitches(),
                    durations: s.durations(),
                };
                out.push_str(&serde_json::to_string(&rec).map_err(json_error)?);
                out.push('\n');
            }
        }
        Dataset::Trajectories(paths) => {
            for (id, t) in paths.iter().enumerate() {
                let rec = TrajectoryOut {
                    id,
                    points: t.points(),
                };
                out.push_str(&serde_json::to_string(&rec).map_err(json_error)?);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn join_reals(values: impl Iterator<Item = f64>) -> String {
    values.map(format_g17).collect::<Vec<_>>().join(",")
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::parameter(format!("json: {e}"))
}

/// Writes every `(path, contents)` pair or none of them: all contents go to
/// temporary files in the destination directories first and are renamed into
/// place only once every write succeeded.
pub fn write_atomic(files: &[(&Path, &[u8])]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, *path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    }
    Ok(())
}
