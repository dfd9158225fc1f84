//! Line-oriented text encodings shared by the structure, meta-structure
//! and model file formats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::Decision;
use crate::scalar::Scalar;

pub(crate) fn write_rows<T: Scalar>(out: &mut String, m: &Matrix<T>) {
    for row in m.rows_iter() {
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{:.16e}", x.as_f64()).unwrap();
        }
        out.push('\n');
    }
}

pub(crate) fn read_rows<'a, T: Scalar>(
    lines: &mut impl Iterator<Item = &'a str>,
    n: usize,
    origin: &Path,
) -> Result<Matrix<T>> {
    read_rows_rect(lines, n, n, origin)
}

pub(crate) fn read_rows_rect<'a, T: Scalar>(
    lines: &mut impl Iterator<Item = &'a str>,
    rows: usize,
    n: usize,
    origin: &Path,
) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(rows * n);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::format(origin, format!("missing matrix row {i}")))?;
        let before = data.len();
        for tok in line.split(' ') {
            data.push(
                T::parse_decimal(tok)
                    .ok_or_else(|| Error::format(origin, format!("bad value `{tok}` in row {i}")))?,
            );
        }
        if data.len() - before != n {
            return Err(Error::format(origin, format!("row {i} does not have {n} values")));
        }
    }
    Ok(Matrix::from_vec(rows, n, data))
}

pub(crate) fn read_ids<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    n: usize,
    origin: &Path,
) -> Result<Vec<String>> {
    (0..n)
        .map(|i| {
            lines
                .next()
                .map(str::to_string)
                .ok_or_else(|| Error::format(origin, format!("missing id {i}")))
        })
        .collect()
}

pub(crate) fn write_decisions(out: &mut String, decisions: &[Decision]) {
    for d in decisions {
        writeln!(out, "@{}={}", d.name, d.value).unwrap();
    }
}

pub(crate) fn read_decisions<'a>(
    lines: impl Iterator<Item = &'a str>,
    origin: &Path,
) -> Result<Vec<Decision>> {
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let body = l
                .strip_prefix('@')
                .ok_or_else(|| Error::format(origin, format!("unexpected trailing line `{l}`")))?;
            let (name, value) = body
                .split_once('=')
                .ok_or_else(|| Error::format(origin, format!("bad decision line `{l}`")))?;
            Ok(Decision::new(name, value))
        })
        .collect()
}

/// Writes via a temporary sibling and rename; concurrent writers of the
/// same content leave one complete file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
