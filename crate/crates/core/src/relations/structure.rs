use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::Decision;
use crate::scalar::Scalar;
use crate::textio::{read_decisions, read_ids, read_rows, write_atomic, write_decisions, write_rows};

pub const STRUCT_MAGIC: &str = "STRUCT1";

/// A full |S|×|S| matrix of pairwise relations over an ordered symbol set.
///
/// `phi_digest` covers every decision (and every data digest) that produced
/// the matrix. `decisions` is the readable form of that chain, used to check
/// that compared structures share their fixed decisions.
#[derive(Clone, Debug, PartialEq)]
pub struct Structure<T> {
    matrix: Matrix<T>,
    symbol_ids: Vec<String>,
    measure_id: String,
    phi_digest: Digest,
    decisions: Vec<Decision>,
}

impl<T: Scalar> Structure<T> {
    pub fn new(
        matrix: Matrix<T>,
        symbol_ids: Vec<String>,
        measure_id: impl Into<String>,
        phi_digest: Digest,
        decisions: Vec<Decision>,
    ) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != symbol_ids.len() {
            return Err(Error::LengthMismatch(matrix.nrows(), symbol_ids.len()));
        }
        if matrix.nrows() < 2 {
            return Err(Error::TooFew {
                what: "symbols",
                needed: 2,
                got: matrix.nrows(),
            });
        }
        if !matrix.all_finite() {
            return Err(Error::InvalidParameter("structure has non-finite entries".into()));
        }
        let measure_id = measure_id.into();
        if measure_id.contains(char::is_whitespace) {
            return Err(Error::InvalidParameter("measure id contains whitespace".into()));
        }
        Ok(Structure {
            matrix,
            symbol_ids,
            measure_id,
            phi_digest,
            decisions,
        })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn symbol_ids(&self) -> &[String] {
        &self.symbol_ids
    }

    pub fn measure_id(&self) -> &str {
        &self.measure_id
    }

    pub fn phi_digest(&self) -> &Digest {
        &self.phi_digest
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn n(&self) -> usize {
        self.symbol_ids.len()
    }

    /// Same structure with an entrywise transform applied; provenance is kept.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Self {
        Structure {
            matrix: self.matrix.map(f),
            ..self.clone()
        }
    }

    pub fn with_decisions(mut self, decisions: Vec<Decision>) -> Self {
        self.decisions = decisions;
        self
    }

    /// `STRUCT1 n measure_id phi_digest`, n rows of n values at 17
    /// significant digits, n symbol ids, then `@name=value` decision lines.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::with_capacity(n * n * 24 + 128);
        writeln!(out, "{STRUCT_MAGIC} {n} {} {}", self.measure_id, self.phi_digest).unwrap();
        write_rows(&mut out, &self.matrix);
        for id in &self.symbol_ids {
            out.push_str(id);
            out.push('\n');
        }
        write_decisions(&mut out, &self.decisions);
        out
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::format(origin, "empty file"))?;
        let parts: Vec<&str> = header.split(' ').collect();
        let [magic, n, measure_id, digest] = parts[..] else {
            return Err(Error::format(origin, "bad header"));
        };
        if magic != STRUCT_MAGIC {
            return Err(Error::format(origin, format!("expected {STRUCT_MAGIC}, got {magic}")));
        }
        let n: usize = n
            .parse()
            .map_err(|_| Error::format(origin, "bad dimension"))?;
        let phi_digest =
            Digest::parse(digest).ok_or_else(|| Error::format(origin, "bad phi digest"))?;
        let matrix = read_rows(&mut lines, n, origin)?;
        let symbol_ids = read_ids(&mut lines, n, origin)?;
        let decisions = read_decisions(lines, origin)?;
        Structure::new(matrix, symbol_ids, measure_id, phi_digest, decisions)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digest::DigestBuilder;

    fn sample() -> Structure<f64> {
        let m = Matrix::from_rows(&[
            vec![0.0, 0.1 + 0.2, 1.0 / 3.0],
            vec![0.30000000000000004, 0.0, 2e-300],
            vec![1.0 / 3.0, 2e-300, 0.0],
        ]);
        Structure::new(
            m,
            vec!["a".into(), "b c".into(), "d".into()],
            "jsd2",
            DigestBuilder::new("x").finish(),
            vec![Decision::new("k", 5), Decision::new("seed", 42)],
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let s = sample();
        let text = s.to_text();
        assert!(text.starts_with("STRUCT1 3 jsd2 "));
        let back = Structure::<f64>::from_text(&text, Path::new("mem")).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn f32_round_trip() {
        let s: Structure<f32> = Structure::new(
            Matrix::from_rows(&[vec![0.0, 0.1], vec![0.1, 0.0]]),
            vec!["a".into(), "b".into()],
            "jsd2",
            DigestBuilder::new("y").finish(),
            vec![],
        )
        .unwrap();
        let back = Structure::<f32>::from_text(&s.to_text(), Path::new("mem")).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_bad_input() {
        let p = Path::new("mem");
        assert!(Structure::<f64>::from_text("STRUCT2 2 x y", p).is_err());
        let text = sample().to_text().replacen("0.0000000000000000e0", "nan?", 1);
        assert!(Structure::<f64>::from_text(&text, p).is_err());
        assert!(Structure::new(
            Matrix::from_rows(&[vec![0.0]]),
            vec!["a".into()],
            "jsd2",
            DigestBuilder::new("z").finish(),
            vec![]
        )
        .is_err());
    }
}
