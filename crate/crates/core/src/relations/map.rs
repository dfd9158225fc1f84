use rayon::prelude::*;

use super::measures::{check_finite, check_probability, Domain, RelationMeasure};
use super::{Representation, Structure};
use crate::corpus::{RawCorpus, SymbolSet};
use crate::digest::{Digest, DigestBuilder};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::Decision;
use crate::scalar::Scalar;

/// Evaluates `pair(i, j)` for every `i < j` and mirrors it; the diagonal
/// holds `diag`. Rows are computed in parallel.
fn symmetric_matrix<T: Scalar>(n: usize, diag: T, pair: impl Fn(usize, usize) -> T + Sync) -> Matrix<T> {
    let upper: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| pair(i, j)).collect())
        .collect();
    let mut m = Matrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        m[(i, i)] = diag;
        for (off, &v) in row.iter().enumerate() {
            let j = i + 1 + off;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Digest of `structural_map(rep, d)`, computable without the matrix.
pub fn structure_digest(representation: &Digest, d: RelationMeasure) -> Digest {
    DigestBuilder::new("structure").digest(representation).str(d.id()).finish()
}

/// Full |S|×|S| matrix of `d` over a representation's rows.
pub fn structural_map<T: Scalar>(rep: &Representation<T>, d: RelationMeasure) -> Result<Structure<T>> {
    let n = rep.len();
    if n < 2 {
        return Err(Error::TooFew {
            what: "symbols",
            needed: 2,
            got: n,
        });
    }
    let rows = rep.rows();
    for row in rows.rows_iter() {
        match d.domain() {
            Domain::ProbabilityVectors => check_probability(row, d.id())?,
            Domain::RealVectors => {
                check_finite(row, d.id())?;
                if d == RelationMeasure::Cosine && row.iter().all(|x| *x == T::zero()) {
                    return Err(Error::ZeroVector);
                }
            }
            Domain::Strings => {
                return Err(Error::DomainViolation {
                    measure: d.id().into(),
                    message: "numeric representation given to a string measure".into(),
                })
            }
        }
    }
    debug_assert!(d.symmetric());
    let matrix = symmetric_matrix(n, T::of(d.self_relation()), |i, j| {
        d.eval_unchecked(rows.row(i), rows.row(j))
    });
    let phi = structure_digest(&rep.provenance().digest, d);
    let mut decisions = rep.provenance().decisions.clone();
    decisions.push(Decision::new("measure", d.id()));
    Structure::new(matrix, rep.symbol_ids().to_vec(), d.id(), phi, decisions)
}

/// Edit-distance structure computed directly over raw texts.
pub fn text_structure<T: Scalar>(corpus: &RawCorpus, symbols: &SymbolSet) -> Result<Structure<T>> {
    let texts: Vec<&str> = symbols
        .ids()
        .iter()
        .map(|id| {
            corpus
                .get(id)
                .map(|d| d.text.as_str())
                .ok_or_else(|| Error::SymbolNotFound(id.clone()))
        })
        .collect::<Result<_>>()?;
    let matrix = symmetric_matrix(texts.len(), T::zero(), |i, j| {
        T::of(super::edit_distance(texts[i], texts[j]) as f64)
    });
    let corpus_digest = corpus.digest();
    let phi = DigestBuilder::new("structure/text")
        .digest(&corpus_digest)
        .digest(&symbols.digest())
        .str("edit")
        .finish();
    let decisions = vec![
        Decision::new("corpus", corpus_digest),
        Decision::new("symbols", symbols.digest()),
        Decision::new("measure", "edit"),
    ];
    Structure::new(matrix, symbols.ids().to_vec(), "edit", phi, decisions)
}
