use crate::digest::DigestBuilder;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::provenance::{Decision, Provenance};
use crate::scalar::Scalar;

/// One numeric vector per symbol, plus provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<T> {
    rows: Matrix<T>,
    symbol_ids: Vec<String>,
    provenance: Provenance,
}

impl<T: Scalar> Representation<T> {
    pub fn new(rows: Matrix<T>, symbol_ids: Vec<String>, provenance: Provenance) -> Result<Self> {
        if rows.nrows() != symbol_ids.len() {
            return Err(Error::LengthMismatch(rows.nrows(), symbol_ids.len()));
        }
        if !rows.all_finite() {
            return Err(Error::InvalidParameter("representation has non-finite entries".into()));
        }
        Ok(Representation {
            rows,
            symbol_ids,
            provenance,
        })
    }

    /// Representation whose provenance is derived from its own contents and
    /// the supplied decisions. Used for externally computed vectors.
    pub fn external(rows: Matrix<T>, symbol_ids: Vec<String>, decisions: Vec<Decision>) -> Result<Self> {
        let mut b = DigestBuilder::new("representation/external");
        b.u64(rows.nrows() as u64).u64(rows.ncols() as u64);
        for x in rows.as_slice() {
            b.f64(x.as_f64());
        }
        for id in &symbol_ids {
            b.str(id);
        }
        for d in &decisions {
            b.str(&d.name).str(&d.value);
        }
        let provenance = Provenance::new(b.finish(), decisions);
        Self::new(rows, symbol_ids, provenance)
    }

    pub fn rows(&self) -> &Matrix<T> {
        &self.rows
    }

    pub fn symbol_ids(&self) -> &[String] {
        &self.symbol_ids
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }

    /// Reorders rows: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let rows = Matrix::from_fn(self.len(), self.dim(), |i, j| self.rows[(perm[i], j)]);
        Representation {
            rows,
            symbol_ids: perm.iter().map(|&i| self.symbol_ids[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }
}
