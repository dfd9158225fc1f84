use super::svd::singular_values;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relations::Structure;
use crate::scalar::Scalar;

/// Centered Frobenius norms below this are degenerate.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Rows translated to zero centroid and scaled to unit Frobenius norm.
pub(crate) fn standardize<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let n = T::of(m.nrows() as f64);
    let mut centroid = vec![T::zero(); m.ncols()];
    for row in m.rows_iter() {
        for (c, &x) in centroid.iter_mut().zip(row) {
            *c = *c + x;
        }
    }
    for c in &mut centroid {
        *c = *c / n;
    }
    let mut out = Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] - centroid[j]);
    let norm = out.frobenius_norm();
    if norm.as_f64() < DEGENERATE_NORM {
        return Err(Error::DegenerateStructure);
    }
    for i in 0..out.nrows() {
        for x in out.row_mut(i) {
            *x = *x / norm;
        }
    }
    Ok(out)
}

/// Standardized Procrustes disparity between two point configurations
/// (rows are points): both are centered and scaled to unit norm, the
/// optimal orthogonal map (reflections allowed) aligns one onto the other,
/// and the residual `1 − (Σσ)²` is returned, σ the singular values of the
/// cross-covariance. Symmetric, in `[0, 1]`.
pub fn procrustes_matrices<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::LengthMismatch(a.nrows(), b.nrows()));
    }
    if a.nrows() < 2 {
        return Err(Error::TooFew {
            what: "points",
            needed: 2,
            got: a.nrows(),
        });
    }
    let a = standardize(a)?;
    let b = standardize(b)?;
    let cross = a.t_mul(&b);
    let trace: T = singular_values(&cross).into_iter().sum();
    Ok((T::one() - trace * trace).max(T::zero()).min(T::one()))
}

pub fn procrustes_disparity<T: Scalar>(a: &Structure<T>, b: &Structure<T>) -> Result<T> {
    if a.symbol_ids() != b.symbol_ids() {
        return Err(Error::SymbolMismatch);
    }
    procrustes_matrices(a.matrix(), b.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<f64>]) -> Matrix<f64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn self_disparity_is_zero() {
        let a = m(&[vec![0.0, 0.3, 0.9], vec![0.3, 0.0, 0.4], vec![0.9, 0.4, 0.0]]);
        assert!(procrustes_matrices(&a, &a).unwrap() <= 1e-10);
    }

    #[test]
    fn null_configurations_are_equivalent() {
        let null = |c: f64| Matrix::from_fn(5, 5, |i, j| if i == j { 0.0 } else { c });
        assert!(procrustes_matrices(&null(1.0), &null(7.0)).unwrap() <= 1e-10);
    }

    #[test]
    fn constant_matrix_is_degenerate() {
        let c = Matrix::from_fn(3, 3, |_, _| 2.0);
        let a = m(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]);
        assert!(matches!(procrustes_matrices(&c, &a), Err(Error::DegenerateStructure)));
    }

    #[test]
    fn reflection_is_free() {
        let a = m(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![-1.0, 0.5]]);
        let b = a.map(|x| x).transpose().transpose();
        let reflected = Matrix::from_fn(3, 2, |i, j| if j == 0 { -b[(i, j)] } else { b[(i, j)] });
        assert!(procrustes_matrices(&a, &reflected).unwrap() <= 1e-12);
    }

    #[test]
    fn f32_agrees_with_f64() {
        let a = m(&[vec![0.0, 0.3, 0.9], vec![0.3, 0.0, 0.4], vec![0.9, 0.4, 0.0]]);
        let b = m(&[vec![0.0, 0.8, 0.1], vec![0.8, 0.0, 0.5], vec![0.1, 0.5, 0.0]]);
        let d64 = procrustes_matrices(&a, &b).unwrap();
        let d32 = procrustes_matrices(&a.cast::<f32>(), &b.cast::<f32>()).unwrap();
        assert!((d64 - d32 as f64).abs() < 1e-5);
    }
}
