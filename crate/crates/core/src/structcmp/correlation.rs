use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relations::Structure;
use crate::scalar::Scalar;

/// Which entries of a structure enter a correlation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Extraction {
    /// Strict upper triangle, row-major.
    #[default]
    UpperTriangle,
    /// Every off-diagonal entry, row-major.
    FullOffdiag,
}

impl fmt::Display for Extraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extraction::UpperTriangle => "upper_triangle",
            Extraction::FullOffdiag => "full_offdiag",
        })
    }
}

impl FromStr for Extraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper_triangle" | "upper" => Ok(Extraction::UpperTriangle),
            "full_offdiag" | "full" => Ok(Extraction::FullOffdiag),
            _ => Err(Error::Unknown {
                what: "extraction mode",
                name: s.into(),
            }),
        }
    }
}

pub fn extract<T: Scalar>(m: &Matrix<T>, mode: Extraction) -> Vec<T> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let keep = match mode {
                Extraction::UpperTriangle => j > i,
                Extraction::FullOffdiag => j != i,
            };
            if keep {
                out.push(m[(i, j)]);
            }
        }
    }
    out
}

/// Pearson correlation of two equal-length samples.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::ZeroVariance);
    }
    let n = T::of(x.len() as f64);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let da = a - mx;
        let db = b - my;
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).max(-T::one()).min(T::one()))
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn average_ranks<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite values"));
    let mut ranks = vec![T::zero(); x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = T::of((i + j) as f64 / 2.0 + 1.0);
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    pearson(&average_ranks(x), &average_ranks(y))
}

pub fn pearson_structures<T: Scalar>(a: &Structure<T>, b: &Structure<T>, mode: Extraction) -> Result<T> {
    if a.symbol_ids() != b.symbol_ids() {
        return Err(Error::SymbolMismatch);
    }
    pearson(&extract(a.matrix(), mode), &extract(b.matrix(), mode))
}

pub fn spearman_structures<T: Scalar>(a: &Structure<T>, b: &Structure<T>, mode: Extraction) -> Result<T> {
    if a.symbol_ids() != b.symbol_ids() {
        return Err(Error::SymbolMismatch);
    }
    spearman(&extract(a.matrix(), mode), &extract(b.matrix(), mode))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extraction_order() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0, 2.0], vec![3.0, 0.0, 4.0], vec![5.0, 6.0, 0.0]]);
        assert_eq!(extract(&m, Extraction::UpperTriangle), vec![1.0, 2.0, 4.0]);
        assert_eq!(extract(&m, Extraction::FullOffdiag), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn pearson_basics() {
        let x = [1.0f64, 2.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| 10.0 - v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(pearson(&x, &[1.0, 1.0, 1.0]), Err(Error::ZeroVariance)));
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn spearman_hand_case() {
        // x ranks [1,2,3], y = [0.3, 0.1, 0.2] ranks [3,1,2]
        // Pearson of ranks: cov = (−1)(1) + 0 + (1)(0) = −1, var = 2 → −0.5
        let r: f64 = spearman(&[0.1, 0.5, 0.9], &[0.3, 0.1, 0.2]).unwrap();
        assert!((r + 0.5).abs() < 1e-15);
    }
}
