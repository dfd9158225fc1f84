//! Singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! Rows are rotated pairwise until mutually orthogonal; the singular values
//! are then the row norms. One-sided Jacobi computes small singular values
//! to high relative accuracy, which the Procrustes disparity needs when two
//! configurations nearly coincide.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Singular values of `m`, unsorted.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    // σ(M) = σ(Mᵀ); orthogonalize whichever side is shorter as rows.
    let mut a = if m.nrows() <= m.ncols() {
        m.clone()
    } else {
        m.transpose()
    };
    let rows = a.nrows();
    let cols = a.ncols();
    let tol = T::epsilon() * T::of(cols.max(1) as f64);
    let mut norms = vec![T::zero(); rows];
    for _ in 0..MAX_SWEEPS {
        // Refreshed each sweep so the cheap in-sweep updates cannot drift.
        for (i, n) in norms.iter_mut().enumerate() {
            *n = dot(a.row(i), a.row(i));
        }
        let mut rotated = false;
        for p in 0..rows {
            for q in (p + 1)..rows {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = dot(a.row(p), a.row(q));
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_rows(&mut a, p, q, c, s);
                norms[p] = (alpha - t * gamma).max(T::zero());
                norms[q] = beta + t * gamma;
            }
        }
        if !rotated {
            break;
        }
    }
    for (i, n) in norms.iter_mut().enumerate() {
        *n = dot(a.row(i), a.row(i));
    }
    norms.into_iter().map(|x| x.sqrt()).collect()
}

fn dot<T: Scalar>(u: &[T], v: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let mut cu = u.chunks_exact(4);
    let mut cv = v.chunks_exact(4);
    for (x, y) in (&mut cu).zip(&mut cv) {
        for l in 0..4 {
            acc[l] = acc[l] + x[l] * y[l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (&x, &y) in cu.remainder().iter().zip(cv.remainder()) {
        s = s + x * y;
    }
    s
}

fn rotate_rows<T: Scalar>(a: &mut Matrix<T>, p: usize, q: usize, c: T, s: T) {
    debug_assert!(p < q);
    let cols = a.ncols();
    let (head, tail) = a.as_mut_slice().split_at_mut(q * cols);
    let rp = &mut head[p * cols..(p + 1) * cols];
    let rq = &mut tail[..cols];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (u, v) = (*x, *y);
        *x = c * u - s * v;
        *y = s * u + c * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    #[test]
    fn diagonal_and_rank_deficient() {
        let m = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -2.0]]);
        assert_eq!(sorted(singular_values(&m)), vec![3.0, 2.0]);
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let s = sorted(singular_values(&m));
        assert!((s[0] - 5.0).abs() < 1e-12 && s[1].abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn rectangular() {
        // [[1,1],[0,1],[1,0]]: AᵀA = [[2,1],[1,2]], σ² ∈ {3, 1}
        let m = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
        let s = sorted(singular_values(&m));
        assert!((s[0] - 3f64.sqrt()).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
    }

    proptest! {
        // Σσ² equals the squared Frobenius norm, and the largest singular
        // value dominates every row norm.
        #[test]
        fn invariants(data in prop::collection::vec(-5.0f64..5.0, 16)) {
            let m = Matrix::from_vec(4, 4, data);
            let s = singular_values(&m);
            let fro2: f64 = m.as_slice().iter().map(|x| x * x).sum();
            let s2: f64 = s.iter().map(|x| x * x).sum();
            prop_assert!((fro2 - s2).abs() <= 1e-10 * fro2.max(1.0));
            let smax = s.iter().cloned().fold(0.0, f64::max);
            for r in m.rows_iter() {
                prop_assert!(r.iter().map(|x| x * x).sum::<f64>().sqrt() <= smax + 1e-10);
            }
            // |det| = Πσ
            let det = det4(&m);
            let prod: f64 = s.iter().product();
            prop_assert!((det.abs() - prod).abs() <= 1e-8 * prod.max(1.0));
        }
    }

    fn det4(m: &Matrix<f64>) -> f64 {
        // Laplace expansion, independent of the rotation path.
        fn det(rows: &[Vec<f64>]) -> f64 {
            if rows.len() == 1 {
                return rows[0][0];
            }
            (0..rows.len())
                .map(|j| {
                    let minor: Vec<Vec<f64>> = rows[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * rows[0][j] * det(&minor)
                })
                .sum()
        }
        let rows: Vec<Vec<f64>> = m.rows_iter().map(|r| r.to_vec()).collect();
        det(&rows)
    }
}
