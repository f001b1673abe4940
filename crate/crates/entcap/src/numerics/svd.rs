//! Singular value decomposition via the Hermitian eigenproblem of
//! `M^dag M`. Squaring the condition number is acceptable at the matrix
//! sizes and tolerances this crate targets, and it keeps the whole stack
//! on one eigensolver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::eigen::eigh;
use crate::numerics::matrix::{inner, vec_norm, ComplexMatrix};

/// Thin SVD `M = U diag(s) Vh` with `min(rows, cols)` singular values,
/// descending. Columns of `U` and rows of `Vh` are orthonormal; singular
/// values below `1e-10 * s_max` are reported as exactly zero.
#[derive(Clone, Debug)]
pub struct SingularValueDecomposition {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub vh: ComplexMatrix,
}

const RELATIVE_ZERO_CUTOFF: f64 = 1e-10;

pub fn svd(m: &ComplexMatrix) -> Result<SingularValueDecomposition> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension("svd of an empty matrix".into()));
    }
    let k = rows.min(cols);

    let gram = m.dagger().mul(m)?; // cols x cols, Hermitian PSD
    let eig = eigh(&gram)?;

    // Take the k largest eigenpairs (eigh sorts ascending).
    let picked: Vec<usize> = (0..cols).rev().take(k).collect();

    // Recover each singular value as |M v|; that choice (rather than
    // sqrt(lambda)) makes U diag(s) Vh reproduce M to eigensolver accuracy.
    let mut triples: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = Vec::with_capacity(k);
    for &idx in &picked {
        let v = eig.eigenvectors.column(idx);
        let w = m.matvec(&v)?;
        triples.push((vec_norm(&w), w, v));
    }
    triples.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let s_max = triples.first().map(|t| t.0).unwrap_or(0.0);
    let cutoff = RELATIVE_ZERO_CUTOFF * s_max;

    let mut u = ComplexMatrix::zeros(rows, k);
    let mut vh = ComplexMatrix::zeros(k, cols);
    let mut singular_values = Vec::with_capacity(k);
    let mut null_columns = Vec::new();
    for (n, (s, w, v)) in triples.into_iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            vh[(n, j)] = vj.conj();
        }
        if s > cutoff && s > 0.0 {
            singular_values.push(s);
            let inv = Complex64::new(1.0 / s, 0.0);
            let col: Vec<Complex64> = w.iter().map(|z| z * inv).collect();
            u.set_column(n, &col);
        } else {
            singular_values.push(0.0);
            null_columns.push(n);
        }
    }

    // Null directions of M carry no column information; fill them with an
    // orthonormal completion so U keeps orthonormal columns.
    if !null_columns.is_empty() {
        let existing: Vec<Vec<Complex64>> = (0..k)
            .filter(|n| !null_columns.contains(n))
            .map(|n| u.column(n))
            .collect();
        let fills = orthonormal_completion(rows, &existing, null_columns.len());
        for (n, col) in null_columns.into_iter().zip(fills) {
            u.set_column(n, &col);
        }
    }

    Ok(SingularValueDecomposition {
        u,
        singular_values,
        vh,
    })
}

/// Gram-Schmidt over the canonical basis: returns `count` unit vectors
/// orthogonal to `existing` and to each other.
fn orthonormal_completion(
    dim: usize,
    existing: &[Vec<Complex64>],
    count: usize,
) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = existing.to_vec();
    let mut fills = Vec::with_capacity(count);
    for e in 0..dim {
        if fills.len() == count {
            break;
        }
        let mut candidate = vec![Complex64::new(0.0, 0.0); dim];
        candidate[e] = Complex64::new(1.0, 0.0);
        for b in &basis {
            let overlap = inner(b, &candidate);
            for (c, &bb) in candidate.iter_mut().zip(b.iter()) {
                *c -= overlap * bb;
            }
        }
        let norm = vec_norm(&candidate);
        if norm > 1e-8 {
            let inv = Complex64::new(1.0 / norm, 0.0);
            for c in candidate.iter_mut() {
                *c *= inv;
            }
            basis.push(candidate.clone());
            fills.push(candidate);
        }
    }
    assert_eq!(fills.len(), count, "orthonormal completion exhausted basis");
    fills
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(s: &SingularValueDecomposition) -> ComplexMatrix {
        let k = s.singular_values.len();
        let mut mid = ComplexMatrix::zeros(k, k);
        for (i, &sv) in s.singular_values.iter().enumerate() {
            mid[(i, i)] = c(sv, 0.0);
        }
        s.u.mul(&mid).unwrap().mul(&s.vh).unwrap()
    }

    #[test]
    fn diagonal_matrix_singular_values() {
        let m = ComplexMatrix::new(2, 2, vec![c(3., 0.), c(0., 0.), c(0., 0.), c(-2., 0.)])
            .unwrap();
        let s = svd(&m).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((s.singular_values[1] - 2.0).abs() < 1e-12);
        assert!(reconstruct(&s).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn zero_matrix_all_zero_singular_values_orthonormal_u() {
        let m = ComplexMatrix::zeros(3, 2);
        let s = svd(&m).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        assert!(s.u.unitarity_defect().unwrap() < 1e-14);
    }

    #[test]
    fn wide_and_tall_shapes_reconstruct() {
        let wide = ComplexMatrix::new(
            2,
            3,
            vec![c(1., 0.2), c(0., -1.), c(2., 0.), c(0.5, 0.), c(1., 1.), c(0., 0.3)],
        )
        .unwrap();
        let tall = wide.dagger();
        for m in [wide, tall] {
            let s = svd(&m).unwrap();
            assert!(reconstruct(&s).max_abs_diff(&m) < 1e-10);
            assert!(s.u.unitarity_defect().unwrap() < 1e-10);
            assert!(s.vh.dagger().unitarity_defect().unwrap() < 1e-10);
            for w in s.singular_values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn rank_one_matrix_has_one_nonzero_value() {
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        let v = [c(1.0 / f64::sqrt(2.0), 0.0), c(0.0, -1.0 / f64::sqrt(2.0))];
        let m = crate::numerics::matrix::outer(&u, &v);
        let s = svd(&m).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-12);
        assert_eq!(s.singular_values[1], 0.0);
        assert!(reconstruct(&s).max_abs_diff(&m) < 1e-10);
    }
}
