//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Each sweep annihilates every off-diagonal pair (p, q) with a complex
//! Givens rotation; sweeps repeat until the off-diagonal Frobenius norm
//! drops below 1e-12. Eigenvalues are returned ascending with a stable
//! tie order, and each eigenvector's first nonzero component is rotated
//! real-positive so repeated runs are bit-identical.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::HERMITICITY_TOL;

/// Result of [`eigh`]: `eigenvalues[k]` pairs with column `k` of `eigenvectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const OFF_DIAGONAL_TARGET: f64 = 1e-12;
const MAX_SWEEPS: usize = 128;

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects inputs whose Hermiticity defect exceeds 1e-10; the defect that
/// is present gets symmetrized away before iterating so the rotations act
/// on an exactly Hermitian matrix.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigh expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    // Symmetrize: a <- (m + m^dag) / 2.
    let mut a = m.add(&m.dagger()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    let mut last_off = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off < OFF_DIAGONAL_TARGET || off >= last_off {
            // Converged, or stalled at the floating-point floor.
            break;
        }
        last_off = off;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                // Smaller root of t^2 - 2 theta t - 1 = 0 zeroes the pivot.
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_phase = phase * s; // s * e^{i phi}
                let s_conj = phase.conj() * s; // s * e^{-i phi}

                // Column update: A <- A U with U[p,p]=c, U[p,q]=-s e^{i phi},
                // U[q,p]= s e^{-i phi}, U[q,q]=c.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp + s_conj * akq;
                    a[(k, q)] = -s_phase * akp + c * akq;
                }
                // Row update: A <- U^dag A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk + s_phase * aqk;
                    a[(q, k)] = -s_conj * apk + c * aqk;
                }
                // Accumulate eigenvectors: V <- V U.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp + s_conj * vkq;
                    v[(k, q)] = -s_phase * vkp + c * vkq;
                }
                // Rotation leaves tiny imaginary dust on the diagonal.
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    // Stable ascending sort; ties keep the sweep order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        let mut col = v.column(src);
        fix_phase(&mut col);
        eigenvectors.set_column(dst, &col);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Rotates a vector's global phase so its first nonzero component is
/// real-positive.
fn fix_phase(v: &mut [Complex64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12 * scale) {
        let phase = lead / lead.norm();
        let correction = phase.conj();
        for z in v.iter_mut() {
            *z *= correction;
        }
    }
}

/// Unitary propagator `exp(-i H t)` of a Hermitian generator, assembled
/// from the eigendecomposition.
pub fn expm_minus_i(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(propagate(&eig, t))
}

/// `exp(-i H t)` from a precomputed decomposition of H; cheap enough to
/// call inside a sweep over many times.
pub fn propagate(eig: &EigenDecomposition, t: f64) -> ComplexMatrix {
    let n = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::new(0.0, -lambda * t).exp();
        for i in 0..n {
            scaled[(i, k)] = v[(i, k)] * phase;
        }
    }
    scaled.mul(&v.dagger()).expect("square dims agree")
}
