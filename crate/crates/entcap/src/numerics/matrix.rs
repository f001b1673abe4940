//! Row-major dense complex matrices and the tensor-product plumbing
//! (Kronecker products, partial traces, commutators) the rest of the
//! crate is built on.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense matrix over `Complex64`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data; the length must be `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                let lhs_row = i * other.cols;
                let rhs_row = k * other.cols;
                for j in 0..other.cols {
                    out.data[lhs_row + j] += aik * other.data[rhs_row + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, x) in row.iter().zip(v) {
                acc += m * x;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max deviation from Hermiticity, `max |M - M^dag|`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// Max deviation from unitarity, `max |V^dag V - I|`.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let gram = self.dagger().mul(self)?;
        Ok(gram.max_abs_diff(&Self::identity(self.cols)))
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a (x) b`, row-major, A-major index convention:
/// entry `((i_a*rb + i_b), (j_a*cb + j_b)) = a[i_a,j_a] * b[i_b,j_b]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for ia in 0..ra {
        for ja in 0..ca {
            let aij = a[(ia, ja)];
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = aij * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Commutator `[a, b] = ab - ba` of two square matrices of equal dimension.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "commutator requires equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.mul(b)?.sub(&b.mul(a)?))
}

/// Partial trace of an operator on a bipartite space of dimension
/// `d_a * d_b` (A-major ordering). `keep` selects the surviving factor.
pub fn partial_trace(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows() != d_a * d_b {
        return Err(Error::Dimension(format!(
            "partial trace expects a {0}x{0} matrix (d_a={1}, d_b={2}), got {3}x{4}",
            d_a * d_b,
            d_a,
            d_b,
            rho.rows(),
            rho.cols()
        )));
    }
    match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(d_a, d_a);
            for a in 0..d_a {
                for ap in 0..d_a {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..d_b {
                        acc += rho[(a * d_b + b, ap * d_b + b)];
                    }
                    out[(a, ap)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(d_b, d_b);
            for b in 0..d_b {
                for bp in 0..d_b {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..d_a {
                        acc += rho[(a * d_b + b, a * d_b + bp)];
                    }
                    out[(b, bp)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Outer product `|u><v|` as a matrix.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

/// Inner product `<u|v>` with the physics convention (conjugate-linear
/// in the first argument).
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(kron(&i2, &i3), ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_mixed_product_rule() {
        // (A (x) B)(C (x) D) = AC (x) BD
        let a = pauli_x();
        let b = pauli_y();
        let lhs = kron(&a, &b).mul(&kron(&b, &a)).unwrap();
        let rhs = kron(&a.mul(&b).unwrap(), &b.mul(&a).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn commutator_of_pauli_z_and_x_is_2i_y() {
        let comm = commutator(&pauli_z(), &pauli_x()).unwrap();
        let expected = pauli_y().scale(c(0., 2.));
        assert!(comm.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn commutator_rejects_mismatched_dims() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(commutator(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_trace_of_pure_product_recovers_factors() {
        // |psi> = |0> (x) |+>, rho_A = |0><0|, rho_B = |+><+|.
        let plus = [c(1. / f64::sqrt(2.0), 0.), c(1. / f64::sqrt(2.0), 0.)];
        let zero = [c(1., 0.), c(0., 0.)];
        let psi: Vec<Complex64> = zero
            .iter()
            .flat_map(|&a| plus.iter().map(move |&b| a * b))
            .collect();
        let rho = outer(&psi, &psi);
        let rho_a = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
        let rho_b = partial_trace(&rho, 2, 2, Subsystem::B).unwrap();
        assert!(rho_a.max_abs_diff(&outer(&zero, &zero)) < 1e-14);
        assert!(rho_b.max_abs_diff(&outer(&plus, &plus)) < 1e-14);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| c((i * j) as f64, (i + j) as f64));
        let full = m.trace();
        let ta = partial_trace(&m, 2, 3, Subsystem::A).unwrap().trace();
        let tb = partial_trace(&m, 2, 3, Subsystem::B).unwrap().trace();
        assert!((full - ta).norm() < 1e-12);
        assert!((full - tb).norm() < 1e-12);
    }
}
