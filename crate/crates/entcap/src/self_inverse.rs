//! Hermitian involutions (`X^2 = I`) and the product Hamiltonians
//! `H = X_A (x) X_B` they generate. Because `H^2 = I`, the propagator has
//! the closed form `U(t) = cos(t) I - i sin(t) X_A (x) X_B`, which is what
//! makes everything downstream cheap to evaluate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigh, kron, ComplexMatrix};
use crate::state::{BipartiteState, HalfSpin};

const INVOLUTION_TOL: f64 = 1e-10;
const EIGENVALUE_SNAP: f64 = 1e-8;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A validated self-inverse Hermitian factor with its (+1)/(-1)
/// eigenbases, columns ordered as the eigensolver returned them.
#[derive(Clone, Debug)]
pub struct SelfInverseFactor {
    matrix: ComplexMatrix,
    plus_basis: ComplexMatrix,
    minus_basis: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct FactorFile {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl SelfInverseFactor {
    /// Validates Hermiticity, `X^2 = I`, and nontriviality (`X != +/-I`),
    /// then splits the eigenbasis. Eigenvalues must sit within 1e-8 of
    /// +1 or -1 and are snapped exactly.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "involution must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > INVOLUTION_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let square_defect = matrix
            .mul(&matrix)?
            .max_abs_diff(&ComplexMatrix::identity(matrix.rows()));
        if square_defect > INVOLUTION_TOL {
            return Err(Error::NotInvolution(square_defect));
        }

        let eig = eigh(&matrix)?;
        let dim = matrix.rows();
        let mut plus_cols = Vec::new();
        let mut minus_cols = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if (lambda - 1.0).abs() <= EIGENVALUE_SNAP {
                plus_cols.push(eig.eigenvectors.column(k));
            } else if (lambda + 1.0).abs() <= EIGENVALUE_SNAP {
                minus_cols.push(eig.eigenvectors.column(k));
            } else {
                return Err(Error::NotInvolution((lambda.abs() - 1.0).abs()));
            }
        }
        if plus_cols.is_empty() || minus_cols.is_empty() {
            return Err(Error::TrivialInvolution);
        }

        let pack = |cols: &[Vec<Complex64>]| {
            let mut m = ComplexMatrix::zeros(dim, cols.len());
            for (j, col) in cols.iter().enumerate() {
                m.set_column(j, col);
            }
            m
        };
        Ok(Self {
            plus_basis: pack(&plus_cols),
            minus_basis: pack(&minus_cols),
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Dimension of the +1 eigenspace.
    pub fn plus_dim(&self) -> usize {
        self.plus_basis.cols()
    }

    pub fn minus_dim(&self) -> usize {
        self.minus_basis.cols()
    }

    /// `k`-th +1 eigenvector.
    pub fn plus_vector(&self, k: usize) -> Vec<Complex64> {
        self.plus_basis.column(k)
    }

    pub fn minus_vector(&self, k: usize) -> Vec<Complex64> {
        self.minus_basis.column(k)
    }

    /// Extends the factor with an identity ancilla of dimension `d` on
    /// the left: `I_d (x) X`. Still a valid involution.
    pub fn with_ancilla(&self, d: usize) -> Result<Self> {
        Self::new(kron(&ComplexMatrix::identity(d), &self.matrix))
    }

    pub fn to_json(&self) -> String {
        let file = FactorFile {
            dim: self.dim(),
            re: self.matrix.data().iter().map(|z| z.re).collect(),
            im: self.matrix.data().iter().map(|z| z.im).collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FactorFile = serde_json::from_str(text)?;
        if file.re.len() != file.dim * file.dim || file.im.len() != file.re.len() {
            return Err(Error::InvalidArgument(
                "factor file entry count does not match dim^2".into(),
            ));
        }
        let data = file
            .re
            .iter()
            .zip(&file.im)
            .map(|(&re, &im)| c64(re, im))
            .collect();
        Self::new(ComplexMatrix::new(file.dim, file.dim, data)?)
    }
}

/// Pauli Z as a self-inverse factor.
pub fn pauli_z() -> SelfInverseFactor {
    let m = ComplexMatrix::new(
        2,
        2,
        vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)],
    )
    .expect("literal dims");
    SelfInverseFactor::new(m).expect("pauli z is a nontrivial involution")
}

/// Spin parity `(-1)^(J_z + j) = diag(+1, -1, +1, ...)` in the number
/// basis of a spin-`j` mode. For `j = 1/2` this is exactly Pauli Z.
pub fn parity(j: HalfSpin) -> SelfInverseFactor {
    let d = j.dim();
    let diag: Vec<f64> = (0..d).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    SelfInverseFactor::new(ComplexMatrix::from_real_diagonal(&diag))
        .expect("alternating diagonal is a nontrivial involution for d >= 2")
}

/// Boson number parity `(-1)^n` on a Fock space truncated to `dim`
/// levels. The truncation is exact here because parity is diagonal.
pub fn boson_parity(dim: usize) -> Result<SelfInverseFactor> {
    if dim < 2 {
        return Err(Error::Dimension(
            "boson parity needs at least two Fock levels".into(),
        ));
    }
    let diag: Vec<f64> = (0..dim).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    SelfInverseFactor::new(ComplexMatrix::from_real_diagonal(&diag))
}

/// Product Hamiltonian `H = X_A (x) X_B`; itself an involution, so
/// `exp(-iHt)` never needs an eigensolver.
#[derive(Clone, Debug)]
pub struct ProductHamiltonian {
    factor_a: SelfInverseFactor,
    factor_b: SelfInverseFactor,
    matrix: ComplexMatrix,
}

impl ProductHamiltonian {
    pub fn new(factor_a: SelfInverseFactor, factor_b: SelfInverseFactor) -> Self {
        let matrix = kron(factor_a.matrix(), factor_b.matrix());
        Self {
            factor_a,
            factor_b,
            matrix,
        }
    }

    pub fn factor_a(&self) -> &SelfInverseFactor {
        &self.factor_a
    }

    pub fn factor_b(&self) -> &SelfInverseFactor {
        &self.factor_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.factor_a.dim()
    }

    pub fn d_b(&self) -> usize {
        self.factor_b.dim()
    }
}

/// Propagator `U(t) = cos(t) I - i sin(t) X_A (x) X_B`.
pub fn evolution(h: &ProductHamiltonian, t: f64) -> ComplexMatrix {
    let n = h.d_a() * h.d_b();
    let cos = c64(t.cos(), 0.0);
    let minus_i_sin = c64(0.0, -t.sin());
    let mut u = h.matrix.scale(minus_i_sin);
    for k in 0..n {
        u[(k, k)] += cos;
    }
    u
}

/// Applies an operator `V` on `H_A (x) H_B` to a state carrying identity
/// ancillas: the state lives on `H_A' (x) H_A (x) H_B (x) H_B'` with the
/// bipartite cut between `A'A` and `BB'`, flattened in that order, and the
/// operator acts as `I (x) V (x) I`.
pub fn apply_with_ancillas(
    v: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    state: &BipartiteState,
    anc_a: usize,
    anc_b: usize,
) -> Result<BipartiteState> {
    if !v.is_square() || v.rows() != d_a * d_b {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, expected {}",
            v.rows(),
            v.cols(),
            d_a * d_b
        )));
    }
    if state.d_a() != anc_a * d_a || state.d_b() != d_b * anc_b {
        return Err(Error::Dimension(format!(
            "state sides ({}, {}) do not factor as ({} * {}, {} * {})",
            state.d_a(),
            state.d_b(),
            anc_a,
            d_a,
            d_b,
            anc_b
        )));
    }
    let amps = state.amplitudes();
    let mut out = vec![c64(0.0, 0.0); amps.len()];
    // Global index (((ap * d_a + a) * d_b + b) * anc_b + bp); V mixes (a, b).
    for ap in 0..anc_a {
        for bp in 0..anc_b {
            for a_out in 0..d_a {
                for b_out in 0..d_b {
                    let row = a_out * d_b + b_out;
                    let mut acc = c64(0.0, 0.0);
                    for a_in in 0..d_a {
                        for b_in in 0..d_b {
                            let vel = v[(row, a_in * d_b + b_in)];
                            if vel.norm_sqr() == 0.0 {
                                continue;
                            }
                            let idx = ((ap * d_a + a_in) * d_b + b_in) * anc_b + bp;
                            acc += vel * amps[idx];
                        }
                    }
                    let idx_out = ((ap * d_a + a_out) * d_b + b_out) * anc_b + bp;
                    out[idx_out] = acc;
                }
            }
        }
    }
    BipartiteState::new(state.d_a(), state.d_b(), out)
}

/// Evolves a (possibly ancilla-extended) state to time `t` under the
/// product Hamiltonian: `(I (x) U(t) (x) I) |Psi>`.
pub fn evolve_state(
    h: &ProductHamiltonian,
    state: &BipartiteState,
    t: f64,
    anc_a: usize,
    anc_b: usize,
) -> Result<BipartiteState> {
    let u = evolution(h, t);
    apply_with_ancillas(&u, h.d_a(), h.d_b(), state, anc_a, anc_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expm_minus_i;

    #[test]
    fn pauli_z_splits_into_one_dim_eigenspaces() {
        let z = pauli_z();
        assert_eq!(z.plus_dim(), 1);
        assert_eq!(z.minus_dim(), 1);
        // +1 eigenvector |0>, -1 eigenvector |1>.
        assert!((z.plus_vector(0)[0] - c64(1., 0.)).norm() < 1e-14);
        assert!((z.minus_vector(0)[1] - c64(1., 0.)).norm() < 1e-14);
    }

    #[test]
    fn parity_of_spin_half_is_pauli_z() {
        let p = parity(HalfSpin::new(1).unwrap());
        assert!(p.matrix().max_abs_diff(pauli_z().matrix()) < 1e-15);
    }

    #[test]
    fn identity_is_rejected_as_trivial() {
        let err = SelfInverseFactor::new(ComplexMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, Error::TrivialInvolution));
    }

    #[test]
    fn pauli_x_is_accepted() {
        let x = ComplexMatrix::new(
            2,
            2,
            vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)],
        )
        .unwrap();
        let f = SelfInverseFactor::new(x).unwrap();
        assert_eq!(f.plus_dim(), 1);
        assert_eq!(f.minus_dim(), 1);
    }

    #[test]
    fn non_involution_is_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        assert!(matches!(
            SelfInverseFactor::new(m),
            Err(Error::NotInvolution(_))
        ));
    }

    #[test]
    fn evolution_matches_exponential_of_h() {
        let h = ProductHamiltonian::new(pauli_z(), parity(HalfSpin::new(2).unwrap()));
        for t in [0.0, 0.3, 1.2, -0.7] {
            let closed = evolution(&h, t);
            let direct = expm_minus_i(h.matrix(), t).unwrap();
            assert!(closed.max_abs_diff(&direct) < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn evolution_is_periodic_and_composes() {
        let h = ProductHamiltonian::new(pauli_z(), pauli_z());
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!(evolution(&h, two_pi).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let u = evolution(&h, 0.4).mul(&evolution(&h, 0.35)).unwrap();
        assert!(u.max_abs_diff(&evolution(&h, 0.75)) < 1e-12);
        // t = pi/2 gives -i X_A (x) X_B.
        let quarter = evolution(&h, std::f64::consts::FRAC_PI_2);
        assert!(quarter.max_abs_diff(&h.matrix().scale(c64(0., -1.))) < 1e-12);
    }

    #[test]
    fn evolve_state_without_ancillas_is_plain_application() {
        let h = ProductHamiltonian::new(pauli_z(), pauli_z());
        let s = BipartiteState::new(
            2,
            2,
            vec![c64(0.5, 0.1), c64(0.2, -0.3), c64(0.4, 0.0), c64(0.1, 0.6)],
        )
        .unwrap();
        let direct = evolution(&h, 0.9).matvec(s.amplitudes()).unwrap();
        let expected = BipartiteState::new(2, 2, direct).unwrap();
        let evolved = evolve_state(&h, &s, 0.9, 1, 1).unwrap();
        assert!(evolved.fidelity(&expected) > 1.0 - 1e-12);
    }

    #[test]
    fn ancilla_application_matches_explicit_kron() {
        let h = ProductHamiltonian::new(pauli_z(), pauli_z());
        let amps: Vec<Complex64> = (0..16)
            .map(|k| c64((k as f64 * 0.23).sin(), (k as f64 * 0.71).cos()))
            .collect();
        let s = BipartiteState::new(4, 4, amps).unwrap();
        let u = evolution(&h, 0.6);
        let big = kron(
            &ComplexMatrix::identity(2),
            &kron(&u, &ComplexMatrix::identity(2)),
        );
        let expected = BipartiteState::new(4, 4, big.matvec(s.amplitudes()).unwrap()).unwrap();
        let got = apply_with_ancillas(&u, 2, 2, &s, 2, 2).unwrap();
        assert!(got.fidelity(&expected) > 1.0 - 1e-12);
    }

    #[test]
    fn factor_json_round_trip() {
        let f = parity(HalfSpin::new(3).unwrap());
        let back = SelfInverseFactor::from_json(&f.to_json()).unwrap();
        assert!(back.matrix().max_abs_diff(f.matrix()) < 1e-14);
    }
}
