//! Bipartite pure states: Schmidt decomposition, entanglement entropy,
//! and the named input families (capability-optimal inputs, spin coherent
//! superpositions, binomial states, maximally entangled states).
//!
//! All entropies are in bits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{svd, ComplexMatrix};
use crate::self_inverse::SelfInverseFactor;

/// Schmidt coefficients below this are treated as numerical noise and
/// discarded before any logarithm is taken.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Normalized pure state on `H_A (x) H_B`, amplitudes flattened A-major:
/// `amplitudes[a * d_b + b]`.
///
/// Construction normalizes and applies a global-phase convention (first
/// nonzero amplitude real-positive) so serialized states are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    d_a: usize,
    d_b: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dB")]
    d_b: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl BipartiteState {
    pub fn new(d_a: usize, d_b: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::Dimension("state dimensions must be positive".into()));
        }
        if amplitudes.len() != d_a * d_b {
            return Err(Error::Dimension(format!(
                "state on {}x{} needs {} amplitudes, got {}",
                d_a,
                d_b,
                d_a * d_b,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        let inv = 1.0 / norm;
        for z in amplitudes.iter_mut() {
            *z *= inv;
        }
        // Global phase: first nonzero amplitude real-positive.
        if let Some(lead) = amplitudes.iter().find(|z| z.norm() > 1e-12) {
            let correction = (lead / lead.norm()).conj();
            for z in amplitudes.iter_mut() {
                *z *= correction;
            }
        }
        Ok(Self {
            d_a,
            d_b,
            amplitudes,
        })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitudes reshaped into the `d_a x d_b` coefficient matrix.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.d_a, self.d_b, self.amplitudes.clone())
            .expect("length invariant holds")
    }

    /// Reduced density matrix on A: `Psi Psi^dag`.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let psi = self.amplitude_matrix();
        psi.mul(&psi.dagger()).expect("dims agree")
    }

    /// Reduced density matrix on B: `rho_B[b,b'] = sum_a Psi[a,b] conj(Psi[a,b'])`,
    /// i.e. the transpose of `Psi^dag Psi` (its conjugate — daggering a
    /// Hermitian product would be a no-op and leave the wrong branch phases).
    pub fn reduced_b(&self) -> ComplexMatrix {
        let psi = self.amplitude_matrix();
        let gram = psi.dagger().mul(&psi).expect("dims agree");
        ComplexMatrix::from_fn(self.d_b, self.d_b, |b, bp| gram[(bp, b)])
    }

    /// The same state with the two sides exchanged.
    pub fn swapped(&self) -> Self {
        let mut amplitudes = vec![c64(0.0, 0.0); self.amplitudes.len()];
        for a in 0..self.d_a {
            for b in 0..self.d_b {
                amplitudes[b * self.d_a + a] = self.amplitudes[a * self.d_b + b];
            }
        }
        Self::new(self.d_b, self.d_a, amplitudes).expect("permutation preserves norm")
    }

    /// Fidelity `|<self|other>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        overlap(&self.amplitudes, &other.amplitudes).norm()
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            d_a: self.d_a,
            d_b: self.d_b,
            re: self.amplitudes.iter().map(|z| z.re).collect(),
            im: self.amplitudes.iter().map(|z| z.im).collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        if file.re.len() != file.im.len() {
            return Err(Error::InvalidArgument(format!(
                "state file has {} real and {} imaginary entries",
                file.re.len(),
                file.im.len()
            )));
        }
        let amps = file
            .re
            .iter()
            .zip(&file.im)
            .map(|(&re, &im)| c64(re, im))
            .collect();
        Self::new(file.d_a, file.d_b, amps)
    }
}

fn overlap(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Schmidt form of a bipartite pure state: coefficients are the squared
/// singular values of the amplitude matrix (descending, summing to 1),
/// and column `n` of `vectors_a`/`vectors_b` holds the paired local
/// vectors, with phases chosen so the reconstruction reproduces the state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub vectors_a: ComplexMatrix,
    pub vectors_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds `sum_n sqrt(lambda_n) |psi_n> (x) |phi_n>`.
    pub fn reconstruct(&self) -> Result<BipartiteState> {
        let d_a = self.vectors_a.rows();
        let d_b = self.vectors_b.rows();
        let mut amps = vec![c64(0.0, 0.0); d_a * d_b];
        for (n, &lambda) in self.coefficients.iter().enumerate() {
            let w = lambda.sqrt();
            for a in 0..d_a {
                let left = self.vectors_a[(a, n)] * w;
                for b in 0..d_b {
                    amps[a * d_b + b] += left * self.vectors_b[(b, n)];
                }
            }
        }
        BipartiteState::new(d_a, d_b, amps)
    }
}

/// Schmidt decomposition via SVD of the amplitude matrix. Coefficients
/// below [`SCHMIDT_CUTOFF`] are dropped.
pub fn schmidt(state: &BipartiteState) -> SchmidtDecomposition {
    let decomposition = svd(&state.amplitude_matrix()).expect("amplitude matrix is well-formed");
    let mut coefficients = Vec::new();
    for &s in &decomposition.singular_values {
        let lambda = s * s;
        if lambda >= SCHMIDT_CUTOFF {
            coefficients.push(lambda);
        }
    }
    let rank = coefficients.len();
    let d_a = state.d_a;
    let d_b = state.d_b;
    let mut vectors_a = ComplexMatrix::zeros(d_a, rank);
    let mut vectors_b = ComplexMatrix::zeros(d_b, rank);
    for n in 0..rank {
        for a in 0..d_a {
            vectors_a[(a, n)] = decomposition.u[(a, n)];
        }
        // |phi_n> amplitudes are the n-th row of Vh (not conjugated): the
        // reconstruction sum then matches Psi = U diag(s) Vh entrywise.
        for b in 0..d_b {
            vectors_b[(b, n)] = decomposition.vh[(n, b)];
        }
    }
    SchmidtDecomposition {
        coefficients,
        vectors_a,
        vectors_b,
    }
}

/// Entanglement entropy in bits, `-sum lambda log2 lambda`.
pub fn entropy(state: &BipartiteState) -> f64 {
    schmidt(state)
        .coefficients
        .iter()
        .map(|&l| -l * l.log2())
        .sum()
}

/// Binary entropy `-p log2 p - (1-p) log2 (1-p)`, the entanglement of any
/// two-branch superposition with weights `(p, 1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Concurrence of the two-branch (pseudo-qubit) evolution state:
/// `|sin 2t| sqrt((1 - |<gamma|gamma_bar>|^2)(1 - |<delta|delta_bar>|^2))`.
pub fn concurrence_two_term(overlap_a: Complex64, overlap_b: Complex64, t: f64) -> f64 {
    let ga = (1.0 - overlap_a.norm_sqr()).max(0.0);
    let gb = (1.0 - overlap_b.norm_sqr()).max(0.0);
    ((2.0 * t).sin()).abs() * (ga * gb).sqrt()
}

/// A product input `gamma (x) delta` together with its involution images
/// `gamma_bar = X_A gamma`, `delta_bar = X_B delta`: under the product
/// evolution the state never leaves the two-branch span, so a single
/// overlap per side fixes its concurrence for all times.
#[derive(Clone, Debug)]
pub struct PseudoQubitPair {
    pub gamma: Vec<Complex64>,
    pub gamma_bar: Vec<Complex64>,
    pub delta: Vec<Complex64>,
    pub delta_bar: Vec<Complex64>,
    pub overlap_a: Complex64,
    pub overlap_b: Complex64,
}

impl PseudoQubitPair {
    pub fn new(
        factor_a: &SelfInverseFactor,
        factor_b: &SelfInverseFactor,
        gamma: &[Complex64],
        delta: &[Complex64],
    ) -> Result<Self> {
        let gamma = normalized(gamma)?;
        let delta = normalized(delta)?;
        let gamma_bar = factor_a.matrix().matvec(&gamma)?;
        let delta_bar = factor_b.matrix().matvec(&delta)?;
        let overlap_a = overlap(&gamma, &gamma_bar);
        let overlap_b = overlap(&delta, &delta_bar);
        Ok(Self {
            gamma,
            gamma_bar,
            delta,
            delta_bar,
            overlap_a,
            overlap_b,
        })
    }

    /// Concurrence of the evolved state at time `t`.
    pub fn concurrence_at(&self, t: f64) -> f64 {
        concurrence_two_term(self.overlap_a, self.overlap_b, t)
    }
}

fn normalized(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-14 {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    Ok(v.iter().map(|z| z / norm).collect())
}

/// The weight-`x` two-branch input that realizes entanglement rate
/// `2 sqrt(x(1-x)) log2(x/(1-x))` at `t = 0` under `X_A (x) X_B`:
///
/// ```text
/// (sqrt(x)/2) (|+>_A + |->_A)(|+>_B + |->_B)
///   - (i sqrt(1-x)/2) (|+>_A - |->_A)(|+>_B - |->_B)
/// ```
///
/// with `|+->` one chosen eigenvector per involution eigenvalue (the
/// lowest-index one from the ordered eigendecomposition). The branch
/// phase `-i` makes the rate positive for `x > 1/2`; the conjugate state
/// realizes the same magnitude with opposite sign.
pub fn optimal_input(
    factor_a: &SelfInverseFactor,
    factor_b: &SelfInverseFactor,
    x: f64,
) -> Result<BipartiteState> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "branch weight must satisfy 0 < x < 1, got {x}"
        )));
    }
    let plus_a = factor_a.plus_vector(0);
    let minus_a = factor_a.minus_vector(0);
    let plus_b = factor_b.plus_vector(0);
    let minus_b = factor_b.minus_vector(0);

    let d_a = factor_a.dim();
    let d_b = factor_b.dim();
    let ca = c64(x.sqrt() / 2.0, 0.0);
    let cb = c64(0.0, -(1.0 - x).sqrt() / 2.0);
    let mut amps = vec![c64(0.0, 0.0); d_a * d_b];
    for a in 0..d_a {
        let sum_a = plus_a[a] + minus_a[a];
        let diff_a = plus_a[a] - minus_a[a];
        for b in 0..d_b {
            let sum_b = plus_b[b] + minus_b[b];
            let diff_b = plus_b[b] - minus_b[b];
            amps[a * d_b + b] = ca * sum_a * sum_b + cb * diff_a * diff_b;
        }
    }
    BipartiteState::new(d_a, d_b, amps)
}

/// Half-integer spin quantum number, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSpin {
    twice_j: u32,
}

impl HalfSpin {
    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidArgument(
                "spin must be at least 1/2 (2j >= 1)".into(),
            ));
        }
        Ok(Self { twice_j })
    }

    /// Parses `"1/2"`, `"3/2"`, `"1"`, or `"0.5"` style spin labels.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let value = if let Some((num, den)) = text.split_once('/') {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad spin '{text}'")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad spin '{text}'")))?;
            num / den
        } else {
            text.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad spin '{text}'")))?
        };
        Self::from_value(value)
    }

    pub fn from_value(j: f64) -> Result<Self> {
        let doubled = 2.0 * j;
        let rounded = doubled.round();
        if (doubled - rounded).abs() > 1e-9 || rounded < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "spin must be a positive half-integer, got {j}"
            )));
        }
        Self::new(rounded as u32)
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn value(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// Hilbert space dimension `2j + 1`.
    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }
}

/// Raising operator `J_+` in the number basis `|n> = |j, m = n - j>`,
/// `n = 0..2j`: `J_+|n> = sqrt((2j - n)(n + 1)) |n+1>`.
pub fn j_plus(j: HalfSpin) -> ComplexMatrix {
    let d = j.dim();
    let two_j = j.twice_j as f64;
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 0..d - 1 {
        let amp = ((two_j - n as f64) * (n as f64 + 1.0)).sqrt();
        m[(n + 1, n)] = c64(amp, 0.0);
    }
    m
}

/// Spin coherent state `exp(eta J_+ - eta* J_-) |0>_j` as a vector in the
/// `2j + 1`-dimensional number basis, via the exponential of the
/// anti-Hermitian generator.
pub fn spin_coherent(j: HalfSpin, eta: Complex64) -> Vec<Complex64> {
    let jp = j_plus(j);
    let jm = jp.dagger();
    let generator = jp.scale(eta).sub(&jm.scale(eta.conj()));
    // exp(G) = exp(-i (iG)) with iG Hermitian.
    let i_g = generator.scale(c64(0.0, 1.0));
    let u = crate::numerics::expm_minus_i(&i_g, 1.0).expect("iG is Hermitian by construction");
    let mut ground = vec![c64(0.0, 0.0); j.dim()];
    ground[0] = c64(1.0, 0.0);
    u.matvec(&ground).expect("dims agree")
}

/// Overlap `<eta|-eta>` of opposite spin coherent states; its modulus is
/// `|cos(2|eta|)|^(2j)`.
pub fn spin_coherent_overlap(j: HalfSpin, eta: Complex64) -> Complex64 {
    let plus = spin_coherent(j, eta);
    let minus = spin_coherent(j, -eta);
    overlap(&plus, &minus)
}

/// Entangled coherent state over two spin-`j` modes, plus the branch
/// overlap that quantifies how far the two branches are from orthogonal.
#[derive(Clone, Debug)]
pub struct EntangledCoherentState {
    pub state: BipartiteState,
    pub branch_overlap: Complex64,
}

/// Normalized `sqrt(x) |eta,eta> + i sqrt(1-x) |-eta,-eta>`.
///
/// Degenerate branches (`|eta>` parallel to `|-eta>`, i.e. `|eta|` a
/// multiple of pi/2) are rejected. Note the `+i` branch phase: this is
/// the state the evolution `exp(+i t H)` generates from `|eta,eta>`, and
/// its entropy rate under `exp(-i t H)` is the *negative* of the
/// two-branch rate formula at weight `x` (equivalently, the positive rate
/// at weight `1 - x`).
pub fn ecs(j: HalfSpin, eta: Complex64, x: f64) -> Result<EntangledCoherentState> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "branch weight must satisfy 0 < x < 1, got {x}"
        )));
    }
    let plus = spin_coherent(j, eta);
    let minus = spin_coherent(j, -eta);
    let branch_overlap = overlap(&plus, &minus);
    if 1.0 - branch_overlap.norm() < 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "branches |eta> and |-eta> are parallel at eta = {eta}; the superposition is degenerate"
        )));
    }
    let d = j.dim();
    let ca = c64(x.sqrt(), 0.0);
    let cb = c64(0.0, (1.0 - x).sqrt());
    let mut amps = vec![c64(0.0, 0.0); d * d];
    for a in 0..d {
        for b in 0..d {
            amps[a * d + b] = ca * plus[a] * plus[b] + cb * minus[a] * minus[b];
        }
    }
    Ok(EntangledCoherentState {
        state: BipartiteState::new(d, d, amps)?,
        branch_overlap,
    })
}

/// Binomial state `sum_n sqrt(C(M,n) p^n (1-p)^(M-n)) |n>` in a Fock
/// space truncated at dimension `dim` (requires `M < dim`).
pub fn binomial_state(m: usize, p: f64, dim: usize) -> Result<Vec<Complex64>> {
    if m >= dim {
        return Err(Error::InvalidArgument(format!(
            "binomial cutoff M = {m} does not fit in a dimension-{dim} truncation"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "binomial parameter must lie in [0, 1], got {p}"
        )));
    }
    let mut amps = vec![c64(0.0, 0.0); dim];
    // ln C(M,n) via ln Gamma to stay finite for large M.
    for n in 0..=m {
        let prob = if p == 0.0 {
            if n == 0 {
                1.0
            } else {
                0.0
            }
        } else if p == 1.0 {
            if n == m {
                1.0
            } else {
                0.0
            }
        } else {
            let ln_choose = ln_factorial(m) - ln_factorial(n) - ln_factorial(m - n);
            (ln_choose + n as f64 * p.ln() + (m - n) as f64 * (1.0 - p).ln()).exp()
        };
        amps[n] = c64(prob.sqrt(), 0.0);
    }
    Ok(amps)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Maximally entangled state `sum_n |n,n> / sqrt(d)`.
pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    if d == 0 {
        return Err(Error::Dimension("dimension must be positive".into()));
    }
    let mut amps = vec![c64(0.0, 0.0); d * d];
    let w = 1.0 / (d as f64).sqrt();
    for n in 0..d {
        amps[n * d + n] = c64(w, 0.0);
    }
    BipartiteState::new(d, d, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::inner;

    #[test]
    fn schmidt_of_fixed_three_term_state() {
        // (|00> + |01> + |11>)/sqrt(3): rho_A = [[2,1],[1,1]]/3 with
        // eigenvalues (3 +- sqrt(5))/6.
        let s = BipartiteState::new(
            2,
            2,
            vec![c64(1., 0.), c64(1., 0.), c64(0., 0.), c64(1., 0.)],
        )
        .unwrap();
        let sd = schmidt(&s);
        let l1 = (3.0 + 5f64.sqrt()) / 6.0;
        let l2 = (3.0 - 5f64.sqrt()) / 6.0;
        assert_eq!(sd.rank(), 2);
        assert!((sd.coefficients[0] - l1).abs() < 1e-12);
        assert!((sd.coefficients[1] - l2).abs() < 1e-12);
        let e = entropy(&s);
        let expected = -(l1 * l1.log2() + l2 * l2.log2());
        assert!((e - expected).abs() < 1e-12);
        assert!((e - 0.550078).abs() < 1e-4);
    }

    #[test]
    fn reduced_matrices_have_the_index_convention_not_its_conjugate() {
        // (|00> + i|01> + |11>)/sqrt(3): rho_B off-diagonal is -i/3 on the
        // upper side. A conjugated (transposed) result flips that sign,
        // which eigenvalue-only checks cannot see.
        let s = BipartiteState::new(
            2,
            2,
            vec![c64(1., 0.), c64(0., 1.), c64(0., 0.), c64(1., 0.)],
        )
        .unwrap();
        let rho_b = s.reduced_b();
        assert!((rho_b[(0, 0)] - c64(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((rho_b[(0, 1)] - c64(0.0, -1.0 / 3.0)).norm() < 1e-12);
        assert!((rho_b[(1, 0)] - c64(0.0, 1.0 / 3.0)).norm() < 1e-12);
        assert!((rho_b[(1, 1)] - c64(2.0 / 3.0, 0.0)).norm() < 1e-12);
        let rho_a = s.reduced_a();
        assert!((rho_a[(0, 1)] - c64(0.0, 1.0 / 3.0)).norm() < 1e-12);
        assert!((rho_a[(0, 0)] - c64(2.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn schmidt_reconstruction_round_trip() {
        let s = BipartiteState::new(
            3,
            2,
            vec![
                c64(0.3, 0.1),
                c64(-0.2, 0.4),
                c64(0.0, 0.9),
                c64(0.5, -0.3),
                c64(0.1, 0.1),
                c64(-0.6, 0.2),
            ],
        )
        .unwrap();
        let rebuilt = schmidt(&s).reconstruct().unwrap();
        assert!(s.fidelity(&rebuilt) > 1.0 - 1e-11);
    }

    #[test]
    fn product_state_has_zero_entropy_and_rank_one() {
        let s = BipartiteState::new(2, 2, vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 0.)])
            .unwrap();
        assert_eq!(schmidt(&s).rank(), 1);
        assert!(entropy(&s).abs() < 1e-12);
    }

    #[test]
    fn bell_state_has_one_bit() {
        let s = max_entangled(2).unwrap();
        assert!((entropy(&s) - 1.0).abs() < 1e-12);
        let swapped = s.swapped();
        assert!((entropy(&swapped) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_entangled_entropy_is_log2_d() {
        for d in 2..=5 {
            let s = max_entangled(d).unwrap();
            assert!((entropy(&s) - (d as f64).log2()).abs() < 1e-10);
        }
    }

    #[test]
    fn state_json_round_trip() {
        let s = BipartiteState::new(
            2,
            3,
            vec![
                c64(0.3, 0.1),
                c64(-0.2, 0.4),
                c64(0.0, 0.9),
                c64(0.5, -0.3),
                c64(0.1, 0.1),
                c64(-0.6, 0.2),
            ],
        )
        .unwrap();
        let back = BipartiteState::from_json(&s.to_json()).unwrap();
        assert_eq!(back.d_a(), 2);
        assert_eq!(back.d_b(), 3);
        assert!(s.fidelity(&back) > 1.0 - 1e-12);
    }

    #[test]
    fn spin_half_coherent_state_matches_closed_form() {
        // For j = 1/2: exp(eta J+ - eta* J-)|0> = cos|eta| |0> +
        // e^{i arg eta} sin|eta| |1>.
        let j = HalfSpin::new(1).unwrap();
        let eta = c64(0.3, 0.4);
        let v = spin_coherent(j, eta);
        let r = eta.norm();
        let phase = eta / r;
        assert!((v[0] - c64(r.cos(), 0.0)).norm() < 1e-12);
        assert!((v[1] - phase * r.sin()).norm() < 1e-12);
    }

    #[test]
    fn coherent_overlap_matches_cos_power() {
        for twice_j in [1u32, 2, 3] {
            let j = HalfSpin::new(twice_j).unwrap();
            for r in [0.2, 0.7, std::f64::consts::FRAC_PI_4] {
                let eta = c64(r, 0.0);
                let o = spin_coherent_overlap(j, eta).norm();
                let expected = (2.0 * r).cos().abs().powi(twice_j as i32);
                assert!(
                    (o - expected).abs() < 1e-10,
                    "2j={twice_j} r={r}: {o} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn ecs_rejects_parallel_branches() {
        let j = HalfSpin::new(2).unwrap();
        // |eta| = pi/2 makes |-eta> = |eta> up to phase.
        let eta = c64(std::f64::consts::FRAC_PI_2, 0.0);
        assert!(ecs(j, eta, 0.5).is_err());
    }

    #[test]
    fn ecs_with_orthogonal_branches_has_binary_entropy() {
        let j = HalfSpin::new(2).unwrap();
        let eta = c64(std::f64::consts::FRAC_PI_4, 0.0);
        let x = 0.8;
        let e = ecs(j, eta, x).unwrap();
        assert!(e.branch_overlap.norm() < 1e-12);
        let expected = -(x * x.log2() + (1.0 - x) * (1.0 - x).log2());
        assert!((entropy(&e.state) - expected).abs() < 1e-10);
    }

    #[test]
    fn binomial_state_is_normalized_and_respects_cutoff() {
        let v = binomial_state(6, 0.37, 32).unwrap();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(v[7..].iter().all(|z| z.norm() == 0.0));
        assert!(binomial_state(32, 0.5, 32).is_err());
    }

    #[test]
    fn entropy_is_invariant_under_side_swap() {
        let s = BipartiteState::new(
            2,
            3,
            vec![
                c64(0.2, 0.5),
                c64(-0.1, 0.3),
                c64(0.7, 0.0),
                c64(0.0, -0.2),
                c64(0.4, 0.1),
                c64(0.1, 0.6),
            ],
        )
        .unwrap();
        assert!((entropy(&s) - entropy(&s.swapped())).abs() < 1e-10);
    }

    #[test]
    fn schmidt_vectors_are_orthonormal() {
        let s = BipartiteState::new(
            3,
            3,
            (0..9)
                .map(|k| c64((k as f64 * 0.37).sin(), (k as f64 * 0.91).cos()))
                .collect(),
        )
        .unwrap();
        let sd = schmidt(&s);
        for m in 0..sd.rank() {
            for n in 0..sd.rank() {
                let da = inner(&sd.vectors_a.column(m), &sd.vectors_a.column(n));
                let db = inner(&sd.vectors_b.column(m), &sd.vectors_b.column(n));
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((da - c64(expect, 0.0)).norm() < 1e-9);
                assert!((db - c64(expect, 0.0)).norm() < 1e-9);
            }
        }
    }
}
