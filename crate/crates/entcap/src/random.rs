//! Seeded sampling helpers used by the verification suite and the
//! sampling-based bound checks. Everything routes through `ChaCha8Rng`
//! so results are reproducible from a single `u64` seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{inner, vec_norm, ComplexMatrix};
use crate::state::BipartiteState;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian via Box-Muller.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    // Scale 1/sqrt(2) so re and im are each N(0, 1/2): |z|^2 has mean 1.
    Complex64::new(r * angle.cos(), r * angle.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-like random unit vector: normalized complex Gaussian components.
pub fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Random pure state on `d_a x d_b`.
pub fn random_state(d_a: usize, d_b: usize, rng: &mut ChaCha8Rng) -> BipartiteState {
    BipartiteState::new(d_a, d_b, random_unit_vector(d_a * d_b, rng))
        .expect("unit vector normalizes")
}

/// Random Hermitian matrix with Gaussian entries, `(G + G^dag)/2`.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    g.add(&g.dagger()).scale(Complex64::new(0.5, 0.0))
}

/// Random unitary from modified Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        'outer: for _ in 0..dim {
            let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
            for b in &cols {
                let c = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-8 {
                break 'outer; // freak collision; resample the whole matrix
            }
            cols.push(v.iter().map(|z| z / norm).collect());
        }
        if cols.len() == dim {
            let mut u = ComplexMatrix::zeros(dim, dim);
            for (j, col) in cols.iter().enumerate() {
                u.set_column(j, col);
            }
            return u;
        }
    }
}
