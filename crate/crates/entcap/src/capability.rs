//! Entanglement rates and the capability bound.
//!
//! Three independent routes to the same rate are kept deliberately:
//! a commutator formula valid at any time, a Schmidt-basis formula at
//! t = 0, and finite differences of the entropy itself. Their agreement
//! is part of the acceptance surface, not just an implementation detail.
//!
//! Rates are in bits per unit time; `hbar = 1` throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    commutator, eigh, golden_max, partial_trace, propagate, ComplexMatrix, Subsystem,
};
use crate::random::{random_unit_vector, rng_from_seed};
use crate::self_inverse::{evolve_state, ProductHamiltonian, SelfInverseFactor};
use crate::state::{
    concurrence_two_term, entropy, optimal_input, schmidt, BipartiteState, SchmidtDecomposition,
    SCHMIDT_CUTOFF,
};

/// Tolerance on the imaginary part of a rate before we call it a bug.
const IMAG_TOL: f64 = 1e-9;
/// Max allowed leakage of `d rho_A / dt` outside the support of `rho_A`.
const SUPPORT_RESIDUAL_TOL: f64 = 1e-8;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// How a rate sample was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateMethod {
    /// Commutator form `-Tr[rho_dot_A log2 rho_A]`.
    Commutator,
    /// Schmidt-basis closed form at t = 0.
    AnalyticSchmidt,
    /// Central difference of the entanglement entropy.
    FiniteDifference,
}

impl RateMethod {
    pub fn label(&self) -> &'static str {
        match self {
            RateMethod::Commutator => "commutator",
            RateMethod::AnalyticSchmidt => "analytic-schmidt",
            RateMethod::FiniteDifference => "finite-difference",
        }
    }
}

/// One point of a rate sweep.
#[derive(Clone, Copy, Debug)]
pub struct RateSample {
    pub t: f64,
    pub entropy_bits: f64,
    pub gamma: f64,
    pub method: RateMethod,
}

/// A full sweep plus the worst disagreement between the commutator rate
/// and the finite-difference cross-check at interior grid points.
#[derive(Clone, Debug)]
pub struct RateSweep {
    pub samples: Vec<RateSample>,
    pub max_method_gap: f64,
}

/// Output of the capability computations.
#[derive(Clone, Debug)]
pub struct CapabilityResult {
    /// The bound `2 max sqrt(x(1-x)) log2(x/(1-x))`, about 1.9123 bits.
    pub beta: f64,
    /// The maximizing branch weight, about 0.9168.
    pub x0: f64,
    /// Objective evaluations spent in the maximization.
    pub evaluations: usize,
    /// Input realizing the bound, when factors were supplied.
    pub optimal_state: Option<BipartiteState>,
}

/// The two-branch rate profile `f(x) = 2 sqrt(x(1-x)) log2(x/(1-x))`:
/// the entanglement rate at `t = 0` of the weight-`x` optimal input.
pub fn two_branch_rate(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    2.0 * (x * (1.0 - x)).sqrt() * (x / (1.0 - x)).log2()
}

/// Spectral projection onto the support of `rho` together with
/// `log2(rho)` restricted to that support and the complement projector.
struct SupportLog {
    log_rho: ComplexMatrix,
    perp: ComplexMatrix,
    support_dim: usize,
}

fn log2_on_support(rho: &ComplexMatrix) -> Result<SupportLog> {
    let eig = eigh(rho)?;
    let d = rho.rows();
    let mut log_rho = ComplexMatrix::zeros(d, d);
    let mut proj = ComplexMatrix::zeros(d, d);
    let mut support_dim = 0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < SCHMIDT_CUTOFF {
            continue;
        }
        support_dim += 1;
        let v = eig.eigenvectors.column(k);
        let weight = c64(lambda.log2(), 0.0);
        for i in 0..d {
            for j in 0..d {
                let vv = v[i] * v[j].conj();
                log_rho[(i, j)] += weight * vv;
                proj[(i, j)] += vv;
            }
        }
    }
    let perp = ComplexMatrix::identity(d).sub(&proj);
    Ok(SupportLog {
        log_rho,
        perp,
        support_dim,
    })
}

/// Shared tail of every rate computation: given `rho_A` and its time
/// derivative, form `-Tr[rho_dot log2 rho_A]`, guarding against rate
/// contributions from outside the support (which would signal a
/// divergent rate) and against imaginary residue.
fn rate_from_reduced(rho_a: &ComplexMatrix, rho_dot: &ComplexMatrix) -> Result<f64> {
    let support = log2_on_support(rho_a)?;
    let leak = support
        .perp
        .mul(rho_dot)?
        .mul(&support.perp)?
        .max_abs();
    if leak > SUPPORT_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "rho_dot leaks {leak:.3e} outside the rank-{} support of rho_A; \
             the entropy rate is not finite there",
            support.support_dim
        )));
    }
    let gamma = -rho_dot.mul(&support.log_rho)?.trace();
    if gamma.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "entropy rate has imaginary residue {:.3e}",
            gamma.im
        )));
    }
    Ok(gamma.re)
}

fn check_rate_dims(h: &ComplexMatrix, state: &BipartiteState) -> Result<()> {
    let n = state.d_a() * state.d_b();
    if !h.is_square() || h.rows() != n {
        return Err(Error::Dimension(format!(
            "Hamiltonian is {}x{}, state needs {}x{}",
            h.rows(),
            h.cols(),
            n,
            n
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > crate::numerics::HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Entanglement rate at `t = 0` for an arbitrary Hermitian `h` on the
/// state's bipartition: `Gamma = i Tr_A{ Tr_B[H, rho] log2 rho_A }`,
/// evaluated in pure-state form (`rho_dot_A = -i Tr_B(|Hpsi><psi| - h.c.)`)
/// so it stays cheap for large ancilla-extended systems.
pub fn rate_zero_general(h: &ComplexMatrix, state: &BipartiteState) -> Result<f64> {
    check_rate_dims(h, state)?;
    let w = h.matvec(state.amplitudes())?;
    let d_a = state.d_a();
    let d_b = state.d_b();
    let psi = state.amplitude_matrix();
    let w_mat = ComplexMatrix::new(d_a, d_b, w)?;
    // Tr_B |w><psi| = W Psi^dag in amplitude-matrix form.
    let w_psi = w_mat.mul(&psi.dagger())?;
    let rho_dot = w_psi.sub(&w_psi.dagger()).scale(c64(0.0, -1.0));
    let rho_a = psi.mul(&psi.dagger())?;
    rate_from_reduced(&rho_a, &rho_dot)
}

/// Entanglement rate at time `t`: evolves the full state with the
/// eigendecomposition exponential, then applies the commutator formula
/// `rho_dot_A = -i Tr_B [H, rho_AB(t)]` literally on density matrices.
pub fn rate_commutator(h: &ComplexMatrix, state: &BipartiteState, t: f64) -> Result<f64> {
    check_rate_dims(h, state)?;
    let eig = eigh(h)?;
    let u = propagate(&eig, t);
    let psi_t = u.matvec(state.amplitudes())?;
    let rho = crate::numerics::outer(&psi_t, &psi_t);
    let d_a = state.d_a();
    let d_b = state.d_b();
    let comm = commutator(h, &rho)?;
    let rho_dot = partial_trace(&comm, d_a, d_b, Subsystem::A)?.scale(c64(0.0, -1.0));
    let rho_a = partial_trace(&rho, d_a, d_b, Subsystem::A)?;
    rate_from_reduced(&rho_a, &rho_dot)
}

/// Entanglement rate at `t = 0` from the Schmidt form of the input under
/// a product of involutions:
///
/// ```text
/// Gamma = i sum_{m != n} sqrt(lambda_m lambda_n) log2(lambda_m / lambda_n)
///         <psi_m|X_A|psi_n> <phi_m|X_B|phi_n>
/// ```
pub fn rate_zero_schmidt(
    factor_a: &SelfInverseFactor,
    factor_b: &SelfInverseFactor,
    sd: &SchmidtDecomposition,
) -> Result<f64> {
    if sd.vectors_a.rows() != factor_a.dim() || sd.vectors_b.rows() != factor_b.dim() {
        return Err(Error::Dimension(format!(
            "Schmidt vectors live on {}x{}, factors on {}x{}",
            sd.vectors_a.rows(),
            sd.vectors_b.rows(),
            factor_a.dim(),
            factor_b.dim()
        )));
    }
    let rank = sd.rank();
    // Images X_A |psi_n>, X_B |phi_n> once per branch.
    let xa_cols: Vec<Vec<Complex64>> = (0..rank)
        .map(|n| factor_a.matrix().matvec(&sd.vectors_a.column(n)))
        .collect::<Result<_>>()?;
    let xb_cols: Vec<Vec<Complex64>> = (0..rank)
        .map(|n| factor_b.matrix().matvec(&sd.vectors_b.column(n)))
        .collect::<Result<_>>()?;

    let mut gamma = c64(0.0, 0.0);
    for m in 0..rank {
        let psi_m = sd.vectors_a.column(m);
        let phi_m = sd.vectors_b.column(m);
        for n in 0..rank {
            if m == n {
                continue;
            }
            let lm = sd.coefficients[m];
            let ln = sd.coefficients[n];
            let weight = (lm * ln).sqrt() * (lm / ln).log2();
            let a_mn = crate::numerics::inner(&psi_m, &xa_cols[n]);
            let b_mn = crate::numerics::inner(&phi_m, &xb_cols[n]);
            gamma += c64(weight, 0.0) * a_mn * b_mn;
        }
    }
    gamma *= c64(0.0, 1.0);
    if gamma.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "Schmidt-form rate has imaginary residue {:.3e}",
            gamma.im
        )));
    }
    Ok(gamma.re)
}

/// Finite-difference entropy rate `dE/dt` at time `t` under an arbitrary
/// Hermitian generator, using a symmetric difference with step `step`.
pub fn rate_finite_difference(
    h: &ComplexMatrix,
    state: &BipartiteState,
    t: f64,
    step: f64,
) -> Result<f64> {
    check_rate_dims(h, state)?;
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let eig = eigh(h)?;
    let entropy_at = |tau: f64| -> Result<f64> {
        let u = propagate(&eig, tau);
        let amps = u.matvec(state.amplitudes())?;
        Ok(entropy(&BipartiteState::new(state.d_a(), state.d_b(), amps)?))
    };
    Ok((entropy_at(t + step)? - entropy_at(t - step)?) / (2.0 * step))
}

/// The capability bound: maximizes the two-branch rate profile over the
/// branch weight. Returns `beta ~ 1.9123` bits at `x0 ~ 0.9168`.
pub fn capability_bound() -> CapabilityResult {
    let result = golden_max(two_branch_rate, 0.5, 1.0 - 1e-9, 1e-10)
        .expect("fixed bracket and tolerance are valid");
    CapabilityResult {
        beta: result.maximum,
        x0: result.argmax,
        evaluations: result.evaluations,
        optimal_state: None,
    }
}

/// Capability of `X_A (x) X_B`: computes the bound, constructs the
/// optimal two-branch input, and verifies (via the Schmidt-form rate)
/// that the input realizes the bound to 1e-8 before returning it.
pub fn capability_self_inverse(
    factor_a: &SelfInverseFactor,
    factor_b: &SelfInverseFactor,
) -> Result<CapabilityResult> {
    let bound = capability_bound();
    let state = optimal_input(factor_a, factor_b, bound.x0)?;
    let realized = rate_zero_schmidt(factor_a, factor_b, &schmidt(&state))?;
    if (realized - bound.beta).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "optimal input realizes rate {realized:.12} but the bound is {:.12}",
            bound.beta
        )));
    }
    Ok(CapabilityResult {
        beta: bound.beta,
        x0: bound.x0,
        evaluations: bound.evaluations,
        optimal_state: Some(state),
    })
}

/// Sweeps the commutator rate over a time grid, cross-checking interior
/// points against the finite-difference entropy rate (step 1e-5).
///
/// The evolution uses the closed-form propagator of the product
/// Hamiltonian; the rate at time `t` is the commutator formula applied
/// to the evolved density matrix.
pub fn rate_sweep(
    h: &ProductHamiltonian,
    state: &BipartiteState,
    t_grid: &[f64],
) -> Result<RateSweep> {
    if state.d_a() != h.d_a() || state.d_b() != h.d_b() {
        return Err(Error::Dimension(format!(
            "state is {}x{}, Hamiltonian acts on {}x{}",
            state.d_a(),
            state.d_b(),
            h.d_a(),
            h.d_b()
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    let fd_step = 1e-5;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut max_gap: f64 = 0.0;
    for &t in t_grid {
        let evolved = evolve_state(h, state, t, 1, 1)?;
        let gamma = rate_zero_general(h.matrix(), &evolved)?;
        let entropy_bits = entropy(&evolved);
        let fd = {
            let plus = entropy(&evolve_state(h, state, t + fd_step, 1, 1)?);
            let minus = entropy(&evolve_state(h, state, t - fd_step, 1, 1)?);
            (plus - minus) / (2.0 * fd_step)
        };
        max_gap = max_gap.max((gamma - fd).abs());
        samples.push(RateSample {
            t,
            entropy_bits,
            gamma,
            method: RateMethod::Commutator,
        });
    }
    Ok(RateSweep {
        samples,
        max_method_gap: max_gap,
    })
}

/// Entanglement capability of the gate `U(t)` over product inputs:
/// maximizes the two-branch concurrence over a deterministic balanced
/// candidate plus `trials` random product inputs. For nontrivial
/// involutions the result is `|sin 2t|`.
pub fn gate_capability(
    factor_a: &SelfInverseFactor,
    factor_b: &SelfInverseFactor,
    t: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    // Balanced candidate: gamma = (|+> + |->)/sqrt(2) has <gamma|X|gamma> = 0.
    let balanced = |f: &SelfInverseFactor| -> Vec<Complex64> {
        let plus = f.plus_vector(0);
        let minus = f.minus_vector(0);
        plus.iter()
            .zip(&minus)
            .map(|(p, m)| (p + m) * std::f64::consts::FRAC_1_SQRT_2)
            .collect()
    };
    let pair = crate::state::PseudoQubitPair::new(
        factor_a,
        factor_b,
        &balanced(factor_a),
        &balanced(factor_b),
    )?;
    let mut best = pair.concurrence_at(t);

    let mut rng = rng_from_seed(seed);
    for _ in 0..trials {
        let gamma = random_unit_vector(factor_a.dim(), &mut rng);
        let delta = random_unit_vector(factor_b.dim(), &mut rng);
        let oa = crate::numerics::inner(&gamma, &factor_a.matrix().matvec(&gamma)?);
        let ob = crate::numerics::inner(&delta, &factor_b.matrix().matvec(&delta)?);
        best = best.max(concurrence_two_term(oa, ob, t));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::self_inverse::{parity, pauli_z, ProductHamiltonian};
    use crate::state::HalfSpin;

    #[test]
    fn bound_matches_reference_constant() {
        let cap = capability_bound();
        assert!((cap.beta - 1.9123).abs() < 2e-4, "beta = {}", cap.beta);
        assert!((cap.x0 - 0.9168).abs() < 5e-4, "x0 = {}", cap.x0);
    }

    #[test]
    fn x0_satisfies_stationarity() {
        let cap = capability_bound();
        let residual = (cap.x0 / (1.0 - cap.x0)).ln() - 2.0 / (2.0 * cap.x0 - 1.0);
        assert!(residual.abs() < 1e-6, "residual = {residual:.3e}");
    }

    #[test]
    fn optimal_input_realizes_two_branch_rate() {
        let za = pauli_z();
        let zb = pauli_z();
        let x0 = capability_bound().x0;
        for x in [0.6, 0.75, 0.9, x0] {
            let s = optimal_input(&za, &zb, x).unwrap();
            let gamma = rate_zero_schmidt(&za, &zb, &schmidt(&s)).unwrap();
            assert!(
                (gamma - two_branch_rate(x)).abs() < 1e-9,
                "x = {x}: {gamma} vs {}",
                two_branch_rate(x)
            );
        }
    }

    #[test]
    fn three_methods_agree_on_the_optimal_input() {
        let a = parity(HalfSpin::new(2).unwrap());
        let b = pauli_z();
        let h = ProductHamiltonian::new(a.clone(), b.clone());
        let s = optimal_input(&a, &b, 0.7).unwrap();
        let g_schmidt = rate_zero_schmidt(&a, &b, &schmidt(&s)).unwrap();
        let g_general = rate_zero_general(h.matrix(), &s).unwrap();
        let g_comm = rate_commutator(h.matrix(), &s, 0.0).unwrap();
        let g_fd = rate_finite_difference(h.matrix(), &s, 0.0, 1e-5).unwrap();
        assert!((g_schmidt - two_branch_rate(0.7)).abs() < 1e-9);
        assert!((g_general - g_schmidt).abs() < 1e-9);
        assert!((g_comm - g_schmidt).abs() < 1e-9);
        assert!((g_fd - g_schmidt).abs() < 1e-4);
    }

    #[test]
    fn spin_one_parity_rate_at_07_has_known_value() {
        // 2 sqrt(0.21) log2(7/3) = 1.1203...
        let a = parity(HalfSpin::new(2).unwrap());
        let s = optimal_input(&a, &a, 0.7).unwrap();
        let gamma = rate_zero_schmidt(&a, &a, &schmidt(&s)).unwrap();
        let expected = 2.0 * 0.21f64.sqrt() * (7.0f64 / 3.0).log2();
        assert!((gamma - expected).abs() < 1e-12);
        assert!((gamma - 1.1203).abs() < 1e-4);
    }

    #[test]
    fn eigenstate_product_input_has_zero_rate_always() {
        let z = pauli_z();
        let h = ProductHamiltonian::new(z.clone(), z.clone());
        // |0>|0> is a product of X eigenstates: stationary entanglement.
        let s = BipartiteState::new(
            2,
            2,
            vec![c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 0.)],
        )
        .unwrap();
        for t in [0.0, 0.3, 1.0] {
            let gamma = rate_commutator(h.matrix(), &s, t).unwrap();
            assert!(gamma.abs() < 1e-10, "t = {t}: gamma = {gamma}");
        }
    }

    #[test]
    fn capability_is_reached_and_bound_respected() {
        let z = pauli_z();
        let cap = capability_self_inverse(&z, &z).unwrap();
        let state = cap.optimal_state.unwrap();
        let gamma = rate_zero_general(
            ProductHamiltonian::new(z.clone(), z.clone()).matrix(),
            &state,
        )
        .unwrap();
        assert!((gamma - cap.beta).abs() < 1e-8);
    }

    #[test]
    fn schmidt_weight_sum_rule_for_involutions() {
        // sum_{mn} lambda_m |<psi_m|X_A|psi_n>|^2 = 1 for any state and
        // any involution (completeness of the Schmidt basis on support
        // plus X^2 = I)... verified on random states.
        let a = parity(HalfSpin::new(3).unwrap());
        let mut rng = rng_from_seed(42);
        for _ in 0..20 {
            let s = crate::random::random_state(4, 4, &mut rng);
            let sd = schmidt(&s);
            let rank = sd.rank();
            let mut total = 0.0;
            for m in 0..rank {
                let psi_m = sd.vectors_a.column(m);
                for n in 0..rank {
                    let img = a.matrix().matvec(&sd.vectors_a.column(n)).unwrap();
                    let amp = crate::numerics::inner(&psi_m, &img);
                    total += sd.coefficients[m] * amp.norm_sqr();
                }
            }
            assert!((total - 1.0).abs() < 1e-9, "sum rule broke: {total}");
        }
    }

    #[test]
    fn gate_capability_is_sin_2t() {
        let z = pauli_z();
        for t in [0.1, 0.4, std::f64::consts::FRAC_PI_4, 1.3] {
            let c = gate_capability(&z, &z, t, 32, 9).unwrap();
            assert!((c - (2.0 * t).sin().abs()).abs() < 1e-9, "t = {t}: {c}");
        }
    }

    #[test]
    fn ecs_rate_signs_with_orthogonal_branches() {
        // At |eta| = pi/4 and j = 1/2 the two branches are orthogonal, so
        // the state is exactly a two-branch superposition and the `+i`
        // branch phase gives minus the two-branch rate at weight x:
        // Gamma(x = 0.2) = -f(0.2) = +1.6 bits, Gamma(0.8) = -1.6 bits.
        let j = HalfSpin::new(1).unwrap();
        let p = parity(j);
        let h = ProductHamiltonian::new(p.clone(), p.clone());
        let eta = Complex64::new(std::f64::consts::FRAC_PI_4, 0.0);
        for (x, expected) in [(0.2, 1.6), (0.8, -1.6)] {
            let e = crate::state::ecs(j, eta, x).unwrap();
            assert!(e.branch_overlap.norm() < 1e-12);
            let gamma = rate_zero_general(h.matrix(), &e.state).unwrap();
            assert!(
                (gamma - expected).abs() < 1e-9,
                "x = {x}: gamma = {gamma}, expected {expected}"
            );
        }
    }

    #[test]
    fn rate_sweep_methods_agree() {
        let z = pauli_z();
        let h = ProductHamiltonian::new(z.clone(), z.clone());
        let s = optimal_input(&z, &z, 0.8).unwrap();
        let grid: Vec<f64> = (0..21).map(|k| -0.2 + 0.02 * k as f64).collect();
        let sweep = rate_sweep(&h, &s, &grid).unwrap();
        assert_eq!(sweep.samples.len(), 21);
        assert!(sweep.max_method_gap < 1e-5, "gap = {}", sweep.max_method_gap);
    }
}
