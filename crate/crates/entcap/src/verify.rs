//! The acceptance surface: ten named end-to-end checks, each returning
//! a verdict and a human-readable detail line. The CLI `verify`
//! subcommand and the acceptance test target both run exactly these.

use std::time::Instant;

use num_complex::Complex64;

use crate::capability::{
    capability_bound, gate_capability, rate_commutator, rate_finite_difference,
    rate_zero_general, rate_zero_schmidt, two_branch_rate,
};
use crate::error::Result;
use crate::numerics::{kron, ComplexMatrix};
use crate::operator_ent::{
    correspondence_check, op_concurrence, op_entanglement, op_rate, op_rate_analytic, op_rate_max,
};
use crate::random::{random_hermitian, random_state, random_unitary, rng_from_seed};
use crate::report::fmt_g10;
use crate::self_inverse::{
    boson_parity, evolution, evolve_state, parity, pauli_z, ProductHamiltonian, SelfInverseFactor,
};
use crate::state::{
    binary_entropy, ecs, optimal_input, schmidt, spin_coherent, BipartiteState, HalfSpin,
};

/// Result of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub seconds: f64,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn catch(body: impl FnOnce() -> Result<(bool, String)>) -> (bool, String) {
    match body() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("error: {e}")),
    }
}

/// The four involution pairs exercised by the saturation and ceiling
/// checks: qubit, integer spin, half-integer spin, and a spin tensored
/// against a Fock-truncated parity.
fn reference_pairs() -> Result<Vec<(String, SelfInverseFactor, SelfInverseFactor)>> {
    Ok(vec![
        ("pauli-z x pauli-z".into(), pauli_z(), pauli_z()),
        (
            "parity(1) x parity(1)".into(),
            parity(HalfSpin::new(2)?),
            parity(HalfSpin::new(2)?),
        ),
        (
            "parity(3/2) x parity(3/2)".into(),
            parity(HalfSpin::new(3)?),
            parity(HalfSpin::new(3)?),
        ),
        (
            "parity(1/2) x boson-parity(16)".into(),
            parity(HalfSpin::new(1)?),
            boson_parity(16)?,
        ),
    ])
}

/// Capability bound lands on 1.9123 within 2e-4, in under 0.1 s.
pub fn beta_bound(_seed: u64) -> (bool, String) {
    let start = Instant::now();
    let cap = capability_bound();
    let secs = start.elapsed().as_secs_f64();
    let ok = (cap.beta - 1.9123).abs() < 2e-4 && secs < 0.1;
    (
        ok,
        format!(
            "beta = {} (ref 1.9123, tol 2e-4), {} evaluations in {} s",
            fmt_g10(cap.beta),
            cap.evaluations,
            fmt_g10(secs)
        ),
    )
}

/// The maximizer satisfies the stationarity condition
/// `ln(x/(1-x)) = 2/(2x-1)` and reproduces beta; it is near 0.9168.
/// The alternative figure 0.9128 is not a target: the rate profile
/// there misses beta by about 6e-4.
pub fn x0_consistency(_seed: u64) -> (bool, String) {
    let cap = capability_bound();
    let residual = ((cap.x0 / (1.0 - cap.x0)).ln() - 2.0 / (2.0 * cap.x0 - 1.0)).abs();
    let f_gap = (two_branch_rate(cap.x0) - cap.beta).abs();
    let ok = residual < 1e-6 && f_gap < 1e-9 && (cap.x0 - 0.9168).abs() < 5e-4;
    (
        ok,
        format!(
            "x0 = {} (target 0.9168, tol 5e-4), stationarity residual = {}, \
             f(x0) - beta = {}; rejected alternative 0.9128 gives f = {}",
            fmt_g10(cap.x0),
            fmt_g10(residual),
            fmt_g10(f_gap),
            fmt_g10(two_branch_rate(0.9128))
        ),
    )
}

/// The optimal two-branch input realizes the bound for all four
/// reference involution pairs, confirmed independently by a
/// finite-difference entropy rate.
pub fn bound_saturation(_seed: u64) -> (bool, String) {
    catch(|| {
        let cap = capability_bound();
        let mut worst_schmidt: f64 = 0.0;
        let mut worst_fd: f64 = 0.0;
        for (name, a, b) in reference_pairs()? {
            let state = optimal_input(&a, &b, cap.x0)?;
            let gamma = rate_zero_schmidt(&a, &b, &schmidt(&state))?;
            worst_schmidt = worst_schmidt.max((gamma - cap.beta).abs());
            let h = ProductHamiltonian::new(a, b);
            let fd = rate_finite_difference(h.matrix(), &state, 0.0, 1e-5)?;
            worst_fd = worst_fd.max((fd - cap.beta).abs());
            if (gamma - cap.beta).abs() >= 1e-8 {
                return Ok((false, format!("{name}: rate {} misses beta", fmt_g10(gamma))));
            }
        }
        let ok = worst_schmidt < 1e-8 && worst_fd < 1e-4;
        Ok((
            ok,
            format!(
                "4 involution pairs: worst |rate - beta| = {} (tol 1e-8), \
                 worst finite-difference gap = {} (tol 1e-4)",
                fmt_g10(worst_schmidt),
                fmt_g10(worst_fd)
            ),
        ))
    })
}

/// No state - including dim-2 ancilla extensions on both sides - beats
/// the bound: 10^4 seeded random states per Hamiltonian, under 60 s.
pub fn bound_ceiling(seed: u64) -> (bool, String) {
    catch(|| {
        let start = Instant::now();
        let beta = capability_bound().beta;
        let mut rng = rng_from_seed(seed ^ 0x9e3779b97f4a7c15);
        let mut max_rate = f64::NEG_INFINITY;
        let mut states = 0usize;
        for (_, a, b) in reference_pairs()? {
            let h = ProductHamiltonian::new(a, b);
            let (d_a, d_b) = (h.d_a(), h.d_b());
            let h_ext = kron(
                &kron(&ComplexMatrix::identity(2), h.matrix()),
                &ComplexMatrix::identity(2),
            );
            for _ in 0..5000 {
                let s = random_state(d_a, d_b, &mut rng);
                max_rate = max_rate.max(rate_zero_general(h.matrix(), &s)?);
                let s_ext = random_state(2 * d_a, d_b * 2, &mut rng);
                max_rate = max_rate.max(rate_zero_general(&h_ext, &s_ext)?);
                states += 2;
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let ok = max_rate <= beta + 1e-6 && secs < 60.0;
        Ok((
            ok,
            format!(
                "{states} random states over 4 Hamiltonians: max rate = {} <= beta + 1e-6 \
                 (beta = {}), {} s",
                fmt_g10(max_rate),
                fmt_g10(beta),
                fmt_g10(secs)
            ),
        ))
    })
}

/// Operator entanglement of the propagator follows the binary-entropy
/// profile for traceless factors with d = 2 and d = 4, and the
/// finite-difference operator rate matches the closed form.
pub fn operator_curve(_seed: u64) -> (bool, String) {
    catch(|| {
        let mut worst_ent: f64 = 0.0;
        let mut worst_rate: f64 = 0.0;
        for twice_j in [1u32, 3] {
            let x = parity(HalfSpin::new(twice_j)?);
            let h = ProductHamiltonian::new(x.clone(), x.clone());
            let (d_a, d_b) = (h.d_a(), h.d_b());
            let lo = 1e-3;
            let hi = std::f64::consts::FRAC_PI_2 - 1e-3;
            for k in 0..100 {
                let t = lo + (hi - lo) * k as f64 / 99.0;
                let e = op_entanglement(&evolution(&h, t), d_a, d_b)?;
                worst_ent = worst_ent.max((e - binary_entropy(t.cos().powi(2))).abs());
                let r = op_rate(&h, t)?;
                worst_rate = worst_rate.max((r - op_rate_analytic(t)).abs());
            }
        }
        let ok = worst_ent < 1e-9 && worst_rate < 1e-5;
        Ok((
            ok,
            format!(
                "d in {{2, 4}}, 100-point grids: worst entropy gap = {} (tol 1e-9), \
                 worst rate gap = {} (tol 1e-5)",
                fmt_g10(worst_ent),
                fmt_g10(worst_rate)
            ),
        ))
    })
}

/// The operator rate maximum reproduces the capability bound, with the
/// maximizing time reported against both the 0.2932 figure (tol 1.5e-3)
/// and the derived arccos(sqrt(x0)) = 0.2926.
pub fn rate_maximum(_seed: u64) -> (bool, String) {
    catch(|| {
        let curve = op_rate_max(&ProductHamiltonian::new(pauli_z(), pauli_z()))?;
        let cap = capability_bound();
        let derived_t = cap.x0.sqrt().acos();
        let ok = (curve.r_max - 1.9123).abs() < 2e-4 && (curve.t_star - 0.2932).abs() < 1.5e-3;
        Ok((
            ok,
            format!(
                "rMax = {} (ref 1.9123, tol 2e-4); tStar = {} vs reference 0.2932 \
                 (gap {}, tol 1.5e-3) and vs derived arccos(sqrt(x0)) = {} (gap {})",
                fmt_g10(curve.r_max),
                fmt_g10(curve.t_star),
                fmt_g10((curve.t_star - 0.2932).abs()),
                fmt_g10(derived_t),
                fmt_g10((curve.t_star - derived_t).abs())
            ),
        ))
    })
}

/// Operator entanglement equals the entropy it imprints on the doubled
/// maximally entangled input, for 100 seeded random unitaries across
/// 2x2, 2x3, and 3x3 splits.
pub fn state_operator_correspondence(seed: u64) -> (bool, String) {
    catch(|| {
        let mut rng = rng_from_seed(seed ^ 0xc2b2ae3d27d4eb4f);
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for (d_a, d_b, n) in [(2usize, 2usize, 34usize), (2, 3, 33), (3, 3, 33)] {
            for _ in 0..n {
                let u = random_unitary(d_a * d_b, &mut rng);
                let (e_op, e_state) = correspondence_check(&u, d_a, d_b)?;
                worst = worst.max((e_op - e_state).abs());
                count += 1;
            }
        }
        let ok = worst < 1e-8;
        Ok((
            ok,
            format!(
                "{count} random unitaries on 2x2/2x3/3x3: worst |E_op - E_state| = {} (tol 1e-8)",
                fmt_g10(worst)
            ),
        ))
    })
}

/// Gate capability of the involution propagator is |sin 2t| over
/// product inputs, unchanged by dim-2 ancilla extensions, and matches
/// the rank-2 operator concurrence for even d.
pub fn gate_capability_check(seed: u64) -> (bool, String) {
    catch(|| {
        let z = pauli_z();
        let z_ext = z.with_ancilla(2)?;
        let mut worst_plain: f64 = 0.0;
        let mut worst_anc: f64 = 0.0;
        let mut worst_conc: f64 = 0.0;
        let h2 = ProductHamiltonian::new(pauli_z(), pauli_z());
        let h4 = ProductHamiltonian::new(
            parity(HalfSpin::new(3)?),
            parity(HalfSpin::new(3)?),
        );
        for k in 0..50 {
            let t = 0.02 + (1.55 - 0.02) * k as f64 / 49.0;
            let target = (2.0 * t).sin().abs();
            let c = gate_capability(&z, &z, t, 16, seed ^ k)?;
            worst_plain = worst_plain.max((c - target).abs());
            let c_anc = gate_capability(&z_ext, &z_ext, t, 8, seed ^ (k << 8))?;
            worst_anc = worst_anc.max((c_anc - target).abs());
            for h in [&h2, &h4] {
                let conc = op_concurrence(&evolution(h, t), h.d_a(), h.d_b())?;
                worst_conc = worst_conc.max((conc - target).abs());
            }
        }
        let ok = worst_plain < 1e-6 && worst_anc < 1e-6 && worst_conc < 1e-9;
        Ok((
            ok,
            format!(
                "50 times: worst |capability - |sin 2t|| = {} plain, {} with ancillas \
                 (tol 1e-6); worst operator-concurrence gap = {} for d in {{2, 4}} (tol 1e-9)",
                fmt_g10(worst_plain),
                fmt_g10(worst_anc),
                fmt_g10(worst_conc)
            ),
        ))
    })
}

/// Backwards evolution of a doubled spin coherent state is exactly the
/// entangled coherent state with branch weight cos^2 t, up to global
/// phase, for j in {1/2, 1, 3/2} and t in {0.2, 0.7}.
pub fn ecs_generation(_seed: u64) -> (bool, String) {
    catch(|| {
        let mut worst_infidelity: f64 = 0.0;
        for twice_j in [1u32, 2, 3] {
            let j = HalfSpin::new(twice_j)?;
            let p = parity(j);
            let h = ProductHamiltonian::new(p.clone(), p.clone());
            let d = j.dim();
            for eta in [c64(0.35, 0.2), c64(std::f64::consts::FRAC_PI_4, 0.0)] {
                let branch = spin_coherent(j, eta);
                let mut amps = vec![c64(0.0, 0.0); d * d];
                for a in 0..d {
                    for b in 0..d {
                        amps[a * d + b] = branch[a] * branch[b];
                    }
                }
                let doubled = BipartiteState::new(d, d, amps)?;
                for t in [0.2, 0.7] {
                    // exp(+iHt) is the t -> -t propagator.
                    let generated = evolve_state(&h, &doubled, -t, 1, 1)?;
                    let target = ecs(j, eta, t.cos().powi(2))?.state;
                    worst_infidelity =
                        worst_infidelity.max(1.0 - generated.fidelity(&target));
                }
            }
        }
        let ok = worst_infidelity < 1e-9;
        Ok((
            ok,
            format!(
                "j in {{1/2, 1, 3/2}}, t in {{0.2, 0.7}}, two branch separations: \
                 worst infidelity = {} (tol 1e-9)",
                fmt_g10(worst_infidelity)
            ),
        ))
    })
}

/// The three rate implementations (pure-state trace formula, density
/// commutator, finite-difference entropy) agree on 100 random
/// Hermitian/state pairs up to 4x4.
pub fn oracle_agreement(seed: u64) -> (bool, String) {
    catch(|| {
        let dims = [
            (2usize, 2usize),
            (2, 3),
            (3, 2),
            (3, 3),
            (2, 4),
            (4, 2),
            (3, 4),
            (4, 3),
            (4, 4),
        ];
        let mut rng = rng_from_seed(seed ^ 0x165667b19e3779f9);
        let mut worst: f64 = 0.0;
        for k in 0..100 {
            let (d_a, d_b) = dims[k % dims.len()];
            let h = random_hermitian(d_a * d_b, &mut rng);
            let s = random_state(d_a, d_b, &mut rng);
            let g1 = rate_zero_general(&h, &s)?;
            let g2 = rate_commutator(&h, &s, 0.0)?;
            let g3 = rate_finite_difference(&h, &s, 0.0, 1e-5)?;
            worst = worst
                .max((g1 - g2).abs())
                .max((g1 - g3).abs())
                .max((g2 - g3).abs());
        }
        let ok = worst < 1e-4;
        Ok((
            ok,
            format!(
                "100 random Hermitian/state pairs up to 4x4: worst mutual gap = {} (tol 1e-4)",
                fmt_g10(worst)
            ),
        ))
    })
}

/// Criterion table in execution order.
pub const CRITERIA: [(&str, fn(u64) -> (bool, String)); 10] = [
    ("beta-bound", beta_bound),
    ("x0-consistency", x0_consistency),
    ("bound-saturation", bound_saturation),
    ("bound-ceiling", bound_ceiling),
    ("operator-curve", operator_curve),
    ("rate-maximum", rate_maximum),
    ("state-operator-correspondence", state_operator_correspondence),
    ("gate-capability", gate_capability_check),
    ("ecs-generation", ecs_generation),
    ("oracle-agreement", oracle_agreement),
];

/// Runs all ten criteria with the given seed.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, details) = check(seed);
            CriterionOutcome {
                name,
                passed,
                details,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

pub fn all_passed(outcomes: &[CriterionOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}
