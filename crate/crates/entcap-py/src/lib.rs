//! Python bindings: thin wrappers over the core types plus the
//! module-level operations, with matrices passed as lists of rows of
//! complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use entcap::capability::{
    capability_bound, capability_self_inverse, rate_commutator, rate_sweep, two_branch_rate,
};
use entcap::numerics::ComplexMatrix;
use entcap::operator_ent::{op_concurrence, op_entanglement, op_rate, op_rate_max, op_schmidt};
use entcap::self_inverse::{
    boson_parity, evolution, evolve_state, parity, pauli_z, ProductHamiltonian, SelfInverseFactor,
};
use entcap::state::{ecs, entropy, max_entangled, optimal_input, schmidt, BipartiteState, HalfSpin};

fn py_err(e: entcap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map(|row| row.len()).unwrap_or(0);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("matrix rows have unequal lengths"));
    }
    ComplexMatrix::new(r, c, rows.concat()).map_err(py_err)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// A Hermitian involution (`X^2 = I`, `X != +/-I`): one side of a
/// product Hamiltonian.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Factor {
    inner: SelfInverseFactor,
}

#[pymethods]
impl Factor {
    #[staticmethod]
    fn pauli_z() -> Self {
        Factor { inner: pauli_z() }
    }

    /// Spin parity factor for half-integer spin `j`, e.g. "1/2", "1", "3/2".
    #[staticmethod]
    fn parity(j: &str) -> PyResult<Self> {
        let spin = HalfSpin::parse(j).map_err(py_err)?;
        Ok(Factor {
            inner: parity(spin),
        })
    }

    /// Bosonic parity `(-1)^n` truncated to Fock dimension `dim`.
    #[staticmethod]
    fn boson_parity(dim: usize) -> PyResult<Self> {
        Ok(Factor {
            inner: boson_parity(dim).map_err(py_err)?,
        })
    }

    /// Validates an explicit matrix (list of rows of complex numbers).
    #[staticmethod]
    fn from_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Factor {
            inner: SelfInverseFactor::new(matrix_from_rows(rows)?).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Factor {
            inner: SelfInverseFactor::from_json(text).map_err(py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("Factor(dim={})", self.inner.dim())
    }
}

/// A pure state of a bipartite system, stored as `d_a * d_b` amplitudes
/// in row-major `|a,b>` order and normalized on construction.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct State {
    inner: BipartiteState,
}

#[pymethods]
impl State {
    #[new]
    fn new(d_a: usize, d_b: usize, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(State {
            inner: BipartiteState::new(d_a, d_b, amplitudes).map_err(py_err)?,
        })
    }

    /// The two-branch input with branch weight `x` that realizes the
    /// capability bound at `x = x0`.
    #[staticmethod]
    fn optimal(factor_a: &Factor, factor_b: &Factor, x: f64) -> PyResult<Self> {
        Ok(State {
            inner: optimal_input(&factor_a.inner, &factor_b.inner, x).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn max_entangled(d: usize) -> PyResult<Self> {
        Ok(State {
            inner: max_entangled(d).map_err(py_err)?,
        })
    }

    /// Entangled coherent state `sqrt(x)|eta,eta> + i sqrt(1-x)|-eta,-eta>`
    /// over two spin-`j` modes. Returns `(state, branch_overlap)`.
    #[staticmethod]
    fn ecs(j: &str, eta: Complex64, x: f64) -> PyResult<(Self, Complex64)> {
        let spin = HalfSpin::parse(j).map_err(py_err)?;
        let made = ecs(spin, eta, x).map_err(py_err)?;
        Ok((State { inner: made.state }, made.branch_overlap))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(State {
            inner: BipartiteState::from_json(text).map_err(py_err)?,
        })
    }

    #[getter]
    fn d_a(&self) -> usize {
        self.inner.d_a()
    }

    #[getter]
    fn d_b(&self) -> usize {
        self.inner.d_b()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// Entanglement entropy in bits.
    fn entropy(&self) -> f64 {
        entropy(&self.inner)
    }

    /// Descending Schmidt coefficients (squared singular values).
    fn schmidt_coefficients(&self) -> Vec<f64> {
        schmidt(&self.inner).coefficients
    }

    fn fidelity(&self, other: &State) -> f64 {
        self.inner.fidelity(&other.inner)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "State(d_a={}, d_b={}, entropy={:.6})",
            self.inner.d_a(),
            self.inner.d_b(),
            entropy(&self.inner)
        )
    }
}

/// Product Hamiltonian `H = X_A (x) X_B` of two involutions; `H^2 = I`,
/// so the propagator is `cos(t) I - i sin(t) H`.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Hamiltonian {
    inner: ProductHamiltonian,
}

#[pymethods]
impl Hamiltonian {
    #[new]
    fn new(factor_a: &Factor, factor_b: &Factor) -> Self {
        Hamiltonian {
            inner: ProductHamiltonian::new(factor_a.inner.clone(), factor_b.inner.clone()),
        }
    }

    /// `sigma_z (x) sigma_z` on two qubits.
    #[staticmethod]
    fn ising() -> Self {
        Hamiltonian {
            inner: ProductHamiltonian::new(pauli_z(), pauli_z()),
        }
    }

    #[getter]
    fn d_a(&self) -> usize {
        self.inner.d_a()
    }

    #[getter]
    fn d_b(&self) -> usize {
        self.inner.d_b()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    /// Propagator `exp(-i t H)` as a dense matrix.
    fn evolution(&self, t: f64) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&evolution(&self.inner, t))
    }

    /// Evolves `state` to time `t`; `anc_a`/`anc_b` give ancilla
    /// dimensions when the state extends the Hamiltonian's systems.
    #[pyo3(signature = (state, t, anc_a = 1, anc_b = 1))]
    fn evolve(&self, state: &State, t: f64, anc_a: usize, anc_b: usize) -> PyResult<State> {
        Ok(State {
            inner: evolve_state(&self.inner, &state.inner, t, anc_a, anc_b).map_err(py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Hamiltonian(d_a={}, d_b={})",
            self.inner.d_a(),
            self.inner.d_b()
        )
    }
}

/// Maximum of the two-branch rate profile: `(beta, x0, evaluations)`.
#[pyfunction]
fn bound() -> (f64, f64, u64) {
    let result = capability_bound();
    (result.beta, result.x0, result.evaluations as u64)
}

/// Rate profile `2 sqrt(x(1-x)) log2(x/(1-x))` of a two-branch input.
#[pyfunction(name = "two_branch_rate")]
fn two_branch_rate_py(x: f64) -> f64 {
    two_branch_rate(x)
}

/// Capability of `X_A (x) X_B`: `(beta, x0, optimal_state)`, verified to
/// saturate the bound before returning.
#[pyfunction]
fn capability(factor_a: &Factor, factor_b: &Factor) -> PyResult<(f64, f64, State)> {
    let result = capability_self_inverse(&factor_a.inner, &factor_b.inner).map_err(py_err)?;
    let state = result
        .optimal_state
        .expect("capability always returns its optimal input");
    Ok((result.beta, result.x0, State { inner: state }))
}

/// Entanglement rate `-d/dt Tr[rho_A log2 rho_A]` at time `t`.
#[pyfunction(signature = (hamiltonian, state, t = 0.0))]
fn entanglement_rate(hamiltonian: &Hamiltonian, state: &State, t: f64) -> PyResult<f64> {
    rate_commutator(hamiltonian.inner.matrix(), &state.inner, t).map_err(py_err)
}

/// Sweeps entropy and rate over a time grid. Returns
/// `([(t, entropy_bits, gamma), ...], max_method_gap)`.
#[pyfunction]
fn rate_curve(
    hamiltonian: &Hamiltonian,
    state: &State,
    t_grid: Vec<f64>,
) -> PyResult<(Vec<(f64, f64, f64)>, f64)> {
    let sweep = rate_sweep(&hamiltonian.inner, &state.inner, &t_grid).map_err(py_err)?;
    let rows = sweep
        .samples
        .iter()
        .map(|s| (s.t, s.entropy_bits, s.gamma))
        .collect();
    Ok((rows, sweep.max_method_gap))
}

/// Operator entanglement (in bits) of a unitary on `d_a (x) d_b`.
#[pyfunction(name = "op_entanglement")]
fn op_entanglement_py(rows: Vec<Vec<Complex64>>, d_a: usize, d_b: usize) -> PyResult<f64> {
    op_entanglement(&matrix_from_rows(rows)?, d_a, d_b).map_err(py_err)
}

/// Operator Schmidt coefficients (descending) of a matrix on `d_a (x) d_b`.
#[pyfunction]
fn op_schmidt_coefficients(
    rows: Vec<Vec<Complex64>>,
    d_a: usize,
    d_b: usize,
) -> PyResult<Vec<f64>> {
    Ok(op_schmidt(&matrix_from_rows(rows)?, d_a, d_b)
        .map_err(py_err)?
        .coefficients)
}

/// Concurrence of a Schmidt-rank-2 unitary: `2 sqrt(p1 p2)`.
#[pyfunction(name = "op_concurrence")]
fn op_concurrence_py(rows: Vec<Vec<Complex64>>, d_a: usize, d_b: usize) -> PyResult<f64> {
    op_concurrence(&matrix_from_rows(rows)?, d_a, d_b).map_err(py_err)
}

/// Operator entanglement rate of the propagator at time `t`.
#[pyfunction(name = "op_rate")]
fn op_rate_py(hamiltonian: &Hamiltonian, t: f64) -> PyResult<f64> {
    op_rate(&hamiltonian.inner, t).map_err(py_err)
}

/// Maximum operator rate over `(0, pi/4]`: `(r_max, t_star)`.
#[pyfunction(name = "op_rate_max")]
fn op_rate_max_py(hamiltonian: &Hamiltonian) -> PyResult<(f64, f64)> {
    let curve = op_rate_max(&hamiltonian.inner).map_err(py_err)?;
    Ok((curve.r_max, curve.t_star))
}

/// Entanglement capability of the gate `exp(-i t H)` over product
/// inputs; `|sin 2t|` for nontrivial involutions.
#[pyfunction(signature = (factor_a, factor_b, t, trials = 200, seed = 2_718_281_828))]
fn gate_capability(
    factor_a: &Factor,
    factor_b: &Factor,
    t: f64,
    trials: usize,
    seed: u64,
) -> PyResult<f64> {
    entcap::capability::gate_capability(&factor_a.inner, &factor_b.inner, t, trials, seed)
        .map_err(py_err)
}

#[pymodule]
fn entcap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Factor>()?;
    m.add_class::<State>()?;
    m.add_class::<Hamiltonian>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(two_branch_rate_py, m)?)?;
    m.add_function(wrap_pyfunction!(capability, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_rate, m)?)?;
    m.add_function(wrap_pyfunction!(rate_curve, m)?)?;
    m.add_function(wrap_pyfunction!(op_entanglement_py, m)?)?;
    m.add_function(wrap_pyfunction!(op_schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(op_concurrence_py, m)?)?;
    m.add_function(wrap_pyfunction!(op_rate_py, m)?)?;
    m.add_function(wrap_pyfunction!(op_rate_max_py, m)?)?;
    m.add_function(wrap_pyfunction!(gate_capability, m)?)?;
    Ok(())
}
