//! `entcap`: entanglement capability of self-inverse product evolutions.
//!
//! Subcommands: `beta`, `capability`, `rate-curve`, `op-rate`, `verify`.
//! Exit codes: 0 success, 2 invalid input, 3 verification failure.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use entcap::capability::{capability_bound, capability_self_inverse, rate_zero_schmidt, rate_sweep, two_branch_rate};
use entcap::error::{Error, Result};
use entcap::numerics::{golden_max, ComplexMatrix};
use entcap::operator_ent::{involution_entanglement, involution_rate, op_rate_analytic};
use entcap::report::{fmt_g10, read_csv, write_csv, RunRecord};
use entcap::self_inverse::{boson_parity, parity, pauli_z, ProductHamiltonian, SelfInverseFactor};
use entcap::state::{ecs, max_entangled, optimal_input, schmidt, BipartiteState, HalfSpin};
use entcap::verify::{all_passed, run_all};

#[derive(Parser)]
#[command(
    name = "entcap",
    version,
    about = "Entanglement rates, capability bounds, and operator entanglement \
             for evolutions generated by products of involutions"
)]
struct Cli {
    /// RNG seed for randomized checks (default: $ENTCAP_SEED, then 2718281828).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the capability bound beta and its maximizing branch weight.
    Beta {
        /// Emit the run record as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Capability of X_A (x) X_B, with the input state that realizes it.
    Capability {
        /// Factor spec: pauli-z | parity:j=<half-int> | boson:D=<int> |
        /// identity | file:<path>.
        #[arg(long = "factor-a")]
        factor_a: String,
        #[arg(long = "factor-b")]
        factor_b: String,
        /// Write the optimal input state as JSON to this path.
        #[arg(long = "state-out")]
        state_out: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Entropy and entanglement rate of an evolving state over a time
    /// grid; writes CSV columns t,entropy_bits,gamma_bits_per_time,method.
    RateCurve {
        /// Hamiltonian spec: ising | parity:j=<half-int> | boson:D=<int>
        /// | file:<path> (a factor used on both sides). Alternative to
        /// the --factor-a/--factor-b pair.
        #[arg(long)]
        hamiltonian: Option<String>,
        #[arg(long = "factor-a")]
        factor_a: Option<String>,
        #[arg(long = "factor-b")]
        factor_b: Option<String>,
        /// State spec: optimal[:x=<w>] | ecs:j=<half-int>,eta=<complex>,x=<w>
        /// | max-entangled | file:<path>.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = -0.8, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, default_value_t = 161)]
        steps: usize,
        /// CSV output path.
        #[arg(long)]
        out: String,
        #[arg(long)]
        json: bool,
    },
    /// Operator entanglement and operator rate of the propagator over a
    /// time grid; writes CSV columns t,op_entanglement_bits,rate_fd,rate_analytic.
    OpRate {
        #[arg(long)]
        hamiltonian: String,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2 - 1e-3, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        out: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance checks; exit 3 if any fails.
    Verify {
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("ENTCAP_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(2_718_281_828)
    });
    match run(cli.command, seed) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("entcap: {e}");
            let code = match e {
                Error::Numerical(_) => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn run(command: Command, seed: u64) -> Result<i32> {
    match command {
        Command::Beta { json } => cmd_beta(json),
        Command::Capability {
            factor_a,
            factor_b,
            state_out,
            json,
        } => cmd_capability(&factor_a, &factor_b, state_out.as_deref(), json),
        Command::RateCurve {
            hamiltonian,
            factor_a,
            factor_b,
            state,
            t0,
            t1,
            steps,
            out,
            json,
        } => cmd_rate_curve(
            hamiltonian.as_deref(),
            factor_a.as_deref(),
            factor_b.as_deref(),
            &state,
            t0,
            t1,
            steps,
            &out,
            json,
        ),
        Command::OpRate {
            hamiltonian,
            t0,
            t1,
            steps,
            out,
            json,
        } => cmd_op_rate(&hamiltonian, t0, t1, steps, &out, json),
        Command::Verify { json } => cmd_verify(seed, json),
    }
}

fn emit(record: &RunRecord, json: bool) {
    if json {
        println!("{}", record.to_json());
    } else {
        print!("{}", record.render_text());
    }
}

/// Parses one factor spec.
fn parse_factor(spec: &str) -> Result<SelfInverseFactor> {
    if spec == "pauli-z" {
        return Ok(pauli_z());
    }
    if spec == "identity" {
        // Built so the involution validator produces the real diagnosis.
        return SelfInverseFactor::new(ComplexMatrix::identity(2));
    }
    if let Some(j) = spec.strip_prefix("parity:j=") {
        return Ok(parity(HalfSpin::parse(j)?));
    }
    if let Some(d) = spec.strip_prefix("boson:D=") {
        let dim: usize = d
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad truncation dimension {d:?}")))?;
        return boson_parity(dim);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        return SelfInverseFactor::from_json(&text);
    }
    Err(Error::InvalidArgument(format!(
        "unrecognized factor spec {spec:?}; expected pauli-z, parity:j=<half-int>, \
         boson:D=<int>, identity, or file:<path>"
    )))
}

/// Parses a Hamiltonian spec into its two factors.
fn parse_hamiltonian(spec: &str) -> Result<(SelfInverseFactor, SelfInverseFactor)> {
    if spec == "ising" {
        return Ok((pauli_z(), pauli_z()));
    }
    if spec.starts_with("parity:j=") || spec.starts_with("boson:D=") || spec.starts_with("file:") {
        let factor = parse_factor(spec)?;
        return Ok((factor.clone(), factor));
    }
    Err(Error::InvalidArgument(format!(
        "unrecognized hamiltonian spec {spec:?}; expected ising, parity:j=<half-int>, \
         boson:D=<int>, or file:<path>"
    )))
}

fn resolve_factors(
    hamiltonian: Option<&str>,
    factor_a: Option<&str>,
    factor_b: Option<&str>,
) -> Result<(SelfInverseFactor, SelfInverseFactor)> {
    match (hamiltonian, factor_a, factor_b) {
        (Some(h), None, None) => parse_hamiltonian(h),
        (None, Some(a), Some(b)) => Ok((parse_factor(a)?, parse_factor(b)?)),
        (None, None, None) => Err(Error::InvalidArgument(
            "provide --hamiltonian or the --factor-a/--factor-b pair".into(),
        )),
        (Some(_), _, _) => Err(Error::InvalidArgument(
            "--hamiltonian conflicts with --factor-a/--factor-b".into(),
        )),
        _ => Err(Error::InvalidArgument(
            "--factor-a and --factor-b must be given together".into(),
        )),
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let invalid = || {
        Error::InvalidArgument(format!(
            "bad complex number {text:?}; expected forms like 0.3, 0.2i, 0.3+0.2i"
        ))
    };
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let body = s.strip_suffix('i').ok_or_else(invalid)?;
    if let Ok(im) = body.parse::<f64>() {
        return Ok(Complex64::new(0.0, im));
    }
    for (idx, ch) in body.char_indices().rev() {
        if (ch == '+' || ch == '-') && idx > 0 {
            let prev = body.as_bytes()[idx - 1];
            if prev == b'e' || prev == b'E' {
                continue;
            }
            let re: f64 = body[..idx].parse().map_err(|_| invalid())?;
            let im_text = &body[idx..];
            let im: f64 = match im_text {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_text.parse().map_err(|_| invalid())?,
            };
            return Ok(Complex64::new(re, im));
        }
    }
    Err(invalid())
}

/// Parses a state spec against the Hamiltonian it will evolve under.
fn parse_state(spec: &str, h: &ProductHamiltonian) -> Result<BipartiteState> {
    if spec == "optimal" {
        return optimal_input(h.factor_a(), h.factor_b(), capability_bound().x0);
    }
    if let Some(x) = spec.strip_prefix("optimal:x=") {
        let x: f64 = x
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad branch weight {x:?}")))?;
        return optimal_input(h.factor_a(), h.factor_b(), x);
    }
    if spec == "max-entangled" {
        if h.d_a() != h.d_b() {
            return Err(Error::Dimension(format!(
                "max-entangled needs equal subsystem dimensions, Hamiltonian has {}x{}",
                h.d_a(),
                h.d_b()
            )));
        }
        return max_entangled(h.d_a());
    }
    if let Some(rest) = spec.strip_prefix("ecs:") {
        let mut j = None;
        let mut eta = None;
        let mut x = None;
        for part in rest.split(',') {
            if let Some(v) = part.strip_prefix("j=") {
                j = Some(HalfSpin::parse(v)?);
            } else if let Some(v) = part.strip_prefix("eta=") {
                eta = Some(parse_complex(v)?);
            } else if let Some(v) = part.strip_prefix("x=") {
                x = Some(v.parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad branch weight {v:?}"))
                })?);
            } else {
                return Err(Error::InvalidArgument(format!(
                    "bad ecs field {part:?}; expected j=, eta=, x="
                )));
            }
        }
        let (j, eta, x) = match (j, eta, x) {
            (Some(j), Some(eta), Some(x)) => (j, eta, x),
            _ => {
                return Err(Error::InvalidArgument(
                    "ecs spec needs all of j=, eta=, x=".into(),
                ))
            }
        };
        let state = ecs(j, eta, x)?.state;
        if state.d_a() != h.d_a() || state.d_b() != h.d_b() {
            return Err(Error::Dimension(format!(
                "ecs state is {}x{} but the Hamiltonian acts on {}x{}",
                state.d_a(),
                state.d_b(),
                h.d_a(),
                h.d_b()
            )));
        }
        return Ok(state);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let state = BipartiteState::from_json(&std::fs::read_to_string(path)?)?;
        if state.d_a() != h.d_a() || state.d_b() != h.d_b() {
            return Err(Error::Dimension(format!(
                "state file is {}x{} but the Hamiltonian acts on {}x{}",
                state.d_a(),
                state.d_b(),
                h.d_a(),
                h.d_b()
            )));
        }
        return Ok(state);
    }
    Err(Error::InvalidArgument(format!(
        "unrecognized state spec {spec:?}; expected optimal[:x=<w>], \
         ecs:j=,eta=,x=, max-entangled, or file:<path>"
    )))
}

fn grid(t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::InvalidArgument(format!(
            "bad grid: t0 = {t0}, t1 = {t1}, steps = {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![t0]);
    }
    Ok((0..steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / (steps - 1) as f64)
        .collect())
}

fn cmd_beta(json: bool) -> Result<i32> {
    let cap = capability_bound();
    let record = RunRecord::new("beta")
        .param(
            "note",
            "x0 from the stationarity condition; the alternative figure 0.9128 \
             does not reproduce beta",
        )
        .checked("beta", cap.beta, 1.9123, 2e-4)
        .checked("x0", cap.x0, 0.9168, 5e-4)
        .scalar("f(0.9128)", two_branch_rate(0.9128))
        .count("evaluations", cap.evaluations as u64);
    emit(&record, json);
    Ok(0)
}

fn cmd_capability(
    factor_a: &str,
    factor_b: &str,
    state_out: Option<&str>,
    json: bool,
) -> Result<i32> {
    let a = parse_factor(factor_a)?;
    let b = parse_factor(factor_b)?;
    let cap = capability_self_inverse(&a, &b)?;
    let state = cap.optimal_state.as_ref().expect("factors were supplied");
    let realized = rate_zero_schmidt(&a, &b, &schmidt(state))?;
    let mut record = RunRecord::new("capability")
        .param("factor-a", factor_a)
        .param("factor-b", factor_b)
        .checked("beta", cap.beta, 1.9123, 2e-4)
        .checked("x0", cap.x0, 0.9168, 5e-4)
        .checked("realized-rate", realized, cap.beta, 1e-8)
        .count("evaluations", cap.evaluations as u64);
    if let Some(path) = state_out {
        std::fs::write(path, state.to_json())?;
        record = record.param("state-out", path);
    }
    emit(&record, json);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rate_curve(
    hamiltonian: Option<&str>,
    factor_a: Option<&str>,
    factor_b: Option<&str>,
    state_spec: &str,
    t0: f64,
    t1: f64,
    steps: usize,
    out: &str,
    json: bool,
) -> Result<i32> {
    let (a, b) = resolve_factors(hamiltonian, factor_a, factor_b)?;
    let h = ProductHamiltonian::new(a, b);
    let state = parse_state(state_spec, &h)?;
    let t_grid = grid(t0, t1, steps)?;
    let sweep = rate_sweep(&h, &state, &t_grid)?;

    let mut text = String::from("t,entropy_bits,gamma_bits_per_time,method\n");
    for s in &sweep.samples {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g10(s.t),
            fmt_g10(s.entropy_bits),
            fmt_g10(s.gamma),
            s.method.label()
        ));
    }
    std::fs::write(out, text)?;

    // Summary statistics recomputed from the file itself, so the CSV and
    // the record can never drift apart.
    let written = std::fs::read_to_string(out)?;
    let mut gamma_max = f64::NEG_INFINITY;
    let mut t_at_gamma_max = f64::NAN;
    let mut entropy_max = f64::NEG_INFINITY;
    for line in written.lines().skip(1) {
        let mut fields = line.split(',');
        let (Some(t), Some(e), Some(g)) = (fields.next(), fields.next(), fields.next()) else {
            continue;
        };
        let t: f64 = t.parse().map_err(|_| Error::Numerical("bad CSV readback".into()))?;
        let e: f64 = e.parse().map_err(|_| Error::Numerical("bad CSV readback".into()))?;
        let g: f64 = g.parse().map_err(|_| Error::Numerical("bad CSV readback".into()))?;
        entropy_max = entropy_max.max(e);
        if g > gamma_max {
            gamma_max = g;
            t_at_gamma_max = t;
        }
    }

    let mut record = RunRecord::new("rate-curve");
    record = match (hamiltonian, factor_a, factor_b) {
        (Some(spec), _, _) => record.param("hamiltonian", spec),
        (None, Some(a), Some(b)) => record.param("factor-a", a).param("factor-b", b),
        _ => record,
    };
    let record = record
        .param("state", state_spec)
        .param("t0", fmt_g10(t0))
        .param("t1", fmt_g10(t1))
        .param("steps", steps)
        .scalar("gamma-max", gamma_max)
        .scalar("t-at-gamma-max", t_at_gamma_max)
        .scalar("entropy-max", entropy_max)
        .scalar("method-crosscheck-gap", sweep.max_method_gap)
        .with_curve(out);
    emit(&record, json);
    Ok(0)
}

fn cmd_op_rate(
    hamiltonian: &str,
    t0: f64,
    t1: f64,
    steps: usize,
    out: &str,
    json: bool,
) -> Result<i32> {
    let (a, b) = parse_hamiltonian(hamiltonian)?;
    let h = ProductHamiltonian::new(a, b);
    let t_grid = grid(t0, t1, steps)?;
    let rows: Vec<Vec<f64>> = t_grid
        .iter()
        .map(|&t| {
            vec![
                t,
                involution_entanglement(&h, t),
                involution_rate(&h, t),
                op_rate_analytic(t),
            ]
        })
        .collect();
    write_csv(out, &["t", "op_entanglement_bits", "rate_fd", "rate_analytic"], &rows)?;

    // Grid-level summary from the file, refined maximum from golden search.
    let (_, back) = read_csv(out)?;
    let mut fd_max = f64::NEG_INFINITY;
    let mut t_at_fd_max = f64::NAN;
    for row in &back {
        if row[2] > fd_max {
            fd_max = row[2];
            t_at_fd_max = row[0];
        }
    }
    let refined = golden_max(
        |t| involution_rate(&h, t),
        1e-4,
        std::f64::consts::FRAC_PI_4,
        1e-9,
    )?;

    let traceless = h.factor_a().matrix().trace().norm() < 1e-12
        && h.factor_b().matrix().trace().norm() < 1e-12;
    let mut record = RunRecord::new("op-rate")
        .param("hamiltonian", hamiltonian)
        .param("t0", fmt_g10(t0))
        .param("t1", fmt_g10(t1))
        .param("steps", steps)
        .scalar("rate-fd-max-grid", fd_max)
        .scalar("t-at-grid-max", t_at_fd_max);
    record = if traceless {
        record
            .checked("r-max", refined.maximum, 1.9123, 2e-4)
            .checked("t-star", refined.argmax, 0.2932, 1.5e-3)
            .scalar("t-star-derived", capability_bound().x0.sqrt().acos())
    } else {
        record
            .scalar("r-max", refined.maximum)
            .scalar("t-star", refined.argmax)
    };
    let record = record.with_curve(out);
    emit(&record, json);
    Ok(0)
}

fn cmd_verify(seed: u64, json: bool) -> Result<i32> {
    let outcomes = run_all(seed);
    if json {
        let rows: Vec<serde_json::Value> = outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "name": o.name,
                    "passed": o.passed,
                    "details": o.details,
                    "seconds": entcap::report::round_g10(o.seconds),
                })
            })
            .collect();
        let all = all_passed(&outcomes);
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "command": "verify",
                "seed": seed,
                "criteria": rows,
                "passed": all,
            }))
            .expect("verify report serializes")
        );
    } else {
        println!("verify (seed {seed})");
        for o in &outcomes {
            println!(
                "{:4} {:30} {:8.3}s  {}",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.seconds,
                o.details
            );
        }
    }
    if all_passed(&outcomes) {
        Ok(0)
    } else {
        Err(Error::Numerical("one or more verification criteria failed".into()))
    }
}
