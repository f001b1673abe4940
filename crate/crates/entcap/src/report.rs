//! Run records, deterministic number formatting, and CSV curves.
//!
//! Every command produces a `RunRecord`: the command name, its
//! parameters, named scalar outputs (each with a reference value,
//! tolerance, and verdict when one exists), an optional curve file, and
//! a timestamp. Records are identical across runs for the same seed,
//! timestamp aside.

use std::fmt::Write as _;
use std::io::Write as _;

use serde::Serialize;

use crate::error::Result;

/// Formats with 10 significant digits, the precision contract for all
/// human-readable and JSON output. Plain decimal notation is used when
/// the exponent is moderate, scientific notation otherwise.
pub fn fmt_g10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.9e}", x);
    let (_, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent parses");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

/// Rounds to the value that `fmt_g10` prints, so JSON numbers carry the
/// same 10 significant digits as the text output.
pub fn round_g10(x: f64) -> f64 {
    fmt_g10(x).parse().unwrap_or(x)
}

/// A named scalar output with an optional reference check.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarCheck {
    pub reference: f64,
    pub tolerance: f64,
    pub verdict: &'static str,
}

/// Record of one command invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    /// Name/value pairs, values rounded to the printed precision.
    pub outputs: Vec<(String, f64)>,
    /// Counter-style outputs that are exact integers.
    pub counts: Vec<(String, u64)>,
    /// Reference comparisons for the outputs that have one.
    pub checks: Vec<(String, ScalarCheck)>,
    pub curve: Option<String>,
    pub timestamp: String,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        RunRecord {
            command: command.to_string(),
            parameters: Vec::new(),
            outputs: Vec::new(),
            counts: Vec::new(),
            checks: Vec::new(),
            curve: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn count(mut self, name: &str, value: u64) -> Self {
        self.counts.push((name.to_string(), value));
        self
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.parameters.push((name.to_string(), value.to_string()));
        self
    }

    pub fn scalar(mut self, name: &str, value: f64) -> Self {
        self.outputs.push((name.to_string(), round_g10(value)));
        self
    }

    /// Scalar with a reference value and tolerance; records PASS/FAIL.
    pub fn checked(mut self, name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        self.outputs.push((name.to_string(), round_g10(value)));
        self.checks.push((
            name.to_string(),
            ScalarCheck {
                reference,
                tolerance,
                verdict: if (value - reference).abs() <= tolerance {
                    "PASS"
                } else {
                    "FAIL"
                },
            },
        ));
        self
    }

    pub fn with_curve(mut self, path: &str) -> Self {
        self.curve = Some(path.to_string());
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.verdict == "PASS")
    }

    pub fn to_json(&self) -> String {
        let mut outputs: serde_json::Map<String, serde_json::Value> = self
            .outputs
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        for (k, v) in &self.counts {
            outputs.insert(k.clone(), serde_json::json!(v));
        }
        let params: serde_json::Map<String, serde_json::Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        let checks: serde_json::Map<String, serde_json::Value> = self
            .checks
            .iter()
            .map(|(k, c)| {
                (
                    k.clone(),
                    serde_json::json!({
                        "reference": c.reference,
                        "tolerance": c.tolerance,
                        "verdict": c.verdict,
                    }),
                )
            })
            .collect();
        let mut root = serde_json::Map::new();
        root.insert("command".into(), serde_json::json!(self.command));
        root.insert("parameters".into(), serde_json::Value::Object(params));
        root.insert("outputs".into(), serde_json::Value::Object(outputs));
        root.insert("checks".into(), serde_json::Value::Object(checks));
        if let Some(curve) = &self.curve {
            root.insert("curve".into(), serde_json::json!(curve));
        }
        root.insert("timestamp".into(), serde_json::json!(self.timestamp));
        serde_json::to_string_pretty(&serde_json::Value::Object(root))
            .expect("record serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for (k, v) in &self.outputs {
            let check = self.checks.iter().find(|(n, _)| n == k);
            match check {
                Some((_, c)) => {
                    let _ = writeln!(
                        out,
                        "{k} = {}  [ref {} tol {} {}]",
                        fmt_g10(*v),
                        fmt_g10(c.reference),
                        fmt_g10(c.tolerance),
                        c.verdict
                    );
                }
                None => {
                    let _ = writeln!(out, "{k} = {}", fmt_g10(*v));
                }
            }
        }
        for (k, v) in &self.counts {
            let _ = writeln!(out, "{k} = {v}");
        }
        if let Some(curve) = &self.curve {
            let _ = writeln!(out, "curve -> {curve}");
        }
        out
    }
}

/// Writes a CSV table: header row, one row per sample, every float at
/// 10 significant digits, LF endings.
pub fn write_csv(path: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|&x| fmt_g10(x)).collect();
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Reads back a CSV written by `write_csv` (numeric columns only).
pub fn read_csv(path: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap_or("")
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(str::parse::<f64>).collect();
        rows.push(row.map_err(|e| {
            crate::error::Error::InvalidArgument(format!("bad CSV field in {path}: {e}"))
        })?);
    }
    Ok((header, rows))
}
