//! Figure sweeps and verification runs behind the `pcs` binary.
//!
//! Every sweep returns the whole CSV document as a `String`. Rows come out in
//! ascending `|zeta|` order and numbers are printed with 17 significant
//! digits, so output for a fixed spec is byte-identical across runs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use pcs_core::{
    entanglement_gain, gamma_entropy_direct, iterate_superposition, negativity,
    pcs_entropy_closed_form, Error, GammaParams, NegativityConvention, TruncationPolicy,
};

pub mod verify;

/// Exit codes shared by all subcommands.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const INVALID_SPEC: i32 = 2;
    pub const TRUNCATION: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    InvalidSpec(String),
    Numeric(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidSpec(_) => exit::INVALID_SPEC,
            CliError::Numeric(_) => exit::TRUNCATION,
            CliError::Io(_) => exit::CHECK_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::InvalidSpec(msg) => write!(f, "invalid sweep: {msg}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(msg) | Error::InvalidPolicy(msg) => CliError::InvalidSpec(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub points: usize,
    pub m: usize,
    pub theta: f64,
    pub n_steps: usize,
    pub tolerance: f64,
    pub convention: NegativityConvention,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            zeta_min: 0.0,
            zeta_max: 3.0,
            points: 121,
            m: 0,
            theta: std::f64::consts::FRAC_PI_4,
            n_steps: 3,
            tolerance: 1e-16,
            convention: NegativityConvention::OrderedPairs,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.zeta_min >= 0.0) || !self.zeta_max.is_finite() {
            return Err(CliError::InvalidSpec(format!(
                "zeta range [{}, {}] must be finite and non-negative",
                self.zeta_min, self.zeta_max
            )));
        }
        if !(self.zeta_min < self.zeta_max) {
            return Err(CliError::InvalidSpec(format!(
                "zeta-min {} must be below zeta-max {}",
                self.zeta_min, self.zeta_max
            )));
        }
        if self.points < 2 {
            return Err(CliError::InvalidSpec(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(CliError::InvalidSpec(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.n_steps == 0 {
            return Err(CliError::InvalidSpec("steps must be at least 1".into()));
        }
        GammaParams::new(Complex64::new(0.0, 0.0), self.m, self.theta)?;
        Ok(())
    }

    /// Evenly spaced `|zeta|` values, both ends included.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.zeta_max - self.zeta_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.zeta_max
                } else {
                    self.zeta_min + step * i as f64
                }
            })
            .collect()
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::tolerance(self.tolerance)
    }
}

/// Parses an angle in radians: a plain number, or a multiple of `pi` such as
/// `pi/4`, `-pi/4`, `3pi/4` or `2*pi/3`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("angle {text:?} is not finite"))
        };
    }
    let lower = s.to_ascii_lowercase();
    let bad = || format!("cannot parse angle {text:?}");
    let (numer, denom) = match lower.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().map_err(|_| bad())?),
        None => (lower.clone(), 1.0),
    };
    let coeff_text = numer.strip_suffix("pi").ok_or_else(bad)?;
    let coeff_text = coeff_text.strip_suffix('*').unwrap_or(coeff_text);
    let coeff = match coeff_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coeff * std::f64::consts::PI / denom)
}

/// Fixed 17-significant-digit rendering used in every CSV cell.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn real(r: f64) -> Complex64 {
    Complex64::new(r, 0.0)
}

fn render(header: &str, rows: Vec<Vec<f64>>) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_num).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn sweep_rows<F>(spec: &SweepSpec, row: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(f64) -> Result<Vec<f64>, CliError> + Sync + Send,
{
    spec.validate()?;
    spec.grid().into_par_iter().map(row).collect()
}

/// `zeta_abs,negativity` from the closed form under the spec's convention.
pub fn sweep_negativity(spec: &SweepSpec) -> Result<String, CliError> {
    let rows = sweep_rows(spec, |r| Ok(vec![r, negativity(real(r), spec.convention)?]))?;
    Ok(render("zeta_abs,negativity", rows))
}

/// `zeta_abs,entropy_ebits` for the pair coherent state.
pub fn sweep_entropy(spec: &SweepSpec) -> Result<String, CliError> {
    let policy = spec.policy();
    let rows = sweep_rows(spec, |r| {
        Ok(vec![r, pcs_entropy_closed_form(real(r), &policy)?.value()])
    })?;
    Ok(render("zeta_abs,entropy_ebits", rows))
}

/// `zeta_abs,E_S1,E_S<n>,E_full`: the first and `n`-th superposition steps
/// next to the full pair coherent entropy.
pub fn trace_iterative(spec: &SweepSpec) -> Result<String, CliError> {
    let policy = spec.policy();
    let n = spec.n_steps;
    let rows = sweep_rows(spec, |r| {
        let trace = iterate_superposition(real(r), n)?;
        let e1 = trace.steps[0].entropy.value();
        let en = trace.final_entropy().value();
        Ok(vec![
            r,
            e1,
            en,
            pcs_entropy_closed_form(real(r), &policy)?.value(),
        ])
    })?;
    Ok(render(&format!("zeta_abs,E_S1,E_S{n},E_full"), rows))
}

/// `zeta_abs,E_gamma_ebits,delta_E_ebits` for the number-state superposition.
/// Rows with a degenerate norm are written as NaN and reported on `warn`.
pub fn sweep_gamma<W: Write>(spec: &SweepSpec, warn: &mut W) -> Result<String, CliError> {
    let policy = spec.policy();
    let outcomes: Vec<Result<Vec<f64>, (f64, Error)>> = {
        spec.validate()?;
        spec.grid()
            .into_par_iter()
            .map(|r| {
                let params = GammaParams::new(real(r), spec.m, spec.theta).map_err(|e| (r, e))?;
                let e = gamma_entropy_direct(&params, &policy).map_err(|e| (r, e))?;
                let de = entanglement_gain(&params, &policy).map_err(|e| (r, e))?;
                Ok(vec![r, e.value(), de])
            })
            .collect()
    };
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err((r, Error::DegenerateNorm { norm_sq })) => {
                writeln!(
                    warn,
                    "warning: degenerate norm {norm_sq:e} at |zeta| = {r}; row set to NaN"
                )?;
                rows.push(vec![r, f64::NAN, f64::NAN]);
            }
            Err((_, e)) => return Err(e.into()),
        }
    }
    Ok(render("zeta_abs,E_gamma_ebits,delta_E_ebits", rows))
}
