//! Invariant checks over a deterministic `|zeta|` grid.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use pcs_core::oracle::{brute_entropy, brute_pt_blocks, lift};
use pcs_core::{
    converged_entropy, entanglement_entropy, esn_closed_form, gain_decomposition,
    gamma_entropy_closed_form, gamma_entropy_direct, gamma_spectrum, iterate_superposition,
    negativity_closed_form, negativity_from_spectrum, number_state_superposition,
    pair_coherent_state, pcs_entropy_closed_form, pt_spectrum, truncated_partial_state, EBits,
    Error, GammaParams, NegativityConvention,
};

use crate::{CliError, SweepSpec};

/// Alternative evaluation of `E(S_n)` checked against the recursion.
pub type EsnRoute = fn(Complex64, usize) -> EBits;

const RECURSION_STEPS: usize = 30;
const ORACLE_MAX_CUTOFF: usize = 64;
const PT_CUTOFF: usize = 40;
const CONVERGENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Normalization,
    GammaSpectrum,
    GammaClosedForm,
    RecursionIdentity,
    GainBound,
    Convergence,
    OracleEntropy,
    OraclePtSpectrum,
    NegativityLimit,
}

const KINDS: [(Kind, &str, f64); 9] = [
    (Kind::Normalization, "normalization", 1e-12),
    (Kind::GammaSpectrum, "gamma-spectrum", 1e-12),
    (Kind::GammaClosedForm, "gamma-closed-form", 1e-10),
    (Kind::RecursionIdentity, "recursion-identity", 1e-12),
    (Kind::GainBound, "gain-bound", 1.0),
    (Kind::Convergence, "convergence", 1e-10),
    (Kind::OracleEntropy, "oracle-entropy", 1e-10),
    (Kind::OraclePtSpectrum, "oracle-pt-spectrum", 1e-12),
    (Kind::NegativityLimit, "negativity-limit", 1e-10),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    /// Where the worst value was seen.
    pub at: String,
    pub samples: usize,
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(
                out,
                "{status} {} worst={:.3e} tol={:.0e} samples={}",
                c.name, c.worst, c.tolerance, c.samples
            )
            .unwrap();
            if !c.at.is_empty() {
                write!(out, " at {}", c.at).unwrap();
            }
            if let Some(e) = &c.error {
                write!(out, " error: {e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

struct Sample {
    kind: Kind,
    value: f64,
    at: String,
}

fn grid(spec: &SweepSpec) -> Result<Vec<f64>, CliError> {
    if spec.zeta_min == spec.zeta_max && spec.zeta_min >= 0.0 && spec.zeta_min.is_finite() {
        let probe = SweepSpec {
            zeta_max: spec.zeta_min + 1.0,
            points: 2,
            ..spec.clone()
        };
        probe.validate()?;
        return Ok(vec![spec.zeta_min]);
    }
    spec.validate()?;
    Ok(spec.grid())
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn samples_at(
    r: f64,
    spec: &SweepSpec,
    esn_route: EsnRoute,
) -> Result<Vec<Sample>, (Kind, String)> {
    let zeta = Complex64::new(r, 0.0);
    let policy = spec.policy();
    let mut out = Vec::new();
    let mut push = |kind, value: f64, at: String| out.push(Sample { kind, value, at });
    let fail = |kind: Kind| move |e: Error| (kind, format!("|zeta|={r}: {e}"));

    let pcs = pair_coherent_state(zeta, &policy).map_err(fail(Kind::Normalization))?;
    push(
        Kind::Normalization,
        (pcs.norm_sqr() - 1.0).abs(),
        format!("pcs |zeta|={r}"),
    );

    let mut ms = vec![0, 1, 2, 5];
    if !ms.contains(&spec.m) {
        ms.push(spec.m);
    }
    let mut thetas = vec![0.0, FRAC_PI_4, -FRAC_PI_4, FRAC_PI_2];
    if !thetas.contains(&spec.theta) {
        thetas.push(spec.theta);
    }
    for &m in &ms {
        for &theta in &thetas {
            let params = GammaParams::new(zeta, m, theta).map_err(fail(Kind::GammaSpectrum))?;
            let at = format!("|zeta|={r} m={m} theta={theta}");
            let state = match number_state_superposition(&params, &policy) {
                Ok(s) => s,
                Err(Error::DegenerateNorm { .. }) => continue,
                Err(e) => return Err(fail(Kind::Normalization)(e)),
            };
            push(
                Kind::Normalization,
                (state.norm_sqr() - 1.0).abs(),
                at.clone(),
            );
            let lambda = gamma_spectrum(&params, &policy).map_err(fail(Kind::GammaSpectrum))?;
            let range_violation = lambda
                .iter()
                .map(|&l| {
                    if l < 0.0 {
                        -l
                    } else if l > 1.0 {
                        l - 1.0
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max);
            let sum_err = (lambda.iter().sum::<f64>() - 1.0).abs();
            push(
                Kind::GammaSpectrum,
                sum_err.max(range_violation),
                at.clone(),
            );
            let direct =
                gamma_entropy_direct(&params, &policy).map_err(fail(Kind::GammaClosedForm))?;
            let closed =
                gamma_entropy_closed_form(&params, &policy).map_err(fail(Kind::GammaClosedForm))?;
            push(
                Kind::GammaClosedForm,
                (direct.value() - closed.value()).abs(),
                at,
            );
        }
    }

    let trace =
        iterate_superposition(zeta, RECURSION_STEPS).map_err(fail(Kind::RecursionIdentity))?;
    for step in &trace.steps {
        let at = format!("|zeta|={r} n={}", step.n);
        let other = esn_route(zeta, step.n).value();
        push(
            Kind::RecursionIdentity,
            (step.entropy.value() - other).abs(),
            at.clone(),
        );
        push(Kind::GainBound, step.gain.value(), at);
    }
    for n in [1, RECURSION_STEPS / 2, RECURSION_STEPS] {
        let prefix = pcs_core::SuperpositionTrace {
            zeta,
            steps: trace.steps[..n].to_vec(),
        };
        let weighted = gain_decomposition(&prefix).map_err(fail(Kind::RecursionIdentity))?;
        let other = esn_route(zeta, n).value();
        push(
            Kind::RecursionIdentity,
            (weighted.value() - other).abs(),
            format!("|zeta|={r} n={n} weighted"),
        );
    }

    let full = pcs_entropy_closed_form(zeta, &policy)
        .map_err(fail(Kind::Convergence))?
        .value();
    let (conv, _) = converged_entropy(zeta, CONVERGENCE_TOL).map_err(fail(Kind::Convergence))?;
    push(
        Kind::Convergence,
        (conv.value() - full).abs(),
        format!("|zeta|={r}"),
    );

    if pcs.truncation() <= ORACLE_MAX_CUTOFF {
        let brute = brute_entropy(&lift(&pcs).map_err(fail(Kind::OracleEntropy))?)
            .map_err(fail(Kind::OracleEntropy))?
            .value();
        let at = format!("|zeta|={r}");
        push(
            Kind::OracleEntropy,
            (brute - entanglement_entropy(&pcs).value()).abs(),
            at.clone(),
        );
        push(Kind::OracleEntropy, (brute - full).abs(), at);
    }

    let n_pt = pcs.truncation().min(PT_CUTOFF);
    let brute_pt = brute_pt_blocks(&truncated_partial_state(zeta, n_pt))
        .map_err(fail(Kind::OraclePtSpectrum))?;
    push(
        Kind::OraclePtSpectrum,
        max_diff(&sorted(brute_pt), &sorted(pt_spectrum(zeta, n_pt))),
        format!("|zeta|={r} N={n_pt}"),
    );

    let n_neg = PT_CUTOFF + (3.0 * r).ceil() as usize;
    let truncated = negativity_from_spectrum(
        &pt_spectrum(zeta, n_neg),
        NegativityConvention::OrderedPairs,
    );
    let closed = negativity_closed_form(zeta).map_err(fail(Kind::NegativityLimit))?;
    push(
        Kind::NegativityLimit,
        (truncated - closed).abs(),
        format!("|zeta|={r} N={n_neg}"),
    );

    Ok(out)
}

/// Runs every check with the standard closed form for `E(S_n)`.
pub fn run(spec: &SweepSpec) -> Result<VerifyReport, CliError> {
    run_with(spec, esn_closed_form)
}

/// Runs every check, comparing the recursion against `esn_route`.
pub fn run_with(spec: &SweepSpec, esn_route: EsnRoute) -> Result<VerifyReport, CliError> {
    let zetas = grid(spec)?;
    let per_point: Vec<Result<Vec<Sample>, (Kind, String)>> = zetas
        .par_iter()
        .map(|&r| samples_at(r, spec, esn_route))
        .collect();

    let mut checks: Vec<Check> = KINDS
        .iter()
        .map(|&(_, name, tolerance)| Check {
            name,
            tolerance,
            worst: 0.0,
            at: String::new(),
            samples: 0,
            error: None,
        })
        .collect();
    let index = |kind: Kind| KINDS.iter().position(|(k, _, _)| *k == kind).unwrap();

    for result in per_point {
        match result {
            Ok(samples) => {
                for s in samples {
                    let c = &mut checks[index(s.kind)];
                    c.samples += 1;
                    // NaN counts as a failure
                    if !(s.value <= c.worst) {
                        c.worst = if s.value.is_nan() {
                            f64::INFINITY
                        } else {
                            s.value
                        };
                        c.at = s.at;
                    }
                }
            }
            Err((kind, msg)) => {
                let c = &mut checks[index(kind)];
                if c.error.is_none() {
                    c.error = Some(msg);
                }
            }
        }
    }
    Ok(VerifyReport { checks })
}
