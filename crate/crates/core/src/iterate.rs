//! Entanglement of `|zeta,0>` built up one number state at a time.
//!
//! `|S_n>` superposes `|S_{n-1}>` with `|n,n>`. The two pieces are
//! biorthogonal and `|n,n>` is separable, so
//!
//! ```text
//! E(S_n) = r_n E(S_{n-1}) + h(r_n),   r_n = (gamma_{S_n} / gamma_{S_{n-1}})^2
//! ```
//!
//! starting from the product state `E(S_0) = 0`. Normalization constants are
//! kept in the combined form `N0^2 gamma_{S_n}^2 = 1 / sum_{k<=n} |zeta|^{2k}/(k!)^2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{binary_entropy, log_sum_exp, plogp_from_ln, EBits, SERIES_CAP};
use crate::states::ladder_ln_terms;

/// One superposition step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionStep {
    pub n: usize,
    /// `N0^2 gamma_{S_n}^2`.
    pub gamma_sq: f64,
    /// `(gamma_{S_n} / gamma_{S_{n-1}})^2`.
    pub ratio_sq: f64,
    pub gain: EBits,
    pub entropy: EBits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionTrace {
    pub zeta: Complex64,
    pub steps: Vec<SuperpositionStep>,
}

impl SuperpositionTrace {
    pub fn final_entropy(&self) -> EBits {
        self.steps.last().map_or(EBits::ZERO, |s| s.entropy)
    }

    pub fn step(&self, n: usize) -> Option<&SuperpositionStep> {
        self.steps.iter().find(|s| s.n == n)
    }

    /// CSV with header `n,gamma_sq,ratio_sq,gain_ebits,entropy_ebits`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gamma_sq,ratio_sq,gain_ebits,entropy_ebits\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                s.n,
                s.gamma_sq,
                s.ratio_sq,
                s.gain.value(),
                s.entropy.value()
            ));
        }
        out
    }
}

/// `N0^2 gamma_{S_n}^2 = 1 / sum_{k=0}^{n} |zeta|^{2k} / (k!)^2`.
pub fn gamma_sn_sq(zeta: Complex64, n: usize) -> f64 {
    (-log_sum_exp(&ladder_ln_terms(zeta, n))).exp()
}

/// Running log-partial-sums `ln sum_{k<=n} |zeta|^{2k}/(k!)^2` for `n = 0..=n_max`.
fn ln_partial_sums(zeta: Complex64, n_max: usize) -> Vec<f64> {
    let terms = ladder_ln_terms(zeta, n_max);
    let mut out = Vec::with_capacity(terms.len());
    let mut acc = f64::NEG_INFINITY;
    for t in terms {
        acc = if acc == f64::NEG_INFINITY {
            t
        } else {
            let (hi, lo) = if acc > t { (acc, t) } else { (t, acc) };
            hi + (lo - hi).exp().ln_1p()
        };
        out.push(acc);
    }
    out
}

fn step_from(
    n: usize,
    ln_sum_prev: f64,
    ln_sum: f64,
    prev_entropy: f64,
) -> Result<SuperpositionStep> {
    let ratio_sq = (ln_sum_prev - ln_sum).exp().min(1.0);
    let gain = binary_entropy(ratio_sq)?;
    Ok(SuperpositionStep {
        n,
        gamma_sq: (-ln_sum).exp(),
        ratio_sq,
        gain,
        entropy: EBits(ratio_sq * prev_entropy + gain.value()),
    })
}

/// Steps `n = 1..=n_max` of the recursion, seeded with `E(S_0) = 0`.
pub fn iterate_superposition(zeta: Complex64, n_max: usize) -> Result<SuperpositionTrace> {
    if n_max == 0 {
        return Err(Error::InvalidParams("n_max must be at least 1".into()));
    }
    let sums = ln_partial_sums(zeta, n_max);
    let mut steps = Vec::with_capacity(n_max);
    let mut entropy = 0.0;
    for n in 1..=n_max {
        let step = step_from(n, sums[n - 1], sums[n], entropy)?;
        entropy = step.entropy.value();
        steps.push(step);
    }
    Ok(SuperpositionTrace { zeta, steps })
}

/// `E(S_n) = -sum_{k<=n} p_k log2 p_k` with `p_k = N0^2 gamma_{S_n}^2 |zeta|^{2k}/(k!)^2`.
pub fn esn_closed_form(zeta: Complex64, n: usize) -> EBits {
    let terms = ladder_ln_terms(zeta, n);
    let ln_norm = log_sum_exp(&terms);
    let h: f64 = terms.iter().map(|t| -plogp_from_ln(t - ln_norm)).sum();
    EBits(h.max(0.0))
}

/// Re-sums `E(S_n) = sum_k (gamma_{S_n}/gamma_{S_k})^2 h_k`. The weights are
/// required: each new term rescales every earlier contribution.
pub fn gain_decomposition(trace: &SuperpositionTrace) -> Result<EBits> {
    let last = trace
        .steps
        .last()
        .ok_or_else(|| Error::InvalidParams("empty superposition trace".into()))?;
    let total = trace
        .steps
        .iter()
        .map(|s| (last.gamma_sq / s.gamma_sq) * s.gain.value())
        .sum();
    Ok(EBits(total))
}

/// Runs the recursion until both the step gain and the entropy change drop
/// below `tol`. Returns the entropy and the stopping step.
pub fn converged_entropy(zeta: Complex64, tol: f64) -> Result<(EBits, usize)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let r2 = zeta.norm_sqr();
    let mut ln_sum = 0.0_f64;
    let mut entropy = 0.0_f64;
    let mut ln_term = 0.0_f64;
    for n in 1..=SERIES_CAP {
        ln_term += if r2 == 0.0 {
            f64::NEG_INFINITY
        } else {
            r2.ln() - 2.0 * (n as f64).ln()
        };
        let ln_sum_next = if ln_term == f64::NEG_INFINITY {
            ln_sum
        } else {
            let (hi, lo) = if ln_sum > ln_term {
                (ln_sum, ln_term)
            } else {
                (ln_term, ln_sum)
            };
            hi + (lo - hi).exp().ln_1p()
        };
        let step = step_from(n, ln_sum, ln_sum_next, entropy)?;
        let delta = (step.entropy.value() - entropy).abs();
        entropy = step.entropy.value();
        ln_sum = ln_sum_next;
        // past the peak term the gains only shrink
        let past_peak = r2 < ((n + 1) as f64).powi(2);
        if past_peak && step.gain.value() < tol && delta < tol {
            return Ok((EBits(entropy), n));
        }
    }
    Err(Error::CapExceeded {
        what: "converged_entropy",
        cap: SERIES_CAP,
    })
}
