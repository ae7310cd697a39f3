//! Special functions and entropy kernels.
//!
//! Entropies are reported in ebits (base-2 logarithms). Natural logarithms
//! appear only inside the log-space helpers and are converted explicitly.

use std::f64::consts::LN_2;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Relative size of the next series term at which summation stops.
pub const SERIES_REL_TOL: f64 = 1e-16;

/// Hard limit on series terms; hitting it is an error.
pub const SERIES_CAP: usize = 500;

/// Slack allowed above 1 for probability arguments carrying rounding error.
pub const PROB_SLACK: f64 = 1e-12;

/// An entanglement value in ebits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct EBits(pub f64);

impl EBits {
    pub const ZERO: EBits = EBits(0.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ebit", self.0)
    }
}

impl From<EBits> for f64 {
    fn from(e: EBits) -> f64 {
        e.0
    }
}

/// `x log2 x` for any `x >= 0`, with `0 log 0 = 0`.
#[inline]
pub(crate) fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `p log2 p` where only `ln p` is known; avoids underflow for tiny `p`.
#[inline]
pub(crate) fn plogp_from_ln(ln_p: f64) -> f64 {
    if ln_p == f64::NEG_INFINITY {
        return 0.0;
    }
    ln_p.exp() * ln_p / LN_2
}

/// `x log2 x` on `[0, 1]` with the continuous extension at zero.
pub fn xlog2x(x: f64) -> Result<f64> {
    if !(0.0..=1.0 + PROB_SLACK).contains(&x) {
        return Err(Error::Domain {
            what: "xlog2x",
            value: x,
        });
    }
    Ok(plogp(x.min(1.0)))
}

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<EBits> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            what: "binary_entropy",
            value: x,
        });
    }
    let h = -plogp(x) - plogp(1.0 - x);
    Ok(EBits(h.max(0.0)))
}

/// Modified Bessel function of the first kind, order zero, by its power series.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel_i0",
            value: x,
        });
    }
    let q = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..SERIES_CAP {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow {
                what: "bessel_i0",
                value: x,
            });
        }
        // past the peak term the remainder is below term / (1 - ratio)
        let ratio = q / ((k + 1) as f64 * (k + 1) as f64);
        if ratio < 0.5 && term * ratio < SERIES_REL_TOL * sum {
            return Ok(sum);
        }
    }
    Err(Error::CapExceeded {
        what: "bessel_i0",
        cap: SERIES_CAP,
    })
}

/// `ln I0(x)`, summed around the peak term so large arguments do not overflow.
pub fn ln_bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "ln_bessel_i0",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_half = (0.5 * x).ln();
    let ln_term = |k: usize| 2.0 * (k as f64 * ln_half - log_factorial(k));
    // largest term sits at k ~ x/2
    let peak = (0.5 * x).floor() as usize;
    if peak >= SERIES_CAP {
        return Err(Error::CapExceeded {
            what: "ln_bessel_i0",
            cap: SERIES_CAP,
        });
    }
    let shift = ln_term(peak);
    let mut sum = 1.0_f64;
    let mut used = 1;
    for k in (0..peak).rev() {
        let t = (ln_term(k) - shift).exp();
        sum += t;
        used += 1;
        if t < SERIES_REL_TOL * sum {
            break;
        }
    }
    let mut k = peak + 1;
    loop {
        if used >= SERIES_CAP {
            return Err(Error::CapExceeded {
                what: "ln_bessel_i0",
                cap: SERIES_CAP,
            });
        }
        let t = (ln_term(k) - shift).exp();
        sum += t;
        used += 1;
        if t < SERIES_REL_TOL * sum {
            break;
        }
        k += 1;
    }
    Ok(shift + sum.ln())
}

const EXACT_FACTORIALS: usize = 21;
const LN_FACT_TABLE: usize = 1024;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACT_TABLE);
        let mut fact: u64 = 1;
        for n in 0..EXACT_FACTORIALS {
            if n > 0 {
                fact *= n as u64;
            }
            table.push((fact as f64).ln());
        }
        for n in EXACT_FACTORIALS..LN_FACT_TABLE {
            let prev = table[n - 1];
            table.push(prev + (n as f64).ln());
        }
        table
    })
}

/// `ln(n!)`. Factorials up to 20! are formed exactly in integers first; larger
/// arguments accumulate `ln k`.
pub fn log_factorial(n: usize) -> f64 {
    let table = ln_fact_table();
    if n < table.len() {
        return table[n];
    }
    let mut acc = table[table.len() - 1];
    for k in table.len()..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// Stable `ln(sum(exp(v)))` for a slice of log-values.
pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}
