//! Pair coherent states and related superpositions, carried as Schmidt
//! amplitudes over the diagonal ladder `|n,n>`.
//!
//! Magnitudes are built in log-space with the phase of `zeta^n` attached
//! separately, so `zeta^n / n!` never overflows for large `|zeta|` or `n`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{ln_bessel_i0, log_factorial, log_sum_exp, SERIES_CAP};

/// Smallest admissible `||Gamma_s||^2`.
pub const MIN_NORM_SQ: f64 = 1e-12;

/// Tolerance on the unit-norm invariant.
pub const NORM_TOL: f64 = 1e-12;

/// How far the infinite ladder is cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationMode {
    /// Keep `n = 0..=N` exactly.
    Fixed(usize),
    /// Smallest `N` whose discarded weight is below the tolerance.
    Tolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    pub cap: usize,
}

impl TruncationPolicy {
    pub fn fixed(n: usize) -> Self {
        TruncationPolicy {
            mode: TruncationMode::Fixed(n),
            cap: SERIES_CAP.max(n),
        }
    }

    pub fn tolerance(eps: f64) -> Self {
        TruncationPolicy {
            mode: TruncationMode::Tolerance(eps),
            cap: SERIES_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            TruncationMode::Fixed(n) if n > self.cap => Err(Error::InvalidPolicy(format!(
                "fixed cutoff {n} exceeds cap {}",
                self.cap
            ))),
            TruncationMode::Tolerance(eps) if !(eps > 0.0) || !eps.is_finite() => Err(
                Error::InvalidPolicy(format!("tolerance must be positive, got {eps}")),
            ),
            _ => Ok(()),
        }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::tolerance(1e-16)
    }
}

/// Pair-coherent weights `f_n = |zeta|^{2n} / (I0(2|zeta|) (n!)^2)` for a
/// fixed `zeta`, with `ln I0` evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct PairWeights {
    ln_r: f64,
    ln_i0: f64,
}

impl PairWeights {
    pub fn new(zeta: Complex64) -> Result<Self> {
        let r = zeta.norm();
        if !r.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite zeta {zeta}")));
        }
        Ok(PairWeights {
            ln_r: r.ln(),
            ln_i0: ln_bessel_i0(2.0 * r)?,
        })
    }

    pub fn is_vacuum(&self) -> bool {
        self.ln_r == f64::NEG_INFINITY
    }

    /// `ln f_n`; `-inf` for `n >= 1` at the vacuum.
    pub fn ln_f(&self, n: usize) -> f64 {
        if self.is_vacuum() {
            return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        2.0 * (n as f64 * self.ln_r - log_factorial(n)) - self.ln_i0
    }

    pub fn f(&self, n: usize) -> f64 {
        self.ln_f(n).exp()
    }

    /// Weight beyond `n`, summed explicitly until the terms stop mattering.
    pub fn tail_after(&self, n: usize) -> f64 {
        let mut tail = 0.0;
        let mut k = n + 1;
        loop {
            let t = self.f(k);
            tail += t;
            let past_peak = self.ln_r < ((k + 1) as f64).ln();
            if past_peak && (t == 0.0 || t < 1e-17 * tail) {
                return tail;
            }
            k += 1;
        }
    }
}

/// `f_n` for a single index.
pub fn weight(zeta: Complex64, n: usize) -> Result<f64> {
    Ok(PairWeights::new(zeta)?.f(n))
}

/// Cutoff `N` for a pair coherent state under `policy`.
///
/// In tolerance mode the tail after `N` is bounded by `f_{N+1} / (1 - q)`
/// with `q = |zeta|^2 / (N+2)^2`, since the term ratio `|zeta|^2/(n+1)^2`
/// only decreases from there.
pub fn choose_truncation(zeta: Complex64, policy: &TruncationPolicy) -> Result<usize> {
    policy.validate()?;
    let eps = match policy.mode {
        TruncationMode::Fixed(n) => return Ok(n),
        TruncationMode::Tolerance(eps) => eps,
    };
    let weights = PairWeights::new(zeta)?;
    if weights.is_vacuum() {
        return Ok(0);
    }
    let r2 = zeta.norm_sqr();
    for n in 0..=policy.cap {
        let q = r2 / ((n + 2) as f64).powi(2);
        if q >= 1.0 {
            continue;
        }
        if weights.f(n + 1) / (1.0 - q) < eps {
            return Ok(n);
        }
    }
    Err(Error::CapExceeded {
        what: "choose_truncation",
        cap: policy.cap,
    })
}

/// A normalized two-mode pure state `sum_n c_n |n,n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDiagonalState {
    amplitudes: Vec<Complex64>,
    zeta: Complex64,
    truncation: usize,
    tail_mass: f64,
}

impl SchmidtDiagonalState {
    /// Normalizes `amplitudes` and wraps them. Fails on an all-zero vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, zeta: Complex64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParams("empty amplitude vector".into()));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidParams(format!(
                "cannot normalize, norm = {norm}"
            )));
        }
        let truncation = amplitudes.len() - 1;
        Ok(SchmidtDiagonalState {
            amplitudes: amplitudes.into_iter().map(|c| c / norm).collect(),
            zeta,
            truncation,
            tail_mass: 0.0,
        })
    }

    pub fn vacuum() -> Self {
        SchmidtDiagonalState {
            amplitudes: vec![Complex64::new(1.0, 0.0)],
            zeta: Complex64::new(0.0, 0.0),
            truncation: 0,
            tail_mass: 0.0,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Weight discarded by truncation before renormalizing.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// One `n,re,im` line per Schmidt index.
    pub fn to_export(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{n},{:.16e},{:.16e}", c.re, c.im).unwrap();
        }
        out
    }

    /// Parses the `n,re,im` format written by [`to_export`](Self::to_export).
    /// Indices must run `0, 1, 2, ...` in order. `zeta` is not part of the
    /// format and is set to zero.
    pub fn from_export(text: &str) -> Result<Self> {
        let mut amplitudes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| Error::Parse {
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected 3 fields, found {}",
                    fields.len()
                )));
            }
            let n: usize = fields[0]
                .parse()
                .map_err(|e| parse_err(format!("bad index: {e}")))?;
            if n != amplitudes.len() {
                return Err(parse_err(format!(
                    "expected index {}, found {n}",
                    amplitudes.len()
                )));
            }
            let re: f64 = fields[1]
                .parse()
                .map_err(|e| parse_err(format!("bad real part: {e}")))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|e| parse_err(format!("bad imaginary part: {e}")))?;
            amplitudes.push(Complex64::new(re, im));
        }
        if amplitudes.is_empty() {
            return Err(Error::Parse {
                line: 0,
                reason: "no amplitudes".into(),
            });
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Parse {
                line: 0,
                reason: format!("amplitudes not normalized (norm^2 = {norm})"),
            });
        }
        let truncation = amplitudes.len() - 1;
        Ok(SchmidtDiagonalState {
            amplitudes,
            zeta: Complex64::new(0.0, 0.0),
            truncation,
            tail_mass: 0.0,
        })
    }
}

/// Squared moduli `|c_n|^2`, the spectrum of either reduced density matrix.
pub fn schmidt_probabilities(state: &SchmidtDiagonalState) -> Vec<f64> {
    state.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

/// `ln(|zeta|^{2k} / (k!)^2)` for `k = 0..=n`.
pub(crate) fn ladder_ln_terms(zeta: Complex64, n: usize) -> Vec<f64> {
    let r = zeta.norm();
    if r == 0.0 {
        let mut v = vec![f64::NEG_INFINITY; n + 1];
        v[0] = 0.0;
        return v;
    }
    let ln_r = r.ln();
    (0..=n)
        .map(|k| 2.0 * (k as f64 * ln_r - log_factorial(k)))
        .collect()
}

fn phase(zeta: Complex64, n: usize) -> Complex64 {
    if zeta.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, n as f64 * zeta.arg())
    }
}

/// The normalized prefix `|S_n>` proportional to `sum_{k<=n} zeta^k / k! |k,k>`.
pub fn truncated_partial_state(zeta: Complex64, n: usize) -> SchmidtDiagonalState {
    let ln_terms = ladder_ln_terms(zeta, n);
    let ln_norm = log_sum_exp(&ln_terms);
    let amplitudes = ln_terms
        .iter()
        .enumerate()
        .map(|(k, &lt)| phase(zeta, k) * (0.5 * (lt - ln_norm)).exp())
        .collect();
    SchmidtDiagonalState {
        amplitudes,
        zeta,
        truncation: n,
        tail_mass: 0.0,
    }
}

/// The `q = 0` pair coherent state `|zeta,0>`, truncated under `policy` and
/// renormalized. The discarded weight is kept in `tail_mass`.
pub fn pair_coherent_state(
    zeta: Complex64,
    policy: &TruncationPolicy,
) -> Result<SchmidtDiagonalState> {
    let n = choose_truncation(zeta, policy)?;
    let weights = PairWeights::new(zeta)?;
    let mut state = truncated_partial_state(zeta, n);
    state.tail_mass = if weights.is_vacuum() {
        0.0
    } else {
        weights.tail_after(n)
    };
    Ok(state)
}

/// Parameters of `alpha |zeta,0> + beta zeta^m / (sqrt(I0) m!) |m,m>` with
/// `alpha = cos(theta)` and `beta = sin(theta) / sqrt(f_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub zeta: Complex64,
    pub m: usize,
    pub theta: f64,
}

impl GammaParams {
    /// Checks the angle lies in `(-pi, pi]`.
    pub fn new(zeta: Complex64, m: usize, theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= -PI || theta > PI {
            return Err(Error::InvalidParams(format!(
                "theta {theta} outside (-pi, pi]"
            )));
        }
        if !zeta.re.is_finite() || !zeta.im.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite zeta {zeta}")));
        }
        Ok(GammaParams { zeta, m, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.theta.cos()
    }

    /// `sqrt(f_m)` amplitude of the coherent part at the number-state index
    /// plus the number-state amplitude: `sin(theta) + cos(theta) sqrt(f_m)`.
    pub(crate) fn peak_amplitude(&self, sqrt_fm: f64) -> f64 {
        self.theta.sin() + self.theta.cos() * sqrt_fm
    }

    /// `||Gamma_s||^2 = 1 + 2 cos(theta) sin(theta) sqrt(f_m)`.
    pub fn norm_sq(&self, weights: &PairWeights) -> f64 {
        let sqrt_fm = weights.f(self.m).sqrt();
        1.0 + 2.0 * self.theta.cos() * self.theta.sin() * sqrt_fm
    }

    pub(crate) fn checked_norm_sq(&self, weights: &PairWeights) -> Result<f64> {
        let norm_sq = self.norm_sq(weights);
        if !(norm_sq > MIN_NORM_SQ) {
            return Err(Error::DegenerateNorm { norm_sq });
        }
        Ok(norm_sq)
    }
}

/// Cutoff for a number-state superposition: the pair coherent cutoff, raised
/// to reach index `m`.
pub(crate) fn gamma_truncation(params: &GammaParams, policy: &TruncationPolicy) -> Result<usize> {
    Ok(choose_truncation(params.zeta, policy)?.max(params.m))
}

/// Builds `|Gamma_s>` from amplitudes and renormalizes after truncation.
pub fn number_state_superposition(
    params: &GammaParams,
    policy: &TruncationPolicy,
) -> Result<SchmidtDiagonalState> {
    let weights = PairWeights::new(params.zeta)?;
    params.checked_norm_sq(&weights)?;
    let n = gamma_truncation(params, policy)?;
    let alpha = params.alpha();
    let mut amplitudes: Vec<Complex64> = (0..=n)
        .map(|k| phase(params.zeta, k) * (alpha * (0.5 * weights.ln_f(k)).exp()))
        .collect();
    let sqrt_fm = weights.f(params.m).sqrt();
    amplitudes[params.m] = phase(params.zeta, params.m) * params.peak_amplitude(sqrt_fm);
    let tail = if weights.is_vacuum() {
        0.0
    } else {
        alpha * alpha * weights.tail_after(n)
    };
    let mut state = SchmidtDiagonalState::from_amplitudes(amplitudes, params.zeta)?;
    state.tail_mass = tail;
    Ok(state)
}

/// Reduced-state eigenvalues of `|Gamma_s>` from the closed form
/// `lambda_n = (|alpha|^2 + g^2 delta_{nm}) f_n / ||Gamma_s||^2`, for `n` up
/// to the policy cutoff. Not renormalized after truncation.
pub fn gamma_spectrum(params: &GammaParams, policy: &TruncationPolicy) -> Result<Vec<f64>> {
    let weights = PairWeights::new(params.zeta)?;
    let norm_sq = params.checked_norm_sq(&weights)?;
    let n = gamma_truncation(params, policy)?;
    let alpha_sq = params.alpha().powi(2);
    let mut lambda: Vec<f64> = (0..=n).map(|k| alpha_sq * weights.f(k) / norm_sq).collect();
    // (|alpha|^2 + g^2) f_m = (sin(theta) + cos(theta) sqrt(f_m))^2
    let sqrt_fm = weights.f(params.m).sqrt();
    lambda[params.m] = params.peak_amplitude(sqrt_fm).powi(2) / norm_sq;
    Ok(lambda)
}
