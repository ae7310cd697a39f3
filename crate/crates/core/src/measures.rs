//! Entanglement measures: entropy of entanglement, partial-transpose
//! negativity, and the number-state superposition entropy and gain.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::log_sum_exp;
use crate::special::{ln_bessel_i0, plogp, plogp_from_ln, EBits};
use crate::states::{
    choose_truncation, gamma_spectrum, ladder_ln_terms, schmidt_probabilities, GammaParams,
    PairWeights, SchmidtDiagonalState, TruncationPolicy,
};

/// How the negative partial-transpose eigenvalues are counted.
///
/// Each unordered pair `n < m` contributes one 2x2 block with eigenvalues
/// `+-|c_n c_m|`. `OrderedPairs` sums over `n != m` in both orders, giving
/// twice the one-per-block total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativityConvention {
    #[default]
    OrderedPairs,
    UnorderedPairs,
}

impl NegativityConvention {
    fn factor(self) -> f64 {
        match self {
            NegativityConvention::OrderedPairs => 2.0,
            NegativityConvention::UnorderedPairs => 1.0,
        }
    }
}

impl FromStr for NegativityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordered" | "ordered-pairs" => Ok(NegativityConvention::OrderedPairs),
            "unordered" | "unordered-pairs" => Ok(NegativityConvention::UnorderedPairs),
            other => Err(Error::InvalidParams(format!(
                "unknown negativity convention {other:?}"
            ))),
        }
    }
}

impl fmt::Display for NegativityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegativityConvention::OrderedPairs => "ordered-pairs",
            NegativityConvention::UnorderedPairs => "unordered-pairs",
        })
    }
}

/// Summary of the entanglement of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub entropy: EBits,
    pub negativity: f64,
    /// Signed gain in ebits, when the state is a superposition.
    pub gain: Option<f64>,
    pub truncation: usize,
    pub tail_mass: f64,
}

/// `-sum p_n log2 p_n` over the Schmidt probabilities.
pub fn entanglement_entropy(state: &SchmidtDiagonalState) -> EBits {
    let h: f64 = schmidt_probabilities(state)
        .into_iter()
        .map(|p| -plogp(p))
        .sum();
    EBits(h.max(0.0))
}

/// Entropy of `|zeta,0>` summed directly over the weights `f_n` up to the
/// policy cutoff.
pub fn pcs_entropy_closed_form(zeta: Complex64, policy: &TruncationPolicy) -> Result<EBits> {
    let n = choose_truncation(zeta, policy)?;
    let weights = PairWeights::new(zeta)?;
    let h: f64 = (0..=n).map(|k| -plogp_from_ln(weights.ln_f(k))).sum();
    Ok(EBits(h.max(0.0)))
}

/// `|1 - e^{2|zeta|} / I0(2|zeta|)|`, the closed-form ordered-pair negativity
/// of `|zeta,0>`. The ratio is taken in log-space.
pub fn negativity_closed_form(zeta: Complex64) -> Result<f64> {
    let r = zeta.norm();
    if !r.is_finite() {
        return Err(Error::InvalidParams(format!("non-finite zeta {zeta}")));
    }
    let x = 2.0 * r;
    let ratio = (x - ln_bessel_i0(x)?).exp();
    Ok((1.0 - ratio).abs())
}

/// Closed-form negativity of `|zeta,0>` under either counting convention.
pub fn negativity(zeta: Complex64, convention: NegativityConvention) -> Result<f64> {
    Ok(negativity_closed_form(zeta)? * convention.factor() / 2.0)
}

/// Analytic partial-transpose spectrum of `|S_N>` (the pair coherent state
/// truncated at `N` and renormalized).
///
/// Layout: the `N+1` diagonal eigenvalues `p_n`, then for each `n < m` the
/// pair `+sqrt(p_n p_m)`, `-sqrt(p_n p_m)`. Length `(N+1)^2`.
pub fn pt_spectrum(zeta: Complex64, n_max: usize) -> Vec<f64> {
    // ln p_n = 2n ln|zeta| - 2 ln n! - ln(sum_k |zeta|^{2k}/(k!)^2)
    let ln_terms = ladder_ln_terms(zeta, n_max);
    let ln_norm = log_sum_exp(&ln_terms);
    let ln_p: Vec<f64> = ln_terms.iter().map(|t| t - ln_norm).collect();
    let mut spectrum = Vec::with_capacity((n_max + 1) * (n_max + 1));
    spectrum.extend(ln_p.iter().map(|l| l.exp()));
    for n in 0..=n_max {
        for m in n + 1..=n_max {
            let off = (0.5 * (ln_p[n] + ln_p[m])).exp();
            spectrum.push(off);
            spectrum.push(-off);
        }
    }
    spectrum
}

/// Negativity read off a partial-transpose spectrum as produced by
/// [`pt_spectrum`], where each block's negative eigenvalue appears once.
pub fn negativity_from_spectrum(spectrum: &[f64], convention: NegativityConvention) -> f64 {
    let one_per_block: f64 = spectrum.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    one_per_block * convention.factor()
}

/// Negativity of any Schmidt-diagonal state: `sum_{n<m} |c_n||c_m|` per block.
pub fn state_negativity(state: &SchmidtDiagonalState, convention: NegativityConvention) -> f64 {
    let s: f64 = state.amplitudes().iter().map(|c| c.norm()).sum();
    let one_per_block = 0.5 * (s * s - state.norm_sqr());
    one_per_block.max(0.0) * convention.factor()
}

/// `E(Gamma_s) = -sum lambda_n log2 lambda_n` over the closed-form spectrum.
pub fn gamma_entropy_direct(params: &GammaParams, policy: &TruncationPolicy) -> Result<EBits> {
    let lambda = gamma_spectrum(params, policy)?;
    let h: f64 = lambda.iter().map(|&l| -plogp(l)).sum();
    Ok(EBits(h.max(0.0)))
}

/// `E(Gamma_s)` assembled from the pair coherent entropy and correction terms:
///
/// ```text
/// G E = G log2 G - (1 - f_m) a log2 a + a E(|zeta,0>) + a F1 + F2
/// F1  = f_m log2 f_m
/// F2  = -[(a + g^2) f_m] log2 [(a + g^2) f_m]
/// ```
///
/// with `G = ||Gamma_s||^2` and `a = |alpha|^2`.
pub fn gamma_entropy_closed_form(params: &GammaParams, policy: &TruncationPolicy) -> Result<EBits> {
    let weights = PairWeights::new(params.zeta)?;
    let norm_sq = params.checked_norm_sq(&weights)?;
    let e_pcs = pcs_entropy_closed_form(params.zeta, policy)?.value();
    let alpha_sq = params.alpha().powi(2);
    let fm = weights.f(params.m);
    let f1 = plogp_from_ln(weights.ln_f(params.m));
    let peak = params.theta.sin() + params.theta.cos() * fm.sqrt();
    let f2 = -plogp(peak * peak);
    let total =
        plogp(norm_sq) - (1.0 - fm) * plogp(alpha_sq) + alpha_sq * e_pcs + alpha_sq * f1 + f2;
    Ok(EBits((total / norm_sq).max(0.0)))
}

/// `Delta E = E(Gamma_s) - |alpha|^2 E(|zeta,0>)`, in ebits. May be negative.
pub fn entanglement_gain(params: &GammaParams, policy: &TruncationPolicy) -> Result<f64> {
    let e_gamma = gamma_entropy_direct(params, policy)?.value();
    let e_pcs = pcs_entropy_closed_form(params.zeta, policy)?.value();
    Ok(e_gamma - params.alpha().powi(2) * e_pcs)
}

/// Report for the pair coherent state itself.
pub fn pair_coherent_report(
    zeta: Complex64,
    policy: &TruncationPolicy,
    convention: NegativityConvention,
) -> Result<EntanglementReport> {
    let state = crate::states::pair_coherent_state(zeta, policy)?;
    Ok(EntanglementReport {
        entropy: entanglement_entropy(&state),
        negativity: state_negativity(&state, convention),
        gain: None,
        truncation: state.truncation(),
        tail_mass: state.tail_mass(),
    })
}

/// Report for `|Gamma_s>`, including its gain over the pair coherent part.
pub fn gamma_report(
    params: &GammaParams,
    policy: &TruncationPolicy,
    convention: NegativityConvention,
) -> Result<EntanglementReport> {
    let state = crate::states::number_state_superposition(params, policy)?;
    Ok(EntanglementReport {
        entropy: entanglement_entropy(&state),
        negativity: state_negativity(&state, convention),
        gain: Some(entanglement_gain(params, policy)?),
        truncation: state.truncation(),
        tail_mass: state.tail_mass(),
    })
}
