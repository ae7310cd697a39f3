//! Bipartite entanglement of pair coherent states.
//!
//! The `q = 0` pair coherent state `|zeta,0>` is diagonal in the two-mode
//! number basis `|n,n>`, so its entanglement is carried entirely by the
//! Schmidt weights `f_n = |zeta|^{2n} / (I0(2|zeta|) (n!)^2)`. This crate
//! computes
//!
//! * the entropy of entanglement and partial-transpose negativity of `|zeta,0>`,
//! * the same entropy rebuilt step by step from superpositions of number
//!   states (`iterate`),
//! * entropy and entanglement gain of `|zeta,0>` superposed with a single
//!   number state `|m,m>`,
//! * independent brute-force versions of all of the above (`oracle`).
//!
//! Entropies are in ebits.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod iterate;
pub mod measures;
pub mod oracle;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use iterate::{
    converged_entropy, esn_closed_form, gain_decomposition, gamma_sn_sq, iterate_superposition,
    SuperpositionStep, SuperpositionTrace,
};
pub use measures::{
    entanglement_entropy, entanglement_gain, gamma_entropy_closed_form, gamma_entropy_direct,
    negativity, negativity_closed_form, negativity_from_spectrum, pcs_entropy_closed_form,
    pt_spectrum, EntanglementReport, NegativityConvention,
};
pub use special::EBits;
pub use states::{
    choose_truncation, gamma_spectrum, number_state_superposition, pair_coherent_state,
    schmidt_probabilities, truncated_partial_state, weight, GammaParams, PairWeights,
    SchmidtDiagonalState, TruncationMode, TruncationPolicy,
};
