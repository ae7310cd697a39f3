//! Brute-force cross-checks on dense two-mode vectors.
//!
//! Nothing here calls into `measures` or `iterate`: states come in through
//! the `states` constructors (or the export format) and every quantity is
//! rebuilt from raw amplitudes.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::EBits;
use crate::states::SchmidtDiagonalState;

/// Largest per-mode cutoff the dense oracle accepts.
pub const MAX_ORACLE_CUTOFF: usize = 64;

/// Off-diagonal magnitude above which a Schmidt-diagonal reduction is rejected.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Amplitudes `psi(n_a, n_b)` on a `(N+1) x (N+1)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTwoModeVector {
    entries: Array2<Complex64>,
}

impl DenseTwoModeVector {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols || rows == 0 {
            return Err(Error::InvalidParams(format!(
                "dense vector must be square and non-empty, got {rows}x{cols}"
            )));
        }
        if rows > MAX_ORACLE_CUTOFF + 1 {
            return Err(Error::InvalidParams(format!(
                "oracle cutoff {} exceeds {MAX_ORACLE_CUTOFF}",
                rows - 1
            )));
        }
        Ok(DenseTwoModeVector { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|c| c.norm_sqr() > 0.0).count()
    }
}

/// Places `c_n` at `(n, n)`; everything else is exactly zero.
pub fn lift(state: &SchmidtDiagonalState) -> Result<DenseTwoModeVector> {
    let amps = state.amplitudes();
    let dim = amps.len();
    let mut entries = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
    for (n, c) in amps.iter().enumerate() {
        entries[[n, n]] = *c;
    }
    DenseTwoModeVector::new(entries)
}

/// Reads an `n,re,im` export and lifts it.
pub fn lift_export(text: &str) -> Result<DenseTwoModeVector> {
    lift(&SchmidtDiagonalState::from_export(text)?)
}

/// Which mode is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracedMode {
    A,
    B,
}

fn reduced_density(vec: &DenseTwoModeVector, traced: TracedMode) -> Array2<Complex64> {
    let psi = &vec.entries;
    let dim = vec.dim();
    let mut rho = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += match traced {
                    TracedMode::B => psi[[i, k]] * psi[[j, k]].conj(),
                    TracedMode::A => psi[[k, i]] * psi[[k, j]].conj(),
                };
            }
            rho[[i, j]] = acc;
        }
    }
    rho
}

fn check_diagonal(rho: &Array2<Complex64>) -> Result<()> {
    for ((i, j), v) in rho.indexed_iter() {
        if i != j && v.norm() > OFF_DIAGONAL_TOL {
            return Err(Error::OffDiagonal {
                row: i,
                col: j,
                magnitude: v.norm(),
            });
        }
    }
    Ok(())
}

/// `rho_A = Tr_B |psi><psi|`, with every off-diagonal entry checked to vanish.
pub fn brute_reduced_density(vec: &DenseTwoModeVector) -> Result<Array2<Complex64>> {
    brute_reduced_density_of(vec, TracedMode::B)
}

/// As [`brute_reduced_density`], tracing out the chosen mode.
pub fn brute_reduced_density_of(
    vec: &DenseTwoModeVector,
    traced: TracedMode,
) -> Result<Array2<Complex64>> {
    let rho = reduced_density(vec, traced);
    check_diagonal(&rho)?;
    Ok(rho)
}

fn diagonal_entropy(rho: &Array2<Complex64>) -> f64 {
    let mut h = 0.0;
    for i in 0..rho.nrows() {
        let p = rho[[i, i]].re;
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    (h / std::f64::consts::LN_2).max(0.0)
}

/// Von Neumann entropy of the reduced state, from its (verified) diagonal.
pub fn brute_entropy(vec: &DenseTwoModeVector) -> Result<EBits> {
    Ok(EBits(diagonal_entropy(&brute_reduced_density(vec)?)))
}

/// Same as [`brute_entropy`] with mode `A` traced out instead.
pub fn brute_entropy_traced(vec: &DenseTwoModeVector, traced: TracedMode) -> Result<EBits> {
    Ok(EBits(diagonal_entropy(&brute_reduced_density_of(
        vec, traced,
    )?)))
}

/// Eigenvalues of a 2x2 Hermitian matrix `[[a, b], [conj(b), d]]`.
fn hermitian_2x2_eigenvalues(a: f64, b: Complex64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean + half_gap, mean - half_gap)
}

/// Partial-transpose eigenvalues of the lifted state.
///
/// `rho^{T_B}[(a,b),(a',b')] = psi(a,b') conj(psi(a',b))`. For a
/// Schmidt-diagonal vector this only couples `|n,m>` with `|m,n>`, so the
/// matrix splits into `1x1` blocks on `|n,n>` and `2x2` blocks on
/// `span{|n,m>, |m,n>}` for `n < m`. Output order matches
/// `measures::pt_spectrum`: diagonals first, then `(+, -)` per block.
pub fn brute_pt_blocks(state: &SchmidtDiagonalState) -> Result<Vec<f64>> {
    let vec = lift(state)?;
    let psi = &vec.entries;
    let dim = vec.dim();
    for ((i, j), v) in psi.indexed_iter() {
        if i != j && *v != Complex64::new(0.0, 0.0) {
            return Err(Error::OffDiagonal {
                row: i,
                col: j,
                magnitude: v.norm(),
            });
        }
    }
    let pt = |a: usize, b: usize, a2: usize, b2: usize| psi[[a, b2]] * psi[[a2, b]].conj();

    let mut out = Vec::with_capacity(dim * dim);
    for n in 0..dim {
        out.push(pt(n, n, n, n).re);
    }
    for n in 0..dim {
        for m in n + 1..dim {
            let top = pt(n, m, n, m).re;
            let bottom = pt(m, n, m, n).re;
            let off = pt(n, m, m, n);
            let (hi, lo) = hermitian_2x2_eigenvalues(top, off, bottom);
            out.push(hi);
            out.push(lo);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{truncated_partial_state, GammaParams, TruncationPolicy};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lift_support() {
        let v = lift(&SchmidtDiagonalState::vacuum()).unwrap();
        assert_eq!(v.dim(), 1);
        assert_eq!(v.nonzero_count(), 1);
        let two = lift(&truncated_partial_state(c(1.0), 1)).unwrap();
        assert_eq!(two.nonzero_count(), 2);
        assert_eq!(two.entries()[[0, 1]], c(0.0));
        let pcs = lift(&truncated_partial_state(c(1.5), 10)).unwrap();
        assert_eq!(pcs.nonzero_count(), 11);
        assert!((pcs.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_simple() {
        let v = lift(&SchmidtDiagonalState::vacuum()).unwrap();
        assert_eq!(brute_reduced_density(&v).unwrap()[[0, 0]], c(1.0));
        let two = lift(&truncated_partial_state(c(1.0), 1)).unwrap();
        let rho = brute_reduced_density(&two).unwrap();
        assert!((rho[[0, 0]].re - 0.5).abs() < 1e-15);
        assert!((rho[[1, 1]].re - 0.5).abs() < 1e-15);
        assert_eq!(brute_entropy(&v).unwrap().value(), 0.0);
        assert!((brute_entropy(&two).unwrap().value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_diagonal_input_is_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut e = Array2::from_elem((2, 2), c(0.0));
        // (|00> + |01>)/sqrt2 ⊗ ... is not Schmidt diagonal in this basis
        e[[0, 0]] = c(h);
        e[[1, 0]] = c(h);
        let v = DenseTwoModeVector::new(e).unwrap();
        assert!(matches!(
            brute_reduced_density(&v),
            Err(Error::OffDiagonal { .. })
        ));
    }

    #[test]
    fn dense_vector_limits() {
        let e = Array2::from_elem((2, 3), c(0.0));
        assert!(DenseTwoModeVector::new(e).is_err());
        let big = Array2::from_elem((MAX_ORACLE_CUTOFF + 2, MAX_ORACLE_CUTOFF + 2), c(0.0));
        assert!(DenseTwoModeVector::new(big).is_err());
    }

    #[test]
    fn pt_blocks_simple() {
        assert_eq!(
            brute_pt_blocks(&SchmidtDiagonalState::vacuum()).unwrap(),
            vec![1.0]
        );
        let two = brute_pt_blocks(&truncated_partial_state(c(1.0), 1)).unwrap();
        for (v, e) in two.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((v - e).abs() < 1e-15);
        }
    }

    #[test]
    fn both_partial_traces_agree() {
        let params = GammaParams::new(Complex64::from_polar(1.1, 0.4), 2, 0.6).unwrap();
        let state =
            crate::states::number_state_superposition(&params, &TruncationPolicy::fixed(20))
                .unwrap();
        let v = lift(&state).unwrap();
        let a = brute_entropy_traced(&v, TracedMode::A).unwrap().value();
        let b = brute_entropy_traced(&v, TracedMode::B).unwrap().value();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn export_is_readable() {
        let state = truncated_partial_state(Complex64::from_polar(0.9, 2.0), 5);
        let v = lift_export(&state.to_export()).unwrap();
        assert_eq!(v, lift(&state).unwrap());
    }
}
