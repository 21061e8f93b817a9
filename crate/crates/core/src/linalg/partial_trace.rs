use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::NORMALIZATION;

use super::{ComplexMatrix, DensityMatrix, StateVector};

/// Reduced density matrix of the qubit pair `keep = (a, b)`.
///
/// The result is in the basis |00⟩, |01⟩, |10⟩, |11⟩ with qubit `a` as the
/// left (most significant) factor.
pub fn partial_trace(state: &StateVector, keep: (usize, usize)) -> Result<DensityMatrix> {
    let (a, b) = keep;
    let mask_a = state.site_mask(a)?;
    let mask_b = state.site_mask(b)?;
    if a == b {
        return Err(Error::DuplicateIndex(a));
    }
    state.ensure_normalized(NORMALIZATION)?;

    let kept = [0, mask_b, mask_a, mask_a | mask_b];
    let psi = state.amplitudes();
    let mut rho = ComplexMatrix::zeros(4, 4);
    for env in 0..psi.len() {
        if env & (mask_a | mask_b) != 0 {
            continue;
        }
        let local: [Complex64; 4] = kept.map(|m| psi[env | m]);
        for r in 0..4 {
            if local[r].re == 0.0 && local[r].im == 0.0 {
                continue;
            }
            for c in 0..4 {
                rho[(r, c)] += local[r] * local[c].conj();
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}
