//! Numerical thresholds shared across the crate.
//!
//! The free constants are the defaults; [`Tolerances`] bundles them so a caller
//! (the CLI `--tolerance` flag, a config file) can override any of them.

/// Max entrywise |h - h^dagger| accepted by the Hermitian eigensolver.
pub const HERMITICITY: f64 = 1e-10;

/// Allowed deviation of a state's squared norm from 1.
pub const NORMALIZATION: f64 = 1e-10;

/// Negative eigenvalues of a density matrix down to this value are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-12;

/// Spread below which a W state is reported as exact.
pub const EXACT_W: f64 = 1e-9;

/// Spread below which a pseudo-W window is reported.
pub const PSEUDO_W: f64 = 0.05;

/// Largest dense matrix (in entries) any builder will allocate.
pub const MAX_MATRIX_ENTRIES: usize = 1 << 24;

/// Default cap on the number of qubits in the full Hilbert space.
pub const MAX_QUBITS: usize = 14;

/// Environment variable overriding [`MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "SPINSTAR_MAX_QUBITS";

/// Closed-form vs numeric agreement required by the verification suite.
pub const CLOSED_FORM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub normalization: f64,
    pub psd_clamp: f64,
    pub exact_w: f64,
    pub pseudo_w: f64,
    pub max_matrix_entries: usize,
    pub max_qubits: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: HERMITICITY,
            normalization: NORMALIZATION,
            psd_clamp: PSD_CLAMP,
            exact_w: EXACT_W,
            pseudo_w: PSEUDO_W,
            max_matrix_entries: MAX_MATRIX_ENTRIES,
            max_qubits: MAX_QUBITS,
        }
    }
}

impl Tolerances {
    /// Defaults, with the qubit cap taken from `SPINSTAR_MAX_QUBITS` when set.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(cap) = std::env::var(MAX_QUBITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            tol.max_qubits = cap;
        }
        tol
    }
}
