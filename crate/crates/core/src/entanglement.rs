//! Pairwise entanglement: Wootters concurrence, the one-particle shortcut
//! `C = 2|bᵢ bⱼ|`, and W-state detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, singular_values, ComplexMatrix, DensityMatrix, StateVector,
};
use crate::model::OneParticleAmplitudes;
use crate::tolerances::{EXACT_W, HERMITICITY, NORMALIZATION, PSD_CLAMP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConcurrenceMethod {
    WoottersGeneral,
    OneParticleShortcut,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub pair: (usize, usize),
    pub value: f64,
    pub method: ConcurrenceMethod,
}

/// σ_y ⊗ σ_y; real, with −1 on the |00⟩↔|11⟩ corners and +1 on |01⟩↔|10⟩.
fn spin_flip() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Wootters concurrence `max{λ₁ − λ₂ − λ₃ − λ₄, 0}` of a two-qubit state, where
/// λ are the descending square roots of the spectrum of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
///
/// The λ are obtained as singular values of `τ = Vᵀ (σy⊗σy) V` with `ρ = V V†`,
/// which has the same spectrum without squaring small eigenvalues.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    wootters_concurrence_with(rho, PSD_CLAMP)
}

pub fn wootters_concurrence_with(rho: &DensityMatrix, psd_clamp: f64) -> Result<f64> {
    let m = rho.matrix();
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: m.rows().max(m.cols()),
        });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > NORMALIZATION || trace.im.abs() > NORMALIZATION {
        return Err(Error::NotNormalized { norm_sqr: trace.re });
    }
    let eig = hermitian_eig(m)?;
    let min = eig.eigenvalues[0];
    if min < -psd_clamp {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let drop = 64.0 * f64::EPSILON;
    let kept: Vec<usize> = (0..4).filter(|&k| eig.eigenvalues[k] > drop).collect();
    if kept.is_empty() {
        return Ok(0.0);
    }
    let v = ComplexMatrix::from_fn(4, kept.len(), |i, c| {
        let k = kept[c];
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].sqrt()
    });
    let tau = v.transpose().matmul(&spin_flip())?.matmul(&v)?;
    let mut lambdas = singular_values(&tau)?;
    lambdas.resize(4, 0.0);
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(0.0))
}

/// `2|bᵢ||bⱼ|` for a one-particle state.
pub fn one_particle_concurrence(b: &OneParticleAmplitudes, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::DuplicateIndex(i));
    }
    Ok(2.0 * b.get(i)?.norm() * b.get(j)?.norm())
}

/// Symmetric matrix of pairwise concurrences with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceMatrix {
    sites: usize,
    values: Vec<f64>,
}

impl ConcurrenceMatrix {
    fn from_fn(sites: usize, mut f: impl FnMut(usize, usize) -> Result<f64>) -> Result<Self> {
        let mut values = vec![0.0; sites * sites];
        for i in 0..sites {
            for j in i + 1..sites {
                let c = f(i, j)?;
                values[i * sites + j] = c;
                values[j * sites + i] = c;
            }
        }
        Ok(Self { sites, values })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.sites + j]
    }

    /// Upper-triangle entries `(i, j, C)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.sites).flat_map(move |i| (i + 1..self.sites).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn sum(&self) -> f64 {
        self.pairs().map(|(_, _, c)| c).sum()
    }

    /// max − min over all pairs.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .pairs()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, c)| {
                (lo.min(c), hi.max(c))
            });
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    /// Largest deviation of any pair from the W-state value 2/N.
    pub fn w_distance(&self) -> f64 {
        let target = 2.0 / self.sites as f64;
        self.pairs()
            .map(|(_, _, c)| (c - target).abs())
            .fold(0.0, f64::max)
    }
}

/// Wootters concurrence of every pair of a pure state.
pub fn pairwise_concurrence_matrix(state: &StateVector) -> Result<ConcurrenceMatrix> {
    ConcurrenceMatrix::from_fn(state.qubits(), |i, j| {
        wootters_concurrence(&partial_trace(state, (i, j))?)
    })
}

/// Pairwise matrix from the one-particle shortcut.
pub fn one_particle_concurrence_matrix(b: &OneParticleAmplitudes) -> ConcurrenceMatrix {
    ConcurrenceMatrix::from_fn(b.len(), |i, j| one_particle_concurrence(b, i, j))
        .expect("indices in range")
}

/// `(Σᵢ|bᵢ|)² / N`: the overlap with the best-phased W state.
pub fn w_state_fidelity(b: &OneParticleAmplitudes) -> f64 {
    fidelity_from_moduli(b.amplitudes().iter().map(|z| z.norm()), b.len())
}

fn fidelity_from_moduli(moduli: impl Iterator<Item = f64>, n: usize) -> f64 {
    let s: f64 = moduli.sum();
    s * s / n as f64
}

/// Fidelity of a full-space state with the nearest W state of its register.
pub fn w_state_fidelity_of_state(state: &StateVector) -> f64 {
    let n = state.qubits();
    let amps = state.amplitudes();
    fidelity_from_moduli((0..n).map(|s| amps[1 << (n - 1 - s)].norm()), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WStateVerdict {
    pub is_w_state: bool,
    pub spread: f64,
    pub w_distance: f64,
    pub fidelity: f64,
    pub t: f64,
}

impl WStateVerdict {
    pub fn from_parts(concurrences: &ConcurrenceMatrix, fidelity: f64, t: f64, tol: f64) -> Self {
        let spread = concurrences.spread();
        let w_distance = concurrences.w_distance();
        Self {
            is_w_state: spread < tol && w_distance < tol && fidelity > 1.0 - tol,
            spread,
            w_distance,
            fidelity,
            t,
        }
    }
}

/// W-state test on a full state via the general concurrence path.
pub fn detect_w_state(state: &StateVector, t: f64, tol: f64) -> Result<WStateVerdict> {
    check_tol(tol)?;
    let conc = pairwise_concurrence_matrix(state)?;
    Ok(WStateVerdict::from_parts(
        &conc,
        w_state_fidelity_of_state(state),
        t,
        tol,
    ))
}

/// W-state test on one-particle amplitudes via the shortcut.
pub fn detect_w_state_amplitudes(b: &OneParticleAmplitudes, tol: f64) -> Result<WStateVerdict> {
    check_tol(tol)?;
    let conc = one_particle_concurrence_matrix(b);
    Ok(WStateVerdict::from_parts(
        &conc,
        w_state_fidelity(b),
        b.t,
        tol,
    ))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Default tolerance for exact W-state detection.
pub const DEFAULT_W_TOL: f64 = EXACT_W;

/// Build a density matrix from a Hermitian matrix, checking the contract.
pub fn density_matrix(m: ComplexMatrix) -> Result<DensityMatrix> {
    if m.hermiticity_defect() > HERMITICITY {
        return Err(Error::NotHermitian {
            defect: m.hermiticity_defect(),
        });
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > NORMALIZATION {
        return Err(Error::NotNormalized { norm_sqr: tr.re });
    }
    let eig = hermitian_eig(&m)?;
    if eig.eigenvalues[0] < -PSD_CLAMP {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.eigenvalues[0],
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
