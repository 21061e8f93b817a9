//! Time evolution `U(t) = exp(-iHt)` (ħ = 1), numerically through a cached
//! eigendecomposition and in closed form for the three-ligand star.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, EigenDecomposition, StateVector};
use crate::model::{build_sector_hamiltonian, OneParticleAmplitudes, StarModel, HBAR};
use crate::tolerances::NORMALIZATION;

/// Spectral propagator; immutable once built, so it can be shared across threads.
#[derive(Debug, Clone)]
pub struct Propagator {
    decomposition: EigenDecomposition,
}

impl Propagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        Ok(Self::from_decomposition(hermitian_eig(h)?))
    }

    pub fn from_decomposition(decomposition: EigenDecomposition) -> Self {
        Self { decomposition }
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    /// Materialize `U(t) = V e^{-iΛt} V†`.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        self.decomposition
            .reconstruct_with(|e| Complex64::from_polar(1.0, -e * t / HBAR))
    }

    /// `V e^{-iΛt} V† ψ` in O(d²).
    pub fn apply(&self, psi: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: psi.len(),
            });
        }
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        let v = &self.decomposition.eigenvectors;
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| {
                let overlap: Complex64 = (0..n).map(|i| v[(i, k)].conj() * psi[i]).sum();
                overlap * Complex64::from_polar(1.0, -self.decomposition.eigenvalues[k] * t / HBAR)
            })
            .collect();
        Ok((0..n)
            .map(|i| (0..n).map(|k| v[(i, k)] * coeffs[k]).sum())
            .collect())
    }
}

/// Evolve a normalized full-space state.
pub fn propagate(p: &Propagator, state: &StateVector, t: f64) -> Result<StateVector> {
    state.ensure_normalized(NORMALIZATION)?;
    StateVector::new(p.apply(state.amplitudes(), t)?)
}

/// Propagator for the one-particle sector of a star model.
#[derive(Debug, Clone)]
pub struct SectorDynamics {
    model: StarModel,
    propagator: Propagator,
}

impl SectorDynamics {
    pub fn new(model: &StarModel) -> Result<Self> {
        Ok(Self {
            model: *model,
            propagator: Propagator::new(&build_sector_hamiltonian(model))?,
        })
    }

    pub fn model(&self) -> &StarModel {
        &self.model
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    /// Amplitudes at time `t` starting from `initial` at t = 0.
    pub fn evolve(&self, initial: &OneParticleAmplitudes, t: f64) -> Result<OneParticleAmplitudes> {
        let amps = self.propagator.apply(initial.amplitudes(), t)?;
        // Propagation is unitary; recheck with a slightly looser bound than the input.
        OneParticleAmplitudes::with_tolerance(amps, t, 10.0 * NORMALIZATION)
    }
}

fn phase(omega: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, omega * t)
}

/// Closed-form amplitudes of the three-ligand star (J = 1) starting from the
/// central excitation |1000⟩.
pub fn cops_amplitudes_closed_form(t: f64) -> OneParticleAmplitudes {
    let slow = phase(-0.75, t);
    let fast = phase(1.25, t);
    let central = 0.25 * slow + 0.75 * fast;
    let ligand = 0.25 * slow - 0.25 * fast;
    OneParticleAmplitudes::with_tolerance(vec![central, ligand, ligand, ligand], t, 1e-12)
        .expect("closed form is normalized")
}

/// Closed-form amplitudes of the three-ligand star (J = 1) starting from a
/// single excited ligand `excited_ligand ∈ {1, 2, 3}`.
pub fn lops_amplitudes_closed_form(t: f64, excited_ligand: usize) -> Result<OneParticleAmplitudes> {
    if !(1..=3).contains(&excited_ligand) {
        return Err(Error::IndexOutOfRange {
            index: excited_ligand,
            len: 4,
        });
    }
    let e1 = phase(-0.25, t);
    let e3 = phase(-0.75, t);
    let e5 = phase(1.25, t);
    let central = 0.25 * e3 - 0.25 * e5;
    let excited = (2.0 / 3.0) * e1 + 0.25 * e3 + (1.0 / 12.0) * e5;
    let other = -(1.0 / 3.0) * e1 + 0.25 * e3 + (1.0 / 12.0) * e5;
    let mut amps = vec![central, other, other, other];
    amps[excited_ligand] = excited;
    OneParticleAmplitudes::with_tolerance(amps, t, 1e-12)
}
