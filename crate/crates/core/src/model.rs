//! Spin-star network description and its Heisenberg Hamiltonian.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::tolerances::{Tolerances, NORMALIZATION};

/// Reduced Planck constant; time is measured in units of 1/J.
pub const HBAR: f64 = 1.0;

/// Central spin-1/2 (site 0) coupled to `ligand_count` outer spins (sites 1..=L)
/// through isotropic exchange `J S₀·Sₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarModel {
    ligand_count: usize,
    coupling: f64,
}

impl Default for StarModel {
    fn default() -> Self {
        Self {
            ligand_count: 3,
            coupling: 1.0,
        }
    }
}

impl StarModel {
    pub fn new(ligand_count: usize, coupling: f64) -> Result<Self> {
        if ligand_count == 0 {
            return Err(Error::InvalidArgument(
                "ligand_count must be at least 1".into(),
            ));
        }
        if !coupling.is_finite() || coupling == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "coupling must be finite and nonzero, got {coupling}"
            )));
        }
        Ok(Self {
            ligand_count,
            coupling,
        })
    }

    pub fn ligand_count(&self) -> usize {
        self.ligand_count
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Total number of spins, central included.
    pub fn qubits(&self) -> usize {
        self.ligand_count + 1
    }

    pub fn full_dim(&self) -> usize {
        1 << self.qubits()
    }

    /// Basis index of the state with a single up spin on `site`.
    pub fn one_particle_index(&self, site: usize) -> usize {
        1 << (self.qubits() - 1 - site)
    }

    /// Parse `key = value` lines (`ligand_count`, `coupling`); `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut model = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("line {}: expected key=value", lineno + 1))
            })?;
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidArgument(format!("line {}: invalid {what} `{value}`", lineno + 1))
            };
            match key.trim() {
                "ligand_count" => {
                    model.ligand_count = value.parse().map_err(|_| bad("ligand_count"))?
                }
                "coupling" => model.coupling = value.parse().map_err(|_| bad("coupling"))?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(model.ligand_count, model.coupling)
    }
}

/// Occupation bits of a computational basis state, site 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisLabel(Vec<bool>);

impl BasisLabel {
    pub fn from_index(index: usize, qubits: usize) -> Result<Self> {
        if qubits >= usize::BITS as usize || index >= 1 << qubits {
            return Err(Error::IndexOutOfRange {
                index,
                len: 1usize.checked_shl(qubits as u32).unwrap_or(usize::MAX),
            });
        }
        Ok(Self(
            (0..qubits)
                .map(|s| index >> (qubits - 1 - s) & 1 == 1)
                .collect(),
        ))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches('|')
            .trim_end_matches('⟩')
            .trim_end_matches('>');
        inner
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("bad basis label `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str("⟩")
    }
}

/// Coefficients `b_i(t)` of a state in the one-particle sector; index 0 is the
/// central excitation, `1..=L` the ligand excitations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneParticleAmplitudes {
    pub t: f64,
    amplitudes: Vec<Complex64>,
}

impl OneParticleAmplitudes {
    pub fn new(amplitudes: Vec<Complex64>, t: f64) -> Result<Self> {
        Self::with_tolerance(amplitudes, t, NORMALIZATION)
    }

    pub fn with_tolerance(amplitudes: Vec<Complex64>, t: f64, tol: f64) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidArgument(
                "need at least two one-particle amplitudes".into(),
            ));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { t, amplitudes })
    }

    /// All weight on one site at t = 0.
    pub fn localized(sites: usize, site: usize) -> Result<Self> {
        if site >= sites {
            return Err(Error::IndexOutOfRange {
                index: site,
                len: sites,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); sites];
        amps[site] = Complex64::new(1.0, 0.0);
        Self::new(amps, 0.0)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn get(&self, site: usize) -> Result<Complex64> {
        self.amplitudes
            .get(site)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: site,
                len: self.amplitudes.len(),
            })
    }
}

fn check_caps(m: &StarModel, tol: &Tolerances) -> Result<()> {
    if m.qubits() > tol.max_qubits {
        return Err(Error::QubitCap {
            qubits: m.qubits(),
            cap: tol.max_qubits,
        });
    }
    Ok(())
}

/// `H = J Σₙ S₀·Sₙ` on the full 2^(L+1)-dimensional space.
pub fn build_full_hamiltonian(m: &StarModel) -> Result<ComplexMatrix> {
    build_full_hamiltonian_with(m, &Tolerances::from_env())
}

pub fn build_full_hamiltonian_with(m: &StarModel, tol: &Tolerances) -> Result<ComplexMatrix> {
    check_caps(m, tol)?;
    let dim = m.full_dim();
    let entries = (dim as u128) * (dim as u128);
    if entries > tol.max_matrix_entries as u128 {
        return Err(Error::SizeCap {
            entries,
            cap: tol.max_matrix_entries,
        });
    }
    let j = m.coupling();
    let central = m.one_particle_index(0);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for k in 0..dim {
        let c_up = k & central != 0;
        for site in 1..=m.ligand_count() {
            let mask = m.one_particle_index(site);
            let l_up = k & mask != 0;
            if c_up == l_up {
                h[(k, k)].re += 0.25 * j;
            } else {
                h[(k, k)].re -= 0.25 * j;
                // S⁺S⁻ + S⁻S⁺ flip-flop: J/2
                h[(k ^ (central | mask), k)].re += 0.5 * j;
            }
        }
    }
    Ok(h)
}

/// The Hamiltonian restricted to the one-particle sector, `(L+1)×(L+1)`.
pub fn build_sector_hamiltonian(m: &StarModel) -> ComplexMatrix {
    let l = m.ligand_count();
    let j = m.coupling();
    let n = l + 1;
    let mut h = ComplexMatrix::zeros(n, n);
    h[(0, 0)] = Complex64::new(-(l as f64) * j / 4.0, 0.0);
    for site in 1..n {
        h[(site, site)] = Complex64::new((l as f64 - 2.0) * j / 4.0, 0.0);
        h[(0, site)] = Complex64::new(j / 2.0, 0.0);
        h[(site, 0)] = Complex64::new(j / 2.0, 0.0);
    }
    h
}

/// Place one-particle amplitudes into the full computational basis.
pub fn embed_one_particle(b: &OneParticleAmplitudes, m: &StarModel) -> Result<StateVector> {
    if b.len() != m.qubits() {
        return Err(Error::DimensionMismatch {
            expected: m.qubits(),
            got: b.len(),
        });
    }
    let tol = Tolerances::from_env();
    check_caps(m, &tol)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); m.full_dim()];
    for (site, &a) in b.amplitudes().iter().enumerate() {
        amps[m.one_particle_index(site)] = a;
    }
    StateVector::new(amps)
}

/// Read the one-particle components back out of a full state.
/// Returns the amplitudes (unnormalized) and the norm of what lies outside the sector.
pub fn project_one_particle(state: &StateVector, m: &StarModel) -> Result<(Vec<Complex64>, f64)> {
    if state.qubits() != m.qubits() {
        return Err(Error::DimensionMismatch {
            expected: m.qubits(),
            got: state.qubits(),
        });
    }
    let amps = state.amplitudes();
    let inside: Vec<Complex64> = (0..m.qubits())
        .map(|s| amps[m.one_particle_index(s)])
        .collect();
    let outside: f64 = amps
        .iter()
        .enumerate()
        .filter(|(k, _)| k.count_ones() != 1)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let leakage = outside.sqrt();
    Ok((inside, leakage))
}
