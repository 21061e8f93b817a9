//! Spin expectations, two-point correlators and one-particle probabilities,
//! evaluated in the full space with bit-mask operator application.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::model::OneParticleAmplitudes;

const IMAG_RESIDUE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::InvalidArgument(format!("unknown axis `{s}`"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableValue {
    pub name: String,
    pub t: f64,
    pub value: f64,
}

fn real_part(z: Complex64) -> f64 {
    debug_assert!(z.im.abs() < IMAG_RESIDUE, "imaginary residue {}", z.im);
    z.re
}

/// `⟨ψ|S^α_site|ψ⟩` with spin-1/2 operators in the bit-1-is-up basis, where
/// `S^x = σ_x/2`, `S^y = −σ_y/2` and `S^z = −σ_z/2` against the textbook matrices.
pub fn spin_expectation(state: &StateVector, site: usize, axis: Axis) -> Result<f64> {
    let mask = state.site_mask(site)?;
    let psi = state.amplitudes();
    let value = match axis {
        Axis::Z => Complex64::new(
            psi.iter()
                .enumerate()
                .map(|(k, a)| {
                    if k & mask != 0 {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum::<f64>(),
            0.0,
        ),
        Axis::X => psi
            .iter()
            .enumerate()
            .map(|(k, a)| psi[k ^ mask].conj() * a)
            .sum(),
        Axis::Y => psi
            .iter()
            .enumerate()
            .map(|(k, a)| {
                // With bit 1 = up, S^y = -σ_y/2: it takes |0⟩ to -i|1⟩ and |1⟩ to i|0⟩.
                let phase = if k & mask == 0 {
                    -Complex64::i()
                } else {
                    Complex64::i()
                };
                psi[k ^ mask].conj() * a * phase
            })
            .sum(),
    };
    Ok(0.5 * real_part(value))
}

/// `⟨ψ|S^α_i S^α_j|ψ⟩`.
pub fn two_point_correlator(state: &StateVector, i: usize, j: usize, axis: Axis) -> Result<f64> {
    let mi = state.site_mask(i)?;
    let mj = state.site_mask(j)?;
    if i == j {
        return Err(Error::DuplicateIndex(i));
    }
    let both = mi | mj;
    let psi = state.amplitudes();
    let value = match axis {
        Axis::Z => Complex64::new(
            psi.iter()
                .enumerate()
                .map(|(k, a)| {
                    let aligned = (k & mi == 0) == (k & mj == 0);
                    if aligned {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum::<f64>(),
            0.0,
        ),
        Axis::X => psi
            .iter()
            .enumerate()
            .map(|(k, a)| psi[k ^ both].conj() * a)
            .sum(),
        Axis::Y => psi
            .iter()
            .enumerate()
            .map(|(k, a)| {
                // i·i = (−i)(−i) = −1 when both bits agree, +1 otherwise
                let aligned = (k & mi == 0) == (k & mj == 0);
                let sign = if aligned { -1.0 } else { 1.0 };
                psi[k ^ both].conj() * a * sign
            })
            .sum(),
    };
    Ok(0.25 * real_part(value))
}

/// `Pᵢ = |bᵢ|²`.
pub fn one_particle_probabilities(b: &OneParticleAmplitudes) -> Vec<f64> {
    b.amplitudes().iter().map(|z| z.norm_sqr()).collect()
}

/// `Σᵢ ⟨S^z_i⟩`.
pub fn total_magnetization(state: &StateVector) -> f64 {
    let n = state.qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let up = k.count_ones() as f64;
            0.5 * (2.0 * up - n as f64) * a.norm_sqr()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::evolution::cops_amplitudes_closed_form;
    use crate::linalg::{pauli, site_operator, ComplexMatrix};
    use crate::model::{embed_one_particle, StarModel};

    fn embed(b: &OneParticleAmplitudes) -> StateVector {
        embed_one_particle(b, &StarModel::new(b.len() - 1, 1.0).unwrap()).unwrap()
    }

    /// Spin operators on (|0⟩, |1⟩) = (down, up).
    fn axis_op(axis: Axis) -> ComplexMatrix {
        let (m, s) = match axis {
            Axis::X => (pauli::x(), 0.5),
            Axis::Y => (pauli::y(), -0.5),
            Axis::Z => (pauli::z(), -0.5),
        };
        m.scale(Complex64::new(s, 0.0))
    }

    /// Dense-operator reference for the bit-mask kernels.
    fn dense_expectation(state: &StateVector, op: &ComplexMatrix) -> Complex64 {
        let v = op.mul_vec(state.amplitudes()).unwrap();
        state
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    #[test]
    fn masks_match_dense_operators() {
        let amps: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let s = StateVector::new(amps.into_iter().map(|z| z / norm).collect()).unwrap();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for site in 0..3 {
                let op = site_operator(&axis_op(axis), site, 3).unwrap();
                let want = dense_expectation(&s, &op).re;
                assert!((spin_expectation(&s, site, axis).unwrap() - want).abs() < 1e-14);
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2), (2, 0)] {
                let op = site_operator(&axis_op(axis), i, 3)
                    .unwrap()
                    .matmul(&site_operator(&axis_op(axis), j, 3).unwrap())
                    .unwrap();
                let want = dense_expectation(&s, &op).re;
                assert!((two_point_correlator(&s, i, j, axis).unwrap() - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cops_expectations() {
        let s0 = embed(&cops_amplitudes_closed_form(0.0));
        assert_eq!(spin_expectation(&s0, 0, Axis::Z).unwrap(), 0.5);
        assert_eq!(two_point_correlator(&s0, 0, 2, Axis::Z).unwrap(), -0.25);

        let tws = embed(&cops_amplitudes_closed_form(PI / 2.0));
        for site in 0..4 {
            assert!((spin_expectation(&tws, site, Axis::Z).unwrap() + 0.25).abs() < 1e-15);
            assert!(spin_expectation(&tws, site, Axis::X).unwrap().abs() < 1e-15);
            assert!(spin_expectation(&tws, site, Axis::Y).unwrap().abs() < 1e-15);
        }
        assert!((two_point_correlator(&tws, 0, 1, Axis::X).unwrap() + 0.125).abs() < 1e-15);
        assert!((two_point_correlator(&tws, 1, 2, Axis::X).unwrap() - 0.125).abs() < 1e-15);
        assert!(two_point_correlator(&tws, 0, 3, Axis::Z).unwrap().abs() < 1e-15);
        assert!(two_point_correlator(&tws, 1, 3, Axis::Z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn probabilities() {
        let p = one_particle_probabilities(&cops_amplitudes_closed_form(PI / 2.0));
        assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        let p = one_particle_probabilities(&cops_amplitudes_closed_form(PI));
        assert!((p[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn magnetization() {
        assert_eq!(
            total_magnetization(&StateVector::basis(4, 0).unwrap()),
            -2.0
        );
        let s = embed(&cops_amplitudes_closed_form(0.8));
        assert!((total_magnetization(&s) + 1.0).abs() < 1e-12);
        let b = OneParticleAmplitudes::localized(6, 2).unwrap();
        assert!((total_magnetization(&embed(&b)) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn index_errors() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(spin_expectation(&s, 2, Axis::Z).is_err());
        assert!(two_point_correlator(&s, 0, 0, Axis::X).is_err());
        assert!("w".parse::<Axis>().is_err());
    }
}
