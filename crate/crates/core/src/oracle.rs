//! Brute-force reference computations used to cross-check the fast paths:
//! full-space evolution against the one-particle sector, and the concurrence
//! shortcut against the general Wootters route.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{one_particle_concurrence_matrix, pairwise_concurrence_matrix};
use crate::error::{Error, Result};
use crate::evolution::SectorDynamics;
use crate::linalg::{expm_multiply_series, matrix_exp_series};
use crate::model::{
    build_full_hamiltonian, embed_one_particle, project_one_particle, OneParticleAmplitudes,
    StarModel,
};

pub const DEFAULT_SEED: u64 = 0x5eed_57a2;
pub const FULL_VS_SECTOR_TOL: f64 = 1e-9;
pub const CONCURRENCE_TOL: f64 = 1e-10;
/// Largest ligand count the full-space oracle accepts.
pub const MAX_ORACLE_LIGANDS: usize = 8;
/// Above this dimension the oracle applies the series to the vector instead of forming exp(-iHt).
const DENSE_EXP_DIM: usize = 64;
const SERIES_TOL: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl OracleReport {
    pub fn new(
        check: impl Into<String>,
        max_deviation: f64,
        tolerance: f64,
        samples: usize,
    ) -> Self {
        Self {
            check: check.into(),
            max_deviation,
            tolerance,
            samples,
            pass: max_deviation < tolerance,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Evolve `initial` in the full 2^(L+1) space with a Taylor-series exponential
/// and compare with sector propagation at each sample time.
///
/// The deviation is the larger of the entrywise amplitude difference and the
/// weight leaked out of the one-particle sector.
pub fn oracle_full_vs_sector(
    model: &StarModel,
    initial: &OneParticleAmplitudes,
    t_samples: &[f64],
) -> Result<OracleReport> {
    if model.ligand_count() > MAX_ORACLE_LIGANDS {
        return Err(Error::InvalidArgument(format!(
            "full-space oracle supports at most {MAX_ORACLE_LIGANDS} ligands, got {}",
            model.ligand_count()
        )));
    }
    let h = build_full_hamiltonian(model)?;
    let sector = SectorDynamics::new(model)?;
    let psi0 = embed_one_particle(initial, model)?;
    let deviations: Vec<f64> = t_samples
        .par_iter()
        .map(|&t| {
            let scale = Complex64::new(0.0, -t);
            let full = if h.rows() <= DENSE_EXP_DIM {
                matrix_exp_series(&h, scale, SERIES_TOL)?.mul_vec(psi0.amplitudes())?
            } else {
                expm_multiply_series(&h, scale, psi0.amplitudes(), SERIES_TOL)?
            };
            let full = crate::linalg::StateVector::new(full)?;
            let (projected, leakage) = project_one_particle(&full, model)?;
            let reduced = sector.evolve(initial, t)?;
            let amp_dev = projected
                .iter()
                .zip(reduced.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            Ok(amp_dev.max(leakage))
        })
        .collect::<Result<_>>()?;
    let max = deviations.into_iter().fold(0.0, f64::max);
    Ok(OracleReport::new(
        format!("full-vs-sector L={}", model.ligand_count()),
        max,
        FULL_VS_SECTOR_TOL,
        t_samples.len(),
    ))
}

fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Shortcut `2|bᵢbⱼ|` against partial trace + Wootters for every pair of
/// `trials` seeded random one-particle states, plus the localized and W cases.
pub fn oracle_concurrence_exhaustive(
    trials: usize,
    seed: u64,
    ligands: usize,
) -> Result<OracleReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let model = StarModel::new(ligands, 1.0)?;
    let n = model.qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![
        OneParticleAmplitudes::localized(n, 0)?
            .amplitudes()
            .to_vec(),
        w_amplitudes(n),
    ];
    cases.extend((0..trials).map(|_| random_amplitudes(&mut rng, n)));
    let deviations: Vec<f64> = cases
        .into_par_iter()
        .map(|amps| {
            let b = OneParticleAmplitudes::new(amps, 0.0)?;
            let general = pairwise_concurrence_matrix(&embed_one_particle(&b, &model)?)?;
            let shortcut = one_particle_concurrence_matrix(&b);
            Ok(general
                .pairs()
                .map(|(i, j, c)| (c - shortcut.get(i, j)).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let max = deviations.into_iter().fold(0.0, f64::max);
    Ok(OracleReport::new(
        format!("concurrence shortcut L={ligands}"),
        max,
        CONCURRENCE_TOL,
        trials + 2,
    )
    .with_seed(seed))
}

/// Equal-modulus amplitudes with the central sign flipped against the ligands.
pub fn w_amplitudes(n: usize) -> Vec<Complex64> {
    let a = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| Complex64::new(if k == 0 { a } else { -a }, 0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::entanglement::wootters_concurrence;
    use crate::linalg::partial_trace;

    fn samples(n: usize, t_max: f64) -> Vec<f64> {
        (0..n)
            .map(|k| t_max * k as f64 / (n - 1).max(1) as f64)
            .collect()
    }

    #[test]
    fn full_vs_sector_cops() {
        let m = StarModel::default();
        let b = OneParticleAmplitudes::localized(4, 0).unwrap();
        let r = oracle_full_vs_sector(&m, &b, &samples(64, 4.0 * PI)).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.samples, 64);
    }

    #[test]
    fn full_vs_sector_single_ligand() {
        let m = StarModel::new(1, 1.0).unwrap();
        let b = OneParticleAmplitudes::localized(2, 1).unwrap();
        let r = oracle_full_vs_sector(&m, &b, &samples(16, 4.0 * PI)).unwrap();
        assert!(r.max_deviation < 1e-10, "{r:?}");
    }

    #[test]
    fn full_vs_sector_at_zero() {
        let m = StarModel::default();
        let b = OneParticleAmplitudes::localized(4, 3).unwrap();
        let r = oracle_full_vs_sector(&m, &b, &[0.0]).unwrap();
        assert!(r.max_deviation < 1e-15);
    }

    #[test]
    fn full_vs_sector_rejects_large() {
        let m = StarModel::new(9, 1.0).unwrap();
        let b = OneParticleAmplitudes::localized(10, 0).unwrap();
        assert!(oracle_full_vs_sector(&m, &b, &[0.0]).is_err());
    }

    #[test]
    fn concurrence_oracle() {
        let r = oracle_concurrence_exhaustive(1000, DEFAULT_SEED, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.seed, Some(DEFAULT_SEED));
        assert!(oracle_concurrence_exhaustive(0, 1, 3).is_err());
    }

    #[test]
    fn fixed_cases() {
        let m = StarModel::default();
        let w = OneParticleAmplitudes::new(w_amplitudes(4), 0.0).unwrap();
        let s = embed_one_particle(&w, &m).unwrap();
        let c = wootters_concurrence(&partial_trace(&s, (0, 2)).unwrap()).unwrap();
        assert!((c - 0.5).abs() < 1e-12);
        let loc = OneParticleAmplitudes::localized(4, 0).unwrap();
        let s = embed_one_particle(&loc, &m).unwrap();
        assert!(wootters_concurrence(&partial_trace(&s, (0, 1)).unwrap()).unwrap() < 1e-12);
    }
}
