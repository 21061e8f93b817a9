//! Verification suite: every closed form against the numeric pipeline, plus
//! model-independent invariants that hold for any ligand count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::one_particle_concurrence_matrix;
use crate::error::Result;
use crate::evolution::{cops_amplitudes_closed_form, lops_amplitudes_closed_form};
use crate::linalg::ComplexMatrix;
use crate::model::{build_sector_hamiltonian, StarModel};
use crate::observables::{spin_expectation, total_magnetization, two_point_correlator, Axis};
use crate::oracle::{
    oracle_concurrence_exhaustive, oracle_full_vs_sector, OracleReport, DEFAULT_SEED,
};
use crate::tolerances::CLOSED_FORM;

use super::closed_form::ClosedFormCatalog;
use super::scenario::{Scenario, ScenarioKind, Trajectory};
use super::series::{scan_trajectory, uniform_grid};

pub const DEFAULT_STEPS: usize = 4001;
pub const DEFAULT_T_MAX: f64 = 4.0 * PI;
/// Grid used by the model-independent invariants.
const INVARIANT_STEPS: usize = 401;
const NORM_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-12;
const SHORTCUT_TOL: f64 = 1e-10;
const MIRROR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Threshold for closed-form rows; invariants keep their own.
    pub tolerance: f64,
    pub steps: usize,
    pub t_max: f64,
    /// Also run the brute-force oracles.
    pub deep: bool,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: CLOSED_FORM,
            steps: DEFAULT_STEPS,
            t_max: DEFAULT_T_MAX,
            deep: false,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<OracleReport>,
    pub notices: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleReport> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, check: &str) -> Option<&OracleReport> {
        self.checks.iter().find(|c| c.check == check)
    }
}

pub fn verify(model: &StarModel, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    if model.ligand_count() == 3 {
        report.checks.extend(closed_form_checks(model, opts)?);
    } else {
        report.notices.push(format!(
            "closed-form checks skipped: L=3 only (model has L={})",
            model.ligand_count()
        ));
    }
    report.checks.extend(generic_invariants(model)?);
    if opts.deep {
        report.checks.extend(deep_checks(model, opts.seed)?);
    }
    Ok(report)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn scenario_for(kind: ScenarioKind, model: &StarModel) -> Scenario {
    match kind {
        ScenarioKind::Lops => Scenario::lops_last(model),
        _ => Scenario::Cops,
    }
}

/// Each registered closed form against the scan column of the same name, with
/// time rescaled by J; complex amplitudes entrywise; the two mirror identities.
pub fn closed_form_checks(model: &StarModel, opts: &VerifyOptions) -> Result<Vec<OracleReport>> {
    let grid = uniform_grid(opts.t_max, opts.steps)?;
    let j = model.coupling();
    let catalog = ClosedFormCatalog::global();
    let mut out = Vec::new();
    for kind in [ScenarioKind::Cops, ScenarioKind::Lops] {
        let scenario = scenario_for(kind, model);
        let traj = Trajectory::new(model, &scenario)?;
        let forms: Vec<_> = catalog.for_scenario(kind).collect();
        let names: Vec<String> = forms.iter().map(|f| f.id().to_string()).collect();
        let series = scan_trajectory(&traj, &grid, &names)?;
        for f in &forms {
            let numeric = series.column(f.id()).expect("scanned");
            let exact: Vec<f64> = grid.iter().map(|&t| f.eval(j * t)).collect();
            out.push(OracleReport::new(
                format!("{kind}/{}", f.id()),
                max_abs_diff(numeric, &exact),
                opts.tolerance,
                grid.len(),
            ));
        }
        let amp_dev = grid
            .par_iter()
            .map(|&t| {
                let numeric = traj.amplitudes(t)?;
                let exact = match kind {
                    ScenarioKind::Lops => lops_amplitudes_closed_form(j * t, model.ligand_count())?,
                    _ => cops_amplitudes_closed_form(j * t),
                };
                Ok(numeric
                    .amplitudes()
                    .iter()
                    .zip(exact.amplitudes())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(OracleReport::new(
            format!("{kind}/amplitudes"),
            amp_dev,
            opts.tolerance,
            grid.len(),
        ));
        if kind == ScenarioKind::Lops {
            let col = |n: &str| series.column(n).expect("scanned").to_vec();
            let neg = |v: Vec<f64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            out.push(OracleReport::new(
                "lops/mirror szsz_ul_nul=-szsz_cp_nul",
                max_abs_diff(&col("szsz_ul_nul"), &neg(col("szsz_cp_nul"))),
                MIRROR_TOL,
                grid.len(),
            ));
            out.push(OracleReport::new(
                "lops/mirror szsz_nul_nul=-szsz_cp_ul",
                max_abs_diff(&col("szsz_nul_nul"), &neg(col("szsz_cp_ul"))),
                MIRROR_TOL,
                grid.len(),
            ));
        }
    }
    Ok(out)
}

#[derive(Default, Clone, Copy)]
struct PointDeviations {
    norm: f64,
    magnetization: f64,
    sz_vs_p: f64,
    shortcut: f64,
    xx_yy: f64,
}

impl PointDeviations {
    fn max(self, o: Self) -> Self {
        Self {
            norm: self.norm.max(o.norm),
            magnetization: self.magnetization.max(o.magnetization),
            sz_vs_p: self.sz_vs_p.max(o.sz_vs_p),
            shortcut: self.shortcut.max(o.shortcut),
            xx_yy: self.xx_yy.max(o.xx_yy),
        }
    }
}

fn point_deviations(traj: &Trajectory, t: f64) -> Result<PointDeviations> {
    let snap = traj.snapshot(t)?;
    let n = snap.state.qubits();
    let mut d = PointDeviations {
        norm: (snap.state.norm_sqr().sqrt() - 1.0).abs(),
        magnetization: (total_magnetization(&snap.state) - (1.0 - n as f64 / 2.0)).abs(),
        ..Default::default()
    };
    for s in 0..n {
        let p = snap.amplitudes.get(s)?.norm_sqr();
        let sz = spin_expectation(&snap.state, s, Axis::Z)?;
        d.sz_vs_p = d.sz_vs_p.max((sz - (p - 0.5)).abs());
    }
    let shortcut = one_particle_concurrence_matrix(&snap.amplitudes);
    for (i, j, c) in snap.concurrences()?.pairs() {
        d.shortcut = d.shortcut.max((c - shortcut.get(i, j)).abs());
        let xx = two_point_correlator(&snap.state, i, j, Axis::X)?;
        let yy = two_point_correlator(&snap.state, i, j, Axis::Y)?;
        d.xx_yy = d.xx_yy.max((xx - yy).abs());
    }
    Ok(d)
}

/// Largest entry change of the sector Hamiltonian under swapping any two ligands.
pub fn permutation_defect(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut worst: f64 = 0.0;
    for a in 1..n {
        for b in a + 1..n {
            let p = |k: usize| {
                if k == a {
                    b
                } else if k == b {
                    a
                } else {
                    k
                }
            };
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((h[(p(i), p(j))] - h[(i, j)]).norm());
                }
            }
        }
    }
    worst
}

/// Invariants that hold for any ligand count, on COPS and last-ligand LOPS.
pub fn generic_invariants(model: &StarModel) -> Result<Vec<OracleReport>> {
    let grid = uniform_grid(DEFAULT_T_MAX, INVARIANT_STEPS)?;
    let mut out = Vec::new();
    let h = build_sector_hamiltonian(model);
    // Exact equality required: any nonzero defect fails.
    out.push(OracleReport::new(
        "permutation symmetry",
        permutation_defect(&h),
        f64::MIN_POSITIVE,
        1,
    ));

    for kind in [ScenarioKind::Cops, ScenarioKind::Lops] {
        let traj = Trajectory::new(model, &scenario_for(kind, model))?;
        let d = grid
            .par_iter()
            .map(|&t| point_deviations(&traj, t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(PointDeviations::default(), PointDeviations::max);
        let samples = grid.len();
        out.push(OracleReport::new(
            format!("{kind}/norm"),
            d.norm,
            NORM_TOL,
            samples,
        ));
        out.push(OracleReport::new(
            format!("{kind}/magnetization"),
            d.magnetization,
            NORM_TOL,
            samples,
        ));
        out.push(OracleReport::new(
            format!("{kind}/sz=p-1/2"),
            d.sz_vs_p,
            IDENTITY_TOL,
            samples,
        ));
        out.push(OracleReport::new(
            format!("{kind}/shortcut"),
            d.shortcut,
            SHORTCUT_TOL,
            samples,
        ));
        out.push(OracleReport::new(
            format!("{kind}/xx=yy"),
            d.xx_yy,
            IDENTITY_TOL,
            samples,
        ));
    }

    let dynamics = crate::evolution::SectorDynamics::new(model)?;
    let unitarity = [0.3, 1.0, PI, 7.5, 4.0 * PI]
        .iter()
        .map(|&t| {
            let u = dynamics.propagator().unitary(t);
            let id = ComplexMatrix::identity(u.rows());
            u.adjoint()
                .matmul(&u)
                .and_then(|p| p.sub(&id))
                .map(|m| m.max_abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(OracleReport::new("unitarity", unitarity, NORM_TOL, 5));
    Ok(out)
}

fn deep_checks(model: &StarModel, seed: u64) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    if model.ligand_count() <= crate::oracle::MAX_ORACLE_LIGANDS {
        // The vector series is O(d²) per term; keep the sample count modest at large d.
        let n = if model.qubits() <= 6 { 64 } else { 8 };
        let samples: Vec<f64> = (0..n)
            .map(|k| DEFAULT_T_MAX * k as f64 / (n - 1) as f64)
            .collect();
        for kind in [ScenarioKind::Cops, ScenarioKind::Lops] {
            let initial = scenario_for(kind, model).initial(model)?;
            let mut r = oracle_full_vs_sector(model, &initial, &samples)?;
            r.check = format!("{kind}/{}", r.check);
            out.push(r);
        }
    }
    out.push(oracle_concurrence_exhaustive(
        1000,
        seed,
        model.ligand_count(),
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_three_ligand_run_passes() {
        let report = verify(&StarModel::default(), &VerifyOptions::default()).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(report.get("cops/c_ucp_l").is_some());
        assert!(report.get("lops/amplitudes").is_some());
        assert!(report.notices.is_empty());
    }

    #[test]
    fn coupling_rescales_time() {
        let model = StarModel::new(3, 2.5).unwrap();
        let opts = VerifyOptions {
            steps: 401,
            ..Default::default()
        };
        let report = verify(&model, &opts).unwrap();
        assert!(
            report.passed(),
            "{:#?}",
            report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn impossible_tolerance_fails_with_diagnostics() {
        let opts = VerifyOptions {
            tolerance: 1e-15,
            steps: 201,
            ..Default::default()
        };
        let report = verify(&StarModel::default(), &opts).unwrap();
        assert!(!report.passed());
        assert!(report.failures().all(|f| f.max_deviation >= 1e-15));
    }

    #[test]
    fn other_ligand_counts_skip_closed_forms() {
        let report = verify(&StarModel::new(5, 1.0).unwrap(), &VerifyOptions::default()).unwrap();
        assert_eq!(report.notices.len(), 1);
        assert!(report.notices[0].contains("L=3 only"));
        assert!(report.get("cops/c_ucp_l").is_none());
        assert!(
            report.passed(),
            "{:#?}",
            report.failures().collect::<Vec<_>>()
        );
    }
}
