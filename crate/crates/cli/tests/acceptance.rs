//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Every criterion is evaluated at its stated tolerance. Criteria listed in
//! `KNOWN_FAILURES` are expected to fail and are documented in the decision
//! ledger; the gate fails if any other criterion fails, or if a known failure
//! starts passing (so the list cannot go stale).

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use spinstar_cli::{cmd_evolve, Format, RunConfig};
use spinstar_core::analysis::{
    approx_cops_peak_times, closed_form_checks, closest_approach_offset, find_zero_offset_fn,
    generic_invariants, tws_times, uniform_grid, DetectorContext, DetectorRegistry, EventList,
    PairRole, Scenario, Trajectory, VerifyOptions,
};
use spinstar_core::model::StarModel;
use spinstar_core::observables::{
    spin_expectation, total_magnetization, two_point_correlator, Axis,
};
use spinstar_core::oracle::{
    oracle_concurrence_exhaustive, oracle_full_vs_sector, OracleReport, DEFAULT_SEED,
};

/// Criteria that fail at their stated tolerance; see the ledger for why.
const KNOWN_FAILURES: &[u8] = &[4, 8];

const GRID_STEPS: usize = 4001;
const T_MAX: f64 = 4.0 * PI;
const CLOSED_FORM_TOL: f64 = 1e-9;
/// Half-width of the search window around 14π/9 for the correlator zeros.
const ZERO_WINDOW: f64 = 0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Result<Outcome, String>;

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome, String> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn grid() -> Vec<f64> {
    uniform_grid(T_MAX, GRID_STEPS).expect("valid grid")
}

fn lops() -> Scenario {
    Scenario::lops_last(&StarModel::default())
}

fn detect(scenario: &Scenario, detector: &str) -> Result<EventList, String> {
    let traj = Trajectory::new(&StarModel::default(), scenario).map_err(err)?;
    let g = grid();
    let ctx = DetectorContext::new(&traj, &g);
    DetectorRegistry::global()
        .run(&[detector.to_string()], &ctx)
        .map_err(err)
}

fn summarize(rows: &[OracleReport]) -> (bool, String) {
    let worst = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    let mut detail = format!("{} checks, worst deviation {worst:.3e}", rows.len());
    if !failed.is_empty() {
        let _ = write!(detail, ", failed: {}", failed.join(", "));
    }
    (failed.is_empty(), detail)
}

fn closed_form_rows(prefix: &str) -> Result<(Vec<OracleReport>, f64), String> {
    let opts = VerifyOptions {
        tolerance: CLOSED_FORM_TOL,
        steps: GRID_STEPS,
        t_max: T_MAX,
        ..Default::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(err)?;
    let start = Instant::now();
    let rows = pool
        .install(|| closed_form_checks(&StarModel::default(), &opts))
        .map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok((
        rows.into_iter()
            .filter(|r| r.check.starts_with(prefix))
            .collect(),
        elapsed,
    ))
}

fn c1_cops_closed_forms() -> Result<Outcome, String> {
    let (rows, elapsed) = closed_form_rows("cops/")?;
    let (ok, detail) = summarize(&rows);
    outcome(
        ok && elapsed < 5.0,
        format!("{detail}; single-threaded run {elapsed:.2} s (limit 5 s)"),
    )
}

fn c2_lops_closed_forms() -> Result<Outcome, String> {
    let (rows, _) = closed_form_rows("lops/")?;
    let (ok, detail) = summarize(&rows);
    outcome(
        ok && rows.iter().any(|r| r.check == "lops/amplitudes"),
        detail,
    )
}

fn c3_w_state_generation() -> Result<Outcome, String> {
    let events = detect(&Scenario::Cops, "tws")?;
    let expected = tws_times(4);
    let mut ok = events.len() == expected.len();
    let mut detail = format!("{} events", events.len());
    for (e, t) in events.events.iter().zip(&expected) {
        let spread = e.value("spread").unwrap_or(f64::NAN);
        let c_dev = ["c_min", "c_max"]
            .iter()
            .map(|k| (e.value(k).unwrap_or(f64::NAN) - 0.5).abs())
            .fold(0.0, f64::max);
        ok &= (e.t - t).abs() < 1e-6 && spread < 1e-9 && c_dev < 1e-9;
        let _ = write!(
            detail,
            "; t={:.9} (|dt|={:.1e}) spread={spread:.1e} |C-0.5|={c_dev:.1e}",
            e.t,
            (e.t - t).abs()
        );
    }
    outcome(ok, detail)
}

fn c4_no_lops_w_state() -> Result<Outcome, String> {
    let events = detect(&lops(), "pstws")?;
    let min = events
        .events
        .iter()
        .map(|e| e.value("spread").unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let value_ok = (0.01..=0.05).contains(&min);
    let mut ok = value_ok;
    let mut detail = format!(
        "min spread {min:.5} (band [0.01, 0.05]: {})",
        if value_ok { "ok" } else { "out" }
    );
    for target in [14.0 * PI / 9.0, 22.0 * PI / 9.0] {
        let nearest = events
            .events
            .iter()
            .map(|e| e.t)
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
        let off = nearest.map_or(f64::INFINITY, |t| (t - target).abs());
        ok &= off <= 0.02;
        let _ = write!(
            detail,
            "; minimum nearest {:.4}π is at {:.4}π, off by {off:.4} rad (limit 0.02)",
            target / PI,
            nearest.unwrap_or(f64::NAN) / PI
        );
    }
    outcome(ok, detail)
}

fn c5_crossing_values() -> Result<Outcome, String> {
    let events = detect(&lops(), "crossings")?;
    let cases = [
        ("c_cp_nul/c_nul_nul", 5.0 * PI / 7.0, 0.30),
        ("c_cp_ul/c_ul_nul", 4.0 * PI / 3.0, 0.58),
        ("c_cp_nul/c_nul_nul", 4.0 * PI / 3.0, 0.37),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (label, t, value) in cases {
        let hit = events
            .with_label(label)
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()));
        let Some(e) = hit else {
            ok = false;
            let _ = write!(detail, "{label}: none; ");
            continue;
        };
        let v = e.value("value").unwrap_or(f64::NAN);
        ok &= (e.t - t).abs() < 0.05 && (v - value).abs() <= 0.01;
        let _ = write!(
            detail,
            "{label} at {:.4}π = {v:.4} (want {value}); ",
            e.t / PI
        );
    }
    outcome(ok, detail.trim_end_matches("; ").to_string())
}

fn c6_peak_locations() -> Result<Outcome, String> {
    let events = detect(&Scenario::Cops, "peaks")?;
    let peaks: Vec<_> = events.with_label("c_ucp_l").collect();
    let (t0, v0) = ((2.0f64 / 3.0).sqrt().asin(), 1.0 / 3f64.sqrt());
    let first = peaks
        .iter()
        .min_by(|a, b| (a.t - t0).abs().total_cmp(&(b.t - t0).abs()))
        .ok_or("no c_ucp_l peaks")?;
    let v = first.value("value").unwrap_or(f64::NAN);
    let (dt, dv) = ((first.t - t0).abs(), (v - v0).abs());
    let mut ok = dt <= 1e-3 && dv <= 1e-6;
    let mut worst: f64 = 0.0;
    for t in approx_cops_peak_times(8) {
        let off = peaks
            .iter()
            .map(|p| (p.t - t).abs())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(off);
    }
    ok &= worst <= 0.01;
    outcome(
        ok,
        format!("first peak |dt|={dt:.2e} |dv|={dv:.2e}; approximate formula worst offset {worst:.4} rad over n=1..8"),
    )
}

fn conservation(scenario: &Scenario) -> Result<[f64; 3], String> {
    let traj = Trajectory::new(&StarModel::default(), scenario).map_err(err)?;
    let rows = grid()
        .par_iter()
        .map(|&t| {
            let s = traj.snapshot(t).map_err(err)?;
            let mag = (total_magnetization(&s.state) + 1.0).abs();
            let norm = (s.state.norm_sqr().sqrt() - 1.0).abs();
            let mut sz: f64 = 0.0;
            for i in 0..s.state.qubits() {
                let p = s.amplitudes.get(i).map_err(err)?.norm_sqr();
                sz = sz
                    .max((spin_expectation(&s.state, i, Axis::Z).map_err(err)? - (p - 0.5)).abs());
            }
            Ok([mag, norm, sz])
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(rows.into_iter().fold([0.0; 3], |a, b| {
        [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
    }))
}

fn c7_conservation() -> Result<Outcome, String> {
    let mut ok = true;
    let mut detail = String::new();
    for (name, scenario) in [("cops", Scenario::Cops), ("lops", lops())] {
        let [mag, norm, sz] = conservation(&scenario)?;
        ok &= mag <= 1e-10 && norm <= 1e-10 && sz <= 1e-12;
        let _ = write!(
            detail,
            "{name}: |M+1|={mag:.1e} |norm-1|={norm:.1e} |Sz-(P-1/2)|={sz:.1e}; "
        );
    }
    outcome(ok, detail.trim_end_matches("; ").to_string())
}

fn c8_zero_offsets() -> Result<Outcome, String> {
    let traj = Trajectory::new(&StarModel::default(), &lops()).map_err(err)?;
    let roles = traj.roles();
    let pair = |r| roles.pair(r).ok_or("role missing");
    let (cp, ul) = pair(PairRole::CpUl)?;
    let (_, nul) = pair(PairRole::CpNul)?;
    let szsz = |j: usize| {
        let traj = &traj;
        move |t: f64| {
            let s = traj.snapshot(t).expect("snapshot");
            two_point_correlator(&s.state, cp, j, Axis::Z).expect("correlator")
        }
    };
    let center = 14.0 * PI / 9.0;
    let zcu = find_zero_offset_fn(szsz(ul), center, ZERO_WINDOW).map_err(err)?;
    let (want_u, want_n) = (17.0 * PI / 1000.0, PI / 12.0);
    let mut ok = (zcu - want_u).abs() <= 0.02;
    let mut detail = format!("cp-ul zero offset {zcu:.4} (want {want_u:.4})");
    // A zero is required; the closest approach is reported as a diagnostic only.
    match find_zero_offset_fn(szsz(nul), center, ZERO_WINDOW) {
        Ok(zcn) => {
            ok &= (zcn - want_n).abs() <= 0.02;
            let _ = write!(detail, "; cp-nul zero offset {zcn:.4} (want {want_n:.4})");
        }
        Err(e) => {
            ok = false;
            let (off, residual) =
                closest_approach_offset(szsz(nul), center, ZERO_WINDOW).map_err(err)?;
            let _ = write!(
                detail,
                "; cp-nul: {e}; closest approach at offset {off:.4} (want {want_n:.4}) with |f|={residual:.1e}"
            );
        }
    }
    outcome(ok, detail)
}

fn c9_oracles() -> Result<Outcome, String> {
    let mut rows = Vec::new();
    for l in 1..=8 {
        let model = StarModel::new(l, 1.0).map_err(err)?;
        let n = if model.qubits() <= 6 { 64 } else { 8 };
        let samples: Vec<f64> = (0..n).map(|k| T_MAX * k as f64 / (n - 1) as f64).collect();
        for scenario in [Scenario::Cops, Scenario::lops_last(&model)] {
            let initial = scenario.initial(&model).map_err(err)?;
            rows.push(oracle_full_vs_sector(&model, &initial, &samples).map_err(err)?);
        }
    }
    for seed in [DEFAULT_SEED, 1, 2] {
        rows.push(oracle_concurrence_exhaustive(1000, seed, 3).map_err(err)?);
    }
    for l in [1, 2, 3, 5, 8] {
        let model = StarModel::new(l, 1.0).map_err(err)?;
        rows.extend(generic_invariants(&model).map_err(err)?);
    }
    let (ok, detail) = summarize(&rows);
    outcome(ok, detail)
}

fn evolve_once(path: &std::path::Path) -> Result<Vec<u8>, String> {
    let model = StarModel::default();
    let config = RunConfig {
        model,
        scenario: Scenario::lops_last(&model),
        t_max: T_MAX,
        steps: 1001,
        quantities: ["c_cp_ul", "p_cp", "szsz_cp_nul", "sxsx_ul_nul", "spread"]
            .map(String::from)
            .to_vec(),
        output: Some(path.to_path_buf()),
        format: Format::Csv,
        gnuplot: false,
    };
    cmd_evolve(&config, &mut std::io::sink()).map_err(err)?;
    std::fs::read(path).map_err(err)
}

fn c10_determinism() -> Result<Outcome, String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let a = evolve_once(&dir.path().join("a.csv"))?;
    let b = evolve_once(&dir.path().join("b.csv"))?;
    outcome(
        a == b && !a.is_empty(),
        format!("{} bytes, identical: {}", a.len(), a == b),
    )
}

fn main() {
    let criteria: [(u8, &str, Check); 10] = [
        (1, "COPS closed forms", c1_cops_closed_forms),
        (2, "LOPS closed forms", c2_lops_closed_forms),
        (3, "W-state generation", c3_w_state_generation),
        (4, "no LOPS W state", c4_no_lops_w_state),
        (5, "crossing values", c5_crossing_values),
        (6, "peak locations", c6_peak_locations),
        (7, "conservation", c7_conservation),
        (8, "zero offsets", c8_zero_offsets),
        (9, "oracle suites", c9_oracles),
        (10, "determinism", c10_determinism),
    ];
    let mut failed = BTreeSet::new();
    for (id, title, check) in criteria {
        let result = check().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        let known = if !result.pass && KNOWN_FAILURES.contains(&id) {
            " [known]"
        } else {
            ""
        };
        println!(
            "criterion {id:>2}: {verdict}{known}  {title}: {}",
            result.detail
        );
        if !result.pass {
            failed.insert(id);
        }
    }
    let known: BTreeSet<u8> = KNOWN_FAILURES.iter().copied().collect();
    let passed = 10 - failed.len();
    println!("acceptance: {passed}/10 criteria pass");
    if failed != known {
        let unexpected: Vec<_> = failed.difference(&known).collect();
        let recovered: Vec<_> = known.difference(&failed).collect();
        eprintln!("acceptance gate: unexpected failures {unexpected:?}, known failures now passing {recovered:?}");
        std::process::exit(1);
    }
}
