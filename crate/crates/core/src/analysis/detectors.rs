//! Named event detectors over a scanned trajectory.
//!
//! A detector sees the trajectory and its grid through [`DetectorContext`],
//! samples whatever columns it needs, and may re-evaluate the trajectory off
//! grid to polish candidate instants.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::entanglement::{w_state_fidelity, ConcurrenceMatrix, WStateVerdict};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::events::{
    find_crossings, find_peaks, golden_section_min, local_minima, Event, EventKind, EventList,
};
use super::quantity::QuantityCatalog;
use super::scenario::{Roles, Trajectory};
use super::series::{scan_trajectory, TimeSeries};

/// Off-grid refinement stops when the bracket is this narrow.
const REFINE_TOL: f64 = 1e-11;

pub struct DetectorContext<'a> {
    pub trajectory: &'a Trajectory,
    pub grid: &'a [f64],
    pub tolerances: Tolerances,
}

impl<'a> DetectorContext<'a> {
    pub fn new(trajectory: &'a Trajectory, grid: &'a [f64]) -> Self {
        Self {
            trajectory,
            grid,
            tolerances: Tolerances::default(),
        }
    }

    pub fn scan(&self, names: &[String]) -> Result<TimeSeries> {
        scan_trajectory(self.trajectory, self.grid, names)
    }

    /// Concurrence column names defined for this scenario.
    pub fn concurrence_columns(&self) -> Vec<String> {
        concurrence_columns(self.trajectory.roles())
    }

    /// Minimize `metric` of the concurrence matrix on `[lo, hi]` by golden section.
    fn refine<F>(&self, metric: F, lo: f64, hi: f64) -> Result<(f64, f64)>
    where
        F: Fn(&ConcurrenceMatrix) -> f64,
    {
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let f = |t: f64| match self.concurrences_at(t) {
            Ok(c) => metric(&c),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        };
        let found = golden_section_min(f, lo.max(0.0), hi, REFINE_TOL);
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    fn concurrences_at(&self, t: f64) -> Result<ConcurrenceMatrix> {
        Ok(self.trajectory.snapshot(t)?.concurrences()?.clone())
    }

    fn bracket(&self, k: usize) -> (f64, f64) {
        (self.grid[k - 1], self.grid[k + 1])
    }
}

pub fn concurrence_columns(roles: &Roles) -> Vec<String> {
    let cat = QuantityCatalog::global();
    cat.names()
        .filter(|n| n.starts_with("c_"))
        .filter(|n| cat.get(n).map(|q| q.supports(roles)).unwrap_or(false))
        .map(str::to_string)
        .collect()
}

pub trait Detector: Send + Sync {
    fn name(&self) -> &str;

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList>;
}

fn verdict_event(
    kind: EventKind,
    label: &str,
    t: f64,
    c: &ConcurrenceMatrix,
    fidelity: f64,
) -> Event {
    let (lo, hi) = c
        .pairs()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, v)| {
            (lo.min(v), hi.max(v))
        });
    Event::new(t, kind, label)
        .with("spread", c.spread())
        .with("w_distance", c.w_distance())
        .with("fidelity", fidelity)
        .with("sum_c", c.sum())
        .with("c_min", lo)
        .with("c_max", hi)
}

/// Exact W states: polished minima of the distance to the all-2/N configuration.
struct TwsDetector;

impl Detector for TwsDetector {
    fn name(&self) -> &str {
        "tws"
    }

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList> {
        let tol = ctx.tolerances.exact_w;
        let series = ctx.scan(&["w_distance".into()])?;
        let wd = series.column("w_distance").expect("scanned");
        let mut out = EventList::default();
        for k in local_minima(wd) {
            let (lo, hi) = ctx.bracket(k);
            let (t, _) = ctx.refine(ConcurrenceMatrix::w_distance, lo, hi)?;
            let snap = ctx.trajectory.snapshot(t)?;
            let c = snap.concurrences()?;
            let fidelity = w_state_fidelity(&snap.amplitudes);
            if WStateVerdict::from_parts(c, fidelity, t, tol).is_w_state {
                out.events
                    .push(verdict_event(EventKind::Tws, "w", t, c, fidelity));
            }
        }
        Ok(out)
    }
}

/// Pseudo-W windows: local minima of the spread inside the region where every
/// pair is within `pseudo_w` of 2/N, that are not exact W states.
struct PstwsDetector;

impl Detector for PstwsDetector {
    fn name(&self) -> &str {
        "pstws"
    }

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList> {
        let (exact, pseudo) = (ctx.tolerances.exact_w, ctx.tolerances.pseudo_w);
        let series = ctx.scan(&["spread".into(), "w_distance".into()])?;
        let spread = series.column("spread").expect("scanned");
        let wd = series.column("w_distance").expect("scanned");
        let mut out = EventList::default();
        for k in local_minima(spread) {
            if wd[k] >= pseudo {
                continue;
            }
            let (lo, hi) = ctx.bracket(k);
            let (t, s) = ctx.refine(ConcurrenceMatrix::spread, lo, hi)?;
            let snap = ctx.trajectory.snapshot(t)?;
            let c = snap.concurrences()?;
            if s >= exact && s < pseudo && c.w_distance() < pseudo {
                let fidelity = w_state_fidelity(&snap.amplitudes);
                out.events
                    .push(verdict_event(EventKind::Pstws, "pseudo-w", t, c, fidelity));
            }
        }
        Ok(out)
    }
}

/// Refined local maxima of every concurrence column and of their sum.
struct PeakDetector;

impl Detector for PeakDetector {
    fn name(&self) -> &str {
        "peaks"
    }

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList> {
        let mut names = ctx.concurrence_columns();
        names.push("sum_c".into());
        let series = ctx.scan(&names)?;
        let mut out = EventList::default();
        for col in &series.columns {
            out.extend(find_peaks(&series.grid, &col.values, true, &col.name)?);
        }
        Ok(out)
    }
}

/// Crossings between every pair of concurrence columns.
struct CrossingDetector;

impl Detector for CrossingDetector {
    fn name(&self) -> &str {
        "crossings"
    }

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList> {
        let names = ctx.concurrence_columns();
        let series = ctx.scan(&names)?;
        let mut out = EventList::default();
        for (i, a) in series.columns.iter().enumerate() {
            for b in &series.columns[i + 1..] {
                let label = format!("{}/{}", a.name, b.name);
                out.extend(find_crossings(
                    &series.grid,
                    &a.values,
                    &b.values,
                    true,
                    &label,
                )?);
            }
        }
        Ok(out)
    }
}

/// Instants where the central qubit is unentangled from every ligand.
struct DisentangleDetector;

fn max_central(c: &ConcurrenceMatrix) -> f64 {
    (1..c.sites()).map(|j| c.get(0, j)).fold(0.0, f64::max)
}

impl Detector for DisentangleDetector {
    fn name(&self) -> &str {
        "disentangle"
    }

    fn detect(&self, ctx: &DetectorContext<'_>) -> Result<EventList> {
        let tol = ctx.tolerances.exact_w;
        let central: Vec<f64> = ctx
            .grid
            .iter()
            .map(|&t| ctx.concurrences_at(t).map(|c| max_central(&c)))
            .collect::<Result<_>>()?;
        let mut out = EventList::default();
        for k in local_minima(&central) {
            let (lo, hi) = ctx.bracket(k);
            let (t, v) = ctx.refine(max_central, lo, hi)?;
            if v < tol {
                let c = ctx.concurrences_at(t)?;
                out.events.push(
                    Event::new(t, EventKind::Disentangle, "central")
                        .with("max_central", v)
                        .with("sum_c", c.sum()),
                );
            }
        }
        Ok(out)
    }
}

/// Name-keyed registry of detectors.
#[derive(Default)]
pub struct DetectorRegistry {
    entries: BTreeMap<String, Box<dyn Detector>>,
}

impl DetectorRegistry {
    pub fn register(&mut self, d: Box<dyn Detector>) {
        self.entries.insert(d.name().to_string(), d);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Detector> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownDetector(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Run the named detectors and merge their events in time order.
    pub fn run(&self, names: &[String], ctx: &DetectorContext<'_>) -> Result<EventList> {
        let mut out = EventList::default();
        for n in names {
            out.extend(self.get(n)?.detect(ctx)?);
        }
        Ok(out)
    }

    pub fn standard() -> Self {
        let mut reg = Self::default();
        reg.register(Box::new(TwsDetector));
        reg.register(Box::new(PstwsDetector));
        reg.register(Box::new(PeakDetector));
        reg.register(Box::new(CrossingDetector));
        reg.register(Box::new(DisentangleDetector));
        reg
    }

    pub fn global() -> &'static DetectorRegistry {
        static REGISTRY: OnceLock<DetectorRegistry> = OnceLock::new();
        REGISTRY.get_or_init(DetectorRegistry::standard)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::analysis::scenario::Scenario;
    use crate::analysis::series::uniform_grid;
    use crate::model::StarModel;

    fn run(scenario: Scenario, detector: &str, t_max: f64, steps: usize) -> EventList {
        let model = StarModel::default();
        let traj = Trajectory::new(&model, &scenario).unwrap();
        let grid = uniform_grid(t_max, steps).unwrap();
        let ctx = DetectorContext::new(&traj, &grid);
        DetectorRegistry::global()
            .get(detector)
            .unwrap()
            .detect(&ctx)
            .unwrap()
    }

    #[test]
    fn cops_tws_instants() {
        let ev = run(Scenario::Cops, "tws", 2.0 * PI, 1001);
        assert_eq!(ev.len(), 2);
        assert!((ev.events[0].t - PI / 2.0).abs() < 1e-6);
        assert!((ev.events[1].t - 1.5 * PI).abs() < 1e-6);
        assert!(ev.events[0].value("spread").unwrap() < 1e-9);
    }

    #[test]
    fn lops_has_no_tws_but_pstws() {
        let m = StarModel::default();
        assert!(run(Scenario::lops_last(&m), "tws", 4.0 * PI, 1001).is_empty());
        let ps = run(Scenario::lops_last(&m), "pstws", 4.0 * PI, 1001);
        assert_eq!(ps.len(), 2);
        for e in &ps.events {
            let s = e.value("spread").unwrap();
            assert!((0.01..0.05).contains(&s), "{s}");
        }
    }

    #[test]
    fn lops_central_disentangles_at_multiples_of_pi() {
        let m = StarModel::default();
        let ev = run(Scenario::lops_last(&m), "disentangle", 3.5 * PI, 1001);
        let t = ev.times();
        assert_eq!(t.len(), 3);
        for (k, t) in t.iter().enumerate() {
            assert!((t - (k + 1) as f64 * PI).abs() < 1e-6);
        }
    }

    #[test]
    fn lops_crossing_values() {
        let m = StarModel::default();
        let ev = run(Scenario::lops_last(&m), "crossings", 4.0 * PI, 4001);
        let near = ev
            .with_label("c_cp_nul/c_nul_nul")
            .find(|e| (e.t - 5.0 * PI / 7.0).abs() < 0.05)
            .expect("crossing near 5π/7");
        assert!((near.value("value").unwrap() - 0.30).abs() < 0.01);
    }

    #[test]
    fn unknown_detector() {
        assert!(matches!(
            DetectorRegistry::global().get("nope"),
            Err(Error::UnknownDetector(_))
        ));
    }
}
