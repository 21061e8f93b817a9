//! Event types and the column-level search primitives behind the detectors:
//! peaks, crossings, zeros and the reference instant lists.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::closed_form::ClosedFormCatalog;

/// Differences below this are treated as exact ties when locating crossings.
pub const CROSSING_ZERO: f64 = 1e-13;
/// Two columns closer than this everywhere are reported as coincident.
pub const DEGENERATE_COLUMNS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Tws,
    Pstws,
    Peak,
    Crossing,
    Disentangle,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Tws => "tws",
            EventKind::Pstws => "pstws",
            EventKind::Peak => "peak",
            EventKind::Crossing => "crossing",
            EventKind::Disentangle => "disentangle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub label: String,
    pub payload: BTreeMap<String, f64>,
}

impl Event {
    pub fn new(t: f64, kind: EventKind, label: impl Into<String>) -> Self {
        Self {
            t,
            kind,
            label: label.into(),
            payload: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.payload.insert(key.to_string(), value);
        self
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.payload.get(key).copied()
    }
}

/// Events sorted by time, plus free-form diagnostic flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventList {
    pub events: Vec<Event>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl EventList {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.t).collect()
    }

    /// Merge another list and restore time order (stable on ties).
    pub fn extend(&mut self, other: EventList) {
        self.events.extend(other.events);
        self.flags.extend(other.flags);
        self.sort();
    }

    pub fn sort(&mut self) {
        self.events.sort_by(|a, b| a.t.total_cmp(&b.t));
    }

    pub fn with_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Event> + 'a {
        self.events.iter().filter(move |e| e.label == label)
    }
}

fn check_lengths(grid: &[f64], values: &[f64]) -> Result<()> {
    if grid.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    Ok(())
}

/// Interior local maxima by the 3-point test; `refine` fits a parabola through
/// the three samples and reports its vertex.
pub fn find_peaks(grid: &[f64], values: &[f64], refine: bool, label: &str) -> Result<EventList> {
    check_lengths(grid, values)?;
    let mut out = EventList::default();
    if values.len() < 3 {
        return Ok(out);
    }
    for k in 1..values.len() - 1 {
        let (y0, y1, y2) = (values[k - 1], values[k], values[k + 1]);
        if !(y1 > y0 && y1 >= y2) {
            continue;
        }
        let (mut t, mut v) = (grid[k], y1);
        if refine {
            let curvature = y0 - 2.0 * y1 + y2;
            if curvature < 0.0 {
                let h = 0.5 * (grid[k + 1] - grid[k - 1]);
                let s = 0.5 * (y0 - y2) / curvature;
                t += s * h;
                v = y1 - 0.25 * (y0 - y2) * s;
            }
        }
        out.events
            .push(Event::new(t, EventKind::Peak, label).with("value", v));
    }
    Ok(out)
}

/// Local minima of `values`, returned as grid indices.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    if values.len() < 3 {
        return Vec::new();
    }
    (1..values.len() - 1)
        .filter(|&k| values[k] < values[k - 1] && values[k] <= values[k + 1])
        .collect()
}

/// Sign changes of `a − b`, linearly interpolated when `refine` is set.
///
/// Runs of exact ties are skipped and a crossing through a tie run is placed at
/// its midpoint. Columns that coincide everywhere produce no events and a
/// `degenerate` flag.
pub fn find_crossings(
    grid: &[f64],
    a: &[f64],
    b: &[f64],
    refine: bool,
    label: &str,
) -> Result<EventList> {
    check_lengths(grid, a)?;
    check_lengths(grid, b)?;
    let mut out = EventList::default();
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if d.iter().all(|x| x.abs() < DEGENERATE_COLUMNS) {
        out.flags
            .push(format!("degenerate: {label} columns coincide"));
        return Ok(out);
    }
    let mut last: Option<usize> = None;
    for k in 0..d.len() {
        if d[k].abs() <= CROSSING_ZERO {
            continue;
        }
        if let Some(p) = last {
            if d[p].signum() != d[k].signum() {
                let (t, v) = if p + 1 == k {
                    let s = if refine { d[p] / (d[p] - d[k]) } else { 0.0 };
                    (grid[p] + s * (grid[k] - grid[p]), a[p] + s * (a[k] - a[p]))
                } else {
                    let m = (p + k) / 2;
                    if (p + k) % 2 == 0 || !refine {
                        (grid[m], a[m])
                    } else {
                        (0.5 * (grid[m] + grid[m + 1]), 0.5 * (a[m] + a[m + 1]))
                    }
                };
                out.events
                    .push(Event::new(t, EventKind::Crossing, label).with("value", v));
            }
        }
        last = Some(k);
    }
    Ok(out)
}

/// Golden-section minimizer on `[lo, hi]`; returns `(t, f(t))`.
pub fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

const ZERO_SAMPLES: usize = 2001;
/// `|f|` at or below this at a polished local minimum is reported as a zero.
pub const TOUCH_ZERO: f64 = 1e-12;

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Distance from `center` to the nearest zero of `f` in `[center − window, center + window]`.
///
/// The window is sampled densely; sign changes are bisected to machine
/// precision, and local minima of `|f|` that polish below [`TOUCH_ZERO`] count
/// as (even-order) zeros. The closest root wins.
pub fn find_zero_offset_fn<F: Fn(f64) -> f64>(f: F, center: f64, window: f64) -> Result<f64> {
    if window.is_nan() || window <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "window must be positive, got {window}"
        )));
    }
    let (lo, hi) = (center - window, center + window);
    let h = (hi - lo) / (ZERO_SAMPLES - 1) as f64;
    let ts: Vec<f64> = (0..ZERO_SAMPLES).map(|k| lo + k as f64 * h).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut roots = Vec::new();
    for k in 0..ZERO_SAMPLES {
        if vs[k] == 0.0 {
            roots.push(ts[k]);
        } else if k > 0 && vs[k - 1] != 0.0 && (vs[k] > 0.0) != (vs[k - 1] > 0.0) {
            roots.push(bisect(&f, ts[k - 1], ts[k]));
        }
    }
    let abs: Vec<f64> = vs.iter().map(|v| v.abs()).collect();
    for k in local_minima(&abs) {
        let (t, v) = golden_section_min(|t| f(t).abs(), ts[k - 1], ts[k + 1], 1e-12);
        if v <= TOUCH_ZERO {
            roots.push(t);
        }
    }
    roots
        .into_iter()
        .map(|t| (t - center).abs())
        .min_by(f64::total_cmp)
        .ok_or(Error::NoZeroInWindow { lo, hi })
}

/// [`find_zero_offset_fn`] applied to the registered closed form `id`.
pub fn find_zero_offset(id: &str, center: f64, window: f64) -> Result<f64> {
    let f = ClosedFormCatalog::global().get(id)?;
    find_zero_offset_fn(|t| f.eval(t), center, window)
}

/// Closest approach of `f` to zero within the window.
///
/// For functions that dip towards zero without crossing it, this is the local
/// minimum of `|f|` nearest to `center`. Returns `(offset, |f|)` at that point.
pub fn closest_approach_offset<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    window: f64,
) -> Result<(f64, f64)> {
    if window.is_nan() || window <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "window must be positive, got {window}"
        )));
    }
    let lo = center - window;
    let h = 2.0 * window / (ZERO_SAMPLES - 1) as f64;
    let samples: Vec<f64> = (0..ZERO_SAMPLES)
        .map(|k| f(lo + k as f64 * h).abs())
        .collect();
    let k = local_minima(&samples)
        .into_iter()
        .min_by(|&a, &b| {
            let da = (lo + a as f64 * h - center).abs();
            let db = (lo + b as f64 * h - center).abs();
            da.total_cmp(&db)
        })
        .ok_or(Error::NoZeroInWindow {
            lo,
            hi: center + window,
        })?;
    let tk = lo + k as f64 * h;
    let (t, v) = golden_section_min(|t| f(t).abs(), tk - h, tk + h, 1e-12);
    Ok(((t - center).abs(), v))
}

/// Instants `π(2n − 1)/2` at which the three-ligand COPS trajectory is an exact W state.
pub fn tws_times(n_max: usize) -> Vec<f64> {
    (1..=n_max).map(|n| PI * (2 * n - 1) as f64 / 2.0).collect()
}

/// Pseudo-W instants `π(2n − (9 + 5(−1)ⁿ)/9)` of the three-ligand LOPS trajectory.
pub fn pstws_times(n_max: usize) -> Vec<f64> {
    (1..=n_max)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            PI * (2.0 * n as f64 - (9.0 + 5.0 * sign) / 9.0)
        })
        .collect()
}

/// Approximate peak times of the COPS central-ligand concurrence,
/// `π(2n − 1)/4 + 7π(−1)^(n+1)/132`. Accurate to a few milliradians only;
/// the exact first peak is `arcsin √(2/3)`.
pub fn approx_cops_peak_times(n_max: usize) -> Vec<f64> {
    (1..=n_max)
        .map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            PI * (2 * n - 1) as f64 / 4.0 + 7.0 * PI * sign / 132.0
        })
        .collect()
}

/// Exact peak times of the COPS central-ligand concurrence: `nπ/2 ± (π/2 − arcsin √(2/3))`
/// folded so that the n-th entry pairs with the n-th approximate time.
pub fn exact_cops_peak_times(n_max: usize) -> Vec<f64> {
    let a = (2.0f64 / 3.0).sqrt().asin();
    (1..=n_max)
        .map(|n| {
            let base = PI * ((n - 1) / 2) as f64;
            if n % 2 == 1 {
                base + a
            } else {
                base + PI - a
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64 * t_max / (n - 1) as f64).collect()
    }

    #[test]
    fn peaks_of_sin_squared() {
        let g = grid(2.0 * PI, 2001);
        let v: Vec<f64> = g.iter().map(|t| t.sin().powi(2) / 2.0).collect();
        let peaks = find_peaks(&g, &v, true, "c").unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks.events[0].t - PI / 2.0).abs() < 1e-6);
        assert!((peaks.events[1].t - 1.5 * PI).abs() < 1e-6);
        assert!((peaks.events[0].value("value").unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn constant_has_no_peaks() {
        let g = grid(1.0, 50);
        assert!(find_peaks(&g, &[0.3; 50], true, "k").unwrap().is_empty());
    }

    #[test]
    fn cops_central_ligand_peaks() {
        let g = grid(PI, 4001);
        let v: Vec<f64> = g
            .iter()
            .map(|t| 0.5 * (t.sin().powi(4) + (2.0 * t).sin().powi(2)).sqrt())
            .collect();
        let peaks = find_peaks(&g, &v, true, "c_ucp_l").unwrap();
        let a = (2.0f64 / 3.0).sqrt().asin();
        assert_eq!(peaks.len(), 2);
        assert!((peaks.events[0].t - a).abs() < 1e-4);
        assert!((peaks.events[1].t - (PI - a)).abs() < 1e-4);
        let dips: Vec<usize> = local_minima(&v);
        assert_eq!(dips.len(), 1);
        assert!((v[dips[0]] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn crossings_linear() {
        let g = grid(2.0, 21);
        let a: Vec<f64> = g.clone();
        let b = vec![1.05; 21];
        let c = find_crossings(&g, &a, &b, true, "ab").unwrap();
        assert_eq!(c.len(), 1);
        assert!((c.events[0].t - 1.05).abs() < 1e-12);
        assert!((c.events[0].value("value").unwrap() - 1.05).abs() < 1e-12);
    }

    #[test]
    fn crossing_through_tie() {
        let g = grid(2.0, 21);
        let a: Vec<f64> = g.clone();
        let b = vec![1.0; 21];
        let c = find_crossings(&g, &a, &b, true, "ab").unwrap();
        assert_eq!(c.len(), 1);
        assert!((c.events[0].t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_columns_flagged() {
        let g = grid(1.0, 10);
        let a: Vec<f64> = g.iter().map(|t| t.sin()).collect();
        let c = find_crossings(&g, &a, &a, true, "aa").unwrap();
        assert!(c.is_empty());
        assert_eq!(c.flags.len(), 1);
    }

    #[test]
    fn touching_is_not_crossing() {
        let g = grid(2.0, 201);
        let a: Vec<f64> = g.iter().map(|t| (t - 1.0).powi(2)).collect();
        let c = find_crossings(&g, &a, &vec![0.0; 201], true, "touch").unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn zero_offsets() {
        let off = find_zero_offset_fn(|t: f64| t.cos().powi(2) / 4.0, PI / 2.0, 0.2);
        assert!(off.unwrap() < 1e-6);
        let off = find_zero_offset_fn(|t: f64| t - 0.3, 0.0, 1.0).unwrap();
        assert!((off - 0.3).abs() < 1e-15);
        assert!(matches!(
            find_zero_offset_fn(|_| 1.0, 0.0, 1.0),
            Err(Error::NoZeroInWindow { .. })
        ));
        assert!(find_zero_offset_fn(|t| t, 0.0, 0.0).is_err());
    }

    #[test]
    fn zero_offset_from_catalog() {
        let c = 14.0 * PI / 9.0;
        let off = find_zero_offset("szsz_cp_ul", c, 0.3).unwrap();
        assert!((off - 17.0 * PI / 1000.0).abs() < 0.02, "{off}");
        assert!(matches!(
            find_zero_offset("nope", c, 0.3),
            Err(Error::UnknownQuantity(_))
        ));
    }

    #[test]
    fn closest_approach_of_touching_parabola() {
        let (off, v) = closest_approach_offset(|t| (t - 0.4).powi(2) + 1e-3, 0.0, 1.0).unwrap();
        assert!((off - 0.4).abs() < 1e-6);
        assert!((v - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn reference_instants() {
        assert_eq!(tws_times(1), vec![PI / 2.0]);
        let t = tws_times(3);
        assert!((t[2] - 2.5 * PI).abs() < 1e-15);
        let p = pstws_times(2);
        assert!((p[0] - 14.0 * PI / 9.0).abs() < 1e-14);
        assert!((p[1] - 22.0 * PI / 9.0).abs() < 1e-14);
        let a = approx_cops_peak_times(8);
        assert!((a[0] - 0.952).abs() < 1e-3);
        for (x, y) in a.iter().zip(exact_cops_peak_times(8)) {
            assert!((x - y).abs() < 0.01);
        }
    }

    #[test]
    fn golden_section_finds_vertex() {
        let (t, v) = golden_section_min(|t| (t - 0.123).abs(), 0.0, 1.0, 1e-12);
        assert!((t - 0.123).abs() < 1e-11);
        assert!(v < 1e-11);
    }

    #[test]
    fn list_sorts_and_serializes() {
        let mut l = EventList::default();
        l.events.push(Event::new(2.0, EventKind::Peak, "a"));
        l.extend(EventList {
            events: vec![Event::new(1.0, EventKind::Tws, "w").with("spread", 0.0)],
            flags: vec![],
        });
        assert_eq!(l.times(), vec![1.0, 2.0]);
        let json = serde_json::to_string(&l).unwrap();
        assert!(json.contains("\"kind\":\"tws\""));
        let back: EventList = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }
}
