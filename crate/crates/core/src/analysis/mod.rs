//! Scans, closed-form references, event detection and the verification suite.

pub mod closed_form;
pub mod detectors;
pub mod events;
pub mod quantity;
pub mod scenario;
pub mod series;
pub mod verify;

pub use closed_form::{closed_form, ClosedForm, ClosedFormCatalog};
pub use detectors::{concurrence_columns, Detector, DetectorContext, DetectorRegistry};
pub use events::{
    approx_cops_peak_times, closest_approach_offset, exact_cops_peak_times, find_crossings,
    find_peaks, find_zero_offset, find_zero_offset_fn, golden_section_min, local_minima,
    pstws_times, tws_times, Event, EventKind, EventList,
};
pub use quantity::{Quantity, QuantityCatalog};
pub use scenario::{PairRole, Roles, Scenario, ScenarioKind, SiteRole, Snapshot, Trajectory};
pub use series::{format_sig, scan, scan_trajectory, uniform_grid, Column, TimeSeries};
pub use verify::{
    closed_form_checks, generic_invariants, permutation_defect, verify, VerifyOptions, VerifyReport,
};
