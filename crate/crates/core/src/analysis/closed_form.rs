//! Analytic reference curves for the three-ligand star at J = 1.
//!
//! Identifiers coincide with the quantity catalog names, so every entry can be
//! checked against the numeric pipeline column of the same name.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::evolution::lops_amplitudes_closed_form;

use super::scenario::ScenarioKind;

pub trait ClosedForm: Send + Sync {
    fn id(&self) -> &str;

    fn scenario(&self) -> ScenarioKind;

    /// Value at dimensionless time `t` (units of 1/J).
    fn eval(&self, t: f64) -> f64;
}

struct Formula {
    id: &'static str,
    scenario: ScenarioKind,
    f: fn(f64) -> f64,
}

impl ClosedForm for Formula {
    fn id(&self) -> &str {
        self.id
    }

    fn scenario(&self) -> ScenarioKind {
        self.scenario
    }

    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

fn sin(x: f64) -> f64 {
    x.sin()
}

fn cos(x: f64) -> f64 {
    x.cos()
}

// COPS

fn c_ucp_l(t: f64) -> f64 {
    0.5 * (sin(t).powi(4) + sin(2.0 * t).powi(2)).sqrt()
}

fn c_l_l(t: f64) -> f64 {
    sin(t).powi(2) / 2.0
}

fn p_ucp(t: f64) -> f64 {
    (3.0 * cos(2.0 * t) + 5.0) / 8.0
}

fn p_l(t: f64) -> f64 {
    sin(t).powi(2) / 4.0
}

fn sz_ucp(t: f64) -> f64 {
    (3.0 * cos(2.0 * t) + 1.0) / 8.0
}

fn sz_l(t: f64) -> f64 {
    -(cos(2.0 * t) + 3.0) / 8.0
}

fn szsz_ucp_l(t: f64) -> f64 {
    -cos(t).powi(2) / 4.0
}

fn sxsx_ucp_l(t: f64) -> f64 {
    -sin(t).powi(2) / 8.0
}

fn szsz_l_l(t: f64) -> f64 {
    cos(t).powi(2) / 4.0
}

fn sxsx_l_l(t: f64) -> f64 {
    sin(t).powi(2) / 8.0
}

// LOPS

/// `24cos(t/2) + 8cos(3t/2) + 3cos(2t)`, shared by several LOPS curves.
fn harmonic_ul(t: f64) -> f64 {
    24.0 * cos(t / 2.0) + 8.0 * cos(1.5 * t) + 3.0 * cos(2.0 * t)
}

fn p_cp(t: f64) -> f64 {
    sin(t).powi(2) / 4.0
}

fn p_ul(t: f64) -> f64 {
    (harmonic_ul(t) + 37.0) / 72.0
}

fn p_nul(t: f64) -> f64 {
    2.0 / 9.0 * sin(t / 4.0).powi(4) * (8.0 * cos(t / 2.0) + 3.0 * cos(t) + 7.0)
}

fn sz_cp(t: f64) -> f64 {
    -(cos(2.0 * t) + 3.0) / 8.0
}

fn sz_ul(t: f64) -> f64 {
    (harmonic_ul(t) + 1.0) / 72.0
}

fn sz_nul(t: f64) -> f64 {
    (-12.0 * cos(t / 2.0) - 4.0 * cos(1.5 * t) + 3.0 * cos(2.0 * t) - 23.0) / 72.0
}

fn szsz_cp_ul(t: f64) -> f64 {
    (-12.0 * cos(t / 2.0) - 4.0 * cos(1.5 * t) + 3.0 * cos(2.0 * t) - 5.0) / 72.0
}

fn szsz_cp_nul(t: f64) -> f64 {
    (6.0 * cos(t / 2.0) + 2.0 * cos(1.5 * t) + 3.0 * cos(2.0 * t) + 7.0) / 72.0
}

fn szsz_ul_nul(t: f64) -> f64 {
    -szsz_cp_nul(t)
}

fn szsz_nul_nul(t: f64) -> f64 {
    -szsz_cp_ul(t)
}

fn sxsx_cp_ul(t: f64) -> f64 {
    sin(t / 2.0).powi(2) * (4.0 * cos(t / 2.0) + cos(t) + 1.0) / 12.0
}

fn sxsx_cp_nul(t: f64) -> f64 {
    -sin(t / 4.0).powi(2) * sin(t / 2.0) * sin(t) / 6.0
}

fn sxsx_ul_nul(t: f64) -> f64 {
    (6.0 * cos(t / 2.0) + 2.0 * cos(1.5 * t) + 3.0 * cos(2.0 * t) - 11.0) / 144.0
}

/// Equals P_nul / 2; the quarter-angle power is what the dynamics give.
fn sxsx_nul_nul(t: f64) -> f64 {
    sin(t / 4.0).powi(4) * (8.0 * cos(t / 2.0) + 3.0 * cos(t) + 7.0) / 9.0
}

fn lops_pair(t: f64, i: usize, j: usize) -> f64 {
    let b = lops_amplitudes_closed_form(t, 3).expect("ligand 3 is valid");
    2.0 * b.amplitudes()[i].norm() * b.amplitudes()[j].norm()
}

fn c_cp_ul(t: f64) -> f64 {
    lops_pair(t, 0, 3)
}

fn c_cp_nul(t: f64) -> f64 {
    lops_pair(t, 0, 1)
}

fn c_ul_nul(t: f64) -> f64 {
    lops_pair(t, 3, 1)
}

fn c_nul_nul(t: f64) -> f64 {
    lops_pair(t, 1, 2)
}

/// Registry of closed forms keyed by id.
#[derive(Default)]
pub struct ClosedFormCatalog {
    entries: BTreeMap<String, Box<dyn ClosedForm>>,
}

impl ClosedFormCatalog {
    pub fn register(&mut self, f: Box<dyn ClosedForm>) {
        self.entries.insert(f.id().to_string(), f);
    }

    pub fn get(&self, id: &str) -> Result<&dyn ClosedForm> {
        self.entries
            .get(id)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownQuantity(id.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ClosedForm> {
        self.entries.values().map(|b| b.as_ref())
    }

    pub fn for_scenario(&self, kind: ScenarioKind) -> impl Iterator<Item = &dyn ClosedForm> {
        self.iter().filter(move |f| f.scenario() == kind)
    }

    pub fn standard() -> Self {
        use ScenarioKind::{Cops, Lops};
        type FormulaRow = (&'static str, ScenarioKind, fn(f64) -> f64);
        let table: [FormulaRow; 28] = [
            ("c_ucp_l", Cops, c_ucp_l),
            ("c_l_l", Cops, c_l_l),
            ("p_ucp", Cops, p_ucp),
            ("p_l", Cops, p_l),
            ("sz_ucp", Cops, sz_ucp),
            ("sz_l", Cops, sz_l),
            ("szsz_ucp_l", Cops, szsz_ucp_l),
            ("sxsx_ucp_l", Cops, sxsx_ucp_l),
            ("szsz_l_l", Cops, szsz_l_l),
            ("sxsx_l_l", Cops, sxsx_l_l),
            ("c_cp_ul", Lops, c_cp_ul),
            ("c_cp_nul", Lops, c_cp_nul),
            ("c_ul_nul", Lops, c_ul_nul),
            ("c_nul_nul", Lops, c_nul_nul),
            ("p_cp", Lops, p_cp),
            ("p_ul", Lops, p_ul),
            ("p_nul", Lops, p_nul),
            ("sz_cp", Lops, sz_cp),
            ("sz_ul", Lops, sz_ul),
            ("sz_nul", Lops, sz_nul),
            ("szsz_cp_ul", Lops, szsz_cp_ul),
            ("szsz_cp_nul", Lops, szsz_cp_nul),
            ("szsz_ul_nul", Lops, szsz_ul_nul),
            ("szsz_nul_nul", Lops, szsz_nul_nul),
            ("sxsx_cp_ul", Lops, sxsx_cp_ul),
            ("sxsx_cp_nul", Lops, sxsx_cp_nul),
            ("sxsx_ul_nul", Lops, sxsx_ul_nul),
            ("sxsx_nul_nul", Lops, sxsx_nul_nul),
        ];
        let mut cat = Self::default();
        for (id, scenario, f) in table {
            cat.register(Box::new(Formula { id, scenario, f }));
        }
        cat
    }

    pub fn global() -> &'static ClosedFormCatalog {
        static CATALOG: OnceLock<ClosedFormCatalog> = OnceLock::new();
        CATALOG.get_or_init(ClosedFormCatalog::standard)
    }
}

/// Evaluate the registered closed form `id` at `t`.
pub fn closed_form(id: &str, t: f64) -> Result<f64> {
    Ok(ClosedFormCatalog::global().get(id)?.eval(t))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn spot_values() {
        assert!((closed_form("c_ucp_l", PI / 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((closed_form("sz_ul", 0.0).unwrap() - 0.5).abs() < 1e-15);
        let v = closed_form("szsz_cp_ul", 14.0 * PI / 9.0).unwrap();
        assert!((v + 0.0087).abs() < 5e-5, "{v}");
        assert!(matches!(
            closed_form("nope", 0.0),
            Err(Error::UnknownQuantity(_))
        ));
    }

    #[test]
    fn probability_identities() {
        for k in 0..200 {
            let t = k as f64 * 0.063;
            let total = p_cp(t) + p_ul(t) + 2.0 * p_nul(t);
            assert!((total - 1.0).abs() < 1e-14);
            assert!((sz_ul(t) - (p_ul(t) - 0.5)).abs() < 1e-14);
            assert!((sz_nul(t) - (p_nul(t) - 0.5)).abs() < 1e-14);
            assert!((p_ucp(t) + 3.0 * p_l(t) - 1.0).abs() < 1e-14);
            assert!((sxsx_nul_nul(t) - p_nul(t) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn every_entry_has_a_scenario() {
        let cat = ClosedFormCatalog::global();
        assert_eq!(cat.for_scenario(ScenarioKind::Cops).count(), 10);
        assert_eq!(cat.for_scenario(ScenarioKind::Lops).count(), 18);
    }
}
