//! Registry of scalar quantities that can be sampled along a trajectory.
//!
//! Each quantity is a [`Quantity`] trait object registered under its public
//! name; `scan` and the CLI select them by name at runtime.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::entanglement::w_state_fidelity;
use crate::error::{Error, Result};
use crate::observables::{spin_expectation, total_magnetization, two_point_correlator, Axis};

use super::scenario::{PairRole, Roles, SiteRole, Snapshot};

pub trait Quantity: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str;

    /// Whether the scenario defines every role this quantity refers to.
    fn supports(&self, roles: &Roles) -> bool;

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64>;
}

fn pair_or_err(roles: &Roles, role: PairRole, name: &str) -> Result<(usize, usize)> {
    roles.pair(role).ok_or_else(|| Error::RoleUnavailable {
        name: name.to_string(),
        scenario: roles.kind().to_string(),
    })
}

fn site_or_err(roles: &Roles, role: SiteRole, name: &str) -> Result<usize> {
    roles.site(role).ok_or_else(|| Error::RoleUnavailable {
        name: name.to_string(),
        scenario: roles.kind().to_string(),
    })
}

struct PairConcurrence {
    name: String,
    description: String,
    pair: PairRole,
}

impl Quantity for PairConcurrence {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        &self.description
    }

    fn supports(&self, roles: &Roles) -> bool {
        roles.pair(self.pair).is_some()
    }

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64> {
        let (i, j) = pair_or_err(snap.roles, self.pair, &self.name)?;
        Ok(snap.concurrences()?.get(i, j))
    }
}

struct SiteProbability {
    name: String,
    description: String,
    site: SiteRole,
}

impl Quantity for SiteProbability {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        &self.description
    }

    fn supports(&self, roles: &Roles) -> bool {
        roles.site(self.site).is_some()
    }

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64> {
        let s = site_or_err(snap.roles, self.site, &self.name)?;
        Ok(snap.amplitudes.get(s)?.norm_sqr())
    }
}

struct SiteSpin {
    name: String,
    description: String,
    site: SiteRole,
}

impl Quantity for SiteSpin {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        &self.description
    }

    fn supports(&self, roles: &Roles) -> bool {
        roles.site(self.site).is_some()
    }

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64> {
        let s = site_or_err(snap.roles, self.site, &self.name)?;
        spin_expectation(&snap.state, s, Axis::Z)
    }
}

struct PairCorrelator {
    name: String,
    description: String,
    pair: PairRole,
    axis: Axis,
}

impl Quantity for PairCorrelator {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        &self.description
    }

    fn supports(&self, roles: &Roles) -> bool {
        roles.pair(self.pair).is_some()
    }

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64> {
        let (i, j) = pair_or_err(snap.roles, self.pair, &self.name)?;
        two_point_correlator(&snap.state, i, j, self.axis)
    }
}

#[derive(Clone, Copy)]
enum Aggregate {
    SumConcurrence,
    Spread,
    WDistance,
    WFidelity,
    Magnetization,
    Norm,
}

struct AggregateQuantity {
    name: &'static str,
    description: &'static str,
    kind: Aggregate,
}

impl Quantity for AggregateQuantity {
    fn name(&self) -> &str {
        self.name
    }

    fn description(&self) -> &str {
        self.description
    }

    fn supports(&self, _roles: &Roles) -> bool {
        true
    }

    fn evaluate(&self, snap: &Snapshot<'_>) -> Result<f64> {
        Ok(match self.kind {
            Aggregate::SumConcurrence => snap.concurrences()?.sum(),
            Aggregate::Spread => snap.concurrences()?.spread(),
            Aggregate::WDistance => snap.concurrences()?.w_distance(),
            Aggregate::WFidelity => w_state_fidelity(&snap.amplitudes),
            Aggregate::Magnetization => total_magnetization(&snap.state),
            Aggregate::Norm => snap.state.norm_sqr().sqrt(),
        })
    }
}

/// Name-keyed registry of quantities.
#[derive(Default)]
pub struct QuantityCatalog {
    entries: BTreeMap<String, Box<dyn Quantity>>,
}

impl QuantityCatalog {
    pub fn register(&mut self, q: Box<dyn Quantity>) {
        self.entries.insert(q.name().to_string(), q);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Quantity> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownQuantity(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Look up every name and check the scenario defines its roles.
    pub fn resolve<'c>(&'c self, names: &[String], roles: &Roles) -> Result<Vec<&'c dyn Quantity>> {
        names
            .iter()
            .map(|n| {
                let q = self.get(n)?;
                if !q.supports(roles) {
                    return Err(Error::RoleUnavailable {
                        name: n.clone(),
                        scenario: roles.kind().to_string(),
                    });
                }
                Ok(q)
            })
            .collect()
    }

    /// The built-in catalog.
    pub fn standard() -> Self {
        let mut cat = Self::default();
        let pairs = [
            ("ucp_l", PairRole::UcpL, "central qubit and a ligand (COPS)"),
            ("l_l", PairRole::LL, "two ligands (COPS)"),
            (
                "cp_ul",
                PairRole::CpUl,
                "central qubit and the excited ligand (LOPS)",
            ),
            (
                "cp_nul",
                PairRole::CpNul,
                "central qubit and an unexcited ligand (LOPS)",
            ),
            (
                "ul_nul",
                PairRole::UlNul,
                "excited and unexcited ligand (LOPS)",
            ),
            ("nul_nul", PairRole::NulNul, "two unexcited ligands (LOPS)"),
        ];
        let sites = [
            ("ucp", SiteRole::Ucp, "central qubit (COPS)"),
            ("l", SiteRole::L, "a ligand (COPS)"),
            ("cp", SiteRole::Cp, "central qubit (LOPS)"),
            ("ul", SiteRole::Ul, "excited ligand (LOPS)"),
            ("nul", SiteRole::Nul, "an unexcited ligand (LOPS)"),
        ];
        for (suffix, pair, what) in pairs {
            cat.register(Box::new(PairConcurrence {
                name: format!("c_{suffix}"),
                description: format!("concurrence, {what}"),
                pair,
            }));
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                cat.register(Box::new(PairCorrelator {
                    name: format!("s{axis}s{axis}_{suffix}"),
                    description: format!("<S^{axis} S^{axis}>, {what}"),
                    pair,
                    axis,
                }));
            }
        }
        for (suffix, site, what) in sites {
            cat.register(Box::new(SiteProbability {
                name: format!("p_{suffix}"),
                description: format!("one-particle probability, {what}"),
                site,
            }));
            cat.register(Box::new(SiteSpin {
                name: format!("sz_{suffix}"),
                description: format!("<S^z>, {what}"),
                site,
            }));
        }
        let aggregates = [
            (
                "sum_c",
                "sum of concurrences over all pairs",
                Aggregate::SumConcurrence,
            ),
            (
                "spread",
                "max - min of pairwise concurrences",
                Aggregate::Spread,
            ),
            (
                "w_distance",
                "max |C - 2/N| over pairs",
                Aggregate::WDistance,
            ),
            (
                "w_fidelity",
                "overlap with the nearest W state",
                Aggregate::WFidelity,
            ),
            ("m_total", "total magnetization", Aggregate::Magnetization),
            ("norm", "state norm", Aggregate::Norm),
        ];
        for (name, description, kind) in aggregates {
            cat.register(Box::new(AggregateQuantity {
                name,
                description,
                kind,
            }));
        }
        cat
    }

    /// Shared instance of [`QuantityCatalog::standard`].
    pub fn global() -> &'static QuantityCatalog {
        static CATALOG: OnceLock<QuantityCatalog> = OnceLock::new();
        CATALOG.get_or_init(QuantityCatalog::standard)
    }
}
