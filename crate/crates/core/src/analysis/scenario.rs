use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{pairwise_concurrence_matrix, ConcurrenceMatrix};
use crate::error::{Error, Result};
use crate::evolution::SectorDynamics;
use crate::linalg::StateVector;
use crate::model::{embed_one_particle, OneParticleAmplitudes, StarModel};

/// Initial one-particle state of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Central spin up, ligands down.
    Cops,
    /// A single ligand (1-based site) up.
    Lops { excited_ligand: usize },
    /// Arbitrary normalized one-particle amplitudes at t = 0.
    CustomAmplitudes(Vec<Complex64>),
}

impl Scenario {
    /// The canonical LOPS |00…01⟩: the last ligand excited.
    pub fn lops_last(model: &StarModel) -> Self {
        Scenario::Lops {
            excited_ligand: model.ligand_count(),
        }
    }

    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::Cops => ScenarioKind::Cops,
            Scenario::Lops { .. } => ScenarioKind::Lops,
            Scenario::CustomAmplitudes(_) => ScenarioKind::Custom,
        }
    }

    pub fn initial(&self, model: &StarModel) -> Result<OneParticleAmplitudes> {
        let n = model.qubits();
        match self {
            Scenario::Cops => OneParticleAmplitudes::localized(n, 0),
            Scenario::Lops { excited_ligand } => {
                if *excited_ligand == 0 || *excited_ligand > model.ligand_count() {
                    return Err(Error::IndexOutOfRange {
                        index: *excited_ligand,
                        len: n,
                    });
                }
                OneParticleAmplitudes::localized(n, *excited_ligand)
            }
            Scenario::CustomAmplitudes(amps) => {
                if amps.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: amps.len(),
                    });
                }
                OneParticleAmplitudes::new(amps.clone(), 0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Cops,
    Lops,
    Custom,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Cops => "cops",
            ScenarioKind::Lops => "lops",
            ScenarioKind::Custom => "custom-amplitudes",
        })
    }
}

/// Named single sites used by quantity names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteRole {
    /// Central qubit in the COPS naming.
    Ucp,
    /// Representative ligand in the COPS naming.
    L,
    /// Central qubit in the LOPS naming.
    Cp,
    /// The initially excited ligand.
    Ul,
    /// A ligand that was not initially excited.
    Nul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRole {
    UcpL,
    LL,
    CpUl,
    CpNul,
    UlNul,
    NulNul,
}

/// Resolution of role names to site indices for a given scenario and model.
#[derive(Debug, Clone, PartialEq)]
pub struct Roles {
    kind: ScenarioKind,
    ligands: usize,
    excited: Option<usize>,
}

impl Roles {
    pub fn new(model: &StarModel, scenario: &Scenario) -> Self {
        let excited = match scenario {
            Scenario::Lops { excited_ligand } => Some(*excited_ligand),
            _ => None,
        };
        Self {
            kind: scenario.kind(),
            ligands: model.ligand_count(),
            excited,
        }
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    fn unexcited(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.ligands).filter(move |&s| Some(s) != self.excited)
    }

    pub fn site(&self, role: SiteRole) -> Option<usize> {
        let lops = self.kind == ScenarioKind::Lops;
        match role {
            SiteRole::Ucp if !lops => Some(0),
            SiteRole::L if !lops => Some(1),
            SiteRole::Cp if lops => Some(0),
            SiteRole::Ul if lops => self.excited,
            SiteRole::Nul if lops => self.unexcited().next(),
            _ => None,
        }
    }

    pub fn pair(&self, role: PairRole) -> Option<(usize, usize)> {
        use SiteRole::*;
        match role {
            PairRole::UcpL => Some((self.site(Ucp)?, self.site(L)?)),
            PairRole::LL => (!self.is_lops() && self.ligands >= 2).then_some((1, 2)),
            PairRole::CpUl => Some((self.site(Cp)?, self.site(Ul)?)),
            PairRole::CpNul => Some((self.site(Cp)?, self.site(Nul)?)),
            PairRole::UlNul => Some((self.site(Ul)?, self.site(Nul)?)),
            PairRole::NulNul => {
                if !self.is_lops() {
                    return None;
                }
                let mut it = self.unexcited();
                Some((it.next()?, it.next()?))
            }
        }
    }

    fn is_lops(&self) -> bool {
        self.kind == ScenarioKind::Lops
    }
}

/// Everything the quantities need at one instant.
pub struct Snapshot<'a> {
    pub t: f64,
    pub roles: &'a Roles,
    pub amplitudes: OneParticleAmplitudes,
    pub state: StateVector,
    concurrences: std::cell::OnceCell<ConcurrenceMatrix>,
}

impl<'a> Snapshot<'a> {
    /// All pairwise concurrences through partial trace + Wootters, computed once.
    pub fn concurrences(&self) -> Result<&ConcurrenceMatrix> {
        if let Some(c) = self.concurrences.get() {
            return Ok(c);
        }
        let c = pairwise_concurrence_matrix(&self.state)?;
        Ok(self.concurrences.get_or_init(|| c))
    }
}

/// One-particle trajectory of a model from a scenario's initial state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    model: StarModel,
    scenario: Scenario,
    roles: Roles,
    dynamics: SectorDynamics,
    initial: OneParticleAmplitudes,
}

impl Trajectory {
    pub fn new(model: &StarModel, scenario: &Scenario) -> Result<Self> {
        let initial = scenario.initial(model)?;
        Ok(Self {
            model: *model,
            scenario: scenario.clone(),
            roles: Roles::new(model, scenario),
            dynamics: SectorDynamics::new(model)?,
            initial,
        })
    }

    pub fn model(&self) -> &StarModel {
        &self.model
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn amplitudes(&self, t: f64) -> Result<OneParticleAmplitudes> {
        self.dynamics.evolve(&self.initial, t)
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot<'_>> {
        let amplitudes = self.amplitudes(t)?;
        let state = embed_one_particle(&amplitudes, &self.model)?;
        Ok(Snapshot {
            t,
            roles: &self.roles,
            amplitudes,
            state,
            concurrences: std::cell::OnceCell::new(),
        })
    }
}
