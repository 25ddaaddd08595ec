//! Declarative system description.
//!
//! A [`Model`] is the immutable input to every simulation: the flow network,
//! equipment with their failure modes, common-cause groups, maintenance
//! crews, spare pools, preventive-maintenance tasks and planned shutdowns.
//! All durations are hours; all capacities are fractions of a single
//! reference production of 100%.

mod prepare;
mod reference;
mod transform;
mod validate;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use prepare::{beta_split, BetaSplitError, ModelError, PreparedModel};
pub use reference::build_reference_model;
pub use validate::{validate, Diagnostic, Severity};

/// Hours in one calendar year.
pub const HOURS_PER_YEAR: f64 = 8760.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub horizon_hours: f64,
    pub network: Network,
    pub equipment: Vec<EquipmentSpec>,
    #[serde(default)]
    pub ccf_groups: Vec<CcfGroup>,
    #[serde(default)]
    pub crews: Vec<Crew>,
    #[serde(default)]
    pub spare_pools: Vec<SparePool>,
    #[serde(default)]
    pub pm_tasks: Vec<PmTask>,
    #[serde(default)]
    pub shutdowns: Vec<ShutdownSchedule>,
}

/// Series composition of stages from inlet to outlet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Single(String),
    Parallel(ParallelStage),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParallelStage {
    pub branches: Vec<Branch>,
    pub required_active_branches: u32,
}

/// One path through a parallel block. `capacity` is the branch's nominal
/// throughput as a fraction of the enclosing scope's reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub stages: Vec<Stage>,
    pub capacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Active,
    PassiveStandby,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentSpec {
    pub id: String,
    /// Equipment type, used to group units into subsystems for indicator
    /// studies. Defaults to the unit's own id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standby_group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand_failure_prob: Option<f64>,
    pub modes: Vec<FailureModeSpec>,
    pub crew: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spare_pool: Option<String>,
    /// Unit held at zero capacity for the whole horizon: it never fails,
    /// is never maintained and never answers a standby demand.
    #[serde(default, skip_serializing_if = "is_false")]
    pub out_of_service: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl EquipmentSpec {
    pub fn family(&self) -> &str {
        self.family.as_deref().unwrap_or(&self.id)
    }

    pub fn mode(&self, kind: ModeKind) -> Option<&FailureModeSpec> {
        self.modes.iter().find(|m| m.kind == kind)
    }

    pub fn mode_mut(&mut self, kind: ModeKind) -> Option<&mut FailureModeSpec> {
        self.modes.iter_mut().find(|m| m.kind == kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Degraded,
    Critical,
}

impl ModeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Degraded => "degraded",
            ModeKind::Critical => "critical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureModeSpec {
    pub kind: ModeKind,
    /// Per-hour failure rate.
    pub failure_rate: f64,
    /// Per-hour repair rate; the mean repair duration is its reciprocal.
    pub repair_rate: f64,
    pub capacity_loss_before_repair: f64,
    pub capacity_loss_during_repair: f64,
}

/// Beta-factor common-cause group on the critical mode of its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcfGroup {
    pub id: String,
    pub member_ids: Vec<String>,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crew {
    pub id: String,
    #[serde(default = "default_crew_size")]
    pub size: u32,
    pub mobilization_hours: f64,
}

fn default_crew_size() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestockPolicy {
    OnDemand,
    Periodic { interval_hours: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparePool {
    pub id: String,
    pub initial_stock: u32,
    pub restock_to: u32,
    pub reorder_threshold: u32,
    pub lead_time_hours: f64,
    pub policy: RestockPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmTask {
    pub equipment_id: String,
    pub interval_hours: f64,
    pub duration_hours: f64,
    pub capacity_loss: f64,
    pub align_with_shutdown: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShutdownSchedule {
    pub interval_hours: f64,
    pub duration_hours: f64,
    pub capacity_loss: f64,
}

impl ShutdownSchedule {
    /// Start times `k * interval` (k >= 1) of every occurrence that ends
    /// within the horizon.
    pub fn occurrences(&self, horizon_hours: f64) -> impl Iterator<Item = f64> + '_ {
        let interval = self.interval_hours;
        let duration = self.duration_hours;
        (1u32..)
            .map(move |k| k as f64 * interval)
            .take_while(move |&start| interval > 0.0 && start + duration <= horizon_hours)
    }
}

impl Stage {
    /// Visits every equipment id referenced by this stage, depth first.
    pub fn for_each_equipment<'a>(&'a self, f: &mut dyn FnMut(&'a str)) {
        match self {
            Stage::Single(id) => f(id),
            Stage::Parallel(p) => {
                for branch in &p.branches {
                    for stage in &branch.stages {
                        stage.for_each_equipment(f);
                    }
                }
            }
        }
    }
}

impl Network {
    pub fn for_each_equipment<'a>(&'a self, f: &mut dyn FnMut(&'a str)) {
        for stage in &self.stages {
            stage.for_each_equipment(f);
        }
    }

    pub fn equipment_ids(&self) -> Vec<&str> {
        let mut ids = Vec::new();
        self.for_each_equipment(&mut |id| ids.push(id));
        ids
    }
}

impl Model {
    pub fn equipment(&self, id: &str) -> Option<&EquipmentSpec> {
        self.equipment.iter().find(|e| e.id == id)
    }

    pub fn equipment_mut(&mut self, id: &str) -> Option<&mut EquipmentSpec> {
        self.equipment.iter_mut().find(|e| e.id == id)
    }

    /// Same model with every crew mobilization and spare lead time set to 0.
    pub fn with_zero_logistics(&self) -> Model {
        let mut m = self.clone();
        for crew in &mut m.crews {
            crew.mobilization_hours = 0.0;
        }
        for pool in &mut m.spare_pools {
            pool.lead_time_hours = 0.0;
        }
        m
    }
}

pub use transform::{force_zero, make_perfect, TransformError};
