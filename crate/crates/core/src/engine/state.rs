use serde::{Deserialize, Serialize};

use crate::model::{EquipmentSpec, ModeKind};

/// Lifecycle phase of one equipment. Degraded and critical waiting are
/// exclusive: a critical failure absorbs a pending degraded condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Phase {
    Operating,
    Standby,
    DegradedWaiting,
    CriticalWaiting,
    UnderRepair(ModeKind),
    InPm { capacity_loss: f64 },
    OutOfService,
}

impl Phase {
    /// Waiting for or undergoing corrective repair.
    pub fn is_failed(self) -> bool {
        matches!(self, Phase::DegradedWaiting | Phase::CriticalWaiting | Phase::UnderRepair(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquipmentState {
    pub phase: Phase,
    pub crew_mobilizing: bool,
    pub spare_on_order: bool,
}

impl EquipmentState {
    pub fn new(phase: Phase) -> Self {
        Self { phase, crew_mobilizing: false, spare_on_order: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrewPresence {
    Offsite,
    Mobilizing,
    OnSite,
}

pub(crate) fn phase_capacity(phase: Phase, loss: impl Fn(ModeKind, bool) -> f64) -> f64 {
    match phase {
        Phase::Operating => 1.0,
        Phase::DegradedWaiting => 1.0 - loss(ModeKind::Degraded, false),
        Phase::CriticalWaiting => 1.0 - loss(ModeKind::Critical, false),
        Phase::UnderRepair(kind) => 1.0 - loss(kind, true),
        Phase::InPm { capacity_loss } => 1.0 - capacity_loss,
        Phase::Standby | Phase::OutOfService => 0.0,
    }
}

/// Capacity an equipment contributes, as a fraction of its nominal.
/// A standby unit contributes nothing until the engine activates it.
pub fn effective_capacity(state: &EquipmentState, spec: &EquipmentSpec, plant_shutdown: bool) -> f64 {
    if plant_shutdown {
        return 0.0;
    }
    let c = phase_capacity(state.phase, |kind, repairing| {
        spec.mode(kind).map_or(1.0, |m| {
            if repairing {
                m.capacity_loss_during_repair
            } else {
                m.capacity_loss_before_repair
            }
        })
    });
    c.clamp(0.0, 1.0)
}
