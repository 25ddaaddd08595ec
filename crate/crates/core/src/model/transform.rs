//! Scenario transforms used by the indicator studies.

use alloc::string::String;
use alloc::vec::Vec;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("subsystem is empty")]
    EmptySubsystem,
    #[error("unknown equipment `{0}`")]
    UnknownEquipment(String),
}

fn check_members(model: &Model, members: &[String]) -> Result<(), TransformError> {
    if members.is_empty() {
        return Err(TransformError::EmptySubsystem);
    }
    match members.iter().find(|id| model.equipment(id).is_none()) {
        Some(id) => Err(TransformError::UnknownEquipment(id.clone())),
        None => Ok(()),
    }
}

/// Drops `members` from every CCF group. A group left with fewer than two
/// members disappears, and a lone survivor keeps only its independent share
/// `(1 - beta) * rate` of the critical rate.
fn detach_from_ccf(model: &mut Model, members: &[String]) {
    let mut degenerate: Vec<(String, f64)> = Vec::new();
    model.ccf_groups.retain_mut(|group| {
        group.member_ids.retain(|id| !members.contains(id));
        if group.member_ids.len() >= 2 {
            return true;
        }
        for id in &group.member_ids {
            degenerate.push((id.clone(), group.beta));
        }
        false
    });
    for (id, beta) in degenerate {
        if let Some(critical) = model.equipment_mut(&id).and_then(|e| e.mode_mut(ModeKind::Critical)) {
            critical.failure_rate *= 1.0 - beta;
        }
    }
}

/// Scenario where the members are held at zero capacity for the whole
/// horizon with no corrective or preventive maintenance. Their crews and
/// spare pools stay declared and serve the rest of the plant.
pub fn force_zero(model: &Model, members: &[String]) -> Result<Model, TransformError> {
    check_members(model, members)?;
    let mut m = model.clone();
    for id in members {
        m.equipment_mut(id).expect("checked").out_of_service = true;
    }
    m.pm_tasks.retain(|t| !members.contains(&t.equipment_id));
    detach_from_ccf(&mut m, members);
    Ok(m)
}

/// Scenario where the members never fail: zero failure rates, no demand
/// failures, no CCF membership and no preventive maintenance.
pub fn make_perfect(model: &Model, members: &[String]) -> Result<Model, TransformError> {
    check_members(model, members)?;
    let mut m = model.clone();
    for id in members {
        let eq = m.equipment_mut(id).expect("checked");
        for mode in &mut eq.modes {
            mode.failure_rate = 0.0;
        }
        if eq.demand_failure_prob.is_some() {
            eq.demand_failure_prob = Some(0.0);
        }
    }
    m.pm_tasks.retain(|t| !members.contains(&t.equipment_id));
    detach_from_ccf(&mut m, members);
    Ok(m)
}
