//! Simulation-ready form of a validated model.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::validate::{validate, Diagnostic, Severity};
use super::*;
use crate::flow::CompiledNetwork;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BetaSplitError {
    #[error("beta {0} is outside [0, 1]")]
    BetaOutOfRange(f64),
    #[error("failure rate {0} is negative or not finite")]
    InvalidRate(f64),
}

/// Splits a critical failure rate into its independent part and the
/// common-cause part carried by the group: `((1 - beta) * rate, beta * rate)`.
///
/// The independent part is computed as `rate - ccf` so that the two outputs
/// add back to the input within one ulp.
pub fn beta_split(rate: f64, beta: f64) -> Result<(f64, f64), BetaSplitError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(BetaSplitError::BetaOutOfRange(beta));
    }
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(BetaSplitError::InvalidRate(rate));
    }
    let ccf = beta * rate;
    Ok((rate - ccf, ccf))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("model has {} validation error(s)", .0.iter().filter(|d| d.severity == Severity::Error).count())]
    Invalid(Vec<Diagnostic>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PreparedMode {
    pub independent_rate: f64,
    pub repair_rate: f64,
    pub loss_before: f64,
    pub loss_during: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub id: String,
    pub role: Role,
    pub degraded: Option<PreparedMode>,
    pub critical: Option<PreparedMode>,
    pub crew: usize,
    pub pool: Option<usize>,
    pub standby_group: Option<usize>,
    pub demand_failure_prob: f64,
    pub out_of_service: bool,
    pub stream: u64,
}

impl Unit {
    pub fn mode(&self, kind: ModeKind) -> Option<&PreparedMode> {
        match kind {
            ModeKind::Degraded => self.degraded.as_ref(),
            ModeKind::Critical => self.critical.as_ref(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PreparedCcf {
    pub members: Vec<usize>,
    pub rate: f64,
    pub stream: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct StandbyGroup {
    pub members: Vec<usize>,
    /// Number of members that must be in service: the active-role count.
    pub required: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct PreparedPm {
    pub unit: usize,
    pub interval: f64,
    pub duration: f64,
    pub capacity_loss: f64,
    pub align_with_shutdown: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ShutdownWindow {
    pub start: f64,
    pub end: f64,
    pub capacity_loss: f64,
}

/// A validated model with identifiers resolved to indices and CCF rates
/// split out of the members' critical modes.
///
/// Immutable; share it freely between concurrent runs.
#[derive(Debug, Clone)]
pub struct PreparedModel {
    source: Model,
    warnings: Vec<Diagnostic>,
    pub(crate) horizon: f64,
    pub(crate) units: Vec<Unit>,
    pub(crate) network: CompiledNetwork,
    pub(crate) ccf: Vec<PreparedCcf>,
    pub(crate) standby_groups: Vec<StandbyGroup>,
    pub(crate) crews: Vec<Crew>,
    pub(crate) pools: Vec<SparePool>,
    pub(crate) pm: Vec<PreparedPm>,
    pub(crate) shutdowns: Vec<ShutdownWindow>,
}

/// FNV-1a; stable across platforms and releases, used to derive random
/// substream indices from identifiers.
pub(crate) fn stable_hash(tag: &str, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain([0u8]).chain(id.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl PreparedModel {
    pub fn new(model: &Model) -> Result<Self, ModelError> {
        let diagnostics = validate(model);
        if diagnostics.iter().any(|d| d.severity == Severity::Error) {
            return Err(ModelError::Invalid(diagnostics));
        }

        let unit_index: BTreeMap<&str, usize> =
            model.equipment.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let crew_index: BTreeMap<&str, usize> =
            model.crews.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
        let pool_index: BTreeMap<&str, usize> =
            model.spare_pools.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();

        let mut group_names: Vec<&str> = Vec::new();
        let mut units: Vec<Unit> = model
            .equipment
            .iter()
            .map(|e| {
                let prep = |kind| {
                    e.mode(kind).map(|m| PreparedMode {
                        independent_rate: m.failure_rate,
                        repair_rate: m.repair_rate,
                        loss_before: m.capacity_loss_before_repair,
                        loss_during: m.capacity_loss_during_repair,
                    })
                };
                let standby_group = e.standby_group.as_deref().map(|g| {
                    group_names.iter().position(|&n| n == g).unwrap_or_else(|| {
                        group_names.push(g);
                        group_names.len() - 1
                    })
                });
                Unit {
                    id: e.id.clone(),
                    role: e.role,
                    degraded: prep(ModeKind::Degraded),
                    critical: prep(ModeKind::Critical),
                    crew: crew_index[e.crew.as_str()],
                    pool: e.spare_pool.as_deref().map(|p| pool_index[p]),
                    standby_group,
                    demand_failure_prob: e.demand_failure_prob.unwrap_or(0.0),
                    out_of_service: e.out_of_service,
                    stream: stable_hash("equipment", &e.id),
                }
            })
            .collect();

        let mut ccf = Vec::with_capacity(model.ccf_groups.len());
        for group in &model.ccf_groups {
            let members: Vec<usize> = group.member_ids.iter().map(|id| unit_index[id.as_str()]).collect();
            let mut group_rate = 0.0;
            for &m in &members {
                let critical = units[m].critical.as_mut().expect("validated: CCF member has a critical mode");
                let (independent, common) = beta_split(critical.independent_rate, group.beta)
                    .expect("validated: beta and rate in range");
                critical.independent_rate = independent;
                group_rate = common;
            }
            ccf.push(PreparedCcf { members, rate: group_rate, stream: stable_hash("ccf", &group.id) });
        }

        let standby_groups = group_names
            .iter()
            .enumerate()
            .map(|(g, _)| {
                let members: Vec<usize> =
                    (0..units.len()).filter(|&u| units[u].standby_group == Some(g)).collect();
                let required = members.iter().filter(|&&u| units[u].role == Role::Active).count();
                StandbyGroup { members, required }
            })
            .collect();

        let pm = model
            .pm_tasks
            .iter()
            .map(|t| PreparedPm {
                unit: unit_index[t.equipment_id.as_str()],
                interval: t.interval_hours,
                duration: t.duration_hours,
                capacity_loss: t.capacity_loss,
                align_with_shutdown: t.align_with_shutdown,
            })
            .collect();

        let mut shutdowns: Vec<ShutdownWindow> = model
            .shutdowns
            .iter()
            .flat_map(|s| {
                s.occurrences(model.horizon_hours).map(move |start| ShutdownWindow {
                    start,
                    end: start + s.duration_hours,
                    capacity_loss: s.capacity_loss,
                })
            })
            .collect();
        shutdowns.sort_by(|a, b| a.start.total_cmp(&b.start));

        let network = CompiledNetwork::compile(&model.network, &unit_index);

        Ok(PreparedModel {
            source: model.clone(),
            warnings: diagnostics,
            horizon: model.horizon_hours,
            units,
            network,
            ccf,
            standby_groups,
            crews: model.crews.clone(),
            pools: model.spare_pools.clone(),
            pm,
            shutdowns,
        })
    }

    pub fn model(&self) -> &Model {
        &self.source
    }

    /// Non-fatal diagnostics raised during validation.
    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn horizon_hours(&self) -> f64 {
        self.horizon
    }

    pub fn equipment_ids(&self) -> impl Iterator<Item = &str> {
        self.units.iter().map(|u| u.id.as_str())
    }

    /// Independent (post-split) failure rate of one mode of one equipment.
    pub fn independent_rate(&self, equipment_id: &str, kind: ModeKind) -> Option<f64> {
        self.units.iter().find(|u| u.id == equipment_id)?.mode(kind).map(|m| m.independent_rate)
    }

    /// Total common-cause critical hazard acting on one equipment.
    pub fn ccf_rate_on(&self, equipment_id: &str) -> f64 {
        let Some(u) = self.units.iter().position(|u| u.id == equipment_id) else { return 0.0 };
        self.ccf.iter().filter(|g| g.members.contains(&u)).map(|g| g.rate).sum()
    }
}
