//! Subsystem performance indicators.
//!
//! Both indicators are obtained by simulating a transformed copy of the
//! model with the unchanged engine:
//!
//! * criticality: `1 - mean PA` with the subsystem held at zero capacity
//!   and none of its maintenance taking place;
//! * contribution to unavailability: `mean PA` with the subsystem made
//!   perfect minus the base `mean PA`. Base and scenario share the base
//!   seed and per-component random streams.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::engine::{BatchRunner, EngineError, SimConfig};
use crate::model::{force_zero, make_perfect, Model, ModelError, PreparedModel, TransformError};
use crate::stats::{aggregate, BatchStats, StatsError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndicatorError {
    #[error(transparent)]
    Subsystem(#[from] TransformError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Named set of equipment studied together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemSelector {
    pub name: String,
    pub members: Vec<String>,
}

impl SubsystemSelector {
    pub fn new(name: impl Into<String>, members: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { name: name.into(), members: members.into_iter().map(Into::into).collect() }
    }
}

/// The subsystems of a model's indicator table: one row per equipment
/// family, followed by one row per unit for families that form a standby
/// group. Single-unit families only get their family row.
pub fn standard_subsystems(model: &Model) -> Vec<SubsystemSelector> {
    let mut families: Vec<(&str, Vec<&str>)> = Vec::new();
    for eq in &model.equipment {
        match families.iter_mut().find(|(f, _)| *f == eq.family()) {
            Some((_, members)) => members.push(&eq.id),
            None => families.push((eq.family(), alloc::vec![eq.id.as_str()])),
        }
    }
    let mut out = Vec::new();
    for (family, members) in families {
        out.push(SubsystemSelector::new(family, members.iter().copied()));
        if members.len() > 1 {
            for id in &members {
                if model.equipment(id).is_some_and(|e| e.standby_group.is_some()) {
                    out.push(SubsystemSelector::new(*id, [*id]));
                }
            }
        }
    }
    out
}

/// Resolves a subsystem name: a family name or an equipment id.
pub fn resolve_subsystem(model: &Model, name: &str) -> Option<SubsystemSelector> {
    if let Some(s) = standard_subsystems(model).into_iter().find(|s| s.name == name) {
        return Some(s);
    }
    let family: Vec<&str> =
        model.equipment.iter().filter(|e| e.family() == name).map(|e| e.id.as_str()).collect();
    if !family.is_empty() {
        return Some(SubsystemSelector::new(name, family));
    }
    model.equipment(name).map(|e| SubsystemSelector::new(name, [e.id.to_string()]))
}

fn batch<R: BatchRunner>(
    model: &Model,
    runs: u32,
    seed: u64,
    config: &SimConfig,
    runner: &R,
) -> Result<BatchStats, IndicatorError> {
    let prepared = PreparedModel::new(model)?;
    let results = runner.run_batch(&prepared, seed, runs, config)?;
    Ok(aggregate(&results)?)
}

pub fn criticality<R: BatchRunner>(
    model: &Model,
    subsystem: &SubsystemSelector,
    runs: u32,
    seed: u64,
    config: &SimConfig,
    runner: &R,
) -> Result<f64, IndicatorError> {
    let scenario = force_zero(model, &subsystem.members)?;
    Ok(1.0 - batch(&scenario, runs, seed, config, runner)?.mean_pa)
}

pub fn contribution<R: BatchRunner>(
    model: &Model,
    subsystem: &SubsystemSelector,
    runs: u32,
    seed: u64,
    config: &SimConfig,
    runner: &R,
) -> Result<f64, IndicatorError> {
    let scenario = make_perfect(model, &subsystem.members)?;
    let base = batch(model, runs, seed, config, runner)?;
    Ok(batch(&scenario, runs, seed, config, runner)?.mean_pa - base.mean_pa)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRow {
    pub subsystem: SubsystemSelector,
    pub criticality: f64,
    pub contribution: f64,
    /// Standard error of the perfect-scenario mean PA.
    pub contribution_sem: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTable {
    pub base: BatchStats,
    pub rows: Vec<IndicatorRow>,
}

/// Criticality and contribution for every subsystem, sharing one base batch.
pub fn indicator_table<R: BatchRunner>(
    model: &Model,
    subsystems: &[SubsystemSelector],
    runs: u32,
    seed: u64,
    config: &SimConfig,
    runner: &R,
) -> Result<IndicatorTable, IndicatorError> {
    for s in subsystems {
        // surface selector errors before spending any simulation time
        force_zero(model, &s.members)?;
    }
    let base = batch(model, runs, seed, config, runner)?;
    let mut rows = Vec::with_capacity(subsystems.len());
    for s in subsystems {
        let zero = batch(&force_zero(model, &s.members)?, runs, seed, config, runner)?;
        let perfect = batch(&make_perfect(model, &s.members)?, runs, seed, config, runner)?;
        rows.push(IndicatorRow {
            subsystem: s.clone(),
            criticality: 1.0 - zero.mean_pa,
            contribution: perfect.mean_pa - base.mean_pa,
            contribution_sem: perfect.sem_pa,
        });
    }
    Ok(IndicatorTable { base, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Sequential;
    use crate::model::build_reference_model;

    #[test]
    fn reference_rows_match_case_study_layout() {
        let names: Vec<String> =
            standard_subsystems(&build_reference_model()).into_iter().map(|s| s.name).collect();
        assert_eq!(
            names,
            [
                "ESDV",
                "Separator",
                "Compressors",
                "Compressor-A",
                "Compressor-B",
                "Compressor-C",
                "Cooling",
                "Treatment",
                "Treatment-A",
                "Treatment-B",
            ]
        );
    }

    #[test]
    fn resolve_by_family_or_id() {
        let m = build_reference_model();
        assert_eq!(resolve_subsystem(&m, "ESDV").unwrap().members.len(), 4);
        assert_eq!(resolve_subsystem(&m, "Cooling-B1").unwrap().members, ["Cooling-B1"]);
        assert!(resolve_subsystem(&m, "Boiler").is_none());
    }

    #[test]
    fn series_subsystem_is_fully_critical() {
        let m = build_reference_model();
        let s = resolve_subsystem(&m, "Separator").unwrap();
        let c = criticality(&m, &s, 3, 1, &SimConfig::default(), &Sequential).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn unknown_member_is_rejected() {
        let m = build_reference_model();
        let s = SubsystemSelector::new("x", ["Nope"]);
        assert!(matches!(
            criticality(&m, &s, 1, 1, &SimConfig::default(), &Sequential),
            Err(IndicatorError::Subsystem(TransformError::UnknownEquipment(_)))
        ));
    }

    #[test]
    fn already_perfect_subsystem_contributes_nothing() {
        let mut m = build_reference_model();
        let s = resolve_subsystem(&m, "ESDV").unwrap();
        m = make_perfect(&m, &s.members).unwrap();
        let c = contribution(&m, &s, 4, 9, &SimConfig::default(), &Sequential).unwrap();
        assert_eq!(c, 0.0);
    }
}
