//! Cross-run aggregation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::engine::RunResult;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("no runs to aggregate")]
    Empty,
    #[error("planned volume is zero")]
    ZeroPlannedVolume,
    #[error("runs disagree on horizon, bucket layout or equipment list")]
    LayoutMismatch,
}

/// Produced volume over planned volume.
pub fn production_availability(run: &RunResult) -> Result<f64, StatsError> {
    if run.planned_volume <= 0.0 {
        return Err(StatsError::ZeroPlannedVolume);
    }
    Ok(run.produced_volume / run.planned_volume)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EquipmentMeans {
    pub id: String,
    pub degraded_failures: f64,
    pub critical_failures: f64,
    pub ccf_failures: f64,
    pub demand_failures: f64,
    pub repairs: f64,
    pub pm_executed: f64,
    pub downtime_hours: f64,
    pub repair_wait_hours: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub run_count: usize,
    pub mean_pa: f64,
    /// Sample standard deviation of per-run PA (0 for a single run).
    pub std_pa: f64,
    /// Standard error of the mean PA.
    pub sem_pa: f64,
    pub horizon_hours: f64,
    pub bucket_hours: f64,
    /// Mean throughput fraction per bucket.
    pub profile: Vec<f64>,
    pub equipment: Vec<EquipmentMeans>,
}

impl BatchStats {
    pub fn bucket_start(&self, b: usize) -> f64 {
        b as f64 * self.bucket_hours
    }

    pub fn bucket_width(&self, b: usize) -> f64 {
        (self.horizon_hours - self.bucket_start(b)).min(self.bucket_hours)
    }

    /// Index of the bucket containing time `t`.
    pub fn bucket_of(&self, t: f64) -> usize {
        ((t / self.bucket_hours) as usize).min(self.profile.len().saturating_sub(1))
    }
}

/// Folds runs into batch statistics. Runs are merged in run-index order, so
/// the result does not depend on the order of `runs`.
pub fn aggregate(runs: &[RunResult]) -> Result<BatchStats, StatsError> {
    let first = runs.first().ok_or(StatsError::Empty)?;
    let mut ordered: Vec<&RunResult> = runs.iter().collect();
    ordered.sort_by(|a, b| a.run_index.cmp(&b.run_index).then(a.seed.cmp(&b.seed)));

    let buckets = first.bucket_integrals.len();
    for r in &ordered {
        if r.horizon_hours != first.horizon_hours
            || r.bucket_hours != first.bucket_hours
            || r.planned_volume != first.planned_volume
            || r.bucket_integrals.len() != buckets
            || r.equipment.len() != first.equipment.len()
        {
            return Err(StatsError::LayoutMismatch);
        }
    }

    let n = ordered.len();
    let pas = ordered.iter().map(|r| production_availability(r)).collect::<Result<Vec<_>, _>>()?;
    let mean_pa = pas.iter().sum::<f64>() / n as f64;
    let std_pa = if n > 1 {
        libm::sqrt(pas.iter().map(|p| (p - mean_pa) * (p - mean_pa)).sum::<f64>() / (n - 1) as f64)
    } else {
        0.0
    };

    let mut profile = vec![0.0; buckets];
    for r in &ordered {
        for (b, acc) in profile.iter_mut().enumerate() {
            *acc += r.bucket_integrals[b] / r.bucket_width(b);
        }
    }
    for p in &mut profile {
        *p /= n as f64;
    }

    let mut equipment: Vec<EquipmentMeans> = first
        .equipment
        .iter()
        .map(|e| EquipmentMeans { id: e.id.clone(), ..Default::default() })
        .collect();
    for r in &ordered {
        for (acc, c) in equipment.iter_mut().zip(&r.equipment) {
            acc.degraded_failures += c.degraded_failures as f64;
            acc.critical_failures += c.critical_failures as f64;
            acc.ccf_failures += c.ccf_failures as f64;
            acc.demand_failures += c.demand_failures as f64;
            acc.repairs += c.repairs as f64;
            acc.pm_executed += c.pm_executed as f64;
            acc.downtime_hours += c.downtime_hours;
            acc.repair_wait_hours += c.repair_wait_hours;
        }
    }
    let inv = 1.0 / n as f64;
    for e in &mut equipment {
        e.degraded_failures *= inv;
        e.critical_failures *= inv;
        e.ccf_failures *= inv;
        e.demand_failures *= inv;
        e.repairs *= inv;
        e.pm_executed *= inv;
        e.downtime_hours *= inv;
        e.repair_wait_hours *= inv;
    }

    Ok(BatchStats {
        run_count: n,
        mean_pa,
        std_pa,
        sem_pa: std_pa / libm::sqrt(n as f64),
        horizon_hours: first.horizon_hours,
        bucket_hours: first.bucket_hours,
        profile,
        equipment,
    })
}
