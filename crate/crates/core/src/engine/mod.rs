//! Monte Carlo discrete-event kernel.
//!
//! One call to [`run_simulation`] plays a single history of the plant from
//! `t = 0` to the horizon. Failures, repairs, preventive maintenance,
//! shutdowns and logistics are events on a time-ordered queue; after every
//! event the plant throughput is recomputed and integrated piecewise
//! constant into per-bucket produced volume.
//!
//! Maintenance conventions:
//!
//! * A crew called to an empty site pays its mobilization time once, then
//!   chains queued jobs and leaves only when it has nothing left to do.
//! * Preventive maintenance is planned work: the crew is on site at the due
//!   time. A PM waits behind corrective jobs if the crew is busy. Its
//!   capacity loss applies only while it executes, and it does not call a
//!   standby unit.
//! * A PM due in the same calendar year as a shutdown is carried out inside
//!   the shutdown window.
//! * Failure clocks do not run while a unit is stopped (standby, own PM,
//!   plant shutdown); they resume where they stopped.
//! * Jobs are served FIFO per crew. A corrective job waiting for a spare
//!   does not block later jobs.

mod queue;
mod rng;
mod sim;
mod state;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{ModeKind, PreparedModel};

pub use rng::{run_seed, sample_exponential, RandomStream};
pub use sim::StateView;
pub use state::{effective_capacity, CrewPresence, EquipmentState, Phase};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("bucket width must be a positive number of hours, got {0}")]
    InvalidBucket(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub bucket_hours: f64,
    /// Stop failure clocks during plant shutdowns.
    pub freeze_clocks_during_shutdown: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { bucket_hours: 24.0, freeze_clocks_during_shutdown: true }
    }
}

impl SimConfig {
    pub fn with_bucket(bucket_hours: f64) -> Self {
        Self { bucket_hours, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Failure { unit: usize, mode: ModeKind },
    CcfFailure { group: usize },
    CrewArrived { crew: usize },
    SpareArrived { pool: usize },
    SpareReview { pool: usize },
    RepairComplete { unit: usize },
    PmDue { task: usize },
    PmComplete { unit: usize },
    ShutdownStart { window: usize },
    ShutdownEnd { window: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub seq: u64,
    pub kind: EventKind,
}

/// Hooks into a running simulation, used by audits and tracing.
pub trait Observer {
    /// Called after each live event is applied.
    fn on_event(&mut self, _event: &Event, _state: &StateView<'_>) {}
    /// The plant delivered `throughput` over `[from, to)`.
    fn on_step(&mut self, _from: f64, _to: f64, _throughput: f64) {}
}

impl Observer for () {}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EquipmentCounters {
    pub id: String,
    pub degraded_failures: u32,
    /// All critical failures, including common-cause and demand failures.
    pub critical_failures: u32,
    pub ccf_failures: u32,
    pub demand_failures: u32,
    pub repairs: u32,
    pub pm_executed: u32,
    pub pm_in_shutdown: u32,
    pub pm_skipped: u32,
    /// Time from failure to end of repair, summed over failures.
    pub downtime_hours: f64,
    /// Time from failure to start of repair, summed over failures.
    pub repair_wait_hours: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_index: u32,
    pub seed: u64,
    pub horizon_hours: f64,
    pub bucket_hours: f64,
    /// Capacity-hours delivered; equals the sum of `bucket_integrals`.
    pub produced_volume: f64,
    /// Horizon at 100% of reference production.
    pub planned_volume: f64,
    pub bucket_integrals: Vec<f64>,
    pub equipment: Vec<EquipmentCounters>,
}

impl RunResult {
    /// Width of bucket `b`; the last one may be partial.
    pub fn bucket_width(&self, b: usize) -> f64 {
        let start = b as f64 * self.bucket_hours;
        (self.horizon_hours - start).min(self.bucket_hours)
    }
}

/// Number of profile buckets covering `horizon` at width `bucket`.
pub fn bucket_count(horizon: f64, bucket: f64) -> usize {
    let n = libm::ceil(horizon / bucket) as usize;
    n.max(1)
}

/// One seeded history of `model`, integrated into buckets of `bucket_hours`.
pub fn run_simulation(model: &PreparedModel, seed: u64, bucket_hours: f64) -> Result<RunResult, EngineError> {
    run_with(model, seed, 0, &SimConfig::with_bucket(bucket_hours), &mut ())
}

/// Fully parameterised run. `run_index` is recorded in the result and used
/// to order batch merges.
pub fn run_with<O: Observer>(
    model: &PreparedModel,
    seed: u64,
    run_index: u32,
    config: &SimConfig,
    observer: &mut O,
) -> Result<RunResult, EngineError> {
    if !(config.bucket_hours.is_finite() && config.bucket_hours > 0.0) {
        return Err(EngineError::InvalidBucket(config.bucket_hours));
    }
    Ok(sim::Simulation::new(model, seed, run_index, config, observer).run())
}

/// Run `run_index` of a batch seeded with `base_seed`.
pub fn run_indexed(
    model: &PreparedModel,
    base_seed: u64,
    run_index: u32,
    config: &SimConfig,
) -> Result<RunResult, EngineError> {
    run_with(model, run_seed(base_seed, run_index), run_index, config, &mut ())
}

/// Executes a batch of runs. Implementations may run concurrently but must
/// return results in run-index order.
pub trait BatchRunner {
    fn run_batch(
        &self,
        model: &PreparedModel,
        base_seed: u64,
        runs: u32,
        config: &SimConfig,
    ) -> Result<Vec<RunResult>, EngineError>;
}

/// Runs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BatchRunner for Sequential {
    fn run_batch(
        &self,
        model: &PreparedModel,
        base_seed: u64,
        runs: u32,
        config: &SimConfig,
    ) -> Result<Vec<RunResult>, EngineError> {
        (0..runs).map(|i| run_indexed(model, base_seed, i, config)).collect()
    }
}
