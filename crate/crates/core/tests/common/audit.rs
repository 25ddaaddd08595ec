//! Run-long audit observer.

use prodavail_core::engine::{effective_capacity, run_seed, run_with, Event, EventKind, Observer, Phase, SimConfig, StateView};
use prodavail_core::flow::{compute_throughput, CapacitySnapshot};
use prodavail_core::model::{Model, Role};
use prodavail_core::PreparedModel;

/// Checks every rule that must hold after each event and integrates an
/// independently recomputed throughput.
pub struct Audit {
    model: Model,
    pub violations: Vec<String>,
    pub integral: f64,
    last: (f64, f64),
    pub stepped: f64,
    pub events: usize,
}

impl Audit {
    pub fn new(model: &Model) -> Self {
        // at t = 0 every active unit runs and every standby unit waits
        let initial: CapacitySnapshot = model
            .equipment
            .iter()
            .map(|e| (e.id.clone(), if e.role == Role::Active && !e.out_of_service { 1.0 } else { 0.0 }))
            .collect();
        let thr = compute_throughput(&model.network, &initial).unwrap();
        Self { model: model.clone(), violations: Vec::new(), integral: 0.0, last: (0.0, thr), stepped: 0.0, events: 0 }
    }

    fn flag(&mut self, t: f64, what: String) {
        if self.violations.len() < 20 {
            self.violations.push(format!("t={t}: {what}"));
        }
    }

    pub fn finish(&mut self, horizon: f64) {
        let (t, thr) = self.last;
        self.integral += (horizon - t) * thr;
        self.last = (horizon, thr);
    }
}

impl Observer for Audit {
    fn on_event(&mut self, event: &Event, s: &StateView<'_>) {
        let t = s.time();
        self.events += 1;

        if matches!(event.kind, EventKind::Failure { .. } | EventKind::CcfFailure { .. }) && s.in_shutdown() {
            self.flag(t, format!("{:?} fired during a shutdown", event.kind));
        }
        for c in 0..s.crew_count() {
            if s.crew_busy(c) > s.crew_size(c) {
                self.flag(t, format!("crew {c} runs {} jobs with size {}", s.crew_busy(c), s.crew_size(c)));
            }
        }
        for p in 0..s.pool_count() {
            if s.pool_stock(p) < 0 {
                self.flag(t, format!("pool {p} stock {}", s.pool_stock(p)));
            }
        }
        let jobs = s.open_corrective_jobs();
        for u in 0..s.equipment_count() {
            let phase = s.phase(u);
            if matches!(phase, Phase::UnderRepair(_)) && s.spare_pool_of(u).is_some() && !s.holds_spare(u) {
                self.flag(t, format!("{} repaired without a spare", s.equipment_id(u)));
            }
            let open = jobs.iter().filter(|&&j| j == u).count();
            let expected = usize::from(phase.is_failed());
            if open != expected {
                self.flag(t, format!("{} in {phase:?} has {open} corrective jobs", s.equipment_id(u)));
            }
        }

        let snapshot: CapacitySnapshot = (0..s.equipment_count())
            .map(|u| {
                let id = s.equipment_id(u);
                let spec = self.model.equipment(id).unwrap();
                (id.to_string(), effective_capacity(&s.state(u), spec, s.in_shutdown()))
            })
            .collect();
        let thr = compute_throughput(&self.model.network, &snapshot).unwrap();
        if (thr - s.throughput()).abs() > 1e-12 {
            self.flag(t, format!("engine throughput {} vs recomputed {thr}", s.throughput()));
        }
        let (t0, thr0) = self.last;
        self.integral += (t - t0) * thr0;
        self.last = (t, thr);
    }

    fn on_step(&mut self, from: f64, to: f64, throughput: f64) {
        self.stepped += (to - from) * throughput;
    }
}

/// Audits `runs` histories of `model`; returns the number of events seen.
pub fn audit_runs(model: &Model, runs: u32, base_seed: u64) -> Result<usize, String> {
    let prepared = PreparedModel::new(model).map_err(|e| e.to_string())?;
    let config = SimConfig::default();
    let mut events = 0;
    for i in 0..runs {
        let mut audit = Audit::new(model);
        let result = run_with(&prepared, run_seed(base_seed, i), i, &config, &mut audit).map_err(|e| e.to_string())?;
        audit.finish(result.horizon_hours);
        if !audit.violations.is_empty() {
            return Err(format!("run {i}:\n{}", audit.violations.join("\n")));
        }
        events += audit.events;

        let tol = 1e-9 * result.produced_volume;
        if (audit.integral - result.produced_volume).abs() > tol {
            return Err(format!("run {i}: throughput integral {} vs produced {}", audit.integral, result.produced_volume));
        }
        if (audit.stepped - result.produced_volume).abs() > tol {
            return Err(format!("run {i}: stepped integral {} vs produced {}", audit.stepped, result.produced_volume));
        }
        if result.bucket_integrals.iter().sum::<f64>() != result.produced_volume
            || result.produced_volume < 0.0
            || result.produced_volume > result.planned_volume
        {
            return Err(format!("run {i}: volume bookkeeping broken"));
        }
    }
    Ok(events)
}
