use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::queue::EventQueue;
use super::rng::RandomStream;
use super::state::{phase_capacity, CrewPresence, EquipmentState, Phase};
use super::*;
use crate::model::{RestockPolicy, Role, HOURS_PER_YEAR};

fn mode_slot(kind: ModeKind) -> usize {
    match kind {
        ModeKind::Degraded => 0,
        ModeKind::Critical => 1,
    }
}

const MODES: [ModeKind; 2] = [ModeKind::Degraded, ModeKind::Critical];

/// Exponential time-to-event that can be paused and resumed. `remaining` is
/// infinite when the clock is disarmed; `token` invalidates queued firings.
#[derive(Debug, Clone, Copy)]
struct Clock {
    remaining: f64,
    started: Option<f64>,
    token: u64,
}

impl Clock {
    fn disarmed() -> Self {
        Self { remaining: f64::INFINITY, started: None, token: 0 }
    }

    fn disarm(&mut self) {
        self.remaining = f64::INFINITY;
        self.started = None;
        self.token += 1;
    }

    /// Starts or stops the clock; returns the firing time when started.
    fn set_running(&mut self, now: f64, run: bool) -> Option<f64> {
        match (self.started, run) {
            (None, true) if self.remaining.is_finite() => {
                self.started = Some(now);
                self.token += 1;
                Some(now + self.remaining)
            }
            (Some(since), false) => {
                self.remaining = (self.remaining - (now - since)).max(0.0);
                self.started = None;
                self.token += 1;
                None
            }
            _ => None,
        }
    }
}

#[derive(Debug)]
pub(crate) struct UnitRt {
    phase: Phase,
    clocks: [Clock; 2],
    stream: RandomStream,
    failed_at: f64,
    pm_from_standby: bool,
    holds_spare: bool,
    counters: EquipmentCounters,
}

impl UnitRt {
    fn in_service(&self) -> bool {
        match self.phase {
            Phase::Operating => true,
            Phase::InPm { .. } => !self.pm_from_standby,
            _ => false,
        }
    }
}

#[derive(Debug)]
struct CcfRt {
    clock: Clock,
    stream: RandomStream,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum JobKind {
    Corrective,
    Preventive(usize),
}

#[derive(Debug, Clone, Copy)]
struct Job {
    unit: usize,
    kind: JobKind,
}

#[derive(Debug)]
pub(crate) struct CrewRt {
    presence: CrewPresence,
    episode: u64,
    queue: VecDeque<Job>,
    in_progress: Vec<Job>,
}

#[derive(Debug)]
pub(crate) struct PoolRt {
    stock: i64,
    on_order: Option<i64>,
}

pub(crate) struct Simulation<'a, O: Observer> {
    model: &'a PreparedModel,
    config: &'a SimConfig,
    observer: &'a mut O,
    seed: u64,
    run_index: u32,
    now: f64,
    queue: EventQueue,
    units: Vec<UnitRt>,
    ccf: Vec<CcfRt>,
    crews: Vec<CrewRt>,
    pools: Vec<PoolRt>,
    active_shutdowns: Vec<usize>,
    capacity: Vec<f64>,
    throughput: f64,
    last_t: f64,
    buckets: Vec<f64>,
}

impl<'a, O: Observer> Simulation<'a, O> {
    pub fn new(model: &'a PreparedModel, seed: u64, run_index: u32, config: &'a SimConfig, observer: &'a mut O) -> Self {
        let units = model
            .units
            .iter()
            .map(|u| UnitRt {
                phase: Phase::Standby,
                clocks: [Clock::disarmed(); 2],
                stream: RandomStream::new(seed, u.stream),
                failed_at: 0.0,
                pm_from_standby: false,
                holds_spare: false,
                counters: EquipmentCounters { id: u.id.clone(), ..Default::default() },
            })
            .collect();
        let ccf = model
            .ccf
            .iter()
            .map(|g| CcfRt { clock: Clock::disarmed(), stream: RandomStream::new(seed, g.stream) })
            .collect();
        let crews = model
            .crews
            .iter()
            .map(|_| CrewRt {
                presence: CrewPresence::Offsite,
                episode: 0,
                queue: VecDeque::new(),
                in_progress: Vec::new(),
            })
            .collect();
        let pools = model
            .pools
            .iter()
            .map(|p| PoolRt { stock: p.initial_stock as i64, on_order: None })
            .collect();
        Self {
            model,
            config,
            observer,
            seed,
            run_index,
            now: 0.0,
            queue: EventQueue::new(),
            units,
            ccf,
            crews,
            pools,
            active_shutdowns: Vec::new(),
            capacity: vec![0.0; model.units.len()],
            throughput: 0.0,
            last_t: 0.0,
            buckets: vec![0.0; bucket_count(model.horizon, config.bucket_hours)],
        }
    }

    pub fn run(mut self) -> RunResult {
        let horizon = self.model.horizon;
        self.init();
        while let Some((event, token)) = self.queue.pop() {
            if event.time >= horizon {
                break;
            }
            if !self.is_live(&event, token) {
                continue;
            }
            self.advance(event.time);
            self.apply(event.kind);
            self.refresh_throughput();
            let view = StateView {
                model: self.model,
                now: self.now,
                in_shutdown: !self.active_shutdowns.is_empty(),
                throughput: self.throughput,
                units: &self.units,
                crews: &self.crews,
                pools: &self.pools,
            };
            self.observer.on_event(&event, &view);
        }
        self.advance(horizon);

        RunResult {
            run_index: self.run_index,
            seed: self.seed,
            horizon_hours: horizon,
            bucket_hours: self.config.bucket_hours,
            produced_volume: self.buckets.iter().sum(),
            planned_volume: horizon,
            bucket_integrals: self.buckets,
            equipment: self.units.into_iter().map(|u| u.counters).collect(),
        }
    }

    fn init(&mut self) {
        let model = self.model;
        let horizon = model.horizon;

        for (w, window) in model.shutdowns.iter().enumerate() {
            self.queue.push(window.start, EventKind::ShutdownStart { window: w }, 0);
            self.queue.push(window.end, EventKind::ShutdownEnd { window: w }, 0);
        }

        for (t, task) in model.pm.iter().enumerate() {
            if model.units[task.unit].out_of_service {
                continue;
            }
            let mut k = 1u32;
            loop {
                let due = k as f64 * task.interval;
                if due >= horizon {
                    break;
                }
                let year = libm::floor(due / HOURS_PER_YEAR);
                let absorbed = task.align_with_shutdown
                    && model.shutdowns.iter().any(|w| {
                        libm::floor(w.start / HOURS_PER_YEAR) == year && task.duration <= w.end - w.start
                    });
                if absorbed {
                    self.units[task.unit].counters.pm_in_shutdown += 1;
                } else {
                    self.queue.push(due, EventKind::PmDue { task: t }, 0);
                }
                k += 1;
            }
        }

        for (p, pool) in model.pools.iter().enumerate() {
            if let RestockPolicy::Periodic { interval_hours } = pool.policy {
                let mut k = 1u32;
                while (k as f64 * interval_hours) < horizon {
                    self.queue.push(k as f64 * interval_hours, EventKind::SpareReview { pool: p }, 0);
                    k += 1;
                }
            }
        }

        for u in 0..self.units.len() {
            let spec = &model.units[u];
            if spec.out_of_service {
                self.units[u].phase = Phase::OutOfService;
            } else if spec.role == Role::Active {
                self.units[u].phase = Phase::Operating;
                self.arm_fresh(u);
            }
        }
        for g in 0..self.ccf.len() {
            self.arm_ccf(g);
        }
        for p in 0..self.pools.len() {
            self.check_reorder(p);
        }
        for g in 0..model.standby_groups.len() {
            self.evaluate_group(g);
        }
        self.refresh_throughput();
    }

    fn is_live(&self, event: &Event, token: u64) -> bool {
        match event.kind {
            EventKind::Failure { unit, mode } => {
                let c = &self.units[unit].clocks[mode_slot(mode)];
                c.started.is_some() && c.token == token
            }
            EventKind::CcfFailure { group } => {
                let c = &self.ccf[group].clock;
                c.started.is_some() && c.token == token
            }
            EventKind::CrewArrived { crew } => {
                let c = &self.crews[crew];
                c.presence == CrewPresence::Mobilizing && c.episode == token
            }
            _ => true,
        }
    }

    fn advance(&mut self, to: f64) {
        if to <= self.last_t {
            return;
        }
        let from = self.last_t;
        let w = self.config.bucket_hours;
        let n = self.buckets.len();
        let mut a = from;
        let mut b = ((a / w) as usize).min(n - 1);
        loop {
            let edge = if b + 1 >= n { self.model.horizon } else { (b + 1) as f64 * w };
            let end = if edge < to { edge } else { to };
            if end > a {
                self.buckets[b] += self.throughput * (end - a);
                a = end;
            }
            if end >= to || b + 1 >= n {
                break;
            }
            b += 1;
        }
        self.observer.on_step(from, to, self.throughput);
        self.last_t = to;
        self.now = to;
    }

    fn refresh_throughput(&mut self) {
        for (u, rt) in self.units.iter().enumerate() {
            let spec = &self.model.units[u];
            self.capacity[u] = phase_capacity(rt.phase, |kind, repairing| {
                spec.mode(kind).map_or(1.0, |m| if repairing { m.loss_during } else { m.loss_before })
            });
        }
        let plant = self
            .active_shutdowns
            .iter()
            .map(|&w| 1.0 - self.model.shutdowns[w].capacity_loss)
            .fold(1.0, f64::min);
        self.throughput = if plant <= 0.0 { 0.0 } else { plant * self.model.network.throughput(&self.capacity) };
    }

    fn frozen(&self) -> bool {
        self.config.freeze_clocks_during_shutdown && !self.active_shutdowns.is_empty()
    }

    // --- clocks -----------------------------------------------------------

    /// New as-good-as-new failure clocks for every mode, then start them if
    /// the unit's phase allows.
    fn arm_fresh(&mut self, u: usize) {
        for kind in MODES {
            let rate = self.model.units[u].mode(kind).map_or(0.0, |m| m.independent_rate);
            let rt = &mut self.units[u];
            let c = &mut rt.clocks[mode_slot(kind)];
            c.disarm();
            c.remaining = rt.stream.exponential(rate);
        }
        self.sync_clocks(u);
    }

    fn disarm_clocks(&mut self, u: usize) {
        for c in &mut self.units[u].clocks {
            c.disarm();
        }
    }

    fn sync_clocks(&mut self, u: usize) {
        let frozen = self.frozen();
        for kind in MODES {
            let run = !frozen
                && match self.units[u].phase {
                    Phase::Operating => true,
                    Phase::DegradedWaiting => kind == ModeKind::Critical,
                    _ => false,
                };
            let c = &mut self.units[u].clocks[mode_slot(kind)];
            if let Some(at) = c.set_running(self.now, run) {
                let token = c.token;
                self.queue.push(at, EventKind::Failure { unit: u, mode: kind }, token);
            }
        }
    }

    fn arm_ccf(&mut self, g: usize) {
        let rate = self.model.ccf[g].rate;
        let rt = &mut self.ccf[g];
        rt.clock.disarm();
        rt.clock.remaining = rt.stream.exponential(rate);
        self.sync_ccf(g);
    }

    fn sync_ccf(&mut self, g: usize) {
        let run = !self.frozen();
        let c = &mut self.ccf[g].clock;
        if let Some(at) = c.set_running(self.now, run) {
            let token = c.token;
            self.queue.push(at, EventKind::CcfFailure { group: g }, token);
        }
    }

    fn sync_all(&mut self) {
        for u in 0..self.units.len() {
            self.sync_clocks(u);
        }
        for g in 0..self.ccf.len() {
            self.sync_ccf(g);
        }
    }

    // --- events -----------------------------------------------------------

    fn apply(&mut self, kind: EventKind) {
        match kind {
            EventKind::Failure { unit, mode } => {
                self.units[unit].clocks[mode_slot(mode)].disarm();
                match mode {
                    ModeKind::Degraded => {
                        let rt = &mut self.units[unit];
                        rt.counters.degraded_failures += 1;
                        rt.phase = Phase::DegradedWaiting;
                        rt.failed_at = self.now;
                        self.sync_clocks(unit);
                        self.enqueue_corrective(unit);
                    }
                    ModeKind::Critical => self.fail_critical(unit),
                }
                self.evaluate_group_of(unit);
            }
            EventKind::CcfFailure { group } => {
                self.arm_ccf(group);
                let model = self.model;
                for &m in &model.ccf[group].members {
                    if matches!(self.units[m].phase, Phase::Operating | Phase::Standby | Phase::DegradedWaiting) {
                        self.units[m].counters.ccf_failures += 1;
                        self.fail_critical(m);
                    }
                }
                for &m in &model.ccf[group].members {
                    self.evaluate_group_of(m);
                }
            }
            EventKind::CrewArrived { crew } => {
                self.crews[crew].presence = CrewPresence::OnSite;
                self.dispatch(crew);
            }
            EventKind::SpareArrived { pool } => {
                let rt = &mut self.pools[pool];
                rt.stock += rt.on_order.take().unwrap_or(0);
                self.check_reorder(pool);
                for c in 0..self.crews.len() {
                    self.dispatch(c);
                }
            }
            EventKind::SpareReview { pool } => {
                let target = self.model.pools[pool].restock_to as i64;
                if self.pools[pool].on_order.is_none() && self.pools[pool].stock < target {
                    self.place_order(pool);
                }
            }
            EventKind::RepairComplete { unit } => {
                let crew = self.finish_job(unit);
                let rt = &mut self.units[unit];
                rt.counters.repairs += 1;
                rt.counters.downtime_hours += self.now - rt.failed_at;
                rt.holds_spare = false;
                self.return_to_service(unit);
                self.dispatch(crew);
                self.evaluate_group_of(unit);
            }
            EventKind::PmDue { task } => {
                let unit = self.model.pm[task].unit;
                let crew = self.model.units[unit].crew;
                self.crews[crew].queue.push_back(Job { unit, kind: JobKind::Preventive(task) });
                self.call_crew(crew, true);
                self.dispatch(crew);
            }
            EventKind::PmComplete { unit } => {
                let crew = self.finish_job(unit);
                self.units[unit].counters.pm_executed += 1;
                if self.units[unit].pm_from_standby {
                    self.units[unit].pm_from_standby = false;
                    self.return_to_service(unit);
                } else {
                    self.units[unit].phase = Phase::Operating;
                    self.sync_clocks(unit);
                }
                self.dispatch(crew);
                self.evaluate_group_of(unit);
            }
            EventKind::ShutdownStart { window } => {
                self.active_shutdowns.push(window);
                self.sync_all();
            }
            EventKind::ShutdownEnd { window } => {
                self.active_shutdowns.retain(|&w| w != window);
                self.sync_all();
            }
        }
    }

    fn fail_critical(&mut self, u: usize) {
        let rt = &mut self.units[u];
        let already_waiting = rt.phase == Phase::DegradedWaiting;
        rt.counters.critical_failures += 1;
        rt.phase = Phase::CriticalWaiting;
        if !already_waiting {
            rt.failed_at = self.now;
        }
        self.disarm_clocks(u);
        if !already_waiting {
            self.enqueue_corrective(u);
        }
    }

    /// Back from repair: joins the standby pool if its group is already
    /// covered, otherwise restarts with fresh clocks.
    fn return_to_service(&mut self, u: usize) {
        let covered = self.model.units[u].standby_group.is_some_and(|g| {
            let group = &self.model.standby_groups[g];
            let others = group.members.iter().filter(|&&m| m != u && self.units[m].in_service()).count();
            others >= group.required
        });
        if covered {
            self.units[u].phase = Phase::Standby;
            self.disarm_clocks(u);
        } else {
            self.units[u].phase = Phase::Operating;
            self.arm_fresh(u);
        }
    }

    fn evaluate_group_of(&mut self, u: usize) {
        if let Some(g) = self.model.units[u].standby_group {
            self.evaluate_group(g);
        }
    }

    /// Calls standby units, in declaration order, until the group has its
    /// required number of members in service or no standby is left.
    fn evaluate_group(&mut self, g: usize) {
        let group = &self.model.standby_groups[g];
        loop {
            let in_service = group.members.iter().filter(|&&m| self.units[m].in_service()).count();
            if in_service >= group.required {
                return;
            }
            let Some(&s) = group.members.iter().find(|&&m| self.units[m].phase == Phase::Standby) else {
                return;
            };
            let p = self.model.units[s].demand_failure_prob;
            let rt = &mut self.units[s];
            if p > 0.0 && rt.stream.uniform() < p {
                rt.counters.demand_failures += 1;
                rt.counters.critical_failures += 1;
                rt.phase = Phase::CriticalWaiting;
                rt.failed_at = self.now;
                self.enqueue_corrective(s);
            } else {
                rt.phase = Phase::Operating;
                self.arm_fresh(s);
            }
        }
    }

    // --- logistics --------------------------------------------------------

    fn enqueue_corrective(&mut self, u: usize) {
        let crew = self.model.units[u].crew;
        self.crews[crew].queue.push_back(Job { unit: u, kind: JobKind::Corrective });
        self.call_crew(crew, false);
        self.dispatch(crew);
    }

    /// Brings the crew toward the site. Planned work finds the crew already
    /// there; unplanned work pays mobilization once per episode.
    fn call_crew(&mut self, c: usize, planned: bool) {
        let mobilization = self.model.crews[c].mobilization_hours;
        let crew = &mut self.crews[c];
        match crew.presence {
            CrewPresence::OnSite => {}
            CrewPresence::Mobilizing if !planned => {}
            _ if planned || mobilization <= 0.0 => {
                crew.presence = CrewPresence::OnSite;
                crew.episode += 1;
            }
            _ => {
                crew.presence = CrewPresence::Mobilizing;
                crew.episode += 1;
                let token = crew.episode;
                self.queue.push(self.now + mobilization, EventKind::CrewArrived { crew: c }, token);
            }
        }
    }

    /// Starts queued jobs while the crew is on site and has free hands.
    fn dispatch(&mut self, c: usize) {
        if self.crews[c].presence != CrewPresence::OnSite {
            return;
        }
        let size = self.model.crews[c].size as usize;
        let mut i = 0;
        while self.crews[c].in_progress.len() < size && i < self.crews[c].queue.len() {
            let job = self.crews[c].queue[i];
            let u = job.unit;
            match job.kind {
                JobKind::Corrective => {
                    let mode = match self.units[u].phase {
                        Phase::DegradedWaiting => ModeKind::Degraded,
                        Phase::CriticalWaiting => ModeKind::Critical,
                        _ => {
                            self.crews[c].queue.remove(i);
                            continue;
                        }
                    };
                    if let Some(p) = self.model.units[u].pool {
                        if self.pools[p].stock <= 0 {
                            i += 1;
                            continue;
                        }
                        self.pools[p].stock -= 1;
                        self.units[u].holds_spare = true;
                        self.check_reorder(p);
                    }
                    self.crews[c].queue.remove(i);
                    self.crews[c].in_progress.push(job);
                    let repair_rate = self.model.units[u].mode(mode).map_or(f64::INFINITY, |m| m.repair_rate);
                    let rt = &mut self.units[u];
                    rt.counters.repair_wait_hours += self.now - rt.failed_at;
                    rt.phase = Phase::UnderRepair(mode);
                    let duration = rt.stream.exponential(repair_rate);
                    self.disarm_clocks(u);
                    self.queue.push(self.now + duration, EventKind::RepairComplete { unit: u }, 0);
                }
                JobKind::Preventive(task) => {
                    let from_standby = match self.units[u].phase {
                        Phase::Operating => false,
                        Phase::Standby => true,
                        _ => {
                            self.units[u].counters.pm_skipped += 1;
                            self.crews[c].queue.remove(i);
                            continue;
                        }
                    };
                    self.crews[c].queue.remove(i);
                    self.crews[c].in_progress.push(job);
                    let pm = &self.model.pm[task];
                    let rt = &mut self.units[u];
                    rt.pm_from_standby = from_standby;
                    rt.phase = Phase::InPm { capacity_loss: pm.capacity_loss };
                    self.sync_clocks(u);
                    self.queue.push(self.now + pm.duration, EventKind::PmComplete { unit: u }, 0);
                }
            }
        }
        let crew = &mut self.crews[c];
        if crew.in_progress.is_empty() && crew.queue.is_empty() {
            crew.presence = CrewPresence::Offsite;
            crew.episode += 1;
        }
    }

    fn finish_job(&mut self, u: usize) -> usize {
        let c = self.model.units[u].crew;
        let jobs = &mut self.crews[c].in_progress;
        if let Some(pos) = jobs.iter().position(|j| j.unit == u) {
            jobs.remove(pos);
        }
        c
    }

    fn check_reorder(&mut self, p: usize) {
        let pool = &self.model.pools[p];
        if pool.policy == RestockPolicy::OnDemand
            && self.pools[p].on_order.is_none()
            && self.pools[p].stock <= pool.reorder_threshold as i64
        {
            self.place_order(p);
        }
    }

    fn place_order(&mut self, p: usize) {
        let pool = &self.model.pools[p];
        let qty = pool.restock_to as i64 - self.pools[p].stock;
        if qty <= 0 {
            return;
        }
        self.pools[p].on_order = Some(qty);
        self.queue.push(self.now + pool.lead_time_hours, EventKind::SpareArrived { pool: p }, 0);
    }
}

/// Read-only snapshot of the plant handed to an [`Observer`].
pub struct StateView<'a> {
    model: &'a PreparedModel,
    now: f64,
    in_shutdown: bool,
    throughput: f64,
    units: &'a [UnitRt],
    crews: &'a [CrewRt],
    pools: &'a [PoolRt],
}

impl StateView<'_> {
    pub fn time(&self) -> f64 {
        self.now
    }

    pub fn in_shutdown(&self) -> bool {
        self.in_shutdown
    }

    pub fn throughput(&self) -> f64 {
        self.throughput
    }

    pub fn equipment_count(&self) -> usize {
        self.units.len()
    }

    pub fn equipment_id(&self, u: usize) -> &str {
        &self.model.units[u].id
    }

    pub fn phase(&self, u: usize) -> Phase {
        self.units[u].phase
    }

    pub fn state(&self, u: usize) -> EquipmentState {
        let rt = &self.units[u];
        let spec = &self.model.units[u];
        let waiting = matches!(rt.phase, Phase::DegradedWaiting | Phase::CriticalWaiting);
        EquipmentState {
            phase: rt.phase,
            crew_mobilizing: waiting && self.crews[spec.crew].presence == CrewPresence::Mobilizing,
            spare_on_order: waiting && spec.pool.is_some_and(|p| self.pools[p].on_order.is_some()),
        }
    }

    pub fn spare_pool_of(&self, u: usize) -> Option<usize> {
        self.model.units[u].pool
    }

    /// The unit holds a reserved spare for its current repair.
    pub fn holds_spare(&self, u: usize) -> bool {
        self.units[u].holds_spare
    }

    pub fn crew_count(&self) -> usize {
        self.crews.len()
    }

    pub fn crew_size(&self, c: usize) -> usize {
        self.model.crews[c].size as usize
    }

    pub fn crew_busy(&self, c: usize) -> usize {
        self.crews[c].in_progress.len()
    }

    pub fn crew_presence(&self, c: usize) -> CrewPresence {
        self.crews[c].presence
    }

    pub fn pool_count(&self) -> usize {
        self.pools.len()
    }

    pub fn pool_stock(&self, p: usize) -> i64 {
        self.pools[p].stock
    }

    /// Units with an open corrective job, queued or in progress, one entry
    /// per job.
    pub fn open_corrective_jobs(&self) -> Vec<usize> {
        self.crews
            .iter()
            .flat_map(|c| c.queue.iter().chain(c.in_progress.iter()))
            .filter(|j| j.kind == JobKind::Corrective)
            .map(|j| j.unit)
            .collect()
    }
}
