use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

/// One violated rule. `rule` is a stable kebab-case name, `subject` the
/// offending identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: &'static str,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}[{}] {}: {}", self.rule, self.subject, self.message)
    }
}

struct Sink(Vec<Diagnostic>);

impl Sink {
    fn error(&mut self, rule: &'static str, subject: &str, message: impl Into<String>) {
        self.push(Severity::Error, rule, subject, message.into());
    }

    fn warn(&mut self, rule: &'static str, subject: &str, message: impl Into<String>) {
        self.push(Severity::Warning, rule, subject, message.into());
    }

    fn push(&mut self, severity: Severity, rule: &'static str, subject: &str, message: String) {
        self.0.push(Diagnostic { severity, rule, subject: subject.to_string(), message });
    }
}

fn is_fraction(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn is_duration(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// Checks every model invariant. An empty list means the model is valid;
/// warnings do not prevent simulation.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    let mut out = Sink(Vec::new());

    if !(model.horizon_hours.is_finite() && model.horizon_hours > 0.0) {
        out.error("horizon-nonpositive", "horizon_hours", "horizon must be a positive number of hours");
    }

    let crews = unique_ids(&mut out, "crew", model.crews.iter().map(|c| c.id.as_str()));
    let pools = unique_ids(&mut out, "spare-pool", model.spare_pools.iter().map(|p| p.id.as_str()));
    unique_ids(&mut out, "ccf-group", model.ccf_groups.iter().map(|g| g.id.as_str()));
    let equipment: BTreeMap<&str, &EquipmentSpec> = {
        unique_ids(&mut out, "equipment", model.equipment.iter().map(|e| e.id.as_str()));
        model.equipment.iter().map(|e| (e.id.as_str(), e)).collect()
    };

    check_network(&mut out, model, &equipment);

    for eq in &model.equipment {
        check_equipment(&mut out, eq, &crews, &pools);
    }

    check_standby_groups(&mut out, model);

    for group in &model.ccf_groups {
        check_ccf_group(&mut out, group, &equipment);
    }

    for crew in &model.crews {
        if crew.size < 1 {
            out.error("crew-size", &crew.id, "crew size must be at least 1");
        }
        if !is_duration(crew.mobilization_hours) {
            out.error("crew-mobilization", &crew.id, "mobilization time must be >= 0");
        }
    }

    for pool in &model.spare_pools {
        if pool.restock_to < 1 {
            out.error("spare-restock", &pool.id, "restock_to must be at least 1");
        }
        if pool.reorder_threshold >= pool.restock_to {
            out.error("spare-threshold", &pool.id, "reorder_threshold must be below restock_to");
        }
        if !is_duration(pool.lead_time_hours) {
            out.error("spare-lead-time", &pool.id, "lead time must be >= 0");
        }
        if let RestockPolicy::Periodic { interval_hours } = pool.policy {
            if !(interval_hours.is_finite() && interval_hours > 0.0) {
                out.error("spare-period", &pool.id, "periodic restock interval must be > 0");
            }
        }
    }

    for task in &model.pm_tasks {
        let subject = task.equipment_id.as_str();
        match equipment.get(subject) {
            None => out.error("unknown-equipment", subject, "PM task references an undeclared equipment"),
            Some(eq) if eq.role == Role::PassiveStandby => {
                out.error("pm-on-passive", subject, "PM tasks are only allowed on active equipment")
            }
            Some(_) => {}
        }
        if !(task.interval_hours.is_finite() && task.interval_hours > 0.0) {
            out.error("pm-interval", subject, "PM interval must be > 0");
        }
        if !(task.duration_hours.is_finite() && task.duration_hours > 0.0) {
            out.error("pm-duration", subject, "PM duration must be > 0");
        }
        if !is_fraction(task.capacity_loss) {
            out.error("pm-capacity-loss", subject, "PM capacity loss must be in [0, 1]");
        }
    }

    for (i, sd) in model.shutdowns.iter().enumerate() {
        let subject = format!("shutdowns[{i}]");
        if !(sd.duration_hours > 0.0 && sd.interval_hours > sd.duration_hours && sd.interval_hours.is_finite()) {
            out.error("shutdown-timing", &subject, "shutdown needs interval > duration > 0");
        }
        if !is_fraction(sd.capacity_loss) {
            out.error("shutdown-capacity-loss", &subject, "shutdown capacity loss must be in [0, 1]");
        }
    }

    out.0
}

fn unique_ids<'a>(
    out: &mut Sink,
    what: &str,
    ids: impl Iterator<Item = &'a str>,
) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            out.error("duplicate-id", id, format!("{what} id declared more than once"));
        }
    }
    seen
}

fn check_network(out: &mut Sink, model: &Model, equipment: &BTreeMap<&str, &EquipmentSpec>) {
    if model.network.stages.is_empty() {
        out.error("empty-network", "network", "network needs at least one stage");
    }
    let mut placements: BTreeMap<&str, usize> = BTreeMap::new();
    model.network.for_each_equipment(&mut |id| *placements.entry(id).or_default() += 1);
    for (&id, &count) in &placements {
        if !equipment.contains_key(id) {
            out.error("unknown-equipment", id, "network references an undeclared equipment");
        } else if count > 1 {
            out.error("equipment-multiply-placed", id, "equipment appears more than once in the network");
        }
    }
    for eq in &model.equipment {
        if !placements.contains_key(eq.id.as_str()) {
            out.error("equipment-not-placed", &eq.id, "equipment does not appear in the network");
        }
    }
    for (i, stage) in model.network.stages.iter().enumerate() {
        check_stage(out, stage, &format!("network.stages[{i}]"), equipment);
    }
}

fn check_stage(out: &mut Sink, stage: &Stage, path: &str, equipment: &BTreeMap<&str, &EquipmentSpec>) {
    let Stage::Parallel(p) = stage else { return };
    if p.branches.is_empty() {
        out.error("empty-parallel", path, "parallel stage needs at least one branch");
        return;
    }
    let n = p.branches.len() as u32;
    if p.required_active_branches < 1 || p.required_active_branches > n {
        out.error(
            "parallel-required-range",
            path,
            format!("required_active_branches must be in 1..={n}"),
        );
    }
    let mut active_capacity = 0.0;
    for (b, branch) in p.branches.iter().enumerate() {
        let bpath = format!("{path}.branches[{b}]");
        if branch.stages.is_empty() {
            out.error("empty-branch", &bpath, "branch needs at least one stage");
        }
        if !(branch.capacity > 0.0 && branch.capacity <= 1.0) {
            out.error("branch-capacity-range", &bpath, "branch capacity must be in (0, 1]");
        }
        let mut passive = false;
        for s in &branch.stages {
            s.for_each_equipment(&mut |id| {
                passive |= equipment.get(id).is_some_and(|e| e.role == Role::PassiveStandby);
            });
        }
        if !passive {
            active_capacity += branch.capacity;
        }
        for (i, s) in branch.stages.iter().enumerate() {
            check_stage(out, s, &format!("{bpath}.stages[{i}]"), equipment);
        }
    }
    if active_capacity < 1.0 - 1e-12 {
        out.warn(
            "parallel-under-capacity",
            path,
            format!("active branches only reach {:.4} of nominal", active_capacity),
        );
    }
}

fn check_equipment(out: &mut Sink, eq: &EquipmentSpec, crews: &BTreeSet<&str>, pools: &BTreeSet<&str>) {
    let id = eq.id.as_str();
    if !crews.contains(eq.crew.as_str()) {
        out.error("unknown-crew", id, format!("crew `{}` is not declared", eq.crew));
    }
    if let Some(pool) = &eq.spare_pool {
        if !pools.contains(pool.as_str()) {
            out.error("unknown-spare-pool", id, format!("spare pool `{pool}` is not declared"));
        }
    }
    match (eq.role, eq.demand_failure_prob) {
        (Role::PassiveStandby, None) => {
            out.error("demand-prob-missing", id, "passive standby equipment needs demand_failure_prob")
        }
        (Role::Active, Some(_)) => {
            out.error("demand-prob-on-active", id, "demand_failure_prob is only valid for passive standby")
        }
        (_, Some(p)) if !is_fraction(p) => out.error("demand-prob-range", id, "demand_failure_prob must be in [0, 1]"),
        _ => {}
    }
    if eq.role == Role::PassiveStandby && eq.standby_group.is_none() {
        out.error("standby-group-missing", id, "passive standby equipment needs a standby_group");
    }
    for kind in [ModeKind::Degraded, ModeKind::Critical] {
        if eq.modes.iter().filter(|m| m.kind == kind).count() > 1 {
            out.error("mode-duplicate-kind", id, format!("more than one {} mode", kind.as_str()));
        }
    }
    for m in &eq.modes {
        if !(m.failure_rate.is_finite() && m.failure_rate >= 0.0) {
            out.error("mode-failure-rate", id, "failure rate must be >= 0");
        }
        if !(m.repair_rate.is_finite() && m.repair_rate > 0.0) {
            out.error("mode-repair-rate", id, "repair rate must be > 0");
        }
        if !is_fraction(m.capacity_loss_before_repair) || !is_fraction(m.capacity_loss_during_repair) {
            out.error("capacity-loss-range", id, "capacity losses must be in [0, 1]");
        }
        if m.kind == ModeKind::Critical
            && (m.capacity_loss_before_repair != 1.0 || m.capacity_loss_during_repair != 1.0)
        {
            out.error("critical-loss-not-total", id, "critical mode must lose 100% capacity");
        }
    }
}

fn check_standby_groups(out: &mut Sink, model: &Model) {
    let mut groups: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for eq in &model.equipment {
        if let Some(g) = &eq.standby_group {
            let entry = groups.entry(g.as_str()).or_default();
            match eq.role {
                Role::Active => entry.0 += 1,
                Role::PassiveStandby => entry.1 += 1,
            }
        }
    }
    for (g, (active, _)) in groups {
        if active == 0 {
            out.error("standby-group-no-active", g, "standby group has no active member");
        }
    }
}

fn check_ccf_group(out: &mut Sink, group: &CcfGroup, equipment: &BTreeMap<&str, &EquipmentSpec>) {
    let id = group.id.as_str();
    if group.member_ids.len() < 2 {
        out.error("ccf-too-few-members", id, "a CCF group needs at least two members");
    }
    if !(group.beta > 0.0 && group.beta < 1.0) {
        out.error("ccf-beta-range", id, "beta must be in (0, 1)");
    }
    let mut seen = BTreeSet::new();
    let mut rate: Option<f64> = None;
    let mut mismatch = false;
    for member in &group.member_ids {
        if !seen.insert(member.as_str()) {
            out.error("duplicate-id", member, format!("listed twice in CCF group `{id}`"));
            continue;
        }
        let Some(eq) = equipment.get(member.as_str()) else {
            out.error("unknown-equipment", member, format!("CCF group `{id}` references an undeclared equipment"));
            continue;
        };
        let Some(critical) = eq.mode(ModeKind::Critical) else {
            out.error("ccf-member-no-critical", member, format!("member of CCF group `{id}` has no critical mode"));
            continue;
        };
        match rate {
            None => rate = Some(critical.failure_rate),
            Some(r) if r != critical.failure_rate => mismatch = true,
            Some(_) => {}
        }
    }
    if mismatch {
        out.error("ccf-rate-mismatch", id, "CCF group members must share one critical failure rate");
    }
}
