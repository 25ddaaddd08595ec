//! Bundled case study: gas separation, compression and treatment train.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::*;

const YEAR: f64 = HOURS_PER_YEAR;

struct Family {
    name: &'static str,
    degraded: Option<(f64, f64)>,
    critical: (f64, f64),
    crew: &'static str,
    spare_pool: Option<&'static str>,
    pm_interval_years: f64,
    pm_duration_hours: f64,
}

const ESDV: Family = Family {
    name: "ESDV",
    degraded: None,
    critical: (10.8e-6, 1.0 / 2.0),
    crew: "crew-A",
    spare_pool: None,
    pm_interval_years: 4.0,
    pm_duration_hours: 2.0,
};

const SEPARATOR: Family = Family {
    name: "Separator",
    degraded: Some((409.6e-6, 1.0 / 5.0)),
    critical: (143.6e-6, 1.0 / 5.0),
    crew: "crew-A",
    spare_pool: Some("separator-spares"),
    pm_interval_years: 4.0,
    pm_duration_hours: 4.0,
};

const COMPRESSOR: Family = Family {
    name: "Compressors",
    degraded: Some((1084.4e-6, 1.0 / 10.0)),
    critical: (1080.8e-6, 1.0 / 17.0),
    crew: "crew-B",
    spare_pool: Some("compressor-spares"),
    pm_interval_years: 2.0,
    pm_duration_hours: 12.0,
};

const COOLING: Family = Family {
    name: "Cooling",
    degraded: Some((657.6e-6, 1.0 / 4.0)),
    critical: (82.4e-6, 1.0 / 4.0),
    crew: "crew-A",
    spare_pool: Some("cooling-spares"),
    pm_interval_years: 4.0,
    pm_duration_hours: 2.0,
};

const TREATMENT: Family = Family {
    name: "Treatment",
    degraded: Some((119.2e-6, 1.0 / 13.0)),
    critical: (365.6e-6, 1.0 / 46.0),
    crew: "crew-A",
    spare_pool: Some("treatment-spares"),
    pm_interval_years: 2.0,
    pm_duration_hours: 12.0,
};

const BETA: f64 = 0.05;
const DEMAND_FAILURE_PROB: f64 = 0.05;

fn unit(family: &Family, id: String, role: Role, standby_group: Option<&str>) -> EquipmentSpec {
    let mut modes = Vec::new();
    if let Some((failure_rate, repair_rate)) = family.degraded {
        modes.push(FailureModeSpec {
            kind: ModeKind::Degraded,
            failure_rate,
            repair_rate,
            capacity_loss_before_repair: 0.5,
            capacity_loss_during_repair: 1.0,
        });
    }
    modes.push(FailureModeSpec {
        kind: ModeKind::Critical,
        failure_rate: family.critical.0,
        repair_rate: family.critical.1,
        capacity_loss_before_repair: 1.0,
        capacity_loss_during_repair: 1.0,
    });
    EquipmentSpec {
        id,
        family: Some(family.name.to_owned()),
        role,
        standby_group: standby_group.map(ToOwned::to_owned),
        demand_failure_prob: (role == Role::PassiveStandby).then_some(DEMAND_FAILURE_PROB),
        modes,
        crew: family.crew.to_owned(),
        spare_pool: family.spare_pool.map(ToOwned::to_owned),
        out_of_service: false,
    }
}

fn pm(family: &Family, equipment_id: &str) -> PmTask {
    PmTask {
        equipment_id: equipment_id.to_owned(),
        interval_hours: family.pm_interval_years * YEAR,
        duration_hours: family.pm_duration_hours,
        capacity_loss: 1.0,
        align_with_shutdown: true,
    }
}

fn single(id: &str) -> Stage {
    Stage::Single(id.to_owned())
}

fn branch(stages: Vec<Stage>, capacity: f64) -> Branch {
    Branch { stages, capacity }
}

/// The 16-unit reference system over a 20-year horizon.
///
/// Four ESDVs and a separator in series, three 50% compression branches
/// (compressor followed by a 2x100% active cooling pair, third compressor
/// on passive standby) and a 2x100% treatment stage with one passive unit.
/// Every cooling pair, including the one on the standby branch, carries
/// its own common-cause group.
pub fn build_reference_model() -> Model {
    let mut equipment = Vec::new();
    let mut pm_tasks = Vec::new();
    let mut stages = Vec::new();

    for i in 1..=4 {
        let id = format!("ESDV-{i}");
        stages.push(single(&id));
        pm_tasks.push(pm(&ESDV, &id));
        equipment.push(unit(&ESDV, id, Role::Active, None));
    }

    stages.push(single("Separator"));
    pm_tasks.push(pm(&SEPARATOR, "Separator"));
    equipment.push(unit(&SEPARATOR, "Separator".to_owned(), Role::Active, None));

    let mut ccf_groups = Vec::new();
    let mut compressor_branches = Vec::new();
    let mut coolers = Vec::new();
    for (letter, role) in [("A", Role::Active), ("B", Role::Active), ("C", Role::PassiveStandby)] {
        let compressor = format!("Compressor-{letter}");
        if role == Role::Active {
            pm_tasks.push(pm(&COMPRESSOR, &compressor));
        }
        equipment.push(unit(&COMPRESSOR, compressor.clone(), role, Some("compressors")));

        let pair: Vec<String> = (1..=2).map(|n| format!("Cooling-{letter}{n}")).collect();
        for id in &pair {
            pm_tasks.push(pm(&COOLING, id));
            coolers.push(unit(&COOLING, id.clone(), Role::Active, None));
        }
        ccf_groups.push(CcfGroup {
            id: format!("ccf-cooling-{letter}"),
            member_ids: pair.clone(),
            beta: BETA,
        });

        let cooling_stage = Stage::Parallel(ParallelStage {
            branches: pair.iter().map(|id| branch(vec![single(id)], 1.0)).collect(),
            required_active_branches: 1,
        });
        compressor_branches.push(branch(vec![single(&compressor), cooling_stage], 0.5));
    }
    equipment.extend(coolers);
    ccf_groups.insert(
        0,
        CcfGroup {
            id: "ccf-compressors".to_owned(),
            member_ids: vec!["Compressor-A".into(), "Compressor-B".into(), "Compressor-C".into()],
            beta: BETA,
        },
    );
    stages.push(Stage::Parallel(ParallelStage {
        branches: compressor_branches,
        required_active_branches: 2,
    }));

    let mut treatment_branches = Vec::new();
    for (letter, role) in [("A", Role::Active), ("B", Role::PassiveStandby)] {
        let id = format!("Treatment-{letter}");
        if role == Role::Active {
            pm_tasks.push(pm(&TREATMENT, &id));
        }
        treatment_branches.push(branch(vec![single(&id)], 1.0));
        equipment.push(unit(&TREATMENT, id, role, Some("treatment")));
    }
    ccf_groups.push(CcfGroup {
        id: "ccf-treatment".to_owned(),
        member_ids: vec!["Treatment-A".into(), "Treatment-B".into()],
        beta: BETA,
    });
    stages.push(Stage::Parallel(ParallelStage {
        branches: treatment_branches,
        required_active_branches: 1,
    }));

    let crews = vec![
        Crew { id: "crew-A".to_owned(), size: 1, mobilization_hours: 1.0 },
        Crew { id: "crew-B".to_owned(), size: 1, mobilization_hours: 24.0 },
    ];

    let spare_pools = ["separator-spares", "compressor-spares", "cooling-spares", "treatment-spares"]
        .into_iter()
        .map(|id| SparePool {
            id: id.to_owned(),
            initial_stock: 1,
            restock_to: 1,
            reorder_threshold: 0,
            lead_time_hours: 72.0,
            policy: RestockPolicy::OnDemand,
        })
        .collect();

    Model {
        horizon_hours: 20.0 * YEAR,
        network: Network { stages },
        equipment,
        ccf_groups,
        crews,
        spare_pools,
        pm_tasks,
        shutdowns: vec![ShutdownSchedule {
            interval_hours: 4.0 * YEAR,
            duration_hours: 240.0,
            capacity_loss: 1.0,
        }],
    }
}
