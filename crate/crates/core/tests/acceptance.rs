//! Acceptance suite for the reference case study.
//!
//! Each test checks one criterion at its stated tolerance and prints a
//! single `PASS`/`FAIL` line. Run with
//! `cargo test -p prodavail-core --test acceptance -- --nocapture`.
//!
//! Criteria 1, 3 and 5 share one indicator-table computation (1000 runs per
//! scenario, seed 1, daily buckets); its base batch is the criterion 1
//! batch.

mod common;

use std::sync::OnceLock;

use prodavail_core::engine::{run_indexed, BatchRunner, RandomStream, Sequential, SimConfig};
use prodavail_core::flow::compute_throughput;
use prodavail_core::indicators::{indicator_table, standard_subsystems, IndicatorTable};
use prodavail_core::model::{beta_split, build_reference_model, Model, HOURS_PER_YEAR};
use prodavail_core::{aggregate, production_availability, BatchStats, PreparedModel};

const RUNS: u32 = 1000;
const SEED: u64 = 1;

fn table() -> &'static IndicatorTable {
    static TABLE: OnceLock<IndicatorTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let model = build_reference_model();
        indicator_table(&model, &standard_subsystems(&model), RUNS, SEED, &SimConfig::default(), &Sequential)
            .expect("indicator table")
    })
}

fn base() -> &'static BatchStats {
    &table().base
}

fn report(id: &str, ok: bool, detail: String) {
    println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id}: {detail}");
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

#[test]
fn c1_mean_production_availability() {
    let s = base();
    let ok = s.run_count == RUNS as usize && within(s.mean_pa, 0.965, 0.980) && within(s.std_pa, 0.0015, 0.0040);
    report(
        "C1 reference PA",
        ok,
        format!("mean {} in [96.50%, 98.00%], std {} in [0.15%, 0.40%] over {} runs", pct(s.mean_pa), pct(s.std_pa), s.run_count),
    );
}

#[test]
fn c2_zero_logistics() {
    let model = build_reference_model().with_zero_logistics();
    let prepared = PreparedModel::new(&model).unwrap();
    let results = Sequential.run_batch(&prepared, SEED, RUNS, &SimConfig::default()).unwrap();
    let zero = aggregate(&results).unwrap();
    let gap = zero.mean_pa - base().mean_pa;
    report(
        "C2 zero logistics",
        within(zero.mean_pa, 0.983, 0.989) && gap >= 0.005,
        format!("mean {} in [98.30%, 98.90%], gap to reference {} >= 0.50%", pct(zero.mean_pa), pct(gap)),
    );
}

#[test]
fn c3_subsystem_indicators() {
    let rows = &table().rows;
    let row = |name: &str| rows.iter().find(|r| r.subsystem.name == name).unwrap_or_else(|| panic!("no row {name}"));

    let mut failures = Vec::new();
    let mut check = |what: String, ok: bool| {
        if !ok {
            failures.push(what.clone());
        }
        what
    };
    let mut lines = Vec::new();
    for name in ["ESDV", "Compressors", "Cooling", "Treatment", "Separator"] {
        let c = row(name).criticality;
        lines.push(check(format!("{name} criticality {} == 100.00%", pct(c)), c == 1.0));
    }
    for name in ["Compressor-A", "Compressor-B"] {
        let c = row(name).criticality;
        lines.push(check(format!("{name} criticality {} in [7.50%, 9.50%]", pct(c)), within(c, 0.075, 0.095)));
    }
    let c = row("Treatment-A").criticality;
    lines.push(check(format!("Treatment-A criticality {} in [3.50%, 5.00%]", pct(c)), within(c, 0.035, 0.050)));
    let c = row("Compressors").contribution;
    lines.push(check(format!("Compressors contribution {} in [1.00%, 2.20%]", pct(c)), within(c, 0.010, 0.022)));
    let c = row("ESDV").contribution;
    lines.push(check(format!("ESDV contribution {} <= 0.10%", pct(c)), c <= 0.001));
    let c = row("Separator").contribution;
    lines.push(check(format!("Separator contribution {} in [0.20%, 0.50%]", pct(c)), within(c, 0.002, 0.005)));

    for r in rows {
        println!(
            "     {:<13} criticality {:>7}  contribution {:>6} (sem {})",
            r.subsystem.name,
            pct(r.criticality),
            pct(r.contribution),
            pct(r.contribution_sem)
        );
    }
    report("C3 indicator table", failures.is_empty() && rows.len() == 10, if failures.is_empty() { lines.join("; ") } else { failures.join("; ") });
}

fn without_failures(mut model: Model) -> Model {
    for eq in &mut model.equipment {
        for mode in &mut eq.modes {
            mode.failure_rate = 0.0;
        }
        if eq.demand_failure_prob.is_some() {
            eq.demand_failure_prob = Some(0.0);
        }
    }
    model
}

#[test]
fn c4_failure_free_oracle() {
    // 4 shutdowns of 240 h; 5 off-shutdown-year PM campaigns, each 12 h with
    // treatment and one compressor down (plant stopped) then 12 h with the
    // second compressor down (50%)
    let expected = 1.0 - (4.0 * 240.0 + 5.0 * (12.0 + 0.5 * 12.0)) / (20.0 * HOURS_PER_YEAR);
    let prepared = PreparedModel::new(&without_failures(build_reference_model())).unwrap();
    let pa = production_availability(&run_indexed(&prepared, SEED, 0, &SimConfig::default()).unwrap()).unwrap();
    report(
        "C4 failure-free oracle",
        (pa - expected).abs() <= 1e-9,
        format!("simulated {pa:.12} vs hand {expected:.12} (|diff| {:.1e} <= 1e-9)", (pa - expected).abs()),
    );
}

#[test]
fn c5_profile_dips() {
    let s = base();
    let at = |t: f64| s.bucket_of(t);
    let p = &s.profile;
    let local_min = |b: usize| p[b] < p[b - 1] && p[b] <= p[b + 1];
    let (pm, sd) = (at(17_520.0), at(35_040.0));
    report(
        "C5 profile shape",
        local_min(pm) && local_min(sd) && p[sd] < p[pm],
        format!(
            "17520 h bucket {:.4} (neighbours {:.4}, {:.4}); 35040 h bucket {:.4} (neighbours {:.4}, {:.4}); shutdown dip deeper",
            p[pm],
            p[pm - 1],
            p[pm + 1],
            p[sd],
            p[sd - 1],
            p[sd + 1]
        ),
    );
}

#[test]
fn c6_property_suites() {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut record = |pass: bool, line: String| {
        ok &= pass;
        lines.push(format!("{}{line}", if pass { "" } else { "FAILED " }));
    };

    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let network = common::random_network(seed, 8);
        let caps = common::random_snapshot(&network, seed);
        let got = compute_throughput(&network, &caps).unwrap();
        worst = worst.max((got - common::maxflow::oracle(&network, &caps)).abs());
    }
    record(worst <= 1e-12, format!("max-flow: 200 networks, worst diff {worst:.1e}"));

    let mut rng = RandomStream::new(99, 0);
    let conserved = (0..100_000).all(|_| {
        let (rate, beta) = (rng.uniform() * 1e-2, rng.uniform());
        let (a, b) = beta_split(rate, beta).unwrap();
        let ulp = f64::from_bits(rate.to_bits() + 1) - rate;
        (a + b - rate).abs() <= ulp
    });
    record(conserved, "beta_split conservation: 1e5 draws within 1 ulp".into());

    let rate = 1084.4e-6;
    let mut rng = RandomStream::new(0x5eed, 17);
    let mean = (0..1_000_000).map(|_| rng.exponential(rate)).sum::<f64>() / 1e6;
    let rel = (mean * rate - 1.0).abs();
    record(rel < 0.01, format!("exponential mean {mean:.1} h vs {:.1} h (rel {rel:.4})", 1.0 / rate));

    let prepared = PreparedModel::new(&build_reference_model()).unwrap();
    let config = SimConfig::default();
    let bytes = |i| serde_json::to_vec(&run_indexed(&prepared, 42, i, &config).unwrap()).unwrap();
    record((0..3).all(|i| bytes(i) == bytes(i)), "determinism: byte-identical reruns".into());

    match common::audit::audit_runs(&build_reference_model(), 30, 2024) {
        Ok(events) => record(true, format!("audits + conservation: 30 full runs, {events} events")),
        Err(e) => record(false, format!("audits: {e}")),
    }

    report("C6 property suites", ok, lines.join("; "));
}
