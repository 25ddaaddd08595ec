//! Shared fixtures for the integration tests.
#![allow(dead_code)]

pub mod audit;
pub mod maxflow;

use prodavail_core::engine::RandomStream;
use prodavail_core::flow::CapacitySnapshot;
use prodavail_core::model::{Branch, Network, ParallelStage, Stage};

/// Random series/parallel network with at most `max_units` equipment,
/// named `e0`, `e1`, ...
pub fn random_network(seed: u64, max_units: usize) -> Network {
    let mut rng = RandomStream::new(seed, 0);
    let mut budget = 1 + (rng.uniform() * max_units as f64) as usize;
    budget = budget.min(max_units);
    let mut next = 0;
    let stages = random_stages(&mut rng, &mut budget, &mut next, 0);
    Network { stages }
}

fn random_stages(rng: &mut RandomStream, budget: &mut usize, next: &mut usize, depth: u32) -> Vec<Stage> {
    let want = 1 + (rng.uniform() * 3.0) as usize;
    let mut stages = Vec::new();
    for _ in 0..want {
        if *budget == 0 {
            break;
        }
        if *budget >= 2 && depth < 3 && rng.uniform() < 0.45 {
            let branches = (2 + (rng.uniform() * 2.0) as usize).min(*budget);
            let mut out = Vec::with_capacity(branches);
            for _ in 0..branches {
                if *budget == 0 {
                    break;
                }
                let stages = random_stages(rng, budget, next, depth + 1);
                let capacity = match rng.uniform() {
                    u if u < 0.2 => 1.0,
                    u if u < 0.4 => 0.5,
                    _ => rng.uniform().max(1e-3),
                };
                out.push(Branch { stages, capacity });
            }
            let required = 1 + (rng.uniform() * out.len() as f64) as u32;
            stages.push(Stage::Parallel(ParallelStage { branches: out, required_active_branches: required }));
        } else {
            stages.push(Stage::Single(format!("e{next}")));
            *next += 1;
            *budget -= 1;
        }
    }
    stages
}

/// Random equipment capacity with extra mass on 0 and 1.
pub fn random_capacity(rng: &mut RandomStream) -> f64 {
    match rng.uniform() {
        u if u < 0.15 => 0.0,
        u if u < 0.35 => 1.0,
        u if u < 0.45 => 0.5,
        _ => rng.uniform(),
    }
}

/// Random capacities for every equipment of `network`.
pub fn random_snapshot(network: &Network, seed: u64) -> CapacitySnapshot {
    let mut rng = RandomStream::new(seed, 1);
    network.equipment_ids().into_iter().map(|id| (id, random_capacity(&mut rng))).collect()
}
