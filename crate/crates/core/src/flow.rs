//! Instantaneous throughput of a series/parallel flow network.
//!
//! A series chain delivers the minimum of its stages. A parallel block
//! delivers `min(1, sum(branch.capacity * branch_throughput))` where each
//! branch's throughput is evaluated recursively on its own 0..1 scale.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Network, Stage};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("capacity snapshot has no entry for `{0}`")]
    MissingEntry(String),
}

/// Effective capacity of each equipment, as a fraction of its nominal.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CapacitySnapshot(BTreeMap<String, f64>);

impl CapacitySnapshot {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every equipment in `network` at `capacity`.
    pub fn uniform(network: &Network, capacity: f64) -> Self {
        let mut s = Self::new();
        network.for_each_equipment(&mut |id| s.set(id, capacity));
        s
    }

    pub fn set(&mut self, id: &str, capacity: f64) {
        self.0.insert(String::from(id), capacity);
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for CapacitySnapshot {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// System throughput, as a fraction of the reference production, for the
/// given per-equipment capacities.
pub fn compute_throughput(network: &Network, snapshot: &CapacitySnapshot) -> Result<f64, FlowError> {
    fn series(stages: &[Stage], snapshot: &CapacitySnapshot) -> Result<f64, FlowError> {
        let mut out = f64::INFINITY;
        for stage in stages {
            out = out.min(stage_value(stage, snapshot)?);
        }
        Ok(if out.is_finite() { out } else { 0.0 })
    }

    fn stage_value(stage: &Stage, snapshot: &CapacitySnapshot) -> Result<f64, FlowError> {
        match stage {
            Stage::Single(id) => {
                let c = snapshot.get(id).ok_or_else(|| FlowError::MissingEntry(id.clone()))?;
                Ok(c.clamp(0.0, 1.0))
            }
            Stage::Parallel(p) => {
                let mut sum = 0.0;
                for b in &p.branches {
                    sum += b.capacity * series(&b.stages, snapshot)?;
                }
                Ok(sum.min(1.0))
            }
        }
    }

    Ok(series(&network.stages, snapshot)?.clamp(0.0, 1.0))
}

#[derive(Debug, Clone)]
enum Node {
    Unit(usize),
    Parallel(Vec<(f64, Vec<Node>)>),
}

/// Index-based form of a [`Network`] evaluated by the simulation kernel.
#[derive(Debug, Clone)]
pub(crate) struct CompiledNetwork {
    stages: Vec<Node>,
}

impl CompiledNetwork {
    pub(crate) fn compile(network: &Network, index: &BTreeMap<&str, usize>) -> Self {
        fn node(stage: &Stage, index: &BTreeMap<&str, usize>) -> Node {
            match stage {
                Stage::Single(id) => Node::Unit(index[id.as_str()]),
                Stage::Parallel(p) => Node::Parallel(
                    p.branches
                        .iter()
                        .map(|b| (b.capacity, b.stages.iter().map(|s| node(s, index)).collect()))
                        .collect(),
                ),
            }
        }
        Self { stages: network.stages.iter().map(|s| node(s, index)).collect() }
    }

    pub(crate) fn throughput(&self, capacity: &[f64]) -> f64 {
        fn series(nodes: &[Node], capacity: &[f64]) -> f64 {
            let mut out = f64::INFINITY;
            for n in nodes {
                out = out.min(value(n, capacity));
                if out <= 0.0 {
                    return 0.0;
                }
            }
            if out.is_finite() { out } else { 0.0 }
        }
        fn value(node: &Node, capacity: &[f64]) -> f64 {
            match node {
                Node::Unit(i) => capacity[*i].clamp(0.0, 1.0),
                Node::Parallel(branches) => {
                    let mut sum = 0.0;
                    for (cap, stages) in branches {
                        sum += cap * series(stages, capacity);
                    }
                    sum.min(1.0)
                }
            }
        }
        series(&self.stages, capacity).clamp(0.0, 1.0)
    }
}
