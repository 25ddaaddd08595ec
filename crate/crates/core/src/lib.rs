//! Production availability analysis of stochastic flow block diagrams.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no I/O:
//!
//! * [`model`]: declarative plant description, validation, common-cause
//!   beta-factor preprocessing and the bundled reference case study.
//! * [`flow`]: series/parallel throughput of a network for given
//!   per-equipment capacities.
//! * [`engine`]: seeded Monte Carlo discrete-event simulation of one plant
//!   history.
//! * [`stats`]: production availability and availability profiles across
//!   runs.
//! * [`indicators`]: subsystem criticality and contribution to production
//!   unavailability.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod engine;
pub mod flow;
pub mod indicators;
pub mod model;
pub mod stats;

pub use engine::{run_simulation, BatchRunner, RunResult, Sequential, SimConfig};
pub use model::{build_reference_model, validate, Model, PreparedModel};
pub use stats::{aggregate, production_availability, BatchStats};
