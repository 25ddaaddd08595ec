//! File formats, reports and parallel batch execution for
//! [`prodavail_core`].
//!
//! Models are JSON documents with the schema of [`prodavail_core::Model`].

pub mod io;
pub mod parallel;
pub mod report;

pub use io::{load_model, model_digest, parse_model, LoadError, REFERENCE_MODEL_JSON};
pub use parallel::Parallel;
pub use report::{write_profile_csv, Report, RunParameters};
