use prodavail_core::engine::{run_indexed, BatchRunner, EngineError, SimConfig};
use prodavail_core::{PreparedModel, RunResult};
use rayon::prelude::*;

/// Runs a batch on a rayon pool. Each run's seed depends only on its index,
/// so results are identical to [`prodavail_core::Sequential`] whatever the
/// thread count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel {
    /// Upper bound on worker threads; `None` uses every core.
    pub threads: Option<usize>,
}

impl Parallel {
    pub fn with_threads(threads: Option<usize>) -> Self {
        Self { threads }
    }
}

impl BatchRunner for Parallel {
    fn run_batch(
        &self,
        model: &PreparedModel,
        base_seed: u64,
        runs: u32,
        config: &SimConfig,
    ) -> Result<Vec<RunResult>, EngineError> {
        let work = || (0..runs).into_par_iter().map(|i| run_indexed(model, base_seed, i, config)).collect();
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(work),
            None => work(),
        }
    }
}
