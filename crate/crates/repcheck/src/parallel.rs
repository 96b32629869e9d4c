//! Multi-threaded driver for the perfect-replication simulation.

use rayon::prelude::*;
use repcheck_core::{simulate_study, SimulationConfig, SimulationResult, StudyRecord};

/// Same result as [`repcheck_core::simulate_perfect_replications`] for any
/// thread count. `threads = None` uses the rayon default.
pub fn simulate_parallel(
    studies: &[StudyRecord],
    cfg: &SimulationConfig,
    threads: Option<usize>,
) -> anyhow::Result<SimulationResult> {
    if cfg.n_sims == 0 {
        anyhow::bail!("n_sims must be at least 1");
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let outcomes = pool.install(|| {
        studies
            .par_iter()
            .map(|s| simulate_study(s, cfg))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SimulationResult::from_outcomes(studies, &outcomes, *cfg)?)
}
