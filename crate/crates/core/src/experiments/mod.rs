//! Monte Carlo campaigns: survival probability and exponent fits,
//! extinction-time scans on `G_n` and on stars, density at a finite
//! horizon, degree-tail fits, the conditioned bad-event structure,
//! tessellation and ladder statistics, and Monte Carlo checks against the
//! exact oracles.
//!
//! Every campaign takes a master seed. Parameter point `i` uses the seed
//! `derive_seed(seed, i)` and trial `t` at that point uses stream `t`, so
//! results do not depend on the number of worker threads.

mod bad_event;
mod degree;
mod density;
mod exactness;
mod gamma;
mod metastability;
mod output;
mod structure;

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{build_adjacency, BuildLimits, Graph, Mode};
use crate::rng::RngStream;
use crate::sampler::{sample_window, Window};

pub use bad_event::{bad_event_check, BadEventLayout, BadEventReport, BadEventTrial, RegionMasses};
pub use degree::{degree_tail_fit, fit_degrees, DegreeFit, DegreeFitOptions};
pub use density::{density_experiment, DensityConfig, DensityResult};
pub use exactness::{
    oracle_comparison, simple_paths, small_connected_graphs, trace_bound_check, OracleComparison, TraceRow,
};
pub use gamma::{
    default_window, estimate_gamma, fit_exponent, gamma_grid, ExponentFit, GammaConfig, GammaEstimate, SurvivalWindow,
    DEFAULT_LAMBDA_GRID,
};
pub use metastability::{metastability_scan, star_scan, MetaRow, StarRow};
pub use output::{write_csv, write_json, CampaignSummary};
pub use structure::{ladder_campaign, tessellation_campaign, LadderRow, RowReport, TessellationReport};

/// Worker pool size; `None` uses every available core.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Threads(pub Option<usize>);

impl Threads {
    /// Maps `f` over `0..count` in parallel, keeping index order. Each worker
    /// owns one `init()` state for all the items it processes.
    pub(crate) fn map_init<S, T, I, F>(self, count: usize, init: I, f: F) -> Result<Vec<T>>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize) -> Result<T> + Sync + Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.0.unwrap_or(0))
            .build()
            .map_err(|e| crate::Error::capacity(format!("thread pool: {e}")))?;
        pool.install(|| (0..count).into_par_iter().map_init(&init, |s, i| f(s, i)).collect())
    }
}

/// One sample of the wrapped graph `G_n`.
pub fn sample_wrapped(n: f64, alpha: f64, rng: &mut RngStream) -> Result<Graph> {
    let points = sample_window(&Window::wrapped(n)?, alpha, rng)?;
    build_adjacency(points, Mode::Wrapped { n }, alpha, BuildLimits::default())
}
