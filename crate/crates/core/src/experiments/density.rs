use serde::{Deserialize, Serialize};

use crate::contact::{Engine, SimParams, StopRule, SurvivalReason, Verdict};
use crate::error::{Error, Result};
use crate::geometry::check_alpha;
use crate::graph::VertexSet;
use crate::rng::{derive_seed, RngStream};
use crate::stats::{mean, std_dev};

use super::{estimate_gamma, sample_wrapped, GammaConfig, Threads};

/// Density of infection at time `t_n` on `G_n` started fully infected.
///
/// `t_n` should stay below the extinction times seen in a metastability
/// scan at the same `(n, lambda)`; the caller picks it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub n: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub t_n: f64,
    pub trials: u64,
    /// Trials for the survival-probability reference; 0 skips it.
    pub gamma_trials: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub n: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub t_n: f64,
    pub trials: u64,
    pub mean_density: f64,
    pub density_se: f64,
    pub gamma_reference: Option<f64>,
    pub gamma_ci_low: Option<f64>,
    pub gamma_ci_high: Option<f64>,
    /// `mean_density - gamma_reference`.
    pub gap: Option<f64>,
}

pub fn density_experiment(cfg: &DensityConfig, seed: u64, threads: Threads) -> Result<DensityResult> {
    check_alpha(cfg.alpha)?;
    let params = SimParams::allowing_zero(cfg.lambda)?;
    if cfg.trials == 0 {
        return Err(Error::domain("trials must be > 0"));
    }
    if !(cfg.t_n >= 0.0 && cfg.t_n.is_finite()) {
        return Err(Error::domain(format!("t_n must be finite and >= 0, got {}", cfg.t_n)));
    }
    let point_seed = derive_seed(seed, 0);
    let densities = threads.map_init(cfg.trials as usize, Engine::new, |engine, t| {
        let mut rng = RngStream::new(point_seed, t as u64);
        let g = sample_wrapped(cfg.n, cfg.alpha, &mut rng)?;
        let size = g.vertex_count();
        if size == 0 {
            return Err(Error::Degenerate("sampled G_n has no vertices".into()));
        }
        if cfg.t_n == 0.0 {
            return Ok(1.0);
        }
        let run = engine.run(&mut &g, &VertexSet::all(size), params, &StopRule::horizon(cfg.t_n), None, &mut rng)?;
        let alive = match run.verdict {
            Verdict::Survived { reason: SurvivalReason::Horizon } => run.final_infected,
            _ => 0,
        };
        Ok(alive as f64 / size as f64)
    })?;
    let mean_density = mean(&densities);
    let density_se = if densities.len() > 1 { std_dev(&densities) / (densities.len() as f64).sqrt() } else { 0.0 };
    let gamma = if cfg.gamma_trials > 0 {
        let g =
            estimate_gamma(&GammaConfig::new(cfg.alpha, cfg.lambda, cfg.gamma_trials), derive_seed(seed, 1), threads)?;
        Some(g)
    } else {
        None
    };
    Ok(DensityResult {
        n: cfg.n,
        alpha: cfg.alpha,
        lambda: cfg.lambda,
        t_n: cfg.t_n,
        trials: cfg.trials,
        mean_density,
        density_se,
        gamma_reference: gamma.as_ref().map(|g| g.estimate),
        gamma_ci_low: gamma.as_ref().map(|g| g.ci_low),
        gamma_ci_high: gamma.as_ref().map(|g| g.ci_high),
        gap: gamma.as_ref().map(|g| mean_density - g.estimate),
    })
}
