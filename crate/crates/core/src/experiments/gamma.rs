use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::contact::{Engine, SimParams, StopRule};
use crate::error::{Error, Result};
use crate::geometry::check_alpha;
use crate::graph::{LazyGraph, Mode, VertexSet};
use crate::rng::{derive_seed, RngStream};
use crate::sampler::{sample_root, sample_window, Window};
use crate::stats::{ols, wilson_interval, LinearFit};

use super::Threads;

pub const DEFAULT_LAMBDA_GRID: [f64; 5] = [0.4, 0.3, 0.2, 0.15, 0.1];

/// Truncation `[-W, W) x [0, h_cap)` of the infinite model around the root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalWindow {
    pub half_width: f64,
    pub h_cap: f64,
}

impl SurvivalWindow {
    /// Window of the given half-width whose cap leaves residual mass `0.005`.
    pub fn with_half_width(half_width: f64, alpha: f64) -> Self {
        let h_cap = (2.0 * half_width / (PI * 0.005)).ln() / alpha;
        Self { half_width, h_cap }
    }

    /// Intensity mass above the cap, `(2W / pi) e^{-alpha h_cap}`.
    pub fn residual_mass(&self, alpha: f64) -> f64 {
        2.0 * self.half_width / PI * (-alpha * self.h_cap).exp()
    }

    fn rect(&self) -> Result<Window> {
        Window::new(-self.half_width, self.half_width, 0.0, self.h_cap)
    }
}

/// Default truncation and survival proxy for `(alpha, lambda)`.
///
/// A run counts as surviving once 2000 distinct vertices have been
/// infected, or when it is still alive at `t = 10^4`. The window
/// `[-5 10^4, 5 10^4)` holds about 32000 vertices, well above the cap. Over
/// the default rate grid the estimates do not move when the cap is raised
/// to 8000, so the proxy has reached its plateau. The escape radius is
/// unused: hubs of the truncated graph keep its diameter small.
pub fn default_window(alpha: f64, lambda: f64) -> (SurvivalWindow, StopRule) {
    let _ = lambda;
    let stop = StopRule { t_max: 1e4, escape_radius: None, mass_cap: Some(2000), reference: None };
    (SurvivalWindow::with_half_width(5e4, alpha), stop)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub trials: u64,
    pub window: SurvivalWindow,
    pub stop: StopRule,
}

impl GammaConfig {
    pub fn new(alpha: f64, lambda: f64, trials: u64) -> Self {
        let (window, stop) = default_window(alpha, lambda);
        Self { alpha, lambda, trials, window, stop }
    }
}

/// One survival-probability estimate; flat so it serializes as a CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub lambda: f64,
    pub alpha: f64,
    pub trials: u64,
    pub survivals: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub t_max: f64,
    pub escape_radius: Option<usize>,
    pub mass_cap: Option<usize>,
    pub half_width: f64,
    pub h_cap: f64,
    pub residual_mass: f64,
    pub horizon_survivals: u64,
    pub mean_events: f64,
}

/// Survival probability of the process started from the root, estimated
/// on a fresh truncated sample of the infinite model per trial.
pub fn estimate_gamma(cfg: &GammaConfig, seed: u64, threads: Threads) -> Result<GammaEstimate> {
    check_alpha(cfg.alpha)?;
    let params = SimParams::new(cfg.lambda)?;
    if cfg.trials == 0 {
        return Err(Error::domain("trials must be > 0"));
    }
    cfg.stop.validate()?;
    let residual = cfg.window.residual_mass(cfg.alpha);
    if !(residual < 0.01) {
        return Err(Error::domain(format!("window cap leaves residual mass {residual:.4} >= 0.01")));
    }
    let rect = cfg.window.rect()?;
    let point_seed = derive_seed(seed, cfg.lambda.to_bits() ^ cfg.alpha.to_bits().rotate_left(17));
    let outcomes = threads.map_init(cfg.trials as usize, Engine::new, |engine, t| {
        let mut rng = RngStream::new(point_seed, t as u64);
        let mut points = sample_window(&rect, cfg.alpha, &mut rng)?;
        let root = points.len();
        points.push(sample_root(cfg.alpha, &mut rng)?);
        let mut graph = LazyGraph::new(points, Mode::Infinite, cfg.alpha)?;
        let stop = StopRule { reference: Some(root), ..cfg.stop };
        let run = engine.run(&mut graph, &VertexSet::singleton(root), params, &stop, None, &mut rng)?;
        let horizon = matches!(
            run.verdict,
            crate::contact::Verdict::Survived { reason: crate::contact::SurvivalReason::Horizon }
        );
        Ok((run.survived(), horizon, run.events))
    })?;
    let survivals = outcomes.iter().filter(|o| o.0).count() as u64;
    let horizon_survivals = outcomes.iter().filter(|o| o.1).count() as u64;
    let mean_events = outcomes.iter().map(|o| o.2 as f64).sum::<f64>() / cfg.trials as f64;
    let (ci_low, ci_high) = wilson_interval(survivals, cfg.trials, 1.96);
    Ok(GammaEstimate {
        lambda: cfg.lambda,
        alpha: cfg.alpha,
        trials: cfg.trials,
        survivals,
        estimate: survivals as f64 / cfg.trials as f64,
        ci_low,
        ci_high,
        t_max: cfg.stop.t_max,
        escape_radius: cfg.stop.escape_radius,
        mass_cap: cfg.stop.mass_cap,
        half_width: cfg.window.half_width,
        h_cap: cfg.window.h_cap,
        residual_mass: residual,
        horizon_survivals,
        mean_events,
    })
}

/// Estimates over a grid of rates with a per-rate trial count.
pub fn gamma_grid(
    alpha: f64,
    lambdas: &[f64],
    trials: impl Fn(f64) -> u64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<GammaEstimate>> {
    lambdas.iter().map(|&l| estimate_gamma(&GammaConfig::new(alpha, l, trials(l)), seed, threads)).collect()
}

/// Log-log fits of survival estimates against the rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub points: Vec<(f64, f64)>,
    /// `log gamma` against `log lambda`.
    pub plain: LinearFit,
    /// `log gamma + (2 alpha - 1) log log(1/lambda)` against `log lambda`.
    pub corrected: LinearFit,
    /// `1 / (2 - 2 alpha)`, the exponent for `alpha <= 3/4`.
    pub theory_low: f64,
    /// `4 alpha - 1`, the exponent for `alpha > 3/4`.
    pub theory_high: f64,
}

impl ExponentFit {
    /// Theoretical exponent for this `alpha`.
    pub fn theory(&self) -> f64 {
        if self.alpha <= 0.75 {
            self.theory_low
        } else {
            self.theory_high
        }
    }
}

pub fn fit_exponent(points: &[(f64, f64)], alpha: f64) -> Result<ExponentFit> {
    check_alpha(alpha)?;
    if points.len() < 4 {
        return Err(Error::Degenerate(format!("need at least 4 points, got {}", points.len())));
    }
    if let Some(&(l, _)) = points.iter().find(|p| !(p.0 > 0.0 && p.0 < 1.0)) {
        return Err(Error::domain(format!("rates must lie in (0, 1), got {l}")));
    }
    if let Some(&(l, _)) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::Degenerate(format!("zero survival estimate at lambda = {l}; increase trials")));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let yc: Vec<f64> = points.iter().zip(&y).map(|(p, y)| y + (2.0 * alpha - 1.0) * (1.0 / p.0).ln().ln()).collect();
    Ok(ExponentFit {
        alpha,
        points: points.to_vec(),
        plain: ols(&x, &y)?,
        corrected: ols(&x, &yc)?,
        theory_low: 1.0 / (2.0 - 2.0 * alpha),
        theory_high: 4.0 * alpha - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = DEFAULT_LAMBDA_GRID.iter().map(|&l| (l, l.powf(1.25))).collect();
        let fit = fit_exponent(&pts, 0.6).unwrap();
        assert!((fit.plain.slope - 1.25).abs() < 1e-9);
        assert!((fit.theory() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn log_corrected_power_law() {
        // lambda^{4 alpha - 1} / log(1/lambda)^{2 alpha - 1} at alpha = 0.9
        let pts: Vec<(f64, f64)> =
            DEFAULT_LAMBDA_GRID.iter().map(|&l| (l, l.powf(2.6) / (1.0 / l).ln().powf(0.8))).collect();
        let fit = fit_exponent(&pts, 0.9).unwrap();
        assert!((fit.corrected.slope - 2.6).abs() < 1e-6);
        assert!(fit.corrected.residual < fit.plain.residual);
        assert!((fit.theory() - 2.6).abs() < 1e-12);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = RngStream::new(9, 0);
        for _ in 0..50 {
            let pts: Vec<(f64, f64)> =
                DEFAULT_LAMBDA_GRID.iter().map(|&l| (l, l.powf(1.25) * (1.0 + 0.1 * (rng.open01() - 0.5)))).collect();
            let fit = fit_exponent(&pts, 0.6).unwrap();
            assert!((fit.plain.slope - 1.25).abs() < 0.1, "{}", fit.plain.slope);
        }
    }

    #[test]
    fn fit_errors() {
        let pts = [(0.4, 0.1), (0.3, 0.05), (0.2, 0.0), (0.1, 0.01)];
        assert!(matches!(fit_exponent(&pts, 0.6), Err(Error::Degenerate(_))));
        assert!(fit_exponent(&pts[..3], 0.6).is_err());
    }

    #[test]
    fn zero_trials_is_an_error() {
        let cfg = GammaConfig::new(0.7, 0.5, 0);
        assert!(estimate_gamma(&cfg, 1, Threads(Some(1))).is_err());
    }

    #[test]
    fn large_rate_survives_often() {
        let mut cfg = GammaConfig::new(0.7, 5.0, 200);
        cfg.window = SurvivalWindow::with_half_width(500.0, 0.7);
        cfg.stop.mass_cap = Some(200);
        let est = estimate_gamma(&cfg, 4, Threads(None)).unwrap();
        assert!(est.estimate > 0.5, "{est:?}");
        assert!(est.ci_low <= est.estimate && est.estimate <= est.ci_high);
    }

    #[test]
    fn window_residual_mass() {
        let w = SurvivalWindow::with_half_width(1000.0, 0.6);
        assert!((w.residual_mass(0.6) - 0.005).abs() < 1e-12);
        let mut cfg = GammaConfig::new(0.6, 0.3, 10);
        cfg.window.h_cap = 1.0;
        assert!(estimate_gamma(&cfg, 0, Threads(Some(1))).is_err());
    }
}
