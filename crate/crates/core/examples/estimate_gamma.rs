//! Survival probability from the root over a grid of rates, with both
//! log-log fits.
//!
//! ```text
//! cargo run --release --example estimate_gamma -- [alpha] [trials] [mass_cap] [half_width]
//! ```

use hypercontact::experiments::{
    estimate_gamma, fit_exponent, GammaConfig, SurvivalWindow, Threads, DEFAULT_LAMBDA_GRID,
};

fn main() -> hypercontact::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let alpha = arg(0, 0.6);
    let trials = arg(1, 1000.0) as u64;
    let mut points = Vec::new();
    for &lambda in &DEFAULT_LAMBDA_GRID {
        let mut cfg = GammaConfig::new(alpha, lambda, trials);
        if let Some(cap) = args.get(2).and_then(|s| s.parse().ok()) {
            cfg.stop.mass_cap = Some(cap);
        }
        if let Some(w) = args.get(3).and_then(|s| s.parse().ok()) {
            cfg.window = SurvivalWindow::with_half_width(w, alpha);
        }
        let start = std::time::Instant::now();
        let est = estimate_gamma(&cfg, 2024, Threads(None))?;
        println!(
            "lambda {lambda:<5} gamma {:.5} [{:.5}, {:.5}]  survivals {:>5}  horizon {:>3}  events/trial {:>9.0}  {:.1}s",
            est.estimate,
            est.ci_low,
            est.ci_high,
            est.survivals,
            est.horizon_survivals,
            est.mean_events,
            start.elapsed().as_secs_f64()
        );
        points.push((lambda, est.estimate));
    }
    match fit_exponent(&points, alpha) {
        Ok(fit) => println!(
            "plain slope {:.3} (residual {:.4}), corrected slope {:.3} (residual {:.4}), theory {:.3}",
            fit.plain.slope,
            fit.plain.residual,
            fit.corrected.slope,
            fit.corrected.residual,
            fit.theory()
        ),
        Err(e) => println!("fit: {e}"),
    }
    Ok(())
}
