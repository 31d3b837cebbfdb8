use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeFitOptions {
    /// Smallest admissible tail size when scanning `d_min`.
    pub min_tail: usize,
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for DegreeFitOptions {
    fn default() -> Self {
        Self { min_tail: 100, bootstrap: 200, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeFit {
    /// Fitted `chi` in `P(D = d) ~ d^{-chi}`.
    pub exponent: f64,
    pub d_min: usize,
    pub tail_points: usize,
    /// Kolmogorov-Smirnov distance of the tail at the chosen `d_min`.
    pub ks: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Discrete power-law MLE in its continuity-corrected form,
/// `1 + m / sum ln(d_i / (d_min - 1/2))`.
fn mle(tail: &[usize], d_min: usize) -> f64 {
    let shift = d_min as f64 - 0.5;
    let s: f64 = tail.iter().map(|&d| (d as f64 / shift).ln()).sum();
    1.0 + tail.len() as f64 / s
}

/// KS distance between the empirical tail and `P(D >= d) = ((d - 1/2) / (d_min - 1/2))^{1 - chi}`.
fn ks_distance(sorted_tail: &[usize], d_min: usize, chi: f64) -> f64 {
    let m = sorted_tail.len() as f64;
    let shift = d_min as f64 - 0.5;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < sorted_tail.len() {
        let d = sorted_tail[i];
        let emp = (sorted_tail.len() - i) as f64 / m;
        let model = ((d as f64 - 0.5) / shift).powf(1.0 - chi);
        worst = worst.max((emp - model).abs());
        while i < sorted_tail.len() && sorted_tail[i] == d {
            i += 1;
        }
    }
    worst
}

/// Power-law tail fit of the degree sequence of `g`.
pub fn degree_tail_fit(g: &Graph, opts: DegreeFitOptions) -> Result<DegreeFit> {
    fit_degrees(&g.degrees(), opts)
}

/// Power-law tail fit of a degree sample, with `d_min` chosen by minimal KS
/// distance and a percentile bootstrap interval at fixed `d_min`.
pub fn fit_degrees(degrees: &[usize], opts: DegreeFitOptions) -> Result<DegreeFit> {
    let mut sorted: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    sorted.sort_unstable();
    let min_tail = opts.min_tail.max(2);
    if sorted.len() < min_tail {
        return Err(Error::Degenerate(format!(
            "{} positive degrees, fewer than the {min_tail} tail points needed",
            sorted.len()
        )));
    }
    let mut best: Option<(f64, usize, f64, usize)> = None;
    let mut start = 0;
    while start < sorted.len() && sorted.len() - start >= min_tail {
        let d_min = sorted[start];
        let tail = &sorted[start..];
        if tail.last() != Some(&d_min) {
            let chi = mle(tail, d_min);
            let ks = ks_distance(tail, d_min, chi);
            if best.is_none_or(|b| ks < b.0) {
                best = Some((ks, d_min, chi, start));
            }
        }
        while start < sorted.len() && sorted[start] == d_min {
            start += 1;
        }
    }
    let (ks, d_min, exponent, start) =
        best.ok_or_else(|| Error::Degenerate("no admissible d_min with a nonconstant tail".into()))?;
    let tail = &sorted[start..];
    let mut rng = RngStream::new(opts.seed, 0);
    let mut boot: Vec<f64> = (0..opts.bootstrap)
        .map(|_| {
            let resample: Vec<usize> = (0..tail.len()).map(|_| tail[rng.below(tail.len() as u64) as usize]).collect();
            mle(&resample, d_min)
        })
        .filter(|c| c.is_finite())
        .collect();
    boot.sort_by(f64::total_cmp);
    let (ci_low, ci_high) = if boot.is_empty() {
        (exponent, exponent)
    } else {
        let at = |q: f64| boot[((q * (boot.len() - 1) as f64).round() as usize).min(boot.len() - 1)];
        (at(0.025), at(0.975))
    };
    Ok(DegreeFit { exponent, d_min, tail_points: tail.len(), ks, ci_low, ci_high })
}
