//! Poisson point process with intensity `(alpha / pi) e^{-alpha h} dx dh`.
//!
//! Windows are half-open rectangles `[x_min, x_max) x [h_min, h_max)`; the
//! upper height may be infinite. Heights are drawn by inverting the
//! truncated exponential CDF, so no cap is needed for unbounded windows.

use std::f64::consts::PI;

use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_alpha, HalfPlanePoint};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Window {
    /// A degenerate window with `x_min == x_max` is accepted and has zero mass.
    pub fn new(x_min: f64, x_max: f64, h_min: f64, h_max: f64) -> Result<Self> {
        if !(x_min <= x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::domain(format!("bad horizontal range [{x_min}, {x_max})")));
        }
        if !(h_min >= 0.0) || !(h_min < h_max) || h_min.is_infinite() {
            return Err(Error::domain(format!("bad height range [{h_min}, {h_max})")));
        }
        Ok(Self { x_min, x_max, h_min, h_max })
    }

    /// `[x_min, x_max) x [0, inf)`.
    pub fn strip(x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(x_min, x_max, 0.0, f64::INFINITY)
    }

    /// The window of the wrapped graph `G_n`, `[-pi n / 2, pi n / 2) x [0, 2 log n)`.
    pub fn wrapped(n: f64) -> Result<Self> {
        if !(n > 1.0) || !n.is_finite() {
            return Err(Error::domain(format!("n must be finite and > 1, got {n}")));
        }
        Self::new(-PI * n / 2.0, PI * n / 2.0, 0.0, 2.0 * n.ln())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn contains(&self, p: HalfPlanePoint) -> bool {
        p.x >= self.x_min && p.x < self.x_max && p.h >= self.h_min && p.h < self.h_max
    }

    fn overlaps(&self, other: &Window) -> bool {
        self.x_min < other.x_max
            && other.x_min < self.x_max
            && self.h_min < other.h_max
            && other.h_min < self.h_max
            && self.width() > 0.0
            && other.width() > 0.0
    }
}

/// Finite union of pairwise disjoint windows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    windows: Vec<Window>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Rejects overlapping members.
    pub fn new(windows: Vec<Window>) -> Result<Self> {
        for (i, a) in windows.iter().enumerate() {
            for b in &windows[i + 1..] {
                if a.overlaps(b) {
                    return Err(Error::domain(format!("region members overlap: {a:?} and {b:?}")));
                }
            }
        }
        Ok(Self { windows })
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn contains(&self, p: HalfPlanePoint) -> bool {
        self.windows.iter().any(|w| w.contains(p))
    }

    pub fn mass(&self, alpha: f64) -> f64 {
        self.windows.iter().map(|w| region_mass(w, alpha)).sum()
    }
}

/// Intensity measure of a window.
pub fn region_mass(w: &Window, alpha: f64) -> f64 {
    let tail = |h: f64| if h.is_infinite() { 0.0 } else { (-alpha * h).exp() };
    (w.width() / PI) * (tail(w.h_min) - tail(w.h_max))
}

/// One realization of the point process restricted to `w`.
pub fn sample_window(w: &Window, alpha: f64, rng: &mut RngStream) -> Result<Vec<HalfPlanePoint>> {
    check_alpha(alpha)?;
    let mass = region_mass(w, alpha);
    if !mass.is_finite() {
        return Err(Error::domain(format!("window {w:?} has infinite mass")));
    }
    if mass <= 0.0 {
        return Ok(Vec::new());
    }
    let count =
        Poisson::new(mass).map_err(|e| Error::domain(format!("poisson mean {mass}: {e}")))?.sample(rng) as usize;
    let span = -(-alpha * (w.h_max - w.h_min)).exp_m1(); // 1 - e^{-alpha (h_max - h_min)}
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = w.x_min + w.width() * rng.open01();
        let h = loop {
            let h = w.h_min - (-rng.open01() * span).ln_1p() / alpha;
            // rounding can land exactly on the open upper edge
            if h < w.h_max {
                break h;
            }
        };
        points.push(HalfPlanePoint { x, h });
    }
    Ok(points)
}

/// The root `(0, h)` with `P(h > t) = e^{-alpha t}`.
pub fn sample_root(alpha: f64, rng: &mut RngStream) -> Result<HalfPlanePoint> {
    check_alpha(alpha)?;
    Ok(HalfPlanePoint { x: 0.0, h: rng.exp(alpha) })
}

/// Point process on `w` with every point inside `forbidden` removed. For a
/// Poisson process this is exactly the process on `w \ forbidden`.
pub fn sample_conditioned(
    w: &Window,
    forbidden: &Region,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<Vec<HalfPlanePoint>> {
    let mut points = sample_window(w, alpha, rng)?;
    points.retain(|p| !forbidden.contains(*p));
    Ok(points)
}
