use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_alpha, HalfPlanePoint};
use crate::graph::{build_adjacency, BuildLimits, Mode};
use crate::rng::{derive_seed, RngStream};
use crate::sampler::{region_mass, sample_conditioned, Region, Window};
use crate::stats::poisson_joint_quantile;

use super::Threads;

/// Partition of the rectangle of `G_n` used to condition on a sparse
/// configuration: the top part `B_0 = {h >= eps log n}`, `K = floor(pi n^a)`
/// evenly spaced strips `B_k` of width `n^eps` below it, and the gaps `C_k`
/// between consecutive strips (the last gap wraps around the circle).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEventLayout {
    pub n: f64,
    pub a: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub strips: usize,
    /// Distance between consecutive strip centers, `pi n / K`.
    pub spacing: f64,
    pub strip_width: f64,
    /// `eps log n`.
    pub cut_height: f64,
}

impl BadEventLayout {
    pub fn new(n: f64, a: f64, epsilon: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(a > 0.5 && a < 1.0) {
            return Err(Error::domain(format!("a must lie in (1/2, 1), got {a}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(a + epsilon < 1.0) {
            return Err(Error::domain(format!("need a + epsilon < 1, got {}", a + epsilon)));
        }
        if !(n > 1.0 && n.is_finite()) {
            return Err(Error::domain(format!("n must be finite and > 1, got {n}")));
        }
        let strips = (PI * n.powf(a)).floor() as usize;
        let spacing = PI * n / strips as f64;
        let strip_width = n.powf(epsilon);
        if strips < 2 || !(spacing > strip_width) {
            return Err(Error::domain(format!("n = {n} is too small for strips to leave gaps")));
        }
        Ok(Self { n, a, epsilon, alpha, strips, spacing, strip_width, cut_height: epsilon * n.ln() })
    }

    fn left(&self) -> f64 {
        -PI * self.n / 2.0
    }

    pub fn rectangle(&self) -> Window {
        Window { x_min: self.left(), x_max: -self.left(), h_min: 0.0, h_max: 2.0 * self.n.ln() }
    }

    /// Center of strip `k` in `0..K`.
    pub fn center(&self, k: usize) -> f64 {
        self.left() + (k as f64 + 0.5) * self.spacing
    }

    pub fn b0(&self) -> Window {
        Window { h_min: self.cut_height, ..self.rectangle() }
    }

    pub fn strip(&self, k: usize) -> Window {
        let c = self.center(k);
        Window {
            x_min: c - self.strip_width / 2.0,
            x_max: c + self.strip_width / 2.0,
            h_min: 0.0,
            h_max: self.cut_height,
        }
    }

    /// `C_k`, between strip `k` and strip `k + 1 (mod K)`, as one or two windows.
    pub fn gap(&self, k: usize) -> Vec<Window> {
        let lo = self.center(k) + self.strip_width / 2.0;
        let hi = self.center(k + 1) - self.strip_width / 2.0;
        let right = -self.left();
        let w = |x_min, x_max| Window { x_min, x_max, h_min: 0.0, h_max: self.cut_height };
        if hi <= right {
            vec![w(lo, hi)]
        } else {
            vec![w(lo, right), w(self.left(), hi - PI * self.n)]
        }
    }

    pub fn forbidden(&self) -> Result<Region> {
        let mut windows = vec![self.b0()];
        windows.extend((0..self.strips).map(|k| self.strip(k)));
        Region::new(windows)
    }

    /// Gap holding `p`; `None` for points of `B_0` or of a strip.
    pub fn gap_of(&self, p: HalfPlanePoint) -> Option<usize> {
        if p.h >= self.cut_height {
            return None;
        }
        let cell = (((p.x - self.left()) / self.spacing).floor() as usize).min(self.strips - 1);
        let offset = p.x - self.center(cell);
        if offset.abs() < self.strip_width / 2.0 || (offset == -self.strip_width / 2.0) {
            return None;
        }
        Some(if offset > 0.0 { cell } else { (cell + self.strips - 1) % self.strips })
    }

    pub fn masses(&self) -> RegionMasses {
        let alpha = self.alpha;
        let gap: f64 = self.gap(0).iter().map(|w| region_mass(w, alpha)).sum();
        let b0 = region_mass(&self.b0(), alpha);
        let strip = region_mass(&self.strip(0), alpha);
        RegionMasses {
            b0,
            b0_bound: self.n.powf(1.0 - alpha * self.epsilon),
            strip,
            strip_bound: self.strip_width,
            gap,
            gap_bound: self.n.powf(1.0 - self.a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionMasses {
    pub b0: f64,
    pub b0_bound: f64,
    pub strip: f64,
    pub strip_bound: f64,
    pub gap: f64,
    pub gap_bound: f64,
}

impl RegionMasses {
    pub fn inequalities_hold(&self) -> bool {
        self.b0 <= self.b0_bound && self.strip <= self.strip_bound && self.gap <= self.gap_bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEventTrial {
    pub trial: u64,
    pub vertices: usize,
    pub cross_gap_edges: usize,
    /// Vertices outside every gap; zero by construction.
    pub stray_vertices: usize,
    pub max_component: usize,
    pub max_gap_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadEventReport {
    pub layout: BadEventLayout,
    pub masses: RegionMasses,
    pub inequalities_hold: bool,
    pub confidence: f64,
    /// Poisson quantile `m` with `P(all K * trials gap counts <= m) >= confidence`.
    pub gap_quantile: u64,
    /// `C = m / n^{1 - a}`.
    pub constant: f64,
    pub component_bound: f64,
    pub trials: Vec<BadEventTrial>,
    pub total_cross_gap_edges: usize,
    pub max_component: usize,
    pub component_bound_holds: bool,
}

/// Samples the configuration with `B_0` and every strip empty and checks
/// that the gaps do not communicate.
#[allow(clippy::too_many_arguments)]
pub fn bad_event_check(
    n: f64,
    a: f64,
    epsilon: f64,
    alpha: f64,
    trials: u64,
    confidence: f64,
    seed: u64,
    threads: Threads,
) -> Result<BadEventReport> {
    let layout = BadEventLayout::new(n, a, epsilon, alpha)?;
    if trials == 0 {
        return Err(Error::domain("trials must be > 0"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    let masses = layout.masses();
    let forbidden = layout.forbidden()?;
    let rect = layout.rectangle();
    let point_seed = derive_seed(seed, 0);
    let results = threads.map_init(
        trials as usize,
        || (),
        |_, t| {
            let mut rng = RngStream::new(point_seed, t as u64);
            let points = sample_conditioned(&rect, &forbidden, alpha, &mut rng)?;
            let gaps: Vec<Option<usize>> = points.iter().map(|&p| layout.gap_of(p)).collect();
            let g = build_adjacency(points, Mode::Wrapped { n }, alpha, BuildLimits::default())?;
            let cross_gap_edges = g.edges().filter(|&(u, v)| gaps[u] != gaps[v]).count();
            let stray_vertices = gaps.iter().filter(|c| c.is_none()).count();
            let max_component = g.components().iter().map(Vec::len).max().unwrap_or(0);
            let mut counts = vec![0usize; layout.strips];
            for c in gaps.iter().flatten() {
                counts[*c] += 1;
            }
            Ok(BadEventTrial {
                trial: t as u64,
                vertices: g.vertex_count(),
                cross_gap_edges,
                stray_vertices,
                max_component,
                max_gap_count: counts.into_iter().max().unwrap_or(0),
            })
        },
    )?;
    let gap_quantile = poisson_joint_quantile(masses.gap, (layout.strips as u64 * trials) as f64, confidence);
    let scale = n.powf(1.0 - a);
    let component_bound = gap_quantile as f64;
    let max_component = results.iter().map(|r| r.max_component).max().unwrap_or(0);
    Ok(BadEventReport {
        inequalities_hold: masses.inequalities_hold(),
        masses,
        confidence,
        gap_quantile,
        constant: gap_quantile as f64 / scale,
        component_bound,
        total_cross_gap_edges: results.iter().map(|r| r.cross_gap_edges).sum(),
        max_component,
        component_bound_holds: max_component as f64 <= component_bound,
        trials: results,
        layout,
    })
}
