use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HalfPlanePoint;
use crate::graph::Graph;
use crate::sampler::{region_mass, Window};

/// Boxes for embedding a half-line of `d`-stars to the right of a vertex at
/// `x = 0`: upper boxes `S_k = [L_k, L_{k+1}) x [H_k, inf)` holding the
/// spine and lower boxes `S'_k = [L_k, L_{k+1}) x [0, 1]` holding leaves,
/// where `H_k = 2 log(2d) + k`, `l_k = e^{H_k - 2}` and `L_k = l_0 + ... + l_{k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderBoxes {
    pub d: usize,
    pub h_base: f64,
}

pub fn ladder_boxes(d: usize) -> Result<LadderBoxes> {
    if d == 0 {
        return Err(Error::domain("star size d must be >= 1"));
    }
    Ok(LadderBoxes { d, h_base: 2.0 * (2.0 * d as f64).ln() })
}

impl LadderBoxes {
    pub fn height(&self, k: usize) -> f64 {
        self.h_base + k as f64
    }

    pub fn length(&self, k: usize) -> f64 {
        (self.height(k) - 2.0).exp()
    }

    /// `L_k`, the left end of column `k`.
    pub fn start(&self, k: usize) -> f64 {
        (0..k).map(|j| self.length(j)).sum()
    }

    pub fn upper(&self, k: usize) -> Window {
        Window { x_min: self.start(k), x_max: self.start(k + 1), h_min: self.height(k), h_max: f64::INFINITY }
    }

    /// `S'_k` as a window; membership uses the closed top edge `h <= 1`.
    pub fn lower(&self, k: usize) -> Window {
        Window { x_min: self.start(k), x_max: self.start(k + 1), h_min: 0.0, h_max: 1.0 }
    }

    pub fn in_upper(&self, k: usize, p: HalfPlanePoint) -> bool {
        self.upper(k).contains(p)
    }

    pub fn in_lower(&self, k: usize, p: HalfPlanePoint) -> bool {
        let w = self.lower(k);
        p.x >= w.x_min && p.x < w.x_max && p.h >= 0.0 && p.h <= 1.0
    }

    /// Intensity mass of `S_k`.
    pub fn upper_mass(&self, k: usize, alpha: f64) -> f64 {
        region_mass(&self.upper(k), alpha)
    }

    /// `P(S_{k+1} is nonempty)` under the exact intensity.
    pub fn next_nonempty_prob(&self, k: usize, alpha: f64) -> f64 {
        -(-self.upper_mass(k + 1, alpha)).exp_m1()
    }

    /// The closed form `1 - exp(-(1/alpha) e^{(1-alpha) H_k - 1})` stated for
    /// `P(S_{k+1} is nonempty)`. It drops the `1/pi` of the intensity and a
    /// factor `e^{-alpha}`, so it overstates the exact probability.
    pub fn stated_next_nonempty_prob(&self, k: usize, alpha: f64) -> f64 {
        -(-((1.0 - alpha) * self.height(k) - 1.0).exp() / alpha).exp_m1()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderEmbedding {
    /// `v_0 = v, v_1, ...`: the leftmost vertex of each nonempty `S_k`.
    pub spine: Vec<usize>,
    /// Neighbors of `v_k` inside `S'_k`.
    pub leaf_counts: Vec<usize>,
    /// First `k` with `S_k` empty.
    pub failed_box: Option<usize>,
    /// First `k` whose spine vertex has fewer than `d` leaves.
    pub failed_leaves: Option<usize>,
}

impl LadderEmbedding {
    pub fn success(&self) -> bool {
        self.failed_box.is_none() && self.failed_leaves.is_none()
    }
}

/// Greedy search for a half-line of `d`-stars rooted at `v` using columns
/// `0..=max_k`, with the boxes translated to start at `x_v`.
pub fn find_ladder_embedding(g: &Graph, v: usize, d: usize, max_k: usize) -> Result<LadderEmbedding> {
    let points = g.points().ok_or_else(|| Error::domain("ladder search needs a geometric graph"))?;
    if v >= points.len() {
        return Err(Error::domain(format!("vertex {v} outside the graph")));
    }
    let boxes = ladder_boxes(d)?;
    let origin = points[v];
    if !(origin.h > boxes.h_base) {
        return Err(Error::domain(format!("vertex height {} must exceed 2 log(2d) = {}", origin.h, boxes.h_base)));
    }
    let local = |p: HalfPlanePoint| HalfPlanePoint { x: p.x - origin.x, h: p.h };
    let mut out = LadderEmbedding { spine: vec![v], leaf_counts: Vec::new(), failed_box: None, failed_leaves: None };
    let mut current = v;
    for k in 0..=max_k {
        if k > 0 {
            let next = (0..points.len())
                .filter(|&u| u != v && boxes.in_upper(k, local(points[u])))
                .min_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(a.cmp(&b)));
            match next {
                Some(u) => {
                    current = u;
                    out.spine.push(u);
                }
                None => {
                    out.failed_box = Some(k);
                    break;
                }
            }
        }
        let leaves = g.neighbors(current).iter().filter(|&&w| boxes.in_lower(k, local(points[w as usize]))).count();
        out.leaf_counts.push(leaves);
        if leaves < d && out.failed_leaves.is_none() {
            out.failed_leaves = Some(k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::adjacent;
    use crate::graph::{build_adjacency, BuildLimits, Mode};
    use crate::rng::RngStream;

    #[test]
    fn geometry_values() {
        let b = ladder_boxes(2).unwrap();
        assert!((b.h_base - 2.0 * 4f64.ln()).abs() < 1e-12);
        assert!((b.h_base - 2.7726).abs() < 1e-4);
        assert!((b.length(0) - 16.0 / std::f64::consts::E.powi(2)).abs() < 1e-12);
        assert!((b.length(0) - 2.1654).abs() < 1e-4);
        assert_eq!(b.start(0), 0.0);
        assert!(ladder_boxes(0).is_err());
    }

    #[test]
    fn boxes_are_disjoint() {
        let b = ladder_boxes(7).unwrap();
        for k in 0..6 {
            assert!(b.upper(k).x_max <= b.upper(k + 1).x_min);
            assert!(b.lower(k).x_max <= b.lower(k + 1).x_min);
            assert!(b.upper(k).h_min > b.lower(k).h_max);
        }
    }

    #[test]
    fn consecutive_upper_boxes_are_adjacent() {
        let mut rng = RngStream::new(3, 0);
        for d in [1, 5, 50] {
            let b = ladder_boxes(d).unwrap();
            for k in 0..4 {
                let (s, t) = (b.upper(k), b.upper(k + 1));
                for _ in 0..2000 {
                    let pick = |w: &Window, rng: &mut RngStream| HalfPlanePoint {
                        x: w.x_min + (w.x_max - w.x_min) * rng.open01(),
                        h: w.h_min + 5.0 * rng.open01(),
                    };
                    let (a, c) = (pick(&s, &mut rng), pick(&t, &mut rng));
                    assert!(adjacent(a, c, None));
                }
                // extreme corners
                let a = HalfPlanePoint::new(s.x_min, s.h_min);
                let c = HalfPlanePoint::new(t.x_max, t.h_min);
                assert!(adjacent(a, c, None));
            }
        }
    }

    #[test]
    fn stated_probability_exceeds_exact() {
        let b = ladder_boxes(50).unwrap();
        let exact = b.next_nonempty_prob(0, 0.8);
        assert!((exact - 0.282).abs() < 1e-3, "{exact}");
        assert!((b.stated_next_nonempty_prob(0, 0.8) - 0.945).abs() < 1e-3);
        // exact mass of S_{k+1} = (1/pi) e^{(1-alpha) H_k - 1 - alpha}
        for k in 0..4 {
            let closed = ((1.0 - 0.8) * b.height(k) - 1.0 - 0.8).exp() / std::f64::consts::PI;
            assert!((b.upper_mass(k + 1, 0.8) - closed).abs() < 1e-12 * closed);
        }
    }

    #[test]
    fn lone_vertex_fails_at_first_box() {
        let b = ladder_boxes(3).unwrap();
        let g = build_adjacency(
            vec![HalfPlanePoint::new(0.0, b.h_base + 0.5)],
            Mode::Infinite,
            0.8,
            BuildLimits::default(),
        )
        .unwrap();
        let e = find_ladder_embedding(&g, 0, 3, 3).unwrap();
        assert_eq!(e.failed_box, Some(1));
        assert_eq!(e.spine, vec![0]);
        assert!(!e.success());
        let low =
            build_adjacency(vec![HalfPlanePoint::new(0.0, 1.0)], Mode::Infinite, 0.8, BuildLimits::default()).unwrap();
        assert!(find_ladder_embedding(&low, 0, 3, 3).is_err());
    }

    #[test]
    fn planted_ladder_is_found() {
        let d = 2;
        let b = ladder_boxes(d).unwrap();
        let x0 = 5.0;
        let mut pts = vec![HalfPlanePoint::new(x0, b.h_base + 0.1)];
        for k in 0..=3 {
            if k > 0 {
                pts.push(HalfPlanePoint::new(x0 + b.start(k) + 0.1, b.height(k) + 0.1));
            }
        }
        for k in 0..=3 {
            // leaves next to the spine vertex of column k
            let base = if k == 0 { x0 } else { x0 + b.start(k) + 0.1 };
            for i in 0..d {
                pts.push(HalfPlanePoint::new(base + 0.2 + 0.1 * i as f64, 0.5));
            }
        }
        let g = build_adjacency(pts, Mode::Infinite, 0.8, BuildLimits::default()).unwrap();
        let e = find_ladder_embedding(&g, 0, d, 3).unwrap();
        assert!(e.success(), "{e:?}");
        assert_eq!(e.spine, vec![0, 1, 2, 3]);
        assert!(e.leaf_counts.iter().all(|&c| c >= d));
    }
}
