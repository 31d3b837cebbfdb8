//! Box tessellation of `G_n` and the ladder boxes used to embed a half-line
//! of stars.
//!
//! Row `j` of the grid sits at heights `[jL, (j+1)L)` with
//! `L = ((alpha + 1) / (2 alpha)) log 2`. Row 0 boxes have width 1/2 and
//! row `j >= 1` boxes width `2^{j-1}`; every box lies under exactly one
//! parent `B_{j+1, floor(k/2)}`. Boxes are half-open in both axes and the
//! grid starts at `x = 0`. Vertices in one box form a clique, as do
//! vertices in a box and its parent, because `L > log 2`.

mod ladder;

use std::collections::VecDeque;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_alpha, HalfPlanePoint};
use crate::graph::{Graph, Mode};

pub use ladder::{find_ladder_embedding, ladder_boxes, LadderBoxes, LadderEmbedding};

/// Height of one row of boxes.
pub fn row_height(alpha: f64) -> f64 {
    (alpha + 1.0) / (2.0 * alpha) * LN_2
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub row: usize,
    pub index: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl GridBox {
    pub fn contains(&self, p: HalfPlanePoint) -> bool {
        p.x >= self.x_min && p.x < self.x_max && p.h >= self.h_min && p.h < self.h_max
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    pub n: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub l: f64,
    /// Index of the top row, `floor(epsilon log n)`.
    pub top: usize,
    /// `floor(n^{1 - epsilon log 2})`, the number of top-row boxes.
    pub k0: usize,
}

pub fn build_grid(n: f64, epsilon: f64, alpha: f64) -> Result<BoxGrid> {
    check_alpha(alpha)?;
    if !(epsilon > 0.0 && epsilon < 1.0 / LN_2) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/log 2), got {epsilon}")));
    }
    if !(n > 1.0) || !n.is_finite() {
        return Err(Error::domain(format!("n must be finite and > 1, got {n}")));
    }
    let k0 = n.powf(1.0 - epsilon * LN_2).floor() as usize;
    if k0 == 0 {
        return Err(Error::domain(format!("n = {n} is too small: no top-row boxes")));
    }
    let top = (epsilon * n.ln()).floor() as usize;
    let l = row_height(alpha);
    if (top + 1) as f64 * l > 2.0 * n.ln() {
        return Err(Error::domain("grid rows exceed the height 2 log n of G_n"));
    }
    Ok(BoxGrid { n, epsilon, alpha, l, top, k0 })
}

impl BoxGrid {
    pub fn row_count(&self) -> usize {
        self.top + 1
    }

    /// Boxes in row `j`: `k0 2^{top - j}`.
    pub fn boxes_in_row(&self, j: usize) -> usize {
        self.k0 << (self.top - j)
    }

    pub fn total_boxes(&self) -> usize {
        (0..=self.top).map(|j| self.boxes_in_row(j)).sum()
    }

    pub fn box_width(&self, j: usize) -> f64 {
        if j == 0 {
            0.5
        } else {
            2f64.powi(j as i32 - 1)
        }
    }

    pub fn get(&self, j: usize, k: usize) -> GridBox {
        let w = self.box_width(j);
        GridBox {
            row: j,
            index: k,
            x_min: w * k as f64,
            x_max: w * (k + 1) as f64,
            h_min: j as f64 * self.l,
            h_max: (j + 1) as f64 * self.l,
        }
    }

    pub fn parent(&self, j: usize, k: usize) -> Option<(usize, usize)> {
        (j < self.top).then_some((j + 1, k / 2))
    }

    pub fn children(&self, j: usize, k: usize) -> Option<[(usize, usize); 2]> {
        (j > 0).then(|| [(j - 1, 2 * k), (j - 1, 2 * k + 1)])
    }

    /// The box containing `p`, if any.
    pub fn locate(&self, p: HalfPlanePoint) -> Option<(usize, usize)> {
        if p.x < 0.0 || p.h < 0.0 {
            return None;
        }
        let j = (p.h / self.l).floor() as usize;
        if j > self.top {
            return None;
        }
        let k = (p.x / self.box_width(j)).floor() as usize;
        (k < self.boxes_in_row(j)).then_some((j, k))
    }

    fn flat(&self, j: usize, k: usize) -> usize {
        (0..j).map(|r| self.boxes_in_row(r)).sum::<usize>() + k
    }
}

/// Mean number of vertices in a row-`j` box, `(2^{j-1}/pi)(e^{-alpha j L} - e^{-alpha (j+1) L})`.
pub fn box_mean_mass(j: usize, alpha: f64) -> f64 {
    let l = row_height(alpha);
    let width = if j == 0 { 0.5 } else { 2f64.powi(j as i32 - 1) };
    width / PI * ((-alpha * j as f64 * l).exp() - (-alpha * (j + 1) as f64 * l).exp())
}

/// Smallest integer count making a box good, `ceil(lambda^{-3})`.
pub fn good_threshold(lambda: f64) -> usize {
    lambda.powi(-3).ceil() as usize
}

/// `max(0, 1 - (e lambda^3 mu)^{lambda^{-3}} e^{-mu})`.
///
/// This is a valid lower bound on `P(Poisson(mu) >= lambda^{-3})` only when
/// `mu > lambda^{-3}`; below that the expression can exceed the true tail.
pub fn good_prob_bound_for_mass(mu: f64, lambda: f64) -> f64 {
    let m = lambda.powi(-3);
    let log_term = m * (std::f64::consts::E * mu / m).ln() - mu;
    (1.0 - log_term.exp()).max(0.0)
}

pub fn good_prob_lower_bound(j: usize, lambda: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    Ok(good_prob_bound_for_mass(box_mean_mass(j, alpha), lambda))
}

/// Good boxes and the backbone obtained by keeping the components of the
/// good-box graph that reach the top row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub threshold: usize,
    /// Vertex ids per box, `members[j][k]`, ascending.
    pub members: Vec<Vec<Vec<usize>>>,
    pub good: Vec<Vec<bool>>,
    pub retained: Vec<Vec<bool>>,
    pub top_row_all_good: bool,
    /// Whether the retained box graph is nonempty and connected.
    pub backbone_connected: bool,
    pub backbone_boxes: usize,
    /// Vertices inside retained boxes.
    pub backbone_vertices: usize,
    /// Vertices inside any box of the grid.
    pub tessellated_vertices: usize,
}

impl Classification {
    pub fn good_count(&self, j: usize) -> usize {
        self.good[j].iter().filter(|&&g| g).count()
    }
}

/// The vertex-level subgraph built on the backbone: one hub per retained
/// box joined to the other vertices of its box, and hubs of adjacent
/// retained boxes joined to each other.
#[derive(Clone, Debug, PartialEq)]
pub struct StarOfStars {
    pub graph: Graph,
    /// Vertex id in the source graph of each vertex of `graph`.
    pub original_ids: Vec<usize>,
    /// Hub vertices, as ids of `graph`.
    pub hubs: Vec<usize>,
}

/// Box-graph neighbors: parent, children, and same-row neighbors on the top row.
fn box_neighbors(grid: &BoxGrid, j: usize, k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(4);
    if let Some(p) = grid.parent(j, k) {
        out.push(p);
    }
    if let Some(ch) = grid.children(j, k) {
        out.extend(ch);
    }
    if j == grid.top {
        if k > 0 {
            out.push((j, k - 1));
        }
        if k + 1 < grid.boxes_in_row(j) {
            out.push((j, k + 1));
        }
    }
    out
}

pub fn assign_boxes(grid: &BoxGrid, points: &[HalfPlanePoint]) -> Vec<Vec<Vec<usize>>> {
    let mut members: Vec<Vec<Vec<usize>>> = (0..=grid.top).map(|j| vec![Vec::new(); grid.boxes_in_row(j)]).collect();
    for (id, &p) in points.iter().enumerate() {
        if let Some((j, k)) = grid.locate(p) {
            members[j][k].push(id);
        }
    }
    members
}

pub fn classify_and_backbone(grid: &BoxGrid, g: &Graph, lambda: f64) -> Result<(Classification, StarOfStars)> {
    match g.mode() {
        Some(Mode::Wrapped { n }) if (n - grid.n).abs() <= 1e-9 * grid.n => {}
        _ => return Err(Error::domain("tessellation needs a wrapped graph with the grid's n")),
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let points = g.points().expect("wrapped graphs carry points");
    let threshold = good_threshold(lambda);
    let members = assign_boxes(grid, points);
    let good: Vec<Vec<bool>> = members.iter().map(|row| row.iter().map(|m| m.len() >= threshold).collect()).collect();

    // components of the good-box graph, seeded from the top row
    let mut retained: Vec<Vec<bool>> = good.iter().map(|row| vec![false; row.len()]).collect();
    let mut components = 0;
    for k in 0..grid.boxes_in_row(grid.top) {
        if !good[grid.top][k] || retained[grid.top][k] {
            continue;
        }
        components += 1;
        retained[grid.top][k] = true;
        let mut queue = VecDeque::from([(grid.top, k)]);
        while let Some((j, i)) = queue.pop_front() {
            for (a, b) in box_neighbors(grid, j, i) {
                if good[a][b] && !retained[a][b] {
                    retained[a][b] = true;
                    queue.push_back((a, b));
                }
            }
        }
    }
    let top_row_all_good = good[grid.top].iter().all(|&x| x);
    let mut backbone_boxes = 0;
    let mut backbone_vertices = 0;
    for j in 0..=grid.top {
        for k in 0..grid.boxes_in_row(j) {
            if retained[j][k] {
                backbone_boxes += 1;
                backbone_vertices += members[j][k].len();
            }
        }
    }
    let tessellated_vertices = members.iter().flatten().map(Vec::len).sum();

    // star-of-stars subgraph
    let mut new_id = vec![usize::MAX; points.len()];
    let mut original_ids = Vec::new();
    let mut hub_of_box = vec![usize::MAX; grid.total_boxes()];
    let mut edges = Vec::new();
    for j in 0..=grid.top {
        for k in 0..grid.boxes_in_row(j) {
            if !retained[j][k] {
                continue;
            }
            let box_members = &members[j][k];
            let hub = original_ids.len();
            hub_of_box[grid.flat(j, k)] = hub;
            for &v in box_members {
                new_id[v] = original_ids.len();
                original_ids.push(v);
                if new_id[v] != hub {
                    edges.push((hub, new_id[v]));
                }
            }
        }
    }
    let mut hubs = Vec::new();
    for j in 0..=grid.top {
        for k in 0..grid.boxes_in_row(j) {
            if !retained[j][k] {
                continue;
            }
            let hub = hub_of_box[grid.flat(j, k)];
            hubs.push(hub);
            for (a, b) in box_neighbors(grid, j, k) {
                if retained[a][b] && (a, b) > (j, k) {
                    edges.push((hub, hub_of_box[grid.flat(a, b)]));
                }
            }
        }
    }
    let graph = Graph::from_edges(original_ids.len(), &edges)?;

    let classification = Classification {
        threshold,
        members,
        good,
        retained,
        top_row_all_good,
        backbone_connected: components == 1,
        backbone_boxes,
        backbone_vertices,
        tessellated_vertices,
    };
    Ok((classification, StarOfStars { graph, original_ids, hubs }))
}

/// Outcome of the exhaustive geometric check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCheck {
    pub pairs_checked: u64,
    pub violations: u64,
}

/// Checks that every pair of vertices inside one box, inside a box and its
/// parent, or inside two neighboring top-row boxes is an edge of `g`.
pub fn check_box_cliques(grid: &BoxGrid, members: &[Vec<Vec<usize>>], g: &Graph) -> CliqueCheck {
    let mut out = CliqueCheck::default();
    let mut check = |a: &[usize], b: &[usize], same: bool| {
        for (i, &u) in a.iter().enumerate() {
            let rest = if same { &b[i + 1..] } else { b };
            for &v in rest {
                out.pairs_checked += 1;
                if !g.has_edge(u, v) {
                    out.violations += 1;
                }
            }
        }
    };
    for j in 0..=grid.top {
        for k in 0..grid.boxes_in_row(j) {
            let m = &members[j][k];
            check(m, m, true);
            if let Some((pj, pk)) = grid.parent(j, k) {
                check(m, &members[pj][pk], false);
            }
            if j == grid.top && k + 1 < grid.boxes_in_row(j) {
                check(m, &members[j][k + 1], false);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_adjacency, BuildLimits};
    use crate::rng::RngStream;
    use crate::sampler::{sample_window, Window};
    use crate::stats::poisson_upper_tail;

    fn wrapped_points(n: f64, alpha: f64, seed: u64) -> Vec<HalfPlanePoint> {
        sample_window(&Window::wrapped(n).unwrap(), alpha, &mut RngStream::new(seed, 0)).unwrap()
    }

    #[test]
    fn grid_geometry() {
        let grid = build_grid(1e4, 1.0, 0.75).unwrap();
        let b = grid.get(0, 0);
        assert_eq!((b.x_min, b.x_max, b.h_min), (0.0, 0.5, 0.0));
        assert!((grid.l - 0.808672).abs() < 1e-6);
        assert!(LN_2 < grid.l && grid.l < LN_2 / 0.75);
        assert_eq!(grid.children(2, 0), Some([(1, 0), (1, 1)]));
        assert_eq!(grid.parent(1, 1), Some((2, 0)));
        assert_eq!(grid.parent(grid.top, 0), None);
        assert_eq!((grid.top, grid.k0), (9, 16));
        let widths: Vec<f64> = (0..=grid.top).map(|j| grid.boxes_in_row(j) as f64 * grid.box_width(j)).collect();
        assert!(widths.iter().all(|&w| w == widths[0]));
        for j in 0..grid.top {
            for k in 0..grid.boxes_in_row(j) {
                let (pj, pk) = grid.parent(j, k).unwrap();
                let (c, p) = (grid.get(j, k), grid.get(pj, pk));
                assert!(p.x_min <= c.x_min && c.x_max <= p.x_max);
                assert!(grid.children(pj, pk).unwrap().contains(&(j, k)));
            }
        }
        assert!(build_grid(1e4, 1.5, 0.75).is_err());
        assert!(build_grid(2.0, 0.1, 0.75).is_ok());
    }

    #[test]
    fn mean_mass_values() {
        assert!((box_mean_mass(2, 0.75) - 0.08606).abs() < 1e-5);
        for alpha in [0.6, 0.75, 0.9] {
            let ratio = 2f64.powf((1.0 - alpha) / 2.0);
            for j in 1..12 {
                let r = box_mean_mass(j + 1, alpha) / box_mean_mass(j, alpha);
                assert!((r - ratio).abs() < 1e-12 && r > 1.0);
            }
            let l = row_height(alpha);
            let expected = (1.0 - (-alpha * l).exp()) / (2.0 * PI);
            assert!((box_mean_mass(0, alpha) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn bound_values() {
        let b = good_prob_bound_for_mass(10.0, 0.5);
        assert!((b - 0.193).abs() < 1e-3);
        assert!(b <= poisson_upper_tail(10.0, 8));
        assert!(good_prob_bound_for_mass(1e4, 0.5) > 1.0 - 1e-12);
        // below the threshold mass the expression is not a bound
        assert_eq!(good_prob_bound_for_mass(2.0, 0.2), 1.0);
        assert!(poisson_upper_tail(2.0, 125) < 1e-100);
        assert!(good_prob_lower_bound(0, 1.5, 0.75).is_err());
    }

    #[test]
    fn bound_holds_above_threshold_mass() {
        for lambda in [0.3f64, 0.5, 0.8] {
            let m = lambda.powi(-3);
            for factor in [1.01, 1.5, 3.0, 10.0] {
                let mu = m * factor;
                let truth = poisson_upper_tail(mu, good_threshold(lambda) as u64);
                assert!(good_prob_bound_for_mass(mu, lambda) <= truth + 1e-12);
            }
        }
    }

    #[test]
    fn box_cliques_on_samples() {
        for seed in 0..5 {
            let n = 2000.0;
            let grid = build_grid(n, 1.2, 0.75).unwrap();
            let g = build_adjacency(wrapped_points(n, 0.75, seed), Mode::Wrapped { n }, 0.75, BuildLimits::default())
                .unwrap();
            let members = assign_boxes(&grid, g.points().unwrap());
            let c = check_box_cliques(&grid, &members, &g);
            assert!(c.pairs_checked > 0);
            assert_eq!(c.violations, 0);
        }
    }

    fn dense_grid_graph(top_bad: Option<usize>) -> (BoxGrid, Graph) {
        // a small grid with every box filled by one point per unit of the
        // threshold, optionally emptying one top-row box
        let n = 20.0;
        let grid = build_grid(n, 0.5, 0.75).unwrap();
        let mut pts = Vec::new();
        for j in 0..=grid.top {
            for k in 0..grid.boxes_in_row(j) {
                if j == grid.top && Some(k) == top_bad {
                    continue;
                }
                let b = grid.get(j, k);
                for i in 0..3 {
                    let f = (i as f64 + 0.5) / 3.0;
                    pts.push(HalfPlanePoint::new(b.x_min + f * (b.x_max - b.x_min), b.h_min + f * grid.l));
                }
            }
        }
        let g = build_adjacency(pts, Mode::Wrapped { n }, 0.75, BuildLimits::default()).unwrap();
        (grid, g)
    }

    #[test]
    fn backbone_all_good() {
        let (grid, g) = dense_grid_graph(None);
        let lambda = 0.7; // threshold 3
        let (cls, stars) = classify_and_backbone(&grid, &g, lambda).unwrap();
        assert_eq!(cls.threshold, 3);
        assert!(cls.top_row_all_good && cls.backbone_connected);
        assert_eq!(cls.backbone_boxes, grid.total_boxes());
        assert_eq!(cls.backbone_vertices, cls.tessellated_vertices);
        assert_eq!(stars.graph.vertex_count(), cls.backbone_vertices);
        assert_eq!(stars.graph.components().len(), 1);
        assert_eq!(stars.hubs.len(), grid.total_boxes());
        for &h in &stars.hubs {
            let orig = stars.original_ids[h];
            for &w in stars.graph.neighbors(h) {
                assert!(g.has_edge(orig, stars.original_ids[w as usize]));
            }
        }
    }

    #[test]
    fn backbone_with_bad_top_box() {
        let (grid, g) = dense_grid_graph(Some(1));
        assert!(grid.boxes_in_row(grid.top) >= 3);
        let (cls, stars) = classify_and_backbone(&grid, &g, 0.7).unwrap();
        assert!(!cls.top_row_all_good);
        assert!(!cls.backbone_connected);
        assert!(stars.graph.components().len() >= 2);
        // the subtree under the empty top box is cut off entirely
        assert!(!cls.retained[grid.top - 1][2] && !cls.retained[grid.top - 1][3]);
    }

    #[test]
    fn rejects_mismatched_graph() {
        let grid = build_grid(100.0, 0.5, 0.75).unwrap();
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(classify_and_backbone(&grid, &g, 0.5).is_err());
    }
}
