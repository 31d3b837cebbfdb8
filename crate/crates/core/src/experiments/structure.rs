use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_alpha, HalfPlanePoint};
use crate::graph::{build_adjacency, BuildLimits, Mode};
use crate::rng::{derive_seed, RngStream};
use crate::sampler::{sample_window, Window};
use crate::stats::{mean, poisson_upper_tail, proportion_se};
use crate::tessellation::{
    box_mean_mass, build_grid, check_box_cliques, classify_and_backbone, find_ladder_embedding,
    good_prob_bound_for_mass, good_threshold, ladder_boxes, BoxGrid,
};

use super::{sample_wrapped, Threads};

/// Good-box statistics of one grid row over many samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub row: usize,
    pub boxes: usize,
    pub mean_mass: f64,
    /// Closed-form lower bound on `P(good)`; only a valid bound when the
    /// mean mass exceeds the threshold `lambda^{-3}`.
    pub bound: f64,
    pub bound_valid: bool,
    /// Exact `P(Poisson(mean_mass) >= threshold)`.
    pub exact: f64,
    pub good_frequency: f64,
    pub se: f64,
    /// Rows with mean mass at least 1 are held to the bound.
    pub checked: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationReport {
    pub grid: BoxGrid,
    pub lambda: f64,
    pub threshold: usize,
    pub samples: u64,
    pub rows: Vec<RowReport>,
    pub clique_pairs_checked: u64,
    pub clique_violations: u64,
    pub connected_frequency: f64,
    pub top_row_all_good_frequency: f64,
    /// Mean fraction of tessellated vertices inside backbone boxes.
    pub backbone_size_fraction: f64,
    pub mean_backbone_boxes: f64,
}

/// Samples `G_n` repeatedly and gathers good-box, backbone and clique
/// statistics on the tessellation.
pub fn tessellation_campaign(
    n: f64,
    epsilon: f64,
    alpha: f64,
    lambda: f64,
    samples: u64,
    seed: u64,
    threads: Threads,
) -> Result<TessellationReport> {
    let grid = build_grid(n, epsilon, alpha)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be > 0"));
    }
    let point_seed = derive_seed(seed, 0);
    let per_sample = threads.map_init(
        samples as usize,
        || (),
        |_, t| {
            let mut rng = RngStream::new(point_seed, t as u64);
            let g = sample_wrapped(n, alpha, &mut rng)?;
            let (class, _) = classify_and_backbone(&grid, &g, lambda)?;
            let cliques = check_box_cliques(&grid, &class.members, &g);
            let good: Vec<usize> = (0..grid.row_count()).map(|j| class.good_count(j)).collect();
            let fraction = if class.tessellated_vertices == 0 {
                0.0
            } else {
                class.backbone_vertices as f64 / class.tessellated_vertices as f64
            };
            Ok((good, cliques, class.backbone_connected, class.top_row_all_good, fraction, class.backbone_boxes))
        },
    )?;
    let threshold = good_threshold(lambda);
    let rows = (0..grid.row_count())
        .map(|j| {
            let boxes = grid.boxes_in_row(j);
            let draws = samples * boxes as u64;
            let good: usize = per_sample.iter().map(|s| s.0[j]).sum();
            let freq = good as f64 / draws as f64;
            let mu = box_mean_mass(j, alpha);
            let bound = good_prob_bound_for_mass(mu, lambda);
            // binomial error of the bound-sized proportion, so an all-zero row
            // still gets a nonzero allowance
            let se = proportion_se(freq.max(bound).min(1.0), draws);
            let checked = mu >= 1.0;
            RowReport {
                row: j,
                boxes,
                mean_mass: mu,
                bound,
                bound_valid: mu > lambda.powi(-3),
                exact: poisson_upper_tail(mu, threshold as u64),
                good_frequency: freq,
                se,
                checked,
                pass: !checked || freq >= bound - 3.0 * se,
            }
        })
        .collect();
    let s = samples as f64;
    let fractions: Vec<f64> = per_sample.iter().map(|p| p.4).collect();
    Ok(TessellationReport {
        threshold,
        lambda,
        samples,
        rows,
        clique_pairs_checked: per_sample.iter().map(|p| p.1.pairs_checked).sum(),
        clique_violations: per_sample.iter().map(|p| p.1.violations).sum(),
        connected_frequency: per_sample.iter().filter(|p| p.2).count() as f64 / s,
        top_row_all_good_frequency: per_sample.iter().filter(|p| p.3).count() as f64 / s,
        backbone_size_fraction: mean(&fractions),
        mean_backbone_boxes: per_sample.iter().map(|p| p.5 as f64).sum::<f64>() / s,
        grid,
    })
}

/// Per-column statistics of the half-line-of-stars embedding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub k: usize,
    pub samples: u64,
    /// Empirical `P(S_{k+1} nonempty)`.
    pub nonempty_frequency: f64,
    pub se: f64,
    /// `1 - exp(-mu(S_{k+1}))` with the exact intensity.
    pub exact_prob: f64,
    /// The closed form `1 - exp(-(1/alpha) e^{(1-alpha) H_k - 1})`.
    pub stated_prob: f64,
    pub matches_exact: bool,
    pub matches_stated: bool,
    /// Samples in which `S_k` holds a spine vertex.
    pub spine_present: u64,
    /// Fraction of those whose spine vertex has at least `d` neighbors in `S'_k`.
    pub leaf_success: f64,
    /// Fraction of samples in which the greedy embedding succeeds through column `k`.
    pub embedding_success: f64,
}

/// Samples the window to the right of a vertex above `2 log(2d)` and
/// records which ladder columns can be filled.
pub fn ladder_campaign(
    d: usize,
    alpha: f64,
    max_k: usize,
    samples: u64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<LadderRow>> {
    check_alpha(alpha)?;
    let boxes = ladder_boxes(d)?;
    if samples == 0 {
        return Err(Error::domain("samples must be > 0"));
    }
    let columns = max_k + 2;
    let window = Window::new(0.0, boxes.start(columns), 0.0, f64::INFINITY)?;
    let point_seed = derive_seed(seed, 0);
    let per_sample = threads.map_init(
        samples as usize,
        || (),
        |_, t| {
            let mut rng = RngStream::new(point_seed, t as u64);
            let mut points = sample_window(&window, alpha, &mut rng)?;
            let v = points.len();
            points.push(HalfPlanePoint::new(0.0, boxes.h_base + rng.exp(alpha)));
            let g = build_adjacency(points, Mode::Infinite, alpha, BuildLimits::default())?;
            let pts = g.points().expect("geometric graph");
            let mut nonempty = vec![false; columns];
            let mut leaves_ok = vec![None; columns];
            for k in 0..columns {
                let spine = if k == 0 {
                    Some(v)
                } else {
                    (0..v)
                        .filter(|&u| boxes.in_upper(k, pts[u]))
                        .min_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(a.cmp(&b)))
                };
                nonempty[k] = spine.is_some();
                leaves_ok[k] =
                    spine.map(|s| g.neighbors(s).iter().filter(|&&w| boxes.in_lower(k, pts[w as usize])).count() >= d);
            }
            let embedding = find_ladder_embedding(&g, v, d, max_k)?;
            let reached = match (embedding.failed_box, embedding.failed_leaves) {
                (None, None) => max_k + 1,
                (a, b) => a.unwrap_or(usize::MAX).min(b.unwrap_or(usize::MAX)),
            };
            Ok((nonempty, leaves_ok, reached))
        },
    )?;
    let s = samples as f64;
    Ok((0..=max_k)
        .map(|k| {
            let hits = per_sample.iter().filter(|p| p.0[k + 1]).count() as u64;
            let freq = hits as f64 / s;
            let exact = boxes.next_nonempty_prob(k, alpha);
            let stated = boxes.stated_next_nonempty_prob(k, alpha);
            let band = |p: f64| (freq - p).abs() <= 3.0 * proportion_se(p, samples);
            let present: Vec<bool> = per_sample.iter().filter_map(|p| p.1[k]).collect();
            LadderRow {
                k,
                samples,
                nonempty_frequency: freq,
                se: proportion_se(freq, samples),
                exact_prob: exact,
                stated_prob: stated,
                matches_exact: band(exact),
                matches_stated: band(stated),
                spine_present: present.len() as u64,
                leaf_success: if present.is_empty() {
                    0.0
                } else {
                    present.iter().filter(|&&b| b).count() as f64 / present.len() as f64
                },
                embedding_success: per_sample.iter().filter(|p| p.2 > k).count() as f64 / s,
            }
        })
        .collect())
}
