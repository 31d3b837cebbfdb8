use crate::error::{Error, Result};
use crate::geometry::{adjacent, HalfPlanePoint};

use super::{check_points, Embedding, Graph, Mode};

/// Resource limits for adjacency construction. Hubs near the top of `G_n`
/// have very large degree, so the half-edge budget is enforced while
/// building rather than after.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuildLimits {
    pub max_vertices: usize,
    pub max_half_edges: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        Self { max_vertices: 5_000_000, max_half_edges: 100_000_000 }
    }
}

struct Band {
    top: f64,
    xs: Vec<f64>,
    ids: Vec<u32>,
}

/// Vertices split into unit height bands, each sorted by `x`. A query
/// scans, per band, the `x`-range reachable from the band's top height and
/// filters candidates with the exact rule; the band top overestimates the
/// reach by at most a factor `e^{1/2}`.
pub(crate) struct BandIndex {
    bands: Vec<Band>,
    circumference: Option<f64>,
}

impl BandIndex {
    pub(crate) fn new(points: &[HalfPlanePoint], circumference: Option<f64>) -> Self {
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let band_of = |p: &HalfPlanePoint| p.h.floor() as u64;
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&points[a as usize], &points[b as usize]);
            band_of(pa).cmp(&band_of(pb)).then(pa.x.total_cmp(&pb.x)).then(a.cmp(&b))
        });
        let mut bands: Vec<Band> = Vec::new();
        let mut current = None;
        for id in order {
            let p = points[id as usize];
            let b = band_of(&p);
            if current != Some(b) {
                current = Some(b);
                bands.push(Band { top: p.h, xs: Vec::new(), ids: Vec::new() });
            }
            let band = bands.last_mut().expect("band pushed above");
            band.top = band.top.max(p.h);
            band.xs.push(p.x);
            band.ids.push(id);
        }
        Self { bands, circumference }
    }

    /// Calls `f` with every indexed vertex adjacent to `p` (including a vertex
    /// located at `p` itself, which callers filter by id).
    pub(crate) fn for_each_adjacent(&self, points: &[HalfPlanePoint], p: HalfPlanePoint, mut f: impl FnMut(u32)) {
        for band in &self.bands {
            let reach = ((p.h + band.top) / 2.0).exp();
            let mut scan = |lo: f64, hi: f64| {
                let start = band.xs.partition_point(|&x| x < lo);
                let end = band.xs.partition_point(|&x| x <= hi);
                for k in start..end.max(start) {
                    let id = band.ids[k];
                    if adjacent(p, points[id as usize], self.circumference) {
                        f(id);
                    }
                }
            };
            match self.circumference {
                None => scan(p.x - reach, p.x + reach),
                Some(c) if 2.0 * reach >= c => scan(f64::NEG_INFINITY, f64::INFINITY),
                Some(c) => {
                    let (lo, hi) = (p.x - reach, p.x + reach);
                    scan(lo, hi);
                    if lo < -c / 2.0 {
                        scan(lo + c, f64::INFINITY);
                    }
                    if hi > c / 2.0 {
                        scan(f64::NEG_INFINITY, hi - c);
                    }
                }
            }
        }
    }
}

/// Exact adjacency under the inclusive rule, built with the band index.
pub fn build_adjacency(points: Vec<HalfPlanePoint>, mode: Mode, alpha: f64, limits: BuildLimits) -> Result<Graph> {
    check_points(&points, mode, alpha)?;
    if points.len() > limits.max_vertices {
        return Err(Error::capacity(format!("{} vertices exceed the budget of {}", points.len(), limits.max_vertices)));
    }
    let index = BandIndex::new(&points, mode.circumference());
    let mut lists = Vec::with_capacity(points.len());
    let mut total = 0usize;
    for (i, &p) in points.iter().enumerate() {
        let mut list = Vec::new();
        index.for_each_adjacent(&points, p, |j| {
            if j as usize != i {
                list.push(j);
            }
        });
        list.sort_unstable();
        total += list.len();
        if total > limits.max_half_edges {
            return Err(Error::capacity(format!(
                "adjacency exceeds the budget of {} half-edges",
                limits.max_half_edges
            )));
        }
        lists.push(list);
    }
    Ok(Graph::from_lists(lists, Some(Embedding { points, mode, alpha })))
}

/// Appends `extra` vertices to a geometric graph, computing new-old and
/// new-new adjacencies. Existing ids are unchanged; the root is kept.
pub fn attach_vertices(g: &Graph, extra: &[HalfPlanePoint]) -> Result<Graph> {
    let emb = g.embedding().ok_or_else(|| Error::domain("attach_vertices needs a geometric graph"))?;
    check_points(extra, emb.mode, emb.alpha)?;
    let circ = emb.mode.circumference();
    let old = g.vertex_count();
    let mut lists: Vec<Vec<u32>> = (0..old).map(|v| g.neighbors(v).to_vec()).collect();
    let mut touched = vec![false; old];
    let index = BandIndex::new(&emb.points, circ);
    for (j, &p) in extra.iter().enumerate() {
        let id = (old + j) as u32;
        let mut list = Vec::new();
        index.for_each_adjacent(&emb.points, p, |u| {
            list.push(u);
            lists[u as usize].push(id);
            touched[u as usize] = true;
        });
        for (k, &q) in extra.iter().enumerate() {
            if k != j && adjacent(p, q, circ) {
                list.push((old + k) as u32);
            }
        }
        list.sort_unstable();
        lists.push(list);
    }
    for (v, t) in touched.into_iter().enumerate() {
        if t {
            lists[v].sort_unstable();
        }
    }
    let mut points = emb.points.clone();
    points.extend_from_slice(extra);
    let mut out = Graph::from_lists(lists, Some(Embedding { points, mode: emb.mode, alpha: emb.alpha }));
    out.root = g.root();
    Ok(out)
}
