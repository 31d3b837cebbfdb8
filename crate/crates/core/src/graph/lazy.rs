use crate::error::Result;
use crate::geometry::HalfPlanePoint;

use super::{check_points, BandIndex, Mode, Topology};

/// A geometric graph whose neighbor lists are computed on first access.
///
/// Survival experiments touch only the part of a large window that the
/// infection reaches, so materializing every list up front is wasted work.
/// Lists are exact and identical to those of [`super::build_adjacency`].
pub struct LazyGraph {
    points: Vec<HalfPlanePoint>,
    index: BandIndex,
    cache: Vec<Option<Box<[u32]>>>,
    materialized_half_edges: usize,
}

impl LazyGraph {
    pub fn new(points: Vec<HalfPlanePoint>, mode: Mode, alpha: f64) -> Result<Self> {
        check_points(&points, mode, alpha)?;
        let index = BandIndex::new(&points, mode.circumference());
        let cache = vec![None; points.len()];
        Ok(Self { points, index, cache, materialized_half_edges: 0 })
    }

    pub fn points(&self) -> &[HalfPlanePoint] {
        &self.points
    }

    /// Number of half-edges computed so far.
    pub fn materialized_half_edges(&self) -> usize {
        self.materialized_half_edges
    }
}

impl Topology for LazyGraph {
    fn vertex_count(&self) -> usize {
        self.points.len()
    }

    fn neighbors(&mut self, v: usize) -> &[u32] {
        if self.cache[v].is_none() {
            let mut list = Vec::new();
            self.index.for_each_adjacent(&self.points, self.points[v], |j| {
                if j as usize != v {
                    list.push(j);
                }
            });
            list.sort_unstable();
            self.materialized_half_edges += list.len();
            self.cache[v] = Some(list.into_boxed_slice());
        }
        self.cache[v].as_deref().expect("filled above")
    }
}
