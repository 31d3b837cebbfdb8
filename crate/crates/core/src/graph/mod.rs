//! Graphs over half-plane vertices, plus the combinatorial reference graphs
//! (stars and the half-line of stars) used by the star-survival arguments.
//!
//! Adjacency is stored in compressed sparse rows with sorted neighbor lists.
//! Geometric graphs keep their vertex coordinates and mode so that every
//! edge can be re-checked against the adjacency rule.

mod build;
pub mod io;
mod lazy;
mod reference;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{adjacent, check_alpha, GraphParams, HalfPlanePoint};

pub(crate) use build::BandIndex;
pub use build::{attach_vertices, build_adjacency, BuildLimits};
pub use lazy::LazyGraph;
pub use reference::{complete_graph, make_star, make_star_halfline, path_graph};

/// Infinite window (plain horizontal distance) or the wrapped `G_n`, whose
/// horizontal axis is a circle of circumference `pi * n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Mode {
    Infinite,
    Wrapped { n: f64 },
}

impl Mode {
    pub fn circumference(&self) -> Option<f64> {
        match *self {
            Mode::Infinite => None,
            Mode::Wrapped { n } => Some(std::f64::consts::PI * n),
        }
    }
}

/// Coordinates and model data of a geometric graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub points: Vec<HalfPlanePoint>,
    pub mode: Mode,
    pub alpha: f64,
}

impl Embedding {
    pub fn params(&self) -> GraphParams {
        GraphParams {
            alpha: self.alpha,
            n: match self.mode {
                Mode::Infinite => None,
                Mode::Wrapped { n } => Some(n),
            },
        }
    }
}

/// Set of vertex ids, kept ordered so iteration is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: usize) -> Self {
        Self(BTreeSet::from([v]))
    }

    pub fn all(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        self.0.remove(&v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.0.iter().any(|v| other.0.contains(v))
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Anything the contact engines can walk: a vertex count and neighbor lists.
/// `neighbors` takes `&mut self` so lazily materialized graphs can memoize.
pub trait Topology {
    fn vertex_count(&self) -> usize;
    fn neighbors(&mut self, v: usize) -> &[u32];

    fn degree(&mut self, v: usize) -> usize {
        self.neighbors(v).len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    embedding: Option<Embedding>,
    root: Option<usize>,
}

impl Graph {
    /// Builds a combinatorial graph from an undirected edge list. Duplicate
    /// edges are merged; self-loops are rejected.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::domain(format!("self-loop at {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::domain(format!("edge ({u}, {v}) outside 0..{vertex_count}")));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        Ok(Self::from_lists(lists, None))
    }

    pub(crate) fn from_lists(lists: Vec<Vec<u32>>, embedding: Option<Embedding>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for l in lists {
            targets.extend_from_slice(&l);
            offsets.push(targets.len());
        }
        Self { offsets, targets, embedding, root: None }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v as usize)))
            .filter(|(u, v)| u < v)
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn points(&self) -> Option<&[HalfPlanePoint]> {
        self.embedding.as_ref().map(|e| e.points.as_slice())
    }

    pub fn mode(&self) -> Option<Mode> {
        self.embedding.as_ref().map(|e| e.mode)
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.vertex_count() {
            return Err(Error::domain(format!("root {root} outside 0..{}", self.vertex_count())));
        }
        self.root = Some(root);
        Ok(self)
    }

    /// Vertices within `radius` hops of `v`, always including `v`.
    pub fn ball(&self, v: usize, radius: usize) -> VertexSet {
        self.distances_within(v, radius).into_iter().map(|(u, _)| u).collect()
    }

    /// BFS distances from `source`, truncated at `radius`.
    pub fn distances_within(&self, source: usize, radius: usize) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = vec![(source, 0)];
        let mut queue = VecDeque::from([(source, 0usize)]);
        seen[source] = true;
        while let Some((u, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, d + 1));
                    queue.push_back((w, d + 1));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            label[s] = id;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if label[w] == usize::MAX {
                        label[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Checks the structural invariants: symmetric sorted lists, no loops,
    /// and (for geometric graphs) that every listed edge obeys the rule.
    pub fn validate(&self) -> Result<()> {
        for u in 0..self.vertex_count() {
            let nb = self.neighbors(u);
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Degenerate(format!("neighbors of {u} not strictly sorted")));
            }
            for &v in nb {
                let v = v as usize;
                if v == u {
                    return Err(Error::Degenerate(format!("self-loop at {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Degenerate(format!("edge {u}->{v} not symmetric")));
                }
                if let Some(e) = &self.embedding {
                    if !adjacent(e.points[u], e.points[v], e.mode.circumference()) {
                        return Err(Error::Degenerate(format!("edge {u}-{v} violates rule")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Topology for &Graph {
    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    #[inline]
    fn neighbors(&mut self, v: usize) -> &[u32] {
        Graph::neighbors(self, v)
    }
}

pub(crate) fn check_points(points: &[HalfPlanePoint], mode: Mode, alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    let bounds = match mode {
        Mode::Infinite => None,
        Mode::Wrapped { n } => {
            let params = GraphParams::finite(alpha, n)?;
            Some((std::f64::consts::PI * n / 2.0, params.radius().unwrap_or(0.0)))
        }
    };
    for (i, p) in points.iter().enumerate() {
        if !p.x.is_finite() || !(p.h >= 0.0) || !p.h.is_finite() {
            return Err(Error::domain(format!("vertex {i} has invalid coordinates {p:?}")));
        }
        if let Some((half, radius)) = bounds {
            if p.x < -half || p.x > half || p.h > radius {
                return Err(Error::domain(format!("vertex {i} at {p:?} lies outside the wrapped window")));
            }
        }
    }
    Ok(())
}
