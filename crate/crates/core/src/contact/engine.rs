use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Topology, VertexSet};
use crate::rng::RngStream;

use super::{RunResult, SimParams, StopRule, SurvivalReason, Verdict};

const NONE: u32 = u32::MAX;

/// Fenwick tree over integer vertex weights (the degrees of infected
/// vertices). Integer weights keep the total exact over long runs.
struct Fenwick {
    tree: Vec<u64>,
    total: u64,
    top_bit: usize,
}

impl Fenwick {
    fn reset(&mut self, n: usize) {
        self.tree.clear();
        self.tree.resize(n + 1, 0);
        self.total = 0;
        self.top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
    }

    #[inline]
    fn add(&mut self, idx: usize, delta: i64) {
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add(delta as u64);
            i += i & i.wrapping_neg();
        }
        self.total = self.total.wrapping_add(delta as u64);
    }

    /// For `r < total`, returns the index `v` with
    /// `prefix(v) <= r < prefix(v + 1)` and the offset `r - prefix(v)`.
    #[inline]
    fn find(&self, mut r: u64) -> (usize, u64) {
        let mut pos = 0usize;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= r {
                pos = next;
                r -= self.tree[next];
            }
            step >>= 1;
        }
        (pos, r)
    }
}

/// Event-driven contact-process sampler.
///
/// Each infected vertex carries rate `1 + lambda * deg`. With `I` infected
/// vertices and `S` the sum of their degrees, the next event comes after an
/// `Exp(|I| + lambda S)` time; it is a recovery of a uniform infected
/// vertex with probability `|I| / (|I| + lambda S)`, otherwise a
/// transmission along a uniform half-edge out of the infected set. A
/// transmission into an infected vertex changes nothing. Half-edges are
/// drawn with one integer draw through the Fenwick tree, which yields both
/// the source vertex and its neighbor slot.
///
/// Buffers are reused across runs, so one engine per worker thread serves
/// any number of trials. Exactly simultaneous events cannot be produced:
/// events are generated one at a time in time order.
pub struct Engine {
    infected: Vec<u32>,
    position: Vec<u32>,
    ever: Vec<bool>,
    distance: Vec<u32>,
    degrees: Fenwick,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

struct Progress {
    ever_count: usize,
    max_distance: usize,
}

impl Engine {
    pub fn new() -> Self {
        Self {
            infected: Vec::new(),
            position: Vec::new(),
            ever: Vec::new(),
            distance: Vec::new(),
            degrees: Fenwick { tree: Vec::new(), total: 0, top_bit: 0 },
        }
    }

    /// Runs one trial. `trajectory_step` samples `(t, |infected|)` at
    /// `0, step, 2 step, ...` up to the stopping time.
    pub fn run<T: Topology>(
        &mut self,
        topo: &mut T,
        initial: &VertexSet,
        params: SimParams,
        stop: &StopRule,
        trajectory_step: Option<f64>,
        rng: &mut RngStream,
    ) -> Result<RunResult> {
        stop.validate()?;
        let n = topo.vertex_count();
        if initial.is_empty() {
            return Err(Error::domain("initial infected set is empty"));
        }
        if initial.max().is_some_and(|v| v >= n) {
            return Err(Error::domain(format!("initial set has a vertex outside 0..{n}")));
        }
        if n >= NONE as usize {
            return Err(Error::capacity("graph too large for the engine"));
        }
        self.infected.clear();
        self.position.clear();
        self.position.resize(n, NONE);
        self.ever.clear();
        self.ever.resize(n, false);
        self.degrees.reset(n);

        let radius = stop.escape_radius;
        if let Some(r) = radius {
            let reference = stop.reference.unwrap_or_else(|| initial.iter().next().unwrap_or(0));
            if reference >= n {
                return Err(Error::domain(format!("reference vertex {reference} outside graph")));
            }
            self.fill_distances(topo, reference, r);
        }

        let lambda = params.lambda;
        let mut progress = Progress { ever_count: 0, max_distance: 0 };
        let mut trajectory = Vec::new();
        let mut next_sample = 0.0;
        let mut time = 0.0;
        let mut events = 0u64;

        let mut stopped = None;
        for v in initial.iter() {
            if let Some(reason) = self.infect(topo, v, stop, radius, &mut progress) {
                stopped.get_or_insert(reason);
            }
        }

        let verdict = loop {
            if let Some(reason) = stopped {
                break Verdict::Survived { reason };
            }
            let count = self.infected.len();
            if count == 0 {
                break Verdict::Extinct { time };
            }
            let half_edges = self.degrees.total;
            let rate = count as f64 + lambda * half_edges as f64;
            let t_next = time + rng.exp(rate);
            if let Some(step) = trajectory_step {
                while next_sample <= t_next.min(stop.t_max) {
                    trajectory.push((next_sample, count));
                    next_sample += step;
                }
            }
            if t_next > stop.t_max {
                time = stop.t_max;
                break Verdict::Survived { reason: SurvivalReason::Horizon };
            }
            time = t_next;
            events += 1;
            let u = rng.open01() * rate;
            if u < count as f64 || half_edges == 0 {
                let idx = (u as usize).min(count - 1);
                let v = self.infected[idx] as usize;
                self.recover(topo, v);
            } else {
                let (v, slot) = self.degrees.find(rng.below(half_edges));
                let w = topo.neighbors(v)[slot as usize] as usize;
                if self.position[w] == NONE {
                    stopped = self.infect(topo, w, stop, radius, &mut progress);
                }
            }
        };

        let final_infected = self.infected.len();
        let extinction_time = match verdict {
            Verdict::Extinct { time } => Some(time),
            Verdict::Survived { .. } => None,
        };
        Ok(RunResult {
            verdict,
            extinction_time,
            trajectory,
            max_graph_distance_reached: radius.map(|_| progress.max_distance),
            ever_infected: progress.ever_count,
            final_infected,
            end_time: time,
            events,
        })
    }

    fn fill_distances<T: Topology>(&mut self, topo: &mut T, source: usize, radius: usize) {
        let n = topo.vertex_count();
        self.distance.clear();
        self.distance.resize(n, NONE);
        self.distance[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = self.distance[u];
            if d as usize >= radius {
                continue;
            }
            for &w in topo.neighbors(u) {
                let w = w as usize;
                if self.distance[w] == NONE {
                    self.distance[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    fn infect<T: Topology>(
        &mut self,
        topo: &mut T,
        v: usize,
        stop: &StopRule,
        radius: Option<usize>,
        progress: &mut Progress,
    ) -> Option<SurvivalReason> {
        if self.position[v] != NONE {
            return None;
        }
        self.position[v] = self.infected.len() as u32;
        self.infected.push(v as u32);
        let deg = topo.degree(v);
        if deg > 0 {
            self.degrees.add(v, deg as i64);
        }
        if !self.ever[v] {
            self.ever[v] = true;
            progress.ever_count += 1;
        }
        if let Some(r) = radius {
            let d = match self.distance[v] {
                NONE => r,
                d => (d as usize).min(r),
            };
            progress.max_distance = progress.max_distance.max(d);
            if d >= r {
                return Some(SurvivalReason::Escape);
            }
        }
        if stop.mass_cap.is_some_and(|cap| progress.ever_count >= cap) {
            return Some(SurvivalReason::MassCap);
        }
        None
    }

    fn recover<T: Topology>(&mut self, topo: &mut T, v: usize) {
        let idx = self.position[v] as usize;
        let last = self.infected.pop().expect("vertex is infected");
        if last as usize != v {
            self.infected[idx] = last;
            self.position[last as usize] = idx as u32;
        }
        self.position[v] = NONE;
        let deg = topo.degree(v);
        if deg > 0 {
            self.degrees.add(v, -(deg as i64));
        }
    }
}
