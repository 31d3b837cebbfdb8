use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::RngStream;

use super::SimParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordEvent {
    Recovery { vertex: u32 },
    Transmission { from: u32, to: u32 },
}

/// Size limits for explicit records. Records are meant for small graphs;
/// hubs make them infeasible at scale.
#[derive(Clone, Copy, Debug)]
pub struct RecordLimits {
    pub max_vertices: usize,
    pub max_expected_events: f64,
}

impl Default for RecordLimits {
    fn default() -> Self {
        Self { max_vertices: 1000, max_expected_events: 1e7 }
    }
}

/// Harris construction on `[0, horizon]`: rate-1 recovery marks per vertex
/// and rate-`lambda` transmission arrows per ordered edge, merged into one
/// time-sorted event list.
#[derive(Clone, Debug)]
pub struct GraphicalRecord {
    horizon: f64,
    vertex_count: usize,
    events: Vec<(f64, RecordEvent)>,
}

impl GraphicalRecord {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn events(&self) -> &[(f64, RecordEvent)] {
        &self.events
    }

    pub fn recovery_marks(&self, v: usize) -> Vec<f64> {
        self.events
            .iter()
            .filter(|(_, e)| matches!(e, RecordEvent::Recovery { vertex } if *vertex as usize == v))
            .map(|&(t, _)| t)
            .collect()
    }

    pub fn arrows(&self, from: usize, to: usize) -> Vec<f64> {
        self.events
            .iter()
            .filter(|(_, e)| {
                matches!(e, RecordEvent::Transmission { from: a, to: b }
                    if *a as usize == from && *b as usize == to)
            })
            .map(|&(t, _)| t)
            .collect()
    }
}

fn poisson_times(rate: f64, horizon: f64, rng: &mut RngStream, mut push: impl FnMut(f64)) {
    let mean = rate * horizon;
    if mean <= 0.0 {
        return;
    }
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    for _ in 0..count {
        push(horizon * rng.open01());
    }
}

pub fn build_graphical(
    g: &Graph,
    params: SimParams,
    horizon: f64,
    limits: RecordLimits,
    rng: &mut RngStream,
) -> Result<GraphicalRecord> {
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::domain(format!("horizon must be finite and >= 0, got {horizon}")));
    }
    let n = g.vertex_count();
    if n > limits.max_vertices {
        return Err(Error::capacity(format!("{n} vertices exceed the record limit {}", limits.max_vertices)));
    }
    let expected = n as f64 * horizon * (1.0 + params.lambda * g.max_degree() as f64);
    if expected > limits.max_expected_events {
        return Err(Error::capacity(format!("about {expected:.0} events exceed the record budget")));
    }
    let mut events = Vec::new();
    for v in 0..n {
        poisson_times(1.0, horizon, rng, |t| events.push((t, RecordEvent::Recovery { vertex: v as u32 })));
    }
    for u in 0..n {
        for &v in g.neighbors(u) {
            poisson_times(params.lambda, horizon, rng, |t| {
                events.push((t, RecordEvent::Transmission { from: u as u32, to: v }))
            });
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(GraphicalRecord { horizon, vertex_count: n, events })
}

/// `t -> xi_t^A` read off a record: `x` is infected at `t` iff an infection
/// path joins `A x {0}` to `(x, t)`.
pub struct Evolution<'a> {
    record: &'a GraphicalRecord,
    initial: VertexSet,
}

pub fn evolve_from_record<'a>(record: &'a GraphicalRecord, initial: &VertexSet) -> Result<Evolution<'a>> {
    if initial.max().is_some_and(|v| v >= record.vertex_count) {
        return Err(Error::domain("initial set has a vertex outside the record's graph"));
    }
    Ok(Evolution { record, initial: initial.clone() })
}

impl Evolution<'_> {
    pub fn state_at(&self, t: f64) -> Result<VertexSet> {
        Ok(self.states_at(&[t])?.pop().expect("one query"))
    }

    /// States at several ascending times in one chronological sweep.
    pub fn states_at(&self, times: &[f64]) -> Result<Vec<VertexSet>> {
        if times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("query times must be ascending"));
        }
        if let Some(&t) = times.iter().find(|&&t| t > self.record.horizon || t < 0.0) {
            return Err(Error::domain(format!("query time {t} outside [0, {}]", self.record.horizon)));
        }
        let mut state = vec![false; self.record.vertex_count];
        for v in self.initial.iter() {
            state[v] = true;
        }
        let snapshot = |s: &[bool]| s.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect();
        let mut out = Vec::with_capacity(times.len());
        let mut events = self.record.events.iter().peekable();
        for &t in times {
            while let Some(&&(time, ev)) = events.peek() {
                if time > t {
                    break;
                }
                match ev {
                    RecordEvent::Recovery { vertex } => state[vertex as usize] = false,
                    RecordEvent::Transmission { from, to } => {
                        if state[from as usize] {
                            state[to as usize] = true;
                        }
                    }
                }
                events.next();
            }
            out.push(snapshot(&state));
        }
        Ok(out)
    }
}

/// Whether some infection path started at `(gamma[0], 0)` has ordered trace
/// exactly `gamma` before the horizon.
///
/// Sweeps the record once, keeping for each prefix length `i` whether some
/// path realizing `gamma[..=i]` currently sits at `gamma[i]` without having
/// met a recovery mark since it arrived.
pub fn has_trace(record: &GraphicalRecord, gamma: &[usize]) -> bool {
    let Some(&start) = gamma.first() else {
        return false;
    };
    if start >= record.vertex_count {
        return false;
    }
    let last = gamma.len() - 1;
    if last == 0 {
        return true;
    }
    let mut alive = vec![false; gamma.len()];
    alive[0] = true;
    for &(_, ev) in &record.events {
        match ev {
            RecordEvent::Recovery { vertex } => {
                for (i, &g) in gamma.iter().enumerate() {
                    if g == vertex as usize {
                        alive[i] = false;
                    }
                }
            }
            RecordEvent::Transmission { from, to } => {
                // descending so one arrow extends each prefix at most once
                for i in (0..last).rev() {
                    if alive[i] && gamma[i] == from as usize && gamma[i + 1] == to as usize {
                        alive[i + 1] = true;
                        if i + 1 == last {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}
