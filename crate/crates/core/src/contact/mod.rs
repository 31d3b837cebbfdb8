//! The contact process: infected vertices recover at rate 1 and transmit to
//! each neighbor at rate `lambda`.
//!
//! Two engines are provided. [`Engine`] samples the Markov chain directly and
//! keeps memory proportional to the graph; it is used for everything at
//! scale. [`GraphicalRecord`] materializes the Harris construction (recovery
//! marks and transmission arrows) on a finite horizon so that several
//! initial conditions can be evolved on shared randomness, and infection
//! paths can be inspected.

mod engine;
mod record;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::RngStream;

pub use engine::Engine;
pub use record::{
    build_graphical, evolve_from_record, has_trace, Evolution, GraphicalRecord, RecordEvent, RecordLimits,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub lambda: f64,
}

impl SimParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Self { lambda })
        } else {
            Err(Error::domain(format!("infection rate must be > 0, got {lambda}")))
        }
    }

    /// `lambda = 0` is allowed here only for oracle cross-checks of pure
    /// recovery dynamics.
    pub fn allowing_zero(lambda: f64) -> Result<Self> {
        if lambda >= 0.0 && lambda.is_finite() {
            Ok(Self { lambda })
        } else {
            Err(Error::domain(format!("infection rate must be >= 0, got {lambda}")))
        }
    }
}

/// When a run stops before extinction. The survival proxies (escape from a
/// ball around the reference vertex, or a cap on distinct ever-infected
/// vertices) are reported with every result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub t_max: f64,
    pub escape_radius: Option<usize>,
    pub mass_cap: Option<usize>,
    /// Vertex the escape radius is measured from; defaults to the graph root,
    /// then to the smallest initially infected vertex.
    pub reference: Option<usize>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { t_max: 1e4, escape_radius: Some(20), mass_cap: Some(100_000), reference: None }
    }
}

impl StopRule {
    pub fn horizon(t_max: f64) -> Self {
        Self { t_max, escape_radius: None, mass_cap: None, reference: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0) {
            return Err(Error::domain(format!("t_max must be > 0, got {}", self.t_max)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurvivalReason {
    Horizon,
    Escape,
    MassCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Extinct { time: f64 },
    Survived { reason: SurvivalReason },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub verdict: Verdict,
    pub extinction_time: Option<f64>,
    /// `(t, |infected|)` sampled on a regular grid when requested.
    pub trajectory: Vec<(f64, usize)>,
    /// Largest hop distance from the reference vertex reached by the
    /// infection, capped at the escape radius; absent without an escape rule.
    pub max_graph_distance_reached: Option<usize>,
    pub ever_infected: usize,
    /// Infected count when the run stopped (0 on extinction).
    pub final_infected: usize,
    pub end_time: f64,
    pub events: u64,
}

impl RunResult {
    pub fn survived(&self) -> bool {
        matches!(self.verdict, Verdict::Survived { .. })
    }

    /// Extinction time, or the stopping time when the run did not die out.
    pub fn capped_time(&self) -> f64 {
        self.extinction_time.unwrap_or(self.end_time)
    }
}

/// Runs the contact process from `initial` on a fixed graph.
pub fn simulate(
    g: &Graph,
    initial: &VertexSet,
    params: SimParams,
    stop: &StopRule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let mut stop = *stop;
    if stop.reference.is_none() {
        stop.reference = g.root();
    }
    Engine::new().run(&mut &*g, initial, params, &stop, None, rng)
}

/// Runs from the all-infected configuration; the extinction time of this run
/// is `tau_G`.
pub fn extinction_time_full(g: &Graph, params: SimParams, stop: &StopRule, rng: &mut RngStream) -> Result<RunResult> {
    if g.is_empty() {
        return Err(Error::domain("graph has no vertices"));
    }
    simulate(g, &VertexSet::all(g.vertex_count()), params, stop, rng)
}
