//! Contact process on random hyperbolic graphs.
//!
//! The crate samples the half-plane hyperbolic graph model (infinite window
//! and the wrapped finite graph `G_n`), simulates the contact process on it
//! with an exact event-driven engine, and provides an explicit graphical
//! construction for path and duality checks on small graphs. Exact oracles
//! (uniformization and first-step analysis of the full state space) back
//! the Monte Carlo engines. The `experiments` module runs the survival,
//! metastability, density and structural campaigns; `cli` exposes them as
//! the `hrg` binary.

// `!(x > 0.0)` style checks are deliberate: they reject NaN along with
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod contact;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod tessellation;

pub use error::{Error, Result};
pub use geometry::{GraphParams, HalfPlanePoint, PolarPoint};
pub use graph::{Graph, Mode, VertexSet};
pub use rng::RngStream;
