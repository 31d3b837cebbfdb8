//! Exact computations on small instances: the full-state-space Markov
//! chain (transient law by uniformization, mean extinction time by
//! first-step analysis), enumeration of rooted vertex-path families with
//! their `(2 lambda)^{|gamma|}` weights, and the threshold heights.

mod ctmc;
mod paths;
mod thresholds;

use serde::{Deserialize, Serialize};

pub use ctmc::{exact_expected_extinction_time, exact_extinction_probability, StateSpace, DEFAULT_STATE_CAP};
pub use paths::{enumerate_path_families, path_weight_sum, PathFamily, PathWeights, DEFAULT_NODE_BUDGET};
pub use thresholds::{threshold_heights, ThresholdHeights, DEFAULT_C, DEFAULT_DELTA, DEFAULT_SIGMA};

/// One oracle result as emitted on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub graph: String,
    pub params: serde_json::Value,
    pub quantity: String,
    pub value: f64,
    pub method: String,
}
