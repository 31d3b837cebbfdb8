use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_alpha, height_for_degree};

pub const DEFAULT_SIGMA: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_C: f64 = 10.0;

/// Height scales of the survival analysis at infection rate `lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdHeights {
    pub lambda: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub delta: f64,
    pub c: f64,
    /// `H(1 / lambda^2)`.
    pub h_star: f64,
    /// `H(lambda^{-(2 - sigma)})`.
    pub h_prime: f64,
    /// `H((delta / lambda^2) log(1 / lambda))`.
    pub h_double_prime: f64,
    /// `log(C / lambda) / (1 - alpha)`.
    pub h_root: f64,
    /// `2 log(2 d)` with `d = C log(1 / lambda) / lambda^2`.
    pub h_ladder: f64,
    /// Whether `h_prime < h_star < h_double_prime` at these parameters.
    pub ordered: bool,
}

pub fn threshold_heights(lambda: f64, alpha: f64, sigma: f64, delta: f64, c: f64) -> Result<ThresholdHeights> {
    check_alpha(alpha)?;
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::domain(format!("lambda must lie in (0, 1/2), got {lambda}")));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::domain(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    if !(delta > 0.0) || !(c > 0.0) {
        return Err(Error::domain(format!("delta and C must be > 0, got {delta} and {c}")));
    }
    let log_inv = (1.0 / lambda).ln();
    let h_star = height_for_degree(lambda.powi(-2), alpha)?;
    let h_prime = height_for_degree(lambda.powf(-(2.0 - sigma)), alpha)?;
    let h_double_prime = height_for_degree(delta / (lambda * lambda) * log_inv, alpha)?;
    let h_root = (c / lambda).ln() / (1.0 - alpha);
    let d = c * log_inv / (lambda * lambda);
    let h_ladder = 2.0 * (2.0 * d).ln();
    Ok(ThresholdHeights {
        lambda,
        alpha,
        sigma,
        delta,
        c,
        h_star,
        h_prime,
        h_double_prime,
        h_root,
        h_ladder,
        ordered: h_prime < h_star && h_star < h_double_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        let t = threshold_heights(0.1, 0.8, 0.1, DEFAULT_DELTA, DEFAULT_C).unwrap();
        assert!((t.h_star - 2.0 * 30f64.ln()).abs() < 1e-12);
        assert!((t.h_star - 6.802).abs() < 1e-3);
        assert!((t.h_prime - 6.342).abs() < 1e-3);
        assert!(t.h_prime < t.h_star);
        // delta log(1/lambda) = 0.115 < 1 puts h'' below h* here
        assert!(t.h_double_prime < t.h_star && !t.ordered);
        let t = threshold_heights(0.1, 0.8, 0.1, 1.0, DEFAULT_C).unwrap();
        assert!(t.ordered);
    }

    #[test]
    fn prime_below_star_across_lambda() {
        for lambda in [0.4, 0.2, 0.05, 0.001] {
            let t = threshold_heights(lambda, 0.7, 0.3, 1.0, 5.0).unwrap();
            assert!(t.h_prime < t.h_star);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(threshold_heights(0.6, 0.8, 0.1, 0.05, 10.0).is_err());
        assert!(threshold_heights(0.1, 1.2, 0.1, 0.05, 10.0).is_err());
        assert!(threshold_heights(0.1, 0.8, 1.0, 0.05, 10.0).is_err());
        assert!(threshold_heights(0.1, 0.8, 0.1, 0.0, 10.0).is_err());
    }
}
