//! Power-law tail of the degree sequence; the exponent should be near `2 alpha + 1`.

use hypercontact::experiments::{degree_tail_fit, sample_wrapped, DegreeFitOptions};
use hypercontact::RngStream;

fn main() -> hypercontact::Result<()> {
    for alpha in [0.6, 0.75, 0.9] {
        let g = sample_wrapped(1e5, alpha, &mut RngStream::new(3, 0))?;
        let fit = degree_tail_fit(&g, DegreeFitOptions::default())?;
        println!(
            "alpha {alpha}: exponent {:.3} [{:.3}, {:.3}] from {} degrees >= {} (expected {:.1})",
            fit.exponent,
            fit.ci_low,
            fit.ci_high,
            fit.tail_points,
            fit.d_min,
            2.0 * alpha + 1.0
        );
    }
    Ok(())
}
