//! Capped extinction times on `G_n` as `n` grows.

use hypercontact::experiments::{metastability_scan, Threads};

fn main() -> hypercontact::Result<()> {
    let rows = metastability_scan(0.7, 1.0, &[25.0, 50.0, 100.0, 200.0], 40, 2000.0, 5, Threads(None))?;
    for r in rows {
        println!(
            "n = {:>5}  vertices {:>7.1}  median capped tau {:>8.1}  cap hit {:.2}",
            r.n, r.mean_vertices, r.median_capped_tau, r.cap_hit_fraction
        );
    }
    Ok(())
}
