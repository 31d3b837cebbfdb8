//! With the top of `G_n` and evenly spaced strips emptied, the remaining
//! gaps cannot be joined by an edge, so components stay small.

use hypercontact::experiments::{bad_event_check, Threads};

fn main() -> hypercontact::Result<()> {
    let r = bad_event_check(1e4, 0.75, 0.2, 0.75, 20, 0.999, 1, Threads(None))?;
    let m = r.masses;
    println!("{} strips, spacing {:.3}, strip width {:.3}", r.layout.strips, r.layout.spacing, r.layout.strip_width);
    println!("mu(B_0) = {:.2} <= {:.2}", m.b0, m.b0_bound);
    println!("mu(B_k) = {:.3} <= {:.3}", m.strip, m.strip_bound);
    println!("mu(C_k) = {:.3} <= {:.3}", m.gap, m.gap_bound);
    println!("cross-gap edges over all samples: {}", r.total_cross_gap_edges);
    println!("largest component {} against the bound {}", r.max_component, r.component_bound);
    Ok(())
}
