//! Self-duality checked on shared graphical records:
//! `P(x in xi_t^A) = P(xi_t^x meets A)`.

use hypercontact::contact::{build_graphical, evolve_from_record, RecordLimits, SimParams};
use hypercontact::graph::{complete_graph, VertexSet};
use hypercontact::RngStream;

fn main() -> hypercontact::Result<()> {
    let g = complete_graph(3);
    let params = SimParams::new(0.8)?;
    let t = 1.5;
    let a = VertexSet::from_iter([0, 1]);
    let x = 2;
    let (mut forward, mut backward) = (0u32, 0u32);
    let records = 50_000;
    for r in 0..records {
        let rec = build_graphical(&g, params, t, RecordLimits::default(), &mut RngStream::new(9, r))?;
        if evolve_from_record(&rec, &a)?.state_at(t)?.contains(x) {
            forward += 1;
        }
        // the time-reversed record has the same law, so evolving from x on a
        // fresh record estimates the dual side
        let rec = build_graphical(&g, params, t, RecordLimits::default(), &mut RngStream::new(10, r))?;
        if evolve_from_record(&rec, &VertexSet::singleton(x))?.state_at(t)?.intersects(&a) {
            backward += 1;
        }
    }
    let n = records as f64;
    println!("P(x in xi_t^A)      = {:.4}", forward as f64 / n);
    println!("P(xi_t^x meets A)   = {:.4}", backward as f64 / n);
    Ok(())
}
