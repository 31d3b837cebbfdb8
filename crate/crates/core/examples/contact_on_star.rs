//! The contact process on stars: extinction times grow quickly with
//! `lambda^2 d`.

use hypercontact::contact::{extinction_time_full, SimParams, StopRule};
use hypercontact::graph::make_star;
use hypercontact::stats::median;
use hypercontact::RngStream;

fn main() -> hypercontact::Result<()> {
    let lambda = 0.2;
    let params = SimParams::new(lambda)?;
    let stop = StopRule::horizon(1e5);
    for d in [25, 50, 100, 200, 400] {
        let g = make_star(d);
        let taus: Vec<f64> = (0..200)
            .map(|t| extinction_time_full(&g, params, &stop, &mut RngStream::new(7, t)).map(|r| r.capped_time()))
            .collect::<hypercontact::Result<_>>()?;
        println!(
            "d = {d:>4}  lambda^2 d = {:>5.1}  median capped extinction time {:>10.1}",
            lambda * lambda * d as f64,
            median(&taus)
        );
    }
    Ok(())
}
