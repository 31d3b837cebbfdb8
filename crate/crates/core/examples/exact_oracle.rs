//! Exact extinction law of small graphs against simulation.

use hypercontact::experiments::{oracle_comparison, Threads};
use hypercontact::graph::{complete_graph, make_star, path_graph, VertexSet};
use hypercontact::oracle::{exact_expected_extinction_time, exact_extinction_probability};

fn main() -> hypercontact::Result<()> {
    let k2 = complete_graph(2);
    for lambda in [0.5, 1.0, 2.0] {
        let mean = exact_expected_extinction_time(&k2, &VertexSet::all(2), lambda)?;
        println!("K2, lambda = {lambda}: E[tau] = {mean:.6} (closed form {:.6})", 1.5 + lambda / 2.0);
    }
    let star = make_star(6);
    for t in [1.0, 5.0, 20.0] {
        let p = exact_extinction_probability(&star, &VertexSet::all(7), 1.0, t)?;
        println!("star with 6 leaves, lambda = 1: P(tau <= {t}) = {p:.6}");
    }
    for (name, g) in [("path:4", path_graph(4)), ("complete:4", complete_graph(4))] {
        for row in oracle_comparison(name, &g, &[0.5], &[0.5, 2.0], 20_000, 3, Threads(None))? {
            println!(
                "{name}: t = {}  exact {:.5}  simulated {:.5}  ({:.2} standard errors)",
                row.t, row.exact_probability, row.mc_probability, row.z
            );
        }
    }
    Ok(())
}
