//! Probability that a graphical record carries an infection path with a
//! given ordered trace, against `(2 lambda)^{|gamma|}`; and the path-family
//! weights entering the survival upper bound.

use hypercontact::experiments::{trace_bound_check, Threads};
use hypercontact::graph::{complete_graph, make_star, VertexSet};
use hypercontact::oracle::{enumerate_path_families, path_weight_sum, DEFAULT_NODE_BUDGET};

fn main() -> hypercontact::Result<()> {
    let k4 = complete_graph(4);
    let rows = trace_bound_check(&k4, 0.2, 10.0, 3, 20_000, 1, Threads(None))?;
    for len in 1..=3 {
        let worst = rows.iter().filter(|r| r.length == len).map(|r| r.frequency).fold(0.0, f64::max);
        println!("|gamma| = {len}: largest trace frequency {worst:.5}, bound {:.5}", 0.4f64.powi(len as i32));
    }

    let star = make_star(8);
    let fam = enumerate_path_families(&star, 1, &VertexSet::singleton(0), 4, DEFAULT_NODE_BUDGET)?;
    let w = path_weight_sum(&fam, 0.1)?;
    println!(
        "star, root a leaf, A = center: Gamma_A weight {:.4}, Gamma_(A,*) weight {:.4}",
        w.gamma_a, w.gamma_a_star
    );
    Ok(())
}
