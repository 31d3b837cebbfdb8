//! Sample the wrapped graph `G_n`, write it, read it back.

use std::io::BufReader;

use hypercontact::experiments::sample_wrapped;
use hypercontact::graph::io::{read_graph, write_graph};
use hypercontact::graph::BuildLimits;
use hypercontact::RngStream;

fn main() -> hypercontact::Result<()> {
    let (n, alpha) = (2000.0, 0.75);
    let g = sample_wrapped(n, alpha, &mut RngStream::new(1, 0))?;
    println!("G_n with n = {n}, alpha = {alpha}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
    println!("max degree {}, components {}", g.max_degree(), g.components().len());

    let mut buf = Vec::new();
    write_graph(&g, &mut buf)?;
    let back = read_graph(BufReader::new(buf.as_slice()), BuildLimits::default())?;
    assert!(back.edges().eq(g.edges()));
    println!("round trip through the text format: {} bytes, identical adjacency", buf.len());
    Ok(())
}
