//! Good boxes, backbone and clique checks on the box tessellation of `G_n`,
//! plus the ladder used for the half-line of stars.

use hypercontact::experiments::{ladder_campaign, tessellation_campaign, Threads};

fn main() -> hypercontact::Result<()> {
    let report = tessellation_campaign(1e4, 1.0, 0.75, 0.5, 100, 1, Threads(None))?;
    println!(
        "grid: {} rows, {} top-row boxes, row height {:.4}",
        report.grid.row_count(),
        report.grid.k0,
        report.grid.l
    );
    println!("clique pairs checked {}, violations {}", report.clique_pairs_checked, report.clique_violations);
    for row in &report.rows {
        println!(
            "row {:>2}: mean mass {:.4}, good frequency {:.4}, exact P(good) {:.2e}, bound valid {}",
            row.row, row.mean_mass, row.good_frequency, row.exact, row.bound_valid
        );
    }
    println!("backbone connected in {:.3} of samples", report.connected_frequency);

    for row in ladder_campaign(50, 0.8, 2, 200, 1, Threads(None))? {
        println!(
            "ladder k = {}: P(S_(k+1) nonempty) empirical {:.3}, exact {:.3}, stated formula {:.3}; leaf success {:.3}",
            row.k, row.nonempty_frequency, row.exact_prob, row.stated_prob, row.leaf_success
        );
    }
    Ok(())
}
