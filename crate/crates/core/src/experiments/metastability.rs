use serde::{Deserialize, Serialize};

use crate::contact::{Engine, SimParams, StopRule};
use crate::error::{Error, Result};
use crate::geometry::check_alpha;
use crate::graph::{make_star, VertexSet};
use crate::rng::{derive_seed, RngStream};
use crate::stats::median;

use super::{sample_wrapped, Threads};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaRow {
    pub n: f64,
    pub trials: u64,
    pub mean_vertices: f64,
    pub median_capped_tau: f64,
    pub cap_hit_fraction: f64,
    pub cap: f64,
}

/// Extinction times from the all-infected state on fresh samples of `G_n`,
/// capped at `cap`.
pub fn metastability_scan(
    alpha: f64,
    lambda: f64,
    sizes: &[f64],
    trials: u64,
    cap: f64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<MetaRow>> {
    check_alpha(alpha)?;
    let params = SimParams::new(lambda)?;
    if sizes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("sizes must be strictly ascending"));
    }
    if trials == 0 {
        return Err(Error::domain("trials must be > 0"));
    }
    let stop = StopRule::horizon(cap);
    stop.validate()?;
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let point_seed = derive_seed(seed, i as u64);
        let runs = threads.map_init(trials as usize, Engine::new, |engine, t| {
            let mut rng = RngStream::new(point_seed, t as u64);
            let g = sample_wrapped(n, alpha, &mut rng)?;
            if g.is_empty() {
                return Ok((0.0, false, 0));
            }
            let all = VertexSet::all(g.vertex_count());
            let run = engine.run(&mut &g, &all, params, &stop, None, &mut rng)?;
            Ok((run.capped_time(), run.survived(), g.vertex_count()))
        })?;
        let taus: Vec<f64> = runs.iter().map(|r| r.0).collect();
        rows.push(MetaRow {
            n,
            trials,
            mean_vertices: runs.iter().map(|r| r.2 as f64).sum::<f64>() / trials as f64,
            median_capped_tau: median(&taus),
            cap_hit_fraction: runs.iter().filter(|r| r.1).count() as f64 / trials as f64,
            cap,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarRow {
    pub d: usize,
    pub trials: u64,
    pub median_capped_tau: f64,
    pub cap_hit_fraction: f64,
    pub probe_time: f64,
    /// Fraction of runs with more than `0.2 lambda d` infected at the probe time.
    pub above_fraction: f64,
    pub cap: f64,
}

/// Extinction times on stars with `d` leaves, started all infected.
pub fn star_scan(
    lambda: f64,
    degrees: &[usize],
    trials: u64,
    cap: f64,
    probe_time: f64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<StarRow>> {
    let params = SimParams::new(lambda)?;
    if trials == 0 {
        return Err(Error::domain("trials must be > 0"));
    }
    if !(probe_time > 0.0 && probe_time <= cap) {
        return Err(Error::domain(format!("probe time must lie in (0, cap], got {probe_time}")));
    }
    let stop = StopRule::horizon(cap);
    stop.validate()?;
    let mut rows = Vec::with_capacity(degrees.len());
    for (i, &d) in degrees.iter().enumerate() {
        let g = make_star(d);
        let all = VertexSet::all(d + 1);
        let point_seed = derive_seed(seed, i as u64);
        let level = 0.2 * lambda * d as f64;
        let runs = threads.map_init(trials as usize, Engine::new, |engine, t| {
            let mut rng = RngStream::new(point_seed, t as u64);
            let run = engine.run(&mut &g, &all, params, &stop, Some(probe_time), &mut rng)?;
            // the sample at the probe time is absent if the run died earlier
            let at_probe = run.trajectory.get(1).map_or(0, |s| s.1);
            Ok((run.capped_time(), run.survived(), at_probe as f64 > level))
        })?;
        let taus: Vec<f64> = runs.iter().map(|r| r.0).collect();
        rows.push(StarRow {
            d,
            trials,
            median_capped_tau: median(&taus),
            cap_hit_fraction: runs.iter().filter(|r| r.1).count() as f64 / trials as f64,
            probe_time,
            above_fraction: runs.iter().filter(|r| r.2).count() as f64 / trials as f64,
            cap,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_subcritical_graphs_die() {
        let rows = metastability_scan(0.7, 0.1, &[5.0], 200, 1e3, 3, Threads(None)).unwrap();
        assert!(rows[0].cap_hit_fraction < 0.02, "{rows:?}");
    }

    #[test]
    fn sizes_must_ascend() {
        assert!(metastability_scan(0.7, 1.0, &[10.0, 5.0], 2, 10.0, 0, Threads(None)).is_err());
        assert!(metastability_scan(1.2, 1.0, &[10.0], 2, 10.0, 0, Threads(None)).is_err());
    }

    #[test]
    fn larger_stars_live_longer() {
        let rows = star_scan(0.3, &[5, 40], 300, 1e4, 1.0, 1, Threads(None)).unwrap();
        assert!(rows[1].median_capped_tau > rows[0].median_capped_tau, "{rows:?}");
    }
}
