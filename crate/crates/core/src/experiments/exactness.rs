use serde::{Deserialize, Serialize};

use crate::contact::{build_graphical, has_trace, Engine, RecordLimits, SimParams, StopRule};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::StateSpace;
use crate::rng::{derive_seed, RngStream};
use crate::stats::{mean, std_dev};

use super::Threads;

/// Every connected graph on `1..=max_n` vertices, one per isomorphism class,
/// named by vertex count and edge list.
pub fn small_connected_graphs(max_n: usize) -> Result<Vec<(String, Graph)>> {
    if max_n > 5 {
        return Err(Error::capacity("isomorphism classes are enumerated only up to 5 vertices"));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let perms = permutations(n);
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> =
                        edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .unwrap_or_default();
            if !seen.insert(canon.clone()) {
                continue;
            }
            let g = Graph::from_edges(n, &canon)?;
            if g.components().len() == 1 {
                let name = canon.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ");
                out.push((format!("n{n}[{name}]"), g));
            }
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Simulated against exact extinction statistics from the all-infected state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub graph: String,
    pub lambda: f64,
    pub t: f64,
    pub trials: u64,
    pub exact_probability: f64,
    pub mc_probability: f64,
    pub mc_se: f64,
    /// `|mc - exact| / se`.
    pub z: f64,
    pub exact_mean_time: f64,
    pub mc_mean_time: f64,
    pub mc_time_se: f64,
}

/// For each rate, runs `trials` extinctions on `g` and compares
/// `P(tau <= t)` and `E tau` with the exact chain.
pub fn oracle_comparison(
    name: &str,
    g: &Graph,
    lambdas: &[f64],
    times: &[f64],
    trials: u64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<OracleComparison>> {
    if trials < 2 {
        return Err(Error::domain("trials must be >= 2"));
    }
    if g.is_empty() {
        return Err(Error::domain("graph has no vertices"));
    }
    let all = VertexSet::all(g.vertex_count());
    let mut rows = Vec::new();
    for (i, &lambda) in lambdas.iter().enumerate() {
        let params = SimParams::new(lambda)?;
        let space = StateSpace::new(g, lambda)?;
        let start = space.mask(&all)?;
        let exact_mean_time = space.expected_absorption_times()?[start as usize];
        let point_seed = derive_seed(seed, i as u64);
        let stop = StopRule::horizon(f64::MAX);
        let taus = threads.map_init(trials as usize, Engine::new, |engine, t| {
            let run = engine.run(&mut &*g, &all, params, &stop, None, &mut RngStream::new(point_seed, t as u64))?;
            run.extinction_time.ok_or_else(|| Error::capacity("run did not go extinct"))
        })?;
        let mc_mean_time = mean(&taus);
        let mc_time_se = std_dev(&taus) / (trials as f64).sqrt();
        for &t in times {
            let exact = space.transient(start, t)?[0];
            let p = taus.iter().filter(|&&tau| tau <= t).count() as f64 / trials as f64;
            let se = (exact * (1.0 - exact) / trials as f64).sqrt().max(1.0 / trials as f64);
            rows.push(OracleComparison {
                graph: name.to_string(),
                lambda,
                t,
                trials,
                exact_probability: exact,
                mc_probability: p,
                mc_se: se,
                z: (p - exact).abs() / se,
                exact_mean_time,
                mc_mean_time,
                mc_time_se,
            });
        }
    }
    Ok(rows)
}

/// Empirical probability that a graphical record contains an infection
/// path with a given ordered trace, against `(2 lambda)^{|gamma|}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub path: String,
    pub length: usize,
    pub records: u64,
    pub frequency: f64,
    pub se: f64,
    pub bound: f64,
    /// `frequency <= bound + 3 se`.
    pub within: bool,
}

/// All simple vertex paths of `g` with `1..=max_len` steps.
pub fn simple_paths(g: &Graph, max_len: usize) -> Vec<Vec<usize>> {
    fn grow(g: &Graph, path: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        if path.len() > max_len {
            return;
        }
        let last = *path.last().expect("nonempty");
        for &w in g.neighbors(last) {
            let w = w as usize;
            if !path.contains(&w) {
                path.push(w);
                out.push(path.clone());
                grow(g, path, max_len, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        grow(g, &mut vec![v], max_len, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

pub fn trace_bound_check(
    g: &Graph,
    lambda: f64,
    horizon: f64,
    max_len: usize,
    records: u64,
    seed: u64,
    threads: Threads,
) -> Result<Vec<TraceRow>> {
    let params = SimParams::new(lambda)?;
    if records == 0 {
        return Err(Error::domain("records must be > 0"));
    }
    let paths = simple_paths(g, max_len);
    let point_seed = derive_seed(seed, 0);
    let hits = threads.map_init(
        records as usize,
        || (),
        |_, r| {
            let mut rng = RngStream::new(point_seed, r as u64);
            let rec = build_graphical(g, params, horizon, RecordLimits::default(), &mut rng)?;
            Ok(paths.iter().map(|p| has_trace(&rec, p)).collect::<Vec<bool>>())
        },
    )?;
    let n = records as f64;
    Ok(paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let freq = hits.iter().filter(|h| h[i]).count() as f64 / n;
            let se = (freq * (1.0 - freq) / n).sqrt();
            let bound = (2.0 * lambda).powi(p.len() as i32 - 1);
            TraceRow {
                path: p.iter().map(usize::to_string).collect::<Vec<_>>().join("-"),
                length: p.len() - 1,
                records,
                frequency: freq,
                se,
                bound,
                within: freq <= bound + 3.0 * se,
            }
        })
        .collect())
}
