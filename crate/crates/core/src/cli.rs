//! The `hrg` command line.
//!
//! Every parameter can be given as a flag or as `<command>.<key>` in a
//! config file (`common.<key>` for `seed`, `threads` and `out`); flags win.
//! The effective configuration is echoed on stdout before the run and
//! stored in the JSON summary. Experiments write `<out>/<command>.csv` and
//! `<out>/<command>.json`; `gen-graph` writes the graph file at `--out`.
//!
//! Exit status: 0 on success, 2 for invalid parameters or configuration,
//! 1 for capacity and other runtime failures.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::{Error, Result};
use crate::experiments::{
    bad_event_check, default_window, degree_tail_fit, density_experiment, estimate_gamma, fit_exponent,
    ladder_campaign, metastability_scan, oracle_comparison, sample_wrapped, small_connected_graphs, star_scan,
    tessellation_campaign, trace_bound_check, write_csv, write_json, CampaignSummary, DegreeFitOptions, DensityConfig,
    GammaConfig, GammaEstimate, SurvivalWindow, Threads, DEFAULT_LAMBDA_GRID,
};
use crate::geometry::check_alpha;
use crate::graph::io::{read_graph, write_graph};
use crate::graph::{complete_graph, make_star, path_graph, BuildLimits, Graph};
use crate::oracle::OracleRecord;
use crate::rng::RngStream;

#[derive(Parser, Debug)]
#[command(name = "hrg", version, about = "Contact process on random hyperbolic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory (a file path for gen-graph).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file with `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the wrapped graph G_n and write it to a file.
    GenGraph {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit the power-law exponent of the degree tail.
    DegreeFit {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        /// Read the graph from a file instead of sampling it.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        min_tail: Option<usize>,
        #[arg(long)]
        bootstrap: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the survival probability from the root.
    EstimateGamma {
        #[arg(long)]
        alpha: Option<f64>,
        /// One rate or a comma-separated grid.
        #[arg(long)]
        lambda: Option<List<f64>>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        h_cap: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Distinct ever-infected vertices counted as survival, or `none`.
        #[arg(long)]
        mass_cap: Option<Opt<usize>>,
        /// Graph distance from the root counted as survival, or `none`.
        #[arg(long)]
        escape_radius: Option<Opt<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit log-log slopes to survival estimates.
    FitExponent {
        #[arg(long)]
        alpha: Option<f64>,
        /// CSV written by estimate-gamma.
        #[arg(long)]
        input: Option<PathBuf>,
        /// `lambda:gamma` pairs, comma separated.
        #[arg(long)]
        points: Option<List<Pair>>,
        #[command(flatten)]
        common: Common,
    },
    /// Capped extinction times on G_n (`kind = gn`) or on stars (`kind = star`).
    ExtinctionScan {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        sizes: Option<List<f64>>,
        #[arg(long)]
        degrees: Option<List<usize>>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        cap: Option<f64>,
        #[arg(long)]
        probe_time: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Infection density at time t_n on G_n against the survival probability.
    Density {
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        t_n: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        gamma_trials: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Conditioned sparse configuration: gaps, components, region masses.
    BadEvent {
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        confidence: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Box tessellation and ladder statistics.
    TessellationReport {
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        ladder_d: Option<usize>,
        #[arg(long)]
        ladder_alpha: Option<f64>,
        #[arg(long)]
        ladder_samples: Option<u64>,
        #[arg(long)]
        ladder_max_k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Simulated extinction statistics against the exact Markov chain.
    OracleCheck {
        /// `all<N>` (every connected graph on up to N vertices),
        /// `complete:N`, `path:N`, `star:D`, or a graph file.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        lambda: Option<List<f64>>,
        #[arg(long)]
        t: Option<List<f64>>,
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Trace probabilities in graphical records against `(2 lambda)^{|gamma|}`.
    TraceCheck {
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        records: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GenGraph { .. } => "gen-graph",
            Command::DegreeFit { .. } => "degree-fit",
            Command::EstimateGamma { .. } => "estimate-gamma",
            Command::FitExponent { .. } => "fit-exponent",
            Command::ExtinctionScan { .. } => "extinction-scan",
            Command::Density { .. } => "density",
            Command::BadEvent { .. } => "bad-event",
            Command::TessellationReport { .. } => "tessellation-report",
            Command::OracleCheck { .. } => "oracle-check",
            Command::TraceCheck { .. } => "trace-check",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::GenGraph { common, .. }
            | Command::DegreeFit { common, .. }
            | Command::EstimateGamma { common, .. }
            | Command::FitExponent { common, .. }
            | Command::ExtinctionScan { common, .. }
            | Command::Density { common, .. }
            | Command::BadEvent { common, .. }
            | Command::TessellationReport { common, .. }
            | Command::OracleCheck { common, .. }
            | Command::TraceCheck { common, .. } => common,
        }
    }
}

/// Comma-separated list value.
#[derive(Clone, Debug, PartialEq)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", p.trim())))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(T::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Optional value written as `none` when absent.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Opt<T>(Option<T>);

impl<T: FromStr> FromStr for Opt<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("none") {
            Ok(Opt(None))
        } else {
            s.trim().parse().map(|v| Opt(Some(v))).map_err(|e: T::Err| e.to_string())
        }
    }
}

impl<T: Display> Display for Opt<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.0 {
            Some(v) => v.fmt(f),
            None => f.write_str("none"),
        }
    }
}

/// `lambda:gamma` pair.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Pair(f64, f64);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lambda:gamma, got `{s}`"))?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        Ok(Pair(num(a)?, num(b)?))
    }
}

impl Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

const COMMON_KEYS: [&str; 3] = ["seed", "threads", "out"];

/// Merges flags, the config file and defaults, recording every effective value.
struct Resolver<'a> {
    section: &'static str,
    file: &'a ConfigFile,
    echo: BTreeMap<String, String>,
}

impl<'a> Resolver<'a> {
    fn new(section: &'static str, file: &'a ConfigFile) -> Self {
        Self { section, file, echo: BTreeMap::new() }
    }

    fn lookup<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let common = COMMON_KEYS.contains(&key);
        let value = match flag {
            Some(v) => Some(v),
            None => {
                let text = self.file.get(self.section, key).map(|t| (self.section, t)).or_else(|| {
                    if common {
                        self.file.get("common", key).map(|t| ("common", t))
                    } else {
                        None
                    }
                });
                match text {
                    Some((sec, t)) => {
                        Some(t.parse::<T>().map_err(|e| Error::Parse(format!("config key {sec}.{key} = `{t}`: {e}")))?)
                    }
                    None => None,
                }
            }
        };
        if let Some(v) = &value {
            self.record(key, v);
        }
        Ok(value)
    }

    fn record<T: Display>(&mut self, key: &str, v: &T) {
        let section = if COMMON_KEYS.contains(&key) { "common" } else { self.section };
        self.echo.insert(format!("{section}.{key}"), v.to_string());
    }

    fn value<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        match self.lookup(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default);
                Ok(default)
            }
        }
    }

    fn optional<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.lookup(key, flag)
    }

    /// Rejects config keys of this section that no parameter consumed.
    fn finish(self, allowed_extra: &[&str]) -> Result<BTreeMap<String, String>> {
        for key in self.file.keys_in(self.section) {
            if !self.echo.contains_key(&format!("{}.{key}", self.section)) && !allowed_extra.contains(&key) {
                return Err(Error::Parse(format!("unknown config key {}.{key}", self.section)));
            }
        }
        for key in self.file.keys_in("common") {
            if !COMMON_KEYS.contains(&key) {
                return Err(Error::Parse(format!("unknown config key common.{key}")));
            }
        }
        Ok(self.echo)
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hrg: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    let name = command.name();
    let common = command.common().clone();
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut r = Resolver::new(name, &file);
    let seed = r.value("seed", common.seed, 1u64)?;
    let threads = r.optional("threads", common.threads)?;
    let default_out = if name == "gen-graph" { PathBuf::from("graph.hrg") } else { PathBuf::from("hrg-out") };
    let out = r.value("out", common.out.clone().map(Shown), Shown(default_out))?.0;
    let threads_opt = threads;
    let threads = Threads(threads);
    let started = Instant::now();

    let output: Output = match command {
        Command::GenGraph { alpha, n, .. } => {
            let alpha = r.value("alpha", alpha, 0.75)?;
            let n = r.value("n", n, 1000.0)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            check_alpha(alpha)?;
            let g = sample_wrapped(n, alpha, &mut RngStream::new(seed, 0))?;
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            write_graph(&g, BufWriter::new(File::create(&out)?))?;
            println!("wrote {} ({} vertices, {} edges)", out.display(), g.vertex_count(), g.edge_count());
            return Ok(());
        }
        Command::DegreeFit { alpha, n, graph, min_tail, bootstrap, .. } => {
            let graph_path = r.optional("graph", graph.map(Shown))?;
            let (alpha, n) = if graph_path.is_some() {
                (None, None)
            } else {
                (Some(r.value("alpha", alpha, 0.75)?), Some(r.value("n", n, 2e5)?))
            };
            let min_tail = r.value("min_tail", min_tail, 100usize)?;
            let bootstrap = r.value("bootstrap", bootstrap, 200usize)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let g = match (&graph_path, alpha, n) {
                (Some(p), _, _) => read_graph(BufReader::new(File::open(&p.0)?), BuildLimits::default())?,
                (None, Some(alpha), Some(n)) => {
                    check_alpha(alpha)?;
                    sample_wrapped(n, alpha, &mut RngStream::new(seed, 0))?
                }
                _ => unreachable!("either a file or sampling parameters"),
            };
            let fit = degree_tail_fit(&g, DegreeFitOptions { min_tail, bootstrap, seed })?;
            Output::rows(&[fit], &fit, echo)?
        }
        Command::EstimateGamma { alpha, lambda, trials, half_width, h_cap, t_max, mass_cap, escape_radius, .. } => {
            let alpha = r.value("alpha", alpha, 0.6)?;
            check_alpha(alpha)?;
            let lambdas = r.value("lambda", lambda, List(DEFAULT_LAMBDA_GRID.to_vec()))?.0;
            let trials = r.value("trials", trials, 1000u64)?;
            let (dw, ds) = default_window(alpha, lambdas[0]);
            let half_width = r.value("half_width", half_width, dw.half_width)?;
            let default_cap = SurvivalWindow::with_half_width(half_width, alpha).h_cap;
            let h_cap = r.value("h_cap", h_cap, default_cap)?;
            let t_max = r.value("t_max", t_max, ds.t_max)?;
            let mass_cap = r.value("mass_cap", mass_cap, Opt(ds.mass_cap))?.0;
            let escape_radius = r.value("escape_radius", escape_radius, Opt(ds.escape_radius))?.0;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let mut rows = Vec::with_capacity(lambdas.len());
            for &lambda in &lambdas {
                let mut cfg = GammaConfig::new(alpha, lambda, trials);
                cfg.window = SurvivalWindow { half_width, h_cap };
                cfg.stop.t_max = t_max;
                cfg.stop.mass_cap = mass_cap;
                cfg.stop.escape_radius = escape_radius;
                rows.push(estimate_gamma(&cfg, seed, threads)?);
            }
            Output::rows(&rows, &rows, echo)?
        }
        Command::FitExponent { alpha, input, points, .. } => {
            let alpha = r.value("alpha", alpha, 0.6)?;
            let input = r.optional("input", input.map(Shown))?;
            let points = r.optional("points", points)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let pts: Vec<(f64, f64)> = match (input, points) {
                (Some(path), None) => {
                    let mut reader = csv::Reader::from_path(&path.0)?;
                    let mut pts = Vec::new();
                    for row in reader.deserialize::<GammaEstimate>() {
                        let row = row?;
                        pts.push((row.lambda, row.estimate));
                    }
                    pts
                }
                (None, Some(List(p))) => p.iter().map(|p| (p.0, p.1)).collect(),
                _ => return Err(Error::Parse("give exactly one of --input and --points".into())),
            };
            let fit = fit_exponent(&pts, alpha)?;
            #[derive(Serialize)]
            struct FitRow {
                alpha: f64,
                points: usize,
                plain_slope: f64,
                plain_intercept: f64,
                plain_residual: f64,
                corrected_slope: f64,
                corrected_intercept: f64,
                corrected_residual: f64,
                theory_slope: f64,
            }
            let row = FitRow {
                alpha,
                points: pts.len(),
                plain_slope: fit.plain.slope,
                plain_intercept: fit.plain.intercept,
                plain_residual: fit.plain.residual,
                corrected_slope: fit.corrected.slope,
                corrected_intercept: fit.corrected.intercept,
                corrected_residual: fit.corrected.residual,
                theory_slope: fit.theory(),
            };
            Output::rows(&[row], &fit, echo)?
        }
        Command::ExtinctionScan { kind, alpha, lambda, sizes, degrees, trials, cap, probe_time, .. } => {
            let kind = r.value("kind", kind, "gn".to_string())?;
            let lambda = r.value("lambda", lambda, if kind == "star" { 0.1 } else { 1.0 })?;
            let trials = r.value("trials", trials, 200u64)?;
            match kind.as_str() {
                "gn" => {
                    let alpha = r.value("alpha", alpha, 0.7)?;
                    let sizes = r.value("sizes", sizes, List(vec![200.0, 400.0, 800.0, 1600.0]))?.0;
                    let cap = r.value("cap", cap, 1e4)?;
                    let echo = r.finish(&[])?;
                    print_echo(&echo);
                    let rows = metastability_scan(alpha, lambda, &sizes, trials, cap, seed, threads)?;
                    Output::rows(&rows, &rows, echo)?
                }
                "star" => {
                    let degrees = r.value("degrees", degrees, List(vec![200usize, 400, 800, 1600]))?.0;
                    let cap = r.value("cap", cap, 1e5)?;
                    let probe = r.value("probe_time", probe_time, 50.0)?;
                    let echo = r.finish(&[])?;
                    print_echo(&echo);
                    let rows = star_scan(lambda, &degrees, trials, cap, probe, seed, threads)?;
                    Output::rows(&rows, &rows, echo)?
                }
                other => return Err(Error::Parse(format!("kind must be `gn` or `star`, got `{other}`"))),
            }
        }
        Command::Density { n, alpha, lambda, t_n, trials, gamma_trials, .. } => {
            let cfg = DensityConfig {
                n: r.value("n", n, 1e4)?,
                alpha: r.value("alpha", alpha, 0.7)?,
                lambda: r.value("lambda", lambda, 2.0)?,
                t_n: r.value("t_n", t_n, 50.0)?,
                trials: r.value("trials", trials, 50u64)?,
                gamma_trials: r.value("gamma_trials", gamma_trials, 2000u64)?,
            };
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let res = density_experiment(&cfg, seed, threads)?;
            Output::rows(std::slice::from_ref(&res), &res, echo)?
        }
        Command::BadEvent { n, a, epsilon, alpha, trials, confidence, .. } => {
            let n = r.value("n", n, 1e4)?;
            let a = r.value("a", a, 0.75)?;
            let epsilon = r.value("epsilon", epsilon, 0.2)?;
            let alpha = r.value("alpha", alpha, 0.75)?;
            let trials = r.value("trials", trials, 100u64)?;
            let confidence = r.value("confidence", confidence, 0.999)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let report = bad_event_check(n, a, epsilon, alpha, trials, confidence, seed, threads)?;
            Output::rows(&report.trials, &report, echo)?
        }
        Command::TessellationReport {
            n,
            epsilon,
            alpha,
            lambda,
            samples,
            ladder_d,
            ladder_alpha,
            ladder_samples,
            ladder_max_k,
            ..
        } => {
            let n = r.value("n", n, 1e4)?;
            let epsilon = r.value("epsilon", epsilon, 1.0)?;
            let alpha = r.value("alpha", alpha, 0.75)?;
            let lambda = r.value("lambda", lambda, 0.5)?;
            let samples = r.value("samples", samples, 1000u64)?;
            let ladder_d = r.value("ladder_d", ladder_d, 50usize)?;
            let ladder_alpha = r.value("ladder_alpha", ladder_alpha, 0.8)?;
            let ladder_samples = r.value("ladder_samples", ladder_samples, 200u64)?;
            let ladder_max_k = r.value("ladder_max_k", ladder_max_k, 2usize)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let report = tessellation_campaign(n, epsilon, alpha, lambda, samples, seed, threads)?;
            let ladder = ladder_campaign(ladder_d, ladder_alpha, ladder_max_k, ladder_samples, seed, threads)?;
            std::fs::create_dir_all(&out)?;
            let ladder_path = out.join(format!("{name}-ladder.csv"));
            write_csv(&ladder_path, &ladder)?;
            println!("wrote {}", ladder_path.display());
            let results = serde_json::json!({ "tessellation": report, "ladder": ladder });
            Output::rows(&report.rows, &results, echo)?
        }
        Command::OracleCheck { graph, lambda, t, trials, .. } => {
            let spec = r.value("graph", graph, "all4".to_string())?;
            let lambdas = r.value("lambda", lambda, List(vec![0.2, 0.5, 1.0]))?.0;
            let times = r.value("t", t, List(vec![0.5, 2.0]))?.0;
            let trials = r.value("trials", trials, 10_000u64)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let graphs = named_graphs(&spec)?;
            let mut rows = Vec::new();
            let mut records = Vec::new();
            for (i, (gname, g)) in graphs.iter().enumerate() {
                let point_seed = crate::rng::derive_seed(seed, i as u64);
                for row in oracle_comparison(gname, g, &lambdas, &times, trials, point_seed, threads)? {
                    let params = serde_json::json!({ "lambda": row.lambda, "t": row.t, "initial": "all" });
                    records.push(OracleRecord {
                        graph: gname.clone(),
                        params,
                        quantity: "extinction_probability".into(),
                        value: row.exact_probability,
                        method: "uniformization".into(),
                    });
                    rows.push(row);
                }
            }
            let results = serde_json::json!({ "exact": records, "comparison": rows });
            Output::rows(&rows, &results, echo)?
        }
        Command::TraceCheck { graph, lambda, horizon, max_len, records, .. } => {
            let spec = r.value("graph", graph, "complete:4".to_string())?;
            let lambda = r.value("lambda", lambda, 0.2)?;
            let horizon = r.value("horizon", horizon, 10.0)?;
            let max_len = r.value("max_len", max_len, 4usize)?;
            let records = r.value("records", records, 10_000u64)?;
            let echo = r.finish(&[])?;
            print_echo(&echo);
            let graphs = named_graphs(&spec)?;
            let [(_, g)] = graphs.as_slice() else {
                return Err(Error::Parse("trace-check takes a single graph".into()));
            };
            let rows = trace_bound_check(g, lambda, horizon, max_len, records, seed, threads)?;
            Output::rows(&rows, &rows, echo)?
        }
    };

    std::fs::create_dir_all(&out)?;
    let csv_path = out.join(format!("{name}.csv"));
    output.write_csv(&csv_path)?;
    let mut summary = CampaignSummary::new(name, output.echo, seed, threads_opt);
    summary.wall_time_s = started.elapsed().as_secs_f64();
    summary.results = output.results;
    let json_path = out.join(format!("{name}.json"));
    write_json(&json_path, &summary)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

/// Path value with a `Display` for the config echo.
#[derive(Clone, Debug)]
struct Shown(PathBuf);

impl FromStr for Shown {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(Shown(PathBuf::from(s)))
    }
}

impl Display for Shown {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.display().fmt(f)
    }
}

/// CSV rows (already serialized) plus the JSON results of a run.
struct Output {
    csv: Vec<u8>,
    results: serde_json::Value,
    echo: BTreeMap<String, String>,
}

impl Output {
    fn rows<R: Serialize, J: Serialize>(rows: &[R], results: &J, echo: BTreeMap<String, String>) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let csv = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(Self { csv, results: serde_json::to_value(results)?, echo })
    }

    fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, &self.csv)?;
        Ok(())
    }
}

fn print_echo(echo: &BTreeMap<String, String>) {
    for (k, v) in echo {
        println!("{k} = {v}");
    }
}

/// Graphs named on the command line.
fn named_graphs(spec: &str) -> Result<Vec<(String, Graph)>> {
    let size = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("graph `{spec}`: {e}")));
    if let Some(n) = spec.strip_prefix("all") {
        return small_connected_graphs(size(n)?);
    }
    let g = match spec.split_once(':') {
        Some(("complete", n)) => complete_graph(size(n)?),
        Some(("path", n)) => path_graph(size(n)?),
        Some(("star", d)) => {
            let d = size(d)?;
            if d == 0 {
                return Err(Error::Parse("a star needs at least one leaf".into()));
            }
            make_star(d)
        }
        _ => read_graph(BufReader::new(File::open(spec)?), BuildLimits::default())?,
    };
    Ok(vec![(spec.to_string(), g)])
}
