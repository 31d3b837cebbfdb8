//! End-to-end runs of the `hrg` binary.

use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use hypercontact::graph::io::read_graph;
use hypercontact::graph::BuildLimits;

fn hrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrg")).args(args).output().expect("binary runs")
}

fn json_without_wall_time(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

#[test]
fn estimate_gamma_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let run = || {
        let o = hrg(&[
            "estimate-gamma",
            "--alpha",
            "0.7",
            "--lambda",
            "0.8,0.6",
            "--trials",
            "40",
            "--half-width",
            "300",
            "--mass-cap",
            "100",
            "--seed",
            "9",
            "--threads",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let echo = String::from_utf8(o.stdout).unwrap();
        assert!(echo.contains("seed = 9"), "{echo}");
        (
            fs::read_to_string(out.join("estimate-gamma.csv")).unwrap(),
            json_without_wall_time(&out.join("estimate-gamma.json")),
        )
    };
    let (csv, json) = run();
    // the second run overwrites the first in the same directory
    assert_eq!(run(), (csv.clone(), json));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().next().unwrap().starts_with("lambda,alpha,trials"));
    // nothing else is written into the output directory
    let mut names: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["estimate-gamma.csv", "estimate-gamma.json"]);
}

#[test]
fn gen_graph_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.hrg");
    let o = hrg(&["gen-graph", "--n", "500", "--alpha", "0.8", "--seed", "3", "--out", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = read_graph(BufReader::new(fs::File::open(&file).unwrap()), BuildLimits::default()).unwrap();
    assert!(g.vertex_count() > 300);
    g.validate().unwrap();
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# small run\ncommon.seed = 4\noracle-check.graph = complete:3\noracle-check.trials = 200\n")
        .unwrap();
    let out = dir.path().join("out");
    let o =
        hrg(&["oracle-check", "--config", cfg.to_str().unwrap(), "--trials", "300", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let echo = String::from_utf8(o.stdout).unwrap();
    assert!(echo.contains("seed = 4") && echo.contains("trials = 300") && echo.contains("complete:3"), "{echo}");

    fs::write(&cfg, "oracle-check.bogus = 1\n").unwrap();
    let o = hrg(&["oracle-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn domain_errors_exit_with_code_two() {
    let o = hrg(&["estimate-gamma", "--alpha", "1.2", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("(1/2, 1)"), "{msg}");
    assert_eq!(hrg(&["no-such-command"]).status.code(), Some(2));
}
