//! Text graph format.
//!
//! ```text
//! hrg v1 alpha=<f> mode=<inf|wrap> n=<f> N=<int>
//! <id> <x> <h>
//! ...
//! ```
//!
//! Edges are not stored; loading rebuilds them from the coordinates. Floats
//! are written in shortest round-trip form so a reload reproduces the
//! adjacency exactly. Infinite-window graphs write `n=inf`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::HalfPlanePoint;

use super::{build_adjacency, BuildLimits, Graph, Mode};

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    let emb = g.embedding().ok_or_else(|| Error::domain("only geometric graphs can be written"))?;
    let (mode, n) = match emb.mode {
        Mode::Infinite => ("inf", f64::INFINITY),
        Mode::Wrapped { n } => ("wrap", n),
    };
    writeln!(out, "hrg v1 alpha={} mode={mode} n={n} N={}", emb.alpha, emb.points.len())?;
    for (id, p) in emb.points.iter().enumerate() {
        writeln!(out, "{id} {} {}", p.x, p.h)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub fn read_graph<R: BufRead>(input: R, limits: BuildLimits) -> Result<Graph> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty file"))??;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("hrg") || fields.next() != Some("v1") {
        return Err(parse_err(1, "expected `hrg v1` header"));
    }
    let (mut alpha, mut mode, mut n, mut count) = (None, None, None, None);
    for kv in fields {
        let (key, value) = kv.split_once('=').ok_or_else(|| parse_err(1, format!("bad field `{kv}`")))?;
        let float = |v: &str| v.parse::<f64>().map_err(|e| parse_err(1, format!("{key}: {e}")));
        match key {
            "alpha" => alpha = Some(float(value)?),
            "n" => n = Some(float(value)?),
            "mode" => mode = Some(value.to_owned()),
            "N" => count = Some(value.parse::<usize>().map_err(|e| parse_err(1, format!("N: {e}")))?),
            _ => return Err(parse_err(1, format!("unknown field `{key}`"))),
        }
    }
    let missing = |what| parse_err(1, format!("missing {what}"));
    let alpha = alpha.ok_or_else(|| missing("alpha"))?;
    let count = count.ok_or_else(|| missing("N"))?;
    let mode = match mode.as_deref() {
        Some("inf") => Mode::Infinite,
        Some("wrap") => Mode::Wrapped { n: n.ok_or_else(|| missing("n"))? },
        Some(other) => return Err(parse_err(1, format!("unknown mode `{other}`"))),
        None => return Err(missing("mode")),
    };
    if count > limits.max_vertices {
        return Err(Error::capacity(format!("{count} vertices exceed the budget")));
    }
    let mut points = Vec::with_capacity(count);
    for (k, line) in lines.enumerate() {
        let line = line?;
        let lineno = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = |what: &str| parts.next().ok_or_else(|| parse_err(lineno, format!("missing {what}")));
        let id: usize = next("id")?.parse().map_err(|e| parse_err(lineno, e))?;
        let x: f64 = next("x")?.parse().map_err(|e| parse_err(lineno, e))?;
        let h: f64 = next("h")?.parse().map_err(|e| parse_err(lineno, e))?;
        if id != points.len() {
            return Err(parse_err(lineno, format!("expected id {}, found {id}", points.len())));
        }
        points.push(HalfPlanePoint::new(x, h));
    }
    if points.len() != count {
        return Err(Error::Parse(format!("header says N={count}, found {} vertices", points.len())));
    }
    build_adjacency(points, mode, alpha, limits)
}
