//! Instance text format.
//!
//! ```text
//! n s m
//! u v w      (m lines, 0-based indices, decimal integers)
//! ```
//!
//! Fields are whitespace separated, lines end with LF.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::WeightedBipartiteGraph;

pub fn write_instance<W: Write>(graph: &WeightedBipartiteGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", graph.n(), graph.s(), graph.m())?;
    for (u, v, w) in graph.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_instance<R: BufRead>(input: R) -> Result<WeightedBipartiteGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        match header {
            None => {
                let n = parse_field(fields[0], lineno)?;
                let s = parse_field(fields[1], lineno)?;
                let m = parse_field(fields[2], lineno)?;
                header = Some((n, s, m));
                edges.reserve(m);
            }
            Some(_) => {
                let u = parse_field(fields[0], lineno)?;
                let v = parse_field(fields[1], lineno)?;
                let w = parse_field(fields[2], lineno)?;
                edges.push((u, v, w));
            }
        }
    }
    let (n, s, m) = header.ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: edges.len() + 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    WeightedBipartiteGraph::new(n, s, &edges)
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid integer {field:?}"),
    })
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<WeightedBipartiteGraph> {
    let file = std::fs::File::open(path)?;
    read_instance(std::io::BufReader::new(file))
}

pub fn save_instance(graph: &WeightedBipartiteGraph, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_instance(graph, std::io::BufWriter::new(file))
}
