//! The line-oriented `rcol v1` colouring format.
//!
//! ```text
//! rcol 1
//! complete 4
//! 0 1 2
//! ...
//! ```
//!
//! One `u v c` line per host edge with `u < v`. Lines are written in
//! lexicographic `(u, v)` order with raw colour ids.

use std::fmt::Write as _;

use crate::colouring::{ColouringBuilder, HostGraph, HostKind, ProperEdgeColouring};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<ProperEdgeColouring> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let parse_err = |line: usize, detail: String| Error::Parse { line: line + 1, detail };

    let (i, header) = lines.next().ok_or_else(|| parse_err(0, "empty input".into()))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["rcol", "1"] {
        return Err(parse_err(i, format!("expected 'rcol 1', found '{}'", header.trim())));
    }

    let (i, host_line) = lines.next().ok_or_else(|| parse_err(i + 1, "missing host line".into()))?;
    let tokens: Vec<&str> = host_line.split_whitespace().collect();
    let host = match tokens.as_slice() {
        [kind, n] => {
            let n: usize = n.parse().map_err(|e| parse_err(i, format!("bad vertex count: {e}")))?;
            match *kind {
                "complete" => HostGraph::complete(n)?,
                "bipartite" => HostGraph::bipartite(n)?,
                other => return Err(parse_err(i, format!("unknown host kind '{other}'"))),
            }
        }
        _ => return Err(parse_err(i, "expected 'complete <n>' or 'bipartite <n>'".into())),
    };

    let mut builder = ColouringBuilder::new(host);
    for (i, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(i, format!("expected 'u v c', found '{}'", line.trim())));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| parse_err(i, format!("bad integer '{s}': {e}")));
        let (u, v, c) = (num(fields[0])? as usize, num(fields[1])? as usize, num(fields[2])?);
        if u >= v {
            return Err(parse_err(i, format!("edge endpoints must satisfy u < v, found {u} {v}")));
        }
        builder.set(u, v, c).map_err(|e| parse_err(i, e.to_string()))?;
    }
    builder.finish()
}

pub fn serialize(colouring: &ProperEdgeColouring) -> String {
    let host = colouring.host();
    let total = host.vertex_count();
    let mut out = String::with_capacity(host.edge_count() * 12 + 32);
    out.push_str("rcol 1\n");
    let kind = match host.kind {
        HostKind::Complete => "complete",
        HostKind::CompleteBipartite => "bipartite",
    };
    writeln!(out, "{kind} {}", host.n).unwrap();
    for u in 0..total {
        for v in u + 1..total {
            if let Some(c) = colouring.colour(u, v) {
                writeln!(out, "{u} {v} {}", colouring.raw_id(c)).unwrap();
            }
        }
    }
    out
}
