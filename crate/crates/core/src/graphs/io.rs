//! Plain edge-list text format and DIMACS import.
//!
//! Text format: a header line `n m`, then `m` lines `u v` with 0-based
//! vertices. Lines `#part i: v1 v2 ...` declare a clique partition; other
//! lines starting with `#` are ignored. DIMACS input (`p edge n m` and
//! 1-based `e u v` lines) is detected automatically.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::Graph;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let dimacs = text.lines().map(str::trim).any(|l| l.starts_with("p "));
    if dimacs {
        parse_dimacs(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("line {line}: missing field")))?;
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line}: expected a non-negative integer, got {tok:?}")))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#part") {
            let (idx, verts) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {lineno}: expected '#part i: ...'")))?;
            let idx = parse_usize(Some(idx.trim()), lineno)?;
            let verts = verts
                .split_whitespace()
                .map(|t| parse_usize(Some(t), lineno))
                .collect::<Result<Vec<_>>>()?;
            parts.push((idx, verts));
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let a = parse_usize(toks.next(), lineno)?;
        let b = parse_usize(toks.next(), lineno)?;
        if toks.next().is_some() {
            return Err(Error::Parse(format!("line {lineno}: trailing fields")));
        }
        if header.is_none() {
            header = Some((a, b));
        } else {
            edges.push((a, b));
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse("missing 'n m' header".into()))?;
    if edges.len() != m {
        return Err(Error::Parse(format!("header declares {m} edges, found {}", edges.len())));
    }
    let mut g = Graph::from_edges(n, &edges)?;
    if !parts.is_empty() {
        parts.sort_by_key(|(i, _)| *i);
        if parts.iter().enumerate().any(|(k, (i, _))| k != *i) {
            return Err(Error::Parse("clique parts must be numbered 0, 1, 2, ...".into()));
        }
        g.set_clique_partition(parts.into_iter().map(|(_, v)| v).collect())?;
    }
    Ok(g)
}

fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                let _format = toks.next();
                let n = parse_usize(toks.next(), lineno)?;
                g = Some(Graph::empty(n));
            }
            Some("e") => {
                let g = g
                    .as_mut()
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: edge before 'p' line")))?;
                let u = parse_usize(toks.next(), lineno)?;
                let v = parse_usize(toks.next(), lineno)?;
                if u == 0 || v == 0 {
                    return Err(Error::Parse(format!("line {lineno}: DIMACS vertices are 1-based")));
                }
                if u != v {
                    g.add_edge(u - 1, v - 1)?;
                }
            }
            Some(other) => return Err(Error::Parse(format!("line {lineno}: unknown DIMACS line type {other:?}"))),
        }
    }
    g.ok_or_else(|| Error::Parse("missing 'p' line".into()))
}

pub fn write_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n_vertices(), edges.len());
    if let Some(parts) = g.clique_partition() {
        for (i, part) in parts.iter().enumerate() {
            let vs: Vec<String> = part.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "#part {i}: {}", vs.join(" "));
        }
    }
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph_file(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph_file(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, write_graph(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_partition() {
        let mut g = Graph::complete(4);
        g.set_clique_partition(vec![vec![0, 1], vec![2, 3]]).unwrap();
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert!(back.same_edges(&g));
        assert_eq!(back.clique_partition(), g.clique_partition());
    }

    #[test]
    fn dimacs() {
        let g = parse_graph("c pentagon\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n").unwrap();
        assert!(g.same_edges(&Graph::cycle(5)));
    }

    #[test]
    fn malformed() {
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 0\n").is_err());
        assert!(parse_graph("3 1\n0 7\n").is_err());
        assert!(parse_graph("").is_err());
    }
}
