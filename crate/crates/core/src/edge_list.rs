//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! r n m
//! a_1 a_2 ... a_r      (m lines, 1-based, increasing within a line)
//! ```
//!
//! Written files list edges in colex order. Several graphs in one stream are
//! separated by blank lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line_no: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("not a nonnegative integer: {tok:?}")))
        })
        .collect()
}

/// Parses one graph. Blank and `#` lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header `r n m`"))?;
    let head = numbers(header_line, header)?;
    let [r, n, m] = head[..] else {
        return Err(parse_err(header_line, "header must be `r n m`"));
    };
    let (r, n, m) = (r as usize, n as usize, m as usize);
    if r < 2 {
        return Err(parse_err(
            header_line,
            format!("uniformity must be >= 2 (got {r})"),
        ));
    }
    if n > 64 {
        return Err(Error::TooManyVertices(n));
    }

    let mut seen: Vec<(Edge, usize)> = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let vs = numbers(line_no, line)?;
        if vs.len() != r {
            return Err(parse_err(
                line_no,
                format!("expected {r} vertices, found {}", vs.len()),
            ));
        }
        if let Some(&bad) = vs.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(parse_err(
                line_no,
                format!("vertex {bad} outside 1..={n} in edge {line:?}"),
            ));
        }
        let vs: Vec<Vertex> = vs.into_iter().map(|v| v as Vertex).collect();
        let edge = Edge::new(&vs).map_err(|_| {
            parse_err(
                line_no,
                format!("vertices must be strictly increasing: {line:?}"),
            )
        })?;
        if let Some((_, first)) = seen.iter().find(|(e, _)| *e == edge) {
            return Err(parse_err(
                line_no,
                format!("duplicate edge {edge} (first on line {first})"),
            ));
        }
        seen.push((edge, line_no));
    }
    if seen.len() != m {
        return Err(parse_err(
            header_line,
            format!("header announces {m} edges, found {}", seen.len()),
        ));
    }
    Hypergraph::new(r, n, seen.into_iter().map(|(e, _)| e))
        .map_err(|e| parse_err(header_line, e.to_string()))
}

/// Parses a stream of graphs separated by blank lines.
pub fn parse_edge_lists(text: &str) -> Result<Vec<Hypergraph>> {
    let mut out = Vec::new();
    let mut block = String::new();
    let mut block_start = 0;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if block
                .lines()
                .any(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
            {
                out.push(parse_block(&block, block_start)?);
            }
            block.clear();
            block_start = idx + 1;
            continue;
        }
        block.push_str(line);
        block.push('\n');
    }
    if block
        .lines()
        .any(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
    {
        out.push(parse_block(&block, block_start)?);
    }
    Ok(out)
}

fn parse_block(block: &str, start: usize) -> Result<Hypergraph> {
    parse_edge_list(block).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line: line + start,
            message,
        },
        other => other,
    })
}

/// Writes the header and the edges in colex order.
pub fn write_edge_list(g: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.r(), g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{colex_graph, complete_graph};

    #[test]
    fn reads_complete_graph() {
        let g = parse_edge_list("3 4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n").unwrap();
        assert_eq!(g, complete_graph(4, 3).unwrap());
    }

    #[test]
    fn comments_and_order() {
        let g = parse_edge_list("# K4 minus\n3 4 2\n# edges\n1 3 4\n\n1 2 3\n").unwrap();
        assert_eq!(write_edge_list(&g), "3 4 2\n1 2 3\n1 3 4\n");
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_edge_list("3 4 2\n1 2 3\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("duplicate"));

        let err = parse_edge_list("3 4 1\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(err.to_string().contains("vertex 0"));

        let err = parse_edge_list("3 4 1\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_edge_list("3 4 1\n2 1 3\n").unwrap_err();
        assert!(err.to_string().contains("increasing"));

        assert!(parse_edge_list("3 4 2\n1 2 3\n").is_err());
        assert!(parse_edge_list("3 4\n").is_err());
        assert!(parse_edge_list("3 4 1\n1 2 x\n").is_err());
        assert!(matches!(
            parse_edge_list("3 65 0\n"),
            Err(Error::TooManyVertices(65))
        ));
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn stream_of_graphs() {
        let a = colex_graph(3, 5).unwrap();
        let b = complete_graph(4, 3).unwrap();
        let text = format!("{}\n{}", write_edge_list(&a), write_edge_list(&b));
        assert_eq!(parse_edge_lists(&text).unwrap(), vec![a, b]);

        let err = parse_edge_lists("3 4 1\n1 2 3\n\n3 4 1\n1 2 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
    }
}
