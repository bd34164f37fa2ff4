//! Plain-text edge lists: a first line `n m`, then `m` lines `a b` with
//! 0-based vertex indices.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize), EdgeListError> {
    let syntax = |message: &str| EdgeListError::Syntax {
        line: line_no,
        message: message.to_string(),
    };
    let mut fields = line.split_whitespace();
    let a = fields
        .next()
        .ok_or_else(|| syntax("expected two integers"))?
        .parse()
        .map_err(|_| syntax("not a non-negative integer"))?;
    let b = fields
        .next()
        .ok_or_else(|| syntax("expected two integers"))?
        .parse()
        .map_err(|_| syntax("not a non-negative integer"))?;
    if fields.next().is_some() {
        return Err(syntax("expected exactly two integers"));
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line_no, header) = lines.next().ok_or(EdgeListError::Syntax {
        line: 1,
        message: "missing \"n m\" header".to_string(),
    })?;
    let (n, m) = parse_pair(header, line_no)?;
    let edges = lines
        .map(|(line_no, l)| parse_pair(l, line_no))
        .collect::<Result<Vec<_>, _>>()?;
    if edges.len() != m {
        return Err(EdgeListError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edge_list(n, &edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}
