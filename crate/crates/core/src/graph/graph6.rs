//! graph6 encoding: a size header `N(n)` followed by the upper triangle of
//! the adjacency matrix in column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`),
//! packed big-endian into 6-bit groups, each offset by 63.

use thiserror::Error;

use super::{Graph, GraphError, MAX_VERTICES};

const BIAS: u8 = 63;
const HEADER_PREFIX: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("malformed graph6 size header")]
    MalformedHeader,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 alphabet")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6 body too short: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} unexpected bytes after the graph6 body")]
    TrailingGarbage(usize),
    #[error("padding bits in the final graph6 byte are not zero")]
    NonCanonicalPadding,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn push_size(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    }
}

/// Returns `(n, header length)`.
fn read_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let sextet = |i: usize| -> Result<usize, Graph6Error> {
        match bytes.get(i) {
            Some(&b) if (BIAS..=126).contains(&b) => Ok((b - BIAS) as usize),
            _ => Err(Graph6Error::MalformedHeader),
        }
    };
    let fold = |range: std::ops::Range<usize>| -> Result<usize, Graph6Error> {
        range.map(sextet).try_fold(0usize, |acc, s| Ok((acc << 6) | s?))
    };
    match bytes.first() {
        Some(&b) if (BIAS..126).contains(&b) => Ok(((b - BIAS) as usize, 1)),
        Some(&126) if bytes.get(1) == Some(&126) => Ok((fold(2..8)?, 8)),
        Some(&126) => Ok((fold(1..4)?, 4)),
        _ => Err(Graph6Error::MalformedHeader),
    }
}

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    // every byte is in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes one graph6 record (no trailing newline), with or without the
/// optional `>>graph6<<` prefix.
pub fn decode_graph6(text: &[u8]) -> Result<Graph, Graph6Error> {
    let bytes = text
        .strip_prefix(HEADER_PREFIX.as_bytes())
        .unwrap_or(text);
    let (n, header_len) = read_size(bytes)?;
    if n == 0 {
        return Err(GraphError::NoVertices.into());
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }
    let bits = n * (n - 1) / 2;
    let body_len = bits.div_ceil(6);
    let body = &bytes[header_len..];
    if let Some(offset) = body.iter().position(|b| !(BIAS..=126).contains(b)) {
        return Err(Graph6Error::InvalidByte {
            offset: header_len + offset,
            byte: body[offset],
        });
    }
    if body.len() < body_len {
        return Err(Graph6Error::Truncated {
            expected: body_len,
            found: body.len(),
        });
    }
    if body.len() > body_len {
        return Err(Graph6Error::TrailingGarbage(body.len() - body_len));
    }
    let pad = body_len * 6 - bits;
    if pad > 0 && (body[body_len - 1] - BIAS) & ((1 << pad) - 1) != 0 {
        return Err(Graph6Error::NonCanonicalPadding);
    }

    let mut rows = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let sextet = body[k / 6] - BIAS;
            if sextet >> (5 - k % 6) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}
