//! graph6 encoding: a size header `N(n)` followed by the upper triangle of
//! the adjacency matrix in column-major order, packed six bits per printable
//! byte with offset 63.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedGraph6(msg.into())
}

fn decode_size(bytes: &[u8]) -> Result<(usize, usize)> {
    let sextet = |i: usize| -> Result<usize> {
        bytes
            .get(i)
            .map(|&b| usize::from(b - 63))
            .ok_or_else(|| malformed("truncated size header"))
    };
    match bytes.first() {
        None => Err(malformed("empty input")),
        Some(&b) if b < 126 => Ok((usize::from(b - 63), 1)),
        Some(_) if bytes.get(1) == Some(&126) => {
            let mut n = 0;
            for i in 2..8 {
                n = (n << 6) | sextet(i)?;
            }
            Ok((n, 8))
        }
        Some(_) => {
            let mut n = 0;
            for i in 1..4 {
                n = (n << 6) | sextet(i)?;
            }
            Ok((n, 4))
        }
    }
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Decodes a graph6 string (one graph, optional `>>graph6<<` prefix,
/// surrounding whitespace ignored).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(b) = bytes.iter().find(|b| !(63..=126).contains(*b)) {
        return Err(malformed(format!(
            "byte {b:#04x} outside the printable range 63..=126"
        )));
    }
    let (n, offset) = decode_size(bytes)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let body = &bytes[offset..];
    if body.len() != nbits.div_ceil(6) {
        return Err(malformed(format!(
            "expected {} data bytes for n = {n}, found {}",
            nbits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (nbits..body.len() * 6).any(bit) {
        return Err(malformed("nonzero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

/// Encodes a graph as graph6 without header or trailing newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}
