use crate::graph::Graph;
use thiserror::Error;

/// Decode guard: adjacency storage is quadratic in the vertex count, so
/// records above this size are refused rather than allocated.
pub const MAX_GRAPH6_N: usize = 16384;

/// Largest vertex count the (up to) 3-byte size field can carry.
const MAX_ENCODABLE_N: usize = 258_047;

pub const GRAPH6_HEADER: &str = ">>graph6<<";

/// Offsets are byte positions within the record handed to `decode_graph6`.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte 0x{byte:02x} at offset {offset} is outside the graph6 alphabet")]
    InvalidByte { byte: u8, offset: usize },
    #[error("record truncated: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("unexpected bytes after the record body, starting at offset {offset}")]
    TrailingBytes { offset: usize },
    #[error("nonzero padding bits in final body byte at offset {offset}")]
    TrailingBits { offset: usize },
    #[error("record encodes a graph on {n} vertices, above the supported maximum {max}")]
    UnsupportedSize { n: usize, max: usize },
    #[error("record encodes a graph with no vertices")]
    NoVertices,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: record {record:?}: {source}")]
pub struct Graph6FileError {
    pub line: usize,
    pub record: String,
    pub source: Graph6Error,
}

fn sixbits(b: u8, offset: usize) -> Result<u8, Graph6Error> {
    if (63..=126).contains(&b) {
        Ok(b - 63)
    } else {
        Err(Graph6Error::InvalidByte { byte: b, offset })
    }
}

/// Returns `(n, body_start)`.
fn parse_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let b0 = *bytes.first().ok_or(Graph6Error::Empty)?;
    if b0 != b'~' {
        return Ok((sixbits(b0, 0)? as usize, 1));
    }
    if bytes.get(1) == Some(&b'~') {
        // 8-byte size field: anything using it is far beyond the decode guard
        if bytes.len() < 8 {
            return Err(Graph6Error::Truncated {
                expected: 8,
                got: bytes.len(),
            });
        }
        let mut n: u64 = 0;
        for (i, &b) in bytes[2..8].iter().enumerate() {
            n = n << 6 | sixbits(b, 2 + i)? as u64;
        }
        return Err(Graph6Error::UnsupportedSize {
            n: n as usize,
            max: MAX_GRAPH6_N,
        });
    }
    if bytes.len() < 4 {
        return Err(Graph6Error::Truncated {
            expected: 4,
            got: bytes.len(),
        });
    }
    let mut n: usize = 0;
    for (i, &b) in bytes[1..4].iter().enumerate() {
        n = n << 6 | sixbits(b, 1 + i)? as usize;
    }
    Ok((n, 4))
}

/// Decodes a single graph6 record (no header, no line terminator).
pub fn decode_graph6(record: &str) -> Result<Graph, Graph6Error> {
    let bytes = record.as_bytes();
    let (n, body_start) = parse_size(bytes)?;
    if n == 0 {
        return Err(Graph6Error::NoVertices);
    }
    if n > MAX_GRAPH6_N {
        return Err(Graph6Error::UnsupportedSize {
            n,
            max: MAX_GRAPH6_N,
        });
    }
    let pair_count = n * (n - 1) / 2;
    let body_len = pair_count.div_ceil(6);
    let expected = body_start + body_len;
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            got: bytes.len(),
        });
    }
    let mut body = Vec::with_capacity(body_len);
    for (i, &b) in bytes[body_start..expected].iter().enumerate() {
        body.push(sixbits(b, body_start + i)?);
    }
    if bytes.len() > expected {
        return Err(Graph6Error::TrailingBytes { offset: expected });
    }

    // column-major upper triangle: bit k runs over (0,1),(0,2),(1,2),(0,3),...
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if body[k / 6] >> (5 - k % 6) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    for k in pair_count..body_len * 6 {
        if body[k / 6] >> (5 - k % 6) & 1 == 1 {
            return Err(Graph6Error::TrailingBits {
                offset: body_start + k / 6,
            });
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("decoded edge list is simple by construction"))
}

pub fn encode_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    if n > MAX_ENCODABLE_N {
        return Err(Graph6Error::UnsupportedSize {
            n,
            max: MAX_ENCODABLE_N,
        });
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(b'~');
        out.push(63 + (n >> 12 & 63) as u8);
        out.push(63 + (n >> 6 & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    Ok(String::from_utf8(out).expect("graph6 alphabet is ascii"))
}

/// Parses a whole graph6 file: optional `>>graph6<<` header, one record per
/// line, blank lines skipped. Each graph keeps its record string as an id.
pub fn parse_graph6_file(text: &str) -> Result<Vec<(String, Graph)>, Graph6FileError> {
    let text = text.strip_prefix(GRAPH6_HEADER).unwrap_or(text);
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let record = line.trim_end_matches('\r');
        if record.is_empty() {
            continue;
        }
        let g = decode_graph6(record).map_err(|source| Graph6FileError {
            line: i + 1,
            record: record.to_string(),
            source,
        })?;
        out.push((record.to_string(), g));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path, Graph};

    #[test]
    fn known_records_decode() {
        let k2 = decode_graph6("A_").unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);
        let e2 = decode_graph6("A?").unwrap();
        assert_eq!(e2.n(), 2);
        assert_eq!(e2.edge_count(), 0);
        let k3 = decode_graph6("Bw").unwrap();
        assert_eq!(k3.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4
        let g = decode_graph6("DQc").unwrap();
        assert_eq!(g.edges(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn known_records_encode() {
        assert_eq!(encode_graph6(&complete(2).unwrap()).unwrap(), "A_");
        assert_eq!(encode_graph6(&complete(3).unwrap()).unwrap(), "Bw");
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode_graph6(&g).unwrap(), "DQc");
        assert_eq!(encode_graph6(&complete(1).unwrap()).unwrap(), "@");
    }

    #[test]
    fn round_trip_across_size_forms() {
        for g in [path(1), path(62), path(63), path(100), path(500)] {
            let g = g.unwrap();
            let enc = encode_graph6(&g).unwrap();
            let back = decode_graph6(&enc).unwrap();
            assert_eq!(back, g);
            assert_eq!(encode_graph6(&back).unwrap(), enc);
        }
        let enc = encode_graph6(&path(100).unwrap()).unwrap();
        assert!(enc.starts_with('~'));
        assert_eq!(enc.as_bytes()[1..4], [63, 63 + 1, 63 + 36]);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(decode_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(
            decode_graph6(" Bw"),
            Err(Graph6Error::InvalidByte {
                byte: b' ',
                offset: 0
            })
        );
        assert_eq!(
            decode_graph6("B w"),
            Err(Graph6Error::InvalidByte {
                byte: b' ',
                offset: 1
            })
        );
        assert_eq!(
            decode_graph6("B"),
            Err(Graph6Error::Truncated {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(decode_graph6("~"), Err(Graph6Error::Truncated { expected: 4, got: 1 }));
        assert_eq!(decode_graph6("Bw?"), Err(Graph6Error::TrailingBytes { offset: 2 }));
        // K2 body with a nonzero padding bit: 110000 -> 'o'
        assert_eq!(decode_graph6("Ao"), Err(Graph6Error::TrailingBits { offset: 1 }));
        assert_eq!(decode_graph6("?"), Err(Graph6Error::NoVertices));
        assert!(matches!(
            decode_graph6("~~??????"),
            Err(Graph6Error::UnsupportedSize { .. })
        ));
    }

    #[test]
    fn file_parsing() {
        let text = ">>graph6<<A_\nBw\r\n\nA?\n";
        let graphs = parse_graph6_file(text).unwrap();
        let ids: Vec<_> = graphs.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, vec!["A_", "Bw", "A?"]);
        assert_eq!(graphs[1].1.edge_count(), 3);

        let err = parse_graph6_file("A_\nB\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.record, "B");
    }
}
