//! Graph serialization: header-free graph6 and a plain edge-list format.

use rtt_core::{Graph, GraphError};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("byte {byte}: {detail}")]
    Graph6 { byte: usize, detail: String },
    #[error("unknown format {0:?} (expected graph6 or edge-list)")]
    UnknownFormat(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Supported on-disk graph formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

impl std::str::FromStr for GraphFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, FormatError> {
        match s {
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            "edge-list" | "edgelist" => Ok(GraphFormat::EdgeList),
            other => Err(FormatError::UnknownFormat(other.to_string())),
        }
    }
}

/// Encodes a graph in header-free graph6: the vertex count as `chr(n+63)`
/// (or `~` plus three 6-bit digits for `n > 62`), then the upper-triangle
/// adjacency bits in column-major order, packed big-endian into 6-bit
/// groups, each offset by 63.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push('~');
        out.push((((n >> 12) & 63) as u8 + 63) as char);
        out.push((((n >> 6) & 63) as u8 + 63) as char);
        out.push(((n & 63) as u8 + 63) as char);
    }
    let mut acc: u8 = 0;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            bits += 1;
            if bits == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push(((acc << (6 - bits)) + 63) as char);
    }
    out
}

/// Decodes a header-free graph6 string produced by [`encode_graph6`] or any
/// conforming encoder.
pub fn decode_graph6(s: &str) -> Result<Graph, FormatError> {
    let bytes = s.trim_end().as_bytes();
    let digit = |pos: usize| -> Result<usize, FormatError> {
        let b = *bytes.get(pos).ok_or(FormatError::Graph6 {
            byte: pos,
            detail: "truncated input".to_string(),
        })?;
        if !(63..=126).contains(&b) {
            return Err(FormatError::Graph6 {
                byte: pos,
                detail: format!("byte {b} outside printable graph6 range 63..=126"),
            });
        }
        Ok((b - 63) as usize)
    };
    let (n, mut pos) = if bytes.first() == Some(&b'~') {
        if bytes.get(1) == Some(&b'~') {
            return Err(FormatError::Graph6 {
                byte: 1,
                detail: "8-byte vertex counts are not supported".to_string(),
            });
        }
        let n = (digit(1)? << 12) | (digit(2)? << 6) | digit(3)?;
        (n, 4)
    } else {
        (digit(0)?, 1)
    };
    let mut edges = Vec::new();
    let mut acc = 0usize;
    let mut bits = 0usize;
    for j in 1..n {
        for i in 0..j {
            if bits == 0 {
                acc = digit(pos)?;
                pos += 1;
                bits = 6;
            }
            if acc & (1 << (bits - 1)) != 0 {
                edges.push((i, j));
            }
            bits -= 1;
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Writes the edge-list format: a `n m` header line followed by one `u v`
/// line per edge with `u < v`, all 0-based.
pub fn encode_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the edge-list format, reporting the offending line on error.
pub fn decode_edge_list(s: &str) -> Result<Graph, FormatError> {
    let err = |line: usize, detail: String| FormatError::Parse { line, detail };
    let mut lines = s.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty input".to_string()))?;
    let mut head = header.split_whitespace();
    let parse = |tok: Option<&str>, line: usize, what: &str| -> Result<usize, FormatError> {
        let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| err(line, format!("bad {what} {tok:?}")))
    };
    let n = parse(head.next(), 1, "vertex count")?;
    let m = parse(head.next(), 1, "edge count")?;
    if head.next().is_some() {
        return Err(err(1, "trailing tokens after `n m` header".to_string()));
    }
    let mut edges = Vec::with_capacity(m);
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut toks = raw.split_whitespace();
        let u = parse(toks.next(), line, "endpoint")?;
        let v = parse(toks.next(), line, "endpoint")?;
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens after edge".to_string()));
        }
        if u >= v {
            return Err(err(line, format!("endpoints must satisfy u < v, got {u} {v}")));
        }
        if v >= n {
            return Err(err(line, format!("endpoint {v} out of range for n = {n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(
            1,
            format!("header promised {m} edges, found {}", edges.len()),
        ));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Reads a graph file in the given format.
pub fn read_graph(path: &Path, format: GraphFormat) -> Result<Graph, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match format {
        GraphFormat::Graph6 => decode_graph6(&text),
        GraphFormat::EdgeList => decode_edge_list(&text),
    }
}

/// Writes a graph file in the given format.
pub fn write_graph(path: &Path, g: &Graph, format: GraphFormat) -> Result<(), FormatError> {
    let text = match format {
        GraphFormat::Graph6 => {
            let mut s = encode_graph6(g);
            s.push('\n');
            s
        }
        GraphFormat::EdgeList => encode_edge_list(g),
    };
    std::fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
