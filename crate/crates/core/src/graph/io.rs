//! Edge-list and graph6 readers and writers.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::Graph;
use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(Format::EdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

impl Format {
    /// Guesses the format from a file extension, defaulting to edge lists.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("g6") | Some("graph6") => Format::Graph6,
            _ => Format::EdgeList,
        }
    }
}

pub fn read_graph(path: &Path, format: Format) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text, format)
}

pub fn write_graph(path: &Path, g: &Graph, format: Format) -> Result<(), GraphError> {
    fs::write(path, format_graph(g, format))?;
    Ok(())
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => parse_graph6(text),
    }
}

pub fn format_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => to_edge_list(g),
        Format::Graph6 => {
            let mut s = to_graph6(g);
            s.push('\n');
            s
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses `u v` lines with optional `p <n> <m>` header and `#` comments.
/// Without a header the vertex count is one more than the largest id.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "p" {
            if header.is_some() || !edges.is_empty() {
                return Err(parse_err(line_no, "header must come before any edge"));
            }
            if tokens.len() != 3 {
                return Err(parse_err(line_no, "header must be 'p <n> <m>'"));
            }
            let n = parse_num(tokens[1], line_no)?;
            let m = parse_num(tokens[2], line_no)?;
            header = Some((n, m, line_no));
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(line_no, format!("expected two vertex ids, found '{line}'")));
        }
        let u = parse_num(tokens[0], line_no)?;
        let v = parse_num(tokens[1], line_no)?;
        if let Some((n, _, _)) = header {
            if u >= n || v >= n {
                return Err(parse_err(
                    line_no,
                    format!("vertex {} out of range for {n} vertices", u.max(v)),
                ));
            }
        }
        if u == v {
            return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
        }
        max_id = Some(max_id.map_or(u.max(v), |x| x.max(u).max(v)));
        edges.push((u, v, line_no));
    }
    let n = match header {
        Some((n, _, _)) => n,
        None => max_id.map_or(0, |x| x + 1),
    };
    if let Some((_, m, line_no)) = header {
        if m != edges.len() {
            return Err(parse_err(
                line_no,
                format!("header declares {m} edges but {} follow", edges.len()),
            ));
        }
    }
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for &(u, v, line_no) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line_no, format!("duplicate edge {u}-{v}")));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

fn parse_num(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("malformed token '{tok}'")))
}

/// Edge list with a `p <n> <m>` header so isolated vertices survive.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Encodes a graph in graph6.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is printable ASCII")
}

/// Decodes the first graph6 record in `text`, skipping an optional header.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let mut line_no = 0;
    let mut record = None;
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if !t.is_empty() {
            line_no = i + 1;
            record = Some(t);
            break;
        }
    }
    let record = record.ok_or_else(|| parse_err(1, "empty graph6 input"))?;
    let record = record.strip_prefix(">>graph6<<").unwrap_or(record);
    let bytes = record.as_bytes();
    let err = |pos: usize, msg: &str| parse_err(line_no, format!("byte {pos}: {msg}"));
    for (pos, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(pos, "character outside the graph6 range"));
        }
    }
    let (n, mut pos) = match bytes.first() {
        None => return Err(err(0, "missing vertex count")),
        Some(126) if bytes.get(1) == Some(&126) => {
            if bytes.len() < 8 {
                return Err(err(bytes.len(), "truncated vertex count"));
            }
            let n = bytes[2..8]
                .iter()
                .fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
            (n, 8)
        }
        Some(126) => {
            if bytes.len() < 4 {
                return Err(err(bytes.len(), "truncated vertex count"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(err(
            bytes.len(),
            &format!("expected {need} adjacency bytes, found {}", bytes.len() - pos),
        ));
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit == 0 {
                cur = bytes[pos] - 63;
                pos += 1;
            }
            if (cur >> (5 - bit)) & 1 == 1 {
                edges.push((i, j));
            }
            bit = (bit + 1) % 6;
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_inference_and_header() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g, Graph::path(3));
        let g = parse_edge_list("# comment\np 5 2\n0 1\n1 2 # tail\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        let e = parse_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 2, .. }), "{e}");
        let e = parse_edge_list("0 1\n2 3\n1 0\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 3, .. }), "{e}");
        let e = parse_edge_list("p 3 1\n0 3\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 2, .. }), "{e}");
        let e = parse_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 1, .. }), "{e}");
    }

    #[test]
    fn graph6_known_encodings() {
        // Reference strings from the format description.
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        let p = Graph::petersen();
        let back = parse_graph6(&to_graph6(&p)).unwrap();
        assert_eq!(back, p);
        assert_eq!(parse_graph6(">>graph6<<Bg\n").unwrap(), Graph::path(3));
        assert_eq!(parse_graph6("Bw").unwrap(), Graph::complete(3));
    }

    #[test]
    fn graph6_long_counts() {
        for n in [62, 63, 100, 300] {
            let g = Graph::cycle(n);
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("C !").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("graphcanon-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let k4 = Graph::complete(4);
        for (name, fmt) in [("k4.el", Format::EdgeList), ("k4.g6", Format::Graph6)] {
            let path = dir.join(name);
            write_graph(&path, &k4, fmt).unwrap();
            assert_eq!(read_graph(&path, fmt).unwrap(), k4);
        }
        fs::remove_dir_all(&dir).ok();
    }
}
