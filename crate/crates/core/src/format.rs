//! Text formats: graphs (edge list or DIMACS), instance files, certificates.
//!
//! An instance file is a graph file preceded by comment lines of the form
//! `# key=value` for `variant`, `k`, `t` and `terminal`. Other comments are
//! ignored, so an instance file is also a valid graph file.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::instance::{Instance, UnknownVariant, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("vertex id {vertex} out of range (n = {n})")]
    OutOfRange { vertex: i64, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header")]
    MissingHeader,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Yields `(line number, content)` with `#` comments and DIMACS `c` lines removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() || body == "c" || body.starts_with("c ") || body.starts_with("c\t") {
            None
        } else {
            Some((i + 1, body))
        }
    })
}

fn parse_ids<const N: usize>(
    fields: &[&str],
    line: usize,
    body: &str,
) -> Result<[i64; N], ParseError> {
    if fields.len() != N {
        return Err(err(line, ParseErrorKind::MalformedLine(body.to_string())));
    }
    let mut out = [0i64; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse()
            .map_err(|_| err(line, ParseErrorKind::MalformedLine(body.to_string())))?;
    }
    Ok(out)
}

/// Parses the edge-list format (`n m` then `u v` per line, 0-based) or the
/// DIMACS form (`p edge n m`, `e u v`, 1-based).
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(err(1, ParseErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let dimacs = fields.first() == Some(&"p");
    let counts = if dimacs {
        if fields.len() != 4 {
            return Err(err(
                hline,
                ParseErrorKind::MalformedHeader(header.to_string()),
            ));
        }
        &fields[2..]
    } else {
        &fields[..]
    };
    let [n, m] = parse_ids::<2>(counts, hline, header)
        .map_err(|_| err(hline, ParseErrorKind::MalformedHeader(header.to_string())))?;
    if n < 0 || m < 0 {
        return Err(err(
            hline,
            ParseErrorKind::MalformedHeader(header.to_string()),
        ));
    }
    let (n, m) = (n as usize, m as usize);
    let offset = if dimacs { 1 } else { 0 };

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, body) in lines {
        last_line = line;
        let mut fields: Vec<&str> = body.split_whitespace().collect();
        if dimacs {
            if fields.first() != Some(&"e") {
                return Err(err(line, ParseErrorKind::MalformedLine(body.to_string())));
            }
            fields.remove(0);
        }
        let [a, b] = parse_ids::<2>(&fields, line, body)?;
        let mut ends = [0usize; 2];
        for (slot, raw) in ends.iter_mut().zip([a, b]) {
            let id = raw - offset;
            if id < 0 || id as usize >= n {
                return Err(err(line, ParseErrorKind::OutOfRange { vertex: raw, n }));
            }
            *slot = id as usize;
        }
        let [u, v] = ends;
        if u == v {
            return Err(err(line, ParseErrorKind::SelfLoop(u)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(line, ParseErrorKind::DuplicateEdge(u.min(v), u.max(v))));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(
            last_line,
            ParseErrorKind::EdgeCount {
                expected: m,
                found: edges.len(),
            },
        ));
    }
    Ok(Graph::from_edges(n, edges).expect("validated above"))
}

/// Canonical edge-list text: header, then edges sorted with `u < v`.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parameters read from an instance file's comment block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub variant: Option<Variant>,
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub terminal: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: Graph,
    pub params: Params,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let graph = parse_graph(text)?;
    let mut params = Params::default();
    for (i, raw) in text.lines().enumerate() {
        let Some(pos) = raw.find('#') else { continue };
        let Some((key, value)) = raw[pos + 1..].trim().split_once('=') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = || {
            err(
                i + 1,
                ParseErrorKind::BadParameter(format!("{key}={value}")),
            )
        };
        match key {
            "variant" => params.variant = Some(value.parse().map_err(|_: UnknownVariant| bad())?),
            "k" => params.k = Some(value.parse().map_err(|_| bad())?),
            "t" => params.t = Some(value.parse().map_err(|_| bad())?),
            "terminal" => params.terminal = Some(value.parse().map_err(|_| bad())?),
            _ => {}
        }
    }
    Ok(InstanceFile { graph, params })
}

/// Parameter block, extra comments, then the graph.
pub fn write_instance(inst: &Instance, comments: &[String]) -> String {
    let mut out = format!(
        "# variant={}\n# k={}\n# t={}\n",
        inst.variant, inst.k, inst.t
    );
    if let Some(s) = inst.terminal {
        let _ = writeln!(out, "# terminal={s}");
    }
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str(&write_graph(&inst.graph));
    out
}

/// One vertex id per line; `#` comments and blank lines allowed.
pub fn parse_certificate(text: &str) -> Result<VertexSet, ParseError> {
    let mut x = VertexSet::new();
    for (line, body) in content_lines(text) {
        let v: usize = body
            .parse()
            .map_err(|_| err(line, ParseErrorKind::MalformedLine(body.to_string())))?;
        if !x.insert(v) {
            return Err(err(line, ParseErrorKind::DuplicateVertex(v)));
        }
    }
    Ok(x)
}

pub fn write_certificate(x: &VertexSet) -> String {
    x.iter().map(|v| format!("{v}\n")).collect()
}
