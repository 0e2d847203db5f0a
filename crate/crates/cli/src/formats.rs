//! Text formats for graphs, update streams, queries and answers.
//!
//! Graph and query files:
//!
//! ```text
//! # comment
//! t <num_vertices> <num_edges>     (optional)
//! v <id> <label>
//! e <u> <v>
//! ```
//!
//! Stream files hold one update per line, `+ <u> <v> [<label_u> <label_v>]`
//! or `- <u> <v>`. Trailing extra fields are ignored everywhere.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dsm_core::graph::{GraphError, Label, UpdateKind, UpdateOp, VertexId};
use dsm_core::matcher::UpdateReport;
use dsm_core::query::QueryError;
use dsm_core::{DynamicGraph, Mapping, QueryGraph, QueryId};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: edge references undeclared vertex {vertex}")]
    UndeclaredVertex { line: usize, vertex: u32 },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("header declares {declared} {what}, file has {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("invalid query: {0}")]
    Query(#[from] QueryError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn field<T: std::str::FromStr>(fields: &[&str], i: usize, line: usize, what: &str) -> Result<T, FormatError> {
    let raw = fields
        .get(i)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{raw}`")))
}

pub fn parse_graph(text: &str) -> Result<DynamicGraph, FormatError> {
    let mut g = DynamicGraph::new();
    let mut header = None;
    let mut edges = Vec::new();
    for (line, f) in records(text) {
        match f[0] {
            "t" => {
                let n: usize = field(&f, 1, line, "vertex count")?;
                let m: usize = field(&f, 2, line, "edge count")?;
                header = Some((n, m));
            }
            "v" => {
                let id: u32 = field(&f, 1, line, "vertex id")?;
                let label: u32 = field(&f, 2, line, "label")?;
                g.add_vertex(VertexId(id), Label(label))
                    .map_err(|source| FormatError::Graph { line, source })?;
            }
            "e" => {
                let u: u32 = field(&f, 1, line, "vertex id")?;
                let v: u32 = field(&f, 2, line, "vertex id")?;
                edges.push((line, u, v));
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }
    for (line, u, v) in edges {
        for x in [u, v] {
            if !g.contains_vertex(VertexId(x)) {
                return Err(FormatError::UndeclaredVertex { line, vertex: x });
            }
        }
        g.add_edge(VertexId(u), VertexId(v))
            .map_err(|source| FormatError::Graph { line, source })?;
    }
    if let Some((n, m)) = header {
        if n != g.vertex_count() {
            return Err(FormatError::CountMismatch {
                what: "vertices",
                declared: n,
                found: g.vertex_count(),
            });
        }
        if m != g.edge_count() {
            return Err(FormatError::CountMismatch {
                what: "edges",
                declared: m,
                found: g.edge_count(),
            });
        }
    }
    Ok(g)
}

pub fn write_graph(g: &DynamicGraph) -> String {
    let mut out = String::new();
    writeln!(out, "t {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (v, l) in g.vertices() {
        writeln!(out, "v {v} {l}").unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    out
}

/// Updates in file order, stamped `1, 2, 3, ...`.
pub fn parse_stream(text: &str) -> Result<Vec<UpdateOp>, FormatError> {
    let mut ops = Vec::new();
    for (line, f) in records(text) {
        let u: u32 = field(&f, 1, line, "vertex id")?;
        let v: u32 = field(&f, 2, line, "vertex id")?;
        let mut op = match f[0] {
            "+" if f.len() >= 5 => {
                let lu: u32 = field(&f, 3, line, "label")?;
                let lv: u32 = field(&f, 4, line, "label")?;
                UpdateOp::insert_labeled(u, v, lu, lv)
            }
            "+" if f.len() == 4 => return Err(parse_err(line, "insert needs both labels or none")),
            "+" => UpdateOp::insert(u, v),
            "-" => UpdateOp::delete(u, v),
            other => return Err(parse_err(line, format!("unknown update `{other}`"))),
        };
        op.timestamp = ops.len() as u64 + 1;
        ops.push(op);
    }
    Ok(ops)
}

pub fn write_stream(ops: &[UpdateOp]) -> String {
    let mut out = String::new();
    for op in ops {
        match (op.kind, op.label_u, op.label_v) {
            (UpdateKind::Insert, Some(a), Some(b)) => writeln!(out, "+ {} {} {a} {b}", op.u, op.v),
            (UpdateKind::Insert, _, _) => writeln!(out, "+ {} {}", op.u, op.v),
            (UpdateKind::Delete, _, _) => writeln!(out, "- {} {}", op.u, op.v),
        }
        .unwrap();
    }
    out
}

/// A query file is a graph file; vertices are renumbered densely in
/// ascending id order and the file ids kept for output.
pub fn parse_query(text: &str) -> Result<QueryGraph, FormatError> {
    Ok(QueryGraph::from_graph(&parse_graph(text)?)?)
}

pub fn write_query(q: &QueryGraph) -> String {
    let mut out = String::new();
    writeln!(out, "t {} {}", q.len(), q.edges().len()).unwrap();
    for u in 0..q.len() {
        writeln!(out, "v {} {}", q.original_id(u), q.label(u)).unwrap();
    }
    for &(a, b) in q.edges() {
        writeln!(out, "e {} {}", q.original_id(a), q.original_id(b)).unwrap();
    }
    out
}

/// One `match ...` line per mapping, optionally prefixed.
pub fn write_answers<'a>(q: &QueryGraph, answers: impl IntoIterator<Item = &'a Mapping>, prefix: &str) -> String {
    let mut out = String::new();
    for m in answers {
        writeln!(out, "{prefix}{}", m.display(q)).unwrap();
    }
    out
}

/// Delta lines of one update: `@<t> q<id> +match ...` / `-match ...`.
pub fn write_report(report: &UpdateReport, queries: &[(QueryId, &QueryGraph)]) -> String {
    let mut out = String::new();
    let find = |id: QueryId| queries.iter().find(|(x, _)| *x == id).map(|(_, q)| *q);
    for (sign, list) in [("+", &report.added), ("-", &report.removed)] {
        for (id, ms) in list {
            let Some(q) = find(*id) else { continue };
            for m in ms {
                writeln!(out, "@{} q{id} {sign}{}", report.timestamp, m.display(q)).unwrap();
            }
        }
    }
    out
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<DynamicGraph, FormatError> {
    parse_graph(&read_file(path)?)
}

pub fn load_stream(path: &Path) -> Result<Vec<UpdateOp>, FormatError> {
    parse_stream(&read_file(path)?)
}

/// Loads query files; directories contribute their files in name order.
pub fn load_queries(paths: &[PathBuf]) -> Result<Vec<(PathBuf, QueryGraph)>, FormatError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|source| FormatError::Io {
                path: p.clone(),
                source,
            })?;
            let mut inner: Vec<PathBuf> = entries
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|x| x.is_file())
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    files
        .into_iter()
        .map(|f| {
            let q = parse_query(&read_file(&f)?)?;
            Ok((f, q))
        })
        .collect()
}
