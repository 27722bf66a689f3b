//! Text format for graph files.
//!
//! ```text
//! # a three-cycle with one particle
//! ports a b;
//! vertex x sigma={a};
//! vertex y;
//! vertex z;
//! edge x:a -- y:b;
//! edge y:a -- z:b;
//! edge z:a -- x:b;
//! pointer x;
//! ```
//!
//! A vertex without attributes carries the empty particle set. Other labels are
//! written `sigma={..}`, `unlabelled`, `matter` or `frontier`. Edges may carry
//! `delta=N`. The pointer may sit in invisible matter: `pointer x at mm.lm;`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{EdgeLabel, PortGraph, VertexLabel};
use crate::matter::MatterWord;
use crate::name::NameTerm;
use crate::pointed::CanonicalPointedGraph;
use crate::ports::{PortMask, PortSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphDocument {
    pub graph: PortGraph<NameTerm>,
    pub pointer: Option<NameTerm>,
    pub pointer_matter: Option<MatterWord>,
}

impl GraphDocument {
    pub fn new(graph: PortGraph<NameTerm>) -> Self {
        GraphDocument {
            graph,
            pointer: None,
            pointer_matter: None,
        }
    }

    pub fn pointed(graph: PortGraph<NameTerm>, pointer: NameTerm) -> Self {
        GraphDocument {
            graph,
            pointer: Some(pointer),
            pointer_matter: None,
        }
    }

    /// The declared pointer, or the least vertex.
    pub fn origin(&self) -> NameTerm {
        self.pointer
            .clone()
            .unwrap_or_else(|| self.graph.vertices().next().expect("non-empty").clone())
    }
}

fn err(line: usize, message: impl Into<String>) -> DocumentError {
    DocumentError {
        line,
        message: message.into(),
    }
}

/// Statements with the line each one starts on, comments removed.
fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for ch in line.chars() {
            if cur.trim().is_empty() && !ch.is_whitespace() {
                start = i + 1;
            }
            if ch == ';' {
                out.push((start, cur.trim().to_string()));
                cur.clear();
            } else {
                cur.push(ch);
            }
        }
        cur.push(' ');
    }
    if !cur.trim().is_empty() {
        out.push((start, cur.trim().to_string()));
    }
    out
}

fn parse_name(line: usize, s: &str) -> Result<NameTerm, DocumentError> {
    NameTerm::parse(s.trim()).map_err(|e| err(line, e.to_string()))
}

fn parse_mask(line: usize, ports: &PortSet, s: &str) -> Result<PortMask, DocumentError> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| err(line, format!("expected {{..}} after sigma=, got `{s}`")))?;
    let mut m = PortMask::EMPTY;
    for p in inner.split(|c: char| c == ',' || c.is_whitespace()) {
        if p.is_empty() {
            continue;
        }
        let port = ports
            .port(p)
            .ok_or_else(|| err(line, format!("unknown port `{p}`")))?;
        m = m.with(port);
    }
    Ok(m)
}

fn parse_vertex(
    line: usize,
    ports: &PortSet,
    body: &str,
) -> Result<(NameTerm, VertexLabel), DocumentError> {
    let mut rest = body.trim();
    let mut label = VertexLabel::State(PortMask::EMPTY);
    for (kw, l) in [
        ("unlabelled", VertexLabel::Unlabelled),
        ("matter", VertexLabel::Matter),
        ("frontier", VertexLabel::Frontier),
    ] {
        if let Some(r) = rest.strip_suffix(kw) {
            if r.ends_with(char::is_whitespace) {
                rest = r.trim_end();
                label = l;
                break;
            }
        }
    }
    if let Some(i) = rest.find("sigma=") {
        if label != VertexLabel::State(PortMask::EMPTY) {
            return Err(err(line, "a vertex has a single label"));
        }
        label = VertexLabel::State(parse_mask(line, ports, &rest[i + 6..])?);
        rest = rest[..i].trim_end();
    }
    Ok((parse_name(line, rest)?, label))
}

type EdgeLine = (
    (NameTerm, crate::ports::Port),
    (NameTerm, crate::ports::Port),
    Option<EdgeLabel>,
);

fn parse_edge(line: usize, ports: &PortSet, body: &str) -> Result<EdgeLine, DocumentError> {
    let (lhs, rhs) = body
        .split_once("--")
        .ok_or_else(|| err(line, "expected `x:a -- y:b`"))?;
    let mut rhs = rhs.trim();
    let mut label = None;
    if let Some(i) = rhs.find("delta=") {
        let n: u32 = rhs[i + 6..]
            .trim()
            .parse()
            .map_err(|_| err(line, "delta must be a non-negative integer"))?;
        label = Some(EdgeLabel(n));
        rhs = rhs[..i].trim_end();
    }
    let slot = |s: &str| -> Result<_, DocumentError> {
        let (v, p) = s
            .trim()
            .rsplit_once(':')
            .ok_or_else(|| err(line, format!("expected name:port, got `{}`", s.trim())))?;
        let port = ports
            .port(p.trim())
            .ok_or_else(|| err(line, format!("unknown port `{}`", p.trim())))?;
        Ok((parse_name(line, v)?, port))
    };
    Ok((slot(lhs)?, slot(rhs)?, label))
}

pub fn parse_document(text: &str) -> Result<GraphDocument, DocumentError> {
    let mut ports: Option<PortSet> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut pointer = None;
    let mut pointer_matter = None;
    let mut last_line = 1;
    for (line, stmt) in statements(text) {
        last_line = line;
        let (kw, body) = stmt.split_once(char::is_whitespace).unwrap_or((&stmt, ""));
        match kw {
            "ports" => {
                if ports.is_some() {
                    return Err(err(line, "ports declared twice"));
                }
                let ps =
                    PortSet::new(body.split_whitespace()).map_err(|e| err(line, e.to_string()))?;
                ports = Some(ps);
            }
            "vertex" | "edge" | "pointer" if ports.is_none() => {
                return Err(err(line, "`ports` must come first"));
            }
            "vertex" => vertices.push(parse_vertex(line, ports.as_ref().unwrap(), body)?),
            "edge" => edges.push(parse_edge(line, ports.as_ref().unwrap(), body)?),
            "pointer" => {
                if pointer.is_some() {
                    return Err(err(line, "pointer declared twice"));
                }
                let (name, at) = match body.split_once(" at ") {
                    Some((n, w)) => (
                        n,
                        Some(MatterWord::parse(w).map_err(|e| err(line, e.to_string()))?),
                    ),
                    None => (body, None),
                };
                pointer = Some(parse_name(line, name)?);
                pointer_matter = at;
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    let ports = ports.ok_or_else(|| err(last_line, "missing `ports` declaration"))?;
    let graph =
        PortGraph::build(ports, vertices, edges).map_err(|e| err(last_line, e.to_string()))?;
    if let Some(p) = &pointer {
        if !graph.contains(p) {
            return Err(err(last_line, format!("pointer `{p}` is not a vertex")));
        }
    }
    Ok(GraphDocument {
        graph,
        pointer,
        pointer_matter,
    })
}

fn write_graph<N, F>(out: &mut String, g: &PortGraph<N>, name: F) -> fmt::Result
where
    N: Ord + Clone + fmt::Debug,
    F: Fn(&N) -> String,
{
    let ports = g.ports();
    writeln!(out, "ports {};", ports.names().join(" "))?;
    for (v, l) in g.labelled_vertices() {
        write!(out, "vertex {}", name(v))?;
        match l {
            VertexLabel::State(m) if m.is_empty() => {}
            VertexLabel::State(m) => {
                let names: Vec<&str> = m.iter().map(|p| ports.name(p)).collect();
                write!(out, " sigma={{{}}}", names.join(","))?;
            }
            VertexLabel::Unlabelled => write!(out, " unlabelled")?,
            VertexLabel::Matter => write!(out, " matter")?,
            VertexLabel::Frontier => write!(out, " frontier")?,
        }
        writeln!(out, ";")?;
    }
    for e in g.edges() {
        write!(
            out,
            "edge {}:{} -- {}:{}",
            name(&e.lo.0),
            ports.name(e.lo.1),
            name(&e.hi.0),
            ports.name(e.hi.1)
        )?;
        if let Some(EdgeLabel(d)) = g.edge_label(&e) {
            write!(out, " delta={d}")?;
        }
        writeln!(out, ";")?;
    }
    Ok(())
}

pub fn print_document(doc: &GraphDocument) -> String {
    let mut out = String::new();
    write_graph(&mut out, &doc.graph, |v| v.to_string()).expect("writing to a string");
    if let Some(p) = &doc.pointer {
        match &doc.pointer_matter {
            Some(w) => writeln!(out, "pointer {p} at {w};"),
            None => writeln!(out, "pointer {p};"),
        }
        .expect("writing to a string");
    }
    out
}

/// Name of canonical vertex `i` in documents.
pub fn canonical_name(i: usize) -> String {
    format!("n{i}")
}

/// A canonical graph as a document, vertices named `n0`, `n1`, … and pointed
/// at `n0`.
pub fn canonical_document(x: &CanonicalPointedGraph) -> String {
    let mut out = String::new();
    write_graph(&mut out, x.graph(), |i| canonical_name(*i)).expect("writing to a string");
    writeln!(out, "pointer {};", canonical_name(0)).expect("writing to a string");
    out
}

pub fn print_graph<N, F>(g: &PortGraph<N>, name: F) -> String
where
    N: Ord + Clone + fmt::Debug,
    F: Fn(&N) -> String,
{
    let mut out = String::new();
    write_graph(&mut out, g, name).expect("writing to a string");
    out
}

/// Reads a canonical-form document back into a canonical graph.
pub fn parse_canonical(text: &str) -> Result<CanonicalPointedGraph, DocumentError> {
    let doc = parse_document(text)?;
    let origin = doc.origin();
    crate::pointed::canonicalize(&doc.graph, &origin).map_err(|e| err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointed::canonicalize;

    const SAMPLE: &str = "# three-cycle\nports a b;\nvertex x sigma={a};\nvertex y;\nvertex z unlabelled;\nedge x:a -- y:b;\nedge y:a -- z:b delta=3;\nedge z:a -- x:b;\npointer x;\n";

    #[test]
    fn parse_sample() {
        let doc = parse_document(SAMPLE).unwrap();
        assert_eq!(doc.graph.vertex_count(), 3);
        assert_eq!(doc.pointer, Some(NameTerm::atom("x")));
        assert_eq!(
            doc.graph.label(&NameTerm::atom("z")),
            Some(VertexLabel::Unlabelled)
        );
        let reparsed = parse_document(&print_document(&doc)).unwrap();
        assert_eq!(reparsed, doc);
    }

    #[test]
    fn canonical_print_is_bit_exact() {
        let doc = parse_document(SAMPLE).unwrap();
        let c = canonicalize(&doc.graph, &doc.origin()).unwrap();
        let text = canonical_document(&c);
        assert_eq!(canonical_document(&parse_canonical(&text).unwrap()), text);
        let doc2 = parse_document(&text).unwrap();
        assert_eq!(print_document(&doc2), text);
    }

    #[test]
    fn join_names_and_matter_pointer() {
        let text = "ports a b;\nvertex x.l.r;\nvertex (x ^ y) sigma={a,b};\nedge x.l.r:b -- (x ^ y):a;\npointer (x ^ y) at mm.lm;\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(print_document(&doc), text);
        assert!(doc.pointer_matter.is_some());
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_document("ports a b;\nvertex x;\nedge x:a -- x:q;\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse_document("vertex x;").is_err());
        assert!(parse_document("ports a b;\nfrob x;").is_err());
        assert!(parse_document("ports a b;\nvertex x;\nvertex y;\n").is_err());
    }
}
