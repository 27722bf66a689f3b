//! Invisible matter: an infinite binary tree attached at every visible vertex.
//!
//! The tree T is homogeneous (every node has a copy of T below `lm` and `rm`),
//! so a site of invisible matter is fully described by its visible vertex and a
//! word over {L, R}, where `L` stands for the path `lm` and `R` for `rm`. The
//! tree root is reached from the visible vertex through `mm`. Materializing a
//! [`MatterGraph`] unfolds the trees down to a truncation depth, marking the
//! deepest nodes as frontier.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeSpec, GraphError, PortGraph, VertexLabel};
use crate::name::{Dir, NameTerm};
use crate::pointed::{canonicalize_with_names, CanonicalPointedGraph, Canonized, PointedError};
use crate::ports::{Port, PortSet};

pub const MATTER_PORTS: [&str; 3] = ["m", "l", "r"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatterError {
    #[error("port `{0}` is reserved for invisible matter")]
    PortClash(String),
    #[error("vertex `{0}` carries the invisible-matter label")]
    LabelClash(String),
    #[error("matter depth {have} is too shallow, need at least {needed}")]
    DepthTooShallow { needed: usize, have: usize },
    #[error("malformed matter address `{0}`")]
    MalformedAddress(String),
    #[error("graph is not a well-formed invisible-matter graph: {0}")]
    MalformedMatter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pointed(#[from] PointedError),
}

/// An address `mm·w` inside the tree of a visible vertex, `w ∈ {lm, rm}*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MatterWord(pub Vec<Dir>);

impl MatterWord {
    pub fn parse(s: &str) -> Result<MatterWord, MatterError> {
        let bad = || MatterError::MalformedAddress(s.to_string());
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '.')
            .collect();
        let rest = compact.strip_prefix("mm").ok_or_else(bad)?;
        if rest.len() % 2 != 0 {
            return Err(bad());
        }
        let mut w = Vec::new();
        for pair in rest.as_bytes().chunks(2) {
            match pair {
                b"lm" => w.push(Dir::L),
                b"rm" => w.push(Dir::R),
                _ => return Err(bad()),
            }
        }
        Ok(MatterWord(w))
    }
}

impl fmt::Display for MatterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mm")?;
        for d in &self.0 {
            write!(f, ".{}m", d.letter())?;
        }
        Ok(())
    }
}

/// Name suffix of the matter node `mm·w`: `r^{n+1}` when `w = (rm)^n`, and
/// otherwise `w` with the letters m removed.
pub fn eta(w: &MatterWord) -> Vec<Dir> {
    if w.0.iter().all(|&d| d == Dir::R) {
        vec![Dir::R; w.0.len() + 1]
    } else {
        w.0.clone()
    }
}

pub fn eta_inverse(t: &[Dir]) -> Result<MatterWord, MatterError> {
    if t.is_empty() {
        return Err(MatterError::MalformedAddress("ε".into()));
    }
    if t.iter().all(|&d| d == Dir::R) {
        Ok(MatterWord(vec![Dir::R; t.len() - 1]))
    } else {
        Ok(MatterWord(t.to_vec()))
    }
}

/// A vertex of an invisible-matter graph: a visible vertex (`matter: None`) or
/// the matter node `mm·w` of its tree (`matter: Some(w)`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Site<N> {
    pub vertex: N,
    pub matter: Option<Vec<Dir>>,
}

impl<N> Site<N> {
    pub fn visible(vertex: N) -> Self {
        Site {
            vertex,
            matter: None,
        }
    }

    pub fn matter(vertex: N, w: Vec<Dir>) -> Self {
        Site {
            vertex,
            matter: Some(w),
        }
    }

    pub fn is_visible(&self) -> bool {
        self.matter.is_none()
    }

    pub fn matter_depth(&self) -> Option<usize> {
        self.matter.as_ref().map(|w| w.len())
    }
}

impl Site<NameTerm> {
    /// The name this site receives in the named formalism.
    pub fn name(&self) -> NameTerm {
        match &self.matter {
            None => self.vertex.clone(),
            Some(w) => self.vertex.with_suffix(&eta(&MatterWord(w.clone()))),
        }
    }
}

/// A visible graph with a pointer that may sit inside invisible matter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatterGraph<N> {
    visible: PortGraph<N>,
    pointer: Site<N>,
    depth: usize,
}

pub fn matter_ports(ports: &PortSet) -> Result<PortSet, MatterError> {
    for m in MATTER_PORTS {
        if ports.port(m).is_some() {
            return Err(MatterError::PortClash(m.to_string()));
        }
    }
    Ok(ports.extended(&MATTER_PORTS)?)
}

impl<N: Ord + Clone + fmt::Debug> MatterGraph<N> {
    pub fn new(visible: PortGraph<N>, pointer: Site<N>, depth: usize) -> Result<Self, MatterError> {
        matter_ports(visible.ports())?;
        if let Some((v, _)) = visible.labelled_vertices().find(|(_, l)| l.is_matter()) {
            return Err(MatterError::LabelClash(format!("{v:?}")));
        }
        if !visible.contains(&pointer.vertex) {
            return Err(PointedError::UnknownVertex(format!("{:?}", pointer.vertex)).into());
        }
        if let Some(k) = pointer.matter_depth() {
            if k > depth {
                return Err(MatterError::DepthTooShallow {
                    needed: k,
                    have: depth,
                });
            }
        }
        Ok(MatterGraph {
            visible,
            pointer,
            depth,
        })
    }

    pub fn visible(&self) -> &PortGraph<N> {
        &self.visible
    }

    pub fn pointer(&self) -> &Site<N> {
        &self.pointer
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The same graph represented to a different depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self, MatterError> {
        Self::new(self.visible.clone(), self.pointer.clone(), depth)
    }

    pub fn with_pointer(&self, pointer: Site<N>) -> Result<Self, MatterError> {
        Self::new(self.visible.clone(), pointer, self.depth)
    }

    /// Every site up to the truncation depth, in order.
    pub fn sites(&self) -> Vec<Site<N>> {
        let mut out = Vec::new();
        for v in self.visible.vertices() {
            out.push(Site::visible(v.clone()));
            for w in words_up_to(self.depth) {
                out.push(Site::matter(v.clone(), w));
            }
        }
        out
    }

    /// Unfolds the trees over the ports π ∪ {m, l, r}.
    pub fn materialize(&self) -> Result<PortGraph<Site<N>>, MatterError> {
        let ports = matter_ports(self.visible.ports())?;
        let k = self.visible.ports().len() as u8;
        let (pm, pl, pr) = (Port(k), Port(k + 1), Port(k + 2));
        let words = words_up_to(self.depth);
        let mut vertices = Vec::new();
        let mut edges: Vec<EdgeSpec<Site<N>>> = Vec::new();
        for (v, l) in self.visible.labelled_vertices() {
            vertices.push((Site::visible(v.clone()), l));
            edges.push((
                (Site::visible(v.clone()), pm),
                (Site::matter(v.clone(), Vec::new()), pm),
                None,
            ));
            for w in &words {
                let label = if w.len() == self.depth {
                    VertexLabel::Frontier
                } else {
                    VertexLabel::Matter
                };
                vertices.push((Site::matter(v.clone(), w.clone()), label));
                if w.len() < self.depth {
                    for (d, p) in [(Dir::L, pl), (Dir::R, pr)] {
                        let mut c = w.clone();
                        c.push(d);
                        edges.push((
                            (Site::matter(v.clone(), w.clone()), p),
                            (Site::matter(v.clone(), c), pm),
                            None,
                        ));
                    }
                }
            }
        }
        for e in self.visible.edges() {
            let l = self.visible.edge_label(&e);
            edges.push((
                (Site::visible(e.lo.0), e.lo.1),
                (Site::visible(e.hi.0), e.hi.1),
                l,
            ));
        }
        Ok(PortGraph::build(ports, vertices, edges)?)
    }

    pub fn canonize(&self) -> Result<Canonized<Site<N>>, MatterError> {
        Ok(canonicalize_with_names(
            &self.materialize()?,
            &self.pointer,
        )?)
    }

    pub fn to_canonical(&self) -> Result<CanonicalPointedGraph, MatterError> {
        Ok(self.canonize()?.canonical)
    }
}

/// Attaches invisible matter of depth `depth` to `g`, pointed at `origin`.
pub fn attach_matter<N: Ord + Clone + fmt::Debug>(
    g: &PortGraph<N>,
    origin: &N,
    depth: usize,
) -> Result<MatterGraph<N>, MatterError> {
    MatterGraph::new(g.clone(), Site::visible(origin.clone()), depth)
}

/// All words over {L, R} of length at most `d`, shortest first.
pub fn words_up_to(d: usize) -> Vec<Vec<Dir>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for dir in [Dir::L, Dir::R] {
                let mut c: Vec<Dir> = w.clone();
                c.push(dir);
                next.push(c);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Recovers a matter graph from a materialized canonical graph.
pub fn decode(x: &CanonicalPointedGraph) -> Result<MatterGraph<usize>, MatterError> {
    let bad = |s: &str| MatterError::MalformedMatter(s.to_string());
    let ports = x.ports();
    let n = ports.len();
    if n < 3 || ports.names()[n - 3..] != MATTER_PORTS.map(String::from) {
        return Err(bad("missing m, l, r ports"));
    }
    let k = (n - 3) as u8;
    let (pm, pl, pr) = (Port(k), Port(k + 1), Port(k + 2));
    let visible_ports = ports.prefix(n - 3);
    let g = x.graph();
    let mut site_of: BTreeMap<usize, Site<usize>> = BTreeMap::new();
    let mut depth = None;
    for (v, l) in g.labelled_vertices() {
        if l.is_matter() {
            continue;
        }
        site_of.insert(*v, Site::visible(*v));
        let Some(&(root, p)) = g.neighbor(v, pm) else {
            return Err(bad("visible vertex without matter"));
        };
        if p != pm {
            return Err(bad("matter attached through the wrong port"));
        }
        let mut stack = vec![(root, Vec::new())];
        while let Some((node, w)) = stack.pop() {
            let label = g.label(&node).unwrap_or_default();
            if !label.is_matter() || site_of.contains_key(&node) {
                return Err(bad("matter tree is not a tree"));
            }
            site_of.insert(node, Site::matter(*v, w.clone()));
            if label == VertexLabel::Frontier {
                if *depth.get_or_insert(w.len()) != w.len() {
                    return Err(bad("uneven truncation depth"));
                }
                continue;
            }
            for (d, p) in [(Dir::L, pl), (Dir::R, pr)] {
                match g.neighbor(&node, p) {
                    Some(&(c, q)) if q == pm => {
                        let mut cw = w.clone();
                        cw.push(d);
                        stack.push((c, cw));
                    }
                    _ => return Err(bad("matter node missing a child")),
                }
            }
        }
    }
    let depth = depth.ok_or_else(|| bad("no matter"))?;
    if site_of.len() != x.vertex_count() {
        return Err(bad("stray matter"));
    }
    let visible_ids: Vec<usize> = site_of
        .iter()
        .filter(|(_, s)| s.is_visible())
        .map(|(i, _)| *i)
        .collect();
    let vertices: Vec<_> = visible_ids.iter().map(|&i| (i, x.label(i))).collect();
    let edges: Vec<_> = g
        .edges()
        .filter(|e| e.lo.1 .0 < k && e.hi.1 .0 < k)
        .map(|e| {
            let l = g.edge_label(&e);
            (e.lo, e.hi, l)
        })
        .collect();
    let visible = PortGraph::build(visible_ports, vertices, edges)?;
    let mg = MatterGraph::new(visible, site_of[&0].clone(), depth)?;
    if mg.to_canonical()? != *x {
        return Err(bad("re-materialization differs"));
    }
    Ok(mg)
}
