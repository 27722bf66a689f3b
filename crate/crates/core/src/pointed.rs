//! Pointed graphs modulo isomorphism, anonymous graphs, disks, shifts and the
//! disk-agreement ultrametric.
//!
//! A [`CanonicalPointedGraph`] names every vertex by its breadth-first index
//! from the origin, ports being visited in declaration order. The discovery
//! order coincides with the lexicographic order of the least shortest paths, so
//! index `i` and canonical path `paths[i]` identify the same vertex, and two
//! pointed graphs are isomorphic exactly when their canonical forms are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::graph::{GraphError, PortGraph, VertexLabel};
use crate::ports::{Path, PortSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointedError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("path `{0}` does not lead anywhere from the origin")]
    InvalidPath(String),
    #[error("graph contains truncated matter and is not finite")]
    InfiniteGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A pointed graph modulo isomorphism: vertex `0` is the origin ε.
#[derive(Clone, Debug)]
pub struct CanonicalPointedGraph {
    graph: PortGraph<usize>,
    paths: Vec<Path>,
}

impl PartialEq for CanonicalPointedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for CanonicalPointedGraph {}

impl PartialOrd for CanonicalPointedGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalPointedGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.graph.cmp(&other.graph)
    }
}

impl Hash for CanonicalPointedGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph.hash(state)
    }
}

/// A canonical form together with the original name of each canonical index.
#[derive(Clone, Debug)]
pub struct Canonized<N> {
    pub canonical: CanonicalPointedGraph,
    pub names: Vec<N>,
}

impl<N: Ord + Clone> Canonized<N> {
    pub fn index_of(&self) -> BTreeMap<N, usize> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect()
    }
}

/// Canonical form of `g` pointed at `origin`, keeping the name of each vertex.
/// Only the connected component of `origin` is kept.
pub fn canonicalize_with_names<N>(
    g: &PortGraph<N>,
    origin: &N,
) -> Result<Canonized<N>, PointedError>
where
    N: Ord + Clone + fmt::Debug,
{
    if !g.contains(origin) {
        return Err(PointedError::UnknownVertex(format!("{origin:?}")));
    }
    let mut index: BTreeMap<N, usize> = BTreeMap::new();
    let mut names = vec![origin.clone()];
    let mut paths = vec![Path::empty()];
    let mut queue = VecDeque::from([0usize]);
    index.insert(origin.clone(), 0);
    while let Some(i) = queue.pop_front() {
        let v = names[i].clone();
        for a in g.ports().iter() {
            if let Some((w, b)) = g.neighbor(&v, a) {
                if !index.contains_key(w) {
                    let j = names.len();
                    index.insert(w.clone(), j);
                    names.push(w.clone());
                    let mut p = paths[i].clone();
                    p.push(a, *b);
                    paths.push(p);
                    queue.push_back(j);
                }
            }
        }
    }
    let vertices: Vec<(usize, VertexLabel)> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (i, g.label(n).unwrap_or_default()))
        .collect();
    let edges: Vec<_> = g
        .edges()
        .filter(|e| index.contains_key(&e.lo.0))
        .map(|e| {
            let l = g.edge_label(&e);
            ((index[&e.lo.0], e.lo.1), (index[&e.hi.0], e.hi.1), l)
        })
        .collect();
    let graph = PortGraph::assemble(g.ports().clone(), vertices, edges)?;
    Ok(Canonized {
        canonical: CanonicalPointedGraph { graph, paths },
        names,
    })
}

pub fn canonicalize<N>(g: &PortGraph<N>, origin: &N) -> Result<CanonicalPointedGraph, PointedError>
where
    N: Ord + Clone + fmt::Debug,
{
    canonicalize_with_names(g, origin).map(|c| c.canonical)
}

impl CanonicalPointedGraph {
    pub fn graph(&self) -> &PortGraph<usize> {
        &self.graph
    }

    pub fn ports(&self) -> &PortSet {
        self.graph.ports()
    }

    pub fn vertex_count(&self) -> usize {
        self.paths.len()
    }

    pub fn origin(&self) -> usize {
        0
    }

    pub fn label(&self, i: usize) -> VertexLabel {
        self.graph.label(&i).unwrap_or_default()
    }

    /// Canonical path name of vertex `i`.
    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// Distance from the origin of vertex `i`; canonical paths are shortest.
    pub fn depth(&self, i: usize) -> usize {
        self.paths[i].len()
    }

    /// Canonical vertex at the end of `p`, if `p` is a path of the graph.
    pub fn resolve(&self, p: &Path) -> Option<usize> {
        let mut v = 0usize;
        for &(a, b) in &p.0 {
            match self.graph.neighbor(&v, a) {
                Some(&(w, b2)) if b2 == b => v = w,
                _ => return None,
            }
        }
        Some(v)
    }

    /// X^r: induced on radius r+1, labels kept on radius r, edge labels kept
    /// between vertices of radius r.
    pub fn disk(&self, r: usize) -> CanonicalPointedGraph {
        let keep = self.paths.partition_point(|p| p.len() <= r + 1);
        let inner = self.paths.partition_point(|p| p.len() <= r);
        if keep == self.paths.len() && inner == self.paths.len() {
            return self.clone();
        }
        let (ports, vs, es) = self.graph.decompose();
        let vertices = vs.into_iter().filter(|(i, _)| *i < keep).map(|(i, l)| {
            if i < inner {
                (i, l)
            } else {
                (i, VertexLabel::Unlabelled)
            }
        });
        let edges: Vec<_> = es
            .into_iter()
            .filter(|(x, y, _)| x.0 < keep && y.0 < keep)
            .map(|(x, y, l)| {
                let l = if x.0 < inner && y.0 < inner { l } else { None };
                (x, y, l)
            })
            .collect();
        let graph = PortGraph::assemble(ports, vertices, edges)
            .expect("restriction of a valid graph is valid");
        CanonicalPointedGraph {
            graph,
            paths: self.paths[..keep].to_vec(),
        }
    }

    /// Re-pointed at canonical vertex `i`.
    pub fn shift_to(&self, i: usize) -> Result<CanonicalPointedGraph, PointedError> {
        if i >= self.paths.len() {
            return Err(PointedError::UnknownVertex(i.to_string()));
        }
        canonicalize(&self.graph, &i)
    }

    /// X_u: the same graph pointed at the end of `u`.
    pub fn shift(&self, u: &Path) -> Result<CanonicalPointedGraph, PointedError> {
        let i = self
            .resolve(u)
            .ok_or_else(|| PointedError::InvalidPath(u.display(self.ports()).to_string()))?;
        self.shift_to(i)
    }

    pub fn has_frontier(&self) -> bool {
        self.graph
            .labelled_vertices()
            .any(|(_, l)| l == VertexLabel::Frontier)
    }
}

/// `2^-k` where `k` is the least radius at which the disks differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Distance {
    Zero,
    Pow2Neg(u32),
}

impl Distance {
    pub fn value(self) -> f64 {
        match self {
            Distance::Zero => 0.0,
            Distance::Pow2Neg(k) => 2f64.powi(-(k as i32)),
        }
    }

    fn key(self) -> (u8, u32) {
        match self {
            Distance::Zero => (0, 0),
            Distance::Pow2Neg(k) => (1, u32::MAX - k),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => write!(f, "0"),
            Distance::Pow2Neg(0) => write!(f, "1"),
            Distance::Pow2Neg(k) => write!(f, "2^-{k}"),
        }
    }
}

pub fn distance(x: &CanonicalPointedGraph, y: &CanonicalPointedGraph) -> Distance {
    if x == y {
        return Distance::Zero;
    }
    let mut r = 0usize;
    loop {
        if x.disk(r) != y.disk(r) {
            return Distance::Pow2Neg(r as u32);
        }
        r += 1;
    }
}

/// A graph modulo isomorphism, without pointer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AnonymousGraph {
    canonical: CanonicalPointedGraph,
}

impl AnonymousGraph {
    /// The least canonical form over all pointer placements.
    pub fn representative(&self) -> &CanonicalPointedGraph {
        &self.canonical
    }

    pub fn vertex_count(&self) -> usize {
        self.canonical.vertex_count()
    }
}

pub fn anonymize(x: &CanonicalPointedGraph) -> Result<AnonymousGraph, PointedError> {
    if x.has_frontier() {
        return Err(PointedError::InfiniteGraph);
    }
    let best = (0..x.vertex_count())
        .map(|i| x.shift_to(i))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .expect("graphs are non-empty");
    Ok(AnonymousGraph { canonical: best })
}

/// Anonymous graph of any port graph.
pub fn anonymize_graph<N>(g: &PortGraph<N>) -> Result<AnonymousGraph, PointedError>
where
    N: Ord + Clone + fmt::Debug,
{
    let first = g.vertices().next().ok_or(GraphError::Empty)?.clone();
    anonymize(&canonicalize(g, &first)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::name::NameTerm;

    fn n(s: &str) -> NameTerm {
        NameTerm::parse(s).unwrap()
    }

    fn cycle(len: usize, ports: &[&str]) -> PortGraph {
        let names: Vec<String> = (0..len).map(|i| format!("v{i}")).collect();
        let vs: Vec<(&str, Option<&[&str]>)> = names.iter().map(|s| (s.as_str(), None)).collect();
        let es: Vec<(&str, &str, &str, &str)> = (0..len)
            .map(|i| {
                (
                    names[i].as_str(),
                    ports[0],
                    names[(i + 1) % len].as_str(),
                    ports[1],
                )
            })
            .collect();
        build_graph(ports, &vs, &es).unwrap()
    }

    fn two_cycle() -> PortGraph {
        build_graph(
            &["a", "b"],
            &[("x", None), ("y", None)],
            &[("x", "a", "y", "b"), ("y", "a", "x", "b")],
        )
        .unwrap()
    }

    #[test]
    fn two_cycle_names() {
        let g = two_cycle();
        let c = canonicalize(&g, &n("x")).unwrap();
        let shown: Vec<String> = c
            .paths()
            .iter()
            .map(|p| p.display(g.ports()).to_string())
            .collect();
        assert_eq!(shown, ["ε", "ab"]);
        assert_eq!(canonicalize(c.graph(), &0).unwrap(), c);
    }

    #[test]
    fn unknown_origin() {
        assert!(matches!(
            canonicalize(&two_cycle(), &n("z")),
            Err(PointedError::UnknownVertex(_))
        ));
    }

    #[test]
    fn resolve_walks() {
        let g = two_cycle();
        let c = canonicalize(&g, &n("x")).unwrap();
        let p = |s: &str| Path::parse(s, g.ports()).unwrap();
        assert_eq!(c.resolve(&Path::empty()), Some(0));
        assert_eq!(c.resolve(&p("ab.ab")), Some(0));
        assert_eq!(c.resolve(&p("ab")), Some(1));
        assert_eq!(c.resolve(&p("aa")), None);
    }

    #[test]
    fn disk_of_three_cycle() {
        let g = cycle(3, &["a", "b"]).relabel(|_, _| VertexLabel::State(crate::PortMask(1)));
        let c = canonicalize(&g, &n("v0")).unwrap();
        let d = c.disk(0);
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(d.label(0), VertexLabel::State(crate::PortMask(1)));
        assert_eq!(d.label(1), VertexLabel::Unlabelled);
        assert_eq!(d.label(2), VertexLabel::Unlabelled);
        assert_eq!(d.graph().edge_count(), 3);
        assert_eq!(d.disk(0), d);
        assert_eq!(c.disk(5), c);
    }

    #[test]
    fn shift_round_trip() {
        let g = cycle(5, &["a", "b"]);
        let c = canonicalize(&g, &n("v0")).unwrap();
        let u = Path::parse("ab.ab", g.ports()).unwrap();
        let s = c.shift(&u).unwrap();
        assert_eq!(s.shift(&u.reversed()).unwrap(), c);
        let g2 = two_cycle();
        let c2 = canonicalize(&g2, &n("x")).unwrap();
        let ab = Path::parse("ab", g2.ports()).unwrap();
        assert_eq!(c2.shift(&ab).unwrap(), canonicalize(&g2, &n("y")).unwrap());
        assert!(matches!(
            c.shift(&Path::parse("aa", g.ports()).unwrap()),
            Err(PointedError::InvalidPath(_))
        ));
    }

    #[test]
    fn distance_examples() {
        let c10 = canonicalize(&cycle(10, &["a", "b"]), &n("v0")).unwrap();
        let c12 = canonicalize(&cycle(12, &["a", "b"]), &n("v0")).unwrap();
        assert_eq!(distance(&c10, &c10), Distance::Zero);
        assert_eq!(distance(&c10, &c12), Distance::Pow2Neg(4));
        assert_eq!(distance(&c10, &c12).value(), 0.0625);
        let g = cycle(10, &["a", "b"]);
        let lab = g.relabel(|v, l| {
            if *v == n("v0") {
                VertexLabel::Matter
            } else {
                l
            }
        });
        let cl = canonicalize(&lab, &n("v0")).unwrap();
        assert_eq!(distance(&c10, &cl), Distance::Pow2Neg(0));
        assert_eq!(distance(&c10, &cl).to_string(), "1");
    }

    #[test]
    fn anonymous_forms() {
        let g = cycle(3, &["a", "b"]);
        let forms: Vec<_> = ["v0", "v1", "v2"]
            .iter()
            .map(|v| anonymize(&canonicalize(&g, &n(v)).unwrap()).unwrap())
            .collect();
        assert!(forms.windows(2).all(|w| w[0] == w[1]));
        let path = build_graph(
            &["a", "b"],
            &[("p", None), ("q", None), ("s", None)],
            &[("p", "a", "q", "b"), ("q", "a", "s", "b")],
        )
        .unwrap();
        let all: Vec<_> = ["p", "q", "s"]
            .iter()
            .map(|v| canonicalize(&path, &n(v)).unwrap())
            .collect();
        let least = all.iter().min().unwrap().clone();
        for c in &all {
            assert_eq!(anonymize(c).unwrap().representative(), &least);
        }
    }

    #[test]
    fn single_vertex() {
        let g = build_graph(&["a"], &[("x", None)], &[]).unwrap();
        let c = canonicalize(&g, &n("x")).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(anonymize(&c).unwrap().representative(), &c);
    }
}
