//! Finite labelled port graphs.
//!
//! A [`PortGraph`] is a connected graph whose edges join `(vertex, port)` slots,
//! each slot being used at most once. Vertex names are generic: named graphs use
//! [`NameTerm`], canonical pointed graphs use `usize` indices, materialized
//! invisible-matter graphs use matter sites.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::name::NameTerm;
use crate::ports::{Port, PortMask, PortSet};

pub type VertexName = NameTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("slot {0} is used by two edges")]
    PortReuse(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error("port `{0}` declared twice")]
    DuplicatePort(String),
    #[error("too many ports ({0}, at most 64)")]
    TooManyPorts(usize),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has no vertices")]
    Empty,
}

/// Vertex label. `Unlabelled` marks partial knowledge (labelling is partial);
/// `Matter` is the invisible-matter label m; `Frontier` marks a matter node whose
/// children were cut off by depth truncation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum VertexLabel {
    #[default]
    Unlabelled,
    State(PortMask),
    Matter,
    Frontier,
}

impl VertexLabel {
    pub fn state(self) -> Option<PortMask> {
        match self {
            VertexLabel::State(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_matter(self) -> bool {
        matches!(self, VertexLabel::Matter | VertexLabel::Frontier)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeLabel(pub u32);

pub type Slot<N> = (N, Port);

/// Unordered edge `{u:a, v:b}` stored with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge<N> {
    pub lo: Slot<N>,
    pub hi: Slot<N>,
}

impl<N: Ord> Edge<N> {
    pub fn new(x: Slot<N>, y: Slot<N>) -> Self {
        if x <= y {
            Edge { lo: x, hi: y }
        } else {
            Edge { lo: y, hi: x }
        }
    }
}

/// One edge of a graph description: two slots and an optional label.
pub type EdgeSpec<N> = (Slot<N>, Slot<N>, Option<EdgeLabel>);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PortGraph<N = VertexName> {
    ports: PortSet,
    labels: BTreeMap<N, VertexLabel>,
    adj: BTreeMap<Slot<N>, Slot<N>>,
    elabels: BTreeMap<Edge<N>, EdgeLabel>,
}

/// A possibly disconnected induced subgraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fragment<N>(pub(crate) PortGraph<N>);

impl<N: Ord + Clone + std::fmt::Debug> Fragment<N> {
    pub fn graph(&self) -> &PortGraph<N> {
        &self.0
    }

    pub fn into_graph(self) -> Result<PortGraph<N>, GraphError> {
        if !self.0.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.0)
    }
}

fn show<N: std::fmt::Debug>(n: &N) -> String {
    format!("{n:?}")
}

impl<N: Ord + Clone + std::fmt::Debug> PortGraph<N> {
    /// Validating constructor.
    pub fn build(
        ports: PortSet,
        vertices: impl IntoIterator<Item = (N, VertexLabel)>,
        edges: impl IntoIterator<Item = EdgeSpec<N>>,
    ) -> Result<Self, GraphError> {
        let g = Self::assemble(ports, vertices, edges)?;
        if g.labels.is_empty() {
            return Err(GraphError::Empty);
        }
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Same checks as [`PortGraph::build`] except connectivity.
    pub(crate) fn assemble(
        ports: PortSet,
        vertices: impl IntoIterator<Item = (N, VertexLabel)>,
        edges: impl IntoIterator<Item = EdgeSpec<N>>,
    ) -> Result<Self, GraphError> {
        let mut labels = BTreeMap::new();
        for (v, l) in vertices {
            if labels.insert(v.clone(), l).is_some() {
                return Err(GraphError::DuplicateVertex(show(&v)));
            }
        }
        let mut adj = BTreeMap::new();
        let mut elabels = BTreeMap::new();
        for (x, y, lab) in edges {
            for (v, p) in [&x, &y] {
                if !ports.contains(*p) {
                    return Err(GraphError::UnknownPort(format!("#{}", p.0)));
                }
                if !labels.contains_key(v) {
                    return Err(GraphError::UnknownVertex(show(v)));
                }
            }
            if x == y {
                return Err(GraphError::PortReuse(format!("{x:?}")));
            }
            if adj.contains_key(&x) {
                return Err(GraphError::PortReuse(format!("{x:?}")));
            }
            if adj.contains_key(&y) {
                return Err(GraphError::PortReuse(format!("{y:?}")));
            }
            adj.insert(x.clone(), y.clone());
            adj.insert(y.clone(), x.clone());
            if let Some(l) = lab {
                elabels.insert(Edge::new(x, y), l);
            }
        }
        Ok(PortGraph {
            ports,
            labels,
            adj,
            elabels,
        })
    }

    pub fn ports(&self) -> &PortSet {
        &self.ports
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = &N> {
        self.labels.keys()
    }

    pub fn labelled_vertices(&self) -> impl Iterator<Item = (&N, VertexLabel)> {
        self.labels.iter().map(|(v, l)| (v, *l))
    }

    pub fn contains(&self, v: &N) -> bool {
        self.labels.contains_key(v)
    }

    pub fn label(&self, v: &N) -> Option<VertexLabel> {
        self.labels.get(v).copied()
    }

    /// The slot at the other end of the edge using `(v, p)`, if any.
    pub fn neighbor(&self, v: &N, p: Port) -> Option<&Slot<N>> {
        self.adj.get(&(v.clone(), p))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge<N>> + '_ {
        self.adj
            .iter()
            .filter(|(x, y)| x <= y)
            .map(|(x, y)| Edge::new(x.clone(), y.clone()))
    }

    pub fn edge_label(&self, e: &Edge<N>) -> Option<EdgeLabel> {
        self.elabels.get(e).copied()
    }

    pub fn degree(&self, v: &N) -> usize {
        self.ports
            .iter()
            .filter(|&p| self.neighbor(v, p).is_some())
            .count()
    }

    /// Total number of particles, counting only `State` labels.
    pub fn particle_count(&self) -> usize {
        self.labels
            .values()
            .filter_map(|l| l.state())
            .map(|m| m.len())
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.labels.keys().next() else {
            return true;
        };
        self.distances_from(start).len() == self.labels.len()
    }

    /// Breadth-first distances from `origin`, visiting ports in declaration order.
    pub fn distances_from(&self, origin: &N) -> BTreeMap<N, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        dist.insert(origin.clone(), 0);
        queue.push_back(origin.clone());
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for p in self.ports.iter() {
                if let Some((w, _)) = self.neighbor(&v, p) {
                    if !dist.contains_key(w) {
                        dist.insert(w.clone(), d + 1);
                        queue.push_back(w.clone());
                    }
                }
            }
        }
        dist
    }

    /// Inverse of [`PortGraph::build`].
    pub fn decompose(&self) -> (PortSet, Vec<(N, VertexLabel)>, Vec<EdgeSpec<N>>) {
        let vs = self.labels.iter().map(|(v, l)| (v.clone(), *l)).collect();
        let es = self
            .edges()
            .map(|e| {
                let l = self.edge_label(&e);
                (e.lo, e.hi, l)
            })
            .collect();
        (self.ports.clone(), vs, es)
    }

    pub fn induced_subgraph(&self, vs: &BTreeSet<N>) -> Result<Fragment<N>, GraphError> {
        for v in vs {
            if !self.contains(v) {
                return Err(GraphError::UnknownVertex(show(v)));
            }
        }
        let vertices = vs.iter().map(|v| (v.clone(), self.labels[v]));
        let edges = self
            .edges()
            .filter(|e| vs.contains(&e.lo.0) && vs.contains(&e.hi.0))
            .map(|e| {
                let l = self.edge_label(&e);
                (e.lo, e.hi, l)
            })
            .collect::<Vec<_>>();
        Ok(Fragment(Self::assemble(
            self.ports.clone(),
            vertices,
            edges,
        )?))
    }

    /// Applies an injective vertex renaming.
    pub fn map_names<M, F>(&self, mut f: F) -> Result<PortGraph<M>, GraphError>
    where
        M: Ord + Clone + std::fmt::Debug,
        F: FnMut(&N) -> M,
    {
        let (ports, vs, es) = self.decompose();
        let mut cache = BTreeMap::new();
        let mut name = |v: &N| -> M { cache.entry(v.clone()).or_insert_with(|| f(v)).clone() };
        let vs: Vec<_> = vs.into_iter().map(|(v, l)| (name(&v), l)).collect();
        let es: Vec<_> = es
            .into_iter()
            .map(|((u, a), (v, b), l)| ((name(&u), a), (name(&v), b), l))
            .collect();
        PortGraph::<M>::assemble(ports, vs, es)
    }

    /// Returns a copy with the labels replaced by `f`.
    pub fn relabel<F>(&self, mut f: F) -> PortGraph<N>
    where
        F: FnMut(&N, VertexLabel) -> VertexLabel,
    {
        let mut g = self.clone();
        for (v, l) in g.labels.iter_mut() {
            *l = f(v, *l);
        }
        g
    }

    #[cfg(test)]
    pub(crate) fn check_slots(&self) -> bool {
        self.adj
            .iter()
            .all(|(x, y)| self.adj.get(y) == Some(x) && x != y)
    }
}

impl PortGraph<NameTerm> {
    /// No two names (nor two parts of one name) share a common descendant,
    /// except trivially.
    pub fn is_well_named(&self) -> bool {
        crate::name::forest_is_well_named(self.labels.keys())
    }
}

/// Convenience builder taking port and vertex names as strings. Vertex names
/// are parsed as name terms.
pub fn build_graph(
    ports: &[&str],
    vertices: &[(&str, Option<&[&str]>)],
    edges: &[(&str, &str, &str, &str)],
) -> Result<PortGraph<NameTerm>, GraphError> {
    let ps = PortSet::new(ports.iter().copied())?;
    let port = |n: &str| {
        ps.port(n)
            .ok_or_else(|| GraphError::UnknownPort(n.to_string()))
    };
    let name = |n: &str| NameTerm::parse(n).map_err(|_| GraphError::UnknownVertex(n.to_string()));
    let mut vs = Vec::new();
    for (v, sigma) in vertices {
        let label = match sigma {
            None => VertexLabel::Unlabelled,
            Some(list) => {
                let mut m = PortMask::EMPTY;
                for p in list.iter() {
                    m = m.with(port(p)?);
                }
                VertexLabel::State(m)
            }
        };
        vs.push((name(v)?, label));
    }
    let mut es = Vec::new();
    for (u, a, v, b) in edges {
        es.push(((name(u)?, port(a)?), (name(v)?, port(b)?), None));
    }
    PortGraph::build(ps, vs, es)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_is_valid() {
        let g = build_graph(
            &["a", "b"],
            &[("x", None), ("y", None)],
            &[("x", "a", "y", "b"), ("x", "b", "y", "a")],
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.check_slots());
    }

    #[test]
    fn port_reuse_rejected() {
        let r = build_graph(
            &["a", "b", "c"],
            &[("x", None), ("y", None), ("z", None)],
            &[("x", "a", "y", "b"), ("x", "a", "z", "c")],
        );
        assert!(matches!(r, Err(GraphError::PortReuse(_))));
    }

    #[test]
    fn isolated_vertices_disconnected() {
        let r = build_graph(&["a", "b"], &[("x", None), ("y", None)], &[]);
        assert_eq!(r, Err(GraphError::Disconnected));
    }

    #[test]
    fn unknown_port_and_duplicate_vertex() {
        let r = build_graph(&["a"], &[("x", None), ("y", None)], &[("x", "a", "y", "q")]);
        assert!(matches!(r, Err(GraphError::UnknownPort(_))));
        let r = build_graph(&["a"], &[("x", None), ("x", None)], &[]);
        assert!(matches!(r, Err(GraphError::DuplicateVertex(_))));
    }

    fn triangle() -> PortGraph {
        build_graph(
            &["a", "b"],
            &[("x", None), ("y", None), ("z", None)],
            &[
                ("x", "a", "y", "b"),
                ("y", "a", "z", "b"),
                ("z", "a", "x", "b"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn induced_subgraphs() {
        let g = triangle();
        let all: BTreeSet<_> = g.vertices().cloned().collect();
        assert_eq!(g.induced_subgraph(&all).unwrap().into_graph().unwrap(), g);

        let one: BTreeSet<_> = [NameTerm::atom("x")].into_iter().collect();
        let f = g.induced_subgraph(&one).unwrap();
        assert_eq!(f.graph().vertex_count(), 1);
        assert_eq!(f.graph().edge_count(), 0);

        let two: BTreeSet<_> = [NameTerm::atom("x"), NameTerm::atom("y")]
            .into_iter()
            .collect();
        let f = g.induced_subgraph(&two).unwrap().into_graph().unwrap();
        assert_eq!(f.edge_count(), 1);

        let bad: BTreeSet<_> = [NameTerm::atom("w")].into_iter().collect();
        assert!(matches!(
            g.induced_subgraph(&bad),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn decompose_round_trip() {
        let g = triangle();
        let (p, v, e) = g.decompose();
        assert_eq!(PortGraph::build(p, v, e).unwrap(), g);
    }

    #[test]
    fn well_named_examples() {
        let g = |names: &[&str]| {
            let vs: Vec<(&str, Option<&[&str]>)> = names.iter().map(|n| (*n, None)).collect();
            let es: Vec<(&str, &str, &str, &str)> = if names.len() == 2 {
                vec![(names[0], "a", names[1], "b")]
            } else {
                vec![]
            };
            build_graph(&["a", "b"], &vs, &es).unwrap()
        };
        assert!(g(&["x", "y"]).is_well_named());
        assert!(!g(&["x", "x.l"]).is_well_named());
        assert!(!g(&["(x ^ y)", "x"]).is_well_named());
        assert!(g(&["x.l", "x.r"]).is_well_named());
        assert!(!g(&["(x ^ x)"]).is_well_named());
    }
}
