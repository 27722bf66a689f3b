//! Hasslacher–Meyer particle dynamics on port graphs: advection, time reversal
//! and the involutive split/merge collision, for every vertex naming scheme.
//!
//! With `a`, `b` the two collision ports:
//!
//! * SPLIT: a vertex `v` with σ = {a, b} becomes `left` (σ = {b}) and `right`
//!   (σ = {a}) joined by `left:a -- right:b`. `left` keeps every edge of `v`
//!   except the one on port `a`, which moves to `right`.
//! * MERGE: an edge `u:a -- w:b` with σ(u) = {b}, σ(w) = {a}, `u ≠ w` and `w`
//!   using no port besides `a`, `b` is contracted into one vertex with
//!   σ = {a, b}, which takes the other edges of `u` and the `a` edge of `w`.
//!
//! The two patterns are mutually inverse and can never overlap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, PortGraph, Slot, VertexLabel};
use crate::matter::{MatterError, MatterGraph, Site};
use crate::name::{Dir, NameTerm};
use crate::ports::{Port, PortMask, PortSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HmError {
    #[error("vertex `{0}` does not carry a particle state")]
    InvalidLabel(String),
    #[error("collision patterns overlap at vertex `{0}`")]
    DegenerateOverlap(String),
    #[error("collision needs at least two ports")]
    TooFewPorts,
    #[error("successor map is not a bijection over the ports: {0}")]
    BadSuccessor(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matter(#[from] MatterError),
}

/// A bijection `s` over the ports: the direction a particle takes after
/// entering through a port.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuccessorMap {
    forward: Vec<Port>,
    backward: Vec<Port>,
}

impl SuccessorMap {
    pub fn new(images: Vec<Port>) -> Result<Self, HmError> {
        let n = images.len();
        let mut backward = vec![Port(u8::MAX); n];
        for (i, p) in images.iter().enumerate() {
            if p.index() >= n || backward[p.index()] != Port(u8::MAX) {
                return Err(HmError::BadSuccessor(format!("{images:?}")));
            }
            backward[p.index()] = Port(i as u8);
        }
        Ok(SuccessorMap {
            forward: images,
            backward,
        })
    }

    /// The swap for two ports, otherwise the cycle in declaration order.
    pub fn standard(ports: &PortSet) -> Self {
        let n = ports.len();
        let images = (0..n).map(|i| Port(((i + 1) % n) as u8)).collect();
        SuccessorMap::new(images).expect("a cycle is a bijection")
    }

    /// From `(port, successor)` name pairs.
    pub fn from_pairs(ports: &PortSet, pairs: &[(&str, &str)]) -> Result<Self, HmError> {
        let mut images = vec![None; ports.len()];
        for (x, y) in pairs {
            let px = ports
                .port(x)
                .ok_or_else(|| GraphError::UnknownPort(x.to_string()))?;
            let py = ports
                .port(y)
                .ok_or_else(|| GraphError::UnknownPort(y.to_string()))?;
            if images[px.index()].replace(py).is_some() {
                return Err(HmError::BadSuccessor(format!("`{x}` mapped twice")));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    HmError::BadSuccessor(format!("`{}` unmapped", ports.name(Port(i as u8))))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SuccessorMap::new(images)
    }

    pub fn apply(&self, p: Port) -> Port {
        self.forward[p.index()]
    }

    pub fn inverse(&self, p: Port) -> Port {
        self.backward[p.index()]
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    fn map_mask(&self, m: PortMask, back: bool) -> PortMask {
        m.iter().fold(PortMask::EMPTY, |acc, p| {
            acc.with(if back { self.inverse(p) } else { self.apply(p) })
        })
    }
}

fn state_of<N: fmt::Debug>(v: &N, l: VertexLabel) -> Result<Option<PortMask>, HmError> {
    match l {
        VertexLabel::State(m) => Ok(Some(m)),
        VertexLabel::Unlabelled => Ok(None),
        _ => Err(HmError::InvalidLabel(format!("{v:?}"))),
    }
}

/// One synchronous step of advection. Vertices whose incoming particles are
/// not all known (unlabelled sources) become unlabelled.
pub fn advect<N>(g: &PortGraph<N>, s: &SuccessorMap) -> Result<PortGraph<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
{
    let mut next: BTreeMap<N, VertexLabel> = BTreeMap::new();
    for (v, l) in g.labelled_vertices() {
        let own = state_of(v, l)?;
        let mut mask = own.map(|_| PortMask::EMPTY);
        for b in g.ports().iter() {
            let incoming = match g.neighbor(v, b) {
                Some((u, a)) => {
                    let lu = g.label(u).unwrap_or_default();
                    state_of(u, lu)?.map(|m| m.contains(*a))
                }
                None => own.map(|m| m.contains(b)),
            };
            mask = match (mask, incoming) {
                (Some(m), Some(true)) => Some(m.with(s.apply(b))),
                (Some(m), Some(false)) => Some(m),
                _ => None,
            };
        }
        next.insert(
            v.clone(),
            mask.map_or(VertexLabel::Unlabelled, VertexLabel::State),
        );
    }
    Ok(g.relabel(|v, _| next[v]))
}

/// Replaces each particle direction `p` by `s⁻¹(p)`.
pub fn time_reverse<N>(g: &PortGraph<N>, s: &SuccessorMap) -> Result<PortGraph<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
{
    for (v, l) in g.labelled_vertices() {
        state_of(v, l)?;
    }
    Ok(g.relabel(|_, l| match l {
        VertexLabel::State(m) => VertexLabel::State(s.map_mask(m, true)),
        other => other,
    }))
}

/// A⁻¹ = T∘A∘T.
pub fn advect_inverse<N>(g: &PortGraph<N>, s: &SuccessorMap) -> Result<PortGraph<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
{
    time_reverse(&advect(&time_reverse(g, s)?, s)?, s)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum CollisionMode {
    #[default]
    Standard,
    /// Only the split half of the rule; not an involution.
    SplitOnly,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CollisionRule {
    pub a: Port,
    pub b: Port,
    pub mode: CollisionMode,
}

impl CollisionRule {
    /// Collision on the first two declared ports.
    pub fn standard(ports: &PortSet) -> Result<Self, HmError> {
        if ports.len() < 2 {
            return Err(HmError::TooFewPorts);
        }
        Ok(CollisionRule {
            a: Port(0),
            b: Port(1),
            mode: CollisionMode::Standard,
        })
    }

    pub fn with_mode(self, mode: CollisionMode) -> Self {
        CollisionRule { mode, ..self }
    }
}

/// How fresh vertex names are produced by the collision.
pub trait Namer<N> {
    fn split(&mut self, v: &N) -> (N, N);
    fn merge(&mut self, u: &N, w: &N) -> N;
}

/// Names split halves `u.l`, `u.r` and merged vertices `(u ^ w)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AlgebraNamer;

impl Namer<NameTerm> for AlgebraNamer {
    fn split(&mut self, v: &NameTerm) -> (NameTerm, NameTerm) {
        (v.l(), v.r())
    }

    fn merge(&mut self, u: &NameTerm, w: &NameTerm) -> NameTerm {
        NameTerm::join(u, w)
    }
}

/// Hands out unused integer names.
#[derive(Clone, Copy, Debug)]
pub struct FreshIndices {
    next: usize,
}

impl FreshIndices {
    pub fn for_graph(g: &PortGraph<usize>) -> Self {
        FreshIndices {
            next: g.vertices().max().map_or(0, |m| m + 1),
        }
    }

    fn take(&mut self) -> usize {
        self.next += 1;
        self.next - 1
    }
}

impl Namer<usize> for FreshIndices {
    fn split(&mut self, _: &usize) -> (usize, usize) {
        (self.take(), self.take())
    }

    fn merge(&mut self, _: &usize, _: &usize) -> usize {
        self.take()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CollisionEvent<N> {
    Split { vertex: N, left: N, right: N },
    Merge { left: N, right: N, merged: N },
}

impl<N> CollisionEvent<N> {
    pub fn is_split(&self) -> bool {
        matches!(self, CollisionEvent::Split { .. })
    }
}

/// Split and merge counts of an event list.
pub fn event_counts<N>(events: &[CollisionEvent<N>]) -> (usize, usize) {
    let splits = events.iter().filter(|e| e.is_split()).count();
    (splits, events.len() - splits)
}

/// Applies every split and merge simultaneously.
pub fn collide<N, M>(
    g: &PortGraph<N>,
    rule: &CollisionRule,
    namer: &mut M,
) -> Result<(PortGraph<N>, Vec<CollisionEvent<N>>), HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    let (a, b) = (rule.a, rule.b);
    let both = VertexLabel::State(PortMask::of(&[a, b]));
    let only_a = VertexLabel::State(PortMask::single(a));
    let only_b = VertexLabel::State(PortMask::single(b));

    let splits: Vec<N> = g
        .labelled_vertices()
        .filter(|(_, l)| *l == both)
        .map(|(v, _)| v.clone())
        .collect();
    let mut merges: Vec<(N, N)> = Vec::new();
    if rule.mode == CollisionMode::Standard {
        for (u, l) in g.labelled_vertices() {
            if l != only_b {
                continue;
            }
            let Some((w, p)) = g.neighbor(u, a) else {
                continue;
            };
            let bare = g
                .ports()
                .iter()
                .all(|q| q == a || q == b || g.neighbor(w, q).is_none());
            if *p == b && w != u && g.label(w) == Some(only_a) && bare {
                merges.push((u.clone(), w.clone()));
            }
        }
    }

    let mut used = BTreeSet::new();
    for v in splits.iter().chain(merges.iter().flat_map(|(u, w)| [u, w])) {
        if !used.insert(v.clone()) {
            return Err(HmError::DegenerateOverlap(format!("{v:?}")));
        }
    }

    let mut slot_map: BTreeMap<Slot<N>, Slot<N>> = BTreeMap::new();
    let mut dropped: BTreeSet<Slot<N>> = BTreeSet::new();
    let mut vertices: Vec<(N, VertexLabel)> = g
        .labelled_vertices()
        .filter(|(v, _)| !used.contains(*v))
        .map(|(v, l)| (v.clone(), l))
        .collect();
    let mut extra = Vec::new();
    let mut events = Vec::new();

    for v in splits {
        let (left, right) = namer.split(&v);
        for p in g.ports().iter() {
            let to = if p == a { right.clone() } else { left.clone() };
            slot_map.insert((v.clone(), p), (to, p));
        }
        vertices.push((left.clone(), only_b));
        vertices.push((right.clone(), only_a));
        extra.push(((left.clone(), a), (right.clone(), b), None));
        events.push(CollisionEvent::Split {
            vertex: v,
            left,
            right,
        });
    }
    for (u, w) in merges {
        let x = namer.merge(&u, &w);
        for p in g.ports().iter() {
            if p != a {
                slot_map.insert((u.clone(), p), (x.clone(), p));
            }
        }
        slot_map.insert((w.clone(), a), (x.clone(), a));
        dropped.insert((u.clone(), a));
        dropped.insert((w.clone(), b));
        vertices.push((x.clone(), both));
        events.push(CollisionEvent::Merge {
            left: u,
            right: w,
            merged: x,
        });
    }

    let map = |s: Slot<N>| slot_map.get(&s).cloned().unwrap_or(s);
    let mut edges: Vec<_> = g
        .edges()
        .filter(|e| !dropped.contains(&e.lo))
        .map(|e| {
            let l = g.edge_label(&e);
            (map(e.lo), map(e.hi), l)
        })
        .collect();
    edges.extend(extra);
    let out = PortGraph::assemble(g.ports().clone(), vertices, edges)?;
    Ok((out, events))
}

/// Where each old vertex goes when vertices are identified by the collision:
/// a split vertex goes to its left half, both merged vertices to the merge.
pub fn vertex_successor<N: Ord + Clone>(events: &[CollisionEvent<N>]) -> BTreeMap<N, N> {
    let mut m = BTreeMap::new();
    for e in events {
        match e {
            CollisionEvent::Split { vertex, left, .. } => {
                m.insert(vertex.clone(), left.clone());
            }
            CollisionEvent::Merge {
                left,
                right,
                merged,
            } => {
                m.insert(left.clone(), merged.clone());
                m.insert(right.clone(), merged.clone());
            }
        }
    }
    m
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

/// One HM step in either direction: `collide ∘ advect` forward,
/// `(T∘A∘T) ∘ collide` backward.
pub fn hm_step_dir<N, M>(
    g: &PortGraph<N>,
    s: &SuccessorMap,
    rule: &CollisionRule,
    namer: &mut M,
    dir: Direction,
) -> Result<(PortGraph<N>, Vec<CollisionEvent<N>>), HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    match dir {
        Direction::Forward => collide(&advect(g, s)?, rule, namer),
        Direction::Backward => {
            let (h, ev) = collide(g, rule, namer)?;
            Ok((advect_inverse(&h, s)?, ev))
        }
    }
}

pub fn hm_step<N, M>(
    g: &PortGraph<N>,
    s: &SuccessorMap,
    rule: &CollisionRule,
    namer: &mut M,
) -> Result<(PortGraph<N>, Vec<CollisionEvent<N>>), HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    hm_step_dir(g, s, rule, namer, Direction::Forward)
}

pub fn hm_step_inverse<N, M>(
    g: &PortGraph<N>,
    s: &SuccessorMap,
    rule: &CollisionRule,
    namer: &mut M,
) -> Result<(PortGraph<N>, Vec<CollisionEvent<N>>), HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    hm_step_dir(g, s, rule, namer, Direction::Backward)
}

/// Named-graph step with the standard collision ports.
pub fn hm_step_named(
    g: &PortGraph<NameTerm>,
    s: &SuccessorMap,
    dir: Direction,
) -> Result<(PortGraph<NameTerm>, Vec<CollisionEvent<NameTerm>>), HmError> {
    let rule = CollisionRule::standard(g.ports())?;
    hm_step_dir(g, s, &rule, &mut AlgebraNamer, dir)
}

/// Relocation of matter sites across a collision.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SplitRelocation {
    #[default]
    Standard,
    /// Exchanges the subtrees handed to the two halves.
    Swapped,
}

/// The successor R on matter sites induced by a list of collision events.
///
/// Split of `v` into `left`, `right`: `v ↦ left`, the tree root `↦ right`,
/// `L·t ↦ (left, t)`, `R·t ↦ (right, t)`. Merge of `u`, `w` into `x` is the
/// inverse: `u ↦ x`, `(u, t) ↦ (x, L·t)`, `w ↦` root of `x`, `(w, t) ↦ (x, R·t)`.
#[derive(Clone, Debug)]
pub struct SiteMap<N> {
    splits: BTreeMap<N, (N, N)>,
    merge_left: BTreeMap<N, N>,
    merge_right: BTreeMap<N, N>,
    relocation: SplitRelocation,
}

impl<N: Ord + Clone> SiteMap<N> {
    pub fn from_events(events: &[CollisionEvent<N>], relocation: SplitRelocation) -> Self {
        let mut m = SiteMap {
            splits: BTreeMap::new(),
            merge_left: BTreeMap::new(),
            merge_right: BTreeMap::new(),
            relocation,
        };
        for e in events {
            match e {
                CollisionEvent::Split {
                    vertex,
                    left,
                    right,
                } => {
                    m.splits
                        .insert(vertex.clone(), (left.clone(), right.clone()));
                }
                CollisionEvent::Merge {
                    left,
                    right,
                    merged,
                } => {
                    m.merge_left.insert(left.clone(), merged.clone());
                    m.merge_right.insert(right.clone(), merged.clone());
                }
            }
        }
        m
    }

    pub fn identity() -> Self {
        Self::from_events(&[], SplitRelocation::Standard)
    }

    pub fn apply(&self, s: &Site<N>) -> Site<N> {
        let (dl, dr) = match self.relocation {
            SplitRelocation::Standard => (Dir::L, Dir::R),
            SplitRelocation::Swapped => (Dir::R, Dir::L),
        };
        if let Some((left, right)) = self.splits.get(&s.vertex) {
            return match &s.matter {
                None => Site::visible(left.clone()),
                Some(w) if w.is_empty() => Site::visible(right.clone()),
                Some(w) => {
                    let half = if w[0] == dl { left } else { right };
                    Site::matter(half.clone(), w[1..].to_vec())
                }
            };
        }
        let prefixed = |x: &N, d: Dir, w: &[Dir]| {
            let mut t = vec![d];
            t.extend_from_slice(w);
            Site::matter(x.clone(), t)
        };
        if let Some(x) = self.merge_left.get(&s.vertex) {
            return match &s.matter {
                None => Site::visible(x.clone()),
                Some(w) => prefixed(x, dl, w),
            };
        }
        if let Some(x) = self.merge_right.get(&s.vertex) {
            return match &s.matter {
                None => Site::matter(x.clone(), Vec::new()),
                Some(w) => prefixed(x, dr, w),
            };
        }
        s.clone()
    }
}

pub fn advect_matter<N>(mg: &MatterGraph<N>, s: &SuccessorMap) -> Result<MatterGraph<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
{
    Ok(MatterGraph::new(
        advect(mg.visible(), s)?,
        mg.pointer().clone(),
        mg.depth(),
    )?)
}

pub fn advect_inverse_matter<N>(
    mg: &MatterGraph<N>,
    s: &SuccessorMap,
) -> Result<MatterGraph<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
{
    Ok(MatterGraph::new(
        advect_inverse(mg.visible(), s)?,
        mg.pointer().clone(),
        mg.depth(),
    )?)
}

/// A matter graph after one step, the collision events, and the site map.
pub type MatterStep<N> = (MatterGraph<N>, Vec<CollisionEvent<N>>, SiteMap<N>);

/// Collision on an invisible-matter graph; the pointer follows [`SiteMap`].
pub fn collide_matter<N, M>(
    mg: &MatterGraph<N>,
    rule: &CollisionRule,
    namer: &mut M,
    relocation: SplitRelocation,
) -> Result<MatterStep<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    let (visible, events) = collide(mg.visible(), rule, namer)?;
    let map = SiteMap::from_events(&events, relocation);
    let pointer = map.apply(mg.pointer());
    if let Some(k) = pointer.matter_depth() {
        if k > mg.depth() {
            return Err(MatterError::DepthTooShallow {
                needed: k,
                have: mg.depth(),
            }
            .into());
        }
    }
    let out = MatterGraph::new(visible, pointer, mg.depth())?;
    Ok((out, events, map))
}

/// One HM step on an invisible-matter graph.
pub fn hm_step_matter<N, M>(
    mg: &MatterGraph<N>,
    s: &SuccessorMap,
    rule: &CollisionRule,
    namer: &mut M,
    relocation: SplitRelocation,
    dir: Direction,
) -> Result<MatterStep<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    match dir {
        Direction::Forward => collide_matter(&advect_matter(mg, s)?, rule, namer, relocation),
        Direction::Backward => {
            let (h, ev, map) = collide_matter(mg, rule, namer, relocation)?;
            Ok((advect_inverse_matter(&h, s)?, ev, map))
        }
    }
}

/// One row of trajectory statistics.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct StepStats {
    pub step: usize,
    pub vertices: usize,
    pub particles: usize,
    pub splits: usize,
    pub merges: usize,
}

#[derive(Clone, Debug)]
pub struct TrajectoryRecord<N> {
    pub rows: Vec<StepStats>,
    pub final_graph: PortGraph<N>,
}

/// Runs `steps` HM steps, recording statistics after each one (row 0 is the
/// initial graph).
pub fn run_trajectory<N, M>(
    g: &PortGraph<N>,
    s: &SuccessorMap,
    rule: &CollisionRule,
    namer: &mut M,
    steps: usize,
    dir: Direction,
) -> Result<TrajectoryRecord<N>, HmError>
where
    N: Ord + Clone + fmt::Debug,
    M: Namer<N>,
{
    let mut rows = vec![StepStats {
        step: 0,
        vertices: g.vertex_count(),
        particles: g.particle_count(),
        splits: 0,
        merges: 0,
    }];
    let mut cur = g.clone();
    for step in 1..=steps {
        let (next, events) = hm_step_dir(&cur, s, rule, namer, dir)?;
        let (splits, merges) = event_counts(&events);
        rows.push(StepStats {
            step,
            vertices: next.vertex_count(),
            particles: next.particle_count(),
            splits,
            merges,
        });
        cur = next;
    }
    Ok(TrajectoryRecord {
        rows,
        final_graph: cur,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::pointed::anonymize_graph;

    fn n(s: &str) -> NameTerm {
        NameTerm::parse(s).unwrap()
    }

    /// Cycle `v0 .. v{len-1}` with `vi:a -- v(i+1):b` and the given states.
    fn cycle(states: &[&[&str]]) -> PortGraph {
        let len = states.len();
        let names: Vec<String> = (0..len).map(|i| format!("v{i}")).collect();
        let vs: Vec<(&str, Option<&[&str]>)> = names
            .iter()
            .zip(states)
            .map(|(s, st)| (s.as_str(), Some(*st)))
            .collect();
        let es: Vec<(&str, &str, &str, &str)> = (0..len)
            .map(|i| (names[i].as_str(), "a", names[(i + 1) % len].as_str(), "b"))
            .collect();
        build_graph(&["a", "b"], &vs, &es).unwrap()
    }

    fn swap() -> SuccessorMap {
        SuccessorMap::new(vec![Port(1), Port(0)]).unwrap()
    }

    #[test]
    fn advect_three_cycle() {
        let g = cycle(&[&["a"], &[], &[]]);
        let h = advect(&g, &swap()).unwrap();
        let a = VertexLabel::State(PortMask::single(Port(0)));
        assert_eq!(h.label(&n("v1")), Some(a));
        assert_eq!(h.label(&n("v0")), Some(VertexLabel::State(PortMask::EMPTY)));
        assert_eq!(h.label(&n("v2")), Some(VertexLabel::State(PortMask::EMPTY)));
    }

    #[test]
    fn advect_bounces_off_free_port() {
        let g = build_graph(&["a", "b"], &[("x", Some(&["a"]))], &[]).unwrap();
        let h = advect(&g, &swap()).unwrap();
        assert_eq!(
            h.label(&n("x")),
            Some(VertexLabel::State(PortMask::single(Port(1))))
        );
        let empty = cycle(&[&[], &[], &[]]);
        assert_eq!(advect(&empty, &swap()).unwrap(), empty);
    }

    #[test]
    fn time_reverse_swaps() {
        let g = cycle(&[&["a"], &[], &[]]);
        let t = time_reverse(&g, &swap()).unwrap();
        assert_eq!(
            t.label(&n("v0")),
            Some(VertexLabel::State(PortMask::single(Port(1))))
        );
        assert_eq!(
            advect(&advect_inverse(&g, &swap()).unwrap(), &swap()).unwrap(),
            g
        );
    }

    #[test]
    fn split_three_cycle() {
        let g = cycle(&[&["a", "b"], &[], &[]]);
        let rule = CollisionRule::standard(g.ports()).unwrap();
        let (h, ev) = collide(&g, &rule, &mut AlgebraNamer).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(
            ev,
            vec![CollisionEvent::Split {
                vertex: n("v0"),
                left: n("v0.l"),
                right: n("v0.r")
            }]
        );
        assert_eq!(h.neighbor(&n("v0.l"), Port(0)), Some(&(n("v0.r"), Port(1))));
        assert_eq!(h.neighbor(&n("v0.r"), Port(0)), Some(&(n("v1"), Port(1))));
        assert!(h.is_well_named());
        let (back, ev2) = collide(&h, &rule, &mut AlgebraNamer).unwrap();
        assert_eq!(back, g);
        assert!(matches!(ev2[0], CollisionEvent::Merge { .. }));
    }

    #[test]
    fn merge_names_reduce() {
        let g = build_graph(
            &["a", "b"],
            &[
                ("x.l", Some(&["b"])),
                ("x.r", Some(&["a"])),
                ("y", Some(&[])),
            ],
            &[
                ("x.l", "a", "x.r", "b"),
                ("x.r", "a", "y", "b"),
                ("y", "a", "x.l", "b"),
            ],
        )
        .unwrap();
        let rule = CollisionRule::standard(g.ports()).unwrap();
        let (h, _) = collide(&g, &rule, &mut AlgebraNamer).unwrap();
        assert!(h.contains(&n("x")));
        assert_eq!(h.vertex_count(), 2);
    }

    #[test]
    fn self_loop_and_two_cycle_exchange() {
        let g = build_graph(
            &["a", "b"],
            &[("x", Some(&["a", "b"]))],
            &[("x", "a", "x", "b")],
        )
        .unwrap();
        let rule = CollisionRule::standard(g.ports()).unwrap();
        let (h, _) = collide(&g, &rule, &mut AlgebraNamer).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(collide(&h, &rule, &mut AlgebraNamer).unwrap().0, g);
    }

    #[test]
    fn converging_pairs_on_eight_cycle() {
        let s = swap();
        let mut states: Vec<&[&str]> = vec![&[]; 8];
        states[0] = &["a"];
        states[2] = &["b"];
        let g = cycle(&states);
        let (h, ev) = hm_step_named(&g, &s, Direction::Forward).unwrap();
        assert_eq!(h.vertex_count(), 9);
        assert_eq!(event_counts(&ev), (1, 0));

        let mut states: Vec<&[&str]> = vec![&[]; 8];
        states[0] = &["a"];
        states[3] = &["b"];
        let g = cycle(&states);
        let (h1, _) = hm_step_named(&g, &s, Direction::Forward).unwrap();
        assert_eq!(h1.vertex_count(), 8);
        let (h2, ev) = hm_step_named(&h1, &s, Direction::Forward).unwrap();
        assert_eq!(h2.vertex_count(), 7);
        assert_eq!(event_counts(&ev), (0, 1));
        let (back, _) = hm_step_named(&h2, &s, Direction::Backward).unwrap();
        assert_eq!(back, h1);
    }

    #[test]
    fn anonymous_collide_is_involutive_on_small_cycle() {
        let g = cycle(&[&["a", "b"], &["b"], &[]]);
        let c = crate::pointed::canonicalize(&g, &n("v0")).unwrap();
        let gi = c.graph();
        let rule = CollisionRule::standard(gi.ports()).unwrap();
        let (h, _) = collide(gi, &rule, &mut FreshIndices::for_graph(gi)).unwrap();
        let (back, _) = collide(&h, &rule, &mut FreshIndices::for_graph(&h)).unwrap();
        assert_eq!(
            anonymize_graph(&back).unwrap(),
            anonymize_graph(gi).unwrap()
        );
    }

    #[test]
    fn site_map_split_and_merge_are_inverse() {
        let split = vec![CollisionEvent::Split {
            vertex: 0usize,
            left: 1,
            right: 2,
        }];
        let merge = vec![CollisionEvent::Merge {
            left: 1usize,
            right: 2,
            merged: 0,
        }];
        let fwd = SiteMap::from_events(&split, SplitRelocation::Standard);
        let bwd = SiteMap::from_events(&merge, SplitRelocation::Standard);
        let mut sites = vec![Site::visible(0usize)];
        for w in crate::matter::words_up_to(4) {
            sites.push(Site::matter(0usize, w));
        }
        for s in sites {
            assert_eq!(bwd.apply(&fwd.apply(&s)), s);
        }
    }

    #[test]
    fn successor_from_pairs() {
        let ports = PortSet::new(["a", "b", "c"]).unwrap();
        let s = SuccessorMap::from_pairs(&ports, &[("a", "c"), ("b", "a"), ("c", "b")]).unwrap();
        assert_eq!(s.apply(Port(0)), Port(2));
        assert_eq!(s.inverse(Port(2)), Port(0));
        assert!(SuccessorMap::from_pairs(&ports, &[("a", "b"), ("b", "b"), ("c", "a")]).is_err());
        assert_eq!(SuccessorMap::standard(&ports).apply(Port(2)), Port(0));
    }
}
