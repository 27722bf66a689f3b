//! Deliberately broken dynamics, each violating one property.

use crate::dynamics::{Dynamics, DynamicsError, Evolution, Formalism, PointedHm};
use crate::graph::VertexLabel;
use crate::matter::{attach_matter, decode, Site};
use crate::name::Dir;
use crate::pointed::{canonicalize, canonicalize_with_names, CanonicalPointedGraph};
use crate::ports::{Port, PortMask};

/// Rotates every successor index by one.
pub struct ShiftedSuccessor<D>(pub D);

impl<D: Dynamics> Dynamics for ShiftedSuccessor<D> {
    fn name(&self) -> String {
        format!("shifted-successor({})", self.0.name())
    }

    fn formalism(&self) -> Formalism {
        self.0.formalism()
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let mut e = self.0.evolve(x)?;
        let n = e.image.vertex_count();
        for s in e.successor.iter_mut().flatten() {
            *s = (*s + 1) % n;
        }
        Ok(e)
    }
}

/// Toggles the first particle at the image origin when the whole input has an
/// odd number of vertices.
pub struct NonLocal<D>(pub D);

impl<D: Dynamics> Dynamics for NonLocal<D> {
    fn name(&self) -> String {
        format!("nonlocal({})", self.0.name())
    }

    fn formalism(&self) -> Formalism {
        self.0.formalism()
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let mut e = self.0.evolve(x)?;
        if x.vertex_count() % 2 == 1 {
            let g = e.image.graph().relabel(|v, l| match l {
                VertexLabel::State(m) if *v == 0 => {
                    let flip = PortMask::single(Port(0));
                    VertexLabel::State(PortMask(m.0 ^ flip.0))
                }
                other => other,
            });
            e.image = canonicalize(&g, &0)?;
        }
        Ok(e)
    }
}

/// Subdivides the first edge of the image with `length` empty vertices.
pub struct Teleport<D> {
    pub inner: D,
    pub length: usize,
}

impl<D: Dynamics> Dynamics for Teleport<D> {
    fn name(&self) -> String {
        format!("teleport[{}]({})", self.length, self.inner.name())
    }

    fn formalism(&self) -> Formalism {
        self.inner.formalism()
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let e = self.inner.evolve(x)?;
        let (ports, mut vertices, mut edges) = e.image.graph().decompose();
        if edges.is_empty() || self.length == 0 || ports.len() < 2 {
            return Ok(e);
        }
        let (lo, hi, _) = edges.remove(0);
        let n = e.image.vertex_count();
        let chain: Vec<usize> = (n..n + self.length).collect();
        for &c in &chain {
            vertices.push((c, VertexLabel::State(PortMask::EMPTY)));
        }
        let (a, b) = (Port(0), Port(1));
        edges.push((lo, (chain[0], b), None));
        for w in chain.windows(2) {
            edges.push(((w[0], a), (w[1], b), None));
        }
        edges.push(((chain[self.length - 1], a), hi, None));
        let g = crate::graph::PortGraph::build(ports, vertices, edges)
            .map_err(crate::pointed::PointedError::from)?;
        let c = canonicalize_with_names(&g, &0)?;
        let index = c.index_of();
        let successor = e.successor.iter().map(|s| s.map(|j| index[&j])).collect();
        Ok(Evolution {
            image: c.canonical,
            successor,
            input_margin: e.input_margin,
            output_margin: vec![false; index.len()],
        })
    }
}

/// The visible HM step on invisible-matter graphs with every tree carried
/// along unchanged: merges identify two trees and split halves get fresh ones.
#[derive(Clone, Debug, Default)]
pub struct ForgetMatter(pub PointedHm);

impl Dynamics for ForgetMatter {
    fn name(&self) -> String {
        format!("forget-matter({})", self.0.name())
    }

    fn formalism(&self) -> Formalism {
        Formalism::InvisibleMatter
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let mg = decode(x)?;
        let before = mg.canonize()?;
        let v = mg.visible();
        let inner = self.0.evolve(&canonicalize(v, &mg.pointer().vertex)?)?;
        let origin_index = canonicalize_with_names(v, &mg.pointer().vertex)?.index_of();
        let image = attach_matter(inner.image.graph(), &0, mg.depth())?;
        let image = image.with_pointer(Site {
            vertex: 0,
            matter: mg.pointer().matter.clone(),
        })?;
        let after = image.canonize()?;
        let index = after.index_of();
        let successor = before
            .names
            .iter()
            .map(|s| {
                inner.successor[origin_index[&s.vertex]].and_then(|j| {
                    index
                        .get(&Site {
                            vertex: j,
                            matter: s.matter.clone(),
                        })
                        .copied()
                })
            })
            .collect();
        Ok(Evolution::exact(after.canonical, successor))
    }
}

/// Reflects the successor of every site at tree depth ≥ 1 onto its sibling.
pub struct MirroredMatter<D>(pub D);

impl<D: Dynamics> Dynamics for MirroredMatter<D> {
    fn name(&self) -> String {
        format!("mirrored-matter({})", self.0.name())
    }

    fn formalism(&self) -> Formalism {
        self.0.formalism()
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let mut e = self.0.evolve(x)?;
        let names = decode(&e.image)?.canonize()?;
        let index = names.index_of();
        for s in e.successor.iter_mut().flatten() {
            let site = &names.names[*s];
            if let Some(w) = site.matter.as_ref().filter(|w| !w.is_empty()) {
                let mut m = w.clone();
                let last = m.len() - 1;
                m[last] = match m[last] {
                    Dir::L => Dir::R,
                    Dir::R => Dir::L,
                };
                *s = index[&Site {
                    vertex: site.vertex,
                    matter: Some(m),
                }];
            }
        }
        Ok(e)
    }
}
