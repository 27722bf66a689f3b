//! Translations between the three formalisms and the commutation checks that
//! relate their HM dynamics.

use std::fmt;

use rayon::prelude::*;

use crate::dynamics::{CheckReport, Dynamics, DynamicsError, PointedHm, Witness};
use crate::graph::PortGraph;
use crate::hm::{
    hm_step_matter, hm_step_named, AlgebraNamer, CollisionRule, Direction, SplitRelocation,
    SuccessorMap,
};
use crate::matter::{attach_matter, eta_inverse, words_up_to, MatterError, MatterGraph, Site};
use crate::name::NameTerm;
use crate::naming::induced_name_map;
use crate::pointed::{anonymize, anonymize_graph, canonicalize, AnonymousGraph};

/// Forgets names and invisible matter.
pub fn alpha<N>(mg: &MatterGraph<N>) -> Result<AnonymousGraph, DynamicsError>
where
    N: Ord + Clone + fmt::Debug,
{
    Ok(anonymize_graph(mg.visible())?)
}

/// One anonymous HM step.
pub fn anonymous_step(x: &AnonymousGraph, dir: Direction) -> Result<AnonymousGraph, DynamicsError> {
    let d = PointedHm {
        direction: dir,
        ..Default::default()
    };
    Ok(anonymize(&d.evolve(x.representative())?.image)?)
}

/// The site of `h` carrying `name`: a visible vertex, or the matter node whose
/// name is `u.η(w)`.
pub fn site_of_name(
    h: &PortGraph<NameTerm>,
    name: &NameTerm,
) -> Result<Site<NameTerm>, MatterError> {
    for u in h.vertices() {
        if let Some(t) = u.suffix_to(name) {
            if t.is_empty() {
                return Ok(Site::visible(u.clone()));
            }
            return Ok(Site::matter(u.clone(), eta_inverse(&t)?.0));
        }
    }
    Err(MatterError::MalformedAddress(name.to_string()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Square {
    /// Forgetting names and matter commutes with the step.
    ImToA,
    /// Adding matter to an anonymous graph commutes with the step.
    AToIm,
    /// The matter successor agrees with the induced name map.
    ImToN,
    /// The induced name map, read back through η, is the matter successor.
    NToIm,
}

impl Square {
    pub const ALL: [Square; 4] = [Square::ImToA, Square::AToIm, Square::ImToN, Square::NToIm];
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Square::ImToA => "IM->A",
            Square::AToIm => "A->IM",
            Square::ImToN => "IM->N",
            Square::NToIm => "N->IM",
        })
    }
}

/// Settings shared by the commutation squares.
#[derive(Clone, Debug)]
pub struct Commutation {
    pub depth: usize,
    pub relocation: SplitRelocation,
    pub direction: Direction,
}

impl Default for Commutation {
    fn default() -> Self {
        Commutation {
            depth: 3,
            relocation: SplitRelocation::Standard,
            direction: Direction::Forward,
        }
    }
}

impl Commutation {
    fn matter_step(
        &self,
        mg: &MatterGraph<NameTerm>,
    ) -> Result<(MatterGraph<NameTerm>, crate::hm::SiteMap<NameTerm>), DynamicsError> {
        let ports = mg.visible().ports();
        let s = SuccessorMap::standard(ports);
        let rule = CollisionRule::standard(ports)?;
        let (out, _, map) = hm_step_matter(
            mg,
            &s,
            &rule,
            &mut AlgebraNamer,
            self.relocation,
            self.direction,
        )?;
        Ok((out, map))
    }

    /// The failure message, if any, for each square in `squares` on `g`.
    fn failures(
        &self,
        squares: &[Square],
        g: &PortGraph<NameTerm>,
    ) -> Result<Vec<Option<String>>, DynamicsError> {
        let origin = g.vertices().next().expect("non-empty graph").clone();
        let mg = attach_matter(g, &origin, self.depth)?;
        let (out, map) = self.matter_step(&mg)?;
        let mut named = None;
        let mut result = Vec::with_capacity(squares.len());
        for &square in squares {
            let failure = match square {
                Square::ImToA => (alpha(&out)? != anonymous_step(&alpha(&mg)?, self.direction)?)
                    .then(|| "α(F(X)) differs from F(α(X))".to_string()),
                Square::AToIm => {
                    let d = PointedHm {
                        direction: self.direction,
                        ..Default::default()
                    };
                    let e = d.evolve(&canonicalize(g, &origin)?)?;
                    let stepped = canonicalize(out.visible(), &out.pointer().vertex)?;
                    (e.image != stepped || out.depth() != self.depth)
                        .then(|| "lifting F(X) differs from stepping the lift of X".to_string())
                }
                Square::ImToN | Square::NToIm => {
                    if named.is_none() {
                        named = Some(self.named_failures(g, &out, &map)?);
                    }
                    let (im_to_n, n_to_im) = named.clone().expect("computed above");
                    if square == Square::ImToN {
                        im_to_n
                    } else {
                        n_to_im
                    }
                }
            };
            result.push(failure);
        }
        Ok(result)
    }

    /// First failures of the IM->N and N->IM squares.
    #[allow(clippy::type_complexity)]
    fn named_failures(
        &self,
        g: &PortGraph<NameTerm>,
        out: &MatterGraph<NameTerm>,
        map: &crate::hm::SiteMap<NameTerm>,
    ) -> Result<(Option<String>, Option<String>), DynamicsError> {
        let (h, _) = hm_step_named(g, &SuccessorMap::standard(g.ports()), self.direction)?;
        if &h != out.visible() {
            let msg = Some("named and matter steps disagree on visible vertices".to_string());
            return Ok((msg.clone(), msg));
        }
        let rbar = induced_name_map(g, &h)?;
        let (mut im_to_n, mut n_to_im) = (None, None);
        for v in g.vertices() {
            let sites = std::iter::once(Site::visible(v.clone())).chain(
                words_up_to(self.depth - 1)
                    .into_iter()
                    .map(|w| Site::matter(v.clone(), w)),
            );
            for site in sites {
                let moved = map.apply(&site);
                let named = rbar.apply(&site.name())?;
                let msg = || {
                    format!(
                        "site {} goes to {} under R but to {} under the induced name map",
                        site.name(),
                        moved.name(),
                        named
                    )
                };
                if im_to_n.is_none() && moved.name() != named {
                    im_to_n = Some(msg());
                }
                if n_to_im.is_none() && site_of_name(&h, &named)? != moved {
                    n_to_im = Some(msg());
                }
                if im_to_n.is_some() && n_to_im.is_some() {
                    return Ok((im_to_n, n_to_im));
                }
            }
        }
        Ok((im_to_n, n_to_im))
    }

    /// Checks one commutation square on named samples.
    pub fn check(
        &self,
        square: Square,
        samples: &[PortGraph<NameTerm>],
    ) -> Result<CheckReport, DynamicsError> {
        Ok(self.check_squares(&[square], samples)?.remove(0))
    }

    /// Checks several squares in one pass over the samples, sharing the
    /// per-sample steps.
    pub fn check_squares(
        &self,
        squares: &[Square],
        samples: &[PortGraph<NameTerm>],
    ) -> Result<Vec<CheckReport>, DynamicsError> {
        let per_sample = samples
            .par_iter()
            .map(|g| self.failures(squares, g))
            .collect::<Result<Vec<_>, _>>()?;
        squares
            .iter()
            .enumerate()
            .map(|(k, square)| {
                let found = samples
                    .iter()
                    .zip(&per_sample)
                    .find_map(|(g, f)| f[k].clone().map(|msg| (g, msg)));
                let witness = match found {
                    Some((g, msg)) => {
                        let origin = g.vertices().next().expect("non-empty graph");
                        Some(Witness::new(&canonicalize(g, origin)?, msg))
                    }
                    None => None,
                };
                Ok(
                    CheckReport::new(&format!("commute-{square}"), "hm", samples.len())
                        .param("depth", self.depth)
                        .param("relocation", format!("{:?}", self.relocation))
                        .fail_with(witness),
                )
            })
            .collect()
    }
}

fn sample_atom(i: usize) -> NameTerm {
    NameTerm::atom(&format!("v{i}"))
}

/// The visible pointed dynamics of an invisible-matter dynamics: attach matter,
/// step, forget the matter. A pointer that lands in matter is replaced by the
/// visible vertex owning the tree.
pub struct Projected<D> {
    pub inner: D,
    pub depth: usize,
}

impl<D: Dynamics> Dynamics for Projected<D> {
    fn name(&self) -> String {
        format!("projected[{}]({})", self.depth, self.inner.name())
    }

    fn formalism(&self) -> crate::dynamics::Formalism {
        crate::dynamics::Formalism::Anonymous
    }

    fn evolve(
        &self,
        x: &crate::pointed::CanonicalPointedGraph,
    ) -> Result<crate::dynamics::Evolution, DynamicsError> {
        let mg = attach_matter(x.graph(), &0, self.depth)?;
        let before = mg.canonize()?;
        let e = self.inner.evolve(&before.canonical)?;
        let out = crate::matter::decode(&e.image)?;
        let after = out.canonize()?;
        let origin = out.pointer().vertex;
        let c = crate::pointed::canonicalize_with_names(out.visible(), &origin)?;
        let index = c.index_of();
        let at = before.index_of();
        let successor = (0..x.vertex_count())
            .map(|i| e.successor[at[&Site::visible(i)]].map(|j| index[&after.names[j].vertex]))
            .collect();
        Ok(crate::dynamics::Evolution::exact(c.canonical, successor))
    }
}

/// The invisible-matter dynamics induced by the named HM step: step the named
/// visible graph, then move every site along the induced name map.
#[derive(Clone, Debug, Default)]
pub struct InducedMatter {
    pub direction: Direction,
}

impl Dynamics for InducedMatter {
    fn name(&self) -> String {
        format!("induced-matter[{:?}]", self.direction)
    }

    fn formalism(&self) -> crate::dynamics::Formalism {
        crate::dynamics::Formalism::InvisibleMatter
    }

    fn evolve(
        &self,
        x: &crate::pointed::CanonicalPointedGraph,
    ) -> Result<crate::dynamics::Evolution, DynamicsError> {
        let mg = crate::matter::decode(x)?;
        let depth = mg.depth();
        let before = mg.canonize()?;
        let g = mg
            .visible()
            .map_names(|&i| sample_atom(i))
            .map_err(crate::pointed::PointedError::from)?;
        let (h, _) = hm_step_named(&g, &SuccessorMap::standard(g.ports()), self.direction)?;
        let rbar = induced_name_map(&g, &h)?;
        let named = |s: &Site<usize>| Site {
            vertex: sample_atom(s.vertex),
            matter: s.matter.clone(),
        };
        let pointer = site_of_name(&h, &rbar.apply(&named(mg.pointer()).name())?)?;
        if pointer.matter_depth().is_some_and(|k| k > depth) {
            return Err(MatterError::DepthTooShallow {
                needed: pointer.matter_depth().unwrap_or(0),
                have: depth,
            }
            .into());
        }
        let out = MatterGraph::new(h.clone(), pointer, depth)?;
        let after = out.canonize()?;
        let index = after.index_of();
        let mut successor = Vec::with_capacity(before.names.len());
        for s in &before.names {
            let image = site_of_name(&h, &rbar.apply(&named(s).name())?)?;
            successor.push(index.get(&image).copied());
        }
        let margin =
            |sites: Vec<Option<usize>>| sites.into_iter().map(|k| k == Some(depth)).collect();
        Ok(crate::dynamics::Evolution {
            input_margin: margin(before.names.iter().map(|s| s.matter_depth()).collect()),
            output_margin: margin(after.names.iter().map(|s| s.matter_depth()).collect()),
            image: after.canonical,
            successor,
        })
    }
}
