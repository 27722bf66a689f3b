//! Splitting names and the name map induced between two well-named graphs.

use std::fmt;

use thiserror::Error;

use crate::graph::PortGraph;
use crate::name::{forest_is_well_named, intersectant, Dir, NameTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NamingError {
    #[error("vertex names are not well-named")]
    NotWellNamed,
    #[error("name `{0}` has no counterpart on the other side")]
    NamePreservationViolated(String),
    #[error("name alignment did not converge after {0} splits")]
    NoConvergence(usize),
}

fn is_l_r_power(t: &[Dir]) -> Option<usize> {
    match t.split_first() {
        Some((Dir::L, rest)) if rest.iter().all(|&d| d == Dir::R) => Some(rest.len()),
        _ => None,
    }
}

/// σ_u: `u ↦ u.l`, `u.l.r^n ↦ u.l.r^{n+1}`, every other name fixed.
pub fn sigma(u: &NameTerm, v: &NameTerm) -> NameTerm {
    match u.suffix_to(v) {
        Some(t) if t.is_empty() => u.l(),
        Some(t) if is_l_r_power(&t).is_some() => v.r(),
        _ => v.clone(),
    }
}

/// Inverse of σ_u; `None` on `u` itself, which has no preimage.
pub fn sigma_inverse(u: &NameTerm, v: &NameTerm) -> Option<NameTerm> {
    match u.suffix_to(v) {
        Some(t) if t.is_empty() => None,
        Some(t) => match is_l_r_power(&t) {
            Some(0) => Some(u.clone()),
            Some(n) => Some(u.with_suffix(&t[..n])),
            None => Some(v.clone()),
        },
        None => Some(v.clone()),
    }
}

/// `σ_{u₁} ∘ … ∘ σ_{uₙ}`, listed left to right and applied right to left.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SigmaComposition(pub Vec<NameTerm>);

impl SigmaComposition {
    pub fn apply(&self, v: &NameTerm) -> NameTerm {
        self.0.iter().rev().fold(v.clone(), |acc, u| sigma(u, &acc))
    }

    pub fn apply_inverse(&self, v: &NameTerm) -> Option<NameTerm> {
        self.0
            .iter()
            .try_fold(v.clone(), |acc, u| sigma_inverse(u, &acc))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SigmaComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.0.iter().map(|u| format!("σ[{u}]")).collect();
        write!(f, "{}", parts.join(" ∘ "))
    }
}

fn measure(t: &[Dir], t2: &[Dir]) -> (usize, usize) {
    (t.len().max(t2.len()), t.len() + t2.len())
}

const MAX_SPLITS: usize = 100_000;

/// Splits names on both sides until intersectant names coincide.
pub fn align_names(
    gv: &[NameTerm],
    hv: &[NameTerm],
) -> Result<(SigmaComposition, SigmaComposition), NamingError> {
    if !forest_is_well_named(gv.iter()) || !forest_is_well_named(hv.iter()) {
        return Err(NamingError::NotWellNamed);
    }
    let mut a: Vec<NameTerm> = gv.to_vec();
    let mut b: Vec<NameTerm> = hv.to_vec();
    let mut s = SigmaComposition::default();
    let mut s2 = SigmaComposition::default();
    for _ in 0..MAX_SPLITS {
        a.sort();
        b.sort();
        let pick = a.iter().find_map(|u| {
            b.iter().find_map(|u2| {
                if u == u2 {
                    return None;
                }
                u.intersection_witness(u2)
                    .map(|w| (u.clone(), u2.clone(), w))
            })
        });
        let Some((u, u2, (t, t2))) = pick else {
            return Ok((s, s2));
        };
        let before = measure(&t, &t2);
        let (nu, nu2) = if t.len() >= t2.len() {
            s.0.insert(0, u.clone());
            a = a.iter().map(|v| sigma(&u, v)).collect();
            (sigma(&u, &u), u2)
        } else {
            s2.0.insert(0, u2.clone());
            b = b.iter().map(|v| sigma(&u2, v)).collect();
            (u, sigma(&u2, &u2))
        };
        if let Some((w, w2)) = nu.intersection_witness(&nu2) {
            assert!(
                nu == nu2 || measure(&w, &w2) < before,
                "alignment variant did not decrease"
            );
        }
    }
    Err(NamingError::NoConvergence(MAX_SPLITS))
}

/// R̄: `u.t ↦ u'.t'` iff `S(u.t) = S'(u'.t')`.
#[derive(Clone, Debug)]
pub struct InducedNameMap {
    pub s: SigmaComposition,
    pub s_prime: SigmaComposition,
    source: Vec<NameTerm>,
    target: Vec<NameTerm>,
}

impl InducedNameMap {
    pub fn new(gv: &[NameTerm], hv: &[NameTerm]) -> Result<Self, NamingError> {
        for (xs, ys) in [(gv, hv), (hv, gv)] {
            for u in xs {
                if !ys.iter().any(|v| intersectant(u, v)) {
                    return Err(NamingError::NamePreservationViolated(u.to_string()));
                }
            }
        }
        let (s, s_prime) = align_names(gv, hv)?;
        Ok(InducedNameMap {
            s,
            s_prime,
            source: gv.to_vec(),
            target: hv.to_vec(),
        })
    }

    pub fn apply(&self, name: &NameTerm) -> Result<NameTerm, NamingError> {
        let fail = || NamingError::NamePreservationViolated(name.to_string());
        if !self.source.iter().any(|u| u.suffix_to(name).is_some()) {
            return Err(fail());
        }
        let image = self
            .s_prime
            .apply_inverse(&self.s.apply(name))
            .ok_or_else(fail)?;
        if self.target.iter().any(|u| u.suffix_to(&image).is_some()) {
            Ok(image)
        } else {
            Err(fail())
        }
    }

    /// `(u.t, R̄(u.t))` for every source name `u` and `|t| ≤ depth`.
    pub fn table(&self, depth: usize) -> Result<Vec<(NameTerm, NameTerm)>, NamingError> {
        let mut out = Vec::new();
        for u in &self.source {
            for t in crate::matter::words_up_to(depth) {
                let v = u.with_suffix(&t);
                out.push((v.clone(), self.apply(&v)?));
            }
        }
        Ok(out)
    }
}

pub fn induced_name_map(
    g: &PortGraph<NameTerm>,
    h: &PortGraph<NameTerm>,
) -> Result<InducedNameMap, NamingError> {
    let gv: Vec<NameTerm> = g.vertices().cloned().collect();
    let hv: Vec<NameTerm> = h.vertices().cloned().collect();
    InducedNameMap::new(&gv, &hv)
}
