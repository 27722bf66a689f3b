//! Dynamics `(F, R_•)` on canonical pointed graphs, their HM instances, and
//! check reports.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::document::canonical_document;
use crate::hm::{
    advect, advect_inverse, collide, hm_step_matter, vertex_successor, CollisionMode,
    CollisionRule, Direction, FreshIndices, HmError, SplitRelocation, SuccessorMap,
};
use crate::matter::{decode, MatterError};
use crate::naming::NamingError;
use crate::pointed::{canonicalize_with_names, CanonicalPointedGraph, PointedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Hm(#[from] HmError),
    #[error(transparent)]
    Matter(#[from] MatterError),
    #[error(transparent)]
    Pointed(#[from] PointedError),
    #[error(transparent)]
    Naming(#[from] NamingError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Formalism {
    Anonymous,
    InvisibleMatter,
    Named,
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formalism::Anonymous => "anonymous",
            Formalism::InvisibleMatter => "invisible",
            Formalism::Named => "named",
        })
    }
}

/// `F(X)` pointed at `R_X(ε)`, and `R_X` as a table over canonical indices.
///
/// Under matter truncation, `input_margin[i]` marks input vertices whose image
/// may fall outside the represented depth, and `output_margin[j]` marks image
/// vertices whose preimage may. Both are all `false` for finite dynamics.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub image: CanonicalPointedGraph,
    pub successor: Vec<Option<usize>>,
    pub input_margin: Vec<bool>,
    pub output_margin: Vec<bool>,
}

impl Evolution {
    pub fn exact(image: CanonicalPointedGraph, successor: Vec<Option<usize>>) -> Self {
        let input_margin = vec![false; successor.len()];
        let output_margin = vec![false; image.vertex_count()];
        Evolution {
            image,
            successor,
            input_margin,
            output_margin,
        }
    }
}

pub trait Dynamics: Sync {
    fn name(&self) -> String;
    fn formalism(&self) -> Formalism;
    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl Dynamics for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn formalism(&self) -> Formalism {
        Formalism::Anonymous
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        Ok(Evolution::exact(
            x.clone(),
            (0..x.vertex_count()).map(Some).collect(),
        ))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Stage {
    #[default]
    Full,
    AdvectOnly,
    CollideOnly,
}

/// HM on visible pointed graphs. A split vertex goes to its left half and both
/// merged vertices go to the merge, so `R` is not injective.
#[derive(Clone, Debug, Default)]
pub struct PointedHm {
    pub successor: Option<SuccessorMap>,
    pub mode: CollisionMode,
    pub direction: Direction,
    pub stage: Stage,
}

impl PointedHm {
    pub fn forward() -> Self {
        PointedHm::default()
    }

    pub fn backward() -> Self {
        PointedHm {
            direction: Direction::Backward,
            ..Default::default()
        }
    }

    pub fn stage(stage: Stage) -> Self {
        PointedHm {
            stage,
            ..Default::default()
        }
    }
}

impl Dynamics for PointedHm {
    fn name(&self) -> String {
        format!(
            "hm-pointed[{:?},{:?},{:?}]",
            self.stage, self.direction, self.mode
        )
    }

    fn formalism(&self) -> Formalism {
        Formalism::Anonymous
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let g = x.graph();
        let s = self
            .successor
            .clone()
            .unwrap_or_else(|| SuccessorMap::standard(g.ports()));
        let rule = CollisionRule::standard(g.ports())?.with_mode(self.mode);
        let mut namer = FreshIndices::for_graph(g);
        let fwd = self.direction == Direction::Forward;
        let (h, events) = match self.stage {
            Stage::AdvectOnly if fwd => (advect(g, &s)?, Vec::new()),
            Stage::AdvectOnly => (advect_inverse(g, &s)?, Vec::new()),
            Stage::CollideOnly => collide(g, &rule, &mut namer)?,
            Stage::Full if fwd => collide(&advect(g, &s)?, &rule, &mut namer)?,
            Stage::Full => {
                let (h, ev) = collide(g, &rule, &mut namer)?;
                (advect_inverse(&h, &s)?, ev)
            }
        };
        let moved = vertex_successor(&events);
        let r = |i: usize| moved.get(&i).copied().unwrap_or(i);
        let c = canonicalize_with_names(&h, &r(0))?;
        let index = c.index_of();
        let successor = (0..x.vertex_count())
            .map(|i| index.get(&r(i)).copied())
            .collect();
        Ok(Evolution::exact(c.canonical, successor))
    }
}

/// HM on materialized invisible-matter graphs (ports π ∪ {m, l, r}).
#[derive(Clone, Debug, Default)]
pub struct MatterHm {
    pub successor: Option<SuccessorMap>,
    pub mode: CollisionMode,
    pub direction: Direction,
    pub relocation: SplitRelocation,
}

impl MatterHm {
    pub fn forward() -> Self {
        MatterHm::default()
    }

    pub fn backward() -> Self {
        MatterHm {
            direction: Direction::Backward,
            ..Default::default()
        }
    }
}

impl Dynamics for MatterHm {
    fn name(&self) -> String {
        format!(
            "hm-matter[{:?},{:?},{:?}]",
            self.direction, self.mode, self.relocation
        )
    }

    fn formalism(&self) -> Formalism {
        Formalism::InvisibleMatter
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        let mg = decode(x)?;
        let before = mg.canonize()?;
        let depth = mg.depth();
        let ports = mg.visible().ports();
        let s = self
            .successor
            .clone()
            .unwrap_or_else(|| SuccessorMap::standard(ports));
        let rule = CollisionRule::standard(ports)?.with_mode(self.mode);
        let mut namer = FreshIndices::for_graph(mg.visible());
        let (out, _, map) =
            hm_step_matter(&mg, &s, &rule, &mut namer, self.relocation, self.direction)?;
        let after = out.canonize()?;
        let index = after.index_of();
        let successor = before
            .names
            .iter()
            .map(|site| index.get(&map.apply(site)).copied())
            .collect();
        let margin = |names: &[crate::matter::Site<usize>]| {
            names
                .iter()
                .map(|s| s.matter_depth() == Some(depth))
                .collect()
        };
        Ok(Evolution {
            input_margin: margin(&before.names),
            output_margin: margin(&after.names),
            image: after.canonical,
            successor,
        })
    }
}

/// A counterexample: the offending input as a graph document, and what failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub detail: String,
    pub graph: String,
}

impl Witness {
    pub fn new(x: &CanonicalPointedGraph, detail: impl Into<String>) -> Self {
        Witness {
            detail: detail.into(),
            graph: canonical_document(x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub dynamics: String,
    pub passed: bool,
    pub samples: usize,
    pub parameters: Vec<(String, String)>,
    pub measured: Option<String>,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn new(property: &str, dynamics: &str, samples: usize) -> Self {
        CheckReport {
            property: property.into(),
            dynamics: dynamics.into(),
            passed: true,
            samples,
            parameters: Vec::new(),
            measured: None,
            witness: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.push((key.into(), value.to_string()));
        self
    }

    pub fn measured(mut self, value: impl fmt::Display) -> Self {
        self.measured = Some(value.to_string());
        self
    }

    pub fn fail_with(mut self, witness: Option<Witness>) -> Self {
        if witness.is_some() {
            self.passed = false;
            self.witness = witness;
        }
        self
    }

    /// One summary line, followed by the witness when the check failed.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} dynamics={} samples={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.property,
            self.dynamics,
            self.samples
        );
        for (k, v) in &self.parameters {
            out.push_str(&format!(" {k}={v}"));
        }
        if let Some(m) = &self.measured {
            out.push_str(&format!(" measured={m}"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("\n  witness: {}", w.detail));
            for line in w.graph.lines() {
                out.push_str(&format!("\n    {line}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl<D: Dynamics + ?Sized> Dynamics for Box<D> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn formalism(&self) -> Formalism {
        (**self).formalism()
    }

    fn evolve(&self, x: &CanonicalPointedGraph) -> Result<Evolution, DynamicsError> {
        (**self).evolve(x)
    }
}
