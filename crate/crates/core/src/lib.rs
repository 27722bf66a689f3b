//! Reversible causal graph dynamics over port graphs, in three formalisms:
//! anonymous (pointed graphs modulo), invisible matter, and named graphs.

pub mod checks;
pub mod document;
pub mod dynamics;
pub mod graph;
pub mod hm;
pub mod maps;
pub mod matter;
pub mod mutants;
pub mod name;
pub mod naming;
pub mod pointed;
pub mod ports;
pub mod sample;
pub mod trs;

pub use dynamics::{
    CheckReport, Dynamics, DynamicsError, Evolution, Formalism, Identity, MatterHm, PointedHm,
    Stage, Witness,
};
pub use graph::{build_graph, Edge, EdgeLabel, GraphError, PortGraph, Slot, VertexLabel};
pub use matter::{attach_matter, decode, eta, MatterError, MatterGraph, MatterWord, Site};
pub use name::{Atom, Dir, NameTerm, RawTerm};
pub use pointed::{
    anonymize, anonymize_graph, canonicalize, distance, AnonymousGraph, CanonicalPointedGraph,
    Distance, PointedError,
};
pub use ports::{Path, Port, PortMask, PortSet};
