//! Port families, port masks and port paths.

use std::fmt;
use std::sync::Arc;

use crate::graph::GraphError;

/// Index of a port inside its [`PortSet`]. Declaration order is the port order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Port(pub u8);

impl Port {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The finite port set π of a graph family, in declaration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PortSet {
    names: Arc<[String]>,
}

pub const MAX_PORTS: usize = 64;

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.chars().next().unwrap().is_ascii_digit()
}

impl PortSet {
    pub fn new<I, S>(names: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_PORTS {
            return Err(GraphError::TooManyPorts(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(GraphError::UnknownPort(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(GraphError::DuplicatePort(n.clone()));
            }
        }
        Ok(PortSet {
            names: names.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn port(&self, name: &str) -> Option<Port> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Port(i as u8))
    }

    pub fn name(&self, p: Port) -> &str {
        &self.names[p.index()]
    }

    pub fn contains(&self, p: Port) -> bool {
        p.index() < self.names.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Port> + '_ {
        (0..self.names.len()).map(|i| Port(i as u8))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Appends `extra` ports after the existing ones.
    pub fn extended(&self, extra: &[&str]) -> Result<PortSet, GraphError> {
        let mut all: Vec<String> = self.names.to_vec();
        all.extend(extra.iter().map(|s| s.to_string()));
        PortSet::new(all)
    }

    /// The first `n` ports as a family of their own.
    pub fn prefix(&self, n: usize) -> PortSet {
        PortSet {
            names: self.names[..n].to_vec().into(),
        }
    }
}

/// A subset of a port set, as a bitmask. Used as the particle state Σ = 𝒫(π).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PortMask(pub u64);

impl PortMask {
    pub const EMPTY: PortMask = PortMask(0);

    pub fn single(p: Port) -> Self {
        PortMask(1 << p.0)
    }

    pub fn of(ports: &[Port]) -> Self {
        ports.iter().fold(PortMask::EMPTY, |m, &p| m.with(p))
    }

    pub fn contains(self, p: Port) -> bool {
        self.0 & (1 << p.0) != 0
    }

    pub fn with(self, p: Port) -> Self {
        PortMask(self.0 | (1 << p.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Port> {
        (0..64u8).filter(move |i| self.0 & (1 << i) != 0).map(Port)
    }
}

/// A word over Π = π²: each letter `(a, b)` exits the current vertex through
/// `a` and enters the next one through `b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Path(pub Vec<(Port, Port)>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().map(|&(a, b)| (b, a)).collect())
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }

    pub fn push(&mut self, a: Port, b: Port) {
        self.0.push((a, b));
    }

    /// Parses `ab.cd` style words; letters separated by `.` and each letter is
    /// two port names. Multi-character port names are written `a:b`.
    pub fn parse(text: &str, ports: &PortSet) -> Result<Path, GraphError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "eps" {
            return Ok(Path::empty());
        }
        let mut out = Vec::new();
        for letter in text.split('.') {
            let (a, b) = match letter.split_once(':') {
                Some(pair) => pair,
                None => {
                    let mut cs = letter.char_indices();
                    match (cs.next(), cs.next(), cs.next()) {
                        (Some(_), Some((i, _)), None) => (&letter[..i], &letter[i..]),
                        _ => return Err(GraphError::UnknownPort(letter.to_string())),
                    }
                }
            };
            let pa = ports
                .port(a)
                .ok_or_else(|| GraphError::UnknownPort(a.to_string()))?;
            let pb = ports
                .port(b)
                .ok_or_else(|| GraphError::UnknownPort(b.to_string()))?;
            out.push((pa, pb));
        }
        Ok(Path(out))
    }

    pub fn display<'a>(&'a self, ports: &'a PortSet) -> PathDisplay<'a> {
        PathDisplay { path: self, ports }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    ports: &'a PortSet,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return write!(f, "ε");
        }
        let short = self.ports.names().iter().all(|n| n.chars().count() == 1);
        for (i, &(a, b)) in self.path.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if short {
                write!(f, "{}{}", self.ports.name(a), self.ports.name(b))?;
            } else {
                write!(f, "{}:{}", self.ports.name(a), self.ports.name(b))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_is_an_involution() {
        let ports = PortSet::new(["a", "b", "c"]).unwrap();
        let p = Path::parse("bc.ac", &ports).unwrap();
        assert_eq!(p.reversed().display(&ports).to_string(), "ca.cb");
        assert_eq!(p.reversed().reversed(), p);
    }

    #[test]
    fn duplicate_ports_rejected() {
        assert!(matches!(
            PortSet::new(["a", "a"]),
            Err(GraphError::DuplicatePort(_))
        ));
    }

    #[test]
    fn mask_ops() {
        let m = PortMask::of(&[Port(0), Port(2)]);
        assert!(m.contains(Port(2)));
        assert!(!m.contains(Port(1)));
        assert_eq!(m.len(), 2);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![Port(0), Port(2)]);
    }
}
