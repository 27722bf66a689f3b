//! The name algebra: symbolic everywhere-infinite binary trees.
//!
//! Raw terms are built from atoms, projections `.l`/`.r` and the join `^`.
//! Every term is stored in normal form as a *leaf forest*: a finite binary tree
//! of joins whose leaves are `(atom, address)` pairs, meaning "the subtree of
//! the atom at that address". Leaf forests are kept M-reduced, so two terms are
//! equal in the algebra iff their forests are identical.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn letter(self) -> char {
        match self {
            Dir::L => 'l',
            Dir::R => 'r',
        }
    }
}

pub fn word_to_string(w: &[Dir]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|d| d.letter()).collect()
}

/// An interned atom from the countable name universe.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(s: &str) -> Self {
        Atom(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Node {
    Leaf(Atom, Vec<Dir>),
    Join(Box<Node>, Box<Node>),
}

/// A name in normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NameTerm(Node);

/// A term as written, before normalization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RawTerm {
    Atom(Atom),
    Proj(Box<RawTerm>, Dir),
    Join(Box<RawTerm>, Box<RawTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("cannot parse name term `{0}`")]
    Parse(String),
    #[error("atom `{0}` is not in the domain of the renaming")]
    AtomNotInDomain(String),
    #[error("renaming is not injective on atom `{0}`")]
    NotInjective(String),
    #[error("renaming images of `{0}` and `{1}` are intersectant")]
    IntersectantImages(String, String),
}

fn join_nodes(a: Node, b: Node) -> Node {
    // Rule M at the new node; children are already reduced.
    if let (Node::Leaf(x, w), Node::Leaf(y, v)) = (&a, &b) {
        if x == y && w.len() == v.len() && !w.is_empty() {
            let n = w.len() - 1;
            if w[..n] == v[..n] && w[n] == Dir::L && v[n] == Dir::R {
                return Node::Leaf(x.clone(), w[..n].to_vec());
            }
        }
    }
    Node::Join(Box::new(a), Box::new(b))
}

fn project_node(n: &Node, d: Dir) -> Node {
    match n {
        Node::Leaf(x, w) => {
            let mut w = w.clone();
            w.push(d);
            Node::Leaf(x.clone(), w)
        }
        Node::Join(a, b) => match d {
            Dir::L => (**a).clone(),
            Dir::R => (**b).clone(),
        },
    }
}

impl NameTerm {
    pub fn atom(s: &str) -> Self {
        NameTerm(Node::Leaf(Atom::new(s), Vec::new()))
    }

    pub fn from_atom(a: Atom) -> Self {
        NameTerm(Node::Leaf(a, Vec::new()))
    }

    pub fn project(&self, d: Dir) -> NameTerm {
        NameTerm(project_node(&self.0, d))
    }

    pub fn l(&self) -> NameTerm {
        self.project(Dir::L)
    }

    pub fn r(&self) -> NameTerm {
        self.project(Dir::R)
    }

    /// `self.t` for a word `t`.
    pub fn with_suffix(&self, t: &[Dir]) -> NameTerm {
        let mut n = self.0.clone();
        for &d in t {
            n = project_node(&n, d);
        }
        NameTerm(n)
    }

    pub fn join(u: &NameTerm, v: &NameTerm) -> NameTerm {
        NameTerm(join_nodes(u.0.clone(), v.0.clone()))
    }

    pub fn is_atom(&self) -> bool {
        matches!(&self.0, Node::Leaf(_, w) if w.is_empty())
    }

    /// Leaves with their tree position inside the forest.
    pub fn leaves(&self) -> Vec<(Vec<Dir>, &Atom, &[Dir])> {
        fn go<'a>(n: &'a Node, pos: &mut Vec<Dir>, out: &mut Vec<(Vec<Dir>, &'a Atom, &'a [Dir])>) {
            match n {
                Node::Leaf(x, w) => out.push((pos.clone(), x, w)),
                Node::Join(a, b) => {
                    pos.push(Dir::L);
                    go(a, pos, out);
                    pos.pop();
                    pos.push(Dir::R);
                    go(b, pos, out);
                    pos.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&self.0, &mut Vec::new(), &mut out);
        out
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self
            .leaves()
            .into_iter()
            .map(|(_, a, _)| a.clone())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Node count of the normal form written as a term.
    pub fn size(&self) -> usize {
        self.to_raw().size()
    }

    /// The word `t` with `self.t == v`, if one exists.
    pub fn suffix_to(&self, v: &NameTerm) -> Option<Vec<Dir>> {
        fn go(u: &Node, v: &Node) -> Option<Vec<Dir>> {
            if u == v {
                return Some(Vec::new());
            }
            match u {
                Node::Leaf(x, w) => match v {
                    Node::Leaf(y, z) if x == y && z.len() > w.len() && z[..w.len()] == w[..] => {
                        Some(z[w.len()..].to_vec())
                    }
                    _ => None,
                },
                Node::Join(a, b) => {
                    if let Some(mut t) = go(a, v) {
                        t.insert(0, Dir::L);
                        return Some(t);
                    }
                    go(b, v).map(|mut t| {
                        t.insert(0, Dir::R);
                        t
                    })
                }
            }
        }
        go(&self.0, &v.0)
    }

    /// A witness `(t, t')` of `self.t == other.t'`, minimizing `max(|t|,|t'|)`
    /// then lexicographically.
    pub fn intersection_witness(&self, other: &NameTerm) -> Option<(Vec<Dir>, Vec<Dir>)> {
        let mut best: Option<(Vec<Dir>, Vec<Dir>)> = None;
        for (p, x, w) in self.leaves() {
            for (q, y, v) in other.leaves() {
                if x != y {
                    continue;
                }
                let cand = if v.len() >= w.len() && v[..w.len()] == *w {
                    let mut t = p.clone();
                    t.extend_from_slice(&v[w.len()..]);
                    (t, q.clone())
                } else if w.len() > v.len() && w[..v.len()] == *v {
                    let mut t2 = q.clone();
                    t2.extend_from_slice(&w[v.len()..]);
                    (p.clone(), t2)
                } else {
                    continue;
                };
                let key = |c: &(Vec<Dir>, Vec<Dir>)| (c.0.len().max(c.1.len()), c.clone());
                if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                    best = Some(cand);
                }
            }
        }
        best
    }

    pub fn to_raw(&self) -> RawTerm {
        fn go(n: &Node) -> RawTerm {
            match n {
                Node::Leaf(x, w) => w.iter().fold(RawTerm::Atom(x.clone()), |t, &d| {
                    RawTerm::Proj(Box::new(t), d)
                }),
                Node::Join(a, b) => RawTerm::Join(Box::new(go(a)), Box::new(go(b))),
            }
        }
        go(&self.0)
    }

    pub fn parse(s: &str) -> Result<NameTerm, NameError> {
        Ok(normalize(&RawTerm::parse(s)?))
    }

    fn substitute(&self, map: &BTreeMap<Atom, NameTerm>) -> Result<NameTerm, NameError> {
        fn go(n: &Node, map: &BTreeMap<Atom, NameTerm>) -> Result<Node, NameError> {
            match n {
                Node::Leaf(x, w) => {
                    let img = map
                        .get(x)
                        .ok_or_else(|| NameError::AtomNotInDomain(x.as_str().to_string()))?;
                    Ok(img.with_suffix(w).0)
                }
                Node::Join(a, b) => Ok(join_nodes(go(a, map)?, go(b, map)?)),
            }
        }
        go(&self.0, map).map(NameTerm)
    }
}

/// `u` and `v` share a descendant: `u.t == v.t'` for some words `t`, `t'`.
pub fn intersectant(u: &NameTerm, v: &NameTerm) -> bool {
    u.intersection_witness(v).is_some()
}

/// Leaves of all names, pairwise prefix-free per atom.
pub(crate) fn forest_is_well_named<'a>(names: impl Iterator<Item = &'a NameTerm>) -> bool {
    let mut by_atom: BTreeMap<&Atom, Vec<&[Dir]>> = BTreeMap::new();
    let names: Vec<&NameTerm> = names.collect();
    for n in &names {
        for (_, x, w) in n.leaves() {
            by_atom.entry(x).or_default().push(w);
        }
    }
    for ws in by_atom.values_mut() {
        // Sorted words: a prefix sorts right before some word extending it.
        ws.sort();
        for pair in ws.windows(2) {
            if pair[1].len() >= pair[0].len() && pair[1][..pair[0].len()] == *pair[0] {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for NameTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_raw())
    }
}

impl fmt::Display for RawTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawTerm::Atom(a) => write!(f, "{}", a.as_str()),
            RawTerm::Proj(t, d) => write!(f, "{}.{}", t, d.letter()),
            RawTerm::Join(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

/// Normal form under rules S and M.
pub fn normalize(t: &RawTerm) -> NameTerm {
    match t {
        RawTerm::Atom(a) => NameTerm::from_atom(a.clone()),
        RawTerm::Proj(u, d) => normalize(u).project(*d),
        RawTerm::Join(u, v) => NameTerm::join(&normalize(u), &normalize(v)),
    }
}

impl RawTerm {
    pub fn atom(s: &str) -> Self {
        RawTerm::Atom(Atom::new(s))
    }

    pub fn proj(self, d: Dir) -> Self {
        RawTerm::Proj(Box::new(self), d)
    }

    pub fn join(a: RawTerm, b: RawTerm) -> Self {
        RawTerm::Join(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            RawTerm::Atom(_) => 1,
            RawTerm::Proj(t, _) => 1 + t.size(),
            RawTerm::Join(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn parse(s: &str) -> Result<RawTerm, NameError> {
        let mut p = Parser { src: s, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(NameError::Parse(s.to_string()));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> NameError {
        NameError::Parse(self.src.to_string())
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn term(&mut self) -> Result<RawTerm, NameError> {
        self.skip_ws();
        let mut t = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.term()?;
                self.skip_ws();
                if self.peek() != Some('^') {
                    return Err(self.err());
                }
                self.pos += 1;
                let b = self.term()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err());
                }
                self.pos += 1;
                RawTerm::join(a, b)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                RawTerm::atom(&self.src[start..self.pos])
            }
            _ => return Err(self.err()),
        };
        while self.peek() == Some('.') {
            self.pos += 1;
            let start = self.pos;
            while let Some(c @ ('l' | 'r')) = self.peek() {
                t = t.proj(if c == 'l' { Dir::L } else { Dir::R });
                self.pos += 1;
            }
            if self.pos == start
                || matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(self.err());
            }
        }
        Ok(t)
    }
}

/// A renaming: atoms mapped to pairwise non-intersectant names, extended
/// homomorphically to the whole algebra.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Renaming {
    map: BTreeMap<Atom, NameTerm>,
}

impl Renaming {
    pub fn new(pairs: impl IntoIterator<Item = (Atom, NameTerm)>) -> Result<Self, NameError> {
        let map: BTreeMap<Atom, NameTerm> = pairs.into_iter().collect();
        let entries: Vec<_> = map.iter().collect();
        for (i, (x, u)) in entries.iter().enumerate() {
            if !forest_is_well_named(std::iter::once(*u)) {
                return Err(NameError::NotInjective(x.as_str().to_string()));
            }
            for (y, v) in &entries[i + 1..] {
                if u == v {
                    return Err(NameError::NotInjective(y.as_str().to_string()));
                }
                if intersectant(u, v) {
                    return Err(NameError::IntersectantImages(
                        x.as_str().to_string(),
                        y.as_str().to_string(),
                    ));
                }
            }
        }
        Ok(Renaming { map })
    }

    pub fn identity(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Renaming {
            map: atoms
                .into_iter()
                .map(|a| (a.clone(), NameTerm::from_atom(a)))
                .collect(),
        }
    }

    pub fn apply(&self, t: &NameTerm) -> Result<NameTerm, NameError> {
        t.substitute(&self.map)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Atom> {
        self.map.keys()
    }
}

pub fn apply_renaming(r: &Renaming, t: &NameTerm) -> Result<NameTerm, NameError> {
    r.apply(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NameTerm {
        NameTerm::parse(s).unwrap()
    }

    #[test]
    fn rule_s_and_m() {
        assert_eq!(n("(x ^ y).l"), n("x"));
        assert_eq!(n("(x ^ y).r"), n("y"));
        assert_eq!(n("(x.l ^ x.r)"), n("x"));
        assert_eq!(n("((x ^ y).l ^ (x ^ y).r)"), n("(x ^ y)"));
    }

    #[test]
    fn project_and_join() {
        let x = n("x");
        let y = n("y");
        assert_eq!(NameTerm::join(&x, &y).r(), y);
        assert_eq!(NameTerm::join(&x.l(), &x.r()), x);
        assert_eq!(x.l().to_string(), "x.l");
        let u = n("(x.l ^ y)");
        assert_eq!(NameTerm::join(&u.l(), &u.r()), u);
    }

    #[test]
    fn join_is_neither_commutative_nor_associative() {
        let (x, y, z) = (n("x"), n("y"), n("z"));
        assert_ne!(NameTerm::join(&x, &y), NameTerm::join(&y, &x));
        assert_ne!(
            NameTerm::join(&NameTerm::join(&x, &y), &z),
            NameTerm::join(&x, &NameTerm::join(&y, &z))
        );
    }

    #[test]
    fn intersectance_examples() {
        assert!(intersectant(&n("x"), &n("x.l")));
        assert!(!intersectant(&n("x"), &n("y")));
        assert!(intersectant(&n("(x ^ y)"), &n("y")));
        assert!(!intersectant(&n("x.l"), &n("x.r")));
        assert_eq!(
            n("(x ^ y)").intersection_witness(&n("y")),
            Some((vec![Dir::R], vec![]))
        );
    }

    #[test]
    fn suffixes() {
        assert_eq!(n("x").suffix_to(&n("x.l.r")), Some(vec![Dir::L, Dir::R]));
        assert_eq!(
            n("(x ^ y)").suffix_to(&n("y.l")),
            Some(vec![Dir::R, Dir::L])
        );
        assert_eq!(n("x.l").suffix_to(&n("x")), None);
    }

    #[test]
    fn renaming_examples() {
        let r = Renaming::new([(Atom::new("x"), n("y"))]).unwrap();
        assert_eq!(r.apply(&n("x.l")).unwrap(), n("y.l"));
        let r = Renaming::new([(Atom::new("x"), n("(p ^ q)"))]).unwrap();
        assert_eq!(r.apply(&n("x.l")).unwrap(), n("p"));
        let id = Renaming::identity([Atom::new("x"), Atom::new("y")]);
        let t = n("((x.l ^ y) ^ x.r.r)");
        assert_eq!(id.apply(&t).unwrap(), t);
        assert!(matches!(
            r.apply(&n("z")),
            Err(NameError::AtomNotInDomain(_))
        ));
        assert!(matches!(
            Renaming::new([(Atom::new("x"), n("y")), (Atom::new("z"), n("y.l"))]),
            Err(NameError::IntersectantImages(..))
        ));
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["x", "x.l.r", "(x ^ y.l)", "((a ^ b) ^ c.r)"] {
            assert_eq!(n(s).to_string(), s);
        }
        assert_eq!(n("x.lr"), n("x.l.r"));
        assert!(NameTerm::parse("(x ^ y").is_err());
        assert!(NameTerm::parse("x.q").is_err());
        assert!(NameTerm::parse("").is_err());
    }
}
