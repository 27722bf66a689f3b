//! The rewrite system S ∪ M on syntactic name terms.
//!
//! This is a deliberately naive engine used to cross-check the leaf-forest
//! normal forms of [`crate::name`]: it rewrites terms one redex at a time in any
//! order, and enumerates the critical pairs of the three rules by unification.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::name::{normalize, Atom, Dir, NameTerm, RawTerm};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(String),
    Atom(Atom),
    Proj(Box<Term>, Dir),
    Join(Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    /// `(u ^ v).l -> u`
    SL,
    /// `(u ^ v).r -> v`
    SR,
    /// `(u.l ^ u.r) -> u`
    M,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::SL, Rule::SR, Rule::M];

    pub fn name(self) -> &'static str {
        match self {
            Rule::SL => "S.l",
            Rule::SR => "S.r",
            Rule::M => "M",
        }
    }

    fn sides(self, tag: &str) -> (Term, Term) {
        let x = Term::var(&format!("u{tag}"));
        let y = Term::var(&format!("v{tag}"));
        match self {
            Rule::SL => (Term::join(x.clone(), y).proj(Dir::L), x),
            Rule::SR => (Term::join(x, y.clone()).proj(Dir::R), y),
            Rule::M => (
                Term::join(x.clone().proj(Dir::L), x.clone().proj(Dir::R)),
                x,
            ),
        }
    }
}

/// Position of a subterm: child indices, 1-based as usual for rewriting.
pub type Position = Vec<u8>;

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn atom(s: &str) -> Term {
        Term::Atom(Atom::new(s))
    }

    pub fn proj(self, d: Dir) -> Term {
        Term::Proj(Box::new(self), d)
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Atom(_) => 1,
            Term::Proj(t, _) => 1 + t.size(),
            Term::Join(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn from_raw(t: &RawTerm) -> Term {
        match t {
            RawTerm::Atom(a) => Term::Atom(a.clone()),
            RawTerm::Proj(u, d) => Term::from_raw(u).proj(*d),
            RawTerm::Join(u, v) => Term::join(Term::from_raw(u), Term::from_raw(v)),
        }
    }

    /// `None` when the term contains variables.
    pub fn to_raw(&self) -> Option<RawTerm> {
        Some(match self {
            Term::Var(_) => return None,
            Term::Atom(a) => RawTerm::Atom(a.clone()),
            Term::Proj(u, d) => u.to_raw()?.proj(*d),
            Term::Join(u, v) => RawTerm::join(u.to_raw()?, v.to_raw()?),
        })
    }

    pub fn subterm(&self, pos: &[u8]) -> Option<&Term> {
        let Some((&i, rest)) = pos.split_first() else {
            return Some(self);
        };
        match (self, i) {
            (Term::Proj(t, _), 1) => t.subterm(rest),
            (Term::Join(a, _), 1) => a.subterm(rest),
            (Term::Join(_, b), 2) => b.subterm(rest),
            _ => None,
        }
    }

    fn replace(&self, pos: &[u8], new: Term) -> Term {
        let Some((&i, rest)) = pos.split_first() else {
            return new;
        };
        match (self, i) {
            (Term::Proj(t, d), 1) => t.replace(rest, new).proj(*d),
            (Term::Join(a, b), 1) => Term::join(a.replace(rest, new), (**b).clone()),
            (Term::Join(a, b), 2) => Term::join((**a).clone(), b.replace(rest, new)),
            _ => panic!("invalid position"),
        }
    }

    /// Positions of subterms that are not variables, in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &Term, pos: &mut Position, out: &mut Vec<Position>) {
            if matches!(t, Term::Var(_)) {
                return;
            }
            out.push(pos.clone());
            match t {
                Term::Proj(u, _) => {
                    pos.push(1);
                    go(u, pos, out);
                    pos.pop();
                }
                Term::Join(a, b) => {
                    pos.push(1);
                    go(a, pos, out);
                    pos.pop();
                    pos.push(2);
                    go(b, pos, out);
                    pos.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Result of contracting `rule` at the root, if it applies.
    pub fn contract(&self, rule: Rule) -> Option<Term> {
        match (rule, self) {
            (Rule::SL, Term::Proj(t, Dir::L)) => match &**t {
                Term::Join(u, _) => Some((**u).clone()),
                _ => None,
            },
            (Rule::SR, Term::Proj(t, Dir::R)) => match &**t {
                Term::Join(_, v) => Some((**v).clone()),
                _ => None,
            },
            (Rule::M, Term::Join(a, b)) => match (&**a, &**b) {
                (Term::Proj(u, Dir::L), Term::Proj(v, Dir::R)) if u == v => Some((**u).clone()),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn redexes(&self) -> Vec<(Position, Rule)> {
        let mut out = Vec::new();
        for pos in self.positions() {
            let t = self.subterm(&pos).expect("position from positions()");
            for rule in Rule::ALL {
                if t.contract(rule).is_some() {
                    out.push((pos.clone(), rule));
                }
            }
        }
        out
    }

    pub fn rewrite_at(&self, pos: &[u8], rule: Rule) -> Option<Term> {
        let reduct = self.subterm(pos)?.contract(rule)?;
        Some(self.replace(pos, reduct))
    }

    pub fn is_normal(&self) -> bool {
        self.redexes().is_empty()
    }

    /// Rewrites with uniformly chosen redexes until a normal form is reached.
    /// Every step is checked to strictly decrease the size.
    pub fn random_normal_form<R: Rng>(&self, rng: &mut R) -> (Term, usize) {
        let mut t = self.clone();
        let mut steps = 0;
        loop {
            let redexes = t.redexes();
            let Some((pos, rule)) = redexes.choose(rng) else {
                return (t, steps);
            };
            let next = t.rewrite_at(pos, *rule).expect("redex applies");
            assert!(next.size() < t.size(), "rewrite step did not decrease size");
            t = next;
            steps += 1;
        }
    }

    /// Leftmost-outermost normal form.
    pub fn normal_form(&self) -> Term {
        let mut t = self.clone();
        while let Some((pos, rule)) = t.redexes().into_iter().next() {
            t = t.rewrite_at(&pos, rule).expect("redex applies");
        }
        t
    }

    fn substitute(&self, s: &Subst) -> Term {
        match self {
            Term::Var(x) => match s.get(x) {
                Some(t) => t.substitute(s),
                None => self.clone(),
            },
            Term::Atom(_) => self.clone(),
            Term::Proj(u, d) => u.substitute(s).proj(*d),
            Term::Join(a, b) => Term::join(a.substitute(s), b.substitute(s)),
        }
    }

    fn occurs(&self, x: &str, s: &Subst) -> bool {
        match self {
            Term::Var(y) => y == x || s.get(y).is_some_and(|t| t.occurs(x, s)),
            Term::Atom(_) => false,
            Term::Proj(u, _) => u.occurs(x, s),
            Term::Join(a, b) => a.occurs(x, s) || b.occurs(x, s),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "?{x}"),
            Term::Atom(a) => write!(f, "{}", a.as_str()),
            Term::Proj(t, d) => write!(f, "{t}.{}", d.letter()),
            Term::Join(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

type Subst = BTreeMap<String, Term>;

fn unify(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let a = a.substitute(s);
    let b = b.substitute(s);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if t.occurs(x, s) {
                return false;
            }
            s.insert(x.clone(), t.clone());
            true
        }
        (Term::Atom(x), Term::Atom(y)) => x == y,
        (Term::Proj(u, d), Term::Proj(v, e)) => d == e && unify(u, v, s),
        (Term::Join(a1, b1), Term::Join(a2, b2)) => unify(a1, a2, s) && unify(b1, b2, s),
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub outer: Rule,
    pub inner: Rule,
    pub position: Position,
    pub peak: Term,
    pub left: Term,
    pub right: Term,
    pub joinable: bool,
}

/// All nontrivial overlaps of S ∪ M. Variables are treated as constants when
/// testing joinability, which is sound since both reducts are closed under
/// the same substitution.
pub fn critical_pairs() -> Vec<CriticalPair> {
    let mut out = Vec::new();
    for outer in Rule::ALL {
        let (l1, r1) = outer.sides("1");
        for pos in l1.positions() {
            for inner in Rule::ALL {
                if pos.is_empty() && inner == outer {
                    continue;
                }
                let (l2, r2) = inner.sides("2");
                let mut s = Subst::new();
                if !unify(l1.subterm(&pos).expect("own position"), &l2, &mut s) {
                    continue;
                }
                let peak = l1.substitute(&s);
                let left = r1.substitute(&s);
                let right = l1.replace(&pos, r2).substitute(&s);
                let joinable = left.normal_form() == right.normal_form();
                out.push(CriticalPair {
                    outer,
                    inner,
                    position: pos.clone(),
                    peak,
                    left,
                    right,
                    joinable,
                });
            }
        }
    }
    out
}

/// A random ground term built with projections and joins over `atoms`.
pub fn random_term<R: Rng>(rng: &mut R, depth: usize, atoms: &[&str]) -> Term {
    if depth == 0 || rng.gen_bool(0.2) {
        return Term::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    match rng.gen_range(0..5) {
        0 => random_term(rng, depth - 1, atoms).proj(Dir::L),
        1 => random_term(rng, depth - 1, atoms).proj(Dir::R),
        2 => {
            let u = random_term(rng, depth.saturating_sub(2), atoms);
            Term::join(u.clone().proj(Dir::L), u.proj(Dir::R))
        }
        _ => Term::join(
            random_term(rng, depth - 1, atoms),
            random_term(rng, depth - 1, atoms),
        ),
    }
}

/// The leaf-forest normal form of a ground term.
pub fn forest_normal_form(t: &Term) -> Option<NameTerm> {
    t.to_raw().map(|r| normalize(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_normal_forms(t: &Term, out: &mut Vec<Term>) {
        let redexes = t.redexes();
        if redexes.is_empty() {
            out.push(t.clone());
        }
        for (pos, rule) in redexes {
            all_normal_forms(&t.rewrite_at(&pos, rule).unwrap(), out);
        }
    }

    #[test]
    fn every_rewrite_order_agrees_on_example() {
        let xy = Term::join(Term::atom("x"), Term::atom("y"));
        let t = Term::join(xy.clone().proj(Dir::L), xy.clone().proj(Dir::R));
        let mut nfs = Vec::new();
        all_normal_forms(&t, &mut nfs);
        assert!(nfs.len() >= 2);
        assert!(nfs.iter().all(|n| *n == xy));
    }

    #[test]
    fn four_critical_pairs_all_joinable() {
        let cps = critical_pairs();
        assert_eq!(cps.len(), 4);
        assert!(cps.iter().all(|c| c.joinable));
        let m_in_s = cps
            .iter()
            .find(|c| c.outer == Rule::SL && c.inner == Rule::M)
            .unwrap();
        assert_eq!(m_in_s.position, vec![1]);
        assert_eq!(m_in_s.left.normal_form(), Term::var("u2").proj(Dir::L));
    }

    #[test]
    fn random_orders_match_forest() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let t = random_term(&mut rng, 6, &["x", "y", "z"]);
            let (a, _) = t.random_normal_form(&mut rng);
            let (b, _) = t.random_normal_form(&mut rng);
            assert_eq!(a, b);
            assert_eq!(forest_normal_form(&a), forest_normal_form(&t));
        }
    }
}
