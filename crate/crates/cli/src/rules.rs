//! Rule files: the particle successor, the collision variant, and optional
//! deliberate breakage used to test the checkers.
//!
//! ```text
//! # comments start with '#'
//! successor a b, b a;
//! mode split-only;
//! relocation swapped;
//! variant teleport 6;
//! ```

use std::fmt;

use revcgd::dynamics::{Dynamics, MatterHm, PointedHm};
use revcgd::hm::{CollisionMode, Direction, HmError, SplitRelocation, SuccessorMap};
use revcgd::mutants::{ForgetMatter, MirroredMatter, NonLocal, ShiftedSuccessor, Teleport};
use revcgd::sample::port_set;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulesError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RulesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rules line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for RulesError {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    #[default]
    Standard,
    ShiftedSuccessor,
    NonLocal,
    Teleport(usize),
    ForwardInverse,
    ForgetMatter,
    MirroredMatter,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rules {
    pub successor: Option<Vec<(String, String)>>,
    pub mode: CollisionMode,
    pub relocation: SplitRelocation,
    pub variant: Variant,
}

fn parse_variant(words: &[&str]) -> Result<Variant, String> {
    Ok(match words {
        ["standard"] => Variant::Standard,
        ["shifted-successor"] => Variant::ShiftedSuccessor,
        ["nonlocal"] => Variant::NonLocal,
        ["teleport"] => Variant::Teleport(6),
        ["teleport", n] => Variant::Teleport(
            n.parse()
                .map_err(|_| format!("teleport length `{n}` is not a number"))?,
        ),
        ["forward-inverse"] => Variant::ForwardInverse,
        ["forget-matter"] => Variant::ForgetMatter,
        ["mirrored-matter"] => Variant::MirroredMatter,
        _ => return Err(format!("unknown variant `{}`", words.join(" "))),
    })
}

pub fn parse_rules(text: &str) -> Result<Rules, RulesError> {
    let mut rules = Rules::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| RulesError {
            line: i + 1,
            message,
        };
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| err("statement must end with `;`".into()))?;
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        match head {
            "successor" => {
                let pairs = rest
                    .split(',')
                    .map(
                        |pair| match pair.split_whitespace().collect::<Vec<_>>()[..] {
                            [x, y] => Ok((x.to_string(), y.to_string())),
                            _ => Err(err(format!("expected `port port`, got `{}`", pair.trim()))),
                        },
                    )
                    .collect::<Result<Vec<_>, _>>()?;
                rules.successor = Some(pairs);
            }
            "mode" => {
                rules.mode = match words[..] {
                    ["standard"] => CollisionMode::Standard,
                    ["split-only"] => CollisionMode::SplitOnly,
                    _ => return Err(err(format!("unknown mode `{rest}`"))),
                }
            }
            "relocation" => {
                rules.relocation = match words[..] {
                    ["standard"] => SplitRelocation::Standard,
                    ["swapped"] => SplitRelocation::Swapped,
                    _ => return Err(err(format!("unknown relocation `{rest}`"))),
                }
            }
            "variant" => rules.variant = parse_variant(&words).map_err(err)?,
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }
    Ok(rules)
}

impl Rules {
    /// Number of ports the rules are written for, if they fix one.
    pub fn port_count(&self) -> Option<usize> {
        self.successor.as_ref().map(Vec::len)
    }

    /// The successor over the first `k` sample ports `a b c …`.
    pub fn successor_map(&self, k: usize) -> Result<Option<SuccessorMap>, HmError> {
        let Some(pairs) = &self.successor else {
            return Ok(None);
        };
        let pairs: Vec<(&str, &str)> = pairs
            .iter()
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect();
        SuccessorMap::from_pairs(&port_set(k), &pairs).map(Some)
    }

    fn inverse_direction(&self) -> Direction {
        match self.variant {
            Variant::ForwardInverse => Direction::Forward,
            _ => Direction::Backward,
        }
    }

    pub fn pointed(&self, k: usize, direction: Direction) -> Result<PointedHm, HmError> {
        Ok(PointedHm {
            successor: self.successor_map(k)?,
            mode: self.mode,
            direction,
            ..Default::default()
        })
    }

    pub fn matter(&self, k: usize, direction: Direction) -> Result<MatterHm, HmError> {
        Ok(MatterHm {
            successor: self.successor_map(k)?,
            mode: self.mode,
            direction,
            relocation: self.relocation,
        })
    }

    /// The forward dynamics on visible pointed graphs, with the variant applied.
    pub fn anonymous_dynamics(&self, k: usize) -> Result<Box<dyn Dynamics>, HmError> {
        let base = self.pointed(k, Direction::Forward)?;
        Ok(match self.variant {
            Variant::ShiftedSuccessor => Box::new(ShiftedSuccessor(base)),
            Variant::NonLocal => Box::new(NonLocal(base)),
            Variant::Teleport(length) => Box::new(Teleport {
                inner: base,
                length,
            }),
            _ => Box::new(base),
        })
    }

    pub fn anonymous_inverse(&self, k: usize) -> Result<Box<dyn Dynamics>, HmError> {
        Ok(Box::new(self.pointed(k, self.inverse_direction())?))
    }

    /// The forward dynamics on invisible-matter graphs, with the variant applied.
    pub fn matter_dynamics(&self, k: usize) -> Result<Box<dyn Dynamics>, HmError> {
        let base = self.matter(k, Direction::Forward)?;
        Ok(match self.variant {
            Variant::ShiftedSuccessor => Box::new(ShiftedSuccessor(base)),
            Variant::ForgetMatter => Box::new(ForgetMatter(self.pointed(k, Direction::Forward)?)),
            Variant::MirroredMatter => Box::new(MirroredMatter(base)),
            _ => Box::new(base),
        })
    }

    pub fn matter_inverse(&self, k: usize) -> Result<Box<dyn Dynamics>, HmError> {
        Ok(Box::new(self.matter(k, self.inverse_direction())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_statements() {
        let r = parse_rules("# x\nsuccessor a b, b a;\nmode split-only;\nrelocation swapped;\nvariant teleport 4;\n")
            .unwrap();
        assert_eq!(r.port_count(), Some(2));
        assert_eq!(r.mode, CollisionMode::SplitOnly);
        assert_eq!(r.relocation, SplitRelocation::Swapped);
        assert_eq!(r.variant, Variant::Teleport(4));
        assert!(r.successor_map(2).unwrap().is_some());
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_rules("mode standard;\n\nvariant bogus;\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse_rules("mode standard").is_err());
    }

    #[test]
    fn bad_successor_is_rejected() {
        let r = parse_rules("successor a b, a a;").unwrap();
        assert!(r.successor_map(2).is_err());
    }
}
