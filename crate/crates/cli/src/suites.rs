//! Property suites behind `revcgd check`.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use revcgd::checks::*;
use revcgd::dynamics::{CheckReport, DynamicsError, Witness};
use revcgd::hm::{collide, collide_matter, AlgebraNamer, CollisionRule, FreshIndices, HmError};
use revcgd::maps::{Commutation, Square};
use revcgd::matter::{eta, eta_inverse, words_up_to, MatterWord};
use revcgd::sample::*;
use revcgd::trs::{critical_pairs, forest_normal_form, random_term};
use revcgd::{
    anonymize, anonymize_graph, attach_matter, decode, CanonicalPointedGraph, Dir, MatterGraph,
    NameTerm, PortGraph,
};

use crate::rules::Rules;

pub const SUITES: [&str; 11] = [
    "shift",
    "continuity",
    "bounded",
    "scatter",
    "preserve",
    "quiesce",
    "invert",
    "involution",
    "trs",
    "eta",
    "commute-all",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_size: usize,
    pub matter_depth: usize,
    pub rules: Rules,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            max_size: 6,
            matter_depth: 3,
            rules: Rules::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`; expected one of {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("rules need {rules} ports but the suite `{suite}` only has two-port samples")]
    PortMismatch { suite: String, rules: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<HmError> for SuiteError {
    fn from(e: HmError) -> Self {
        SuiteError::Dynamics(e.into())
    }
}

impl SuiteConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn ports(&self) -> usize {
        self.rules.port_count().unwrap_or(2)
    }

    /// Every labelled cycle of length `3..=min(max_size, 6)`, then two random
    /// cycles of each length in `max_size..=4 * max_size + 4` (larger than any
    /// disk within the continuity limit), then random connected graphs.
    pub fn named_samples(&self) -> Vec<PortGraph<NameTerm>> {
        let k = self.ports();
        let mut rng = self.rng(1);
        let mut out = Vec::new();
        if k == 2 {
            out.extend(exhaustive_cycles(3..=self.max_size.clamp(3, 6)));
            for n in self.max_size..=4 * self.max_size + 4 {
                for _ in 0..2 {
                    out.push(random_cycle(&mut rng, n, n));
                }
            }
        }
        let k = if self.rules.port_count().is_some() {
            k
        } else {
            3
        };
        for _ in 0..40 {
            out.push(random_connected(&mut rng, k, self.max_size + 2, 3, 0.4));
        }
        out
    }

    pub fn pointed_samples(&self) -> Vec<CanonicalPointedGraph> {
        self.named_samples().iter().map(pointed).collect()
    }

    /// Small cycles with matter of the configured depth, pointed at `v0`.
    pub fn matter_samples(&self) -> Result<Vec<MatterGraph<usize>>, SuiteError> {
        if self.ports() != 2 {
            return Err(SuiteError::PortMismatch {
                suite: "matter".into(),
                rules: self.ports(),
            });
        }
        let mut rng = self.rng(2);
        let mut out = Vec::new();
        for n in 3..=5 {
            for _ in 0..3 {
                let g = ab_cycle(&random_states(&mut rng, 2, n, 0.4));
                let mg = attach_matter(&g, &vertex_name(0), self.matter_depth)
                    .map_err(DynamicsError::from)?;
                out.push(
                    decode(&mg.to_canonical().map_err(DynamicsError::from)?)
                        .map_err(DynamicsError::from)?,
                );
            }
        }
        Ok(out)
    }

    fn matter_pointed(&self) -> Result<Vec<CanonicalPointedGraph>, SuiteError> {
        self.matter_samples()?
            .iter()
            .map(|m| Ok(m.to_canonical().map_err(DynamicsError::from)?))
            .collect()
    }
}

/// `collide ∘ collide = id` in all three formalisms, on every labelled cycle
/// with lengths in `lengths`.
pub fn involution_report(
    lengths: std::ops::RangeInclusive<usize>,
    matter_depth: usize,
) -> Result<CheckReport, DynamicsError> {
    let samples = exhaustive_cycles(lengths.clone());
    let found = samples
        .par_iter()
        .map(
            |g| -> Result<Option<(String, &PortGraph<NameTerm>)>, DynamicsError> {
                let rule = CollisionRule::standard(g.ports())?;
                let once = collide(g, &rule, &mut AlgebraNamer)?.0;
                if collide(&once, &rule, &mut AlgebraNamer)?.0 != *g {
                    return Ok(Some(("named collision is not an involution".into(), g)));
                }
                let x = pointed(g);
                let u = x.graph();
                let a1 = collide(u, &rule, &mut FreshIndices::for_graph(u))?.0;
                let a2 = collide(&a1, &rule, &mut FreshIndices::for_graph(&a1))?.0;
                if anonymize_graph(&a2)? != anonymize(&x)? {
                    return Ok(Some(("anonymous collision is not an involution".into(), g)));
                }
                let mg = attach_matter(g, &vertex_name(0), matter_depth)?;
                let inner = mg
                    .sites()
                    .into_iter()
                    .filter(|s| s.matter_depth().is_none_or(|k| k < matter_depth));
                for site in inner {
                    let p = mg.with_pointer(site)?;
                    let m1 = collide_matter(&p, &rule, &mut AlgebraNamer, Default::default())?.0;
                    let m2 = collide_matter(&m1, &rule, &mut AlgebraNamer, Default::default())?.0;
                    if m2 != p {
                        return Ok(Some((
                            "invisible-matter collision is not an involution".into(),
                            g,
                        )));
                    }
                }
                Ok(None)
            },
        )
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))?;
    let witness = found.map(|(msg, g)| Witness::new(&pointed(g), msg));
    Ok(
        CheckReport::new("involution", "hm-collision", samples.len())
            .param(
                "lengths",
                format!("{}..={}", lengths.start(), lengths.end()),
            )
            .fail_with(witness),
    )
}

/// Random terms reach one normal form along every random rewrite order, each
/// step shrinks the term, and every critical pair is joinable.
pub fn trs_report(seed: u64, terms: usize, orders: usize) -> CheckReport {
    let atoms = ["x", "y", "z"];
    let failure = (0..terms).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let t = random_term(&mut rng, 6, &atoms);
        let expected = t.normal_form();
        if forest_normal_form(&t) != forest_normal_form(&expected) {
            return Some(format!("{t:?}: forest and rewrite normal forms differ"));
        }
        (0..orders).find_map(|_| {
            let (nf, _) = t.random_normal_form(&mut rng);
            (nf != expected).then(|| format!("{t:?}: two normal forms {nf:?} and {expected:?}"))
        })
    });
    let pairs = critical_pairs();
    let unjoinable = pairs.iter().find(|p| !p.joinable);
    let mut report = CheckReport::new("trs", "S+M", terms)
        .param("orders", orders)
        .param("critical-pairs", pairs.len());
    if let Some(msg) = failure {
        report.passed = false;
        report.witness = Some(Witness {
            detail: msg,
            graph: String::new(),
        });
    } else if let Some(p) = unjoinable {
        report.passed = false;
        report.witness = Some(Witness {
            detail: format!(
                "critical pair {:?}/{:?} at {:?} is not joinable",
                p.outer, p.inner, p.position
            ),
            graph: String::new(),
        });
    }
    report
}

/// η is injective on matter words and its image on `{w : |η(w)| ≤ max}` is
/// exactly `{l,r}^{1..=max}`.
pub fn eta_report(max: usize) -> CheckReport {
    let mut image = BTreeSet::new();
    let mut failure = None;
    let mut domain = 0;
    for w in words_up_to(max) {
        let t = eta(&MatterWord(w.clone()));
        if t.len() > max {
            continue;
        }
        domain += 1;
        if !image.insert(t.clone()) {
            failure = Some(format!("η is not injective at {}", MatterWord(w.clone())));
            break;
        }
        if eta_inverse(&t).ok() != Some(MatterWord(w.clone())) {
            failure = Some(format!("η⁻¹ does not invert η at {}", MatterWord(w)));
            break;
        }
    }
    let expected: BTreeSet<Vec<Dir>> = (1..=max)
        .flat_map(|n| {
            (0..1u32 << n).map(move |bits| {
                (0..n)
                    .map(|i| {
                        if bits >> (n - 1 - i) & 1 == 0 {
                            Dir::L
                        } else {
                            Dir::R
                        }
                    })
                    .collect()
            })
        })
        .collect();
    if failure.is_none() && image != expected {
        failure = Some(format!(
            "image has {} words, expected {}",
            image.len(),
            expected.len()
        ));
    }
    let mut report = CheckReport::new("eta", "eta", domain).param("max-length", max);
    if let Some(detail) = failure {
        report.passed = false;
        report.witness = Some(Witness {
            detail,
            graph: String::new(),
        });
    }
    report
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let k = cfg.ports();
    let rules = &cfg.rules;
    Ok(match name {
        "shift" => vec![
            check_shift_invariance(&rules.anonymous_dynamics(k)?, &cfg.pointed_samples())?,
            check_shift_invariance(&rules.matter_dynamics(k)?, &cfg.matter_pointed()?)?,
        ],
        "continuity" => {
            let d = rules.anonymous_dynamics(k)?;
            let xs = cfg.pointed_samples();
            (0..=2)
                .map(|m| check_continuity(&d, &xs, m, 2 * cfg.max_size))
                .collect::<Result<_, _>>()?
        }
        "bounded" => vec![check_boundedness(
            &rules.anonymous_dynamics(k)?,
            &cfg.pointed_samples(),
            1,
        )?],
        "scatter" => vec![check_bounded_scattering(
            &rules.anonymous_dynamics(k)?,
            &cfg.pointed_samples(),
            3,
        )?],
        "preserve" => vec![check_vertex_preservation(
            &rules.matter_dynamics(k)?,
            &cfg.matter_pointed()?,
        )?],
        "quiesce" => vec![check_quiescence(
            &rules.matter_dynamics(k)?,
            &cfg.matter_samples()?,
            1,
        )?],
        "invert" => vec![
            check_invertibility(
                &rules.anonymous_dynamics(k)?,
                &rules.anonymous_inverse(k)?,
                &cfg.pointed_samples(),
            )?,
            check_invertibility(
                &rules.matter_dynamics(k)?,
                &rules.matter_inverse(k)?,
                &cfg.matter_pointed()?,
            )?,
        ],
        "involution" => vec![involution_report(
            3..=cfg.max_size.clamp(3, 6),
            cfg.matter_depth,
        )?],
        "trs" => vec![trs_report(cfg.seed, 200 * cfg.max_size, 20)],
        "eta" => vec![eta_report(8)],
        "commute-all" => {
            if k != 2 && rules.port_count().is_some() {
                return Err(SuiteError::PortMismatch {
                    suite: name.into(),
                    rules: k,
                });
            }
            let c = Commutation {
                depth: cfg.matter_depth,
                relocation: rules.relocation,
                ..Default::default()
            };
            let samples = cfg.named_samples();
            c.check_squares(&Square::ALL, &samples)?
        }
        other => return Err(SuiteError::UnknownSuite(other.into())),
    })
}
