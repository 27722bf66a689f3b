//! Property checkers for [`Dynamics`]. Each runs its samples in parallel and
//! reports the first counterexample in sample order.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::dynamics::{CheckReport, Dynamics, DynamicsError, Evolution, Formalism, Witness};
use crate::matter::{words_up_to, MatterError, MatterGraph, Site};
use crate::name::Dir;
use crate::pointed::{anonymize, CanonicalPointedGraph};
use crate::ports::{Path, Port};

type Outcome = Result<Option<Witness>, DynamicsError>;

fn first_failure<T, F>(samples: &[T], f: F) -> Result<Option<Witness>, DynamicsError>
where
    T: Sync,
    F: Fn(&T) -> Outcome + Sync + Send,
{
    samples
        .par_iter()
        .map(f)
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

fn fail(x: &CanonicalPointedGraph, detail: String) -> Outcome {
    Ok(Some(Witness::new(x, detail)))
}

fn show(x: &CanonicalPointedGraph, p: &Path) -> String {
    p.display(x.ports()).to_string()
}

/// `F(X_u) = F(X)_{R_X(u)}` for every vertex `u`, and the cocycle
/// `R_X(u.v) = R_X(u).R_{X_u}(v)`.
pub fn check_shift_invariance(
    d: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
) -> Result<CheckReport, DynamicsError> {
    let witness = first_failure(samples, |x| {
        let e = d.evolve(x)?;
        for i in 0..x.vertex_count() {
            if e.input_margin[i] {
                continue;
            }
            let Some(ri) = e.successor[i] else {
                return fail(x, format!("R undefined at {}", show(x, x.path(i))));
            };
            let xu = x.shift_to(i)?;
            let eu = d.evolve(&xu)?;
            if e.image.shift_to(ri)? != eu.image {
                return fail(
                    x,
                    format!(
                        "F(X_u) differs from F(X)_R(u) at u = {}",
                        show(x, x.path(i))
                    ),
                );
            }
            let base = e.image.path(ri);
            for j in 0..xu.vertex_count() {
                let k = x
                    .resolve(&x.path(i).concat(xu.path(j)))
                    .expect("paths of X_u are paths of X from u");
                if e.input_margin[k] || eu.input_margin[j] {
                    continue;
                }
                let via =
                    eu.successor[j].and_then(|rj| e.image.resolve(&base.concat(eu.image.path(rj))));
                if via != e.successor[k] {
                    return fail(
                        x,
                        format!(
                            "cocycle fails at u = {}, v = {}",
                            show(x, x.path(i)),
                            show(&xu, xu.path(j))
                        ),
                    );
                }
            }
        }
        Ok(None)
    })?;
    Ok(CheckReport::new("shift-invariance", &d.name(), samples.len()).fail_with(witness))
}

fn agrees_on_disk(e: &Evolution, en: &Evolution, m: usize, inputs: usize) -> bool {
    let target = e.image.disk(m);
    if en.image.disk(m) != target {
        return false;
    }
    let k = target.vertex_count();
    (0..inputs).all(|i| {
        let (a, b) = (e.successor[i], en.successor[i]);
        let near = |s: Option<usize>| s.is_some_and(|j| j < k);
        !(near(a) || near(b)) || a == b
    })
}

/// Least `n ≤ limit` with `F(X^n)^m = F(X)^m` (and matching successors).
pub fn continuity_radius(
    d: &dyn Dynamics,
    x: &CanonicalPointedGraph,
    m: usize,
    limit: usize,
) -> Result<Option<usize>, DynamicsError> {
    let e = d.evolve(x)?;
    for n in 0..=limit {
        let xn = x.disk(n);
        let en = d.evolve(&xn)?;
        if agrees_on_disk(&e, &en, m, xn.vertex_count()) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Uniform continuity at output radius `m`: every sample has a radius
/// `n ≤ limit`; the reported measurement is the largest such radius.
pub fn check_continuity(
    d: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
    m: usize,
    limit: usize,
) -> Result<CheckReport, DynamicsError> {
    let radii: Vec<Result<Option<usize>, DynamicsError>> = samples
        .par_iter()
        .map(|x| continuity_radius(d, x, m, limit))
        .collect();
    let mut worst = 0;
    let mut witness = None;
    for (x, r) in samples.iter().zip(radii) {
        match r? {
            Some(n) => worst = worst.max(n),
            None => {
                witness = Some(Witness::new(
                    x,
                    format!("no input radius n <= {limit} determines output radius {m}"),
                ));
                break;
            }
        }
    }
    let report = CheckReport::new("continuity", &d.name(), samples.len())
        .param("m", m)
        .param("limit", limit);
    Ok(if witness.is_some() {
        report.fail_with(witness)
    } else {
        report.measured(worst)
    })
}

fn image_spread(e: &Evolution) -> usize {
    let g = e.image.graph();
    let sources: BTreeSet<usize> = e.successor.iter().flatten().copied().collect();
    let mut dist = vec![usize::MAX; e.image.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in &sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for p in g.ports().iter() {
            if let Some(&(w, _)) = g.neighbor(&v, p) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist.into_iter().max().unwrap_or(0)
}

/// Every vertex of `F(X)` lies within `b + 1` of the image of `R_X`.
pub fn check_boundedness(
    d: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
    b: usize,
) -> Result<CheckReport, DynamicsError> {
    let spreads: Vec<Result<usize, DynamicsError>> = samples
        .par_iter()
        .map(|x| d.evolve(x).map(|e| image_spread(&e)))
        .collect();
    let mut worst = 0;
    let mut witness = None;
    for (x, s) in samples.iter().zip(spreads) {
        let s = s?;
        worst = worst.max(s);
        if s > b + 1 && witness.is_none() {
            witness = Some(Witness::new(
                x,
                format!("an image vertex is {s} away from the image of R"),
            ));
        }
    }
    Ok(CheckReport::new("boundedness", &d.name(), samples.len())
        .param("b", b)
        .measured(worst.saturating_sub(1))
        .fail_with(witness))
}

/// `R_X` is a bijection between the vertices of `X` and of `F(X)`, up to the
/// truncation margins.
pub fn check_vertex_preservation(
    d: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
) -> Result<CheckReport, DynamicsError> {
    let witness = first_failure(samples, |x| {
        let e = d.evolve(x)?;
        let mut hit = vec![false; e.image.vertex_count()];
        for (i, s) in e.successor.iter().enumerate() {
            match s {
                Some(j) if hit[*j] => {
                    return fail(
                        x,
                        format!(
                            "R not injective: {} collides",
                            show(&e.image, e.image.path(*j))
                        ),
                    )
                }
                Some(j) => hit[*j] = true,
                None if !e.input_margin[i] => {
                    return fail(x, format!("R undefined at {}", show(x, x.path(i))))
                }
                None => {}
            }
        }
        if let Some(j) = (0..hit.len()).find(|&j| !hit[j] && !e.output_margin[j]) {
            return fail(
                x,
                format!(
                    "{} has no preimage under R",
                    show(&e.image, e.image.path(j))
                ),
            );
        }
        Ok(None)
    })?;
    Ok(CheckReport::new("vertex-preservation", &d.name(), samples.len()).fail_with(witness))
}

fn round_trip(first: &dyn Dynamics, second: &dyn Dynamics, x: &CanonicalPointedGraph) -> Outcome {
    let e1 = first.evolve(x)?;
    let e2 = second.evolve(&e1.image)?;
    let label = format!("{} then {}", first.name(), second.name());
    if first.formalism() == Formalism::Anonymous {
        if anonymize(&e2.image)? != anonymize(x)? {
            return fail(x, format!("{label} does not return the input"));
        }
        return Ok(None);
    }
    if e2.image != *x {
        return fail(x, format!("{label} does not return the pointed input"));
    }
    for i in 0..x.vertex_count() {
        if e1.input_margin[i] {
            continue;
        }
        let Some(j) = e1.successor[i] else { continue };
        if e1.output_margin[j] || e2.input_margin[j] {
            continue;
        }
        if e2.successor[j] != Some(i) {
            return fail(x, format!("{label} moves {}", show(x, x.path(i))));
        }
    }
    Ok(None)
}

/// `G ∘ F` and `F ∘ G` are the identity on the samples.
pub fn check_invertibility(
    d: &dyn Dynamics,
    inverse: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
) -> Result<CheckReport, DynamicsError> {
    let witness = first_failure(samples, |x| {
        if let Some(w) = round_trip(d, inverse, x)? {
            return Ok(Some(w));
        }
        round_trip(inverse, d, x)
    })?;
    Ok(CheckReport::new("invertibility", &d.name(), samples.len())
        .param("inverse", inverse.name())
        .fail_with(witness))
}

/// Neighbours of the origin land within distance `c` of its image.
pub fn check_bounded_scattering(
    d: &dyn Dynamics,
    samples: &[CanonicalPointedGraph],
    c: usize,
) -> Result<CheckReport, DynamicsError> {
    let spreads: Vec<Result<(usize, Option<Witness>), DynamicsError>> = samples
        .par_iter()
        .map(|x| {
            let e = d.evolve(x)?;
            let g = x.graph();
            let mut worst = 0;
            for p in g.ports().iter() {
                let Some(&(j, _)) = g.neighbor(&0, p) else {
                    continue;
                };
                if e.input_margin[j] {
                    continue;
                }
                let Some(rj) = e.successor[j] else { continue };
                worst = worst.max(e.image.depth(rj));
            }
            let w = (worst > c).then(|| {
                Witness::new(
                    x,
                    format!("a neighbour of the origin scatters to distance {worst}"),
                )
            });
            Ok((worst, w))
        })
        .collect();
    let mut worst = 0;
    let mut witness = None;
    for r in spreads {
        let (s, w) = r?;
        worst = worst.max(s);
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(
        CheckReport::new("bounded-scattering", &d.name(), samples.len())
            .param("c", c)
            .measured(worst)
            .fail_with(witness),
    )
}

fn tree_path(x: &CanonicalPointedGraph, t: &[Dir]) -> Path {
    let k = x.ports().len() as u8 - 3;
    let (m, l, r) = (Port(k), Port(k + 1), Port(k + 2));
    let mut p = Path::default();
    for d in t {
        p.push(if *d == Dir::L { l } else { r }, m);
    }
    p
}

/// Deep inside invisible matter (pointer at tree depth `≥ b`), `R` is the
/// identity on relative tree addresses.
pub fn check_quiescence(
    d: &dyn Dynamics,
    samples: &[MatterGraph<usize>],
    b: usize,
) -> Result<CheckReport, DynamicsError> {
    for mg in samples {
        if mg.depth() < b + 2 {
            return Err(MatterError::DepthTooShallow {
                needed: b + 2,
                have: mg.depth(),
            }
            .into());
        }
    }
    let witness = first_failure(samples, |mg| {
        for v in mg.visible().vertices() {
            for s in words_up_to(mg.depth() - 1)
                .into_iter()
                .filter(|s| s.len() >= b)
            {
                let y = mg
                    .with_pointer(Site::matter(*v, s.clone()))?
                    .to_canonical()?;
                let e = d.evolve(&y)?;
                for t in words_up_to(mg.depth() - 1 - s.len()) {
                    let p = tree_path(&y, &t);
                    let before = y.resolve(&p).expect("tree address within depth");
                    if e.image.resolve(&p) != e.successor[before] {
                        return fail(
                            &y,
                            format!(
                                "R moves relative address {} from pointer depth {}",
                                crate::name::word_to_string(&t),
                                s.len()
                            ),
                        );
                    }
                }
            }
        }
        Ok(None)
    })?;
    Ok(CheckReport::new("quiescence", &d.name(), samples.len())
        .param("b", b)
        .fail_with(witness))
}
