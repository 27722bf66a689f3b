//! Sample families for the property checkers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{PortGraph, VertexLabel};
use crate::name::NameTerm;
use crate::pointed::{canonicalize, CanonicalPointedGraph};
use crate::ports::{Port, PortMask, PortSet};

const PORT_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

pub fn port_set(k: usize) -> PortSet {
    PortSet::new(PORT_NAMES[..k].iter().copied()).expect("distinct identifiers")
}

pub fn vertex_name(i: usize) -> NameTerm {
    NameTerm::atom(&format!("v{i}"))
}

/// The cycle `v0 … v{n-1}` with edges `vi:a -- v(i+1):b`, over ports `a b`.
pub fn ab_cycle(states: &[PortMask]) -> PortGraph {
    let n = states.len();
    let vertices = states
        .iter()
        .enumerate()
        .map(|(i, m)| (vertex_name(i), VertexLabel::State(*m)));
    let edges = (0..n).map(|i| {
        (
            (vertex_name(i), Port(0)),
            (vertex_name((i + 1) % n), Port(1)),
            None,
        )
    });
    PortGraph::build(port_set(2), vertices, edges).expect("cycles are valid")
}

/// Every particle labelling of the `n`-cycle, 4ⁿ of them.
pub fn cycle_labellings(n: usize) -> impl Iterator<Item = Vec<PortMask>> {
    (0..4u64.pow(n as u32))
        .map(move |code| (0..n).map(|i| PortMask((code >> (2 * i)) & 3)).collect())
}

/// All labelled cycles with lengths in `lengths`.
pub fn exhaustive_cycles(lengths: std::ops::RangeInclusive<usize>) -> Vec<PortGraph> {
    lengths
        .flat_map(|n| cycle_labellings(n).map(|s| ab_cycle(&s)))
        .collect()
}

pub fn random_states<R: Rng>(rng: &mut R, k: usize, n: usize, p: f64) -> Vec<PortMask> {
    (0..n)
        .map(|_| {
            (0..k as u8).fold(PortMask::EMPTY, |m, i| {
                if rng.gen_bool(p) {
                    m.with(Port(i))
                } else {
                    m
                }
            })
        })
        .collect()
}

pub fn random_cycle<R: Rng>(rng: &mut R, min_len: usize, max_len: usize) -> PortGraph {
    let n = rng.gen_range(min_len..=max_len);
    ab_cycle(&random_states(rng, 2, n, 0.25))
}

/// A random connected graph over `k` ports: a random spanning tree, then up to
/// `extra` additional edges on free slots (self-loops allowed).
pub fn random_connected<R: Rng>(
    rng: &mut R,
    k: usize,
    n: usize,
    extra: usize,
    particle_prob: f64,
) -> PortGraph {
    assert!(k >= 2 || n <= 2, "a tree needs two ports per inner vertex");
    let ports = port_set(k);
    let mut free: Vec<Vec<Port>> = vec![ports.iter().collect(); n];
    let mut edges = Vec::new();
    for i in 1..n {
        let candidates: Vec<usize> = (0..i).filter(|&j| !free[j].is_empty()).collect();
        let j = *candidates
            .choose(rng)
            .expect("a tree with k >= 2 keeps a free slot");
        let sj = rng.gen_range(0..free[j].len());
        let pj = free[j].remove(sj);
        let si = rng.gen_range(0..free[i].len());
        let pi = free[i].remove(si);
        edges.push(((vertex_name(j), pj), (vertex_name(i), pi), None));
    }
    for _ in 0..extra {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| (0..free[v].len()).map(move |s| (v, s)))
            .collect();
        if slots.len() < 2 {
            break;
        }
        let picked: Vec<&(usize, usize)> = slots.choose_multiple(rng, 2).collect();
        let (&(u, su), &(v, sv)) = (picked[0], picked[1]);
        let pu = free[u][su];
        let pv = free[v][sv];
        free[u].retain(|p| *p != pu);
        free[v].retain(|p| *p != pv);
        edges.push(((vertex_name(u), pu), (vertex_name(v), pv), None));
    }
    let states = random_states(rng, k, n, particle_prob);
    let vertices = (0..n).map(|i| (vertex_name(i), VertexLabel::State(states[i])));
    PortGraph::build(ports, vertices, edges).expect("generator respects slot uniqueness")
}

/// The graph pointed at each of its vertices.
pub fn all_pointings<N>(g: &PortGraph<N>) -> Vec<CanonicalPointedGraph>
where
    N: Ord + Clone + std::fmt::Debug,
{
    g.vertices()
        .map(|v| canonicalize(g, v).expect("vertex of the graph"))
        .collect()
}

/// The graph pointed at its least vertex.
pub fn pointed<N>(g: &PortGraph<N>) -> CanonicalPointedGraph
where
    N: Ord + Clone + std::fmt::Debug,
{
    let v = g.vertices().next().expect("non-empty graph");
    canonicalize(g, v).expect("vertex of the graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn labelling_counts() {
        assert_eq!(cycle_labellings(3).count(), 64);
        assert_eq!(exhaustive_cycles(3..=4).len(), 64 + 256);
    }

    #[test]
    fn one_cycle_is_a_self_loop() {
        let g = ab_cycle(&[PortMask::EMPTY]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(
            g.neighbor(&vertex_name(0), Port(0)),
            Some(&(vertex_name(0), Port(1)))
        );
    }

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        for k in 2..=4 {
            let mut r1 = ChaCha8Rng::seed_from_u64(k as u64);
            let mut r2 = ChaCha8Rng::seed_from_u64(k as u64);
            for _ in 0..20 {
                let g = random_connected(&mut r1, k, 9, 4, 0.3);
                assert!(g.is_connected());
                assert_eq!(g, random_connected(&mut r2, k, 9, 4, 0.3));
            }
        }
    }
}
