use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revcgd::hm::{Direction, SplitRelocation};
use revcgd::maps::*;
use revcgd::sample::*;
use revcgd::*;

fn named(seed: u64) -> Vec<PortGraph<NameTerm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<_> = (0..25).map(|_| random_cycle(&mut rng, 2, 8)).collect();
    v.extend((0..15).map(|_| random_connected(&mut rng, 3, 6, 2, 0.4)));
    v
}

#[test]
fn all_squares_commute_both_directions() {
    let gs = named(1);
    for direction in [Direction::Forward, Direction::Backward] {
        let c = Commutation {
            direction,
            ..Default::default()
        };
        for sq in Square::ALL {
            let r = c.check(sq, &gs).unwrap();
            assert!(r.passed, "{}", r.to_text());
        }
    }
}

#[test]
fn swapped_relocation_breaks_only_named_squares() {
    let gs = named(2);
    let c = Commutation {
        relocation: SplitRelocation::Swapped,
        ..Default::default()
    };
    for sq in Square::ALL {
        let passed = c.check(sq, &gs).unwrap().passed;
        assert_eq!(passed, matches!(sq, Square::ImToA | Square::AToIm), "{sq}");
    }
}

#[test]
fn site_of_name_inverts_site_names() {
    let g = ab_cycle(&[PortMask::EMPTY; 3]);
    for v in g.vertices() {
        assert_eq!(site_of_name(&g, v).unwrap(), Site::visible(v.clone()));
        for w in revcgd::matter::words_up_to(4) {
            let s = Site::matter(v.clone(), w);
            assert_eq!(site_of_name(&g, &s.name()).unwrap(), s);
        }
    }
}

fn pointed_samples(seed: u64) -> Vec<CanonicalPointedGraph> {
    named(seed).iter().map(pointed).collect()
}

#[test]
fn projection_of_matter_step_is_the_visible_step() {
    for direction in [Direction::Forward, Direction::Backward] {
        let p = Projected {
            inner: MatterHm {
                direction,
                ..Default::default()
            },
            depth: 3,
        };
        let v = PointedHm {
            direction,
            ..Default::default()
        };
        for x in pointed_samples(3) {
            let (a, b) = (p.evolve(&x).unwrap(), v.evolve(&x).unwrap());
            assert_eq!(a.image, b.image);
            assert_eq!(a.successor, b.successor);
        }
    }
    let id = Projected {
        inner: Identity,
        depth: 2,
    };
    let x = &pointed_samples(4)[0];
    assert_eq!(id.evolve(x).unwrap().image, *x);
}

#[test]
fn induced_matter_dynamics_agrees_with_matter_step() {
    for direction in [Direction::Forward, Direction::Backward] {
        let induced = InducedMatter { direction };
        let direct = MatterHm {
            direction,
            ..Default::default()
        };
        for g in named(5) {
            let v = g.vertices().next().unwrap().clone();
            let x = attach_matter(&g, &v, 3).unwrap().to_canonical().unwrap();
            let (a, b) = (induced.evolve(&x).unwrap(), direct.evolve(&x).unwrap());
            assert_eq!(a.image, b.image);
            for i in 0..x.vertex_count() {
                if !a.input_margin[i] {
                    assert_eq!(a.successor[i], b.successor[i]);
                }
            }
        }
    }
}
