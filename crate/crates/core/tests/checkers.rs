use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revcgd::checks::*;
use revcgd::hm::{CollisionMode, Direction};
use revcgd::mutants::*;
use revcgd::sample::*;
use revcgd::*;

fn mixed(seed: u64) -> Vec<CanonicalPointedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::new();
    for _ in 0..30 {
        xs.push(pointed(&random_cycle(&mut rng, 3, 12)));
    }
    for _ in 0..30 {
        xs.push(pointed(&random_connected(&mut rng, 3, 7, 3, 0.4)));
    }
    xs
}

fn long_cycles(seed: u64) -> Vec<CanonicalPointedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..30)
        .map(|_| pointed(&random_cycle(&mut rng, 12, 30)))
        .collect()
}

fn matter_samples(seed: u64, depth: usize) -> Vec<MatterGraph<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..5)
        .map(|_| {
            let g = random_cycle(&mut rng, 3, 5);
            let v = g.vertices().next().unwrap().clone();
            decode(
                &attach_matter(&g, &v, depth)
                    .unwrap()
                    .to_canonical()
                    .unwrap(),
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn hm_is_shift_invariant() {
    let xs = mixed(1);
    assert!(
        check_shift_invariance(&PointedHm::forward(), &xs)
            .unwrap()
            .passed
    );
    assert!(
        check_shift_invariance(&PointedHm::backward(), &xs)
            .unwrap()
            .passed
    );
    let r = check_shift_invariance(&ShiftedSuccessor(PointedHm::forward()), &xs).unwrap();
    assert!(!r.passed);
    assert!(r.witness.unwrap().graph.contains("pointer n0;"));
}

#[test]
fn continuity_radii() {
    let mut xs = mixed(2);
    xs.extend(exhaustive_cycles(3..=6).iter().flat_map(all_pointings));
    let full = check_continuity(&PointedHm::forward(), &xs, 0, 8).unwrap();
    assert_eq!(full.measured.as_deref(), Some("3"));
    let adv = check_continuity(&PointedHm::stage(Stage::AdvectOnly), &xs, 0, 8).unwrap();
    assert_eq!(adv.measured.as_deref(), Some("1"));
    assert!(
        check_continuity(&Identity, &xs, 2, 8)
            .unwrap()
            .measured
            .as_deref()
            == Some("2")
    );
    let r = check_continuity(&NonLocal(PointedHm::forward()), &long_cycles(3), 0, 5).unwrap();
    assert!(!r.passed && r.measured.is_none());
}

#[test]
fn boundedness_and_teleport() {
    let xs = long_cycles(4);
    let r = check_boundedness(&PointedHm::forward(), &xs, 1).unwrap();
    assert!(r.passed);
    assert_eq!(r.measured.as_deref(), Some("0"));
    assert!(
        check_boundedness(&PointedHm::forward(), &xs, 0)
            .unwrap()
            .passed
    );
    let t = Teleport {
        inner: PointedHm::forward(),
        length: 6,
    };
    let r = check_boundedness(&t, &xs, 1).unwrap();
    assert!(!r.passed);
    assert_eq!(r.measured.as_deref(), Some("2"));
}

#[test]
fn vertex_preservation_separates_formalisms() {
    assert!(
        !check_vertex_preservation(&PointedHm::forward(), &mixed(5))
            .unwrap()
            .passed
    );
    let mx: Vec<_> = matter_samples(5, 3)
        .iter()
        .map(|m| m.to_canonical().unwrap())
        .collect();
    assert!(
        check_vertex_preservation(&MatterHm::forward(), &mx)
            .unwrap()
            .passed
    );
    assert!(check_vertex_preservation(&Identity, &mx).unwrap().passed);
}

#[test]
fn invertibility() {
    let xs = mixed(6);
    let (f, b) = (PointedHm::forward(), PointedHm::backward());
    assert!(check_invertibility(&f, &b, &xs).unwrap().passed);
    assert!(!check_invertibility(&f, &f, &xs).unwrap().passed);
    let so = PointedHm {
        mode: CollisionMode::SplitOnly,
        ..Default::default()
    };
    let sob = PointedHm {
        mode: CollisionMode::SplitOnly,
        direction: Direction::Backward,
        ..Default::default()
    };
    assert!(
        !check_invertibility(&so, &sob, &long_cycles(6))
            .unwrap()
            .passed
    );
    let mx: Vec<_> = matter_samples(6, 3)
        .iter()
        .map(|m| m.to_canonical().unwrap())
        .collect();
    assert!(
        check_invertibility(&MatterHm::forward(), &MatterHm::backward(), &mx)
            .unwrap()
            .passed
    );
}

#[test]
fn bounded_scattering() {
    let xs = long_cycles(7);
    let r = check_bounded_scattering(&PointedHm::forward(), &xs, 3).unwrap();
    assert!(r.passed);
    assert_eq!(r.measured.as_deref(), Some("2"));
    assert!(
        !check_bounded_scattering(&PointedHm::forward(), &xs, 1)
            .unwrap()
            .passed
    );
}

#[test]
fn quiescence_threshold() {
    let ms = matter_samples(8, 3);
    assert!(
        check_quiescence(&MatterHm::forward(), &ms, 1)
            .unwrap()
            .passed
    );
    assert!(
        check_quiescence(&MatterHm::backward(), &ms, 1)
            .unwrap()
            .passed
    );
    assert!(
        !check_quiescence(&MatterHm::forward(), &ms, 0)
            .unwrap()
            .passed
    );
    assert!(matches!(
        check_quiescence(&MatterHm::forward(), &ms, 2),
        Err(DynamicsError::Matter(MatterError::DepthTooShallow {
            needed: 4,
            have: 3
        }))
    ));
}

#[test]
fn report_formats() {
    let r = check_bounded_scattering(&PointedHm::forward(), &long_cycles(9), 1).unwrap();
    let text = r.to_text();
    assert!(text.starts_with("FAIL bounded-scattering"));
    assert!(text.contains("witness:"));
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["passed"], false);
    assert_eq!(json["parameters"][0][0], "c");
}

#[test]
fn matter_mutants() {
    let ms = matter_samples(10, 3);
    let mx: Vec<_> = ms.iter().map(|m| m.to_canonical().unwrap()).collect();
    let r = check_vertex_preservation(&ForgetMatter::default(), &mx).unwrap();
    assert!(!r.passed, "{}", r.to_text());
    let r = check_quiescence(&MirroredMatter(MatterHm::forward()), &ms, 1).unwrap();
    assert!(!r.passed);
    assert!(
        check_quiescence(&Box::new(MatterHm::forward()) as &dyn Dynamics, &ms, 1)
            .unwrap()
            .passed
    );
}
