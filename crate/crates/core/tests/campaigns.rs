use lorcomp::comparison::{Direction, Formulation};
use lorcomp::generators::{sprinkle, Amount, SprinkleSpec, TauMode};
use lorcomp::space::{IntrinsicMode, DEFAULT_AXIOM_TOLERANCE};
use lorcomp::verifier::{run_campaign, Campaign, SpaceSource, VerificationReport};
use lorcomp::{Ambient, ModelSpace};
use proptest::prelude::*;

fn model_source(k: f64, count: usize, seed: u64) -> SpaceSource {
    let ambient = Ambient::model(ModelSpace::new(k));
    SpaceSource::Sprinkle {
        spec: SprinkleSpec::new(
            ambient,
            SprinkleSpec::default_region(&ambient),
            Amount::Count(count),
            seed,
        ),
    }
}

fn run(source: SpaceSource, ks: &[f64], directions: &[Direction]) -> VerificationReport {
    let mut c = Campaign::new(source, ks.to_vec(), 3);
    c.directions = directions.to_vec();
    c.formulations = vec![Formulation::Triangle, Formulation::Monotonicity, Formulation::Hinge];
    c.budgets.triangles = 120;
    c.budgets.pairs_per_triangle = 64;
    run_campaign(&c).unwrap()
}

#[test]
fn de_sitter_has_curvature_one() {
    let r = run(model_source(1.0, 400, 5), &[1.0], &[Direction::Above, Direction::Below]);
    assert!(r.status.pass, "{:?}", r.status.failed_checks);
    for e in &r.verdicts {
        let v = e.verdict().unwrap();
        assert!(v.samples > 0 && v.worst_margin.unwrap().abs() < 1e-5);
    }
}

#[test]
fn wrong_curvatures_are_detected() {
    // Anti-de Sitter space lies below every K ≥ -1 and above every K ≤ -1;
    // the opposite bounds fail once K is far enough from -1.
    let r = run(
        model_source(-1.0, 500, 8),
        &[-3.0, 1.0],
        &[Direction::Above, Direction::Below],
    );
    for f in [Formulation::Triangle, Formulation::Monotonicity, Formulation::Hinge] {
        assert!(r.verdict(f, Direction::Above, -3.0).unwrap().pass, "{f:?}");
        assert!(r.verdict(f, Direction::Below, 1.0).unwrap().pass, "{f:?}");
        assert!(!r.verdict(f, Direction::Below, -3.0).unwrap().pass, "{f:?}");
        assert!(!r.verdict(f, Direction::Above, 1.0).unwrap().pass, "{f:?}");
    }
    assert!(!r.status.pass);
}

#[test]
fn hierarchy_holds_on_flat_space() {
    let r = run(
        model_source(0.0, 400, 2),
        &[-1.0, -0.5, 0.0, 0.5, 1.0],
        &[Direction::Above, Direction::Below],
    );
    let h = r.hierarchy.result().unwrap();
    assert!(!h.is_empty());
    assert!(h.iter().all(|x| x.counterexamples == 0));
    // Flat space lies below every positive and above every negative bound.
    assert!(r.verdict(Formulation::Triangle, Direction::Below, 1.0).unwrap().pass);
    assert!(r.verdict(Formulation::Triangle, Direction::Above, -1.0).unwrap().pass);
}

#[test]
fn cylinder_fixture_fails_above_zero() {
    let r = run(
        SpaceSource::Fixture {
            name: "cylinder-counterexample".into(),
        },
        &[0.0],
        &[Direction::Above],
    );
    let v = r.verdict(Formulation::Triangle, Direction::Above, 0.0).unwrap();
    assert!(!v.pass);
    let w = &v.witnesses[0];
    assert_eq!(w.value, 0.0);
    assert!(w.model_value > 0.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn weighted_intrinsic_tau_is_realized_by_chains(seed in any::<u64>(), n in 20usize..160) {
        let ambient = Ambient::model(ModelSpace::minkowski());
        let mut spec = SprinkleSpec::new(ambient, SprinkleSpec::default_region(&ambient), Amount::Count(n), seed);
        spec.tau_mode = TauMode::IntrinsicWeighted;
        let sp = sprinkle(&spec).unwrap();
        prop_assert!(sp.validate_axioms(DEFAULT_AXIOM_TOLERANCE).pass);
        for (i, j, t) in sp.tau_entries().into_iter().take(200) {
            let g = sp.geodesic_chain(i, j).unwrap();
            prop_assert!((g.chain.tau_length - t).abs() < 1e-12);
            prop_assert!(g.gap.abs() < 1e-12);
        }
        let again = sp.tau_intrinsic(IntrinsicMode::Weighted).unwrap();
        prop_assert_eq!(again.tau_entries(), sp.tau_entries());
    }
}
