use contextlab::graphs::WeightedGraph;
use contextlab::registry::{self, DemoParams};
use contextlab::scenarios::{self as sc, Sign};
use contextlab::{Root, Settings};

fn s() -> Settings {
    Settings::default()
}

#[test]
fn pigeonhole_forbids_pairs_in_the_same_box() {
    let r = sc::pigeonhole_original(&s()).unwrap();
    assert!(r.passed() && r.feasible && r.contradiction);
    for name in ["Z12", "Z23", "Z13"] {
        let forced = r.context(name).unwrap().forced().unwrap();
        assert_eq!(forced.outcome, vec![Root::MINUS_ONE]);
    }
    let classical = r.classical.as_ref().unwrap();
    assert_eq!(classical.consistent, 0);
}

#[test]
fn pigeonhole_overlap_is_one_over_sqrt_eight() {
    let r = sc::pigeonhole_original(&s()).unwrap();
    // |<+++|yyy>| = |(1+i)/2|^3
    assert!((r.overlap - 0.5f64.powf(1.5)).abs() < 1e-12);
}

#[test]
fn ghz_pentagram_feasibility_follows_the_sign_product() {
    let sweep = sc::sweep_ghz_pentagram(&s()).unwrap();
    assert_eq!((sweep.cases, sweep.feasible_cases), (64, 32));
    assert!(sweep.passed());
    let r = sc::ghz_pentagram(
        &[Sign::Plus; 3],
        &[Sign::Minus, Sign::Plus, Sign::Plus],
        &s(),
    )
    .unwrap();
    assert!(r.feasible && r.contradiction && r.passed());
}

#[test]
fn qudit_product_prepost_forces_stabilizers() {
    let g = WeightedGraph::ghz_triangle(2).unwrap();
    let sweep = sc::sweep_qudit_product(&g, &s()).unwrap();
    assert!(sweep.passed(), "{:?}", sweep.failures);
    assert_eq!(sweep.cases, sweep.feasible_cases);
    let g = WeightedGraph::ghz_triangle(4).unwrap();
    for (s_exp, h) in [
        ([0, 0, 0], [0, 0, 0]),
        ([1, 2, 3], [3, 0, 1]),
        ([3, 3, 3], [2, 2, 2]),
    ] {
        let r = sc::qudit_product_prepost(&g, &s_exp, &h, &s()).unwrap();
        assert!(r.feasible && r.passed());
    }
}

#[test]
fn qudit_pigeonhole_on_d4() {
    let g = WeightedGraph::ghz_triangle(4).unwrap();
    let r = sc::qudit_pigeonhole(&g, &[0, 0, 0], &[0, 0, 2], &s()).unwrap();
    assert!(r.feasible && r.contradiction && r.passed());
    assert_eq!(r.derived("∏S_a"), Some(Root::MINUS_ONE));
}

#[test]
fn qudit_scenarios_need_a_ghz_graph() {
    let g = WeightedGraph::triangle(3, 1).unwrap();
    assert!(sc::qudit_pigeonhole(&g, &[0; 3], &[0; 3], &s()).is_err());
}

#[test]
fn random_magic_square_pairs_agree() {
    let r = registry::magic_square_random(20, 7, &s()).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.cases, 20);
}

#[test]
fn every_registered_demo_runs() {
    for (name, _) in registry::DEMOS {
        let doc = registry::run_demo(name, &DemoParams::default(), &s(), None).unwrap();
        assert!(doc.passed, "{name}");
    }
    for (name, _) in registry::SWEEPS {
        let doc = registry::run_sweep(name, &DemoParams::default(), &s()).unwrap();
        assert!(doc.passed, "{name}");
    }
}

#[test]
fn cheshire_parameters_are_bits() {
    assert!(sc::cheshire_cat_state_independent(2, 0, 0, 0, &s()).is_err());
}
