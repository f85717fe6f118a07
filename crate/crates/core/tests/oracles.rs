//! Frozen values checked against independent computations.

mod common;

use common::{bounded_q_norm_f, bounded_q_norm_sum, close, lp_norm};
use varlp::*;

const TOL: f64 = DEFAULT_TOL;

#[test]
fn luxemburg_weighted_single_cell() {
    // value * measure^(1/p) = 3 * 4^(1/2)
    let expected = lp_norm(&[3.0], &[4.0], 2.0);
    assert_eq!(expected, 6.0);
    let part = Partition::new(vec![4.0]).unwrap();
    let f = SimpleFunction::new(vec![3.0]).unwrap();
    let p = [Exponent::new(2.0).unwrap()];
    assert_eq!(
        modular(&f.scaled(1.0 / 6.0), &p, &part).unwrap(),
        XReal::ONE
    );
    assert!(close(
        luxemburg_norm(&f, &p, &part, TOL).unwrap().value,
        expected,
        TOL
    ));
}

#[test]
fn constant_two_two_mixed_norm() {
    let expected =
        common::constant_mixed_norm(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0, 1.0], 2.0, 2.0);
    assert!((expected - 2f64.sqrt()).abs() < 1e-15);
    let part = Partition::unit_cells(2).unwrap();
    let e = ExponentPair::from_values(&[2.0, 2.0], &[2.0, 2.0]).unwrap();
    let seq = FunctionSequence::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(close(
        mixed_norm(&seq, &e, &part, TOL).unwrap().value,
        expected,
        1e-11
    ));
}

#[test]
fn bounded_q_norm_of_f_matches_root_finder() {
    for q0 in [1.0, 1.5, 2.0, 3.0, 7.0, 10.0, 64.0, 1000.0] {
        let inst = bounded_q_instance(q0).unwrap();
        let got = mixed_norm(&inst.f, &inst.exponents, &inst.partition, TOL)
            .unwrap()
            .value;
        let expected = bounded_q_norm_f(q0);
        assert!(
            (got - expected).abs() <= 1e-9,
            "q0={q0}: {got} vs {expected}"
        );
        let got_g = mixed_norm(&inst.g, &inst.exponents, &inst.partition, TOL)
            .unwrap()
            .value;
        assert!((got_g - expected).abs() <= 1e-9);
    }
    // golden ratio at q0 = 2
    assert!((bounded_q_norm_f(2.0) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
}

#[test]
fn bounded_q_sum_norm_approaches_three() {
    let mut previous = 0.0;
    for q0 in [10.0, 100.0, 1000.0] {
        let inst = bounded_q_instance(q0).unwrap();
        let sum = inst.f.plus(&inst.g).unwrap();
        let got = mixed_norm(&sum, &inst.exponents, &inst.partition, TOL)
            .unwrap()
            .value;
        assert!(
            (got - bounded_q_norm_sum(q0)).abs() <= 1e-9,
            "q0={q0}: {got}"
        );
        assert!(got > 3.0);
        // 2^(1/q0) decreases toward 1, so these decrease toward 3 from above
        assert!(previous == 0.0 || got < previous);
        previous = got;
    }
    let residuals: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&q0| {
            bounded_q_instance(q0)
                .unwrap()
                .triangle(TOL)
                .unwrap()
                .residual
        })
        .collect();
    assert!(
        residuals.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0),
        "{residuals:?}"
    );
}

#[test]
fn bounded_q_one_holds() {
    let inst = bounded_q_instance(1.0).unwrap();
    assert_eq!(classify_regime(&inst.exponents), Regime::ConstantQ);
    assert!(inst.triangle(TOL).unwrap().residual <= VIOLATION_THRESHOLD);
}

#[test]
fn counterexample_modular_is_not_convex() {
    // brute force over scaled copies of f and g
    let inst = counterexample_instance();
    let mut worst = f64::NEG_INFINITY;
    for s in [0.5, 1.0, 2.0] {
        for t in [0.5, 1.0, 2.0] {
            for theta in [0.25, 0.5, 0.75] {
                let r = convexity_residual(
                    &inst.f.scaled(s),
                    &inst.g.scaled(t),
                    theta,
                    &inst.exponents,
                    &inst.partition,
                    TOL,
                )
                .unwrap();
                worst = worst.max(r);
            }
        }
    }
    assert!(worst > 0.5, "{worst}");
    // at s = t = 1, theta = 1/2: rho of (f + g)/2 is 2 while rho(f) = rho(g) = 1
    let r =
        convexity_residual(&inst.f, &inst.g, 0.5, &inst.exponents, &inst.partition, TOL).unwrap();
    assert!((r - 1.0).abs() <= 1e-11, "{r}");
}

#[test]
fn neighbouring_seeds_give_distinct_instances() {
    let cfg = GenConfig::default();
    let instances: Vec<Instance> = (0..1001)
        .map(|s| gen_instance(&cfg.with_seed(s)).unwrap())
        .collect();
    let collisions = instances.windows(2).filter(|w| w[0] == w[1]).count();
    if collisions > 0 {
        eprintln!("flagged: {collisions} seed collisions among 1000 neighbouring pairs");
    }
    assert!(collisions <= 1, "{collisions}");
}

#[test]
fn generator_contract_over_many_seeds() {
    for regime in [
        None,
        Some(UniformRegime::ConstantQ),
        Some(UniformRegime::QleP),
        Some(UniformRegime::HolderConjugate),
    ] {
        let cfg = GenConfig {
            regime,
            ..GenConfig::default()
        };
        for s in 0..1000 {
            let inst = gen_instance(&cfg.with_seed(s)).unwrap();
            assert!(inst.exponents.p_minus() >= 1.0 && inst.exponents.q_minus() >= 1.0);
            assert!(inst
                .partition
                .measures()
                .iter()
                .all(|m| (0.1..=10.0).contains(m)));
            for t in inst.f.terms().iter().chain(inst.g.terms()) {
                assert!(t
                    .values()
                    .iter()
                    .all(|&v| v == 0.0 || (1e-2..=1e2).contains(&v)));
            }
            if regime.is_some() {
                assert!(
                    classify_regime(&inst.exponents).is_uniform(),
                    "{regime:?} seed {s}"
                );
            }
        }
    }
}

#[test]
fn search_output_is_thread_independent() {
    let cfg = GenConfig::atom_mixture().with_seed(11);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search_violations(&cfg, 60, TOL).unwrap())
    };
    let one = run(1);
    assert!(!one.is_empty());
    assert_eq!(one, run(4));
    assert!(one
        .windows(2)
        .all(|w| w[0].witness.residual >= w[1].witness.residual));
    for hit in &one {
        assert!(hit.recheck_residual > VIOLATION_THRESHOLD / 2.0);
        // the recorded seed regenerates the witness instance
        let inst = gen_instance(&cfg.with_seed(hit.seed)).unwrap();
        assert_eq!(inst.f, hit.witness.f);
    }
}
