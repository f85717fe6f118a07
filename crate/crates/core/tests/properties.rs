mod common;

use common::{close, constant_mixed_norm, lp_norm, INF};
use proptest::prelude::*;
use varlp::properties::{holder_conjugate_at, q_le_p_at};
use varlp::*;

const TOL: f64 = DEFAULT_TOL;

fn exponent_value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(INF), 1.0..10.0f64]
}

fn cell_value() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 3 => (-2.0..2.0f64).prop_map(|e: f64| 10f64.powf(e))]
}

fn measures(cells: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-1.0..1.0f64).prop_map(|e: f64| 10f64.powf(e)), cells)
}

fn rows(cells: usize, max_terms: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(cell_value(), cells), 1..=max_terms)
}

/// Partition, per-cell p, and a function on it.
fn single_level() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|n| {
        (
            measures(n),
            prop::collection::vec(exponent_value(), n),
            prop::collection::vec(cell_value(), n),
        )
    })
}

/// Partition, p, q and a sequence.
fn two_level() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    (1usize..5).prop_flat_map(|n| {
        (
            measures(n),
            prop::collection::vec(exponent_value(), n),
            prop::collection::vec(exponent_value(), n),
            rows(n, 4),
        )
    })
}

fn exps(p: &[f64]) -> Vec<Exponent> {
    p.iter().map(|&v| Exponent::new(v).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn modular_is_monotone_in_scale((m, p, f) in single_level(), l1 in 0.01..10.0f64, ratio in 1.0..10.0f64) {
        let part = Partition::new(m).unwrap();
        let p = exps(&p);
        let f = SimpleFunction::new(f).unwrap();
        let l2 = l1 * ratio;
        let at = |l: f64| modular(&f.scaled(1.0 / l), &p, &part).unwrap();
        prop_assert!(at(l2) <= at(l1));
    }

    #[test]
    fn luxemburg_is_homogeneous((m, p, f) in single_level()) {
        let part = Partition::new(m).unwrap();
        let p = exps(&p);
        let f = SimpleFunction::new(f).unwrap();
        let n = luxemburg_norm(&f, &p, &part, TOL).unwrap().value;
        for c in [0.5, 2.0, 10.0] {
            let nc = luxemburg_norm(&f.scaled(c), &p, &part, TOL).unwrap().value;
            prop_assert!(close(nc, c * n, 2.0 * TOL), "c={c}: {nc} vs {}", c * n);
        }
    }

    #[test]
    fn luxemburg_brackets_the_unit_ball((m, p, f) in single_level()) {
        let part = Partition::new(m).unwrap();
        let p = exps(&p);
        let f = SimpleFunction::new(f).unwrap();
        let n = luxemburg_norm(&f, &p, &part, TOL).unwrap().value;
        prop_assume!(n > 0.0);
        let above = modular(&f.scaled(1.0 / (n * (1.0 + 10.0 * TOL))), &p, &part).unwrap();
        let below = modular(&f.scaled(1.0 / (n * (1.0 - 10.0 * TOL))), &p, &part).unwrap();
        prop_assert!(above <= XReal::ONE, "{above}");
        prop_assert!(below >= XReal::ONE, "{below}");
    }

    #[test]
    fn luxemburg_constant_exponent_closed_form(
        (m, f) in (1usize..6).prop_flat_map(|n| (measures(n), prop::collection::vec(cell_value(), n))),
        p in prop_oneof![Just(1.0), Just(INF), 0.3..10.0f64],
    ) {
        let part = Partition::new(m.clone()).unwrap();
        let n = luxemburg_norm(&SimpleFunction::new(f.clone()).unwrap(), &exps(&vec![p; m.len()]), &part, TOL)
            .unwrap()
            .value;
        let expected = lp_norm(&f, &m, p);
        prop_assert!(close(n, expected, TOL), "{n} vs {expected}");
    }

    #[test]
    fn luxemburg_triangle_for_p_at_least_one(
        (m, p, f, g) in (1usize..6).prop_flat_map(|n| (
            measures(n),
            prop::collection::vec(exponent_value(), n),
            prop::collection::vec(cell_value(), n),
            prop::collection::vec(cell_value(), n),
        ))
    ) {
        let part = Partition::new(m).unwrap();
        let p = exps(&p);
        let f = SimpleFunction::new(f).unwrap();
        let g = SimpleFunction::new(g).unwrap();
        let nf = luxemburg_norm(&f, &p, &part, TOL).unwrap().value;
        let ng = luxemburg_norm(&g, &p, &part, TOL).unwrap().value;
        let ns = luxemburg_norm(&f.plus(&g), &p, &part, TOL).unwrap().value;
        prop_assert!(ns <= nf + ng + 10.0 * TOL * (nf + ng).max(1.0));
    }

    #[test]
    fn mixed_modular_is_monotone_in_scale((m, p, q, r) in two_level(), mu1 in 0.05..20.0f64, ratio in 1.0..5.0f64) {
        let part = Partition::new(m).unwrap();
        let e = ExponentPair::from_values(&p, &q).unwrap();
        let seq = FunctionSequence::from_rows(&r).unwrap();
        let at = |mu: f64| mixed_modular(&seq.scaled(1.0 / mu), &e, &part, TOL).unwrap().value;
        let (a, b) = (at(mu1), at(mu1 * ratio));
        prop_assert!(b <= a || close(b, a, 1e-11), "{b} > {a}");
    }

    #[test]
    fn mixed_norm_is_homogeneous((m, p, q, r) in two_level()) {
        let part = Partition::new(m).unwrap();
        let e = ExponentPair::from_values(&p, &q).unwrap();
        let seq = FunctionSequence::from_rows(&r).unwrap();
        let n = mixed_norm(&seq, &e, &part, TOL).unwrap().value;
        for c in [0.5, 2.0, 10.0] {
            let nc = mixed_norm(&seq.scaled(c), &e, &part, TOL).unwrap().value;
            prop_assert!(close(nc, c * n, 2.0 * TOL), "c={c}: {nc} vs {}", c * n);
        }
    }

    #[test]
    fn mixed_norm_vanishes_only_on_zero((m, p, q, r) in two_level()) {
        let part = Partition::new(m).unwrap();
        let e = ExponentPair::from_values(&p, &q).unwrap();
        let seq = FunctionSequence::from_rows(&r).unwrap();
        let n = mixed_norm(&seq, &e, &part, TOL).unwrap().value;
        prop_assert_eq!(n == 0.0, seq.is_zero());
    }

    #[test]
    fn constant_q_modular_ignores_term_order(
        (m, p, r) in (1usize..5).prop_flat_map(|n| (measures(n), prop::collection::vec(exponent_value(), n), rows(n, 4))),
        q in exponent_value(),
        seed in any::<u64>(),
    ) {
        let n = m.len();
        let part = Partition::new(m).unwrap();
        let e = ExponentPair::from_values(&p, &vec![q; n]).unwrap();
        let mut shuffled = r.clone();
        // deterministic rotation plus reversal driven by the seed
        shuffled.rotate_left((seed as usize) % r.len());
        if seed & 1 == 1 {
            shuffled.reverse();
        }
        let a = mixed_modular(&FunctionSequence::from_rows(&r).unwrap(), &e, &part, TOL).unwrap().value;
        let b = mixed_modular(&FunctionSequence::from_rows(&shuffled).unwrap(), &e, &part, TOL).unwrap().value;
        prop_assert!(close(a, b, 1e-11), "{a} vs {b}");
    }

    #[test]
    fn alternate_modular_agrees_in_q_le_p((m, p, q, r) in two_level()) {
        let (p, q): (Vec<f64>, Vec<f64>) = p.iter().zip(&q).map(|(&a, &b)| (a.max(b), a.min(b))).unzip();
        let part = Partition::new(m).unwrap();
        let e = ExponentPair::from_values(&p, &q).unwrap();
        let seq = FunctionSequence::from_rows(&r).unwrap();
        let direct = mixed_modular(&seq, &e, &part, TOL).unwrap().value;
        let alt = mixed_modular_alt(&seq, &e, &part, TOL).unwrap().value;
        prop_assert!(close(alt, direct, 10.0 * TOL), "{alt} vs {direct}");
    }

    #[test]
    fn constant_exponents_collapse(
        (m, r) in (1usize..5).prop_flat_map(|n| (measures(n), rows(n, 4))),
        p in exponent_value(),
        q in exponent_value(),
    ) {
        let n = m.len();
        let part = Partition::new(m.clone()).unwrap();
        let e = ExponentPair::from_values(&vec![p; n], &vec![q; n]).unwrap();
        let got = mixed_norm(&FunctionSequence::from_rows(&r).unwrap(), &e, &part, TOL).unwrap().value;
        let expected = constant_mixed_norm(&r, &m, p, q);
        prop_assert!(close(got, expected, 10.0 * TOL), "{got} vs {expected}");
    }

    #[test]
    fn classifier_is_sound(
        (p, q) in (1usize..8).prop_flat_map(|n| (
            prop::collection::vec(prop_oneof![Just(0.5), exponent_value()], n),
            prop::collection::vec(prop_oneof![Just(0.5), exponent_value()], n),
        ))
    ) {
        let e = ExponentPair::from_values(&p, &q).unwrap();
        let cells = e.p().iter().zip(e.q());
        match classify_regime(&e) {
            Regime::ConstantQ => {
                prop_assert!(q.iter().all(|&v| v == q[0] && v >= 1.0));
                prop_assert!(p.iter().all(|&v| v >= 1.0));
            }
            Regime::QleP => prop_assert!(cells.clone().all(|(&a, &b)| q_le_p_at(a, b))),
            Regime::HolderConjugate => prop_assert!(cells.clone().all(|(&a, &b)| holder_conjugate_at(a, b))),
            Regime::NoneUniform(w) => {
                prop_assert!(!q_le_p_at(e.p()[w.q_le_p], e.q()[w.q_le_p]));
                prop_assert!(!holder_conjugate_at(e.p()[w.holder_conjugate], e.q()[w.holder_conjugate]));
            }
        }
    }

    #[test]
    fn generated_instances_satisfy_invariants(seed in any::<u64>(), regime in prop::option::of(prop_oneof![
        Just(UniformRegime::ConstantQ), Just(UniformRegime::QleP), Just(UniformRegime::HolderConjugate)
    ])) {
        let cfg = GenConfig { regime, ..GenConfig::default().with_seed(seed) };
        let inst = gen_instance(&cfg).unwrap();
        let n = inst.partition.len();
        prop_assert!((1..=8).contains(&n));
        prop_assert!(inst.exponents.p_minus() >= 1.0 && inst.exponents.q_minus() >= 1.0);
        prop_assert!((1..=4).contains(&inst.f.len()) && (1..=4).contains(&inst.g.len()));
        prop_assert_eq!(inst.f.cells(), n);
        if regime.is_some() {
            prop_assert!(classify_regime(&inst.exponents).is_uniform());
        }
        prop_assert_eq!(&gen_instance(&cfg).unwrap(), &inst);
    }
}
