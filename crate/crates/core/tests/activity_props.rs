mod common;

use std::collections::BTreeSet;

use common::*;
use mealy_core::activity::growth_rate_detout;
use mealy_core::{
    activity, activity_series, brute_force_activity, classify, parse_wreath, pruned_output,
    ActivityConfig, DetOut, GrowthClass, Transformation, Words,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Distinct images of length-`n` words whose section is nontrivial.
fn enumerate_activity(t: &Transformation, n: usize) -> usize {
    Words::new(t.alphabet_size(), n)
        .filter(|u| !section_is_identity(t, u))
        .map(|u| t.apply(&u).unwrap())
        .collect::<BTreeSet<_>>()
        .len()
}

fn example(src: &str, name: &str) -> Transformation {
    parse_wreath(src).unwrap().get(name).unwrap().clone()
}

const EXAMPLES: &[(&str, &str)] = &[
    ("alphabet = 2\nt0 = (1, t0)[2,2]", "t0"),
    ("alphabet = 2\nt0 = (1, t0)[2,2]\nt1 = (t0, t1)[1,1]", "t1"),
    ("alphabet = 2\nt0 = (1, t0)[2,2]\nt1 = (t0, t1)[1,1]\nt2 = (t1, t2)[2,2]", "t2"),
    (
        "alphabet = 2\nt0 = (1, t0)[2,2]\nt1 = (t0, t1)[1,1]\nt2 = (t1, t2)[2,2]\nt3 = (t2, t3)[1,1]",
        "t3",
    ),
    ("alphabet = 2\nt0 = (1, t0)[2,2]\nsq = (t0, sq)[2,2]", "sq"),
    ("alphabet = 2\np = (q, r)[1,1]\nq = (r, 1)[1,2]\nr = (r, r)[2,2]", "p"),
    ("alphabet = 2\ns = (t, s)[1,1]\nt = (1, s)", "s"),
    ("alphabet = 2\ns = (s, 1)[2,2]", "s"),
    ("alphabet = 3\nb = (a, 1, b)[2,3,1]\na = (1, 1, a)[1,1,2]", "b"),
];

fn ln(v: &BigUint) -> f64 {
    v.to_f64().unwrap().ln()
}

fn rate_of(class: GrowthClass) -> f64 {
    match class {
        GrowthClass::Polynomial { .. } => 0.0,
        GrowthClass::Exponential { rate, .. } => rate,
    }
}

#[test]
fn dynamic_program_matches_enumeration_on_random_machines() {
    let mut rng = StdRng::seed_from_u64(0xAC71);
    for _ in 0..200 {
        let k = rng.gen_range(2..=3);
        let t = random_transformation(&mut rng, 4, k);
        let series = activity_series(&t, 8, &ActivityConfig::default()).unwrap();
        for (n, value) in (1..).zip(&series) {
            assert_eq!(
                *value,
                BigUint::from(enumerate_activity(&t, n)),
                "{t} n={n}"
            );
            assert_eq!(*value, brute_force_activity(&t, n, 1 << 20).unwrap());
        }
    }
}

#[test]
fn dynamic_program_matches_enumeration_on_examples() {
    for (src, name) in EXAMPLES {
        let t = example(src, name);
        for n in 0..=8 {
            assert_eq!(
                activity(&t, n).unwrap(),
                BigUint::from(enumerate_activity(&t, n)),
                "{name} n={n}"
            );
        }
    }
}

#[test]
fn series_agrees_with_polynomial_degree() {
    for (src, name) in EXAMPLES {
        let t = example(src, name);
        let Ok(GrowthClass::Polynomial { degree }) = classify(&t) else {
            continue;
        };
        // series[n - 1] is α(n)
        let series = activity_series(&t, 1024, &ActivityConfig::default()).unwrap();
        if degree < 0 {
            assert_eq!(series[63], BigUint::from(0u32), "{name}");
            continue;
        }
        let ratio = ln(&series[63]) / 64f64.ln();
        // the constant factor of a cubic is still visible at n = 64
        if degree < 3 {
            assert!(
                (ratio - degree as f64).abs() <= 0.5,
                "{name}: {ratio} vs {degree}"
            );
        } else {
            let slope = (ln(&series[1023]) - ln(&series[511])) / 2f64.ln();
            assert!(
                (slope - degree as f64).abs() <= 0.5,
                "{name}: slope {slope} vs {degree}"
            );
        }
    }
}

#[test]
fn series_agrees_with_exponential_rate() {
    let t = example(EXAMPLES[6].0, "s");
    let GrowthClass::Exponential { lambda, .. } = classify(&t).unwrap() else {
        panic!("fibonacci machine is exponential");
    };
    let a48 = activity(&t, 48).unwrap();
    assert!((ln(&a48) / 48.0 - lambda.ln()).abs() <= 0.05);
}

#[test]
fn activity_is_bounded_by_word_count() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let k = rng.gen_range(2..=3);
        let t = random_transformation(&mut rng, 5, k);
        let series = activity_series(&t, 12, &ActivityConfig::default()).unwrap();
        for (n, v) in (1..).zip(&series) {
            assert!(*v <= BigUint::from(k).pow(n as u32));
        }
    }
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn activity_is_subadditive(v in transformations(2, 4, 3)) {
        let (s, t) = (&v[0], &v[1]);
        let st = s.compose(t).unwrap();
        for n in 0..=8 {
            prop_assert!(
                activity(&st, n).unwrap() <= activity(s, n).unwrap() + activity(t, n).unwrap()
            );
        }
    }

    #[test]
    fn classes_are_closed_under_composition(v in transformations(2, 4, 2)) {
        let (s, t) = (&v[0], &v[1]);
        let (cs, ct) = (classify(s).unwrap(), classify(t).unwrap());
        let cst = classify(&s.compose(t).unwrap()).unwrap();
        if let (Some(ds), Some(dt)) = (cs.degree(), ct.degree()) {
            prop_assert!(cst.degree().is_some_and(|d| d <= ds.max(dt)), "{} {} {}", cs, ct, cst);
        }
        prop_assert!(rate_of(cst) <= rate_of(cs).max(rate_of(ct)) + 1e-6, "{} {} {}", cs, ct, cst);
    }

    #[test]
    fn subsets_are_output_reachable_sets(t in transformation(4, 3)) {
        let k = t.alphabet_size();
        let det = DetOut::of(&t, 1 << 16).unwrap();
        let nfa = pruned_output(&t);
        // states reached by some input with image w, excluding the identity
        let mut reached: std::collections::BTreeMap<Vec<usize>, BTreeSet<usize>> = Default::default();
        for u in words_upto(k, 6) {
            let q = t.state_after(&u).unwrap();
            let entry = reached.entry(t.apply(&u).unwrap()).or_default();
            if !t.is_identity_state(q) {
                entry.insert(q);
            }
        }
        for w in words_upto(k, 6) {
            let reached = reached.remove(&w).unwrap_or_default();
            let mut subset = det.roots().first().copied();
            for &y in &w {
                subset = subset.and_then(|i| det.successor(i, y));
            }
            let got: BTreeSet<usize> = subset
                .map(|i| det.subsets()[i].iter().copied().collect())
                .unwrap_or_default();
            prop_assert_eq!(&got, &reached, "w={:?}", w);
            prop_assert!(got.iter().all(|&q| nfa.contains_state(q)));
        }
    }

    #[test]
    fn growth_rate_lies_in_its_bracket(t in transformation(4, 3)) {
        let det = DetOut::of(&t, 1 << 16).unwrap();
        let g = growth_rate_detout(&det, &ActivityConfig::default()).unwrap();
        prop_assert!(g.lower <= g.lambda && g.lambda <= g.upper);
        prop_assert!(g.upper - g.lower <= 1e-6 * g.upper.max(1.0));
        prop_assert!(g.lambda >= 1.0 - 1e-12 && g.lambda <= t.alphabet_size() as f64 + 1e-9);
    }
}
