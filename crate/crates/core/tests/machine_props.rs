mod common;

use common::*;
use mealy_core::{MealyMachine, Transformation, Words};
use proptest::prelude::*;

/// Runs the raw tables directly, without canonicalizing.
fn apply_raw(k: usize, targets: &[usize], outputs: &[usize], word: &[usize]) -> Vec<usize> {
    let mut q = 0;
    word.iter()
        .map(|&x| {
            let i = q * k + x - 1;
            q = targets[i];
            outputs[i]
        })
        .collect()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn composition_is_associative(v in transformations(3, 3, 3)) {
        let (s, t, u) = (&v[0], &v[1], &v[2]);
        let left = s.compose(t).unwrap().compose(u).unwrap();
        let right = s.compose(&t.compose(u).unwrap()).unwrap();
        prop_assert!(left.equal(&right).unwrap());
    }

    #[test]
    fn composition_acts_left_to_right(v in transformations(2, 4, 3)) {
        let (s, t) = (&v[0], &v[1]);
        let st = s.compose(t).unwrap();
        for u in words_upto(s.alphabet_size(), 6) {
            prop_assert_eq!(st.apply(&u).unwrap(), t.apply(&s.apply(&u).unwrap()).unwrap());
        }
    }

    #[test]
    fn section_of_product(v in transformations(2, 4, 3)) {
        let (s, t) = (&v[0], &v[1]);
        let st = s.compose(t).unwrap();
        for u in words_upto(s.alphabet_size(), 4) {
            let expected = s
                .section(&u)
                .unwrap()
                .compose(&t.section(&s.apply(&u).unwrap()).unwrap())
                .unwrap();
            prop_assert_eq!(st.section(&u).unwrap(), expected);
        }
    }

    #[test]
    fn canonical_form_preserves_action((k, targets, outputs) in tables(5, 3)) {
        let t = from_tables(k, &targets, &outputs);
        for u in words_upto(k, 6) {
            prop_assert_eq!(t.apply(&u).unwrap(), apply_raw(k, &targets, &outputs, &u));
        }
    }

    #[test]
    fn canonical_form_is_idempotent(t in transformation(5, 3)) {
        let again = t.to_machine(|q| format!("x{q}")).canonicalize(0).unwrap();
        prop_assert_eq!(&again, &t);
        prop_assert_eq!(again.serialize(), t.serialize());
    }

    #[test]
    fn canonical_form_ignores_state_order((k, targets, outputs) in tables(4, 3), seed in any::<u64>()) {
        // relabel the raw states by a permutation fixing nothing in particular
        let n = targets.len() / k;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let mut m = MealyMachine::new(k);
        for &old in &inverse {
            let row: Vec<usize> = targets[old * k..(old + 1) * k].iter().map(|&q| perm[q]).collect();
            m.add_state(format!("q{old}"), &row, &outputs[old * k..(old + 1) * k]).unwrap();
        }
        prop_assert_eq!(m.canonicalize(perm[0]).unwrap(), from_tables(k, &targets, &outputs));
    }

    #[test]
    fn inequality_has_short_witness(v in transformations(2, 3, 2)) {
        let (s, t) = (&v[0], &v[1]);
        let bound = s.state_count() * t.state_count();
        let witness = words_upto(s.alphabet_size(), bound)
            .find(|u| s.apply(u).unwrap() != t.apply(u).unwrap());
        prop_assert_eq!(s.equal(t).unwrap(), witness.is_none());
    }

    #[test]
    fn power_is_repeated_composition(t in transformation(3, 3), n in 0u64..7) {
        let mut expected = Transformation::identity(t.alphabet_size());
        for _ in 0..n {
            expected = expected.compose(&t).unwrap();
        }
        prop_assert_eq!(t.power(n), expected);
    }

    #[test]
    fn serialization_round_trips(t in transformation(4, 3)) {
        let text = t.serialize();
        let mut lines = text.lines();
        let k: usize = lines.next().unwrap().strip_prefix("k=").unwrap().parse().unwrap();
        let mut m = MealyMachine::new(k);
        for line in lines {
            let (_, rest) = line.split_once(": out=[").unwrap();
            let (out, to) = rest.split_once("] to=[").unwrap();
            let parse = |s: &str| s.split(',').map(|v| v.parse().unwrap()).collect::<Vec<usize>>();
            m.add_state("q", &parse(to.trim_end_matches(']')), &parse(out)).unwrap();
        }
        prop_assert_eq!(m.canonicalize(0).unwrap(), t);
    }
}

#[test]
fn words_enumerate_every_word_once() {
    for k in 1..=3 {
        for n in 0..=4 {
            let all: Vec<_> = Words::new(k, n).collect();
            assert_eq!(all.len(), k.pow(n as u32));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn idempotent_examples() {
    let set = mealy_core::parse_wreath("alphabet = 2\ns = (s, 1)[2,2]").unwrap();
    let s = set.get("s").unwrap();
    assert!(s.compose(s).unwrap().equal(s).unwrap());

    let set = mealy_core::parse_wreath("alphabet = 3\na = (1, 1, a)[1,1,2]").unwrap();
    let a = set.get("a").unwrap();
    assert_ne!(a.power(1), a.power(2));
    assert_eq!(a.power(2), a.power(3));
    // independently, on every word of length ≤ 6
    for u in words_upto(3, 6) {
        let twice = a.apply(&a.apply(&u).unwrap()).unwrap();
        let thrice = a.apply(&twice).unwrap();
        assert_eq!(twice, thrice);
    }
    assert!(words_upto(3, 6).any(|u| {
        let once = a.apply(&u).unwrap();
        once != a.apply(&once).unwrap()
    }));
}
