#![allow(dead_code)]

use mealy_core::{MealyMachine, Transformation, Words};
use proptest::prelude::*;
use rand::Rng;

/// Raw tables for a machine with `states` states over `1..=k`; canonicalized
/// at state 0.
pub fn from_tables(k: usize, targets: &[usize], outputs: &[usize]) -> Transformation {
    let states = targets.len() / k;
    let mut m = MealyMachine::new(k);
    for q in 0..states {
        m.add_state(
            format!("q{q}"),
            &targets[q * k..(q + 1) * k],
            &outputs[q * k..(q + 1) * k],
        )
        .unwrap();
    }
    m.canonicalize(0).unwrap()
}

pub fn random_tables(rng: &mut impl Rng, states: usize, k: usize) -> (Vec<usize>, Vec<usize>) {
    let targets = (0..states * k).map(|_| rng.gen_range(0..states)).collect();
    let outputs = (0..states * k).map(|_| rng.gen_range(1..=k)).collect();
    (targets, outputs)
}

pub fn random_transformation(rng: &mut impl Rng, max_states: usize, k: usize) -> Transformation {
    let states = rng.gen_range(1..=max_states);
    let (targets, outputs) = random_tables(rng, states, k);
    from_tables(k, &targets, &outputs)
}

/// Alphabet size and raw tables; shrinks toward small machines.
pub fn tables(
    max_states: usize,
    max_k: usize,
) -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (2..=max_k, 1..=max_states).prop_flat_map(|(k, n)| {
        (
            Just(k),
            proptest::collection::vec(0..n, n * k),
            proptest::collection::vec(1..=k, n * k),
        )
    })
}

pub fn transformation(max_states: usize, max_k: usize) -> impl Strategy<Value = Transformation> {
    tables(max_states, max_k).prop_map(|(k, t, o)| from_tables(k, &t, &o))
}

/// Several transformations over one alphabet.
pub fn transformations(
    count: usize,
    max_states: usize,
    max_k: usize,
) -> impl Strategy<Value = Vec<Transformation>> {
    (2..=max_k).prop_flat_map(move |k| {
        proptest::collection::vec(
            (1..=max_states).prop_flat_map(move |n| {
                (
                    proptest::collection::vec(0..n, n * k),
                    proptest::collection::vec(1..=k, n * k),
                )
                    .prop_map(move |(t, o)| from_tables(k, &t, &o))
            }),
            count,
        )
    })
}

pub fn words_upto(k: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max_len).flat_map(move |n| Words::new(k, n))
}

pub fn section_is_identity(t: &Transformation, u: &[usize]) -> bool {
    t.section(u).unwrap().is_identity()
}
