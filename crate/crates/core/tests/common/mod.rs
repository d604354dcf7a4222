//! Test helpers: a reference regex matcher and random inputs.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use ratdense::{Markov, Measure};

#[derive(Debug, Clone)]
pub enum Re {
    Empty,
    Eps,
    Sym(char),
    Any,
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
}

impl Re {
    pub fn render(&self) -> String {
        match self {
            Re::Empty => "∅".into(),
            Re::Eps => "ε".into(),
            Re::Sym(c) => c.to_string(),
            Re::Any => ".".into(),
            Re::Cat(x, y) => format!("{}{}", x.render(), y.render()),
            Re::Alt(x, y) => format!("({}|{})", x.render(), y.render()),
            Re::Star(x) => format!("({})*", x.render()),
        }
    }

    fn ends(&self, w: &[char], i: usize) -> BTreeSet<usize> {
        match self {
            Re::Empty => BTreeSet::new(),
            Re::Eps => BTreeSet::from([i]),
            Re::Sym(c) => (i < w.len() && w[i] == *c).then_some(i + 1).into_iter().collect(),
            Re::Any => (i < w.len()).then_some(i + 1).into_iter().collect(),
            Re::Cat(x, y) => x.ends(w, i).into_iter().flat_map(|j| y.ends(w, j)).collect(),
            Re::Alt(x, y) => x.ends(w, i).union(&y.ends(w, i)).copied().collect(),
            Re::Star(x) => {
                let mut seen = BTreeSet::from([i]);
                let mut frontier = vec![i];
                while let Some(j) = frontier.pop() {
                    for k in x.ends(w, j) {
                        if seen.insert(k) {
                            frontier.push(k);
                        }
                    }
                }
                seen
            }
        }
    }

    pub fn matches(&self, w: &[char]) -> bool {
        self.ends(w, 0).contains(&w.len())
    }
}

pub fn re_strategy(alphabet: Vec<char>) -> impl Strategy<Value = Re> {
    let leaf = prop_oneof![
        1 => Just(Re::Empty),
        1 => Just(Re::Eps),
        1 => Just(Re::Any),
        6 => proptest::sample::select(alphabet).prop_map(Re::Sym),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Re::Cat(Box::new(x), Box::new(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Re::Alt(Box::new(x), Box::new(y))),
            inner.prop_map(|x| Re::Star(Box::new(x))),
        ]
    })
}

pub fn random_regex(rng: &mut impl Rng, alphabet: &[char], depth: usize) -> Re {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Re::Eps,
            1 => Re::Any,
            _ => Re::Sym(alphabet[rng.gen_range(0..alphabet.len())]),
        };
    }
    let op = rng.gen_range(0..3);
    let x = Box::new(random_regex(rng, alphabet, depth - 1));
    if op == 2 {
        return Re::Star(x);
    }
    let y = Box::new(random_regex(rng, alphabet, depth - 1));
    if op == 0 {
        Re::Cat(x, y)
    } else {
        Re::Alt(x, y)
    }
}

/// Weights in `[floor, 1)`, normalized.
fn random_distribution(rng: &mut impl Rng, k: usize, floor: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(floor..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn random_bernoulli(rng: &mut impl Rng, alphabet: &[char]) -> Measure {
    let p = random_distribution(rng, alphabet.len(), 0.1);
    Measure::bernoulli(&alphabet.iter().copied().zip(p).collect::<Vec<_>>()).unwrap()
}

pub fn random_markov(rng: &mut impl Rng, alphabet: &[char]) -> Measure {
    let k = alphabet.len();
    let pi = random_distribution(rng, k, 0.1);
    let rows: Vec<Vec<f64>> = (0..k).map(|_| random_distribution(rng, k, 0.0)).collect();
    Measure::Markov(Markov::over_letters(alphabet.to_vec(), pi, &rows).unwrap())
}

pub fn all_words(alphabet: &[char], n: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<char>| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn words_upto(alphabet: &[char], n: usize) -> Vec<Vec<char>> {
    (0..=n).flat_map(|k| all_words(alphabet, k)).collect()
}
