//! Shared inputs for the benchmarks.

use ratdense::{Dfa, Measure, Sft};

pub const ABC: [char; 3] = ['a', 'b', 'c'];

pub fn contains_a() -> Dfa {
    Dfa::parse_regex("(a|b)*a(a|b)*", &['a', 'b']).expect("valid regex")
}

pub fn begins_and_ends_with_a() -> Dfa {
    Dfa::parse_regex("a.*", &ABC)
        .and_then(|d| d.intersect(&Dfa::parse_regex(".*a", &ABC)?))
        .expect("valid regex")
}

pub fn example_shift() -> Sft {
    Sft::from_adjacency(&ABC, &[vec![1, 0, 1], vec![1, 1, 1], vec![1, 1, 1]]).expect("irreducible")
}

pub fn half_half() -> Measure {
    Measure::uniform(&['a', 'b']).expect("valid measure")
}
