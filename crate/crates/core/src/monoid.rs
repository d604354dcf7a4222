//! Transition monoids of complete automata.
//!
//! Elements are transformations of the state set, stored as arrays of state
//! indices; the product `x · y` applies `x` first, then `y`, so that the map
//! `φ: A* → M` sending a word to its action is a morphism.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;

use crate::automata::Dfa;
use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: usize = 100_000;

#[derive(Debug, Clone)]
pub struct Monoid {
    alphabet: Vec<char>,
    elements: Vec<Vec<u32>>,
    witnesses: Vec<Vec<usize>>,
    index: HashMap<Vec<u32>, usize>,
    generators: Vec<usize>,
    /// `right[e * k + a] = e · φ(a)`
    right: Vec<usize>,
    /// `left[e * k + a] = φ(a) · e`
    left: Vec<usize>,
}

/// Minimal ideal and aperiodicity data.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealInfo {
    pub minimal_ideal: Vec<usize>,
    pub aperiodic: bool,
    pub stabilization_exponent: Option<usize>,
}

impl IdealInfo {
    pub fn contains(&self, e: usize) -> bool {
        self.minimal_ideal.binary_search(&e).is_ok()
    }
}

fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&q| y[q as usize]).collect()
}

impl Monoid {
    pub fn transition_monoid(dfa: &Dfa) -> Result<Monoid> {
        Self::transition_monoid_capped(dfa, DEFAULT_SIZE_CAP)
    }

    /// Breadth-first closure of the letter actions. Witness words are the
    /// first words in radix (shortlex) order reaching each element.
    pub fn transition_monoid_capped(dfa: &Dfa, cap: usize) -> Result<Monoid> {
        let k = dfa.alphabet().len();
        let n = dfa.num_states();
        let gens: Vec<Vec<u32>> =
            (0..k).map(|a| (0..n).map(|q| dfa.next(q, a) as u32).collect()).collect();

        let identity: Vec<u32> = (0..n as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut witnesses = vec![Vec::new()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut right = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (a, g) in gens.iter().enumerate() {
                let t = compose(&elements[e], g);
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::MonoidTooLarge(cap));
                        }
                        let id = elements.len();
                        let mut w = witnesses[e].clone();
                        w.push(a);
                        witnesses.push(w);
                        index.insert(t.clone(), id);
                        elements.push(t);
                        queue.push_back(id);
                        id
                    }
                };
                right.push(id);
            }
        }
        let generators = (0..k).map(|a| right[a]).collect();
        let left = elements
            .iter()
            .flat_map(|e| gens.iter().map(move |g| compose(g, e)))
            .map(|t| index[&t])
            .collect();
        Ok(Monoid { alphabet: dfa.alphabet().to_vec(), elements, witnesses, index, generators, right, left })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Element `φ(a)` for the letter with index `a`.
    pub fn generator(&self, a: usize) -> usize {
        self.generators[a]
    }

    pub fn transformation(&self, e: usize) -> &[u32] {
        &self.elements[e]
    }

    pub fn witness(&self, e: usize) -> String {
        self.witnesses[e].iter().map(|&a| self.alphabet[a]).collect()
    }

    /// `e · φ(a)`
    #[inline]
    pub fn act_right(&self, e: usize, a: usize) -> usize {
        self.right[e * self.alphabet.len() + a]
    }

    /// `φ(a) · e`
    #[inline]
    pub fn act_left(&self, a: usize, e: usize) -> usize {
        self.left[e * self.alphabet.len() + a]
    }

    pub fn mult(&self, x: usize, y: usize) -> usize {
        self.witnesses[y].iter().fold(x, |e, &a| self.act_right(e, a))
    }

    /// Element `φ(word)`; the word is given as letter indices.
    pub fn element_of(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity(), |e, &a| self.act_right(e, a))
    }

    pub fn lookup(&self, transformation: &[u32]) -> Option<usize> {
        self.index.get(transformation).copied()
    }

    /// Rank (image size) of an element.
    pub fn rank(&self, e: usize) -> usize {
        self.elements[e].iter().collect::<HashSet<_>>().len()
    }

    fn closure(&self, seeds: &[usize], right: bool, left: bool) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = Vec::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(e) = stack.pop() {
            for a in 0..k {
                let mut nexts = [None, None];
                if right {
                    nexts[0] = Some(self.act_right(e, a));
                }
                if left {
                    nexts[1] = Some(self.act_left(a, e));
                }
                for f in nexts.into_iter().flatten() {
                    if !seen[f] {
                        seen[f] = true;
                        stack.push(f);
                    }
                }
            }
        }
        (0..self.len()).filter(|&e| seen[e]).collect()
    }

    /// Right ideal `eM`, sorted.
    pub fn right_ideal(&self, e: usize) -> Vec<usize> {
        self.closure(&[e], true, false)
    }

    /// Left ideal `Me`, sorted.
    pub fn left_ideal(&self, e: usize) -> Vec<usize> {
        self.closure(&[e], false, true)
    }

    /// Two-sided ideal `MeM`, sorted.
    pub fn two_sided_ideal(&self, e: usize) -> Vec<usize> {
        self.closure(&[e], true, true)
    }

    pub fn minimal_ideal(&self) -> IdealInfo {
        // start from an element of least rank, then descend until every
        // element of the candidate generates it
        let start = (0..self.len()).min_by_key(|&e| (self.rank(e), e)).unwrap_or(0);
        let mut ideal = self.two_sided_ideal(start);
        'outer: loop {
            for &k in &ideal {
                let sub = self.two_sided_ideal(k);
                if sub.len() < ideal.len() {
                    ideal = sub;
                    continue 'outer;
                }
            }
            break;
        }
        let exponent = self.stabilization_exponent();
        IdealInfo { minimal_ideal: ideal, aperiodic: exponent.is_some(), stabilization_exponent: exponent }
    }

    /// Index and period of the cyclic semigroup generated by `e`.
    pub fn index_and_period(&self, e: usize) -> (usize, usize) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut power = e;
        let mut n = 1;
        loop {
            if let Some(&first) = seen.get(&power) {
                return (first, n - first);
            }
            seen.insert(power, n);
            power = self.mult(power, e);
            n += 1;
        }
    }

    /// Smallest `n ≥ 1` with `m^n = m^(n+1)` for every element, if any.
    pub fn stabilization_exponent(&self) -> Option<usize> {
        let mut exponent = 1;
        for e in 0..self.len() {
            let (index, period) = self.index_and_period(e);
            if period != 1 {
                return None;
            }
            exponent = exponent.max(index);
        }
        Some(exponent)
    }

    pub fn is_aperiodic(&self) -> bool {
        self.stabilization_exponent().is_some()
    }

    /// `Card(eM ∩ Me)` for an element of the minimal ideal.
    pub fn h_intersection_size(&self, ideal: &IdealInfo, e: usize) -> Result<usize> {
        if !ideal.contains(e) {
            return Err(Error::NotInMinimalIdeal(e));
        }
        let r: HashSet<usize> = self.right_ideal(e).into_iter().collect();
        Ok(self.left_ideal(e).into_iter().filter(|f| r.contains(f)).count())
    }

    /// One element per line: index, witness word and transformation.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in 0..self.len() {
            let w = self.witness(e);
            let w = if w.is_empty() { "ε".to_string() } else { w };
            let t: Vec<String> = self.elements[e].iter().map(|q| q.to_string()).collect();
            let _ = writeln!(out, "{e}\t{w}\t[{}]", t.join(" "));
        }
        out
    }
}
