//! Complete deterministic automata over single-character alphabets.
//!
//! Every [`Dfa`] is complete: the transition function is total, with an
//! explicit sink state when the language needs one. Automata produced by
//! [`Dfa::parse_regex`], [`Dfa::minimize`] and the Boolean operations are
//! minimal and canonically numbered (breadth-first from the initial state,
//! letters visited in alphabet order), so equal languages give equal values.

mod regex;

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Vec<char>,
    /// `delta[q * k + a]` with `k = alphabet.len()`.
    delta: Vec<usize>,
    initial: usize,
    terminal: Vec<bool>,
}

pub(crate) fn check_alphabet(alphabet: &[char]) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::InvalidAlphabet("empty alphabet".into()));
    }
    for (i, c) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(c) {
            return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
        }
    }
    Ok(())
}

fn alphabet_string(alphabet: &[char]) -> String {
    alphabet.iter().collect()
}

impl Dfa {
    /// Builds an automaton from a row-per-state transition table.
    pub fn new(
        alphabet: Vec<char>,
        transitions: Vec<Vec<usize>>,
        initial: usize,
        terminal: Vec<bool>,
    ) -> Result<Self> {
        check_alphabet(&alphabet)?;
        let n = transitions.len();
        let k = alphabet.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if terminal.len() != n {
            return Err(Error::InvalidAutomaton("terminal flags do not match state count".into()));
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton(format!("initial state {initial} out of range")));
        }
        let mut delta = Vec::with_capacity(n * k);
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidAutomaton(format!("state {q} has {} transitions", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidAutomaton(format!("transition to missing state {bad}")));
            }
            delta.extend_from_slice(row);
        }
        Ok(Dfa { alphabet, delta, initial, terminal })
    }

    pub(crate) fn from_raw(alphabet: Vec<char>, delta: Vec<usize>, initial: usize, terminal: Vec<bool>) -> Self {
        debug_assert_eq!(delta.len(), terminal.len() * alphabet.len());
        Dfa { alphabet, delta, initial, terminal }
    }

    /// Compiles a regular expression into its minimal complete automaton.
    ///
    /// Grammar: single-character literals, juxtaposition, `|`, `*`,
    /// parentheses, `.` for any symbol, `ε` (or `%e`) for the empty word and
    /// `∅` (or `%0`) for the empty language. Whitespace that is not an
    /// alphabet symbol is ignored.
    pub fn parse_regex(text: &str, alphabet: &[char]) -> Result<Self> {
        check_alphabet(alphabet)?;
        let ast = regex::parse(text, alphabet)?;
        let (delta, initial, terminal) = regex::determinize(&ast, alphabet.len());
        Ok(Dfa::from_raw(alphabet.to_vec(), delta, initial, terminal).minimize())
    }

    /// The automaton of the empty language.
    pub fn empty(alphabet: &[char]) -> Result<Self> {
        check_alphabet(alphabet)?;
        Ok(Dfa::from_raw(alphabet.to_vec(), vec![0; alphabet.len()], 0, vec![false]))
    }

    /// The automaton of `A*`.
    pub fn universal(alphabet: &[char]) -> Result<Self> {
        check_alphabet(alphabet)?;
        Ok(Dfa::from_raw(alphabet.to_vec(), vec![0; alphabet.len()], 0, vec![true]))
    }

    /// The automaton of the right ideal `uA*`.
    pub fn prefixed_by(alphabet: &[char], prefix: &[char]) -> Result<Self> {
        check_alphabet(alphabet)?;
        let k = alphabet.len();
        let m = prefix.len();
        // states 0..=m track the matched prefix, m + 1 is the sink
        let sink = m + 1;
        let mut delta = vec![sink; (m + 2) * k];
        for (i, c) in prefix.iter().enumerate() {
            let a = alphabet.iter().position(|x| x == c).ok_or(Error::UnknownSymbol(*c))?;
            delta[i * k + a] = i + 1;
        }
        for a in 0..k {
            delta[m * k + a] = m;
        }
        let mut terminal = vec![false; m + 2];
        terminal[m] = true;
        Ok(Dfa::from_raw(alphabet.to_vec(), delta, 0, terminal).minimize())
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.terminal.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_terminal(&self, q: usize) -> bool {
        self.terminal[q]
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        self.terminal.iter().enumerate().filter(|(_, &t)| t).map(|(q, _)| q)
    }

    /// Successor of `q` under the letter with index `a`.
    #[inline]
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn symbol_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&x| x == c)
    }

    /// State reached from `q` after reading `word`.
    pub fn run(&self, q: usize, word: &[char]) -> Result<usize> {
        word.iter().try_fold(q, |q, &c| {
            let a = self.symbol_index(c).ok_or(Error::UnknownSymbol(c))?;
            Ok(self.next(q, a))
        })
    }

    pub fn accepts(&self, word: &[char]) -> Result<bool> {
        Ok(self.terminal[self.run(self.initial, word)?])
    }

    pub fn accepts_str(&self, word: &str) -> Result<bool> {
        let w: Vec<char> = word.chars().collect();
        self.accepts(&w)
    }

    /// Membership for a word given as letter indices.
    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.initial, |q, &a| self.next(q, a));
        self.terminal[q]
    }

    /// True when no word is accepted.
    pub fn is_empty(&self) -> bool {
        !self.reachable().iter().any(|&q| self.terminal[q])
    }

    fn reachable(&self) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
        }
        order
    }

    /// Minimal complete automaton of the same language, canonically numbered.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let order = self.reachable();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            local[q] = i;
        }
        let n = order.len();
        let succ: Vec<usize> = order
            .iter()
            .flat_map(|&q| (0..k).map(move |a| (q, a)))
            .map(|(q, a)| local[self.next(q, a)])
            .collect();

        // Moore refinement
        let mut class: Vec<usize> = order.iter().map(|&q| self.terminal[q] as usize).collect();
        let mut count = {
            let mut seen = [false; 2];
            class.iter().for_each(|&c| seen[c] = true);
            seen.iter().filter(|&&s| s).count()
        };
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_class = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k).map(|a| class[succ[q * k + a]]));
                let len = ids.len();
                next_class.push(*ids.entry(sig).or_insert(len));
            }
            let new_count = ids.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        let mut delta = vec![0; count * k];
        let mut terminal = vec![false; count];
        for q in 0..n {
            let c = class[q];
            terminal[c] = self.terminal[order[q]];
            for a in 0..k {
                delta[c * k + a] = class[succ[q * k + a]];
            }
        }
        Dfa::from_raw(self.alphabet.clone(), delta, class[0], terminal).canonical()
    }

    /// Renumbers reachable states breadth-first from the initial state.
    fn canonical(&self) -> Dfa {
        let k = self.alphabet.len();
        let order = self.reachable();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            local[q] = i;
        }
        let delta = order
            .iter()
            .flat_map(|&q| (0..k).map(move |a| (q, a)))
            .map(|(q, a)| local[self.next(q, a)])
            .collect();
        let terminal = order.iter().map(|&q| self.terminal[q]).collect();
        Dfa::from_raw(self.alphabet.clone(), delta, 0, terminal)
    }

    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: alphabet_string(&self.alphabet),
                right: alphabet_string(&other.alphabet),
            });
        }
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut queue = VecDeque::from([0usize]);
        let mut delta = Vec::new();
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id];
            for a in 0..k {
                let target = (self.next(p, a), other.next(q, a));
                let j = *index.entry(target).or_insert_with(|| {
                    pairs.push(target);
                    queue.push_back(pairs.len() - 1);
                    pairs.len() - 1
                });
                delta.push(j);
            }
        }
        let terminal = pairs.iter().map(|&(p, q)| accept(self.terminal[p], other.terminal[q])).collect();
        Ok(Dfa::from_raw(self.alphabet.clone(), delta, 0, terminal).minimize())
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x || y)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> Dfa {
        let terminal = self.terminal.iter().map(|t| !t).collect();
        Dfa::from_raw(self.alphabet.clone(), self.delta.clone(), self.initial, terminal).minimize()
    }

    /// Language inclusion `L(self) ⊆ L(other)`.
    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Exact number of accepted words of each length `0..=max_len`.
    pub fn count_accepted_upto(&self, max_len: usize) -> Vec<BigUint> {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut current = vec![BigUint::zero(); n];
        current[self.initial] = BigUint::from(1u32);
        let mut out = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            let total = (0..n).filter(|&q| self.terminal[q]).fold(BigUint::zero(), |acc, q| acc + &current[q]);
            out.push(total);
            if len == max_len {
                break;
            }
            let mut next = vec![BigUint::zero(); n];
            for q in 0..n {
                if current[q].is_zero() {
                    continue;
                }
                for a in 0..k {
                    next[self.next(q, a)] += &current[q];
                }
            }
            current = next;
        }
        out
    }

    /// Same automaton over a permuted alphabet (same symbol set, new order).
    pub fn with_alphabet_order(&self, alphabet: &[char]) -> Result<Dfa> {
        let mismatch = || Error::AlphabetMismatch {
            left: alphabet_string(&self.alphabet),
            right: alphabet_string(alphabet),
        };
        if alphabet.len() != self.alphabet.len() {
            return Err(mismatch());
        }
        let perm: Vec<usize> = alphabet
            .iter()
            .map(|&c| self.symbol_index(c).ok_or_else(mismatch))
            .collect::<Result<_>>()?;
        let k = alphabet.len();
        let delta = (0..self.num_states())
            .flat_map(|q| perm.iter().map(move |&a| (q, a)))
            .map(|(q, a)| self.next(q, a))
            .collect::<Vec<_>>();
        debug_assert_eq!(delta.len(), self.num_states() * k);
        Ok(Dfa::from_raw(alphabet.to_vec(), delta, self.initial, self.terminal.clone()).minimize())
    }
}
