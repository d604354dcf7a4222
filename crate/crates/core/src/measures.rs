//! Bernoulli and Markov measures on `A^Z`, and the measure of maximal
//! entropy of an irreducible shift of finite type.
//!
//! A [`Markov`] measure is given by an initial vector `π` and a stochastic
//! matrix `P` over a finite state space, together with a map assigning a
//! letter to each state. The mass of `a_0 ⋯ a_(n-1)` is the total weight of
//! the state paths `s_0 ⋯ s_(n-1)` whose letters spell the word:
//! `Σ π_(s_0) P_(s_0 s_1) ⋯ P_(s_(n-2) s_(n-1))`. When the states are the
//! letters themselves this is the usual `π_(a_0) P_(a_0 a_1) ⋯`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::SparseRows;
use crate::sft::Sft;

const SUM_TOLERANCE: f64 = 1e-9;
const INVARIANCE_TOLERANCE: f64 = 1e-10;
const POWER_TOLERANCE: f64 = 1e-13;
const POWER_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Bernoulli(Bernoulli),
    Markov(Markov),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bernoulli {
    alphabet: Vec<char>,
    probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Markov {
    alphabet: Vec<char>,
    letter_of: Vec<usize>,
    initial: Vec<f64>,
    rows: SparseRows,
    invariant: bool,
}

fn check_entry(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::NegativeEntry(x));
    }
    Ok(())
}

impl Bernoulli {
    pub fn new(alphabet: Vec<char>, probs: Vec<f64>) -> Result<Bernoulli> {
        crate::automata::check_alphabet(&alphabet)?;
        if probs.len() != alphabet.len() {
            return Err(Error::Dimension("one probability per letter".into()));
        }
        for &p in &probs {
            check_entry(p)?;
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne(sum));
        }
        Ok(Bernoulli { alphabet, probs })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, c: char) -> Option<f64> {
        self.alphabet.iter().position(|&a| a == c).map(|i| self.probs[i])
    }

    pub fn is_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }
}

impl Markov {
    /// Markov measure from a dense transition matrix.
    pub fn new(alphabet: Vec<char>, initial: Vec<f64>, transition: &[Vec<f64>], letter_of: Vec<usize>) -> Result<Markov> {
        let n = initial.len();
        if transition.len() != n || transition.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("transition matrix must be {n}x{n}")));
        }
        let rows = transition
            .iter()
            .map(|row| {
                for &p in row {
                    check_entry(p)?;
                }
                Ok(row.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(j, &p)| (j, p)).collect())
            })
            .collect::<Result<SparseRows>>()?;
        Markov::from_sparse(alphabet, initial, rows, letter_of)
    }

    /// Markov measure whose states are the letters.
    pub fn over_letters(alphabet: Vec<char>, initial: Vec<f64>, transition: &[Vec<f64>]) -> Result<Markov> {
        let letter_of = (0..alphabet.len()).collect();
        Markov::new(alphabet, initial, transition, letter_of)
    }

    pub fn from_sparse(alphabet: Vec<char>, initial: Vec<f64>, rows: SparseRows, letter_of: Vec<usize>) -> Result<Markov> {
        crate::automata::check_alphabet(&alphabet)?;
        let n = initial.len();
        if rows.len() != n || letter_of.len() != n {
            return Err(Error::Dimension("initial vector, rows and letters disagree".into()));
        }
        if let Some(&bad) = letter_of.iter().find(|&&a| a >= alphabet.len()) {
            return Err(Error::Dimension(format!("letter index {bad} out of range")));
        }
        for &p in &initial {
            check_entry(p)?;
        }
        let sum: f64 = initial.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne(sum));
        }
        for (i, row) in rows.iter().enumerate() {
            let mut s = 0.0;
            for &(j, p) in row {
                check_entry(p)?;
                if j >= n {
                    return Err(Error::Dimension(format!("transition to missing state {j}")));
                }
                s += p;
            }
            if (s - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::NonStochasticRow { row: i, sum: s });
            }
        }
        let mut next = vec![0.0; n];
        for (i, row) in rows.iter().enumerate() {
            for &(j, p) in row {
                next[j] += initial[i] * p;
            }
        }
        let invariant = next.iter().zip(&initial).all(|(a, b)| (a - b).abs() <= INVARIANCE_TOLERANCE);
        Ok(Markov { alphabet, letter_of, initial, rows, invariant })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn letter_of(&self, state: usize) -> usize {
        self.letter_of[state]
    }

    pub fn row(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.rows[i].iter().find(|(k, _)| *k == j).map_or(0.0, |&(_, p)| p)
    }

    pub fn is_invariant(&self) -> bool {
        self.invariant
    }

    /// Largest `|(πP)_i - π_i|`.
    pub fn invariance_defect(&self) -> f64 {
        let mut next = vec![0.0; self.num_states()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                next[j] += self.initial[i] * p;
            }
        }
        next.iter().zip(&self.initial).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Measure {
    /// Bernoulli measure from `(letter, probability)` pairs, in alphabet order.
    pub fn bernoulli(probs: &[(char, f64)]) -> Result<Measure> {
        let (alphabet, p) = probs.iter().copied().unzip();
        Ok(Measure::Bernoulli(Bernoulli::new(alphabet, p)?))
    }

    /// Uniform Bernoulli measure.
    pub fn uniform(alphabet: &[char]) -> Result<Measure> {
        let p = 1.0 / alphabet.len() as f64;
        Ok(Measure::Bernoulli(Bernoulli::new(alphabet.to_vec(), vec![p; alphabet.len()])?))
    }

    /// Markov measure; see [`Markov::new`].
    pub fn markov(alphabet: Vec<char>, initial: Vec<f64>, transition: &[Vec<f64>], letter_of: Vec<usize>) -> Result<Measure> {
        Ok(Measure::Markov(Markov::new(alphabet, initial, transition, letter_of)?))
    }

    pub fn alphabet(&self) -> &[char] {
        match self {
            Measure::Bernoulli(b) => &b.alphabet,
            Measure::Markov(m) => &m.alphabet,
        }
    }

    pub fn is_invariant(&self) -> bool {
        match self {
            Measure::Bernoulli(_) => true,
            Measure::Markov(m) => m.invariant,
        }
    }

    /// All cylinders of positive length have positive mass for Bernoulli
    /// measures with positive weights; Markov measures report `false`.
    pub fn is_positive_bernoulli(&self) -> bool {
        matches!(self, Measure::Bernoulli(b) if b.is_positive())
    }

    /// `μ(w)` for a word given as indices into [`Measure::alphabet`].
    pub fn word_mass_indices(&self, word: &[usize]) -> f64 {
        match self {
            Measure::Bernoulli(b) => word.iter().map(|&a| b.probs[a]).product(),
            Measure::Markov(m) => {
                let Some((&first, rest)) = word.split_first() else {
                    return 1.0;
                };
                let mut alpha: Vec<f64> = m
                    .initial
                    .iter()
                    .enumerate()
                    .map(|(s, &p)| if m.letter_of[s] == first { p } else { 0.0 })
                    .collect();
                for &a in rest {
                    let mut next = vec![0.0; alpha.len()];
                    for (s, &x) in alpha.iter().enumerate() {
                        if x == 0.0 {
                            continue;
                        }
                        for &(t, p) in &m.rows[s] {
                            if m.letter_of[t] == a {
                                next[t] += x * p;
                            }
                        }
                    }
                    alpha = next;
                }
                alpha.iter().sum()
            }
        }
    }

    pub fn word_mass(&self, word: &[char]) -> Result<f64> {
        let alphabet = self.alphabet();
        let idx = word
            .iter()
            .map(|c| alphabet.iter().position(|a| a == c).ok_or(Error::UnknownSymbol(*c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.word_mass_indices(&idx))
    }

    /// `μ(a)` for each letter, in alphabet order.
    pub fn letter_marginals(&self) -> Vec<f64> {
        match self {
            Measure::Bernoulli(b) => b.probs.clone(),
            Measure::Markov(m) => {
                let mut out = vec![0.0; m.alphabet.len()];
                for (s, &p) in m.initial.iter().enumerate() {
                    out[m.letter_of[s]] += p;
                }
                out
            }
        }
    }

    /// Parses `bernoulli a=0.5 b=0.5`,
    /// `markov pi=0.5,0.5 P=0.5,0.5;0.5,0.5 over a,b` or `maxent <file>`.
    /// Relative shift files are resolved against `base`.
    pub fn parse_spec(text: &str, base: &Path) -> Result<Measure> {
        let text = text.trim();
        let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        match kind {
            "bernoulli" => {
                let pairs = rest
                    .split_whitespace()
                    .map(|tok| {
                        let (sym, val) =
                            tok.split_once('=').ok_or_else(|| Error::Parse(format!("expected letter=prob, got {tok:?}")))?;
                        let mut chars = sym.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => Ok((c, parse_number(val)?)),
                            _ => Err(Error::Parse(format!("letters are single characters: {sym:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::bernoulli(&pairs)
            }
            "markov" => {
                let mut pi = None;
                let mut p = None;
                let mut letters = None;
                let mut tokens = rest.split_whitespace();
                while let Some(tok) = tokens.next() {
                    if let Some(v) = tok.strip_prefix("pi=") {
                        pi = Some(v.split(',').map(parse_number).collect::<Result<Vec<f64>>>()?);
                    } else if let Some(v) = tok.strip_prefix("P=") {
                        p = Some(
                            v.split(';')
                                .map(|r| r.split(',').map(parse_number).collect::<Result<Vec<f64>>>())
                                .collect::<Result<Vec<_>>>()?,
                        );
                    } else if tok == "over" {
                        let v = tokens.next().ok_or_else(|| Error::Parse("missing letters after 'over'".into()))?;
                        letters = Some(v.chars().filter(|&c| c != ',').collect::<Vec<char>>());
                    } else {
                        return Err(Error::Parse(format!("unexpected token {tok:?}")));
                    }
                }
                let (Some(pi), Some(p), Some(letters)) = (pi, p, letters) else {
                    return Err(Error::Parse("markov needs pi=, P= and over".into()));
                };
                Ok(Measure::Markov(Markov::over_letters(letters, pi, &p)?))
            }
            "maxent" => {
                let path = base.join(rest.trim());
                let sft = Sft::load(&path)?;
                Ok(Measure::Markov(max_entropy(&sft)?.measure))
            }
            _ => Err(Error::Parse(format!("unknown measure kind {kind:?}"))),
        }
    }
}

/// Parses a decimal number or a fraction `p/q`.
pub(crate) fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = |_| Error::Parse(format!("not a number: {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => Ok(num.trim().parse::<f64>().map_err(bad)? / den.trim().parse::<f64>().map_err(bad)?),
        None => s.parse::<f64>().map_err(bad),
    }
}

/// Perron data of an irreducible adjacency matrix together with the
/// measure of maximal entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntropy {
    pub lambda: f64,
    /// Left eigenvector `v`, scaled so that `v · w = 1`.
    pub left: Vec<f64>,
    /// Right eigenvector `w`, scaled to sum 1.
    pub right: Vec<f64>,
    pub iterations: usize,
    /// True when the chain states are the vertices (`π_i = v_i w_i`);
    /// otherwise they are the edges.
    pub vertex_chain: bool,
    pub measure: Markov,
}

/// Power iteration on `M + I` (`forward` multiplies by `M`, otherwise by
/// `Mᵀ`), normalized to unit maximum.
fn perron_vector(sft: &Sft, forward: bool) -> Result<(Vec<f64>, usize)> {
    let n = sft.num_vertices();
    let mut x = vec![1.0; n];
    for it in 1..=POWER_MAX_ITERATIONS {
        let mut y = x.clone();
        for e in sft.edges() {
            if forward {
                y[e.source] += x[e.target];
            } else {
                y[e.target] += x[e.source];
            }
        }
        let max = y.iter().cloned().fold(0.0, f64::max);
        y.iter_mut().for_each(|v| *v /= max);
        let delta = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        if delta <= POWER_TOLERANCE {
            return Ok((x, it));
        }
    }
    Err(Error::NoConvergence(POWER_MAX_ITERATIONS))
}

/// Measure of maximal entropy: with `λ` the dominant eigenvalue of the
/// adjacency matrix `M` and `v`, `w` its left and right eigenvectors
/// (`v · w = 1`), the chain has `π_i = v_i w_i` and
/// `P_ij = w_j M_ij / (λ w_i)`.
pub fn max_entropy(sft: &Sft) -> Result<MaxEntropy> {
    if !sft.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let (mut w, it_right) = perron_vector(sft, true)?;
    let (mut v, it_left) = perron_vector(sft, false)?;

    let mut mw = vec![0.0; w.len()];
    for e in sft.edges() {
        mw[e.source] += w[e.target];
    }
    let vmw: f64 = v.iter().zip(&mw).map(|(a, b)| a * b).sum();
    let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    let lambda = vmw / vw;

    let ws: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= ws);
    let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    v.iter_mut().for_each(|x| *x /= vw);

    let alphabet = sft.alphabet().to_vec();
    let (measure, vertex_chain) = match sft.vertex_labels() {
        Some(letters) => {
            let initial: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a * b).collect();
            let rows: SparseRows = (0..sft.num_vertices())
                .map(|i| sft.out_edges(i).map(|e| (e.target, w[e.target] / (lambda * w[i]))).collect())
                .collect();
            (Markov::from_sparse(alphabet, initial, rows, letters)?, true)
        }
        None => {
            let edges = sft.edges();
            // edge ids of each vertex's out-edges
            let mut out: Vec<Vec<usize>> = vec![Vec::new(); sft.num_vertices()];
            for (i, e) in edges.iter().enumerate() {
                out[e.source].push(i);
            }
            let initial = edges.iter().map(|e| v[e.source] * w[e.target] / lambda).collect();
            let rows = edges
                .iter()
                .map(|e| out[e.target].iter().map(|&f| (f, w[edges[f].target] / (lambda * w[e.target]))).collect())
                .collect();
            let letters = edges.iter().map(|e| e.label).collect();
            (Markov::from_sparse(alphabet, initial, rows, letters)?, false)
        }
    };
    Ok(MaxEntropy { lambda, left: v, right: w, iterations: it_right.max(it_left), vertex_chain, measure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_validation() {
        let m = Measure::bernoulli(&[('a', 1.0 / 3.0), ('b', 1.0 / 3.0), ('c', 1.0 / 3.0)]).unwrap();
        assert!(m.is_positive_bernoulli());
        let limit = Measure::bernoulli(&[('a', 0.0), ('b', 0.5), ('c', 0.5)]).unwrap();
        assert!(!limit.is_positive_bernoulli());
        let dirac = Measure::bernoulli(&[('a', 1.0)]).unwrap();
        assert_eq!(dirac.word_mass(&['a', 'a', 'a']).unwrap(), 1.0);
        assert!(matches!(Measure::bernoulli(&[('a', 0.5), ('b', 0.4)]), Err(Error::SumNotOne(_))));
        assert!(matches!(Measure::bernoulli(&[('a', 1.5), ('b', -0.5)]), Err(Error::NegativeEntry(_))));
    }

    #[test]
    fn uniform_word_mass() {
        let m = Measure::uniform(&['a', 'b', 'c']).unwrap();
        let got = m.word_mass(&['a', 'b', 'c', 'a']).unwrap();
        assert!((got - (1.0f64 / 3.0).powi(4)).abs() < 1e-15);
        assert_eq!(m.word_mass(&[]).unwrap(), 1.0);
        assert_eq!(m.word_mass(&['d']), Err(Error::UnknownSymbol('d')));
    }

    #[test]
    fn markov_uniform_equals_bernoulli() {
        let mk = Measure::Markov(
            Markov::over_letters(vec!['a', 'b'], vec![0.5, 0.5], &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        );
        assert!(mk.is_invariant());
        let b = Measure::uniform(&['a', 'b']).unwrap();
        for len in 0..=8u32 {
            for bits in 0..(1usize << len) {
                let w: Vec<usize> = (0..len).map(|i| (bits >> i) & 1).collect();
                assert!((mk.word_mass_indices(&w) - b.word_mass_indices(&w)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn markov_validation() {
        let id = [vec![1.0, 0.0], vec![0.0, 1.0]];
        let dirac = Markov::over_letters(vec!['a', 'b'], vec![1.0, 0.0], &id).unwrap();
        assert!(dirac.is_invariant());
        let bad_row = Markov::over_letters(vec!['a', 'b'], vec![1.0, 0.0], &[vec![0.5, 0.4], vec![0.0, 1.0]]);
        assert!(matches!(bad_row, Err(Error::NonStochasticRow { row: 0, .. })));
        let neg = Markov::over_letters(vec!['a', 'b'], vec![1.0, 0.0], &[vec![1.5, -0.5], vec![0.0, 1.0]]);
        assert!(matches!(neg, Err(Error::NegativeEntry(_))));
        let not_inv =
            Markov::over_letters(vec!['a', 'b'], vec![1.0, 0.0], &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(!not_inv.is_invariant());
        assert!(Markov::over_letters(vec!['a', 'b'], vec![1.0], &id).is_err());
    }

    #[test]
    fn full_shift_maxent_is_uniform() {
        let x = Sft::full_shift(&['a', 'b', 'c']).unwrap();
        let me = max_entropy(&x).unwrap();
        assert!((me.lambda - 3.0).abs() < 1e-12);
        for i in 0..3 {
            assert!((me.measure.initial()[i] - 1.0 / 3.0).abs() < 1e-12);
            for j in 0..3 {
                assert!((me.measure.transition(i, j) - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn golden_mean_lambda() {
        let x = Sft::from_forbidden_blocks(&['a', 'b'], &["aa"]).unwrap();
        let me = max_entropy(&x).unwrap();
        // largest root of x^2 - x - 1
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((me.lambda - phi).abs() < 1e-12);
        assert!(me.measure.is_invariant());
    }

    #[test]
    fn reducible_is_rejected() {
        let x = Sft::from_adjacency(&['a', 'b'], &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(max_entropy(&x).unwrap_err(), Error::NotIrreducible);
    }

    #[test]
    fn parses_measure_specs() {
        let base = Path::new(".");
        let b = Measure::parse_spec("bernoulli a=0.5 b=1/2", base).unwrap();
        assert_eq!(b, Measure::uniform(&['a', 'b']).unwrap());
        let m = Measure::parse_spec("markov pi=0.5,0.5 P=0.5,0.5;0.5,0.5 over a,b", base).unwrap();
        assert!(m.is_invariant());
        assert!(Measure::parse_spec("bernoulli ab=1", base).is_err());
        assert!(Measure::parse_spec("poisson a=1", base).is_err());
        assert!(matches!(Measure::parse_spec("maxent /nonexistent/x.shift", base), Err(Error::Io { .. })));
    }
}
