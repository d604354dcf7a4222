//! Combinatorial densities over a shift space, the cylinder measure they
//! induce, and the Fibonacci right-special check.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::sequential::{CesaroSummary, Verdict, DEFAULT_TOLERANCE};
use crate::sft::Sft;

/// `a / b` as a float, for integers of any size.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    let shift = b.bits().saturating_sub(64);
    let num = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let den = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinatorialResult {
    /// `Card(L ∩ L_i(X))`
    pub counts: Vec<BigUint>,
    /// `Card(L_i(X))`
    pub totals: Vec<BigUint>,
    /// `counts[i] / totals[i]`
    pub ratios: Vec<f64>,
    pub summary: CesaroSummary,
}

/// `δ_X(L)`: Cesàro average of `Card(L ∩ L_i(X)) / Card(L_i(X))` for
/// `i < n_terms`, with exact counts from the product of `L`'s automaton
/// and the automaton of `L(X)`.
pub fn combinatorial_density(dfa: &Dfa, shift: &Sft, n_terms: usize) -> Result<CombinatorialResult> {
    combinatorial_density_with_tolerance(dfa, shift, n_terms, &[], DEFAULT_TOLERANCE)
}

pub fn combinatorial_density_with_tolerance(
    dfa: &Dfa,
    shift: &Sft,
    n_terms: usize,
    checkpoints: &[usize],
    tolerance: f64,
) -> Result<CombinatorialResult> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("at least one term is needed".into()));
    }
    let language = shift.language_dfa();
    let dfa = dfa.with_alphabet_order(language.alphabet())?;
    let product = dfa.intersect(&language)?;
    let counts = product.count_accepted_upto(n_terms - 1);
    let totals = language.count_accepted_upto(n_terms - 1);
    let ratios: Vec<f64> = counts.iter().zip(&totals).map(|(c, t)| big_ratio(c, t)).collect();
    let summary = CesaroSummary::from_terms(&ratios, checkpoints, tolerance);
    Ok(CombinatorialResult { counts, totals, ratios, summary })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealEntry {
    pub word: String,
    /// Cesàro estimate of `δ_X(uA*)`.
    pub estimate: f64,
    pub verdict: Verdict,
    /// `Σ_a` of the children's estimates, when `u` is shorter than the
    /// maximal length.
    pub children_sum: Option<f64>,
}

/// One instance of `Σ_a Card(uaA* ∩ L_i(X)) = Card(uA* ∩ L_i(X))`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivityCheck {
    pub word: String,
    pub length: usize,
    pub whole: BigUint,
    pub parts: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealDensityTable {
    pub entries: Vec<IdealEntry>,
    pub additivity: Vec<AdditivityCheck>,
    pub n_terms: usize,
}

impl IdealDensityTable {
    pub fn additivity_holds(&self) -> bool {
        self.additivity.iter().all(|c| c.whole == c.parts)
    }

    pub fn get(&self, word: &str) -> Option<&IdealEntry> {
        self.entries.iter().find(|e| e.word == word)
    }
}

/// `δ_X(uA*)` for every `u ∈ L(X)` with `|u| ≤ max_len ≤ 8`, estimated
/// from lengths `i < n_terms`, with the exact per-length additivity
/// identities for `|u| < max_len` and `|u| < i < n_terms`.
pub fn ideal_density_measure(shift: &Sft, max_len: usize, n_terms: usize) -> Result<IdealDensityTable> {
    if max_len > 8 {
        return Err(Error::BoundExceeded(format!("word length {max_len} > 8")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidParameter("at least one term is needed".into()));
    }
    let language = shift.language_dfa();
    let k = language.alphabet().len();
    let states = language.num_states();
    // suffix[m][q]: words of length m read from q into L(X)
    let mut suffix = vec![(0..states).map(|q| BigUint::from(u32::from(language.is_terminal(q)))).collect::<Vec<_>>()];
    for m in 1..n_terms {
        let row = (0..states)
            .map(|q| (0..k).fold(BigUint::zero(), |acc, a| acc + &suffix[m - 1][language.next(q, a)]))
            .collect();
        suffix.push(row);
    }
    let totals: Vec<&BigUint> = (0..n_terms).map(|i| &suffix[i][language.initial()]).collect();
    let count = |q: usize, len: usize, i: usize| -> BigUint {
        if i < len {
            BigUint::zero()
        } else {
            suffix[i - len][q].clone()
        }
    };

    // words of L(X) in shortlex order, with their automaton states
    let mut words: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), language.initial())];
    let mut level = words.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, q) in &level {
            for a in 0..k {
                let r = language.next(*q, a);
                if language.is_terminal(r) {
                    let mut v = w.clone();
                    v.push(a);
                    next.push((v, r));
                }
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    let spell = |w: &[usize]| -> String { w.iter().map(|&a| language.alphabet()[a]).collect() };

    let mut estimates: HashMap<Vec<usize>, (f64, Verdict)> = HashMap::new();
    for (w, q) in &words {
        let ratios: Vec<f64> = (0..n_terms).map(|i| big_ratio(&count(*q, w.len(), i), totals[i])).collect();
        let s = CesaroSummary::from_terms(&ratios, &[], DEFAULT_TOLERANCE);
        estimates.insert(w.clone(), (s.estimate, s.verdict));
    }
    let mut entries = Vec::with_capacity(words.len());
    let mut additivity = Vec::new();
    for (w, q) in &words {
        let children: Vec<(Vec<usize>, usize)> = (0..k)
            .map(|a| (language.next(*q, a), a))
            .filter(|&(r, _)| language.is_terminal(r))
            .map(|(r, a)| {
                let mut v = w.clone();
                v.push(a);
                (v, r)
            })
            .collect();
        let children_sum =
            (w.len() < max_len).then(|| children.iter().map(|(v, _)| estimates[v].0).sum::<f64>());
        if w.len() < max_len {
            for i in w.len() + 1..n_terms {
                let parts = children.iter().fold(BigUint::zero(), |acc, (_, r)| acc + count(*r, w.len() + 1, i));
                additivity.push(AdditivityCheck { word: spell(w), length: i, whole: count(*q, w.len(), i), parts });
            }
        }
        let (estimate, verdict) = estimates[w];
        entries.push(IdealEntry { word: spell(w), estimate, verdict, children_sum });
    }
    Ok(IdealDensityTable { entries, additivity, n_terms })
}

/// Prefix of length `len` of the Fibonacci word `0100101001001...`, the
/// fixed point of `0 -> 01`, `1 -> 0`.
pub fn fibonacci_prefix(len: usize) -> Vec<u8> {
    let mut w = vec![b'0'];
    while w.len() < len {
        w = w.iter().flat_map(|&c| if c == b'0' { vec![b'0', b'1'] } else { vec![b'0'] }).collect();
    }
    w.truncate(len);
    w
}

fn occurrences(text: &[u8], pattern: &[u8]) -> usize {
    if pattern.is_empty() {
        return text.len() + 1;
    }
    text.windows(pattern.len()).filter(|w| *w == pattern).count()
}

/// `(right-special estimate, frequency estimate)` of `μ(u)` on the
/// Fibonacci shift: `(1 + f_n(x, u)) / (n + 1)` with `x` the reversal of
/// the length-`n` prefix (the right-special left-infinite word), and the
/// frequency of `u` in the length-`big_n` prefix.
pub fn sturmian_check(u: &str, n: usize, big_n: usize) -> Result<(f64, f64)> {
    if n > 100_000 || big_n > 1_000_000 {
        return Err(Error::BoundExceeded(format!("n = {n}, N = {big_n}")));
    }
    let pattern = u.as_bytes();
    if pattern.iter().any(|&c| c != b'0' && c != b'1') {
        return Err(Error::NotAFactor(u.to_string()));
    }
    let prefix = fibonacci_prefix(n.max(big_n).max(16 * pattern.len() + 16));
    let frequency_window = &prefix[..big_n.max(pattern.len())];
    if occurrences(&prefix, pattern) == 0 {
        return Err(Error::NotAFactor(u.to_string()));
    }
    let reversed: Vec<u8> = prefix[..n].iter().rev().copied().collect();
    let right_special = (1 + occurrences(&reversed, pattern)) as f64 / (n + 1) as f64;
    let frequency = occurrences(frequency_window, pattern) as f64 / (frequency_window.len() - pattern.len() + 1) as f64;
    Ok((right_special, frequency))
}

/// Number of distinct factors of `word` of each length `0..=max_len`, by
/// refining the partition of positions one letter at a time.
pub fn factor_complexity(word: &[u8], max_len: usize) -> Vec<usize> {
    let mut out = vec![1];
    let mut class: Vec<u32> = vec![0; word.len() + 1];
    for m in 1..=max_len.min(word.len()) {
        let positions = word.len() + 1 - m;
        let mut ids: HashMap<(u32, u8), u32> = HashMap::new();
        let mut next = Vec::with_capacity(positions);
        for p in 0..positions {
            let fresh = ids.len() as u32;
            next.push(*ids.entry((class[p], word[p + m - 1])).or_insert(fresh));
        }
        out.push(ids.len());
        class = next;
    }
    out
}

/// Factor complexity of the Fibonacci shift up to `max_len`, read on a
/// prefix long enough to contain every factor of those lengths.
pub fn fibonacci_complexity(max_len: usize) -> Vec<usize> {
    factor_complexity(&fibonacci_prefix(16 * max_len + 64), max_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB: [char; 2] = ['a', 'b'];

    #[test]
    fn ratio_of_large_integers() {
        let a = BigUint::from(3u32).pow(2000);
        let b = BigUint::from(3u32).pow(2001);
        assert!((big_ratio(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(big_ratio(&BigUint::zero(), &b), 0.0);
    }

    #[test]
    fn full_language_and_even_lengths() {
        let x = Sft::full_shift(&AB).unwrap();
        let all = combinatorial_density(&Dfa::universal(&AB).unwrap(), &x, 50).unwrap();
        assert!(all.ratios.iter().all(|&r| r == 1.0));
        let even = combinatorial_density(&Dfa::parse_regex("(..)*", &AB).unwrap(), &x, 1000).unwrap();
        assert!((even.summary.estimate - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_a_words() {
        let abc = ['a', 'b', 'c'];
        let x = Sft::full_shift(&abc).unwrap();
        let l = Dfa::parse_regex("(b|c)*a(b|c)*", &abc).unwrap();
        let r = combinatorial_density(&l, &x, 200).unwrap();
        for n in 1..200usize {
            let expect = BigUint::from(n) * BigUint::from(2u32).pow(n as u32 - 1);
            assert_eq!(r.counts[n], expect);
        }
        assert!(r.ratios[199] < 1e-30);
    }

    #[test]
    fn alphabet_order_is_irrelevant() {
        let x = Sft::from_forbidden_blocks(&AB, &["bb"]).unwrap();
        let l = Dfa::parse_regex("a.*", &['b', 'a']).unwrap();
        let r = combinatorial_density(&l, &x, 30).unwrap();
        // a followed by any of the 8 allowed words of length 4
        assert_eq!(r.counts[5], BigUint::from(8u32));
        assert_eq!(r.totals[5], BigUint::from(13u32));
    }

    #[test]
    fn cylinders_of_the_full_shift() {
        let x = Sft::full_shift(&AB).unwrap();
        let t = ideal_density_measure(&x, 3, 400).unwrap();
        assert_eq!(t.entries.len(), 15);
        assert!(t.additivity_holds());
        for e in &t.entries {
            let expect = 0.5f64.powi(e.word.chars().count() as i32);
            assert!((e.estimate - expect).abs() < 1e-2, "{e:?}");
        }
        assert!((t.get("").unwrap().estimate - 1.0).abs() < 1e-15);
        assert!(ideal_density_measure(&x, 9, 10).is_err());
    }

    #[test]
    fn fibonacci_basics() {
        assert_eq!(fibonacci_prefix(13), b"0100101001001".to_vec());
        let c = fibonacci_complexity(40);
        assert!(c.iter().enumerate().all(|(n, &k)| k == n + 1));
        assert_eq!(factor_complexity(b"aaab", 3), vec![1, 2, 2, 2]);
        let (rs, fr) = sturmian_check("0", 10_000, 100_000).unwrap();
        let inv_phi = 2.0 / (1.0 + 5f64.sqrt());
        assert!((rs - inv_phi).abs() < 1e-2 && (fr - inv_phi).abs() < 1e-2);
        assert_eq!(sturmian_check("11", 100, 100), Err(Error::NotAFactor("11".into())));
        assert_eq!(sturmian_check("2", 100, 100), Err(Error::NotAFactor("2".into())));
    }
}
