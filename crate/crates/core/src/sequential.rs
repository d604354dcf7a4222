//! Sequential densities: Cesàro limits of `μ_n(L ∩ Aⁿ)` along a sequence
//! of measures.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::automata::Dfa;
use crate::density::{self, lift_chain, slice_mass};
use crate::error::{Error, Result};
use crate::measures::{max_entropy, parse_number, Measure};
use crate::sft::{Edge, Sft};

/// Default tolerance of the convergence verdict.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
const FAMILY1_CAP: usize = 4096;
const FAMILY2_CAP: usize = 16;
const ABC: [char; 3] = ['a', 'b', 'c'];

/// The two shift families whose maximal-entropy measures have no
/// sequential density for some rational language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Occurrences of `a` are more than `n` letters apart: the blocks
    /// `a w a` with `|w| ≤ n` are forbidden.
    Gap,
    /// Blocks `a w a` (when `⌊log₂ n⌋` is even) or `a w b` (otherwise)
    /// with `|w| = n - 2` are forbidden.
    Window,
}

impl Family {
    fn min_index(self) -> usize {
        match self {
            Family::Gap => 1,
            Family::Window => 2,
        }
    }
}

/// Member `n` of a counterexample family over `{a, b, c}`.
pub fn counterexample_family(family: Family, n: usize) -> Result<Sft> {
    let sft = match family {
        Family::Gap => {
            if n < 1 {
                return Err(Error::InvalidParameter("the gap family starts at n = 1".into()));
            }
            if n > FAMILY1_CAP {
                return Err(Error::BoundExceeded(format!("gap family index {n} > {FAMILY1_CAP}")));
            }
            // vertex c = letters since the last a, capped at n + 1
            let top = n + 1;
            let mut edges = Vec::with_capacity(2 * top + 3);
            for c in 0..=top {
                for label in [1, 2] {
                    edges.push(Edge { source: c, label, target: (c + 1).min(top) });
                }
            }
            edges.push(Edge { source: top, label: 0, target: 0 });
            let names = (0..=top).map(|c| c.to_string()).collect();
            Sft::from_graph(ABC.to_vec(), names, edges, n + 1)?
        }
        Family::Window => {
            if !(2..=FAMILY2_CAP).contains(&n) {
                return Err(Error::BoundExceeded(format!("window family index {n} outside 2..={FAMILY2_CAP}")));
            }
            if n == 2 {
                // the letter graph forbidding ab
                return Sft::from_forbidden_blocks(&ABC, &["ab"]);
            }
            // vertex = bitmask of the a's among the last n - 1 letters,
            // most recent in bit 0
            let width = n - 1;
            let full = (1usize << width) - 1;
            let banned = if n.ilog2().is_multiple_of(2) { 0 } else { 1 };
            let mut edges = Vec::with_capacity(3 << width);
            for mask in 0..=full {
                let oldest_is_a = mask >> (width - 1) & 1 == 1;
                for label in 0..3 {
                    if oldest_is_a && label == banned {
                        continue;
                    }
                    let target = ((mask << 1) | usize::from(label == 0)) & full;
                    edges.push(Edge { source: mask, label, target });
                }
            }
            let names = (0..=full).map(|m| format!("{m:0width$b}")).collect();
            Sft::from_graph(ABC.to_vec(), names, edges, width)?
        }
    };
    if !sft.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    Ok(sft)
}

#[derive(Debug, Clone)]
enum Kind {
    /// `p_n = clamp(c · n^exponent)` on the first letter, the rest shared
    /// equally by the other letters.
    Power { letters: Vec<char>, c: f64, exponent: f64 },
    Constant(Arc<Measure>),
    /// The last measure repeats.
    Explicit(Vec<Arc<Measure>>),
    Maxent(Family),
    Formula(Formula),
}

type MeasureFn = dyn Fn(usize) -> Result<Measure> + Send + Sync;

#[derive(Clone)]
struct Formula {
    alphabet: Vec<char>,
    generator: Arc<MeasureFn>,
    limit: Option<Arc<Measure>>,
}

impl std::fmt::Debug for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Formula").field("alphabet", &self.alphabet).field("limit", &self.limit).finish_non_exhaustive()
    }
}

/// A sequence of probability measures `(μ_n)`, evaluated lazily.
#[derive(Debug)]
pub struct MeasureSequence {
    kind: Kind,
    description: String,
    cache: RwLock<HashMap<usize, Arc<Measure>>>,
}

impl Clone for MeasureSequence {
    fn clone(&self) -> Self {
        MeasureSequence { kind: self.kind.clone(), description: self.description.clone(), cache: RwLock::default() }
    }
}

fn power_measure(letters: &[char], p: f64) -> Result<Measure> {
    let p = p.clamp(0.0, 1.0);
    let rest = if letters.len() > 1 { (1.0 - p) / (letters.len() - 1) as f64 } else { 0.0 };
    let pairs: Vec<(char, f64)> = letters.iter().enumerate().map(|(i, &c)| (c, if i == 0 { p } else { rest })).collect();
    Measure::bernoulli(&pairs)
}

impl MeasureSequence {
    fn with_kind(kind: Kind, description: String) -> MeasureSequence {
        MeasureSequence { kind, description, cache: RwLock::default() }
    }

    /// `μ_n(letters[0]) = clamp(c · n^exponent)`, other letters share the
    /// remaining mass.
    pub fn power(letters: &[char], c: f64, exponent: f64) -> Result<MeasureSequence> {
        if letters.len() < 2 {
            return Err(Error::InvalidParameter("power sequences need at least two letters".into()));
        }
        if !c.is_finite() || !exponent.is_finite() || c < 0.0 {
            return Err(Error::InvalidParameter(format!("p_n = {c}*n^{exponent}")));
        }
        crate::automata::check_alphabet(letters)?;
        let over: String = letters.iter().map(char::to_string).collect::<Vec<_>>().join(",");
        Ok(MeasureSequence::with_kind(
            Kind::Power { letters: letters.to_vec(), c, exponent },
            format!("bernoulli p_n = {c}*n^{exponent} over {over}"),
        ))
    }

    pub fn constant(measure: Measure) -> MeasureSequence {
        MeasureSequence::with_kind(Kind::Constant(Arc::new(measure)), "constant".into())
    }

    /// `μ_n = list[min(n, len - 1)]`.
    pub fn explicit(list: Vec<Measure>) -> Result<MeasureSequence> {
        let Some(first) = list.first() else {
            return Err(Error::InvalidParameter("empty measure list".into()));
        };
        if list.iter().any(|m| m.alphabet() != first.alphabet()) {
            let other = list.iter().find(|m| m.alphabet() != first.alphabet()).unwrap();
            return Err(Error::AlphabetMismatch {
                left: first.alphabet().iter().collect(),
                right: other.alphabet().iter().collect(),
            });
        }
        let description = format!("list of {} measures", list.len());
        Ok(MeasureSequence::with_kind(Kind::Explicit(list.into_iter().map(Arc::new).collect()), description))
    }

    /// `before` for `n < switch`, `after` from `switch` on.
    pub fn eventually_constant(before: Measure, after: Measure, switch: usize) -> Result<MeasureSequence> {
        let mut list = vec![before; switch];
        list.push(after);
        let mut seq = MeasureSequence::explicit(list)?;
        seq.description = format!("eventually constant from n = {switch}");
        Ok(seq)
    }

    /// `μ_n = generator(n)` for an arbitrary generator over `alphabet`;
    /// `limit` is reported as `μ̄`.
    pub fn from_fn(
        description: &str,
        alphabet: &[char],
        limit: Option<Measure>,
        generator: impl Fn(usize) -> Result<Measure> + Send + Sync + 'static,
    ) -> MeasureSequence {
        MeasureSequence::with_kind(
            Kind::Formula(Formula {
                alphabet: alphabet.to_vec(),
                generator: Arc::new(generator),
                limit: limit.map(Arc::new),
            }),
            description.into(),
        )
    }

    /// Maximal-entropy measures of a counterexample family.
    pub fn maxent(family: Family) -> MeasureSequence {
        let name = match family {
            Family::Gap => "maxent family1",
            Family::Window => "maxent family2",
        };
        MeasureSequence::with_kind(Kind::Maxent(family), name.into())
    }

    /// Parses `bernoulli p_n = 1.0*n^-1 over a,b` (also `c/n`, `c/n^e`,
    /// `n^e`), `constant <measure>`, `list <measure> | <measure> | ...`,
    /// `maxent family1` or `maxent family2`.
    pub fn parse_spec(text: &str, base: &Path) -> Result<MeasureSequence> {
        let text = text.trim();
        let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match kind {
            "bernoulli" => {
                let (formula, over) = rest
                    .rsplit_once(" over ")
                    .ok_or_else(|| Error::Parse("expected 'p_n = <formula> over <letters>'".into()))?;
                let formula = formula.trim();
                let formula = formula
                    .strip_prefix("p_n")
                    .and_then(|f| f.trim_start().strip_prefix('='))
                    .ok_or_else(|| Error::Parse(format!("expected 'p_n = ...', got {formula:?}")))?;
                let (c, exponent) = parse_power(formula)?;
                let letters: Vec<char> = over.chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
                MeasureSequence::power(&letters, c, exponent)
            }
            "constant" => Ok(MeasureSequence::constant(Measure::parse_spec(rest, base)?)),
            "list" => {
                let list = rest.split('|').map(|m| Measure::parse_spec(m, base)).collect::<Result<Vec<_>>>()?;
                MeasureSequence::explicit(list)
            }
            "maxent" => match rest {
                "family1" => Ok(MeasureSequence::maxent(Family::Gap)),
                "family2" => Ok(MeasureSequence::maxent(Family::Window)),
                _ => Err(Error::Parse(format!("unknown family {rest:?}"))),
            },
            _ => Err(Error::Parse(format!("unknown sequence kind {kind:?}"))),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn alphabet(&self) -> Vec<char> {
        match &self.kind {
            Kind::Power { letters, .. } => letters.clone(),
            Kind::Constant(m) => m.alphabet().to_vec(),
            Kind::Explicit(list) => list[0].alphabet().to_vec(),
            Kind::Maxent(_) => ABC.to_vec(),
            Kind::Formula(f) => f.alphabet.clone(),
        }
    }

    /// `μ_n`. Indices below the first defined one are raised to it
    /// (`n = 1` for power sequences, the family's first member for maxent
    /// families); the term at `n = 0` never uses its measure.
    pub fn measure_at(&self, n: usize) -> Result<Arc<Measure>> {
        match &self.kind {
            Kind::Power { letters, c, exponent } => {
                let n = n.max(1) as f64;
                Ok(Arc::new(power_measure(letters, c * n.powf(*exponent))?))
            }
            Kind::Constant(m) => Ok(m.clone()),
            Kind::Explicit(list) => Ok(list[n.min(list.len() - 1)].clone()),
            Kind::Maxent(family) => {
                let n = n.max(family.min_index());
                if let Some(m) = self.cache.read().expect("cache lock").get(&n) {
                    return Ok(m.clone());
                }
                let sft = counterexample_family(*family, n)?;
                let m = Arc::new(Measure::Markov(max_entropy(&sft)?.measure));
                self.cache.write().expect("cache lock").insert(n, m.clone());
                Ok(m)
            }
            Kind::Formula(f) => Ok(Arc::new((f.generator)(n)?)),
        }
    }

    /// The limit measure `μ̄`, when the sequence converges on cylinders.
    pub fn limit(&self) -> Result<Measure> {
        match &self.kind {
            Kind::Power { letters, c, exponent } => {
                let p = if *exponent < 0.0 || *c == 0.0 {
                    0.0
                } else if *exponent == 0.0 {
                    *c
                } else {
                    1.0
                };
                power_measure(letters, p)
            }
            Kind::Constant(m) => Ok((**m).clone()),
            Kind::Explicit(list) => Ok((**list.last().unwrap()).clone()),
            Kind::Maxent(Family::Gap) => Measure::bernoulli(&[('a', 0.0), ('b', 0.5), ('c', 0.5)]),
            Kind::Maxent(Family::Window) => Measure::uniform(&ABC),
            Kind::Formula(f) => match &f.limit {
                Some(m) => Ok((**m).clone()),
                None => Err(Error::InvalidParameter(format!("no limit measure for {}", self.description))),
            },
        }
    }
}

/// `c*n^e`, `n^e`, `c/n`, `c/n^e`.
fn parse_power(formula: &str) -> Result<(f64, f64)> {
    let f: String = formula.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read formula {f:?}"));
    let exponent_of = |s: &str| -> Result<f64> {
        match s {
            "n" => Ok(1.0),
            _ => s.strip_prefix("n^").map(|e| parse_number(e.trim_matches(|c| c == '(' || c == ')'))).ok_or_else(bad)?,
        }
    };
    if let Some((c, tail)) = f.split_once('*') {
        Ok((parse_number(c)?, exponent_of(tail)?))
    } else if let Some((c, tail)) = f.split_once("/n") {
        let e = if tail.is_empty() { 1.0 } else { exponent_of(&format!("n{tail}"))? };
        Ok((parse_number(c)?, -e))
    } else if f.starts_with('n') {
        Ok((1.0, exponent_of(&f)?))
    } else {
        Ok((parse_number(&f)?, 0.0))
    }
}

/// `μ_i(L ∩ A^i)`; the term at `i = 0` is the indicator of `ε ∈ L`.
pub fn sequential_term(seq: &MeasureSequence, dfa: &Dfa, i: usize) -> Result<f64> {
    if i == 0 {
        return Ok(if dfa.is_terminal(dfa.initial()) { 1.0 } else { 0.0 });
    }
    let measure = seq.measure_at(i)?;
    Ok(slice_mass(&lift_chain(dfa, &measure)?, i))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Converged(f64),
    NoLimitDetected,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Converged(_) => f.write_str("converged"),
            Verdict::NoLimitDetected => f.write_str("no-limit-detected"),
        }
    }
}

/// Cesàro averages of a term sequence with a convergence diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroSummary {
    /// `u_N = (1/N) Σ_(i<N) term(i)` at each requested checkpoint.
    pub checkpoints: Vec<(usize, f64)>,
    /// `u_N` for the full trace.
    pub estimate: f64,
    pub verdict: Verdict,
    /// `max |u_j - u_N|` over the last `K = min(N/4, 1000)` indices.
    pub cauchy_spread: f64,
    /// Spread of the raw terms over the same window.
    pub term_oscillation: f64,
    /// The raw terms themselves look convergent.
    pub strong: bool,
    pub window: usize,
    pub tolerance: f64,
}

impl CesaroSummary {
    pub fn from_terms(terms: &[f64], checkpoints: &[usize], tolerance: f64) -> CesaroSummary {
        let n = terms.len();
        let partials = cesaro_partials(terms);
        let estimate = if n == 0 { 0.0 } else { partials[n - 1] };
        let window = (n / 4).clamp(1, 1000).min(n);
        let cauchy_spread = partials[n - window..].iter().map(|u| (u - estimate).abs()).fold(0.0, f64::max);
        let tail = &terms[n - window..];
        let term_oscillation =
            tail.iter().cloned().fold(f64::MIN, f64::max) - tail.iter().cloned().fold(f64::MAX, f64::min);
        let verdict = if cauchy_spread <= tolerance { Verdict::Converged(estimate) } else { Verdict::NoLimitDetected };
        CesaroSummary {
            checkpoints: checkpoints.iter().filter(|&&c| c >= 1 && c <= n).map(|&c| (c, partials[c - 1])).collect(),
            estimate,
            verdict,
            cauchy_spread,
            term_oscillation,
            strong: term_oscillation <= tolerance,
            window,
            tolerance,
        }
    }
}

/// `u_1, ..., u_N` by a single left-to-right summation.
pub fn cesaro_partials(terms: &[f64]) -> Vec<f64> {
    let mut sum = 0.0;
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            sum += t;
            sum / (i + 1) as f64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialResult {
    /// `μ_i(L ∩ A^i)` for `i < N`.
    pub terms: Vec<f64>,
    pub summary: CesaroSummary,
    /// Density of `L` under the limit measure, when it exists.
    pub limit_density: Option<f64>,
}

/// Terms `0..n_terms`, computed in parallel, and their Cesàro summary.
pub fn sequential_density(
    seq: &MeasureSequence,
    dfa: &Dfa,
    n_terms: usize,
    checkpoints: &[usize],
) -> Result<SequentialResult> {
    sequential_density_with_tolerance(seq, dfa, n_terms, checkpoints, DEFAULT_TOLERANCE)
}

pub fn sequential_density_with_tolerance(
    seq: &MeasureSequence,
    dfa: &Dfa,
    n_terms: usize,
    checkpoints: &[usize],
    tolerance: f64,
) -> Result<SequentialResult> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter("at least one term is needed".into()));
    }
    let dfa = dfa.minimize();
    let terms = (0..n_terms).into_par_iter().map(|i| sequential_term(seq, &dfa, i)).collect::<Result<Vec<f64>>>()?;
    let summary = CesaroSummary::from_terms(&terms, checkpoints, tolerance);
    let limit_density = seq.limit().ok().and_then(|m| density::density(&dfa, &m).ok()).map(|r| r.value);
    Ok(SequentialResult { terms, summary, limit_density })
}

/// Checkpoints `1, 2, 5, 10, 20, 50, ...` up to and including `n`.
pub fn default_checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut scale = 1;
    'outer: loop {
        for m in [1, 2, 5] {
            let c = m * scale;
            if c >= n {
                break 'outer;
            }
            out.push(c);
        }
        scale *= 10;
    }
    out.push(n);
    out
}
