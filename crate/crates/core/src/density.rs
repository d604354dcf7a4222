//! Density of a rational language under a single measure.
//!
//! The automaton and the measure are combined into a finite Markov
//! [`Chain`] whose slice mass at `n` is `μ(L ∩ A^n)`. The Cesàro limit of
//! the slice masses is computed from the chain's structure: mass flows
//! through the transient strongly connected components in topological
//! order, and settles in the recurrent classes in proportion to their
//! stationary distributions. The slice masses themselves are iterated to
//! decide whether the limit also holds in the strong sense.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::linalg::{gcd, solve, strongly_connected_components, SparseRows};
use crate::measures::Measure;
use crate::monoid::{IdealInfo, Monoid};

/// Components larger than this are handled iteratively.
const DENSE_LIMIT: usize = 1500;
const STRONG_TOLERANCE: f64 = 1e-9;
const WINDOW: usize = 256;
const MAX_STEPS: usize = 1_000_000;
const STEP_BUDGET: usize = 200_000_000;
const COROLLARY_TOLERANCE: f64 = 1e-9;

/// Finite Markov chain attached to a language and a measure.
///
/// The slice mass at `n ≥ lag` is `initial · Pⁿ⁻ˡᵃᵍ · terminal`; for
/// `n < lag` it is `empty_word_mass`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    rows: SparseRows,
    initial: Vec<f64>,
    terminal: Vec<bool>,
    lag: usize,
    empty_word_mass: f64,
}

impl Chain {
    pub fn new(rows: SparseRows, initial: Vec<f64>, terminal: Vec<bool>, lag: usize, empty_word_mass: f64) -> Result<Chain> {
        let n = rows.len();
        if initial.len() != n || terminal.len() != n {
            return Err(Error::Dimension("chain vectors disagree".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            let s: f64 = row.iter().map(|&(_, p)| p).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::NonStochasticRow { row: i, sum: s });
            }
            if row.iter().any(|&(j, p)| j >= n || p < 0.0) {
                return Err(Error::Dimension(format!("bad entry in row {i}")));
            }
        }
        Ok(Chain { rows, initial, terminal, lag, empty_word_mass })
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &SparseRows {
        &self.rows
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn terminal(&self) -> &[bool] {
        &self.terminal
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn dense_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.num_states();
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                m[i][j] += p;
            }
        }
        m
    }

    /// `x · P`
    pub fn step(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for &(j, p) in &self.rows[i] {
                y[j] += xi * p;
            }
        }
        y
    }

    fn terminal_mass(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.terminal).filter(|(_, &t)| t).map(|(v, _)| v).sum()
    }

    fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum::<usize>().max(1)
    }
}

fn symbol_map(dfa: &Dfa, measure_alphabet: &[char]) -> Result<Vec<usize>> {
    let mismatch = || Error::AlphabetMismatch {
        left: dfa.alphabet().iter().collect(),
        right: measure_alphabet.iter().collect(),
    };
    if measure_alphabet.len() != dfa.alphabet().len() {
        return Err(mismatch());
    }
    measure_alphabet.iter().map(|&c| dfa.symbol_index(c).ok_or_else(mismatch)).collect()
}

fn merge_row(entries: impl Iterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for (j, p) in entries {
        if p > 0.0 {
            *acc.entry(j).or_insert(0.0) += p;
        }
    }
    acc.into_iter().collect()
}

/// Lifts an automaton and a measure to a chain restricted to the states
/// reachable with positive probability.
///
/// Bernoulli: states are automaton states, `P_(p,q) = Σ_(p·a = q) μ(a)`.
/// Markov: states are pairs `(q, s)` of an automaton state and a measure
/// state, with `(p, s) -> (p·ℓ(t), t)` of probability `P_(s,t)`; the chain
/// starts after the first letter, so `lag = 1`.
pub fn lift_chain(dfa: &Dfa, measure: &Measure) -> Result<Chain> {
    let map = symbol_map(dfa, measure.alphabet())?;
    let empty = if dfa.is_terminal(dfa.initial()) { 1.0 } else { 0.0 };
    match measure {
        Measure::Bernoulli(b) => {
            let mut local = HashMap::from([(dfa.initial(), 0usize)]);
            let mut states = vec![dfa.initial()];
            let mut rows = Vec::new();
            let mut head = 0;
            while head < states.len() {
                let q = states[head];
                head += 1;
                let mut entries = Vec::new();
                for (a, &p) in b.probs().iter().enumerate() {
                    if p <= 0.0 {
                        continue;
                    }
                    let r = dfa.next(q, map[a]);
                    let j = *local.entry(r).or_insert_with(|| {
                        states.push(r);
                        states.len() - 1
                    });
                    entries.push((j, p));
                }
                rows.push(merge_row(entries.into_iter()));
            }
            let mut initial = vec![0.0; states.len()];
            initial[0] = 1.0;
            let terminal = states.iter().map(|&q| dfa.is_terminal(q)).collect();
            Ok(Chain { rows, initial, terminal, lag: 0, empty_word_mass: empty })
        }
        Measure::Markov(m) => {
            let mut local: HashMap<(usize, usize), usize> = HashMap::new();
            let mut states: Vec<(usize, usize)> = Vec::new();
            let mut initial_entries = Vec::new();
            for (s, &p) in m.initial().iter().enumerate() {
                if p <= 0.0 {
                    continue;
                }
                let key = (dfa.next(dfa.initial(), map[m.letter_of(s)]), s);
                let j = *local.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                initial_entries.push((j, p));
            }
            let mut rows = Vec::new();
            let mut head = 0;
            while head < states.len() {
                let (q, s) = states[head];
                head += 1;
                let mut entries = Vec::with_capacity(m.row(s).len());
                for &(t, p) in m.row(s) {
                    let key = (dfa.next(q, map[m.letter_of(t)]), t);
                    let j = *local.entry(key).or_insert_with(|| {
                        states.push(key);
                        states.len() - 1
                    });
                    entries.push((j, p));
                }
                rows.push(merge_row(entries.into_iter()));
            }
            let mut initial = vec![0.0; states.len()];
            for (j, p) in initial_entries {
                initial[j] += p;
            }
            let terminal = states.iter().map(|&(q, _)| dfa.is_terminal(q)).collect();
            Ok(Chain { rows, initial, terminal, lag: 1, empty_word_mass: empty })
        }
    }
}

fn mat_vec_dense(x: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            y[j] += x[i] * m[i][j];
        }
    }
    y
}

fn mat_mul_dense(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter().map(|row| mat_vec_dense(row, b)).collect()
}

/// `μ(L ∩ A^n)`. Small chains use binary exponentiation, larger ones
/// vector iteration.
pub fn slice_mass(chain: &Chain, n: usize) -> f64 {
    if n < chain.lag {
        return chain.empty_word_mass;
    }
    let mut steps = n - chain.lag;
    let size = chain.num_states();
    if size <= 64 && steps > 2 * size {
        let mut base = chain.dense_matrix();
        let mut x = chain.initial.clone();
        while steps > 0 {
            if steps & 1 == 1 {
                x = mat_vec_dense(&x, &base);
            }
            steps >>= 1;
            if steps > 0 {
                base = mat_mul_dense(&base, &base);
            }
        }
        chain.terminal_mass(&x)
    } else {
        let mut x = chain.initial.clone();
        for _ in 0..steps {
            x = chain.step(&x);
        }
        chain.terminal_mass(&x)
    }
}

/// Slice masses for `n = 0..count`, by vector iteration.
pub fn slice_masses(chain: &Chain, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut x = chain.initial.clone();
    for n in 0..count {
        if n < chain.lag {
            out.push(chain.empty_word_mass);
            continue;
        }
        if n > chain.lag {
            x = chain.step(&x);
        }
        out.push(chain.terminal_mass(&x));
    }
    out
}

/// Limiting (Cesàro) occupation of each chain state.
#[derive(Debug, Clone, PartialEq)]
pub struct Occupation {
    pub values: Vec<f64>,
    /// Recurrent classes reached from the initial distribution, with
    /// their periods.
    pub classes: Vec<(Vec<usize>, usize)>,
    /// Whether every linear solve was done exactly (dense LU) rather than
    /// by iteration.
    pub structural: bool,
}

fn period(rows: &SparseRows, class: &[usize], member: &[bool]) -> usize {
    let mut level: HashMap<usize, usize> = HashMap::from([(class[0], 0)]);
    let mut queue = VecDeque::from([class[0]]);
    let mut g = 0;
    while let Some(v) = queue.pop_front() {
        let lv = level[&v];
        for &(w, _) in &rows[v] {
            if !member[w] {
                continue;
            }
            match level.get(&w) {
                Some(&lw) => g = gcd(g, (lv + 1).abs_diff(lw)),
                None => {
                    level.insert(w, lv + 1);
                    queue.push_back(w);
                }
            }
        }
    }
    g.max(1)
}

fn stationary(rows: &SparseRows, class: &[usize], pos: &HashMap<usize, usize>) -> (Vec<f64>, bool) {
    let m = class.len();
    if m == 1 {
        return (vec![1.0], true);
    }
    if m <= DENSE_LIMIT {
        // (Pᵀ - I) π = 0 with the last equation replaced by Σ π = 1
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (i, &s) in class.iter().enumerate() {
            for &(t, p) in &rows[s] {
                a[(pos[&t], i)] += p;
            }
            a[(i, i)] -= 1.0;
        }
        for j in 0..m {
            a[(m - 1, j)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(m);
        b[m - 1] = 1.0;
        if let Some(x) = solve(a, b) {
            let mut v: Vec<f64> = x.iter().map(|&y| y.max(0.0)).collect();
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|y| *y /= s);
            return (v, true);
        }
    }
    // lazy power iteration
    let mut x = vec![1.0 / m as f64; m];
    for _ in 0..MAX_STEPS {
        let mut y: Vec<f64> = x.iter().map(|v| 0.5 * v).collect();
        for (i, &s) in class.iter().enumerate() {
            for &(t, p) in &rows[s] {
                y[pos[&t]] += 0.5 * x[i] * p;
            }
        }
        let d: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if d < 1e-15 {
            break;
        }
    }
    (x, false)
}

/// Expected visits `y` to a transient component: `y (I - P_SS) = b`.
fn transient_visits(rows: &SparseRows, comp: &[usize], pos: &HashMap<usize, usize>, inflow: &[f64]) -> (Vec<f64>, bool) {
    let m = comp.len();
    let b: Vec<f64> = comp.iter().map(|&s| inflow[s]).collect();
    if m <= DENSE_LIMIT {
        let mut a = DMatrix::<f64>::identity(m, m);
        for (i, &s) in comp.iter().enumerate() {
            for &(t, p) in &rows[s] {
                if let Some(&j) = pos.get(&t) {
                    a[(j, i)] -= p;
                }
            }
        }
        if let Some(x) = solve(a, DVector::from_vec(b.clone())) {
            return (x.iter().map(|&v| v.max(0.0)).collect(), true);
        }
    }
    let mut y = b.clone();
    for _ in 0..MAX_STEPS {
        let mut next = b.clone();
        for (i, &s) in comp.iter().enumerate() {
            for &(t, p) in &rows[s] {
                if let Some(&j) = pos.get(&t) {
                    next[j] += y[i] * p;
                }
            }
        }
        let d: f64 = next.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        y = next;
        if d < 1e-15 {
            break;
        }
    }
    (y, false)
}

/// Cesàro limit of the state distributions `initial · Pⁿ`.
pub fn limiting_occupation(chain: &Chain) -> Occupation {
    let rows = &chain.rows;
    let n = rows.len();
    let comps = strongly_connected_components(rows);
    let mut comp_of = vec![0usize; n];
    for (c, comp) in comps.iter().enumerate() {
        for &s in comp {
            comp_of[s] = c;
        }
    }
    let mut inflow = chain.initial.clone();
    let mut values = vec![0.0; n];
    let mut classes = Vec::new();
    let mut structural = true;
    // Tarjan lists sinks first; walk sources first
    for (c, comp) in comps.iter().enumerate().rev() {
        let closed = comp.iter().all(|&s| rows[s].iter().all(|&(t, _)| comp_of[t] == c));
        let entering: f64 = comp.iter().map(|&s| inflow[s]).sum();
        if entering == 0.0 {
            continue;
        }
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        if closed {
            let (pi, exact) = stationary(rows, comp, &pos);
            structural &= exact;
            for (i, &s) in comp.iter().enumerate() {
                values[s] = entering * pi[i];
            }
            let mut member = vec![false; n];
            comp.iter().for_each(|&s| member[s] = true);
            classes.push((comp.clone(), period(rows, comp, &member)));
        } else {
            let (visits, exact) = transient_visits(rows, comp, &pos, &inflow);
            structural &= exact;
            for (i, &s) in comp.iter().enumerate() {
                for &(t, p) in &rows[s] {
                    if comp_of[t] != c {
                        inflow[t] += visits[i] * p;
                    }
                }
            }
        }
    }
    Occupation { values, classes, structural }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    /// Only the averages converge.
    Cesaro,
    /// The slice masses converge as well.
    Strong,
}

impl std::fmt::Display for DensityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityMode::Cesaro => "cesaro",
            DensityMode::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityDiagnostics {
    /// `(n, (1/n) Σ_(i<n) μ(L ∩ A^i))` at powers of two.
    pub partial_averages: Vec<(usize, f64)>,
    /// Spread of the slice masses over the last window.
    pub tail_oscillation: f64,
    pub terms_computed: usize,
    pub periods: Vec<usize>,
    pub structural: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityResult {
    pub value: f64,
    pub mode: DensityMode,
    pub diagnostics: DensityDiagnostics,
    /// Aperiodicity of the syntactic monoid, when it was computed.
    pub aperiodic_language: Option<bool>,
}

fn lcm_capped(values: impl Iterator<Item = usize>, cap: usize) -> usize {
    values.fold(1usize, |acc, p| (acc / gcd(acc, p) * p).min(cap))
}

/// Density of the chain's language: the Cesàro limit of its slice masses.
pub fn cesaro_limit(chain: &Chain) -> DensityResult {
    let occupation = limiting_occupation(chain);
    let recurrent_terminal = occupation.classes.iter().flat_map(|(c, _)| c.iter()).filter(|&&s| chain.terminal[s]);
    let all_recurrent: Vec<usize> = occupation.classes.iter().flat_map(|(c, _)| c.iter().copied()).collect();
    let value = if recurrent_terminal.clone().next().is_none() {
        0.0
    } else if all_recurrent.iter().all(|&s| chain.terminal[s]) {
        1.0
    } else {
        recurrent_terminal.map(|&s| occupation.values[s]).sum::<f64>().clamp(0.0, 1.0)
    };

    let periods: Vec<usize> = occupation.classes.iter().map(|(_, p)| *p).collect();
    let lcm = lcm_capped(periods.iter().copied(), 4096);
    let window = WINDOW.max(2 * lcm);
    let max_steps = MAX_STEPS.min(STEP_BUDGET / chain.nonzeros()).max(4 * window);
    let mut recurrent = vec![false; chain.num_states()];
    all_recurrent.iter().for_each(|&s| recurrent[s] = true);

    let mut masses: Vec<f64> = Vec::new();
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut x = chain.initial.clone();
    let mut next_checkpoint = 1;
    for n in 0..max_steps {
        let mass = if n < chain.lag {
            chain.empty_word_mass
        } else {
            if n > chain.lag {
                x = chain.step(&x);
            }
            chain.terminal_mass(&x)
        };
        masses.push(mass);
        sum += mass;
        if n + 1 == next_checkpoint {
            partial.push((n + 1, sum / (n + 1) as f64));
            next_checkpoint *= 2;
        }
        if masses.len() >= 2 * window && (n + 1) % window == 0 {
            let transient: f64 = x.iter().zip(&recurrent).filter(|(_, &r)| !r).map(|(v, _)| v).sum();
            let tail = &masses[masses.len() - window..];
            let periodic = tail.iter().zip(&masses[masses.len() - window - lcm..]).all(|(a, b)| (a - b).abs() <= 1e-15);
            if transient <= 1e-13 && periodic {
                break;
            }
        }
    }
    let tail = &masses[masses.len().saturating_sub(window)..];
    let hi = tail.iter().cloned().fold(f64::MIN, f64::max);
    let lo = tail.iter().cloned().fold(f64::MAX, f64::min);
    let tail_oscillation = hi - lo;
    let terms = masses.len();
    if partial.last().map(|p| p.0) != Some(terms) {
        partial.push((terms, sum / terms as f64));
    }
    let value = if occupation.structural {
        value
    } else {
        // iterative fallback: the running average over the computed terms
        sum / terms as f64
    };
    DensityResult {
        value,
        mode: if tail_oscillation <= STRONG_TOLERANCE { DensityMode::Strong } else { DensityMode::Cesaro },
        diagnostics: DensityDiagnostics {
            partial_averages: partial,
            tail_oscillation,
            terms_computed: terms,
            periods,
            structural: occupation.structural,
        },
        aperiodic_language: None,
    }
}

/// Lift, Cesàro limit, and aperiodicity of the syntactic monoid (when the
/// monoid has at most 10 000 elements).
pub fn density(dfa: &Dfa, measure: &Measure) -> Result<DensityResult> {
    let minimal = dfa.minimize();
    let chain = lift_chain(&minimal, measure)?;
    let mut result = cesaro_limit(&chain);
    result.aperiodic_language = Monoid::transition_monoid_capped(&minimal, 10_000).ok().map(|m| m.is_aperiodic());
    Ok(result)
}

/// Density `ν(e)` of `φ⁻¹(e)` for every monoid element, from the Cayley
/// chain `e -> e·φ(a)` with probability `μ(a)` started at the identity.
pub fn element_densities(monoid: &Monoid, measure: &Measure) -> Result<Vec<f64>> {
    let Measure::Bernoulli(b) = measure else {
        return Err(Error::NotPositive);
    };
    if !b.is_positive() {
        return Err(Error::NotPositive);
    }
    let map: Vec<usize> = b
        .alphabet()
        .iter()
        .map(|&c| {
            monoid.alphabet().iter().position(|&x| x == c).ok_or_else(|| Error::AlphabetMismatch {
                left: monoid.alphabet().iter().collect(),
                right: b.alphabet().iter().collect(),
            })
        })
        .collect::<Result<_>>()?;
    if map.len() != monoid.alphabet().len() {
        return Err(Error::AlphabetMismatch {
            left: monoid.alphabet().iter().collect(),
            right: b.alphabet().iter().collect(),
        });
    }
    let rows: SparseRows = (0..monoid.len())
        .map(|e| merge_row(b.probs().iter().enumerate().map(|(a, &p)| (monoid.act_right(e, map[a]), p))))
        .collect();
    let mut initial = vec![0.0; monoid.len()];
    initial[monoid.identity()] = 1.0;
    let chain = Chain { rows, initial, terminal: vec![false; monoid.len()], lag: 0, empty_word_mass: 0.0 };
    Ok(limiting_occupation(&chain).values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryEntry {
    pub element: usize,
    pub density: f64,
    pub in_minimal_ideal: bool,
    /// `Card(eM ∩ Me)`, for elements of the minimal ideal.
    pub d: Option<usize>,
    /// `ν(eM) ν(Me) / d`, for elements of the minimal ideal.
    pub predicted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub entries: Vec<CorollaryEntry>,
    pub aperiodic: bool,
    pub total: f64,
    pub violations: Vec<String>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the equidistribution identities on the minimal ideal `K`:
/// `ν(e) > 0` iff `e ∈ K`, `ν(e) = ν(eM) ν(Me) / d` on `K`, `d = 1` for
/// aperiodic monoids, and `Σ ν = 1`.
pub fn check_corollary(monoid: &Monoid, ideal: &IdealInfo, densities: &[f64]) -> CorollaryReport {
    let mut violations = Vec::new();
    let mut entries = Vec::with_capacity(monoid.len());
    let nu = |set: &[usize]| set.iter().map(|&f| densities[f]).sum::<f64>();
    for (e, &density) in densities.iter().enumerate().take(monoid.len()) {
        if ideal.contains(e) {
            let d = monoid.h_intersection_size(ideal, e).expect("element of the minimal ideal");
            let predicted = nu(&monoid.right_ideal(e)) * nu(&monoid.left_ideal(e)) / d as f64;
            if (density - predicted).abs() > COROLLARY_TOLERANCE {
                violations.push(format!("element {e}: ν = {density} but ν(eM)ν(Me)/d = {predicted}"));
            }
            if density <= 0.0 {
                violations.push(format!("element {e} of the minimal ideal has density {density}"));
            }
            if ideal.aperiodic && d != 1 {
                violations.push(format!("aperiodic monoid with d = {d} at element {e}"));
            }
            entries.push(CorollaryEntry { element: e, density, in_minimal_ideal: true, d: Some(d), predicted: Some(predicted) });
        } else {
            if density > COROLLARY_TOLERANCE {
                violations.push(format!("element {e} outside the minimal ideal has density {density}"));
            }
            entries.push(CorollaryEntry { element: e, density, in_minimal_ideal: false, d: None, predicted: None });
        }
    }
    let total: f64 = densities.iter().sum();
    if (total - 1.0).abs() > COROLLARY_TOLERANCE {
        violations.push(format!("densities sum to {total}"));
    }
    CorollaryReport { entries, aperiodic: ideal.aperiodic, total, violations }
}

/// `Σ_(w ∈ L, |w| = n) μ(w)` by enumeration of `A^n`; limited to
/// `n ≤ 14` and alphabets of at most four letters.
pub fn brute_force_slice(dfa: &Dfa, measure: &Measure, n: usize) -> Result<f64> {
    let k = dfa.alphabet().len();
    if n > 14 || k > 4 {
        return Err(Error::BoundExceeded(format!("enumeration of {k}^{n} words")));
    }
    let map = symbol_map(dfa, measure.alphabet())?;
    // dfa letter index -> measure letter index
    let mut inverse = vec![0; k];
    for (m, &d) in map.iter().enumerate() {
        inverse[d] = m;
    }
    let mut word = vec![0usize; n];
    let mut total = 0.0;
    loop {
        if dfa.accepts_indices(&word) {
            let w: Vec<usize> = word.iter().map(|&a| inverse[a]).collect();
            total += measure.word_mass_indices(&w);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            word[i] += 1;
            if word[i] < k {
                break;
            }
            word[i] = 0;
            i += 1;
        }
    }
}
