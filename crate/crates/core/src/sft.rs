//! Shifts of finite type as labeled graphs.
//!
//! An [`Sft`] is an essential labeled graph: every vertex has at least one
//! incoming and one outgoing edge, and the language of the shift is the set
//! of label sequences of finite paths. Shifts defined by forbidden blocks use
//! the memory-word normal form: vertices are the allowed words of length
//! `max(k - 1, 1)` (with `k` the longest block) and an edge `w --a--> v`
//! exists when `wa` is allowed, `v` being the suffix of `wa` of the same
//! length as `w`. With memory one the vertices are letters and the adjacency
//! matrix is the usual 0/1 transition matrix of the shift.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigUint;

use crate::automata::{check_alphabet, Dfa};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub label: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    alphabet: Vec<char>,
    symbol_names: Vec<String>,
    memory: usize,
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

fn to_indices(alphabet: &[char], word: &[char]) -> Result<Vec<usize>> {
    word.iter()
        .map(|c| alphabet.iter().position(|a| a == c).ok_or(Error::UnknownSymbol(*c)))
        .collect()
}

fn contains_factor(word: &[usize], blocks: &[Vec<usize>]) -> bool {
    blocks.iter().any(|b| b.len() <= word.len() && word.windows(b.len()).any(|w| w == b.as_slice()))
}

impl Sft {
    /// Builds a shift from an explicit labeled graph, trimmed to its
    /// essential part.
    pub fn from_graph(
        alphabet: Vec<char>,
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
        memory: usize,
    ) -> Result<Sft> {
        check_alphabet(&alphabet)?;
        let n = vertex_names.len();
        for e in &edges {
            if e.source >= n || e.target >= n || e.label >= alphabet.len() {
                return Err(Error::InvalidShift(format!("edge {e:?} out of range")));
            }
        }
        let mut alive = vec![true; n];
        loop {
            let mut has_in = vec![false; n];
            let mut has_out = vec![false; n];
            for e in edges.iter().filter(|e| alive[e.source] && alive[e.target]) {
                has_out[e.source] = true;
                has_in[e.target] = true;
            }
            let mut changed = false;
            for v in 0..n {
                if alive[v] && !(has_in[v] && has_out[v]) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![usize::MAX; n];
        let mut names = Vec::new();
        for v in (0..n).filter(|&v| alive[v]) {
            renumber[v] = names.len();
            names.push(vertex_names[v].clone());
        }
        if names.is_empty() {
            return Err(Error::EmptyShift);
        }
        let mut kept: Vec<Edge> = edges
            .iter()
            .filter(|e| alive[e.source] && alive[e.target])
            .map(|e| Edge { source: renumber[e.source], label: e.label, target: renumber[e.target] })
            .collect();
        kept.sort();
        let mut out_edges = vec![Vec::new(); names.len()];
        let mut in_edges = vec![Vec::new(); names.len()];
        for (i, e) in kept.iter().enumerate() {
            out_edges[e.source].push(i);
            in_edges[e.target].push(i);
        }
        let symbol_names = alphabet.iter().map(|c| c.to_string()).collect();
        Ok(Sft { alphabet, symbol_names, memory, vertex_names: names, edges: kept, out_edges, in_edges })
    }

    pub fn full_shift(alphabet: &[char]) -> Result<Sft> {
        Sft::from_forbidden_blocks(alphabet, &[])
    }

    /// Shift avoiding every word of `blocks`.
    pub fn from_forbidden_blocks(alphabet: &[char], blocks: &[&str]) -> Result<Sft> {
        check_alphabet(alphabet)?;
        let blocks: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                let chars: Vec<char> = b.chars().collect();
                if chars.is_empty() {
                    return Err(Error::InvalidShift("empty forbidden block".into()));
                }
                to_indices(alphabet, &chars)
            })
            .collect::<Result<_>>()?;
        let k = blocks.iter().map(Vec::len).max().unwrap_or(0);
        let memory = k.saturating_sub(1).max(1);
        let q = alphabet.len();

        // allowed words of length `memory`, in lexicographic order
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..memory {
            let mut next = Vec::new();
            for w in &words {
                for a in 0..q {
                    let mut v = w.clone();
                    v.push(a);
                    if !contains_factor(&v, &blocks) {
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        let position = |w: &[usize]| words.binary_search_by(|x| x.as_slice().cmp(w)).ok();
        let mut edges = Vec::new();
        for (s, w) in words.iter().enumerate() {
            for a in 0..q {
                let mut wa = w.clone();
                wa.push(a);
                if contains_factor(&wa, &blocks) {
                    continue;
                }
                if let Some(t) = position(&wa[1..]) {
                    edges.push(Edge { source: s, label: a, target: t });
                }
            }
        }
        let names = words.iter().map(|w| w.iter().map(|&a| alphabet[a]).collect()).collect();
        Sft::from_graph(alphabet.to_vec(), names, edges, memory)
    }

    /// Vertex shift of a 0/1 matrix: vertex `i` is the letter `alphabet[i]`
    /// and the edge `i -> j` carries the label `alphabet[j]`.
    pub fn from_adjacency(alphabet: &[char], matrix: &[Vec<u32>]) -> Result<Sft> {
        check_alphabet(alphabet)?;
        let n = alphabet.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("adjacency matrix must be {n}x{n}")));
        }
        let mut edges = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                match m {
                    0 => {}
                    1 => edges.push(Edge { source: i, label: j, target: j }),
                    _ => return Err(Error::InvalidShift(format!("entry ({i},{j}) = {m}; expected 0 or 1"))),
                }
            }
        }
        let names = alphabet.iter().map(|c| c.to_string()).collect();
        Sft::from_graph(alphabet.to_vec(), names, edges, 1)
    }

    /// Parses the shift text format: an `alphabet` line followed either by
    /// one forbidden block per line or by a `matrix` line and the rows of a
    /// 0/1 adjacency matrix. `#` starts a comment.
    pub fn parse_spec(text: &str) -> Result<Sft> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing alphabet line".into()))?;
        let rest = header
            .strip_prefix("alphabet")
            .ok_or_else(|| Error::Parse(format!("expected 'alphabet', found {header:?}")))?;
        let alphabet: Vec<char> =
            rest.trim_start_matches(':').chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
        let body: Vec<&str> = lines.collect();
        if body.first() == Some(&"matrix") {
            let rows = body[1..]
                .iter()
                .map(|l| {
                    l.split_whitespace()
                        .map(|x| x.parse::<u32>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Sft::from_adjacency(&alphabet, &rows)
        } else {
            let blocks: Vec<String> =
                body.iter().map(|l| l.chars().filter(|c| !c.is_whitespace()).collect()).collect();
            let refs: Vec<&str> = blocks.iter().map(String::as_str).collect();
            Sft::from_forbidden_blocks(&alphabet, &refs)
        }
    }

    pub fn load(path: &Path) -> Result<Sft> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Sft::parse_spec(&text)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Display names of the symbols (the blocks, for a block presentation).
    pub fn symbol_names(&self) -> &[String] {
        &self.symbol_names
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out_edges[v].iter().map(move |&i| &self.edges[i])
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.in_edges[v].iter().map(move |&i| &self.edges[i])
    }

    /// Dense adjacency matrix with edge multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.num_vertices();
        let mut m = vec![vec![0u64; n]; n];
        for e in &self.edges {
            m[e.source][e.target] += 1;
        }
        m
    }

    fn reaches_all(&self, forward: bool) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            let list = if forward { &self.out_edges[v] } else { &self.in_edges[v] };
            for &i in list {
                let e = self.edges[i];
                let w = if forward { e.target } else { e.source };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when the graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        self.reaches_all(true) && self.reaches_all(false)
    }

    /// Distinct out-edges of every vertex carry distinct labels.
    pub fn is_right_resolving(&self) -> bool {
        self.out_edges.iter().all(|out| {
            let labels: BTreeSet<usize> = out.iter().map(|&i| self.edges[i].label).collect();
            labels.len() == out.len()
        })
    }

    /// Label entering each vertex, when the graph is simple and all edges
    /// into a vertex carry the same label. In that case the letter process
    /// is a Markov chain on the vertices.
    pub fn vertex_labels(&self) -> Option<Vec<usize>> {
        let adjacency_simple = self.out_edges.iter().all(|out| {
            let targets: BTreeSet<usize> = out.iter().map(|&i| self.edges[i].target).collect();
            targets.len() == out.len()
        });
        if !adjacency_simple {
            return None;
        }
        self.in_edges
            .iter()
            .map(|inc| {
                let first = self.edges[*inc.first()?].label;
                inc.iter().all(|&i| self.edges[i].label == first).then_some(first)
            })
            .collect()
    }

    /// Deterministic automaton of `L(X)`: subset construction started from
    /// the set of all vertices, then minimization. The sink is the only
    /// non-terminal state.
    pub fn language_dfa(&self) -> Dfa {
        use std::collections::{HashMap, VecDeque};
        let k = self.alphabet.len();
        let start: Vec<usize> = (0..self.num_vertices()).collect();
        let mut index = HashMap::from([(start.clone(), 0usize)]);
        let mut subsets = vec![start];
        let mut queue = VecDeque::from([0usize]);
        let mut delta = Vec::new();
        while let Some(id) = queue.pop_front() {
            let mut targets: Vec<Vec<usize>> = vec![Vec::new(); k];
            for &v in &subsets[id] {
                for e in self.out_edges(v) {
                    targets[e.label].push(e.target);
                }
            }
            for mut t in targets {
                t.sort_unstable();
                t.dedup();
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        let j = subsets.len();
                        subsets.push(t.clone());
                        index.insert(t, j);
                        queue.push_back(j);
                        j
                    }
                };
                delta.push(j);
            }
        }
        let terminal = subsets.iter().map(|s| !s.is_empty()).collect();
        Dfa::from_raw(self.alphabet.clone(), delta, 0, terminal).minimize()
    }

    /// `Card(L_n(X))`.
    pub fn count_words(&self, n: usize) -> BigUint {
        self.count_words_upto(n).pop().unwrap_or_default()
    }

    /// `Card(L_i(X))` for `i = 0..=n`.
    pub fn count_words_upto(&self, n: usize) -> Vec<BigUint> {
        self.language_dfa().count_accepted_upto(n)
    }

    /// All words of `L_n(X)` as letter-index vectors, in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Vec<usize>> {
        let dfa = self.language_dfa();
        let k = self.alphabet.len();
        let mut layer = vec![(Vec::new(), dfa.initial())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, q) in &layer {
                for a in 0..k {
                    let r = dfa.next(*q, a);
                    if dfa.is_terminal(r) {
                        let mut v = w.clone();
                        v.push(a);
                        next.push((v, r));
                    }
                }
            }
            layer = next;
        }
        layer.into_iter().map(|(w, _)| w).collect()
    }

    /// The `k`-block presentation: a shift whose symbols are the words of
    /// `L_k(X)`. With `K = max(k, memory)` the vertices are the words of
    /// `L_K(X)` (so `L_k(X)` itself once `k` reaches the memory) and
    /// `u -> v` is an edge when `u` and `v` overlap on `K - 1` letters inside
    /// a word of `L_(K+1)(X)`; the edge carries the last `k` letters of `v`.
    pub fn k_block_presentation(&self, k: usize) -> Result<Sft> {
        if k == 0 {
            return Err(Error::InvalidParameter("block length must be at least 1".into()));
        }
        let big_k = k.max(self.memory);
        let blocks = self.words(k);
        let vertices = self.words(big_k);
        let extended = self.words(big_k + 1);
        if blocks.len() > 0x1800 {
            return Err(Error::BoundExceeded(format!("{} blocks of length {k}", blocks.len())));
        }
        let symbols: Vec<char> = if k == 1 {
            blocks.iter().map(|b| self.alphabet[b[0]]).collect()
        } else {
            // private-use code points stand for the blocks
            (0..blocks.len() as u32).map(|i| char::from_u32(0xE000 + i).unwrap()).collect()
        };
        let spell = |w: &[usize]| w.iter().map(|&a| self.symbol_names[a].as_str()).collect::<String>();
        let names: Vec<String> = blocks.iter().map(|b| spell(b)).collect();
        let find = |set: &[Vec<usize>], w: &[usize]| set.binary_search_by(|x| x.as_slice().cmp(w)).ok();
        let mut edges = Vec::new();
        for w in &extended {
            let (Some(s), Some(t)) = (find(&vertices, &w[..big_k]), find(&vertices, &w[1..])) else {
                continue;
            };
            let label = find(&blocks, &w[big_k + 1 - k..]).expect("suffix of an allowed word is allowed");
            edges.push(Edge { source: s, label, target: t });
        }
        let vertex_names = vertices.iter().map(|v| spell(v)).collect();
        let mut sft = Sft::from_graph(symbols, vertex_names, edges, big_k - k + 1)?;
        sft.symbol_names = names;
        Ok(sft)
    }
}
