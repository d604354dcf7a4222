//! Regular-expression front end: recursive-descent parser, Thompson
//! construction and subset construction.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Ast {
    Empty,
    Epsilon,
    Symbol(usize),
    Any,
    Concat(Box<Ast>, Box<Ast>),
    Union(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a [char],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace() && !self.alphabet.contains(&c)) {
            self.pos += 1;
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.pos, message: message.into() })
    }

    fn union(&mut self) -> Result<Ast> {
        let mut left = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                let right = self.concat()?;
                left = Ast::Union(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn concat(&mut self) -> Result<Ast> {
        let mut acc: Option<Ast> = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('|') | Some(')') => break,
                _ => {
                    let factor = self.starred()?;
                    acc = Some(match acc {
                        None => factor,
                        Some(prev) => Ast::Concat(Box::new(prev), Box::new(factor)),
                    });
                }
            }
        }
        Ok(acc.unwrap_or(Ast::Epsilon))
    }

    fn starred(&mut self) -> Result<Ast> {
        let mut atom = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                atom = Ast::Star(Box::new(atom));
            } else {
                return Ok(atom);
            }
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let c = match self.peek() {
            Some(c) => c,
            None => return self.error("unexpected end of expression"),
        };
        match c {
            '(' => {
                self.pos += 1;
                let inner = self.union()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            '*' => self.error("'*' without operand"),
            '.' => {
                self.pos += 1;
                Ok(Ast::Any)
            }
            'ε' => {
                self.pos += 1;
                Ok(Ast::Epsilon)
            }
            '∅' => {
                self.pos += 1;
                Ok(Ast::Empty)
            }
            '%' => {
                let next = self.chars.get(self.pos + 1).copied();
                match next {
                    Some('e') => {
                        self.pos += 2;
                        Ok(Ast::Epsilon)
                    }
                    Some('0') => {
                        self.pos += 2;
                        Ok(Ast::Empty)
                    }
                    _ => self.error("expected %e or %0"),
                }
            }
            _ => match self.alphabet.iter().position(|&a| a == c) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Ast::Symbol(i))
                }
                None => Err(Error::UnknownSymbol(c)),
            },
        }
    }
}

pub(crate) fn parse(text: &str, alphabet: &[char]) -> Result<Ast> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0, alphabet };
    let ast = parser.union()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return parser.error("unbalanced ')'");
    }
    Ok(ast)
}

/// Thompson automaton: one start, one accept, epsilon and symbol moves.
struct Nfa {
    eps: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, usize)>>,
    start: usize,
    accept: usize,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, ast: &Ast, letters: usize) -> (usize, usize) {
        let s = self.state();
        let t = self.state();
        match ast {
            Ast::Empty => {}
            Ast::Epsilon => self.eps[s].push(t),
            Ast::Symbol(a) => self.moves[s].push((*a, t)),
            Ast::Any => {
                for a in 0..letters {
                    self.moves[s].push((a, t));
                }
            }
            Ast::Concat(l, r) => {
                let (ls, lt) = self.build(l, letters);
                let (rs, rt) = self.build(r, letters);
                self.eps[s].push(ls);
                self.eps[lt].push(rs);
                self.eps[rt].push(t);
            }
            Ast::Union(l, r) => {
                let (ls, lt) = self.build(l, letters);
                let (rs, rt) = self.build(r, letters);
                self.eps[s].extend([ls, rs]);
                self.eps[lt].push(t);
                self.eps[rt].push(t);
            }
            Ast::Star(inner) => {
                let (is, it) = self.build(inner, letters);
                self.eps[s].extend([is, t]);
                self.eps[it].extend([is, t]);
            }
        }
        (s, t)
    }

    fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.eps.len()];
        let mut stack: Vec<usize> = set.clone();
        for &q in set.iter() {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if !seen[r] {
                    seen[r] = true;
                    set.push(r);
                    stack.push(r);
                }
            }
        }
        set.sort_unstable();
        set.dedup();
    }
}

/// Subset construction. Returns a complete transition table (the empty
/// subset plays the sink), the initial state and the terminal flags.
pub(crate) fn determinize(ast: &Ast, letters: usize) -> (Vec<usize>, usize, Vec<bool>) {
    let mut nfa = Nfa { eps: Vec::new(), moves: Vec::new(), start: 0, accept: 0 };
    let (s, t) = nfa.build(ast, letters);
    nfa.start = s;
    nfa.accept = t;

    let mut start = vec![nfa.start];
    nfa.closure(&mut start);
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut delta: Vec<usize> = Vec::new();
    while let Some(id) = queue.pop_front() {
        // states are dequeued in creation order, so rows are appended in order
        debug_assert_eq!(delta.len(), id * letters);
        for a in 0..letters {
            let mut next: Vec<usize> = subsets[id]
                .iter()
                .flat_map(|&q| nfa.moves[q].iter().filter(move |m| m.0 == a).map(|m| m.1))
                .collect();
            nfa.closure(&mut next);
            let target = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = subsets.len();
                    subsets.push(next.clone());
                    index.insert(next, j);
                    queue.push_back(j);
                    j
                }
            };
            delta.push(target);
        }
    }
    let terminal = subsets.iter().map(|s| s.binary_search(&nfa.accept).is_ok()).collect();
    (delta, 0, terminal)
}
