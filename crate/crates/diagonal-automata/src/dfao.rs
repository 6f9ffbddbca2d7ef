//! Deterministic finite automata with output, reading base-`p` digit tuples
//! least significant first.
//!
//! A symbol is a tuple `(d_1, …, d_l)` of digits in `{0, …, p−1}`, encoded as
//! the index `d_1·p^{l−1} + … + d_l`, so ascending symbol index is ascending
//! lexicographic order on tuples. Running on `(n_1, …, n_l)` feeds the digit
//! tuples of the components, padded with zeros to the longest component; the
//! output is the label of the final state. The empty input (all components
//! zero) yields the label of the initial state.

use std::collections::HashMap;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DfaoError {
    #[error("arity mismatch: input has {0} components, automaton expects {1}")]
    ArityMismatch(usize, usize),
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u64, u64),
    #[error("state {0} out of range")]
    BadStateIndex(usize),
    #[error("state {0} has {1} transitions, expected {2}")]
    BadTransitionCount(usize, usize, usize),
    #[error("periodicity analysis requires arity 1, got {0}")]
    ArityUnsupported(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State<L> {
    pub output: L,
    /// Successor state for each of the `p^arity` symbols, in symbol order.
    pub next: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao<L> {
    p: u64,
    arity: usize,
    states: Vec<State<L>>,
    initial: usize,
}

impl<L: Clone + Eq> Dfao<L> {
    pub fn new(
        p: u64,
        arity: usize,
        states: Vec<State<L>>,
        initial: usize,
    ) -> Result<Self, DfaoError> {
        let nsyms = (p as usize).pow(arity as u32);
        if initial >= states.len() {
            return Err(DfaoError::BadStateIndex(initial));
        }
        for (i, s) in states.iter().enumerate() {
            if s.next.len() != nsyms {
                return Err(DfaoError::BadTransitionCount(i, s.next.len(), nsyms));
            }
            if let Some(&t) = s.next.iter().find(|&&t| t >= states.len()) {
                return Err(DfaoError::BadStateIndex(t));
            }
        }
        Ok(Dfao {
            p,
            arity,
            states,
            initial,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn states(&self) -> &[State<L>] {
        &self.states
    }

    pub fn output(&self, state: usize) -> &L {
        &self.states[state].output
    }

    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.states[state].next[symbol]
    }

    pub fn num_symbols(&self) -> usize {
        (self.p as usize).pow(self.arity as u32)
    }

    pub fn encode_symbol(&self, digits: &[u64]) -> usize {
        debug_assert_eq!(digits.len(), self.arity);
        let mut i = 0usize;
        for &d in digits {
            debug_assert!(d < self.p);
            i = i * self.p as usize + d as usize;
        }
        i
    }

    pub fn decode_symbol(&self, mut symbol: usize) -> Vec<u64> {
        let mut digits = vec![0u64; self.arity];
        for i in (0..self.arity).rev() {
            digits[i] = (symbol % self.p as usize) as u64;
            symbol /= self.p as usize;
        }
        digits
    }

    /// Evaluate on an index tuple.
    pub fn run(&self, n: &[u64]) -> Result<L, DfaoError> {
        if n.len() != self.arity {
            return Err(DfaoError::ArityMismatch(n.len(), self.arity));
        }
        let len = n
            .iter()
            .map(|&x| digits_lsd(x, self.p).len())
            .max()
            .unwrap_or(0);
        let digit_vecs: Vec<Vec<u64>> = n.iter().map(|&x| digits_lsd(x, self.p)).collect();
        let mut state = self.initial;
        let mut sym = vec![0u64; self.arity];
        for t in 0..len {
            for (i, dv) in digit_vecs.iter().enumerate() {
                sym[i] = dv.get(t).copied().unwrap_or(0);
            }
            state = self.step(state, self.encode_symbol(&sym));
        }
        Ok(self.states[state].output.clone())
    }

    /// States reachable from the initial state, in BFS order (symbols ascending).
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in &self.states[s].next {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Moore partition refinement. The result is behaviorally equivalent on
    /// every padded input and minimal among automata with that behavior on
    /// all digit strings; states are renumbered by BFS from the initial state.
    pub fn minimize(&self) -> Dfao<L>
    where
        L: std::hash::Hash,
    {
        let reach = self.reachable();
        let nsyms = self.num_symbols();
        // class[s] for reachable s; unreachable states are dropped.
        let mut class: HashMap<usize, usize> = HashMap::new();
        {
            let mut by_output: HashMap<&L, usize> = HashMap::new();
            for &s in &reach {
                let n = by_output.len();
                let c = *by_output.entry(&self.states[s].output).or_insert(n);
                class.insert(s, c);
            }
        }
        loop {
            let mut sig_to_class: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class: HashMap<usize, usize> = HashMap::new();
            for &s in &reach {
                let sig = (
                    class[&s],
                    (0..nsyms).map(|a| class[&self.states[s].next[a]]).collect::<Vec<_>>(),
                );
                let n = sig_to_class.len();
                let c = *sig_to_class.entry(sig).or_insert(n);
                next_class.insert(s, c);
            }
            let stable = sig_to_class.len() == class.values().collect::<std::collections::HashSet<_>>().len();
            class = next_class;
            if stable {
                break;
            }
        }
        // Pick a representative per class and renumber by BFS.
        let mut repr: HashMap<usize, usize> = HashMap::new();
        for &s in &reach {
            repr.entry(class[&s]).or_insert(s);
        }
        let mut new_index: HashMap<usize, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        new_index.insert(class[&self.initial], 0);
        order.push(class[&self.initial]);
        queue.push_back(class[&self.initial]);
        while let Some(c) = queue.pop_front() {
            let s = repr[&c];
            for a in 0..nsyms {
                let tc = class[&self.states[s].next[a]];
                if !new_index.contains_key(&tc) {
                    new_index.insert(tc, order.len());
                    order.push(tc);
                    queue.push_back(tc);
                }
            }
        }
        let states = order
            .iter()
            .map(|&c| {
                let s = repr[&c];
                State {
                    output: self.states[s].output.clone(),
                    next: (0..nsyms)
                        .map(|a| new_index[&class[&self.states[s].next[a]]])
                        .collect(),
                }
            })
            .collect();
        Dfao {
            p: self.p,
            arity: self.arity,
            states,
            initial: 0,
        }
    }

    /// Synchronous product; output of a pair state is `combine(ω1, ω2)`.
    pub fn product<L2: Clone + Eq, L3: Clone + Eq>(
        &self,
        other: &Dfao<L2>,
        combine: impl Fn(&L, &L2) -> L3,
    ) -> Result<Dfao<L3>, DfaoError> {
        if self.p != other.p {
            return Err(DfaoError::BaseMismatch(self.p, other.p));
        }
        if self.arity != other.arity {
            return Err(DfaoError::ArityMismatch(other.arity, self.arity));
        }
        let nsyms = self.num_symbols();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut states: Vec<State<L3>> = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (s1, s2) = pairs[head];
            head += 1;
            let mut next = Vec::with_capacity(nsyms);
            for a in 0..nsyms {
                let t = (self.states[s1].next[a], other.states[s2].next[a]);
                let ti = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                next.push(ti);
            }
            states.push(State {
                output: combine(&self.states[s1].output, &other.states[s2].output),
                next,
            });
        }
        Ok(Dfao {
            p: self.p,
            arity: self.arity,
            states,
            initial: 0,
        })
    }

    /// Decide behavioral equality of two automata as index-tuple → label maps.
    /// Returns `None` when equivalent, otherwise a minimal-length witness
    /// input (ties broken lexicographically on the digit word).
    pub fn equivalent(&self, other: &Dfao<L>) -> Result<Option<Vec<u64>>, DfaoError> {
        if self.p != other.p {
            return Err(DfaoError::BaseMismatch(self.p, other.p));
        }
        if self.arity != other.arity {
            return Err(DfaoError::ArityMismatch(other.arity, self.arity));
        }
        if self.states[self.initial].output != other.states[other.initial].output {
            return Ok(Some(vec![0; self.arity]));
        }
        let nsyms = self.num_symbols();
        // BFS over pair states; a difference is real when it is reached by a
        // word whose final symbol is nonzero (valid padded representations).
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut head = 0;
        while head < pairs.len() {
            let (s1, s2) = pairs[head];
            for a in 0..nsyms {
                let t = (self.states[s1].next[a], other.states[s2].next[a]);
                if a != 0 && self.states[t.0].output != other.states[t.1].output {
                    // Reconstruct the word: path to `head`, then symbol `a`.
                    let mut word = vec![a];
                    let mut cur = head;
                    while let Some((prev, sym)) = parent[cur] {
                        word.push(sym);
                        cur = prev;
                    }
                    word.reverse();
                    return Ok(Some(self.word_to_input(&word)));
                }
                if !index.contains_key(&t) {
                    index.insert(t, pairs.len());
                    pairs.push(t);
                    parent.push(Some((head, a)));
                }
            }
            head += 1;
        }
        Ok(None)
    }

    /// Convert an LSD-first symbol word into the index tuple it represents.
    pub fn word_to_input(&self, word: &[usize]) -> Vec<u64> {
        let mut n = vec![0u64; self.arity];
        for (t, &sym) in word.iter().enumerate() {
            let digits = self.decode_symbol(sym);
            for i in 0..self.arity {
                n[i] += digits[i] * self.p.pow(t as u32);
            }
        }
        n
    }

    /// Map every output through `f`, keeping the transition graph.
    pub fn relabel<L2: Clone + Eq>(&self, f: impl Fn(&L) -> L2) -> Dfao<L2> {
        Dfao {
            p: self.p,
            arity: self.arity,
            states: self
                .states
                .iter()
                .map(|s| State {
                    output: f(&s.output),
                    next: s.next.clone(),
                })
                .collect(),
            initial: self.initial,
        }
    }

    /// Distinct output labels of reachable states (not the declared universe).
    pub fn reachable_labels(&self) -> Vec<L>
    where
        L: Ord,
    {
        let mut labels: Vec<L> = self
            .reachable()
            .into_iter()
            .map(|s| self.states[s].output.clone())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }
}

/// Base-`p` digits of `n`, least significant first; empty for `n = 0`.
pub fn digits_lsd(mut n: u64, p: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    digits
}
