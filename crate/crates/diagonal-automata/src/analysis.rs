//! Number-theoretic conclusions read off from an automaton: which residues
//! are attained, which only finitely often, exact output frequencies, and
//! per-period periodicity verification.
//!
//! "Valid inputs" are digit words whose final (most significant) symbol has a
//! nonzero component; the index 0 (the empty word) is always reported
//! separately, because many fixtures modify the initial term of a sequence.

use crate::dfao::{Dfao, DfaoError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttainmentReport<L> {
    /// Output at the index tuple 0⃗ (the empty word).
    pub zero_input: L,
    /// Labels attained at some valid nonzero index tuple.
    pub attained: Vec<L>,
    /// Complement of `attained` within the declared label universe.
    pub forbidden: Vec<L>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    Infinite,
    /// Complete sorted list of attaining indices (including 0 when the
    /// zero-input output matches).
    Finite(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessReport<L> {
    pub per_label: Vec<(L, Finiteness)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyMode {
    /// Plain natural-density limit exists (every reachable bottom component
    /// of the digit chain is aperiodic).
    Limit,
    /// Some bottom component is periodic; the value reported is the Cesàro
    /// average, and the plain limit is not asserted.
    Cesaro,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyReport<L> {
    pub mode: FrequencyMode,
    pub frequencies: Vec<(L, BigRational)>,
}

/// A certificate that a regular set of indices is infinite: for every `j ≥ 0`
/// the digit word `stem · cycle^j · tail` (LSD-first symbol indices) is in
/// the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpWitness {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
    pub tail: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodVerdict {
    /// `a_n = a_{n+m}` for all `n ≥ threshold`, failing at `threshold − 1`
    /// when the threshold is positive.
    Periodic { threshold: u64 },
    NotPeriodic {
        counterexample: u64,
        witness: PumpWitness,
    },
}

/// Digit statistics of `n` in base `p`: occurrence counts of each digit in
/// the standard representation (no leading zeros), and for `p = 2` the number
/// of maximal constant runs `β(n)`, with `β(0) = 0`.
pub fn digit_stats(n: u64, p: u64) -> (Vec<u64>, Option<u64>) {
    let digits = crate::dfao::digits_lsd(n, p);
    let mut counts = vec![0u64; p as usize];
    for &d in &digits {
        counts[d as usize] += 1;
    }
    let blocks = (p == 2).then(|| {
        let mut b = 0u64;
        let mut prev = None;
        for &d in &digits {
            if prev != Some(d) {
                b += 1;
            }
            prev = Some(d);
        }
        b
    });
    (counts, blocks)
}

/// Labels attained at valid nonzero indices, by graph reachability.
pub fn attained_outputs<L: Clone + Eq + Ord + std::hash::Hash>(
    d: &Dfao<L>,
    universe: &[L],
) -> AttainmentReport<L> {
    let mut attained = Vec::new();
    for s in d.reachable() {
        for a in 1..d.num_symbols() {
            attained.push(d.output(d.step(s, a)).clone());
        }
    }
    attained.sort();
    attained.dedup();
    let forbidden = universe
        .iter()
        .filter(|l| !attained.contains(l))
        .cloned()
        .collect();
    AttainmentReport {
        zero_input: d.output(d.initial()).clone(),
        attained,
        forbidden,
    }
}

/// Nodes of the validity-tracking graph: `state * 2 + flag`, where the flag
/// records whether the last consumed symbol was nonzero.
struct FlagGraph {
    nsyms: usize,
    nodes: usize,
    /// next[node][symbol]
    next: Vec<Vec<usize>>,
    start: usize,
}

impl FlagGraph {
    fn new<L: Clone + Eq>(d: &Dfao<L>) -> Self {
        let nsyms = d.num_symbols();
        let nodes = d.num_states() * 2;
        let mut next = vec![Vec::new(); nodes];
        for s in 0..d.num_states() {
            for flag in 0..2 {
                let row: Vec<usize> = (0..nsyms)
                    .map(|a| d.step(s, a) * 2 + usize::from(a != 0))
                    .collect();
                next[s * 2 + flag] = row;
            }
        }
        FlagGraph {
            nsyms,
            nodes,
            next,
            start: d.initial() * 2,
        }
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.next[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn co_reachable(&self, accept: &[bool]) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.nodes];
        for u in 0..self.nodes {
            for &v in &self.next[u] {
                rev[v].push(u);
            }
        }
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::new();
        for u in 0..self.nodes {
            if accept[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &rev[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// BFS path (symbol word) from `from` to any node satisfying `is_goal`,
    /// restricted to `allowed` nodes; empty word allowed.
    fn path(
        &self,
        from: usize,
        allowed: &[bool],
        is_goal: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if is_goal(u) {
                let mut word = Vec::new();
                let mut cur = u;
                while let Some((par, sym)) = prev[cur] {
                    word.push(sym);
                    cur = par;
                }
                word.reverse();
                return Some(word);
            }
            for (a, &v) in self.next[u].iter().enumerate() {
                if allowed[v] && !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, a));
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Finiteness of the set of valid nonzero indices whose run output satisfies
/// `accept_label`, plus a pump witness when infinite. Arity 1 only.
fn language_finiteness<L: Clone + Eq>(
    d: &Dfao<L>,
    accept_label: impl Fn(&L) -> bool,
) -> Result<Result<Vec<u64>, PumpWitness>, DfaoError> {
    if d.arity() != 1 {
        return Err(DfaoError::ArityUnsupported(d.arity()));
    }
    let g = FlagGraph::new(d);
    let accept: Vec<bool> = (0..g.nodes)
        .map(|u| u % 2 == 1 && accept_label(d.output(u / 2)))
        .collect();
    let reach = g.reachable();
    let co = g.co_reachable(&accept);
    let live: Vec<bool> = (0..g.nodes).map(|u| reach[u] && co[u]).collect();
    // A cycle among live nodes makes the language infinite.
    if let Some(on_cycle) = find_cycle_node(&g, &live) {
        let stem = g.path(g.start, &live, |u| u == on_cycle).expect("live node");
        // A nonempty cycle through `on_cycle` within live nodes.
        let mut cycle = None;
        for (a, &v) in g.next[on_cycle].iter().enumerate() {
            if !live[v] {
                continue;
            }
            if v == on_cycle {
                cycle = Some(vec![a]);
                break;
            }
            if let Some(mut w) = g.path(v, &live, |u| u == on_cycle) {
                let mut full = vec![a];
                full.append(&mut w);
                cycle = Some(full);
                break;
            }
        }
        let cycle = cycle.expect("cycle node has a live cycle");
        let tail = g.path(on_cycle, &live, |u| accept[u]).expect("co-reachable");
        return Ok(Err(PumpWitness { stem, cycle, tail }));
    }
    // Acyclic: enumerate all accepted words by DFS over live nodes.
    let mut values = Vec::new();
    let mut word: Vec<usize> = Vec::new();
    dfs_enumerate(&g, &live, &accept, g.start, &mut word, &mut values, d.p());
    values.sort_unstable();
    values.dedup();
    Ok(Ok(values))
}

fn dfs_enumerate(
    g: &FlagGraph,
    live: &[bool],
    accept: &[bool],
    node: usize,
    word: &mut Vec<usize>,
    values: &mut Vec<u64>,
    p: u64,
) {
    if accept[node] && !word.is_empty() {
        let mut n = 0u64;
        for (t, &sym) in word.iter().enumerate() {
            n += sym as u64 * p.pow(t as u32);
        }
        values.push(n);
    }
    for a in 0..g.nsyms {
        let v = g.next[node][a];
        if live[v] {
            word.push(a);
            dfs_enumerate(g, live, accept, v, word, values, p);
            word.pop();
        }
    }
}

fn find_cycle_node(g: &FlagGraph, live: &[bool]) -> Option<usize> {
    // Iterative DFS cycle detection (colors: 0 unvisited, 1 on stack, 2 done).
    let mut color = vec![0u8; g.nodes];
    for root in 0..g.nodes {
        if !live[root] || color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < g.nsyms {
                let a = *i;
                *i += 1;
                let v = g.next[u][a];
                if !live[v] {
                    continue;
                }
                match color[v] {
                    0 => {
                        color[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => return Some(v),
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// For each label in `universe`: is it attained infinitely often, and if not,
/// at exactly which indices? Index 0 is included when the zero-input output
/// matches. Arity 1 only.
pub fn finitely_attained<L: Clone + Eq + Ord + std::hash::Hash>(
    d: &Dfao<L>,
    universe: &[L],
) -> Result<FinitenessReport<L>, DfaoError> {
    let mut per_label = Vec::new();
    for label in universe {
        let f = match language_finiteness(d, |l| l == label)? {
            Err(_witness) => Finiteness::Infinite,
            Ok(mut values) => {
                if d.output(d.initial()) == label {
                    values.insert(0, 0);
                }
                Finiteness::Finite(values)
            }
        };
        per_label.push((label.clone(), f));
    }
    Ok(FinitenessReport { per_label })
}

/// Exact output frequencies (natural densities of `{n : a_n = label}`),
/// computed structurally from the uniform digit chain: absorption
/// probabilities into bottom strongly connected components, then exact
/// stationary distributions within them.
pub fn output_frequencies<L: Clone + Eq + Ord + std::hash::Hash>(
    d: &Dfao<L>,
    universe: &[L],
) -> FrequencyReport<L> {
    let reach = d.reachable();
    let pos: std::collections::HashMap<usize, usize> =
        reach.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = reach.len();
    let nsyms = d.num_symbols();
    // adjacency with multiplicity over reachable states
    let mut succ = vec![vec![0usize; n]; n];
    for (i, &s) in reach.iter().enumerate() {
        for a in 0..nsyms {
            succ[i][pos[&d.step(s, a)]] += 1;
        }
    }
    let sccs = tarjan_sccs(n, &succ);
    // scc_of[i] = component index; components in reverse topological order
    // from Tarjan, i.e. a component only reaches components with smaller or
    // equal index? Tarjan emits components in reverse topological order
    // (successors first), so edges go from later components to earlier ones.
    let mut scc_of = vec![0usize; n];
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_of[v] = ci;
        }
    }
    let is_bottom: Vec<bool> = sccs
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            comp.iter().all(|&v| {
                (0..n).all(|w| succ[v][w] == 0 || scc_of[w] == ci)
            })
        })
        .collect();
    let ratio = |num: usize| BigRational::new(BigInt::from(num), BigInt::from(nsyms));
    // Absorption probabilities b_C(state) for each bottom SCC C, solved over
    // the transient states.
    let transient: Vec<usize> = (0..n).filter(|&v| !is_bottom[scc_of[v]]).collect();
    let tpos: std::collections::HashMap<usize, usize> =
        transient.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let bottoms: Vec<usize> = (0..sccs.len()).filter(|&c| is_bottom[c]).collect();
    // Solve (I − P_tt) x = P_tb · 1_C for each bottom C: one matrix, many RHS.
    let t = transient.len();
    let mut mat = vec![vec![BigRational::zero(); t]; t];
    for (i, &v) in transient.iter().enumerate() {
        mat[i][i] = BigRational::one();
        for (j, &w) in transient.iter().enumerate() {
            if succ[v][w] > 0 {
                mat[i][j] -= ratio(succ[v][w]);
            }
        }
    }
    let mut rhs_all: Vec<Vec<BigRational>> = Vec::new();
    for &c in &bottoms {
        let rhs: Vec<BigRational> = transient
            .iter()
            .map(|&v| {
                let mut s = BigRational::zero();
                for w in 0..n {
                    if succ[v][w] > 0 && scc_of[w] == c {
                        s += ratio(succ[v][w]);
                    }
                }
                s
            })
            .collect();
        rhs_all.push(rhs);
    }
    let absorb_from_transient = solve_multi(mat, rhs_all);
    let absorb_initial: Vec<BigRational> = bottoms
        .iter()
        .enumerate()
        .map(|(bi, &c)| {
            let init = pos[&d.initial()];
            if scc_of[init] == c {
                BigRational::one()
            } else if let Some(&ti) = tpos.get(&init) {
                absorb_from_transient[bi][ti].clone()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    // Stationary distribution and period of each bottom SCC.
    let mut freq: std::collections::HashMap<&L, BigRational> = std::collections::HashMap::new();
    let mut all_aperiodic = true;
    for (bi, &c) in bottoms.iter().enumerate() {
        if absorb_initial[bi].is_zero() {
            continue;
        }
        let comp = &sccs[c];
        let cpos: std::collections::HashMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = comp.len();
        // π (P − I) = 0 with Σ π = 1: solve transposed system.
        let mut a = vec![vec![BigRational::zero(); k]; k + 1];
        for (j, &v) in comp.iter().enumerate() {
            for &w in comp.iter() {
                if succ[v][w] > 0 {
                    a[cpos[&w]][j] += ratio(succ[v][w]);
                }
            }
            a[j][j] -= BigRational::one();
        }
        for j in 0..k {
            a[k][j] = BigRational::one();
        }
        let mut b = vec![BigRational::zero(); k + 1];
        b[k] = BigRational::one();
        let pi = solve_least_rows(a, b, k);
        if period_of_scc(comp, &succ, &cpos) != 1 {
            all_aperiodic = false;
        }
        for (j, &v) in comp.iter().enumerate() {
            let label = d.output(reach[v]);
            let contribution = &absorb_initial[bi] * &pi[j];
            *freq.entry(label).or_insert_with(BigRational::zero) += contribution;
        }
    }
    let frequencies = universe
        .iter()
        .map(|l| {
            (
                l.clone(),
                freq.get(l).cloned().unwrap_or_else(BigRational::zero),
            )
        })
        .collect();
    FrequencyReport {
        mode: if all_aperiodic {
            FrequencyMode::Limit
        } else {
            FrequencyMode::Cesaro
        },
        frequencies,
    }
}

fn period_of_scc(
    comp: &[usize],
    succ: &[Vec<usize>],
    cpos: &std::collections::HashMap<usize, usize>,
) -> u64 {
    if comp.len() == 1 {
        let v = comp[0];
        return if succ[v][v] > 0 { 1 } else { 0 };
    }
    // BFS levels from an arbitrary root; period = gcd of (d(u) + 1 − d(v))
    // over internal edges u → v.
    let mut dist = vec![i64::MIN; comp.len()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(ui) = queue.pop_front() {
        let u = comp[ui];
        for (w, &cnt) in succ[u].iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if let Some(&wi) = cpos.get(&w) {
                if dist[wi] == i64::MIN {
                    dist[wi] = dist[ui] + 1;
                    queue.push_back(wi);
                }
            }
        }
    }
    let mut g: u64 = 0;
    for (ui, &u) in comp.iter().enumerate() {
        for (w, &cnt) in succ[u].iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if let Some(&wi) = cpos.get(&w) {
                let diff = (dist[ui] + 1 - dist[wi]).unsigned_abs();
                g = num_integer::gcd(g, diff);
            }
        }
    }
    g
}

fn tarjan_sccs(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut sccs = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let mut advanced = false;
            while *ci < n {
                let w = *ci;
                *ci += 1;
                if succ[v][w] == 0 {
                    continue;
                }
                if index[w] == usize::MAX {
                    call.push((w, 0));
                    advanced = true;
                    break;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if advanced {
                continue;
            }
            // finished v
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                sccs.push(comp);
            }
            call.pop();
            if let Some(&mut (u, _)) = call.last_mut() {
                low[u] = low[u].min(low[v]);
            }
        }
    }
    sccs
}

/// Gaussian elimination, one matrix and several right-hand sides.
fn solve_multi(
    mut a: Vec<Vec<BigRational>>,
    mut rhs: Vec<Vec<BigRational>>,
) -> Vec<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("absorption system is nonsingular");
        a.swap(col, pivot);
        for r in &mut rhs {
            r.swap(col, pivot);
        }
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        for r in &mut rhs {
            r[col] = &r[col] * &inv;
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in col..n {
                let v = &a[col][j] * &factor;
                a[row][j] -= v;
            }
            for r in &mut rhs {
                let v = &r[col] * &factor;
                r[row] -= v;
            }
        }
    }
    rhs
}

/// Solve an overdetermined consistent system with `rows ≥ unknowns` by
/// row-reducing; used for the stationary system with its normalization row.
fn solve_least_rows(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
    unknowns: usize,
) -> Vec<BigRational> {
    let rows = a.len();
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, r);
        b.swap(pivot_row, r);
        let inv = a[pivot_row][col].recip();
        for j in 0..unknowns {
            a[pivot_row][j] = &a[pivot_row][j] * &inv;
        }
        b[pivot_row] = &b[pivot_row] * &inv;
        for row in 0..rows {
            if row == pivot_row || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in 0..unknowns {
                let v = &a[pivot_row][j] * &factor;
                a[row][j] -= v;
            }
            let v = &b[pivot_row] * &factor;
            b[row] -= v;
        }
        pivots.push((col, pivot_row));
        pivot_row += 1;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (col, row) in pivots {
        x[col] = b[row].clone();
    }
    x
}

/// Decide `a_n = a_{n+m}` for all large `n` by composing an add-`m`
/// transducer with the automaton and analyzing the difference language.
pub fn verify_period<L: Clone + Eq + Ord + std::hash::Hash>(
    d: &Dfao<L>,
    m: u64,
) -> Result<PeriodVerdict, DfaoError> {
    if d.arity() != 1 {
        return Err(DfaoError::ArityUnsupported(d.arity()));
    }
    assert!(m >= 1, "period must be positive");
    let shifted = shift_automaton(d, m)?;
    let diff = shifted.product(d, |a, b| a != b)?;
    match language_finiteness(&diff, |&x| x)? {
        Ok(mut values) => {
            if *diff.output(diff.initial()) {
                values.insert(0, 0);
            }
            let threshold = values.last().map(|&v| v + 1).unwrap_or(0);
            Ok(PeriodVerdict::Periodic { threshold })
        }
        Err(witness) => {
            // The difference set is infinite and in particular nonempty;
            // scan for its least element.
            let mut n = 0u64;
            let counterexample = loop {
                if diff.run(&[n])? {
                    break n;
                }
                n += 1;
            };
            Ok(PeriodVerdict::NotPeriodic {
                counterexample,
                witness,
            })
        }
    }
}

/// Automaton computing `n ↦ a_{n+m}`: product of `d` with the carry-bounded
/// LSD-first add-`m` transducer. After the digits of `m` are exhausted the
/// carry is 0 or 1; the end-of-input carry flush is folded into each state's
/// output.
pub fn shift_automaton<L: Clone + Eq>(d: &Dfao<L>, m: u64) -> Result<Dfao<L>, DfaoError> {
    if d.arity() != 1 {
        return Err(DfaoError::ArityUnsupported(d.arity()));
    }
    let p = d.p();
    let mdigits = crate::dfao::digits_lsd(m, p);
    let len = mdigits.len();
    // Composed state: (pos ≤ len, carry ∈ {0,1}, q).
    let mut index = std::collections::HashMap::new();
    let mut states_list: Vec<(usize, u64, usize)> = Vec::new();
    let start = (0usize, 0u64, d.initial());
    index.insert(start, 0usize);
    states_list.push(start);
    let mut out_states: Vec<crate::dfao::State<L>> = Vec::new();
    let mut head = 0;
    while head < states_list.len() {
        let (pos, carry, q) = states_list[head];
        head += 1;
        let mut next = Vec::with_capacity(p as usize);
        for a in 0..p {
            let add = mdigits.get(pos).copied().unwrap_or(0) + carry;
            let b = a + add;
            let t = (
                (pos + 1).min(len),
                b / p,
                d.step(q, (b % p) as usize),
            );
            let ti = *index.entry(t).or_insert_with(|| {
                states_list.push(t);
                states_list.len() - 1
            });
            next.push(ti);
        }
        // Output: flush the remaining digits of m plus the carry into d.
        let (mut fpos, mut fcarry, mut fq) = (pos, carry, q);
        while fpos < len || fcarry > 0 {
            let b = mdigits.get(fpos).copied().unwrap_or(0) + fcarry;
            fq = d.step(fq, (b % p) as usize);
            fcarry = b / p;
            fpos = (fpos + 1).min(len.max(fpos + 1));
        }
        out_states.push(crate::dfao::State {
            output: d.output(fq).clone(),
            next,
        });
    }
    Dfao::new(p, 1, out_states, 0)
}

/// `run(d1, n) = run(d2, n)` for every `n ≥ n0` (and also at `n = 0` when
/// `n0 = 0`). Used to compare automata for sequences whose leading terms were
/// modified by a construction. Arity 1 only.
pub fn equivalent_from<L: Clone + Eq + Ord + std::hash::Hash>(
    d1: &Dfao<L>,
    d2: &Dfao<L>,
    n0: u64,
) -> Result<bool, DfaoError> {
    let diff = d1.product(d2, |a, b| a != b)?;
    if n0 == 0 && *diff.output(diff.initial()) {
        return Ok(false);
    }
    match language_finiteness(&diff, |&x| x)? {
        Ok(values) => Ok(values.iter().all(|&v| v < n0)),
        Err(_) => Ok(false),
    }
}
