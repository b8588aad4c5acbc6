//! Deterministic finite automata, right congruences, suffix-expansion
//! censuses, transition monoids and growth of regular languages.

use crate::error::{Error, Result};
use crate::par;
use crate::words::{Alphabet, Sym, Word};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Default cap on census work, counted in (class tuple, letter) extensions.
pub const DEFAULT_CENSUS_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: Vec<bool>,
    /// `delta[q][a]`
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    /// Build and validate totality.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: usize,
        finals: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = states.len();
        let bad = |m: &str| Err(Error::Validation(m.to_string()));
        if initial >= n || finals.len() != n || delta.len() != n {
            return bad("state table sizes disagree");
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&p| p >= n) {
                return bad("transition function is not total");
            }
        }
        Ok(Dfa { alphabet, states, initial, finals, delta })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn run_from(&self, q: usize, w: &[Sym]) -> usize {
        w.iter().fold(q, |p, &a| self.delta[p][a])
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.finals[self.run_from(self.initial, w)]
    }

    /// States reachable from the initial state, in BFS order (letters in
    /// declaration order).
    pub fn reachable_bfs(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for &p in &self.delta[q] {
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
        }
        order
    }

    /// States from which a final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for &p in &self.delta[q] {
                rev[p].push(q);
            }
        }
        let mut mark = self.finals.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| mark[q]).collect();
        while let Some(p) = stack.pop() {
            for &q in &rev[p] {
                if !mark[q] {
                    mark[q] = true;
                    stack.push(q);
                }
            }
        }
        mark
    }

    /// The unique minimal DFA, numbered in BFS order from the initial state.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable_bfs();
        let k = self.alphabet.len();
        // Moore refinement restricted to reachable states.
        let mut block: HashMap<usize, usize> = reach.iter().map(|&q| (q, self.finals[q] as usize)).collect();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = HashMap::new();
            for &q in &reach {
                let sig = (block[&q], (0..k).map(|a| block[&self.delta[q][a]]).collect::<Vec<_>>());
                let len = sigs.len();
                let id = *sigs.entry(sig).or_insert(len);
                next.insert(q, id);
            }
            let before = block.values().copied().collect::<std::collections::HashSet<_>>().len();
            block = next;
            if sigs.len() == before {
                break;
            }
        }
        // Renumber blocks in BFS order.
        let mut id_of_block: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        id_of_block.insert(block[&self.initial], 0);
        rep.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let p = self.delta[q][a];
                let b = block[&p];
                if let std::collections::hash_map::Entry::Vacant(e) = id_of_block.entry(b) {
                    e.insert(rep.len());
                    rep.push(p);
                    queue.push_back(p);
                }
            }
        }
        let delta = rep.iter().map(|&q| (0..k).map(|a| id_of_block[&block[&self.delta[q][a]]]).collect()).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: rep.iter().map(|&q| self.states[q].clone()).collect(),
            initial: 0,
            finals: rep.iter().map(|&q| self.finals[q]).collect(),
            delta,
        }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.finals.iter_mut().for_each(|f| *f = !*f);
        d
    }

    /// Synchronous product; `keep` decides finality from the two components.
    pub fn product(&self, other: &Dfa, keep: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.alphabet, other.alphabet, "product needs equal alphabets");
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            i += 1;
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let t = (self.delta[p][a], other.delta[q][a]);
                let len = pairs.len();
                let id = *index.entry(t).or_insert_with(|| len);
                if id == len {
                    pairs.push(t);
                }
                row.push(id);
            }
            delta.push(row);
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            states: pairs.iter().map(|&(p, q)| format!("{}.{}", self.states[p], other.states[q])).collect(),
            initial: 0,
            finals: pairs.iter().map(|&(p, q)| keep(self.finals[p], other.finals[q])).collect(),
            delta,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.reachable_bfs().iter().any(|&q| self.finals[q])
    }

    pub fn is_universal(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.product(other, |a, b| a != b).is_empty()
    }

    /// A shortest word leading from the initial state to each state (None if unreachable).
    pub fn access_words(&self) -> Vec<Option<Word>> {
        let mut out: Vec<Option<Word>> = vec![None; self.num_states()];
        out[self.initial] = Some(Vec::new());
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let p = self.delta[q][a];
                if out[p].is_none() {
                    let mut w = out[q].clone().unwrap();
                    w.push(a);
                    out[p] = Some(w);
                    queue.push_back(p);
                }
            }
        }
        out
    }

    /// Accepted words of length exactly `n`, lexicographic.
    pub fn accepted_of_len(&self, n: usize) -> Vec<Word> {
        let co = self.coreachable();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Word)> = vec![(self.initial, Vec::new())];
        while let Some((q, w)) = stack.pop() {
            if w.len() == n {
                if self.finals[q] {
                    out.push(w);
                }
                continue;
            }
            for a in (0..self.alphabet.len()).rev() {
                let p = self.delta[q][a];
                if co[p] {
                    let mut x = w.clone();
                    x.push(a);
                    stack.push((p, x));
                }
            }
        }
        out
    }

    /// Number of accepted words of each length `0..=n` (saturating).
    pub fn counts_by_length(&self, n: usize) -> Vec<u64> {
        let mut cur = vec![0u64; self.num_states()];
        cur[self.initial] = 1;
        let mut out = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            out.push((0..cur.len()).filter(|&q| self.finals[q]).fold(0u64, |s, q| s.saturating_add(cur[q])));
            let mut next = vec![0u64; cur.len()];
            for (q, &c) in cur.iter().enumerate() {
                for &p in &self.delta[q] {
                    next[p] = next[p].saturating_add(c);
                }
            }
            cur = next;
        }
        out
    }
}

/// Right congruence of finite index given by its class automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightCongruence {
    pub alphabet: Alphabet,
    /// Always 0: classes are numbered in BFS order from the empty word.
    pub class_of_empty: usize,
    /// `step[c][a]`
    pub step: Vec<Vec<usize>>,
    /// Accept bit per class when the congruence comes from a language.
    pub tag: Option<Vec<bool>>,
}

impl RightCongruence {
    pub fn index(&self) -> usize {
        self.step.len()
    }

    pub fn step_word(&self, c: usize, w: &[Sym]) -> usize {
        w.iter().fold(c, |p, &a| self.step[p][a])
    }

    pub fn class_of(&self, w: &[Sym]) -> usize {
        self.step_word(self.class_of_empty, w)
    }

    /// Length-lexicographically least word of every class.
    pub fn access_words(&self) -> Vec<Word> {
        let mut acc: Vec<Option<Word>> = vec![None; self.index()];
        acc[self.class_of_empty] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([self.class_of_empty]);
        while let Some(c) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let d = self.step[c][a];
                if acc[d].is_none() {
                    let mut w = acc[c].clone().unwrap();
                    w.push(a);
                    acc[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        acc.into_iter().map(|w| w.unwrap_or_default()).collect()
    }

    /// Renumber an arbitrary class automaton in BFS order, dropping
    /// unreachable classes.
    pub fn canonical(alphabet: Alphabet, start: usize, step: &[Vec<usize>], tag: Option<&[bool]>) -> Self {
        let mut id = HashMap::new();
        let mut order = vec![start];
        id.insert(start, 0usize);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for &d in &step[c] {
                if let std::collections::hash_map::Entry::Vacant(e) = id.entry(d) {
                    e.insert(order.len());
                    order.push(d);
                }
            }
        }
        RightCongruence {
            alphabet,
            class_of_empty: 0,
            step: order.iter().map(|&c| step[c].iter().map(|d| id[d]).collect()).collect(),
            tag: tag.map(|t| order.iter().map(|&c| t[c]).collect()),
        }
    }

    /// The intersection `∼ ∩ ∼'`, again a right congruence.
    pub fn intersect(&self, other: &RightCongruence) -> RightCongruence {
        assert_eq!(self.alphabet, other.alphabet);
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.class_of_empty, other.class_of_empty)];
        index.insert(pairs[0], 0);
        let mut step = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            i += 1;
            let mut row = Vec::new();
            for a in 0..k {
                let t = (self.step[p][a], other.step[q][a]);
                let len = pairs.len();
                let id = *index.entry(t).or_insert(len);
                if id == len {
                    pairs.push(t);
                }
                row.push(id);
            }
            step.push(row);
        }
        let tag = match (&self.tag, &other.tag) {
            (Some(a), Some(b)) => Some(pairs.iter().map(|&(p, q)| a[p] && b[q]).collect()),
            _ => None,
        };
        RightCongruence { alphabet: self.alphabet.clone(), class_of_empty: 0, step, tag }
    }

    /// Coarsest right congruence refining both the given partition of
    /// classes (`block[c]`) and the existing structure restricted to it.
    pub fn quotient_by(&self, block: &[usize]) -> RightCongruence {
        let k = self.alphabet.len();
        let mut part: Vec<usize> = block.to_vec();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..self.index())
                .map(|c| {
                    let sig = (part[c], (0..k).map(|a| part[self.step[c][a]]).collect());
                    let len = sigs.len();
                    *sigs.entry(sig).or_insert(len)
                })
                .collect();
            let before = part.iter().collect::<std::collections::HashSet<_>>().len();
            part = next;
            if sigs.len() == before {
                break;
            }
        }
        let nb = part.iter().max().map_or(0, |m| m + 1);
        let mut step = vec![vec![0; k]; nb];
        let mut tag = vec![false; nb];
        for c in 0..self.index() {
            for a in 0..k {
                step[part[c]][a] = part[self.step[c][a]];
            }
            if let Some(t) = &self.tag {
                tag[part[c]] = t[c];
            }
        }
        RightCongruence::canonical(
            self.alphabet.clone(),
            part[self.class_of_empty],
            &step,
            self.tag.as_ref().map(|_| tag.as_slice()),
        )
    }
}

/// Myhill-Nerode congruence of the language of `dfa`.
pub fn nerode_congruence(dfa: &Dfa) -> RightCongruence {
    let m = dfa.minimize();
    RightCongruence {
        alphabet: m.alphabet.clone(),
        class_of_empty: 0,
        step: m.delta.clone(),
        tag: Some(m.finals.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuffixExpansionCensus {
    pub max_len: usize,
    pub counts_per_length: Vec<u64>,
    pub total: u64,
}

/// Classes of the suffix expansion, one sorted layer per length.
///
/// A word `x` is represented by the tuple of classes of its suffixes
/// `x, x[1..], …, x[n-1..]`. Appending `a` maps every entry through the
/// step function and appends the class of `a`, so each layer is obtained
/// from the previous one without touching individual words.
pub fn suffix_expansion_layers(cong: &RightCongruence, n: usize, budget: u64) -> Result<Vec<Vec<Vec<u32>>>> {
    let k = cong.alphabet.len();
    let mut layers: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
    let mut work: u64 = 0;
    for len in 1..=n {
        let prev = layers.last().unwrap();
        work = work.saturating_add(prev.len() as u64 * k as u64);
        if work > budget {
            return Err(Error::BudgetExceeded(format!(
                "suffix-expansion census at length {len} needs more than {budget} extensions"
            )));
        }
        let mut next: Vec<Vec<u32>> = par::flat_map(prev, |t| {
            (0..k)
                .map(|a| {
                    let mut x: Vec<u32> = t.iter().map(|&c| cong.step[c as usize][a] as u32).collect();
                    x.push(cong.step[cong.class_of_empty][a] as u32);
                    x
                })
                .collect()
        });
        next.sort_unstable();
        next.dedup();
        layers.push(next);
    }
    Ok(layers)
}

pub fn suffix_expansion_census(cong: &RightCongruence, n: usize, budget: u64) -> Result<SuffixExpansionCensus> {
    let layers = suffix_expansion_layers(cong, n, budget)?;
    let counts: Vec<u64> = layers.iter().map(|l| l.len() as u64).collect();
    Ok(SuffixExpansionCensus { max_len: n, total: counts.iter().sum(), counts_per_length: counts })
}

/// Transition monoid of a congruence's class automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteMonoid {
    /// Each element as a map on classes; element 0 is the identity.
    pub elements: Vec<Vec<usize>>,
    /// `table[m][n]` is the element of `xy` when `x ↦ m`, `y ↦ n`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub omega: usize,
    /// A shortest word realising each element.
    pub reps: Vec<Word>,
    /// Element of each single letter.
    pub letters: Vec<usize>,
}

impl FiniteMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_of(&self, w: &[Sym]) -> usize {
        w.iter().fold(self.identity, |m, &a| self.table[m][self.letters[a]])
    }

    pub fn pow(&self, m: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.table[acc][m])
    }

    pub fn is_idempotent(&self, m: usize) -> bool {
        self.table[m][m] == m
    }
}

pub fn syntactic_monoid(cong: &RightCongruence) -> FiniteMonoid {
    let n = cong.index();
    let k = cong.alphabet.len();
    let id: Vec<usize> = (0..n).collect();
    let mut elements = vec![id.clone()];
    let mut reps: Vec<Word> = vec![Vec::new()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut i = 0;
    while i < elements.len() {
        for a in 0..k {
            let f: Vec<usize> = elements[i].iter().map(|&c| cong.step[c][a]).collect();
            if !index.contains_key(&f) {
                index.insert(f.clone(), elements.len());
                let mut w = reps[i].clone();
                w.push(a);
                reps.push(w);
                elements.push(f);
            }
        }
        i += 1;
    }
    let m = elements.len();
    let table: Vec<Vec<usize>> = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| {
                    let f: Vec<usize> = elements[x].iter().map(|&c| elements[y][c]).collect();
                    index[&f]
                })
                .collect()
        })
        .collect();
    let letters = (0..k).map(|a| index[&(0..n).map(|c| cong.step[c][a]).collect::<Vec<_>>()]).collect();
    let mut monoid = FiniteMonoid { elements, table, identity: 0, omega: 1, reps, letters };
    // Least idempotent exponent per element, then the least common exponent.
    let mut l = 1usize;
    for x in 0..m {
        let mut e = 1;
        while !monoid.is_idempotent(monoid.pow(x, e)) {
            e += 1;
        }
        l = lcm(l, e);
    }
    monoid.omega = (1..=l)
        .find(|&e| (0..m).all(|x| monoid.is_idempotent(monoid.pow(x, e))))
        .unwrap_or(l);
    monoid
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RegularGrowth {
    /// `L ⊆ w_1* ⋯ w_k*`.
    Polynomial { bounding: Vec<Word> },
    /// `prefix {cycle1, cycle2}* suffix ⊆ L` with a non-commuting pair of cycles at `state`.
    Exponential { state: usize, prefix: Word, cycle1: Word, cycle2: Word, suffix: Word },
}

/// Polynomial vs exponential growth of a regular language.
pub fn regular_growth_class(dfa: &Dfa) -> RegularGrowth {
    let d = dfa.minimize();
    let co = d.coreachable();
    let useful: Vec<usize> = d.reachable_bfs().into_iter().filter(|&q| co[q]).collect();
    let mut node = HashMap::new();
    let mut g: DiGraph<usize, Sym> = DiGraph::new();
    for &q in &useful {
        node.insert(q, g.add_node(q));
    }
    for &q in &useful {
        for (a, &p) in d.delta[q].iter().enumerate() {
            if let Some(&np) = node.get(&p) {
                g.add_edge(node[&q], np, a);
            }
        }
    }
    let mut sccs = tarjan_scc(&g);
    sccs.reverse(); // topological order
    let scc_of: HashMap<usize, usize> =
        sccs.iter().enumerate().flat_map(|(i, c)| c.iter().map(|&n| (g[n], i)).collect::<Vec<_>>()).collect();
    let internal = |q: usize| -> Vec<(Sym, usize)> {
        d.delta[q].iter().enumerate().filter(|(_, p)| scc_of.get(p) == scc_of.get(&q)).map(|(a, &p)| (a, p)).collect()
    };
    let access = d.access_words();
    // Exponential: some SCC has a state with two internal out-edges.
    for comp in &sccs {
        for &n in comp {
            let q = g[n];
            let out = internal(q);
            if out.len() >= 2 {
                let back = |from: usize| path_within(&d, from, q, |p| scc_of.get(&p) == scc_of.get(&q));
                let mut c1 = vec![out[0].0];
                c1.extend(back(out[0].1));
                let mut c2 = vec![out[1].0];
                c2.extend(back(out[1].1));
                let suffix = path_within(&d, q, usize::MAX, |p| co[p]);
                return RegularGrowth::Exponential {
                    state: q,
                    prefix: access[q].clone().unwrap(),
                    cycle1: c1,
                    cycle2: c2,
                    suffix,
                };
            }
        }
    }
    let mut bounding: Vec<Word> = Vec::new();
    for comp in &sccs {
        let states: Vec<usize> = comp.iter().map(|&n| g[n]).collect();
        let cyclic = states.len() > 1 || !internal(states[0]).is_empty();
        if cyclic {
            for &s in &states {
                // The SCC is a simple cycle: follow the unique internal edge.
                let mut rot = Vec::new();
                let mut p = s;
                loop {
                    let (a, nx) = internal(p)[0];
                    rot.push(a);
                    p = nx;
                    if p == s {
                        break;
                    }
                }
                bounding.push(rot.clone());
                for l in 1..rot.len() {
                    bounding.push(rot[..l].to_vec());
                }
            }
        }
        let mut exits: Vec<Sym> = states
            .iter()
            .flat_map(|&q| {
                let (co, scc_of) = (&co, &scc_of);
                d.delta[q].iter().enumerate().filter(move |(_, p)| co[**p] && scc_of[p] != scc_of[&q]).map(|(a, _)| a)
            })
            .collect();
        exits.sort_unstable();
        exits.dedup();
        bounding.extend(exits.into_iter().map(|a| vec![a]));
    }
    bounding.dedup();
    RegularGrowth::Polynomial { bounding }
}

/// Shortest path from `from` to `to` (or to any final state when `to` is
/// `usize::MAX`) through states satisfying `allow`.
fn path_within(d: &Dfa, from: usize, to: usize, allow: impl Fn(usize) -> bool) -> Word {
    let done = |q: usize| if to == usize::MAX { d.finals[q] } else { q == to };
    if done(from) {
        return Vec::new();
    }
    let mut prev: HashMap<usize, (usize, Sym)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, (from, 0));
    while let Some(q) = queue.pop_front() {
        for (a, &p) in d.delta[q].iter().enumerate() {
            if !allow(p) || prev.contains_key(&p) {
                continue;
            }
            prev.insert(p, (q, a));
            if done(p) {
                let mut w = vec![];
                let mut cur = p;
                while cur != from {
                    let (pq, pa) = prev[&cur];
                    w.push(pa);
                    cur = pq;
                }
                w.reverse();
                return w;
            }
            queue.push_back(p);
        }
    }
    Vec::new()
}

/// Test helper: a DFA from a membership predicate over a small alphabet is
/// not constructible in general, so the corpus builders live here.
pub mod examples {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"])
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("q{i}")).collect()
    }

    /// Words containing `a`.
    pub fn contains_a() -> Dfa {
        Dfa::new(ab(), names(2), 0, vec![false, true], vec![vec![1, 0], vec![1, 1]]).unwrap()
    }

    /// Words starting with `a`.
    pub fn first_a() -> Dfa {
        Dfa::new(ab(), names(3), 0, vec![false, true, false], vec![vec![1, 2], vec![1, 1], vec![2, 2]]).unwrap()
    }

    pub fn empty() -> Dfa {
        Dfa::new(ab(), names(1), 0, vec![false], vec![vec![0, 0]]).unwrap()
    }

    pub fn universal() -> Dfa {
        Dfa::new(ab(), names(1), 0, vec![true], vec![vec![0, 0]]).unwrap()
    }

    /// `a*b*`
    pub fn a_star_b_star() -> Dfa {
        Dfa::new(ab(), names(3), 0, vec![true, true, false], vec![vec![0, 1], vec![2, 1], vec![2, 2]]).unwrap()
    }

    /// `(ab + ba)*`
    pub fn ab_or_ba_star() -> Dfa {
        // q0 start/final, q1 after a, q2 after b, q3 sink
        Dfa::new(
            ab(),
            names(4),
            0,
            vec![true, false, false, false],
            vec![vec![1, 2], vec![3, 0], vec![0, 3], vec![3, 3]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::words::{words_of_len, words_upto};
    use proptest::prelude::*;
    use std::collections::HashSet;

    /// Oracle: two words are Nerode-equivalent up to depth `d` if no
    /// continuation of length ≤ d separates them.
    fn residual_signature(dfa: &Dfa, x: &[Sym], d: usize) -> Vec<bool> {
        words_upto(dfa.alphabet.len(), d)
            .iter()
            .map(|z| {
                let mut w = x.to_vec();
                w.extend(z);
                dfa.accepts(&w)
            })
            .collect()
    }

    fn oracle_classes(dfa: &Dfa, len: usize, d: usize) -> usize {
        words_upto(dfa.alphabet.len(), len)
            .iter()
            .map(|x| residual_signature(dfa, x, d))
            .collect::<HashSet<_>>()
            .len()
    }

    /// Oracle census by enumerating every word and its suffix classes.
    fn brute_census(cong: &RightCongruence, n: usize) -> Vec<u64> {
        (0..=n)
            .map(|l| {
                words_of_len(cong.alphabet.len(), l)
                    .iter()
                    .map(|w| (0..w.len()).map(|i| cong.class_of(&w[i..])).collect::<Vec<_>>())
                    .collect::<HashSet<_>>()
                    .len() as u64
            })
            .collect()
    }

    #[test]
    fn minimize_matches_residual_oracle() {
        for d in [contains_a(), first_a(), empty(), universal(), a_star_b_star(), ab_or_ba_star()] {
            assert_eq!(d.minimize().num_states(), oracle_classes(&d, 4, 4));
        }
        assert_eq!(contains_a().minimize().num_states(), 2);
        let e = empty().minimize();
        assert_eq!(e.num_states(), 1);
        assert!(!e.finals[0]);
    }

    #[test]
    fn minimize_is_idempotent_and_language_preserving() {
        // A redundant DFA for "contains a": two copies of the seen state.
        let d = Dfa::new(
            Alphabet::new(["a", "b"]),
            vec!["s".into(), "t".into(), "u".into()],
            0,
            vec![false, true, true],
            vec![vec![1, 0], vec![2, 1], vec![1, 2]],
        )
        .unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        assert!(m.equivalent(&d));
        let mm = m.minimize();
        assert_eq!(mm.delta, m.delta);
        assert_eq!(mm.finals, m.finals);
    }

    #[test]
    fn nerode_examples() {
        assert_eq!(nerode_congruence(&contains_a()).index(), 2);
        assert_eq!(nerode_congruence(&universal()).index(), 1);
        let f = nerode_congruence(&first_a());
        assert_eq!(f.index(), 3);
        // BFS numbering: ε, a, b
        assert_eq!(f.class_of(&[0]), 1);
        assert_eq!(f.class_of(&[1]), 2);
    }

    #[test]
    fn census_examples() {
        let la = nerode_congruence(&contains_a());
        let c = suffix_expansion_census(&la, 2, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(c.counts_per_length, vec![1, 2, 3]);
        assert_eq!(c.total, 6);
        assert_eq!(suffix_expansion_census(&la, 0, 10).unwrap().total, 1);
        let fa = nerode_congruence(&first_a());
        assert_eq!(suffix_expansion_census(&fa, 3, DEFAULT_CENSUS_BUDGET).unwrap().counts_per_length, vec![1, 2, 4, 8]);
    }

    #[test]
    fn census_matches_brute_force() {
        for d in [contains_a(), first_a(), empty(), a_star_b_star(), ab_or_ba_star()] {
            let cong = nerode_congruence(&d);
            let fast = suffix_expansion_census(&cong, 8, DEFAULT_CENSUS_BUDGET).unwrap();
            assert_eq!(fast.counts_per_length, brute_census(&cong, 8));
        }
    }

    #[test]
    fn census_budget_is_enforced() {
        let fa = nerode_congruence(&first_a());
        assert!(matches!(suffix_expansion_census(&fa, 20, 1000), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn census_is_monotone() {
        let cong = nerode_congruence(&ab_or_ba_star());
        let totals: Vec<u64> =
            (0..8).map(|n| suffix_expansion_census(&cong, n, DEFAULT_CENSUS_BUDGET).unwrap().total).collect();
        assert!(totals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn suffix_expansion_is_a_right_congruence() {
        // Over a 3-letter alphabet, exhaustive up to length 6.
        let d = Dfa::new(
            Alphabet::new(["a", "b", "c"]),
            vec!["0".into(), "1".into(), "2".into()],
            0,
            vec![false, false, true],
            vec![vec![1, 0, 0], vec![1, 2, 0], vec![2, 2, 2]],
        )
        .unwrap();
        let cong = nerode_congruence(&d);
        let tuple = |w: &[Sym]| (0..w.len()).map(|i| cong.class_of(&w[i..])).collect::<Vec<_>>();
        for n in 0..=5 {
            let ws = words_of_len(3, n);
            let mut by: HashMap<Vec<usize>, Vec<&Word>> = HashMap::new();
            for w in &ws {
                by.entry(tuple(w)).or_default().push(w);
            }
            for group in by.values() {
                for a in 0..3 {
                    let ext: HashSet<Vec<usize>> = group
                        .iter()
                        .map(|w| {
                            let mut x = (*w).clone();
                            x.push(a);
                            tuple(&x)
                        })
                        .collect();
                    assert_eq!(ext.len(), 1);
                }
            }
        }
    }

    #[test]
    fn right_congruence_law_and_intersection() {
        let a = nerode_congruence(&contains_a());
        let b = nerode_congruence(&first_a());
        let i = a.intersect(&b);
        for cong in [&a, &b, &i] {
            let ws = words_upto(2, 5);
            for x in &ws {
                for y in &ws {
                    if cong.class_of(x) == cong.class_of(y) {
                        for s in 0..2 {
                            let (mut xa, mut ya) = (x.clone(), y.clone());
                            xa.push(s);
                            ya.push(s);
                            assert_eq!(cong.class_of(&xa), cong.class_of(&ya));
                        }
                    }
                }
            }
        }
        // The intersection refines both.
        for x in words_upto(2, 5) {
            for y in words_upto(2, 5) {
                if i.class_of(&x) == i.class_of(&y) {
                    assert_eq!(a.class_of(&x), a.class_of(&y));
                    assert_eq!(b.class_of(&x), b.class_of(&y));
                }
            }
        }
    }

    #[test]
    fn monoid_examples() {
        let la = syntactic_monoid(&nerode_congruence(&contains_a()));
        assert_eq!(la.len(), 2);
        assert_eq!(la.omega, 1);
        let triv = syntactic_monoid(&nerode_congruence(&universal()));
        assert_eq!(triv.len(), 1);
        assert_eq!(triv.omega, 1);
        let fa = syntactic_monoid(&nerode_congruence(&first_a()));
        assert_eq!(fa.len(), 3);
        for m in 0..fa.len() {
            let e = fa.pow(m, fa.omega);
            assert_eq!(fa.table[e][e], e);
        }
    }

    #[test]
    fn monoid_table_is_associative_with_identity() {
        for d in [contains_a(), first_a(), ab_or_ba_star(), a_star_b_star()] {
            let m = syntactic_monoid(&nerode_congruence(&d));
            for x in 0..m.len() {
                assert_eq!(m.table[m.identity][x], x);
                assert_eq!(m.table[x][m.identity], x);
                for y in 0..m.len() {
                    for z in 0..m.len() {
                        assert_eq!(m.table[m.table[x][y]][z], m.table[x][m.table[y][z]]);
                    }
                }
                let e = m.pow(x, m.omega);
                assert!(m.is_idempotent(e));
            }
        }
    }

    #[test]
    fn growth_examples() {
        match regular_growth_class(&a_star_b_star()) {
            RegularGrowth::Polynomial { bounding } => assert_eq!(bounding, vec![vec![0], vec![1]]),
            other => panic!("{other:?}"),
        }
        match regular_growth_class(&universal()) {
            RegularGrowth::Exponential { cycle1, cycle2, .. } => {
                assert_eq!(cycle1, vec![0]);
                assert_eq!(cycle2, vec![1]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(regular_growth_class(&ab_or_ba_star()), RegularGrowth::Exponential { .. }));
        // Census oracle: count at length 2k is 2^k.
        let d = ab_or_ba_star();
        for k in 0..=6 {
            assert_eq!(d.accepted_of_len(2 * k).len(), 1 << k);
        }
    }

    #[test]
    fn growth_verdicts_agree_with_counts() {
        for d in [contains_a(), first_a(), empty(), universal(), a_star_b_star(), ab_or_ba_star()] {
            match regular_growth_class(&d) {
                RegularGrowth::Polynomial { bounding } => {
                    for n in 0..=12 {
                        for w in d.accepted_of_len(n) {
                            assert!(crate::words::in_bounded_product(&w, &bounding), "{w:?} escapes {bounding:?}");
                        }
                    }
                }
                RegularGrowth::Exponential { prefix, cycle1, cycle2, suffix, .. } => {
                    assert_ne!(
                        crate::words::power(&cycle1, cycle2.len()),
                        crate::words::power(&cycle2, cycle1.len())
                    );
                    for mid in crate::words::products_exact(&cycle1, &cycle2, 4) {
                        let mut w = prefix.clone();
                        w.extend(mid);
                        w.extend(&suffix);
                        assert!(d.accepts(&w));
                    }
                    let per = d.counts_by_length(24);
                    for n in 0..=8 {
                        assert_eq!(per[n], d.accepted_of_len(n).len() as u64);
                    }
                    let counts: Vec<u64> = per
                        .iter()
                        .scan(0, |acc, &c| {
                            *acc += c;
                            Some(*acc)
                        })
                        .collect();
                    assert_eq!(crate::growth::growth_verdict(&counts).kind, crate::growth::GrowthKind::Exponential);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn minimize_preserves_language(table in proptest::collection::vec((0usize..4, 0usize..4), 4), fin in proptest::collection::vec(any::<bool>(), 4)) {
            let delta: Vec<Vec<usize>> = table.iter().map(|&(x, y)| vec![x, y]).collect();
            let d = Dfa::new(Alphabet::new(["a", "b"]), (0..4).map(|i| i.to_string()).collect(), 0, fin, delta).unwrap();
            let m = d.minimize();
            prop_assert!(m.equivalent(&d));
            prop_assert!(m.num_states() <= d.num_states());
            for w in words_upto(2, 5) {
                prop_assert_eq!(m.accepts(&w), d.accepts(&w));
            }
        }
    }
}
