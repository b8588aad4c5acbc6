//! Real-time transducers reading left-to-right or right-to-left.
//!
//! A run over `a_1⋯a_n` is a state sequence `p_0 a_1 p_1 ⋯ a_n p_n` and every
//! transition is stored as `(p_{i-1}, a_i, y_i, p_i)` regardless of the
//! reading direction. A left machine starts in an initial `p_0`, ends in an
//! accepting `p_n` and outputs `y_1⋯y_n o(p_n)`. A right machine starts at
//! its entry `p_n`, ends in an accepting `p_0` and outputs `o(p_0) y_1⋯y_n`.

use crate::error::{Error, Result};
use crate::nfa::Nfa;
use crate::regular::{nerode_congruence, Dfa, RightCongruence};
use crate::words::{common_suffix_len, words_upto, Alphabet, Sym, Word};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transducer {
    pub direction: Direction,
    pub states: Vec<String>,
    pub input: Alphabet,
    pub output: Alphabet,
    /// Initial states of a left machine, entry states of a right machine.
    pub initial: Vec<usize>,
    pub accept: Vec<bool>,
    pub trans: Vec<(usize, Sym, Word, usize)>,
    /// Terminal output of accepting states; `None` means ε.
    pub term: Vec<Option<Word>>,
}

/// `‖x, y‖ = |x| + |y| − 2|x ∧ y|` with `∧` the longest common suffix.
pub fn suffix_distance(x: &[Sym], y: &[Sym]) -> usize {
    x.len() + y.len() - 2 * common_suffix_len(x, y)
}

fn rev(w: &[Sym]) -> Word {
    w.iter().rev().copied().collect()
}

fn lcp_len(ws: &[&Word]) -> usize {
    let Some(first) = ws.first() else { return 0 };
    let mut n = first.len();
    for w in &ws[1..] {
        n = n.min(w.iter().zip(first.iter()).take_while(|(a, b)| a == b).count());
    }
    n
}

impl Transducer {
    #[allow(clippy::too_many_arguments)]
    pub fn from_written(
        direction: Direction,
        states: Vec<String>,
        input: Alphabet,
        output: Alphabet,
        initial: Vec<usize>,
        accept: Vec<bool>,
        trans: Vec<(usize, Sym, Word, usize)>,
        term: Vec<Option<Word>>,
    ) -> Result<Self> {
        let n = states.len();
        let bad = |m: &str| Err(Error::Validation(m.to_string()));
        if accept.len() != n || term.len() != n {
            return bad("accept and term must have one entry per state");
        }
        if initial.iter().any(|&q| q >= n) {
            return bad("initial state out of range");
        }
        for (p, a, y, q) in &trans {
            if *p >= n || *q >= n || *a >= input.len() || y.iter().any(|&b| b >= output.len()) {
                return bad("transition out of range");
            }
        }
        for (q, o) in term.iter().enumerate() {
            if o.is_some() && !accept[q] {
                return bad("terminal output on a non-accepting state");
            }
        }
        Ok(Transducer { direction, states, input, output, initial, accept, trans, term })
    }

    /// Transitions as written in the text format.
    pub fn written(&self) -> Vec<(usize, Sym, Word, usize)> {
        self.trans.clone()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn out_term(&self, q: usize) -> &[Sym] {
        self.term[q].as_deref().unwrap_or(&[])
    }

    /// Largest output of a single transition or terminal.
    pub fn iml(&self) -> usize {
        let t = self.trans.iter().map(|(_, _, y, _)| y.len()).max().unwrap_or(0);
        let o = (0..self.num_states()).filter(|&q| self.accept[q]).map(|q| self.out_term(q).len()).max().unwrap_or(0);
        t.max(o)
    }

    /// The identity on `alpha*`.
    pub fn identity(alpha: &Alphabet) -> Transducer {
        let trans = (0..alpha.len()).map(|a| (0, a, vec![a], 0)).collect();
        Transducer {
            direction: Direction::Left,
            states: vec!["q".into()],
            input: alpha.clone(),
            output: alpha.clone(),
            initial: vec![0],
            accept: vec![true],
            trans,
            term: vec![None],
        }
    }

    /// Left machine whose runs start in fresh copies of `starts`, each
    /// emitting its prefix word before anything else.
    fn left_with_prefixes(
        &self,
        starts: &[(usize, Word)],
        trans: &[(usize, Sym, Word, usize)],
        accept: &[bool],
        term: &[Option<Word>],
    ) -> Transducer {
        let n = self.num_states();
        let mut states = self.states.clone();
        let mut acc = accept.to_vec();
        let mut tm = term.to_vec();
        let mut all = trans.to_vec();
        let mut initial = Vec::new();
        for (i, (p, pre)) in starts.iter().enumerate() {
            let s = n + i;
            states.push(format!("{}^{i}", self.states[*p]));
            initial.push(s);
            acc.push(accept[*p]);
            tm.push(if accept[*p] {
                let mut o = pre.clone();
                o.extend(term[*p].clone().unwrap_or_default());
                Some(o)
            } else {
                None
            });
            for (q, a, y, r) in trans.iter().filter(|t| t.0 == *p) {
                let _ = q;
                let mut y2 = pre.clone();
                y2.extend(y);
                all.push((s, *a, y2, *r));
            }
        }
        Transducer {
            direction: Direction::Left,
            states,
            input: self.input.clone(),
            output: self.output.clone(),
            initial,
            accept: acc,
            trans: all,
            term: tm,
        }
        .trim()
    }

    /// An equivalent left-reading machine.
    pub fn to_left(&self) -> Transducer {
        match self.direction {
            Direction::Left => self.clone(),
            Direction::Right => {
                let starts: Vec<(usize, Word)> =
                    (0..self.num_states()).filter(|&q| self.accept[q]).map(|q| (q, self.out_term(q).to_vec())).collect();
                let mut accept = vec![false; self.num_states()];
                for &q in &self.initial {
                    accept[q] = true;
                }
                let term = vec![None; self.num_states()];
                self.left_with_prefixes(&starts, &self.trans, &accept, &term)
            }
        }
    }

    /// The transduction `{(x^R, y^R)}` as a left machine.
    pub fn reverse(&self) -> Transducer {
        let l = self.to_left();
        let starts: Vec<(usize, Word)> = (0..l.num_states()).filter(|&q| l.accept[q]).map(|q| (q, rev(l.out_term(q)))).collect();
        let trans: Vec<_> = l.trans.iter().map(|(p, a, y, q)| (*q, *a, rev(y), *p)).collect();
        let mut accept = vec![false; l.num_states()];
        for &q in &l.initial {
            accept[q] = true;
        }
        l.left_with_prefixes(&starts, &trans, &accept, &vec![None; l.num_states()])
    }

    /// Keep only states on some accepting run (initial states are kept).
    pub fn trim(&self) -> Transducer {
        let n = self.num_states();
        let (start, end): (Vec<usize>, Vec<usize>) = match self.direction {
            Direction::Left => (self.initial.clone(), (0..n).filter(|&q| self.accept[q]).collect()),
            Direction::Right => ((0..n).filter(|&q| self.accept[q]).collect(), self.initial.clone()),
        };
        let fwd = closure(n, &start, |p| self.trans.iter().filter(move |t| t.0 == p).map(|t| t.3));
        let bwd = closure(n, &end, |p| self.trans.iter().filter(move |t| t.3 == p).map(|t| t.0));
        let keep: Vec<bool> = (0..n).map(|q| fwd[q] && bwd[q]).collect();
        let mut map = vec![usize::MAX; n];
        let mut states = Vec::new();
        for q in 0..n {
            if keep[q] || self.initial.contains(&q) {
                map[q] = states.len();
                states.push(self.states[q].clone());
            }
        }
        Transducer {
            direction: self.direction,
            initial: self.initial.iter().map(|&q| map[q]).collect(),
            accept: (0..n).filter(|&q| map[q] != usize::MAX).map(|q| self.accept[q] && keep[q]).collect(),
            term: (0..n).filter(|&q| map[q] != usize::MAX).map(|q| if keep[q] { self.term[q].clone() } else { None }).collect(),
            trans: self
                .trans
                .iter()
                .filter(|t| keep[t.0] && keep[t.3])
                .map(|(p, a, y, q)| (map[*p], *a, y.clone(), map[*q]))
                .collect(),
            states,
            input: self.input.clone(),
            output: self.output.clone(),
        }
    }

    /// Output of the unique accepting run, `None` if there is none.
    pub fn evaluate(&self, x: &[Sym]) -> Result<Option<Word>> {
        let l = self.to_left();
        // count capped at 2, plus the output of some run
        let mut cur: BTreeMap<usize, (u8, Word)> = BTreeMap::new();
        for &q in &l.initial {
            let e = cur.entry(q).or_insert((0, Vec::new()));
            e.0 = (e.0 + 1).min(2);
        }
        for &a in x {
            let mut next: BTreeMap<usize, (u8, Word)> = BTreeMap::new();
            for (&p, (c, w)) in &cur {
                for (_, _, y, q) in l.trans.iter().filter(|t| t.0 == p && t.1 == a) {
                    let e = next.entry(*q).or_insert_with(|| (0, [w.as_slice(), y.as_slice()].concat()));
                    e.0 = (e.0 + c).min(2);
                }
            }
            cur = next;
        }
        let mut count = 0;
        let mut out = None;
        for (&q, (c, w)) in &cur {
            if l.accept[q] {
                count += *c as usize;
                if out.is_none() {
                    out = Some([w.as_slice(), l.out_term(q)].concat());
                }
            }
        }
        if count >= 2 {
            return Err(Error::Ambiguous(x.to_vec()));
        }
        Ok(out)
    }

    /// Outputs of all accepting runs (as a set).
    pub fn outputs(&self, x: &[Sym]) -> BTreeSet<Word> {
        let l = self.to_left();
        let mut cur: BTreeSet<(usize, Word)> = l.initial.iter().map(|&q| (q, Vec::new())).collect();
        for &a in x {
            let mut next = BTreeSet::new();
            for (p, w) in &cur {
                for (_, _, y, q) in l.trans.iter().filter(|t| t.0 == *p && t.1 == a) {
                    next.insert((*q, [w.as_slice(), y.as_slice()].concat()));
                }
            }
            cur = next;
        }
        cur.into_iter().filter(|(q, _)| l.accept[*q]).map(|(q, w)| [w.as_slice(), l.out_term(q)].concat()).collect()
    }

    /// `None` if every input has at most one accepting run; otherwise a
    /// shortest input with two.
    pub fn check_unambiguous(&self) -> Option<Word> {
        let l = self.to_left();
        let n = l.num_states();
        // (p, q, differ) with BFS parents for witness recovery
        let key = |p: usize, q: usize, d: bool| (p * n + q) * 2 + d as usize;
        let mut parent: HashMap<usize, Option<(usize, Sym)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for (i, &p) in l.initial.iter().enumerate() {
            for (j, &q) in l.initial.iter().enumerate() {
                let k = key(p, q, i != j);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(k) {
                    e.insert(None);
                    queue.push_back((p, q, i != j));
                }
            }
        }
        while let Some((p, q, d)) = queue.pop_front() {
            if d && l.accept[p] && l.accept[q] {
                let mut w = Vec::new();
                let mut k = key(p, q, d);
                while let Some(Some((prev, a))) = parent.get(&k) {
                    w.push(*a);
                    k = *prev;
                }
                w.reverse();
                return Some(w);
            }
            for (i, t1) in l.trans.iter().enumerate().filter(|(_, t)| t.0 == p) {
                for (j, t2) in l.trans.iter().enumerate().filter(|(_, t)| t.0 == q && t.1 == t1.1) {
                    let d2 = d || i != j;
                    let k = key(t1.3, t2.3, d2);
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(k) {
                        e.insert(Some((key(p, q, d), t1.1)));
                        queue.push_back((t1.3, t2.3, d2));
                    }
                }
            }
        }
        None
    }

    /// NFA over the input alphabet accepting the domain.
    pub fn domain_nfa(&self) -> Nfa {
        let l = self.to_left();
        let mut m = Nfa::new(l.input.clone(), l.num_states());
        m.initial = l.initial.clone();
        m.finals = l.accept.clone();
        for (p, a, _, q) in &l.trans {
            m.add(*p, *a, *q);
        }
        m
    }

    pub fn domain_dfa(&self) -> Dfa {
        self.domain_nfa().determinize().minimize()
    }

    /// Restriction of the transduction to inputs in `L(k)`.
    pub fn restrict_domain(&self, k: &Dfa) -> Transducer {
        let l = self.to_left();
        let m = k.num_states();
        let id = |p: usize, d: usize| p * m + d;
        let mut states = Vec::new();
        let mut accept = Vec::new();
        let mut term = Vec::new();
        for p in 0..l.num_states() {
            for d in 0..m {
                states.push(format!("{}.{}", l.states[p], k.states[d]));
                let acc = l.accept[p] && k.finals[d];
                accept.push(acc);
                term.push(if acc { l.term[p].clone() } else { None });
            }
        }
        let mut trans = Vec::new();
        for (p, a, y, q) in &l.trans {
            for d in 0..m {
                trans.push((id(*p, d), *a, y.clone(), id(*q, k.delta[d][*a])));
            }
        }
        Transducer {
            direction: Direction::Left,
            states,
            input: l.input.clone(),
            output: l.output.clone(),
            initial: l.initial.iter().map(|&p| id(p, k.initial)).collect(),
            accept,
            trans,
            term,
        }
        .trim()
    }

    /// Minimal DFA for the image of `L(k)`.
    pub fn image_of(&self, k: &Dfa) -> Dfa {
        let r = self.restrict_domain(k);
        let mut m = Nfa::new(r.output.clone(), r.num_states());
        m.initial = r.initial.clone();
        let fin = m.add_state();
        m.finals[fin] = true;
        let path = |m: &mut Nfa, from: usize, y: &[Sym], to: usize| {
            if y.is_empty() {
                m.add_eps(from, to);
                return;
            }
            let mut cur = from;
            for (i, &b) in y.iter().enumerate() {
                let next = if i + 1 == y.len() { to } else { m.add_state() };
                m.add(cur, b, next);
                cur = next;
            }
        };
        for (p, _, y, q) in &r.trans {
            path(&mut m, *p, y, *q);
        }
        for q in 0..r.num_states() {
            if r.accept[q] {
                path(&mut m, q, r.out_term(q), fin);
            }
        }
        m.determinize().minimize()
    }

    /// `next ∘ self`: feed the output of `self` into `next`.
    pub fn compose(&self, next: &Transducer) -> Transducer {
        let a = self.to_left();
        let b = next.to_left();
        assert_eq!(a.output, b.input, "output alphabet must match the next input alphabet");
        let nb = b.num_states();
        let id = |p: usize, q: usize| p * nb + q;
        // runs of b over a word: all (end state, output)
        let runs_b = |q: usize, y: &[Sym]| -> BTreeSet<(usize, Word)> {
            let mut cur = BTreeSet::from([(q, Vec::new())]);
            for &c in y {
                let mut nx = BTreeSet::new();
                for (p, w) in &cur {
                    for (_, _, z, r) in b.trans.iter().filter(|t| t.0 == *p && t.1 == c) {
                        nx.insert((*r, [w.as_slice(), z.as_slice()].concat()));
                    }
                }
                cur = nx;
            }
            cur
        };
        let mut states = Vec::new();
        let mut accept = Vec::new();
        let mut term = Vec::new();
        for p in 0..a.num_states() {
            for q in 0..nb {
                states.push(format!("{}.{}", a.states[p], b.states[q]));
                let mut t = None;
                if a.accept[p] {
                    // First accepting continuation in state order; for a functional
                    // composite all of them agree.
                    t = runs_b(q, a.out_term(p))
                        .into_iter()
                        .find(|(r, _)| b.accept[*r])
                        .map(|(r, z)| [z.as_slice(), b.out_term(r)].concat());
                }
                accept.push(t.is_some());
                term.push(t);
            }
        }
        let mut trans = Vec::new();
        for (p, c, y, p2) in &a.trans {
            for q in 0..nb {
                for (r, z) in runs_b(q, y) {
                    trans.push((id(*p, q), *c, z, id(*p2, r)));
                }
            }
        }
        let mut initial = Vec::new();
        for &p in &a.initial {
            for &q in &b.initial {
                initial.push(id(p, q));
            }
        }
        Transducer { direction: Direction::Left, states, input: a.input.clone(), output: b.output.clone(), initial, accept, trans, term }
            .trim()
    }

    pub fn to_relation(&self) -> Relation {
        let l = self.to_left();
        let n = l.num_states();
        let fin = n;
        let mut edges: Vec<(usize, Word, Word, usize)> =
            l.trans.iter().map(|(p, a, y, q)| (*p, vec![*a], y.clone(), *q)).collect();
        for q in 0..n {
            if l.accept[q] {
                edges.push((q, Vec::new(), l.out_term(q).to_vec(), fin));
            }
        }
        Relation {
            input: l.input.clone(),
            output: l.output.clone(),
            num_states: n + 1,
            initial: l.initial.clone(),
            finals: (0..=n).map(|q| q == fin).collect(),
            edges,
        }
    }

    /// Transitions grouped by their right state, for right-to-left scans.
    pub fn by_right(&self) -> Vec<Vec<(usize, Sym, Word)>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for (p, a, y, q) in &self.trans {
            out[*q].push((*p, *a, y.clone()));
        }
        out
    }

    /// Deterministic on `(right state, letter)` with a single entry.
    pub fn is_right_subsequential(&self) -> bool {
        if self.direction != Direction::Right || self.initial.len() != 1 {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.trans.iter().all(|(_, a, _, q)| seen.insert((*q, *a)))
    }
}

fn closure<I: Iterator<Item = usize>>(n: usize, start: &[usize], next: impl Fn(usize) -> I) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(p) = stack.pop() {
        for q in next(p) {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

/// A rational relation given by a finite automaton with word-pair edges.
/// Used where real-time machines are not closed (inverses).
#[derive(Clone, Debug)]
pub struct Relation {
    pub input: Alphabet,
    pub output: Alphabet,
    pub num_states: usize,
    pub initial: Vec<usize>,
    pub finals: Vec<bool>,
    pub edges: Vec<(usize, Word, Word, usize)>,
}

impl Relation {
    pub fn inverse(&self) -> Relation {
        Relation {
            input: self.output.clone(),
            output: self.input.clone(),
            num_states: self.num_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            edges: self.edges.iter().map(|(p, x, y, q)| (*p, y.clone(), x.clone(), *q)).collect(),
        }
    }

    pub fn reverse(&self) -> Relation {
        let mut r = self.clone();
        let start = r.num_states;
        r.num_states += 1;
        r.edges = self.edges.iter().map(|(p, x, y, q)| (*q, rev(x), rev(y), *p)).collect();
        for q in 0..self.num_states {
            if self.finals[q] {
                r.edges.push((start, Vec::new(), Vec::new(), q));
            }
        }
        r.finals = vec![false; r.num_states];
        for &q in &self.initial {
            r.finals[q] = true;
        }
        r.initial = vec![start];
        r
    }

    /// Whether `(x, y)` belongs to the relation.
    pub fn contains(&self, x: &[Sym], y: &[Sym]) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<(usize, usize, usize)> = self.initial.iter().map(|&q| (q, 0, 0)).collect();
        while let Some(s) = stack.pop() {
            if !seen.insert(s) {
                continue;
            }
            let (q, i, j) = s;
            if i == x.len() && j == y.len() && self.finals[q] {
                return true;
            }
            for (p, u, v, r) in &self.edges {
                if *p == q && x[i..].starts_with(u) && y[j..].starts_with(v) {
                    stack.push((*r, i + u.len(), j + v.len()));
                }
            }
        }
        false
    }
}

/// Annotates the `i`-th letter with the class of the strict prefix before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LookaheadAnnotation {
    pub congruence: RightCongruence,
}

impl LookaheadAnnotation {
    pub fn classes(&self) -> usize {
        self.congruence.index()
    }

    /// Index of the annotated letter `(a, class)`.
    pub fn letter(&self, a: Sym, class: usize) -> Sym {
        a * self.classes() + class
    }

    pub fn split(&self, b: Sym) -> (Sym, usize) {
        (b / self.classes(), b % self.classes())
    }

    pub fn alphabet(&self) -> Alphabet {
        let k = self.classes();
        Alphabet {
            names: (0..self.congruence.alphabet.len() * k)
                .map(|b| format!("{}|{}", self.congruence.alphabet.name(b / k), b % k))
                .collect(),
        }
    }

    pub fn annotate(&self, x: &[Sym]) -> Vec<(Sym, usize)> {
        let mut c = self.congruence.class_of_empty;
        x.iter()
            .map(|&a| {
                let r = (a, c);
                c = self.congruence.step[c][a];
                r
            })
            .collect()
    }

    pub fn annotate_letters(&self, x: &[Sym]) -> Word {
        self.annotate(x).into_iter().map(|(a, c)| self.letter(a, c)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyBounds {
    /// Bound on `|x|`, `|y|`, `|z|` in pump triples.
    pub max_len: usize,
    /// Pumping exponent; distances are compared at `k` and `2k`.
    pub k: usize,
    /// Maximal number of evaluated triples.
    pub budget: usize,
}

impl Default for AdjacencyBounds {
    fn default() -> Self {
        AdjacencyBounds { max_len: 3, k: 8, budget: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Adjacency {
    Adjacent,
    NotAdjacent { x: Word, y: Word, z: Word },
    Inconclusive,
}

/// Semi-decide adjacency of two partial functions over `alpha`.
///
/// A pump triple `(x, y, z)` witnesses non-adjacency when `x y^j z` is in
/// both domains for `j ∈ {0, k, 2k}` and the distance grows by at least
/// `k/2` between `k` and `2k`. Without a witness the functions are reported
/// adjacent when no sampled distance exceeds `cap`.
pub fn adjacency_test(
    alpha: &Alphabet,
    t1: &dyn Fn(&[Sym]) -> Option<Word>,
    t2: &dyn Fn(&[Sym]) -> Option<Word>,
    cap: usize,
    b: AdjacencyBounds,
) -> Adjacency {
    let dist = |w: &[Sym]| -> Option<usize> { Some(suffix_distance(&t1(w)?, &t2(w)?)) };
    let short = words_upto(alpha.len(), b.max_len);
    let mut spent = 0usize;
    let mut max_seen = 0usize;
    for w in words_upto(alpha.len(), 2 * b.max_len) {
        if let Some(d) = dist(&w) {
            max_seen = max_seen.max(d);
        }
    }
    for y in short.iter().filter(|y| !y.is_empty()) {
        for x in &short {
            for z in &short {
                spent += 1;
                if spent > b.budget {
                    return Adjacency::Inconclusive;
                }
                let pump = |j: usize| {
                    let mut w = x.clone();
                    for _ in 0..j {
                        w.extend(y);
                    }
                    w.extend(z);
                    w
                };
                let (Some(d0), Some(d1), Some(d2)) = (dist(&pump(0)), dist(&pump(b.k)), dist(&pump(2 * b.k))) else {
                    continue;
                };
                max_seen = max_seen.max(d0);
                if d2 >= d1 + b.k.div_ceil(2) && d1 >= d0 + b.k.div_ceil(2) {
                    return Adjacency::NotAdjacent { x: x.clone(), y: y.clone(), z: z.clone() };
                }
            }
        }
    }
    if max_seen <= cap {
        Adjacency::Adjacent
    } else {
        Adjacency::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LookaheadBounds {
    pub adjacency: AdjacencyBounds,
    pub state_cap: usize,
    pub validation_depth: usize,
}

impl Default for LookaheadBounds {
    fn default() -> Self {
        LookaheadBounds { adjacency: AdjacencyBounds::default(), state_cap: 10_000, validation_depth: 8 }
    }
}

/// A look-ahead congruence together with a right-subsequential machine
/// computing the function on annotated words.
#[derive(Clone, Debug, Serialize)]
pub struct Lookahead {
    pub annotation: LookaheadAnnotation,
    pub machine: Transducer,
    /// Pairs of classes whose adjacency could not be decided within bounds.
    pub inconclusive: Vec<(usize, usize)>,
}

impl Lookahead {
    /// Lookahead with a single class around an already right-subsequential machine.
    pub fn trivial(b: &Transducer) -> Result<Lookahead> {
        if !b.is_right_subsequential() {
            return Err(Error::Precondition("machine is not right-subsequential".into()));
        }
        let cong = RightCongruence {
            alphabet: b.input.clone(),
            class_of_empty: 0,
            step: vec![vec![0; b.input.len()]],
            tag: None,
        };
        let annotation = LookaheadAnnotation { congruence: cong };
        let mut machine = b.clone();
        machine.input = annotation.alphabet();
        Ok(Lookahead { annotation, machine, inconclusive: Vec::new() })
    }

    pub fn evaluate(&self, x: &[Sym]) -> Result<Option<Word>> {
        self.machine.evaluate(&self.annotation.annotate_letters(x))
    }

    /// Projection of the machine to the plain input alphabet.
    pub fn projection(&self) -> Transducer {
        let mut a = self.machine.clone();
        a.input = self.annotation.congruence.alphabet.clone();
        a.trans = self.machine.trans.iter().map(|(p, b, y, q)| (*p, self.annotation.split(*b).0, y.clone(), *q)).collect();
        a
    }

    /// The key of each projected transition: its annotation class.
    pub fn key_of(&self, t: usize) -> usize {
        self.annotation.split(self.machine.trans[t].1).1
    }
}

/// Derive a look-ahead congruence and a right-subsequential machine for `t`.
///
/// The candidate congruence starts from the reachable-subset automaton of
/// `t` and merges classes that have the same domain residual and adjacent
/// residual functions. The machine is obtained by a right-to-left subset
/// construction with delayed outputs, pruned by the annotation. Both are
/// validated against `t` on all inputs up to the validation depth.
pub fn derive_lookahead(t: &Transducer, bounds: LookaheadBounds) -> Result<Lookahead> {
    if let Some(w) = t.check_unambiguous() {
        return Err(Error::Ambiguous(w));
    }
    let l = t.to_left().trim();
    let k = l.input.len();
    // Reachable subsets in BFS order.
    let start: BTreeSet<usize> = l.initial.iter().copied().collect();
    let mut sets = vec![start.clone()];
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start, 0)]);
    let mut step: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let next: BTreeSet<usize> = l.trans.iter().filter(|tr| tr.1 == a && sets[i].contains(&tr.0)).map(|tr| tr.3).collect();
            let len = sets.len();
            let id = *index.entry(next.clone()).or_insert(len);
            if id == len {
                sets.push(next);
                if sets.len() > bounds.state_cap {
                    return Err(Error::BudgetExceeded("look-ahead subset construction".into()));
                }
            }
            row.push(id);
        }
        step.push(row);
        i += 1;
    }
    let subset = RightCongruence { alphabet: l.input.clone(), class_of_empty: 0, step, tag: None };
    let reps = subset.access_words();
    let dom = nerode_congruence(&t.domain_dfa());
    let dom_class: Vec<usize> = reps.iter().map(|u| dom.class_of(u)).collect();
    // Union-find over adjacent classes.
    let n = subset.index();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let cap = 2 * l.iml().max(1) * (l.num_states() + 1) * (reps.iter().map(|r| r.len()).max().unwrap_or(0) + 1);
    let mut inconclusive = Vec::new();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            if dom_class[c1] != dom_class[c2] || find(&mut parent, c1) == find(&mut parent, c2) {
                continue;
            }
            let (u1, u2) = (&reps[c1], &reps[c2]);
            let f1 = |w: &[Sym]| l.evaluate(&[u1.as_slice(), w].concat()).ok().flatten();
            let f2 = |w: &[Sym]| l.evaluate(&[u2.as_slice(), w].concat()).ok().flatten();
            match adjacency_test(&l.input, &f1, &f2, cap, bounds.adjacency) {
                Adjacency::Adjacent => {
                    let (a, b) = (find(&mut parent, c1), find(&mut parent, c2));
                    parent[a.max(b)] = a.min(b);
                }
                Adjacency::NotAdjacent { .. } => {}
                Adjacency::Inconclusive => inconclusive.push((c1, c2)),
            }
        }
    }
    let block: Vec<usize> = (0..n).map(|c| find(&mut parent, c)).collect();
    let cong = subset.quotient_by(&block);
    // reach[r] = states reachable by some prefix in class r
    let mut reach = vec![BTreeSet::new(); cong.index()];
    for (c, u) in reps.iter().enumerate() {
        reach[cong.class_of(u)].extend(sets[c].iter().copied());
    }
    let annotation = LookaheadAnnotation { congruence: cong };
    let machine = right_determinize(&l, &annotation, &reach, bounds.state_cap)?;
    let la = Lookahead { annotation, machine, inconclusive };
    for x in words_upto(k, bounds.validation_depth) {
        let want = t.evaluate(&x)?;
        let got = la.evaluate(&x)?;
        if want != got {
            return Err(Error::Validation(format!("look-ahead machine differs on input {x:?}")));
        }
    }
    Ok(la)
}

type Branches = BTreeSet<(usize, Word)>;

fn right_determinize(l: &Transducer, ann: &LookaheadAnnotation, reach: &[BTreeSet<usize>], cap: usize) -> Result<Transducer> {
    let cong = &ann.congruence;
    // Delays are kept in reversed output orientation.
    let s0: Branches = (0..l.num_states()).filter(|&q| l.accept[q]).map(|q| (q, rev(l.out_term(q)))).collect();
    let mut states = vec![s0.clone()];
    let mut index: HashMap<Branches, usize> = HashMap::from([(s0, 0)]);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..cong.alphabet.len() {
            for r in 0..cong.index() {
                let c = cong.step[r][a];
                let mut next: Branches = BTreeSet::new();
                for (p, w) in &states[i] {
                    if !reach[c].contains(p) {
                        continue;
                    }
                    for (p2, _, y, _) in l.trans.iter().filter(|tr| tr.3 == *p && tr.1 == a) {
                        if reach[r].contains(p2) {
                            let mut w2 = w.clone();
                            w2.extend(y.iter().rev());
                            next.insert((*p2, w2));
                        }
                    }
                }
                if next.is_empty() {
                    continue;
                }
                let ws: Vec<&Word> = next.iter().map(|(_, w)| w).collect();
                let e = lcp_len(&ws);
                let emitted: Word = ws[0][..e].to_vec();
                let next: Branches = next.into_iter().map(|(p, w)| (p, w[e..].to_vec())).collect();
                let len = states.len();
                let id = *index.entry(next.clone()).or_insert(len);
                if id == len {
                    states.push(next);
                    if states.len() > cap {
                        return Err(Error::BudgetExceeded("right-to-left determinization".into()));
                    }
                }
                trans.push((id, ann.letter(a, r), rev(&emitted), i));
            }
        }
        i += 1;
    }
    let mut accept = Vec::new();
    let mut term = Vec::new();
    for s in &states {
        let outs: BTreeSet<&Word> = s.iter().filter(|(p, _)| l.initial.contains(p)).map(|(_, w)| w).collect();
        if outs.len() > 1 {
            return Err(Error::Validation("transducer is not functional".into()));
        }
        accept.push(!outs.is_empty());
        term.push(outs.into_iter().next().map(|w| rev(w)));
    }
    Ok(Transducer {
        direction: Direction::Right,
        states: (0..states.len()).map(|i| format!("b{i}")).collect(),
        input: ann.alphabet(),
        output: l.output.clone(),
        initial: vec![0],
        accept,
        trans,
        term,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Transducer;
    use crate::text::parse_transducer;

    pub fn leftblock() -> Transducer {
        parse_transducer(include_str!("../../../corpus/leftblock.tdc")).unwrap()
    }
    pub fn identity() -> Transducer {
        parse_transducer(include_str!("../../../corpus/id.tdc")).unwrap()
    }
    pub fn trailblock() -> Transducer {
        parse_transducer(include_str!("../../../corpus/trailblock.tdc")).unwrap()
    }
}
