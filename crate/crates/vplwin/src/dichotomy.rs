//! Critical tuples, fooling schemes, well-behavedness of right machines and
//! the logarithmic tree encoding of suffix outputs.
//!
//! Right machines are read from the right: a transition `(p, a, y, q)` moves
//! from `q` to `p` on `a`. A run "from `q`" on `w` starts in `q` at the right
//! end of `w`.

use crate::bits::{width, BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::par;
use crate::regular::{syntactic_monoid, FiniteMonoid, RightCongruence};
use crate::transducer::{adjacency_test, suffix_distance, Adjacency, AdjacencyBounds, Direction, Lookahead, Transducer};
use crate::words::{is_suffix, power, products_exact, products_upto, words_upto, Sym, Word};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalTuple {
    pub u2: Word,
    pub v2: Word,
    pub u: Word,
    pub v: Word,
}

impl CriticalTuple {
    pub fn well_formed(&self) -> bool {
        self.u2.len() == self.v2.len() && !self.u2.is_empty() && is_suffix(&self.u2, &self.u) && is_suffix(&self.v2, &self.v)
    }
}

/// Exact check: the pair graph over the meta-letters `u`, `v` started at
/// `([u2], [v2])` never reaches the diagonal.
pub fn verify_critical_tuple(cong: &RightCongruence, ct: &CriticalTuple) -> bool {
    if !ct.well_formed() {
        return false;
    }
    let n = cong.index();
    let mu: Vec<usize> = (0..n).map(|c| cong.step_word(c, &ct.u)).collect();
    let mv: Vec<usize> = (0..n).map(|c| cong.step_word(c, &ct.v)).collect();
    pair_graph_avoids_diagonal(n, (cong.class_of(&ct.u2), cong.class_of(&ct.v2)), &mu, &mv)
}

fn pair_graph_avoids_diagonal(n: usize, start: (usize, usize), mu: &[usize], mv: &[usize]) -> bool {
    let mut seen = vec![false; n * n];
    let mut stack = vec![start];
    seen[start.0 * n + start.1] = true;
    while let Some((p, q)) = stack.pop() {
        if p == q {
            return false;
        }
        for m in [mu, mv] {
            let next = (m[p], m[q]);
            if !seen[next.0 * n + next.1] {
                seen[next.0 * n + next.1] = true;
                stack.push(next);
            }
        }
    }
    true
}

/// Replace `(u, v)` by `u′ = (v^ω u^ω)^ω` and `u′ v^ω`, after which `u′`
/// absorbs every `{u′, v′}`-prefix behind `u2` and `v2`.
pub fn normalize_critical_tuple(cong: &RightCongruence, monoid: &FiniteMonoid, ct: &CriticalTuple) -> Result<CriticalTuple> {
    let w = monoid.omega;
    let vu = [power(&ct.v, w), power(&ct.u, w)].concat();
    let u1 = power(&vu, w);
    let v1 = [u1.as_slice(), &power(&ct.v, w)].concat();
    let out = CriticalTuple { u2: ct.u2.clone(), v2: ct.v2.clone(), u: u1, v: v1 };
    let (cu, cv) = (cong.class_of(&out.u2), cong.class_of(&out.v2));
    let eu = monoid.element_of(&out.u);
    let ev = monoid.element_of(&out.v);
    for k in 0..=3 {
        for mid in products_exact(&[0], &[1], k) {
            let m = mid.iter().fold(monoid.identity, |m, &i| monoid.table[m][if i == 0 { eu } else { ev }]);
            let m = monoid.table[m][eu];
            for c in [cu, cv] {
                if monoid.elements[m][c] != monoid.elements[eu][c] {
                    return Err(Error::Validation("normalized tuple violates absorption".into()));
                }
            }
        }
    }
    if !verify_critical_tuple(cong, &out) {
        return Err(Error::Validation("normalized tuple is no longer critical".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CriticalSearch {
    Found { tuple: CriticalTuple, normalized: CriticalTuple },
    /// Nothing up to the bound; not a proof of absence.
    NoneBounded { bound: usize },
}

pub fn default_search_bound(cong: &RightCongruence) -> usize {
    2 * cong.index() * cong.index()
}

/// Bounded search in canonical order: `|u2| = |v2|` ascending, then `u2`,
/// `v2`, `u1`, `v1` length-lexicographically with `|u1|, |v1| ≤ bound`.
///
/// Criticality only depends on the classes of `u2`, `v2` and the monoid
/// elements of `u`, `v`, so `u2` ranges over one word per (class, element)
/// key per length and `u1`, `v1` over the monoid's shortest representatives.
pub fn search_critical_tuple(cong: &RightCongruence, bound: usize) -> Result<CriticalSearch> {
    let monoid = syntactic_monoid(cong);
    let k = cong.alphabet.len();
    let ext: Vec<(usize, &Word)> = monoid.reps.iter().enumerate().filter(|(_, w)| w.len() <= bound).collect();
    let n = cong.index();
    // layer of the current length: key (class, element) -> least word
    let mut layer: BTreeMap<(usize, usize), Word> = BTreeMap::from([((cong.class_of_empty, monoid.identity), Vec::new())]);
    for _len in 1..=bound {
        let mut next: BTreeMap<(usize, usize), Word> = BTreeMap::new();
        for w in layer.values() {
            for a in 0..k {
                let mut x = w.clone();
                x.push(a);
                let key = (cong.class_of(&x), monoid.element_of(&x));
                let e = next.entry(key).or_insert_with(|| x.clone());
                if llex_less(&x, e) {
                    *e = x;
                }
            }
        }
        layer = next;
        let mut words: Vec<&Word> = layer.values().collect();
        words.sort();
        for (i, u2) in words.iter().enumerate() {
            for v2 in &words[i + 1..] {
                let (cu, cv) = (cong.class_of(u2), cong.class_of(v2));
                if cu == cv {
                    continue;
                }
                let (eu2, ev2) = (monoid.element_of(u2), monoid.element_of(v2));
                for &(x, xw) in &ext {
                    let mu = &monoid.elements[monoid.table[x][eu2]];
                    for &(y, yw) in &ext {
                        let mv = &monoid.elements[monoid.table[y][ev2]];
                        if pair_graph_avoids_diagonal(n, (cu, cv), mu, mv) {
                            let tuple = CriticalTuple {
                                u2: (*u2).clone(),
                                v2: (*v2).clone(),
                                u: [xw.as_slice(), u2].concat(),
                                v: [yw.as_slice(), v2].concat(),
                            };
                            let normalized = normalize_critical_tuple(cong, &monoid, &tuple)?;
                            return Ok(CriticalSearch::Found { tuple, normalized });
                        }
                    }
                }
            }
        }
    }
    Ok(CriticalSearch::NoneBounded { bound })
}

fn llex_less(a: &[Sym], b: &[Sym]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// `(u2, v2, u, v, Z)` with `Z` given as `n ↦ z_n`. A single entry is used
/// for every `n`; otherwise `z_n` is the entry with the least index `≥ n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoolingScheme {
    pub u2: Word,
    pub v2: Word,
    pub u: Word,
    pub v: Word,
    pub z: Vec<(usize, Word)>,
}

impl FoolingScheme {
    pub fn z_for(&self, n: usize) -> Option<&Word> {
        if self.z.len() == 1 {
            return Some(&self.z[0].1);
        }
        self.z.iter().filter(|(i, _)| *i >= n).min_by_key(|(i, _)| *i).map(|(_, w)| w)
    }

    pub fn is_suffix_code(&self) -> bool {
        !is_suffix(&self.u, &self.v) && !is_suffix(&self.v, &self.u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FoolingBounds {
    pub n_max: usize,
    /// `|z_n| ≤ slope · (n + 1)`.
    pub slope: usize,
}

impl Default for FoolingBounds {
    fn default() -> Self {
        FoolingBounds { n_max: 6, slope: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoolingReport {
    /// `|ĉt(u2 {u,v}^n z_n)|` for `n = 0..=n_max`.
    pub distinct: Vec<usize>,
}

fn suffix_tuple(t: &dyn Fn(&[Sym]) -> Option<Word>, x: &[Sym]) -> Vec<Option<Word>> {
    (0..=x.len()).map(|i| t(&x[i..])).collect()
}

pub fn verify_fooling_scheme(t: &dyn Fn(&[Sym]) -> Option<Word>, fs: &FoolingScheme, b: FoolingBounds) -> Result<FoolingReport> {
    let bad = |m: String| Err(Error::Validation(m));
    if fs.u2.len() != fs.v2.len() || !is_suffix(&fs.u2, &fs.u) || !is_suffix(&fs.v2, &fs.v) {
        return bad("u2, v2 must be equal-length suffixes of u, v".into());
    }
    if !fs.is_suffix_code() {
        return bad("{u, v} is not a suffix code".into());
    }
    let mut distinct = Vec::new();
    for n in 0..=b.n_max {
        let Some(z) = fs.z_for(n) else {
            return bad(format!("no z for n = {n}"));
        };
        if z.len() > b.slope * (n + 1) {
            return bad(format!("|z_{n}| = {} exceeds the linear cap", z.len()));
        }
        for w in products_upto(&fs.u, &fs.v, n) {
            let x = [fs.u2.as_slice(), &w, z].concat();
            let y = [fs.v2.as_slice(), &w, z].concat();
            match (t(&x), t(&y)) {
                (Some(a), Some(b)) if a == b => return bad(format!("equal outputs at n = {n} for w = {w:?}")),
                (Some(_), Some(_)) => {}
                _ => return bad(format!("outside the domain at n = {n} for w = {w:?}")),
            }
        }
        let tuples: HashSet<Vec<Option<Word>>> =
            products_exact(&fs.u, &fs.v, n).iter().map(|w| suffix_tuple(t, &[fs.u2.as_slice(), w, z].concat())).collect();
        if tuples.len() < 1 << n {
            return bad(format!("only {} distinct suffix tuples at n = {n}", tuples.len()));
        }
        distinct.push(tuples.len());
    }
    Ok(FoolingReport { distinct })
}

/// Per `n`: the bounded estimate of `N` and the distance reached by `z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Slack {
    pub n: usize,
    pub big_n: usize,
    pub distance: usize,
}

/// Scheme `(u2, v2, u, v, u·Z)` from a normalized critical tuple of the
/// look-ahead congruence of `t`. `z_n` is pumped from a non-adjacency triple
/// of `z ↦ t(u2 u z)` and `z ↦ t(v2 u z)` until the distance reaches
/// `2N + 1`, where `N` bounds how far `{u,v}^{≤n}` moves the outputs.
pub fn fooling_from_critical_tuple(
    sigma: &crate::words::Alphabet,
    t: &dyn Fn(&[Sym]) -> Option<Word>,
    ct: &CriticalTuple,
    b: FoolingBounds,
    adj: AdjacencyBounds,
) -> Result<(FoolingScheme, Vec<Slack>)> {
    let pre = |x: &[Sym], z: &[Sym]| [x, &ct.u, z].concat();
    let f1 = |z: &[Sym]| t(&pre(&ct.u2, z));
    let f2 = |z: &[Sym]| t(&pre(&ct.v2, z));
    let Adjacency::NotAdjacent { x, y, z } = adjacency_test(sigma, &f1, &f2, 0, adj) else {
        return Err(Error::BudgetExceeded("no pump triple separating the two continuations".into()));
    };
    let pumped = |j: usize| [x.as_slice(), &power(&y, j), &z].concat();
    let probes: Vec<Word> = words_upto(sigma.len(), 2).into_iter().chain((0..=4).map(pumped)).collect();
    let mut entries = Vec::new();
    let mut slack = Vec::new();
    for n in 0..=b.n_max {
        let mut big_n = 0;
        for w in products_upto(&ct.u, &ct.v, n) {
            for x2 in [&ct.u2, &ct.v2] {
                for zz in &probes {
                    let a = t(&[x2.as_slice(), &ct.u, zz].concat());
                    let c = t(&[x2.as_slice(), &w, &ct.u, zz].concat());
                    if let (Some(a), Some(c)) = (a, c) {
                        big_n = big_n.max(suffix_distance(&a, &c));
                    }
                }
            }
        }
        let limit = b.slope * (n + 1);
        let mut found = None;
        for j in 0.. {
            let zn = pumped(j);
            if zn.len() + ct.u.len() > limit {
                break;
            }
            if let (Some(a), Some(c)) = (f1(&zn), f2(&zn)) {
                let d = suffix_distance(&a, &c);
                if d > 2 * big_n {
                    found = Some((zn, d));
                    break;
                }
            }
        }
        let Some((zn, d)) = found else {
            return Err(Error::BudgetExceeded(format!("no z_{n} within the linear cap")));
        };
        slack.push(Slack { n, big_n, distance: d });
        entries.push((n, [ct.u.as_slice(), &zn].concat()));
    }
    let fs = FoolingScheme { u2: ct.u2.clone(), v2: ct.v2.clone(), u: ct.u.clone(), v: ct.v.clone(), z: entries };
    verify_fooling_scheme(t, &fs, b)?;
    Ok((fs, slack))
}

/// The five runs of a failure of well-behavedness: accepting runs on `u2`
/// and `v2` from `p` with distinct outputs, loops `u1 u2` and `v1 v2` on
/// `p`, and `s` leading from the entry to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonWellBehaved {
    pub p: usize,
    pub u2: Word,
    pub v2: Word,
    pub u1: Word,
    pub v1: Word,
    pub s: Word,
    pub out_u: Word,
    pub out_v: Word,
}

impl NonWellBehaved {
    pub fn scheme(&self) -> FoolingScheme {
        FoolingScheme {
            u2: self.u2.clone(),
            v2: self.v2.clone(),
            u: [self.u1.as_slice(), &self.u2].concat(),
            v: [self.v1.as_slice(), &self.v2].concat(),
            z: vec![(0, self.s.clone())],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WellBehaved {
    /// No divergence among guarded runs up to `checked` letters.
    Bounded { checked: usize },
    Not(NonWellBehaved),
    /// Configuration budget ran out before the window was covered.
    Suspected { reached: usize },
}

/// Structure of a right machine: reversed adjacency and SCCs.
#[derive(Clone, Debug)]
pub struct RightView<'a> {
    pub m: &'a Transducer,
    /// `back[q]`: transitions that read a letter from `q`.
    pub back: Vec<Vec<usize>>,
    pub scc: Vec<usize>,
}

impl<'a> RightView<'a> {
    pub fn new(m: &'a Transducer) -> Result<Self> {
        if m.direction != Direction::Right {
            return Err(Error::Precondition("a right machine is required".into()));
        }
        let n = m.num_states();
        let mut back = vec![Vec::new(); n];
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for (i, (p, _, _, q)) in m.trans.iter().enumerate() {
            back[*q].push(i);
            g.add_edge(nodes[*q], nodes[*p], ());
        }
        let mut scc = vec![0; n];
        for (i, comp) in tarjan_scc(&g).into_iter().enumerate() {
            for v in comp {
                scc[v.index()] = i;
            }
        }
        Ok(RightView { m, back, scc })
    }

    fn letter(&self, t: usize, strip: &dyn Fn(Sym) -> Sym) -> Sym {
        strip(self.m.trans[t].1)
    }

    /// States a run from `q` on `w` can end in while staying in `q`'s SCC.
    fn inside(&self, q: usize, w: &[Sym], strip: &dyn Fn(Sym) -> Sym) -> Vec<usize> {
        let mut cur = vec![q];
        for &a in w.iter().rev() {
            let mut next: Vec<usize> = cur
                .iter()
                .flat_map(|&s| self.back[s].iter())
                .filter(|&&t| self.letter(t, strip) == a && self.scc[self.m.trans[t].0] == self.scc[q])
                .map(|&t| self.m.trans[t].0)
                .collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur
    }

    pub fn guarded(&self, q: usize, w: &[Sym], strip: &dyn Fn(Sym) -> Sym) -> bool {
        !self.inside(q, w, strip).is_empty()
    }

    /// All runs from `q` on `w`, as transition indices aligned with `w`.
    pub fn runs(&self, q: usize, w: &[Sym], strip: &dyn Fn(Sym) -> Sym) -> Vec<Vec<usize>> {
        let mut out = vec![(q, Vec::new())];
        for &a in w.iter().rev() {
            let mut next = Vec::new();
            for (s, run) in &out {
                for &t in &self.back[*s] {
                    if self.letter(t, strip) == a {
                        let mut r = vec![t];
                        r.extend_from_slice(run);
                        next.push((self.m.trans[t].0, r));
                    }
                }
            }
            out = next;
        }
        out.into_iter().map(|(_, r)| r).collect()
    }

    /// A word read from `from` to `to`, shortest first.
    fn path(&self, from: usize, to: usize, strip: &dyn Fn(Sym) -> Sym) -> Option<Word> {
        let mut prev: HashMap<usize, (usize, Sym)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(s) = queue.pop_front() {
            if s == to {
                let mut w = Vec::new();
                let mut c = s;
                while c != from {
                    let (p, a) = prev[&c];
                    w.push(a);
                    c = p;
                }
                return Some(w);
            }
            for &t in &self.back[s] {
                let p = self.m.trans[t].0;
                if seen.insert(p) {
                    prev.insert(p, (s, self.letter(t, strip)));
                    queue.push_back(p);
                }
            }
        }
        None
    }
}

fn plain(a: Sym) -> Sym {
    a
}

/// Search pairs of guarded accepting runs of equal length from a common
/// state with different outputs, up to `window` letters.
pub fn well_behaved_check(a: &Transducer, window: usize, budget: usize) -> Result<WellBehaved> {
    let view = RightView::new(a)?;
    let n = a.num_states();
    if n > 64 {
        return Err(Error::BudgetExceeded("well-behavedness check supports at most 64 states".into()));
    }
    let results: Vec<std::result::Result<Option<(usize, Word, Word, Word, Word)>, usize>> =
        par::map_range(n, |p| divergence_from(&view, p, window, budget));
    let mut reached = usize::MAX;
    for (p, r) in results.into_iter().enumerate() {
        match r {
            Ok(Some((_, u2, v2, ou, ov))) => {
                let loop_back = |w: &[Sym]| -> Option<Word> {
                    let q = *view.inside(p, w, &plain).first()?;
                    view.path(q, p, &plain)
                };
                let (Some(u1), Some(v1)) = (loop_back(&u2), loop_back(&v2)) else {
                    return Err(Error::Validation("guarded run does not return to its SCC".into()));
                };
                let s = a.initial.iter().find_map(|&e| view.path(e, p, &plain));
                let Some(s) = s else { continue };
                return Ok(WellBehaved::Not(NonWellBehaved { p, u2, v2, u1, v1, s, out_u: ou, out_v: ov }));
            }
            Ok(None) => {}
            Err(len) => reached = reached.min(len),
        }
    }
    if reached != usize::MAX {
        return Ok(WellBehaved::Suspected { reached });
    }
    Ok(WellBehaved::Bounded { checked: window })
}

type Divergence = (usize, Word, Word, Word, Word);

fn divergence_from(view: &RightView, p: usize, window: usize, budget: usize) -> std::result::Result<Option<Divergence>, usize> {
    let a = view.m;
    let members: Vec<usize> = (0..a.num_states()).filter(|&q| view.scc[q] == view.scc[p]).collect();
    let bit = |q: usize| 1u64 << members.iter().position(|&m| m == q).unwrap();
    // (state, guarded-set, out) -> word
    let mut layer: HashMap<(usize, u64, Word), Word> = HashMap::from([((p, bit(p), Vec::new()), Vec::new())]);
    for len in 0..=window {
        let mut seen: BTreeMap<Word, Word> = BTreeMap::new();
        for ((q, _, out), w) in &layer {
            if a.accept[*q] {
                let full = [a.out_term(*q), out].concat();
                seen.entry(full).or_insert_with(|| w.clone());
                if seen.len() > 1 {
                    let mut it = seen.into_iter();
                    let (ou, u2) = it.next().unwrap();
                    let (ov, v2) = it.next().unwrap();
                    return Ok(Some((len, u2, v2, ou, ov)));
                }
            }
        }
        if len == window {
            break;
        }
        let mut next: HashMap<(usize, u64, Word), Word> = HashMap::new();
        for ((q, s, out), w) in &layer {
            for &t in &view.back[*q] {
                let (p2, x, y, _) = &a.trans[t];
                let mut s2 = 0u64;
                for (i, &m) in members.iter().enumerate() {
                    if s & (1 << i) != 0 {
                        for &t2 in &view.back[m] {
                            let (r, x2, _, _) = &a.trans[t2];
                            if x2 == x && view.scc[*r] == view.scc[p] {
                                s2 |= bit(*r);
                            }
                        }
                    }
                }
                if s2 == 0 {
                    continue;
                }
                let mut w2 = vec![*x];
                w2.extend_from_slice(w);
                next.entry((*p2, s2, [y.as_slice(), out].concat())).or_insert(w2);
            }
        }
        if next.len() > budget {
            return Err(len);
        }
        layer = next;
    }
    Ok(None)
}

/// Default divergence window `iml · |Q|²`, at least 8.
pub fn default_window(a: &Transducer) -> usize {
    (a.iml().max(1) * a.num_states() * a.num_states()).max(8)
}

/// Guarded factorization `π = π_0 π_1 ⋯ π_m` of a run on `w` from `q`,
/// returned as cut positions `0 ≤ c_1 ≤ ⋯ ≤ c_m < |w|` where `π_i` covers
/// `w[c_i..c_{i+1}]` (with `c_0 = 0`, `c_{m+1} = |w|`).
pub fn guarded_factorization(view: &RightView, w: &[Sym], run: &[usize]) -> Vec<usize> {
    let m = view.m;
    let mut end = w.len();
    let mut cuts = Vec::new();
    loop {
        let q = if end == w.len() { run_start(m, run, w.len()) } else { m.trans[run[end]].0 };
        let unguarded = (1..=end).find(|&l| !view.guarded(q, &w[end - l..end], &plain));
        match unguarded {
            Some(l) => {
                end -= l;
                cuts.push(end);
            }
            None => break,
        }
    }
    cuts.reverse();
    cuts
}

fn run_start(m: &Transducer, run: &[usize], len: usize) -> usize {
    if len == 0 {
        m.initial[0]
    } else {
        m.trans[run[len - 1]].3
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WindowTree {
    /// The word is guarded by the state.
    Leaf { state: usize, len: usize },
    Node {
        state: usize,
        len: usize,
        /// Length of the shortest unguarded suffix `v`.
        cut: usize,
        /// Class of every suffix of the remaining prefix `u`, by length.
        classes: Vec<usize>,
        edges: Vec<TreeEdge>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub key: usize,
    pub out: Word,
    pub child: WindowTree,
}

impl WindowTree {
    pub fn height(&self) -> usize {
        match self {
            WindowTree::Leaf { .. } => 0,
            WindowTree::Node { edges, .. } => 1 + edges.iter().map(|e| e.child.height()).max().unwrap_or(0),
        }
    }
}

/// Encoder and decoder for the suffix-output trees of a look-ahead machine.
pub struct TreeCodec<'a> {
    pub la: &'a Lookahead,
    view: RightView<'a>,
    /// Output of guarded accepting runs by start state and length.
    guarded_out: RefCell<HashMap<usize, Vec<Option<Word>>>>,
}

impl<'a> TreeCodec<'a> {
    /// Checks well-behavedness of the projection and the bounded absence of
    /// critical tuples in the congruence.
    pub fn new(la: &'a Lookahead) -> Result<Self> {
        let a = la.projection();
        match well_behaved_check(&a, default_window(&a), 100_000)? {
            WellBehaved::Bounded { .. } => {}
            _ => return Err(Error::Precondition("machine is not well-behaved".into())),
        }
        let cong = &la.annotation.congruence;
        if let CriticalSearch::Found { .. } = search_critical_tuple(cong, default_search_bound(cong))? {
            return Err(Error::Precondition("look-ahead congruence has a critical tuple".into()));
        }
        let view = RightView::new(&la.machine)?;
        Ok(TreeCodec { la, view, guarded_out: RefCell::new(HashMap::new()) })
    }

    fn strip(&self) -> impl Fn(Sym) -> Sym + '_ {
        move |b| self.la.annotation.split(b).0
    }

    pub fn encode(&self, q: usize, w: &[Sym]) -> WindowTree {
        let strip = self.strip();
        let unguarded = (1..=w.len()).find(|&l| !self.view.guarded(q, &w[w.len() - l..], &strip));
        let Some(cut) = unguarded else {
            return WindowTree::Leaf { state: q, len: w.len() };
        };
        let (u, v) = w.split_at(w.len() - cut);
        let cong = &self.la.annotation.congruence;
        let classes = (0..=u.len()).map(|l| cong.class_of(&u[u.len() - l..])).collect();
        let m = self.view.m;
        let edges = self
            .view
            .runs(q, v, &strip)
            .into_iter()
            .map(|run| TreeEdge {
                key: self.la.key_of(run[0]),
                out: run.iter().flat_map(|&t| m.trans[t].2.iter().copied()).collect(),
                child: self.encode(m.trans[run[0]].0, u),
            })
            .collect();
        WindowTree::Node { state: q, len: w.len(), cut, classes, edges }
    }

    /// `out_F` of the accepting run on the suffix of length `len`.
    pub fn decode(&self, tree: &WindowTree, len: usize) -> Option<Word> {
        match tree {
            WindowTree::Leaf { state, .. } => self.guarded_output(*state, len),
            WindowTree::Node { state, cut, classes, edges, .. } => {
                if len < *cut {
                    return self.guarded_output(*state, len);
                }
                let key = classes[len - cut];
                edges.iter().filter(|e| e.key == key).find_map(|e| {
                    let rest = self.decode(&e.child, len - cut)?;
                    Some([rest, e.out.clone()].concat())
                })
            }
        }
    }

    fn guarded_output(&self, q: usize, len: usize) -> Option<Word> {
        let mut cache = self.guarded_out.borrow_mut();
        let table = cache.entry(q).or_default();
        if table.len() <= len {
            *table = self.guarded_table(q, len.max(2 * table.len()));
        }
        table[len].clone()
    }

    fn guarded_table(&self, p: usize, max: usize) -> Vec<Option<Word>> {
        let m = self.view.m;
        let strip = self.strip();
        let members: Vec<usize> = (0..m.num_states()).filter(|&q| self.view.scc[q] == self.view.scc[p]).collect();
        let idx: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut layer: HashMap<(usize, Vec<bool>), Word> = HashMap::new();
        let mut start = vec![false; members.len()];
        start[idx[&p]] = true;
        layer.insert((p, start), Vec::new());
        let mut out = Vec::with_capacity(max + 1);
        for len in 0..=max {
            let hit = layer.iter().filter(|((q, _), _)| m.accept[*q]).map(|((q, _), o)| [m.out_term(*q), o].concat()).min();
            out.push(hit);
            if len == max {
                break;
            }
            let mut next = HashMap::new();
            for ((q, s), o) in &layer {
                for &t in &self.view.back[*q] {
                    let (p2, b, y, _) = &m.trans[t];
                    let x = strip(*b);
                    let mut s2 = vec![false; members.len()];
                    for (i, &mm) in members.iter().enumerate() {
                        if s[i] {
                            for &t2 in &self.view.back[mm] {
                                let r = m.trans[t2].0;
                                if strip(m.trans[t2].1) == x && self.view.scc[r] == self.view.scc[p] {
                                    s2[idx[&r]] = true;
                                }
                            }
                        }
                    }
                    if s2.iter().any(|&b| b) {
                        next.entry((*p2, s2)).or_insert_with(|| [y.as_slice(), o].concat());
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Preorder bit layout. Leaf: `0`, state, gamma(len). Node: `1`, state,
    /// gamma(len), gamma(cut), the class list as gamma(#runs) and
    /// (class, gamma(count−1)) pairs, gamma(#edges), then per edge the key,
    /// the output as letter runs in the same format, and the child.
    pub fn serialize(&self, tree: &WindowTree) -> Vec<bool> {
        let mut bw = BitWriter::new();
        self.write(tree, &mut bw);
        bw.into_bits()
    }

    fn widths(&self) -> (usize, usize, usize) {
        let m = self.view.m;
        (width(m.num_states()), width(self.la.annotation.classes()), width(m.output.len()))
    }

    fn write(&self, tree: &WindowTree, bw: &mut BitWriter) {
        let (ws, wc, wo) = self.widths();
        match tree {
            WindowTree::Leaf { state, len } => {
                bw.bit(false);
                bw.fixed(*state as u64, ws);
                bw.gamma(*len as u64);
            }
            WindowTree::Node { state, len, cut, classes, edges } => {
                bw.bit(true);
                bw.fixed(*state as u64, ws);
                bw.gamma(*len as u64);
                bw.gamma(*cut as u64);
                write_runs(bw, classes, wc);
                bw.gamma(edges.len() as u64);
                for e in edges {
                    bw.fixed(e.key as u64, wc);
                    write_runs(bw, &e.out, wo);
                    self.write(&e.child, bw);
                }
            }
        }
    }

    pub fn deserialize(&self, bits: &[bool]) -> Option<WindowTree> {
        let mut br = BitReader::new(bits);
        let t = self.read(&mut br)?;
        br.at_end().then_some(t)
    }

    fn read(&self, br: &mut BitReader) -> Option<WindowTree> {
        let (ws, wc, wo) = self.widths();
        let node = br.bit()?;
        let state = br.fixed(ws)? as usize;
        let len = br.gamma()? as usize;
        if !node {
            return Some(WindowTree::Leaf { state, len });
        }
        let cut = br.gamma()? as usize;
        let classes = read_runs(br, wc)?;
        let k = br.gamma()? as usize;
        let mut edges = Vec::with_capacity(k);
        for _ in 0..k {
            let key = br.fixed(wc)? as usize;
            let out = read_runs(br, wo)?;
            edges.push(TreeEdge { key, out, child: self.read(br)? });
        }
        Some(WindowTree::Node { state, len, cut, classes, edges })
    }
}

fn write_runs(bw: &mut BitWriter, xs: &[usize], w: usize) {
    let mut runs: Vec<(usize, u64)> = Vec::new();
    for &x in xs {
        match runs.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => runs.push((x, 1)),
        }
    }
    bw.gamma(runs.len() as u64);
    for (x, c) in runs {
        bw.fixed(x as u64, w);
        bw.gamma(c - 1);
    }
}

fn read_runs(br: &mut BitReader, w: usize) -> Option<Vec<usize>> {
    let k = br.gamma()?;
    let mut out = Vec::new();
    for _ in 0..k {
        let x = br.fixed(w)? as usize;
        let c = br.gamma()? + 1;
        out.extend(std::iter::repeat_n(x, c as usize));
    }
    Some(out)
}

/// Least-squares fit `size ≈ a + b·log₂ n`; returns `(a, b, max relative residual)`.
pub fn log_fit(points: &[(usize, f64)]) -> (f64, f64, f64) {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, s)| s).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let a = my - b * mx;
    let worst = xs.iter().zip(&ys).map(|(x, y)| ((a + b * x) - y).abs() / y.abs().max(1.0)).fold(0.0, f64::max);
    (a, b, worst)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::text::parse_transducer;
    use crate::transducer::Transducer;

    /// First letter of the input; `p` and `r` remember it inside one SCC.
    pub fn first_letter() -> Transducer {
        parse_transducer(include_str!("../../../corpus/firstletter.tdc")).unwrap()
    }

    /// `a^|x|` when `x` starts with `a`, otherwise `b^|x|`.
    pub fn stretch() -> Transducer {
        parse_transducer(
            "@transducer\ndirection: left\nin: a b\nout: a b\nstates: s A B\ninitial: s\naccept: s A B\n\
             trans: s a / a -> A\ntrans: s b / b -> B\ntrans: A a / a -> A\ntrans: A b / a -> A\n\
             trans: B a / b -> B\ntrans: B b / b -> B\n",
        )
        .unwrap()
    }
}
