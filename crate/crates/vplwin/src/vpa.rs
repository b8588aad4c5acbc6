//! Deterministic visibly pushdown automata.
//!
//! Stack symbol 0 is the bottom marker ⊥; a [`Configuration`] stores the
//! stack above ⊥ (bottom first) and the current state.

use crate::error::{Error, Result};
use crate::nfa::Nfa;
use crate::regular::Dfa;
use crate::words::{Alphabet, Sym, Word};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Call,
    Return,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushdownAlphabet {
    pub symbols: Alphabet,
    pub kinds: Vec<Kind>,
}

impl PushdownAlphabet {
    pub fn new(calls: &[&str], returns: &[&str], internals: &[&str]) -> Result<Self> {
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        for (set, k) in [(calls, Kind::Call), (returns, Kind::Return), (internals, Kind::Internal)] {
            for &n in set {
                if names.iter().any(|m: &String| m == n) {
                    return Err(Error::Validation(format!("symbol `{n}` appears in two classes")));
                }
                names.push(n.to_string());
                kinds.push(k);
            }
        }
        if calls.is_empty() || returns.is_empty() {
            return Err(Error::Validation("calls and returns must be non-empty".into()));
        }
        Ok(PushdownAlphabet { symbols: Alphabet { names }, kinds })
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kind(&self, a: Sym) -> Kind {
        self.kinds[a]
    }

    pub fn of_kind(&self, k: Kind) -> Vec<Sym> {
        (0..self.len()).filter(|&a| self.kinds[a] == k).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    /// Stack content above ⊥, bottom first; never contains symbol 0.
    pub stack: Vec<usize>,
    pub state: usize,
}

impl Configuration {
    pub fn bottom(state: usize) -> Self {
        Configuration { stack: Vec::new(), state }
    }

    pub fn height(&self) -> usize {
        self.stack.len()
    }
}

/// A state transformation `Q → Q`.
pub type Transform = Vec<usize>;

/// Composition in reading order: first `x`, then `y`.
pub fn then(x: &[usize], y: &[usize]) -> Transform {
    x.iter().map(|&p| y[p]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiClosure {
    /// Element 0 is the identity.
    pub elems: Vec<Transform>,
    /// A well-matched word realising each element.
    pub witness: Vec<Word>,
    #[serde(skip)]
    pub index: HashMap<Transform, usize>,
}

impl PhiClosure {
    pub fn id_of(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

#[derive(Default, Debug)]
struct Cache {
    phi: OnceLock<PhiClosure>,
    bottom_states: OnceLock<Vec<usize>>,
    distinguishable: OnceLock<Vec<Vec<bool>>>,
    reach: OnceLock<Dfa>,
    rep: Mutex<RepMemo>,
}

#[derive(Default, Debug)]
struct RepMemo {
    memo: HashMap<Configuration, Configuration>,
    reps: Vec<Configuration>,
    layers: Vec<Vec<Configuration>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RepMode {
    /// First representative met in the canonical enumeration of reachable
    /// configurations (height, then stack and state in declaration order).
    FirstSeen,
    /// Length-lexicographic minimum with an enumeration budget.
    Llex { budget: usize },
}

#[derive(Clone, Debug)]
pub struct Vpa {
    pub alpha: PushdownAlphabet,
    pub states: Vec<String>,
    /// Index 0 is ⊥.
    pub stack: Vec<String>,
    pub initial: usize,
    pub finals: Vec<bool>,
    /// `call[q][a] = (γ, p)`; entries for non-call letters are unused.
    pub call: Vec<Vec<(usize, usize)>>,
    /// `ret[q][b][γ]`
    pub ret: Vec<Vec<Vec<usize>>>,
    /// `int[q][c]`
    pub int: Vec<Vec<usize>>,
    pub rep_mode: RepMode,
    cache: Arc<Cache>,
}

impl PartialEq for Vpa {
    fn eq(&self, o: &Self) -> bool {
        let rel = |v: &Vpa| {
            let mut call = Vec::new();
            let mut ret = Vec::new();
            let mut int = Vec::new();
            for q in 0..v.states.len() {
                for a in 0..v.alpha.len() {
                    match v.alpha.kind(a) {
                        Kind::Call => call.push(v.call[q][a]),
                        Kind::Return => ret.push(v.ret[q][a].clone()),
                        Kind::Internal => int.push(v.int[q][a]),
                    }
                }
            }
            (call, ret, int)
        };
        self.alpha == o.alpha
            && self.states == o.states
            && self.stack == o.stack
            && self.initial == o.initial
            && self.finals == o.finals
            && rel(self) == rel(o)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    WellMatched,
    Descending,
    Ascending,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordShapeReport {
    pub shape: Shape,
    /// Stack height before each letter and after the last, clamped at 0.
    pub heights: Vec<usize>,
    /// Maximal non-empty well-matched factors as half-open intervals.
    pub factors: Vec<(usize, usize)>,
}

/// Positions of letters without a partner: (unmatched calls, unmatched returns).
fn unmatched(alpha: &PushdownAlphabet, w: &[Sym]) -> (Vec<usize>, Vec<usize>) {
    let mut open: Vec<usize> = Vec::new();
    let mut bad_returns = Vec::new();
    for (i, &a) in w.iter().enumerate() {
        match alpha.kind(a) {
            Kind::Call => open.push(i),
            Kind::Return => {
                if open.pop().is_none() {
                    bad_returns.push(i);
                }
            }
            Kind::Internal => {}
        }
    }
    (open, bad_returns)
}

pub fn classify_word_shape(alpha: &PushdownAlphabet, w: &[Sym]) -> WordShapeReport {
    let mut heights = vec![0usize];
    for &a in w {
        let h = *heights.last().unwrap();
        heights.push(match alpha.kind(a) {
            Kind::Call => h + 1,
            Kind::Return => h.saturating_sub(1),
            Kind::Internal => h,
        });
    }
    let (calls, returns) = unmatched(alpha, w);
    let mut cuts: Vec<usize> = calls.iter().chain(&returns).copied().collect();
    cuts.sort_unstable();
    let mut factors = Vec::new();
    let mut start = 0;
    for &c in cuts.iter().chain(std::iter::once(&w.len())) {
        if c > start {
            factors.push((start, c));
        }
        start = c + 1;
    }
    let shape = match (calls.is_empty(), returns.is_empty()) {
        (true, true) => Shape::WellMatched,
        (true, false) => Shape::Descending,
        (false, true) => Shape::Ascending,
        (false, false) => Shape::General,
    };
    WordShapeReport { shape, heights, factors }
}

pub fn is_well_matched(alpha: &PushdownAlphabet, w: &[Sym]) -> bool {
    classify_word_shape(alpha, w).shape == Shape::WellMatched
}

pub fn is_descending(alpha: &PushdownAlphabet, w: &[Sym]) -> bool {
    unmatched(alpha, w).0.is_empty()
}

/// Canonical monotonic factorization `w_0 w_1 ⋯ w_m`: a descending prefix
/// ending at the last unmatched return, then unmatched calls and maximal
/// well-matched factors. The first factor is always present (possibly ε).
pub fn monotonic_factorization(alpha: &PushdownAlphabet, w: &[Sym]) -> Vec<Word> {
    let (calls, returns) = unmatched(alpha, w);
    let split = returns.last().map_or(0, |&i| i + 1);
    let mut out = vec![w[..split].to_vec()];
    let mut start = split;
    for &c in calls.iter().filter(|&&c| c >= split) {
        if c > start {
            out.push(w[start..c].to_vec());
        }
        out.push(vec![w[c]]);
        start = c + 1;
    }
    if start < w.len() {
        out.push(w[start..].to_vec());
    }
    out
}

/// Checks that `factors` is a monotonic factorization of `w`.
pub fn check_monotonic(alpha: &PushdownAlphabet, w: &[Sym], factors: &[Word]) -> Result<()> {
    let bad = |m: &str| Err(Error::BadFactorization(m.to_string()));
    if factors.is_empty() {
        return bad("no factors");
    }
    if factors.concat() != w {
        return bad("factors do not concatenate to the word");
    }
    if !is_descending(alpha, &factors[0]) {
        return bad("first factor is not descending");
    }
    for f in &factors[1..] {
        let call = f.len() == 1 && alpha.kind(f[0]) == Kind::Call;
        if !call && (f.is_empty() || !is_well_matched(alpha, f)) {
            return bad("inner factor is neither a call letter nor a non-empty well-matched word");
        }
    }
    Ok(())
}

impl Vpa {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: PushdownAlphabet,
        states: Vec<String>,
        stack: Vec<String>,
        initial: usize,
        finals: Vec<bool>,
        call: Vec<Vec<(usize, usize)>>,
        ret: Vec<Vec<Vec<usize>>>,
        int: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = states.len();
        let g = stack.len();
        let bad = |m: String| Err(Error::Validation(m));
        if initial >= n || finals.len() != n || call.len() != n || ret.len() != n || int.len() != n {
            return bad("state table sizes disagree".into());
        }
        if g == 0 {
            return bad("stack alphabet must contain ⊥".into());
        }
        for q in 0..n {
            if call[q].len() != alpha.len() || ret[q].len() != alpha.len() || int[q].len() != alpha.len() {
                return bad(format!("transition rows of state {} have the wrong width", states[q]));
            }
            for a in 0..alpha.len() {
                match alpha.kind(a) {
                    Kind::Call => {
                        let (gm, p) = call[q][a];
                        if gm == 0 || gm >= g || p >= n {
                            return bad(format!("bad push from {} on {}", states[q], alpha.symbols.name(a)));
                        }
                    }
                    Kind::Return => {
                        if ret[q][a].len() != g || ret[q][a].iter().any(|&p| p >= n) {
                            return bad(format!("bad pop from {} on {}", states[q], alpha.symbols.name(a)));
                        }
                    }
                    Kind::Internal => {
                        if int[q][a] >= n {
                            return bad(format!("bad internal move from {}", states[q]));
                        }
                    }
                }
            }
        }
        Ok(Vpa { alpha, states, stack, initial, finals, call, ret, int, rep_mode: RepMode::FirstSeen, cache: Arc::default() })
    }

    /// Same machine with a different representative selector (fresh caches).
    pub fn with_rep_mode(&self, mode: RepMode) -> Vpa {
        let mut v = self.clone();
        v.rep_mode = mode;
        v.cache = Arc::default();
        v
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration::bottom(self.initial)
    }

    pub fn step(&self, c: &Configuration, a: Sym) -> Configuration {
        let mut n = c.clone();
        self.step_mut(&mut n, a);
        n
    }

    pub fn step_mut(&self, c: &mut Configuration, a: Sym) {
        match self.alpha.kind(a) {
            Kind::Call => {
                let (g, p) = self.call[c.state][a];
                c.stack.push(g);
                c.state = p;
            }
            Kind::Return => {
                let top = c.stack.pop().unwrap_or(0);
                c.state = self.ret[c.state][a][top];
            }
            Kind::Internal => c.state = self.int[c.state][a],
        }
    }

    pub fn run(&self, c: &Configuration, w: &[Sym]) -> (Configuration, bool) {
        let mut n = c.clone();
        for &a in w {
            self.step_mut(&mut n, a);
        }
        let acc = self.finals[n.state];
        (n, acc)
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.run(&self.initial_config(), w).1
    }

    /// State reached from each state on a well-matched word.
    pub fn phi(&self, w: &[Sym]) -> Result<Transform> {
        if !is_well_matched(&self.alpha, w) {
            return Err(Error::NotWellMatched);
        }
        Ok((0..self.num_states()).map(|p| self.run(&Configuration::bottom(p), w).0.state).collect())
    }

    /// `φ(a z b)` from `φ(z)`.
    pub fn wrap(&self, a: Sym, inner: &[usize], b: Sym) -> Transform {
        (0..self.num_states())
            .map(|p| {
                let (g, p1) = self.call[p][a];
                self.ret[inner[p1]][b][g]
            })
            .collect()
    }

    /// The finite set `φ(W)`, closed from the identity under internal
    /// letters, one-level call/return wrapping and composition.
    pub fn phi_closure(&self) -> &PhiClosure {
        self.cache.phi.get_or_init(|| {
            let n = self.num_states();
            let mut cl = PhiClosure { elems: Vec::new(), witness: Vec::new(), index: HashMap::new() };
            let mut queue = VecDeque::new();
            let add = |cl: &mut PhiClosure, t: Transform, w: Word, queue: &mut VecDeque<usize>| {
                if !cl.index.contains_key(&t) {
                    cl.index.insert(t.clone(), cl.elems.len());
                    queue.push_back(cl.elems.len());
                    cl.elems.push(t);
                    cl.witness.push(w);
                }
            };
            add(&mut cl, (0..n).collect(), Vec::new(), &mut queue);
            for c in self.alpha.of_kind(Kind::Internal) {
                add(&mut cl, (0..n).map(|p| self.int[p][c]).collect(), vec![c], &mut queue);
            }
            let calls = self.alpha.of_kind(Kind::Call);
            let rets = self.alpha.of_kind(Kind::Return);
            while let Some(i) = queue.pop_front() {
                for &a in &calls {
                    for &b in &rets {
                        let t = self.wrap(a, &cl.elems[i], b);
                        let mut w = vec![a];
                        w.extend(&cl.witness[i]);
                        w.push(b);
                        add(&mut cl, t, w, &mut queue);
                    }
                }
                let len = cl.elems.len();
                for j in 0..len {
                    for (x, y) in [(i, j), (j, i)] {
                        let t = then(&cl.elems[x], &cl.elems[y]);
                        let w = [cl.witness[x].clone(), cl.witness[y].clone()].concat();
                        add(&mut cl, t, w, &mut queue);
                    }
                }
            }
            cl
        })
    }

    /// States `p` such that `⊥p` is reachable.
    pub fn bottom_states(&self) -> &[usize] {
        self.cache.bottom_states.get_or_init(|| {
            let cl = self.phi_closure();
            let rets = self.alpha.of_kind(Kind::Return);
            let mut seen = vec![false; self.num_states()];
            seen[self.initial] = true;
            let mut stack = vec![self.initial];
            while let Some(p) = stack.pop() {
                let next = cl.elems.iter().map(|t| t[p]).chain(rets.iter().map(|&b| self.ret[p][b][0]));
                for q in next.collect::<Vec<_>>() {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            (0..self.num_states()).filter(|&q| seen[q]).collect()
        })
    }

    /// `d[p][q]`: some ascending continuation is accepted from exactly one of `p`, `q`.
    pub fn distinguishable(&self) -> &[Vec<bool>] {
        self.cache.distinguishable.get_or_init(|| {
            let n = self.num_states();
            let cl = self.phi_closure();
            let calls = self.alpha.of_kind(Kind::Call);
            let mut d: Vec<Vec<bool>> = (0..n).map(|p| (0..n).map(|q| self.finals[p] != self.finals[q]).collect()).collect();
            let mut changed = true;
            while changed {
                changed = false;
                for p in 0..n {
                    for q in 0..n {
                        if d[p][q] {
                            continue;
                        }
                        let hit = calls.iter().any(|&a| d[self.call[p][a].1][self.call[q][a].1])
                            || cl.elems.iter().any(|t| d[t[p]][t[q]]);
                        if hit {
                            d[p][q] = true;
                            changed = true;
                        }
                    }
                }
            }
            d
        })
    }

    /// `L(c1) = L(c2)` without the reachability precondition.
    pub fn equiv_unchecked(&self, c1: &Configuration, c2: &Configuration) -> bool {
        if c1 == c2 {
            return true;
        }
        let d = self.distinguishable();
        let cl = self.phi_closure();
        let rets = self.alpha.of_kind(Kind::Return);
        let top = |c: &Configuration, i: usize| if i < c.stack.len() { c.stack[c.stack.len() - 1 - i] } else { 0 };
        let mut cur: HashSet<(usize, usize)> = HashSet::from([(c1.state, c2.state)]);
        let mut seen_bottom: HashSet<(usize, usize)> = HashSet::new();
        let levels = c1.height().max(c2.height());
        let mut level = 0;
        loop {
            if cur.iter().any(|&(p, q)| d[p][q]) {
                return false;
            }
            let at_bottom = level >= levels;
            if at_bottom {
                cur.retain(|pq| seen_bottom.insert(*pq));
                if cur.is_empty() {
                    return true;
                }
            }
            let (g1, g2) = (top(c1, level), top(c2, level));
            let mut next = HashSet::new();
            for &(p, q) in &cur {
                for t in &cl.elems {
                    for &b in &rets {
                        next.insert((self.ret[t[p]][b][g1], self.ret[t[q]][b][g2]));
                    }
                }
            }
            cur = next;
            level += 1;
        }
    }

    pub fn config_equiv(&self, c1: &Configuration, c2: &Configuration) -> Result<bool> {
        if !self.is_reachable(c1) || !self.is_reachable(c2) {
            return Err(Error::UnreachableConfiguration);
        }
        Ok(self.equiv_unchecked(c1, c2))
    }

    /// Word `⊥ γ_1 ⋯ γ_h q` over the alphabet `Γ ∪ Q` (stack symbols first).
    pub fn config_word(&self, c: &Configuration) -> Word {
        let mut w = vec![0];
        w.extend(&c.stack);
        w.push(self.stack.len() + c.state);
        w
    }

    /// NFA over `Γ ∪ Q` accepting exactly the reachable configurations.
    pub fn reachable_configs(&self) -> Nfa {
        let n = self.num_states();
        let g = self.stack.len();
        let names: Vec<String> = self.stack.iter().chain(&self.states).cloned().collect();
        // 0: start, 1..=n: level nodes, n+1: final
        let mut nfa = Nfa::new(Alphabet { names }, n + 2);
        nfa.initial = vec![0];
        nfa.finals[n + 1] = true;
        let cl = self.phi_closure();
        for &p in self.bottom_states() {
            nfa.add(0, 0, 1 + p);
        }
        let calls = self.alpha.of_kind(Kind::Call);
        for p in 0..n {
            let mut outs = BTreeSet::new();
            let mut pushes = BTreeSet::new();
            for t in &cl.elems {
                outs.insert(t[p]);
                for &a in &calls {
                    pushes.insert(self.call[t[p]][a]);
                }
            }
            for q in outs {
                nfa.add(1 + p, g + q, n + 1);
            }
            for (gm, p2) in pushes {
                nfa.add(1 + p, gm, 1 + p2);
            }
        }
        nfa
    }

    pub fn reachable_dfa(&self) -> &Dfa {
        self.cache.reach.get_or_init(|| self.reachable_configs().determinize().minimize())
    }

    pub fn is_reachable(&self, c: &Configuration) -> bool {
        c.state < self.num_states()
            && c.stack.iter().all(|&g| g > 0 && g < self.stack.len())
            && self.reachable_dfa().accepts(&self.config_word(c))
    }

    /// Reachable configurations of height exactly `h`, in canonical order.
    pub fn reachable_of_height(&self, h: usize) -> Vec<Configuration> {
        let cl = self.phi_closure();
        let calls = self.alpha.of_kind(Kind::Call);
        let mut out = Vec::new();
        let start: BTreeSet<usize> = self.bottom_states().iter().copied().collect();
        let mut stack: Vec<(Vec<usize>, BTreeSet<usize>)> = vec![(Vec::new(), start)];
        while let Some((word, set)) = stack.pop() {
            if word.len() == h {
                let ends: BTreeSet<usize> = set.iter().flat_map(|&p| cl.elems.iter().map(move |t| t[p])).collect();
                out.extend(ends.into_iter().map(|q| Configuration { stack: word.clone(), state: q }));
                continue;
            }
            for g in (1..self.stack.len()).rev() {
                let next: BTreeSet<usize> = set
                    .iter()
                    .flat_map(|&p| cl.elems.iter().map(move |t| t[p]))
                    .flat_map(|p| calls.iter().map(move |&a| (a, p)))
                    .filter_map(|(a, p)| (self.call[p][a].0 == g).then_some(self.call[p][a].1))
                    .collect();
                if !next.is_empty() {
                    let mut w = word.clone();
                    w.push(g);
                    stack.push((w, next));
                }
            }
        }
        out
    }

    /// Canonical representative of the `∼`-class of a reachable configuration.
    pub fn rep(&self, c: &Configuration) -> Result<Configuration> {
        if !self.is_reachable(c) {
            return Err(Error::UnreachableConfiguration);
        }
        let mut memo = self.cache.rep.lock().unwrap();
        if let Some(r) = memo.memo.get(c) {
            return Ok(r.clone());
        }
        if let Some(r) = memo.reps.iter().find(|r| r.height() <= c.height() && self.equiv_unchecked(r, c)).cloned() {
            memo.memo.insert(c.clone(), r.clone());
            return Ok(r);
        }
        let mut visited = 0usize;
        for h in 0..=c.height() {
            while memo.layers.len() <= h {
                let l = memo.layers.len();
                memo.layers.push(self.reachable_of_height(l));
            }
            for i in 0..memo.layers[h].len() {
                visited += 1;
                if let RepMode::Llex { budget } = self.rep_mode {
                    if visited > budget {
                        return Err(Error::BudgetExceeded(format!("llex representative search beyond {budget} configurations")));
                    }
                }
                let x = &memo.layers[h][i];
                if memo.memo.contains_key(x) && memo.memo[x] != *c {
                    // Already known to lie in some other class.
                    continue;
                }
                if self.equiv_unchecked(x, c) {
                    let x = x.clone();
                    memo.reps.push(x.clone());
                    memo.memo.insert(x.clone(), x.clone());
                    memo.memo.insert(c.clone(), x.clone());
                    return Ok(x);
                }
            }
        }
        Err(Error::UnreachableConfiguration)
    }

    /// `ν_A(w) = rep(δ(⊥q_0, w))`.
    pub fn nu(&self, w: &[Sym]) -> Configuration {
        let c = self.run(&self.initial_config(), w).0;
        self.rep(&c).expect("run endpoints are reachable")
    }

    /// State of `rep(⊥q)` for every `q` with `⊥q` reachable (others map to themselves).
    pub fn rep_bottom(&self, q: usize) -> usize {
        match self.rep(&Configuration::bottom(q)) {
            Ok(r) => r.state,
            Err(_) => q,
        }
    }

    /// States occurring in some reachable configuration.
    pub fn occurring_states(&self) -> Vec<usize> {
        let cl = self.phi_closure();
        let calls = self.alpha.of_kind(Kind::Call);
        let mut level = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.bottom_states().to_vec();
        for &p in &stack {
            level[p] = true;
        }
        while let Some(p) = stack.pop() {
            for t in &cl.elems {
                for &a in &calls {
                    let q = self.call[t[p]][a].1;
                    if !level[q] {
                        level[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        let occ: BTreeSet<usize> =
            (0..self.num_states()).filter(|&p| level[p]).flat_map(|p| cl.elems.iter().map(move |t| t[p])).collect();
        occ.into_iter().collect()
    }

    /// `Some(true)` if L = Σ*, `Some(false)` if L = ∅, otherwise `None`.
    pub fn is_trivial(&self) -> Option<bool> {
        let fin: Vec<bool> = self.occurring_states().iter().map(|&q| self.finals[q]).collect();
        if fin.iter().all(|&f| f) {
            Some(true)
        } else if fin.iter().all(|&f| !f) {
            Some(false)
        } else {
            None
        }
    }

    pub fn show_word(&self, w: &[Sym]) -> String {
        self.alpha.symbols.show(w)
    }

    pub fn show_config(&self, c: &Configuration) -> String {
        let mut s = String::from("⊥");
        for &g in &c.stack {
            s.push(' ');
            s.push_str(&self.stack[g]);
        }
        format!("{s} · {}", self.states[c.state])
    }

    pub fn show_transform(&self, t: &[usize]) -> String {
        let parts: Vec<String> =
            t.iter().enumerate().map(|(p, &q)| format!("{}>{}", self.states[p], self.states[q])).collect();
        format!("t:[{}]", parts.join(","))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⊥{:?}·{}", self.stack, self.state)
    }
}

/// Corpus machines built in code for unit tests.
#[cfg(test)]
pub(crate) mod fixtures {
    use crate::text;

    pub fn wm() -> super::Vpa {
        text::parse_vpa(include_str!("../../../corpus/wm.vpa")).unwrap()
    }
    pub fn dyckish() -> super::Vpa {
        text::parse_vpa(include_str!("../../../corpus/dyckish.vpa")).unwrap()
    }
    pub fn la_vpa() -> super::Vpa {
        text::parse_vpa(include_str!("../../../corpus/la.vpa")).unwrap()
    }
    pub fn matched() -> super::Vpa {
        text::parse_vpa(include_str!("../../../corpus/matched.vpa")).unwrap()
    }
    pub fn all() -> Vec<super::Vpa> {
        vec![wm(), dyckish(), la_vpa(), matched()]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::words::{words_of_len, words_upto};
    use proptest::prelude::*;

    fn fig1_alpha() -> PushdownAlphabet {
        PushdownAlphabet::new(&["a"], &["b"], &["c"]).unwrap()
    }

    #[test]
    fn step_examples() {
        let m = wm();
        let e_ok = m.initial_config();
        let a = m.alpha.symbols.sym("a").unwrap();
        let b = m.alpha.symbols.sym("b").unwrap();
        let c = m.step(&e_ok, a);
        assert_eq!(m.show_config(&c), "⊥ g1 · n_ok");
        // Return on ⊥ keeps ⊥.
        let r = m.step(&e_ok, b);
        assert!(r.stack.is_empty());
        assert_eq!(m.states[r.state], "err");
        assert!(m.accepts(&[a, b]));
        assert!(!m.accepts(&[b, a]));
        assert!(m.accepts(&[]));
    }

    #[test]
    fn shapes() {
        let al = fig1_alpha();
        let p = |s: &str| al.symbols.parse_word(s).unwrap();
        assert_eq!(classify_word_shape(&al, &p("ab")).shape, Shape::WellMatched);
        assert_eq!(classify_word_shape(&al, &p("bcabb")).shape, Shape::Descending);
        assert_eq!(classify_word_shape(&al, &p("aab")).shape, Shape::Ascending);
        assert_eq!(classify_word_shape(&al, &p("ba")).shape, Shape::General);
        assert_eq!(classify_word_shape(&al, &p("bab")).heights, vec![0, 0, 1, 0]);
    }

    #[test]
    fn twenty_letter_factorization() {
        let al = fig1_alpha();
        let w = al.symbols.parse_word("bcabbcabaabcaaababba").unwrap();
        let f: Vec<String> = monotonic_factorization(&al, &w).iter().map(|x| al.symbols.show(x)).collect();
        assert_eq!(f, vec!["bcabb", "cab", "a", "abc", "a", "aababb", "a"]);
        assert_eq!(monotonic_factorization(&al, &[]), vec![Vec::<usize>::new()]);
        let aaa = al.symbols.parse_word("aaa").unwrap();
        assert_eq!(monotonic_factorization(&al, &aaa), vec![vec![], vec![0], vec![0], vec![0]]);
    }

    #[test]
    fn factorization_is_monotonic_and_maximal() {
        let al = fig1_alpha();
        for w in words_upto(3, 7) {
            let f = monotonic_factorization(&al, &w);
            check_monotonic(&al, &w, &f).unwrap();
            // Suffix stability: dropping a prefix of any factor keeps the shape.
            for i in 0..f.len() {
                if i > 0 && f[i].len() == 1 && al.kind(f[i][0]) == Kind::Call {
                    continue;
                }
                for cut in 0..=f[i].len() {
                    let mut g = vec![f[i][cut..].to_vec()];
                    g.extend(f[i + 1..].iter().cloned());
                    if i > 0 && !g[0].is_empty() {
                        assert!(is_descending(&al, &g[0]));
                    }
                    let rest: Vec<Sym> = g.concat();
                    let mut g2 = vec![g[0].clone()];
                    g2.extend(g[1..].iter().cloned());
                    check_monotonic(&al, &rest, &g2).unwrap();
                }
            }
            // Maximality of inner well-matched factors.
            let mut pos = f[0].len();
            for x in &f[1..] {
                let wmf = !(x.len() == 1 && al.kind(x[0]) == Kind::Call);
                if wmf {
                    if pos + x.len() < w.len() {
                        assert!(!is_well_matched(&al, &w[pos..pos + x.len() + 1]));
                    }
                    if pos > f[0].len() {
                        assert!(!is_well_matched(&al, &w[pos - 1..pos + x.len()]));
                    }
                }
                pos += x.len();
            }
        }
    }

    #[test]
    fn phi_examples_and_homomorphism() {
        for m in all() {
            let k = m.alpha.len();
            let id: Transform = (0..m.num_states()).collect();
            assert_eq!(m.phi(&[]).unwrap(), id);
            let wm_words: Vec<Word> = words_upto(k, 6).into_iter().filter(|w| is_well_matched(&m.alpha, w)).collect();
            for u in &wm_words {
                for v in &wm_words {
                    if u.len() + v.len() > 8 {
                        continue;
                    }
                    let uv = [u.clone(), v.clone()].concat();
                    assert_eq!(m.phi(&uv).unwrap(), then(&m.phi(u).unwrap(), &m.phi(v).unwrap()));
                }
                assert!(m.phi_closure().id_of(&m.phi(u).unwrap()).is_some(), "closure misses φ of a word");
            }
            for (t, w) in m.phi_closure().elems.iter().zip(&m.phi_closure().witness) {
                assert_eq!(&m.phi(w).unwrap(), t);
            }
        }
        let m = wm();
        let ab = m.alpha.symbols.parse_word("ab").unwrap();
        let e_ok = m.states.iter().position(|s| s == "e_ok").unwrap();
        assert_eq!(m.phi(&ab).unwrap()[e_ok], e_ok);
        assert_eq!(m.phi(&m.alpha.symbols.parse_word("a").unwrap()), Err(Error::NotWellMatched));
    }

    /// Oracle: language comparison on continuations of length ≤ 6.
    fn brute_equiv(m: &Vpa, c1: &Configuration, c2: &Configuration) -> bool {
        words_upto(m.alpha.len(), 6).iter().all(|z| m.run(c1, z).1 == m.run(c2, z).1)
    }

    fn sample_reachable(m: &Vpa, len: usize) -> Vec<Configuration> {
        let mut s: Vec<Configuration> =
            words_upto(m.alpha.len(), len).iter().map(|w| m.run(&m.initial_config(), w).0).collect();
        s.sort();
        s.dedup();
        s
    }

    #[test]
    fn config_equiv_matches_brute_force() {
        for m in all() {
            let cs = sample_reachable(&m, 4);
            for x in &cs {
                for y in &cs {
                    assert_eq!(m.config_equiv(x, y).unwrap(), brute_equiv(&m, x, y), "{} vs {}", m.show_config(x), m.show_config(y));
                }
            }
        }
        let m = wm();
        let e = m.initial_config();
        let a = m.alpha.symbols.sym("a").unwrap();
        assert!(!m.config_equiv(&e, &m.step(&e, a)).unwrap());
    }

    #[test]
    fn config_equiv_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in all() {
            for _ in 0..100 {
                let mut gen = || {
                    let len = rng.gen_range(0..10);
                    let w: Word = (0..len).map(|_| rng.gen_range(0..m.alpha.len())).collect();
                    m.run(&m.initial_config(), &w).0
                };
                let (x, y) = (gen(), gen());
                assert_eq!(m.equiv_unchecked(&x, &y), brute_equiv(&m, &x, &y));
            }
        }
    }

    #[test]
    fn unreachable_configuration_is_an_error() {
        let m = wm();
        let g = m.stack.iter().position(|s| s == "g").unwrap();
        let n_ok = m.states.iter().position(|s| s == "n_ok").unwrap();
        let bad = Configuration { stack: vec![g], state: n_ok };
        assert!(!m.is_reachable(&bad));
        assert_eq!(m.config_equiv(&bad, &m.initial_config()), Err(Error::UnreachableConfiguration));
        assert_eq!(m.rep(&bad), Err(Error::UnreachableConfiguration));
    }

    #[test]
    fn reachable_configs_match_enumeration() {
        for m in all() {
            let d = m.reachable_dfa().clone();
            let seen = sample_reachable(&m, 6);
            for c in &seen {
                assert!(d.accepts(&m.config_word(c)));
            }
            // Every accepted configuration up to height 2 is produced by some short word.
            let longer: HashSet<Configuration> = sample_reachable(&m, 8).into_iter().collect();
            for h in 0..=2 {
                for c in m.reachable_of_height(h) {
                    assert!(d.accepts(&m.config_word(&c)));
                    assert!(longer.contains(&c), "{} not produced", m.show_config(&c));
                }
            }
            assert!(m.is_reachable(&m.initial_config()));
        }
    }

    #[test]
    fn rep_is_a_selector() {
        for m in all() {
            let cs = sample_reachable(&m, 5);
            for c in &cs {
                let r = m.rep(c).unwrap();
                assert!(m.equiv_unchecked(&r, c));
                assert_eq!(m.rep(&r).unwrap(), r);
            }
            for x in &cs {
                for y in &cs {
                    if m.equiv_unchecked(x, y) {
                        assert_eq!(m.rep(x).unwrap(), m.rep(y).unwrap());
                    }
                }
            }
        }
        let m = wm();
        let q = |s: &str| m.states.iter().position(|x| x == s).unwrap();
        let g1 = m.stack.iter().position(|s| s == "g1").unwrap();
        let cs = [
            Configuration::bottom(q("e_ok")),
            Configuration::bottom(q("err")),
            Configuration { stack: vec![g1], state: q("n_ok") },
        ];
        let reps: HashSet<Configuration> = cs.iter().map(|c| m.rep(c).unwrap()).collect();
        assert_eq!(reps.len(), 3);
    }

    #[test]
    fn llex_mode_agrees_with_default() {
        for m in all() {
            let l = m.with_rep_mode(RepMode::Llex { budget: 100_000 });
            for w in words_upto(m.alpha.len(), 4) {
                assert_eq!(m.nu(&w), l.nu(&w));
            }
        }
    }

    #[test]
    fn nu_is_a_right_congruence_and_saturates() {
        for m in all() {
            let ws = words_upto(m.alpha.len(), 4);
            let nus: Vec<Configuration> = ws.iter().map(|w| m.nu(w)).collect();
            assert_eq!(m.nu(&[]), m.rep(&m.initial_config()).unwrap());
            for i in 0..ws.len() {
                for j in 0..ws.len() {
                    if nus[i] != nus[j] {
                        continue;
                    }
                    for z in words_upto(m.alpha.len(), 3) {
                        let x = [ws[i].clone(), z.clone()].concat();
                        let y = [ws[j].clone(), z.clone()].concat();
                        assert_eq!(m.accepts(&x), m.accepts(&y));
                        if z.len() == 1 {
                            assert_eq!(m.nu(&x), m.nu(&y));
                        }
                    }
                }
            }
        }
        let m = wm();
        assert_eq!(m.nu(&m.alpha.symbols.parse_word("ab").unwrap()), m.nu(&[]));
    }

    #[test]
    fn triviality() {
        for m in all() {
            assert_eq!(m.is_trivial(), None);
        }
        let mut u = la_vpa();
        u.finals = vec![true; u.num_states()];
        let u = Vpa::new(u.alpha, u.states, u.stack, u.initial, u.finals, u.call, u.ret, u.int).unwrap();
        assert_eq!(u.is_trivial(), Some(true));
        let _ = words_of_len(1, 1);
    }

    proptest! {
        #[test]
        fn stack_discipline(w in proptest::collection::vec(0usize..3, 0..30)) {
            let m = wm();
            let mut c = m.initial_config();
            let rep = classify_word_shape(&m.alpha, &w);
            for (i, &a) in w.iter().enumerate() {
                let h = c.height();
                c = m.step(&c, a);
                prop_assert!(c.stack.iter().all(|&g| g != 0));
                let expect = match m.alpha.kind(a) { Kind::Call => h + 1, Kind::Return => h.saturating_sub(1), Kind::Internal => h };
                prop_assert_eq!(c.height(), expect);
                prop_assert_eq!(rep.heights[i + 1], expect);
            }
        }

        #[test]
        fn convolution_length(u in proptest::collection::vec(0usize..3, 0..8), v in proptest::collection::vec(0usize..3, 0..8)) {
            prop_assert_eq!(crate::words::convolve(&u, &v).len(), u.len().max(v.len()));
        }
    }
}
