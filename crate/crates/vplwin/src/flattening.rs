//! Flattenings of VPA inputs into words over `Σ_c ∪ Q ∪ Q^Q`, their
//! evaluation, the grammars of state sequences, and the regular
//! overapproximation `RegFlat` of the flattening language.
//!
//! Only transforms in `φ(W)` are materialized as letters.

use crate::cfg::{cfg_bounded, parikh_length_set, Boundedness, Cfg, GSym};
use crate::error::{Error, Result};
use crate::nfa::{reverse_dfa, Nfa};
use crate::regular::{lcm, Dfa};
use crate::semilinear::Semilinear;
use crate::transducer::{Direction, Transducer};
use crate::vpa::{check_monotonic, is_descending, is_well_matched, monotonic_factorization, then, Configuration, Kind, Transform, Vpa};
use crate::words::{Alphabet, Sym, Word};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FlatLetter {
    Call(Sym),
    State(usize),
    /// Index into the φ(W) closure.
    Transform(usize),
}

/// Letters are numbered calls first, then states, then transforms.
#[derive(Clone, Debug, Serialize)]
pub struct FlatAlphabet {
    pub calls: Vec<Sym>,
    pub num_states: usize,
    pub transforms: Vec<Transform>,
    pub alphabet: Alphabet,
}

impl FlatAlphabet {
    pub fn new(vpa: &Vpa) -> Self {
        let calls = vpa.alpha.of_kind(Kind::Call);
        let transforms = vpa.phi_closure().elems.clone();
        let mut names: Vec<String> = calls.iter().map(|&a| vpa.alpha.symbols.name(a).to_string()).collect();
        names.extend(vpa.states.iter().map(|q| format!("q:{q}")));
        names.extend(transforms.iter().map(|t| vpa.show_transform(t)));
        FlatAlphabet { calls, num_states: vpa.num_states(), transforms, alphabet: Alphabet { names } }
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn letter(&self, l: FlatLetter) -> Sym {
        match l {
            FlatLetter::Call(a) => self.calls.iter().position(|&c| c == a).expect("call letter"),
            FlatLetter::State(q) => self.calls.len() + q,
            FlatLetter::Transform(i) => self.calls.len() + self.num_states + i,
        }
    }

    pub fn decode(&self, s: Sym) -> FlatLetter {
        let c = self.calls.len();
        if s < c {
            FlatLetter::Call(self.calls[s])
        } else if s < c + self.num_states {
            FlatLetter::State(s - c)
        } else {
            FlatLetter::Transform(s - c - self.num_states)
        }
    }

    pub fn state(&self, q: usize) -> Sym {
        self.letter(FlatLetter::State(q))
    }

    pub fn transform(&self, i: usize) -> Sym {
        self.letter(FlatLetter::Transform(i))
    }

    pub fn is_state(&self, s: Sym) -> bool {
        matches!(self.decode(s), FlatLetter::State(_))
    }

    pub fn state_letters(&self) -> Vec<Sym> {
        (0..self.num_states).map(|q| self.state(q)).collect()
    }

    pub fn transform_letters(&self) -> Vec<Sym> {
        (0..self.transforms.len()).map(|i| self.transform(i)).collect()
    }

    /// Unique split `s_0 s_1 ⋯ s_m` with `s_0 ∈ Q*` and each later factor a
    /// call letter or a transform followed by states.
    pub fn factors(&self, s: &[Sym]) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for &x in s {
            match self.decode(x) {
                FlatLetter::State(_) => out.last_mut().unwrap().push(x),
                _ => out.push(vec![x]),
            }
        }
        out
    }

    /// Whether `s ∈ Q*(Σ_c ∪ Q^Q Q*)*`.
    pub fn is_all_flat(&self, s: &[Sym]) -> bool {
        self.factors(s)[1..].iter().all(|f| !matches!(self.decode(f[0]), FlatLetter::Call(_)) || f.len() == 1)
    }
}

/// σ-maps, `t_f` and `ν_f` for one VPA.
#[derive(Clone, Debug)]
pub struct Flattener<'a> {
    pub vpa: &'a Vpa,
    pub alpha: FlatAlphabet,
}

impl<'a> Flattener<'a> {
    pub fn new(vpa: &'a Vpa) -> Self {
        Flattener { vpa, alpha: FlatAlphabet::new(vpa) }
    }

    /// States `q_i` with `⊥q_i = ν_A(a_i⋯a_n)`.
    pub fn sigma0(&self, w: &[Sym]) -> Result<Word> {
        if !is_descending(&self.vpa.alpha, w) {
            return Err(Error::NotDescending);
        }
        Ok((0..w.len())
            .map(|i| {
                let c = self.vpa.nu(&w[i..]);
                debug_assert!(c.stack.is_empty());
                self.alpha.state(c.state)
            })
            .collect())
    }

    /// `φ(w)` followed by `σ_0(a_2⋯a_n)`.
    pub fn sigma1(&self, w: &[Sym]) -> Result<Word> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let tau = self.vpa.phi(w)?;
        let id = self.vpa.phi_closure().id_of(&tau).expect("φ(W) is closed");
        let mut out = vec![self.alpha.transform(id)];
        out.extend(self.sigma0(&w[1..])?);
        Ok(out)
    }

    /// The flattening of `w` along `factorization` (default: the canonical
    /// monotonic factorization).
    pub fn flatten(&self, w: &[Sym], factorization: Option<&[Word]>) -> Result<Word> {
        let canon;
        let f = match factorization {
            Some(f) => {
                check_monotonic(&self.vpa.alpha, w, f)?;
                f
            }
            None => {
                canon = monotonic_factorization(&self.vpa.alpha, w);
                &canon[..]
            }
        };
        let mut s = self.sigma0(&f[0])?;
        for x in &f[1..] {
            if x.len() == 1 && self.vpa.alpha.kind(x[0]) == Kind::Call {
                s.push(self.alpha.letter(FlatLetter::Call(x[0])));
            } else {
                s.extend(self.sigma1(x)?);
            }
        }
        Ok(s)
    }

    pub fn t_f(&self, s: &[Sym]) -> Result<Configuration> {
        if !self.alpha.is_all_flat(s) {
            return Err(Error::NotAllFlat(self.show(s)));
        }
        let mut c = match s.first().map(|&x| self.alpha.decode(x)) {
            Some(FlatLetter::State(q)) => Configuration::bottom(q),
            _ => self.vpa.initial_config(),
        };
        for &x in s {
            match self.alpha.decode(x) {
                FlatLetter::State(_) => {}
                FlatLetter::Call(a) => self.vpa.step_mut(&mut c, a),
                FlatLetter::Transform(i) => c.state = self.alpha.transforms[i][c.state],
            }
        }
        Ok(c)
    }

    pub fn nu_f(&self, s: &[Sym]) -> Result<Configuration> {
        self.vpa.rep(&self.t_f(s)?)
    }

    /// Left transducer over `Σ_f` computing `t_f` as the word `γ_1⋯γ_h q`
    /// (stack symbols, then the state offset by `|Γ|`).
    pub fn t_f_transducer(&self) -> Transducer {
        let n = self.vpa.num_states();
        let g = self.vpa.stack.len();
        let mut out_names: Vec<String> = self.vpa.stack.clone();
        out_names.extend(self.vpa.states.iter().cloned());
        // 0: start, 1+p: states may follow, 1+n+p: after a call.
        let open = |p: usize| 1 + p;
        let shut = |p: usize| 1 + n + p;
        let mut states = vec!["start".to_string()];
        states.extend(self.vpa.states.iter().cloned());
        states.extend(self.vpa.states.iter().map(|q| format!("{q}'")));
        let mut trans = Vec::new();
        let q0 = self.vpa.initial;
        for q in 0..n {
            trans.push((0, self.alpha.state(q), Vec::new(), open(q)));
        }
        for p in 0..n {
            for q in 0..n {
                trans.push((open(p), self.alpha.state(q), Vec::new(), open(p)));
            }
        }
        for &a in &self.alpha.calls {
            let l = self.alpha.letter(FlatLetter::Call(a));
            let (gm, p1) = self.vpa.call[q0][a];
            trans.push((0, l, vec![gm], shut(p1)));
            for p in 0..n {
                let (gm, p1) = self.vpa.call[p][a];
                trans.push((open(p), l, vec![gm], shut(p1)));
                trans.push((shut(p), l, vec![gm], shut(p1)));
            }
        }
        for (i, t) in self.alpha.transforms.iter().enumerate() {
            let l = self.alpha.transform(i);
            trans.push((0, l, Vec::new(), open(t[q0])));
            for p in 0..n {
                trans.push((open(p), l, Vec::new(), open(t[p])));
                trans.push((shut(p), l, Vec::new(), open(t[p])));
            }
        }
        let mut term = vec![Some(vec![g + q0])];
        term.extend((0..n).map(|p| Some(vec![g + p])));
        term.extend((0..n).map(|p| Some(vec![g + p])));
        Transducer::from_written(
            Direction::Left,
            states,
            self.alpha.alphabet.clone(),
            Alphabet { names: out_names },
            vec![0],
            vec![true; 1 + 2 * n],
            trans,
            term,
        )
        .expect("well-formed by construction")
    }

    pub fn show(&self, s: &[Sym]) -> String {
        self.alpha.alphabet.show(s)
    }

    /// Parse space-separated tokens (`a`, `q:NAME`, `t:[p>q,…]`).
    pub fn parse(&self, text: &str) -> Result<Word> {
        self.alpha.alphabet.parse_word(text)
    }
}

/// Bounded regular superset of a bounded context-free language with the
/// same length set and the same positioned letters `Ψ`.
#[derive(Clone, Debug)]
pub struct BoundedApprox {
    pub words: Vec<Word>,
    pub length_set: Semilinear,
    /// `psi[a]`: positions (counted from the right, from 1) at which `a` occurs.
    pub psi: Vec<Semilinear>,
    pub dfa: Dfa,
}

impl BoundedApprox {
    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.dfa.accepts(w)
    }
}

/// `Ψ(w) = {(a_1, n), (a_2, n−1), …, (a_n, 1)}`.
pub fn psi_of(w: &[Sym]) -> BTreeSet<(Sym, usize)> {
    w.iter().enumerate().map(|(i, &a)| (a, w.len() - i)).collect()
}

/// Unary grammar whose lengths are `{ |v| + 1 : u a v ∈ L(g) }`.
fn marked_position_grammar(g: &Cfg, a: Sym) -> Cfg {
    let (cnf, _) = g.to_cnf();
    let k = cnf.num_nt();
    let mut h = Cfg::new(Alphabet::new(["□"]));
    h.nonterminals = (0..k).map(|i| format!("{}_all", cnf.nonterminals[i])).collect();
    h.nonterminals.extend((0..k).map(|i| format!("{}_mark", cnf.nonterminals[i])));
    let (all, mark) = (|i: usize| i, |i: usize| k + i);
    for (x, body) in &cnf.productions {
        match body[..] {
            [GSym::T(t)] => {
                h.add(all(*x), vec![GSym::T(0)]);
                if t == a {
                    h.add(mark(*x), vec![GSym::T(0)]);
                }
            }
            [GSym::N(b), GSym::N(c)] => {
                h.add(all(*x), vec![GSym::N(all(b)), GSym::N(all(c))]);
                h.add(mark(*x), vec![GSym::N(mark(b)), GSym::N(all(c))]);
                h.add(mark(*x), vec![GSym::N(mark(c))]);
            }
            _ => {}
        }
    }
    h.start = mark(cnf.start);
    h
}

/// Values `0..t+p` of a counter tracking `n` modulo the eventual period.
struct Counter {
    threshold: u64,
    period: u64,
}

impl Counter {
    fn for_sets<'s>(sets: impl IntoIterator<Item = &'s Semilinear>) -> Counter {
        let mut t = 0;
        let mut p = 1usize;
        for s in sets {
            t = t.max(s.threshold);
            if s.period > 0 {
                p = lcm(p, s.period as usize);
            }
        }
        Counter { threshold: t, period: p as u64 }
    }

    fn size(&self) -> usize {
        (self.threshold + self.period) as usize
    }

    fn next(&self, c: u64) -> u64 {
        if c + 1 < self.threshold + self.period {
            c + 1
        } else {
            self.threshold
        }
    }
}

/// NFA for `w_1* ⋯ w_k*`.
fn bounded_product_nfa(alpha: &Alphabet, words: &[Word]) -> Nfa {
    let mut nfa = Nfa::new(alpha.clone(), words.len() + 1);
    nfa.initial = vec![0];
    nfa.finals[words.len()] = true;
    for (i, w) in words.iter().enumerate() {
        nfa.add_eps(i, i + 1);
        if w.is_empty() {
            continue;
        }
        let mut p = i;
        for (j, &a) in w.iter().enumerate() {
            let q = if j + 1 == w.len() { i } else { nfa.add_state() };
            nfa.add(p, a, q);
            p = q;
        }
    }
    nfa
}

pub fn bounded_overapprox(g: &Cfg) -> Result<BoundedApprox> {
    let words = match cfg_bounded(g) {
        Boundedness::Bounded { words } => words,
        Boundedness::Unbounded { .. } => return Err(Error::NotBounded),
    };
    let alpha = g.terminals.clone();
    let length_set = parikh_length_set(g);
    let psi: Vec<Semilinear> = (0..alpha.len()).map(|a| parikh_length_set(&marked_position_grammar(g, a))).collect();
    let ctr = Counter::for_sets(std::iter::once(&length_set).chain(&psi));
    // Read the reversed word, counting positions from the right.
    let rev = reverse_dfa(&bounded_product_nfa(&alpha, &words).determinize().minimize());
    let m = ctr.size();
    let dead = rev.num_states() * m;
    let id = |r: usize, c: u64| r * m + c as usize;
    let mut delta = vec![vec![dead; alpha.len()]; dead + 1];
    let mut finals = vec![false; dead + 1];
    for r in 0..rev.num_states() {
        for c in 0..m as u64 {
            finals[id(r, c)] = rev.finals[r] && length_set.contains(c);
            let c2 = ctr.next(c);
            for a in 0..alpha.len() {
                if psi[a].contains(c2) {
                    delta[id(r, c)][a] = id(rev.delta[r][a], c2);
                }
            }
        }
    }
    let names = (0..=dead).map(|i| i.to_string()).collect();
    let counted = Dfa::new(alpha, names, id(rev.initial, 0), finals, delta)?;
    let dfa = reverse_dfa(&counted.minimize()).minimize();
    Ok(BoundedApprox { words, length_set, psi, dfa })
}

/// The grammars of `S_1 = σ_1(W∖{ε})`, its per-transform quotients
/// `τ^{-1}S_1`, and `S_0 = σ_0(D)`.
#[derive(Clone, Debug)]
pub struct StateGrammars {
    /// Start symbol generates `S_1`.
    pub s1: Cfg,
    /// `quotients[i]` generates `τ_i^{-1} S_1` (empty grammars included).
    pub quotients: Vec<Cfg>,
    pub s0: Cfg,
}

/// Cap on the number of distinct continuation maps explored.
pub const CONTINUATION_CAP: usize = 4096;

impl Flattener<'_> {
    /// Builds the grammars directly from the block structure of
    /// well-matched words.
    ///
    /// A nonterminal `W[κ, τ]` generates the state labels of the positions
    /// of a well-matched `z` with `φ(z) = τ`, where the label of a position
    /// is `rep(κ(state after the suffix of z read from ⊥q_0))` and `κ`
    /// summarizes everything after `z` (read from an empty stack).
    pub fn state_grammars(&self) -> Result<StateGrammars> {
        let vpa = self.vpa;
        let cl = vpa.phi_closure();
        let n = vpa.num_states();
        let q0 = vpa.initial;
        let internals = vpa.alpha.of_kind(Kind::Internal);
        let calls = vpa.alpha.of_kind(Kind::Call);
        let rets = vpa.alpha.of_kind(Kind::Return);
        let rho: Vec<Transform> = rets.iter().map(|&b| (0..n).map(|p| vpa.ret[p][b][0]).collect()).collect();
        let wrap = |a: Sym, inner: &[usize], b: Sym| -> Transform {
            (0..n)
                .map(|p| {
                    let (g, p1) = vpa.call[p][a];
                    vpa.ret[inner[p1]][b][g]
                })
                .collect()
        };
        let rb: Vec<usize> = (0..n).map(|q| vpa.rep_bottom(q)).collect();
        let lbl = |q: usize| GSym::T(self.alpha.state(rb[q]));
        let k = cl.elems.len();
        let idx = |t: &Transform| cl.id_of(t).expect("φ(W) is closed");

        let mut g = Cfg::new(self.alpha.alphabet.clone());
        g.nonterminals = vec!["S1".into(), "T".into()];
        let quot: Vec<usize> = (0..k).map(|i| g.add_nt(format!("K{i}"))).collect();
        let mut kappas: HashMap<Transform, usize> = HashMap::new();
        let mut queue: VecDeque<Transform> = VecDeque::new();
        let intern = |g: &mut Cfg, kappas: &mut HashMap<Transform, usize>, queue: &mut VecDeque<Transform>, kap: Transform| {
            if let Some(&b) = kappas.get(&kap) {
                return Ok(b);
            }
            if kappas.len() >= CONTINUATION_CAP {
                return Err(Error::BudgetExceeded(format!("more than {CONTINUATION_CAP} continuation maps")));
            }
            let base = g.num_nt();
            for i in 0..k {
                g.add_nt(format!("W{}_{i}", kappas.len()));
            }
            kappas.insert(kap.clone(), base);
            queue.push_back(kap);
            Ok(base)
        };
        let id_map: Transform = (0..n).collect();
        let top = intern(&mut g, &mut kappas, &mut queue, id_map.clone())?;
        // Tails: positions 2..n of a well-matched word whose first block is
        // `beta` and whose remainder has transform `rest`.
        for (ri, rest) in cl.elems.iter().enumerate() {
            for &c in &internals {
                let beta: Transform = (0..n).map(|p| vpa.int[p][c]).collect();
                let i = idx(&then(&beta, rest));
                g.add(quot[i], vec![GSym::N(top + ri)]);
            }
            for &a in &calls {
                for (bi, &b) in rets.iter().enumerate() {
                    for (yi, y) in cl.elems.iter().enumerate() {
                        let beta = wrap(a, y, b);
                        let i = idx(&then(&beta, rest));
                        let inner = intern(&mut g, &mut kappas, &mut queue, then(&rho[bi], rest))?;
                        g.add(quot[i], vec![GSym::N(inner + yi), lbl(rest[rho[bi][q0]]), GSym::N(top + ri)]);
                    }
                }
            }
        }
        for i in 0..k {
            g.add(0, vec![GSym::T(self.alpha.transform(i)), GSym::N(quot[i])]);
            g.add(1, vec![GSym::N(quot[i])]);
        }
        while let Some(kap) = queue.pop_front() {
            let base = kappas[&kap];
            g.add(base, Vec::new());
            for (ri, rest) in cl.elems.iter().enumerate() {
                let after = then(rest, &kap);
                for &c in &internals {
                    let beta: Transform = (0..n).map(|p| vpa.int[p][c]).collect();
                    let i = idx(&then(&beta, rest));
                    g.add(base + i, vec![lbl(after[beta[q0]]), GSym::N(base + ri)]);
                }
                for &a in &calls {
                    for (bi, &b) in rets.iter().enumerate() {
                        let inner = intern(&mut g, &mut kappas, &mut queue, then(&rho[bi], &after))?;
                        for (yi, y) in cl.elems.iter().enumerate() {
                            let beta = wrap(a, y, b);
                            let i = idx(&then(&beta, rest));
                            g.add(
                                base + i,
                                vec![
                                    lbl(after[beta[q0]]),
                                    GSym::N(inner + yi),
                                    lbl(after[rho[bi][q0]]),
                                    GSym::N(base + ri),
                                ],
                            );
                        }
                    }
                }
            }
        }
        let s1 = g.trim();
        let quotients = quot.iter().map(|&q| g.with_start(q).trim()).collect();
        let s0 = g.with_start(1).suffix_grammar().trim();
        Ok(StateGrammars { s1, quotients, s0 })
    }
}

/// `RegFlat = R_0 (Σ_c ∪ R_1)*` with `R_1 = ∪ τ R_τ` and `R_0 = ∪ Suf(R_τ)`,
/// `R_τ` a bounded overapproximation of `τ^{-1} S_1`.
#[derive(Clone, Debug)]
pub struct RegFlat {
    pub grammars: StateGrammars,
    /// `approx[i]` for transform `i`; None when `τ_i^{-1} S_1` is empty.
    pub approx: Vec<Option<BoundedApprox>>,
    pub dfa: Dfa,
}

impl<'a> Flattener<'a> {
    pub fn s0_bounded(&self, grammars: &StateGrammars) -> Boundedness {
        cfg_bounded(&grammars.s0)
    }

    pub fn build_reg_flat(&self) -> Result<RegFlat> {
        let grammars = self.state_grammars()?;
        if let Boundedness::Unbounded { .. } = self.s0_bounded(&grammars) {
            return Err(Error::S0Unbounded);
        }
        let approx: Vec<Option<BoundedApprox>> = grammars
            .quotients
            .iter()
            .map(|q| if q.is_empty() { Ok(None) } else { bounded_overapprox(q).map(Some) })
            .collect::<Result<_>>()?;
        let fa = &self.alpha;
        let mut nfa = Nfa::new(fa.alphabet.clone(), 2);
        let (start, hub) = (0, 1);
        nfa.initial = vec![start];
        nfa.finals[hub] = true;
        for &a in &fa.calls {
            nfa.add(hub, fa.letter(FlatLetter::Call(a)), hub);
        }
        for (i, ap) in approx.iter().enumerate() {
            let Some(ap) = ap else { continue };
            let d = &ap.dfa;
            let co = d.coreachable();
            let reach = d.reachable_bfs();
            // Two copies: one entered anywhere (suffixes), one after τ.
            for copy in 0..2 {
                let off = nfa.num_states;
                for _ in 0..d.num_states() {
                    nfa.add_state();
                }
                for &p in &reach {
                    if !co[p] {
                        continue;
                    }
                    for a in 0..fa.len() {
                        let q = d.delta[p][a];
                        if co[q] {
                            nfa.add(off + p, a, off + q);
                        }
                    }
                    if d.finals[p] {
                        nfa.add_eps(off + p, hub);
                    }
                    if copy == 0 {
                        nfa.add_eps(start, off + p);
                    }
                }
                if copy == 1 && co[d.initial] {
                    nfa.add(hub, fa.transform(i), off + d.initial);
                }
            }
        }
        let dfa = nfa.determinize().minimize();
        Ok(RegFlat { grammars, approx, dfa })
    }

    /// Whether `s ∈ Flat = S_0 (Σ_c ∪ S_1)*`.
    pub fn is_flat(&self, grammars: &StateGrammars, s: &[Sym]) -> bool {
        let f = self.alpha.factors(s);
        grammars.s0.accepts(&f[0])
            && f[1..].iter().all(|x| match self.alpha.decode(x[0]) {
                FlatLetter::Call(_) => x.len() == 1,
                _ => grammars.s1.accepts(x),
            })
    }

    /// Every word of `Flat` of length `≤ n`.
    pub fn flat_words(&self, grammars: &StateGrammars, n: usize) -> Vec<BTreeSet<Word>> {
        let s0 = grammars.s0.words_by_length(n);
        let s1 = grammars.s1.words_by_length(n);
        let calls: Vec<Sym> = self.alpha.calls.iter().map(|&a| self.alpha.letter(FlatLetter::Call(a))).collect();
        // tails[l]: words of (Σ_c ∪ S_1)* of length l
        let mut tails: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); n + 1];
        tails[0].insert(Vec::new());
        for l in 1..=n {
            let mut set = BTreeSet::new();
            for &c in &calls {
                for t in &tails[l - 1] {
                    set.insert([vec![c], t.clone()].concat());
                }
            }
            for (m, ws) in s1.iter().enumerate().take(l + 1).skip(1) {
                for w in ws {
                    for t in &tails[l - m] {
                        set.insert([w.clone(), t.clone()].concat());
                    }
                }
            }
            tails[l] = set;
        }
        (0..=n)
            .map(|l| {
                let mut set = BTreeSet::new();
                for (m, ws) in s0.iter().enumerate().take(l + 1) {
                    for w in ws {
                        for t in &tails[l - m] {
                            set.insert([w.clone(), t.clone()].concat());
                        }
                    }
                }
                set
            })
            .collect()
    }

    /// Replace `R_1`-factors by least `S_1` words of the same length and
    /// transform, and the leading factor by the least `S_0` word with the
    /// same length and first state. `ν_f` is unchanged.
    pub fn normalize_to_flat(&self, rf: &RegFlat, r: &[Sym]) -> Result<Word> {
        if !rf.dfa.accepts(r) {
            return Err(Error::NotRegFlat);
        }
        let g = &rf.grammars;
        let f = self.alpha.factors(r);
        let mut out = Vec::with_capacity(r.len());
        if f[0].is_empty() || g.s0.accepts(&f[0]) {
            out.extend(&f[0]);
        } else {
            let w = g.s0.least_word(f[0].len(), Some(f[0][0])).ok_or_else(|| Error::NoApx("leading factor".into()))?;
            out.extend(w);
        }
        for x in &f[1..] {
            match self.alpha.decode(x[0]) {
                FlatLetter::Call(_) => out.extend(x),
                FlatLetter::Transform(i) => {
                    if g.quotients[i].accepts(&x[1..]) {
                        out.extend(x);
                    } else {
                        out.push(x[0]);
                        out.extend(g.quotients[i].least_word(x.len() - 1, None).ok_or_else(|| Error::NoApx(self.show(x)))?);
                    }
                }
                FlatLetter::State(_) => unreachable!("factors start with a call or a transform"),
            }
        }
        Ok(out)
    }
}

/// All flattenings of `w`, one per monotonic factorization.
pub fn monotonic_factorizations(vpa: &Vpa, w: &[Sym]) -> Vec<Vec<Word>> {
    let alpha = &vpa.alpha;
    let mut out = Vec::new();
    for split in 0..=w.len() {
        if !is_descending(alpha, &w[..split]) {
            continue;
        }
        let mut acc = vec![w[..split].to_vec()];
        rest_factorizations(vpa, &w[split..], &mut acc, &mut out);
    }
    out
}

fn rest_factorizations(vpa: &Vpa, w: &[Sym], acc: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
    if w.is_empty() {
        out.push(acc.clone());
        return;
    }
    if vpa.alpha.kind(w[0]) == Kind::Call {
        acc.push(vec![w[0]]);
        rest_factorizations(vpa, &w[1..], acc, out);
        acc.pop();
    }
    for l in 1..=w.len() {
        if is_well_matched(&vpa.alpha, &w[..l]) {
            acc.push(w[..l].to_vec());
            rest_factorizations(vpa, &w[l..], acc, out);
            acc.pop();
        }
    }
}
