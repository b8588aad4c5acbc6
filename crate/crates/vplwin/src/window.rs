//! Variable-size sliding windows: the window operator, streaming
//! algorithms with a bit meter, and the exact optimal-space oracle.

use crate::bits::{gamma_len, width};
use crate::error::{Error, Result};
use crate::growth::{census, CensusMode};
use crate::regular::{nerode_congruence, suffix_expansion_layers, Dfa, RightCongruence};
use crate::text::Machine;
use crate::vpa::{Kind, Transform, Vpa};
use crate::words::{Alphabet, Sym, Word};
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WindowOp {
    Push(Sym),
    /// Drop the oldest letter (no-op on the empty window).
    Pop,
}

pub fn wnd_apply(w: &mut VecDeque<Sym>, op: WindowOp) {
    match op {
        WindowOp::Push(a) => w.push_back(a),
        WindowOp::Pop => {
            w.pop_front();
        }
    }
}

/// Active window after a whole stream.
pub fn wnd(ops: &[WindowOp]) -> Word {
    let mut w = VecDeque::new();
    for &op in ops {
        wnd_apply(&mut w, op);
    }
    w.into()
}

/// Whitespace-separated tokens; `pop` drops the oldest letter.
pub fn parse_stream(alpha: &Alphabet, text: &str) -> Result<Vec<WindowOp>> {
    text.split_whitespace()
        .map(|tok| if tok == "pop" { Ok(WindowOp::Pop) } else { alpha.sym(tok).map(WindowOp::Push) })
        .collect()
}

/// One accept bit per operation, with the size of the state in bits.
pub trait Swa {
    fn step(&mut self, op: WindowOp) -> bool;
    fn accepts(&self) -> bool;
    fn space_bits(&self) -> usize;
    fn window_len(&self) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SwaKind {
    Trivial,
    CounterLa,
    PathSummary,
    FlatWindow,
}

impl std::str::FromStr for SwaKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(SwaKind::Trivial),
            "counter-la" => Ok(SwaKind::CounterLa),
            "path-summary" => Ok(SwaKind::PathSummary),
            "flat-window" => Ok(SwaKind::FlatWindow),
            _ => Err(Error::Other(format!("unknown algorithm `{s}`"))),
        }
    }
}

pub fn make_swa(kind: SwaKind, m: &Machine) -> Result<Box<dyn Swa>> {
    let mismatch = |what: &str| Err(Error::KindMachineMismatch(what.to_string()));
    match (kind, m) {
        (SwaKind::Trivial, Machine::Dfa(d)) => {
            let d = d.clone();
            let k = d.alphabet.len();
            Ok(Box::new(Trivial::new(k, move |w| d.accepts(w))))
        }
        (SwaKind::Trivial, Machine::Vpa(v)) => {
            let v = v.clone();
            let k = v.alpha.len();
            Ok(Box::new(Trivial::new(k, move |w| v.accepts(w))))
        }
        (SwaKind::CounterLa, Machine::Dfa(d)) => Ok(Box::new(CounterLa::for_dfa(d)?)),
        (SwaKind::PathSummary, Machine::Dfa(d)) => Ok(Box::new(PathSummary::new(d))),
        (SwaKind::FlatWindow, Machine::Vpa(v)) => Ok(Box::new(FlatWindow::new(v.clone()))),
        (SwaKind::Trivial, _) => mismatch("trivial needs a DFA or a VPA"),
        (SwaKind::CounterLa, _) => mismatch("counter-la needs the DFA of `contains a`"),
        (SwaKind::PathSummary, _) => mismatch("path-summary needs a DFA"),
        (SwaKind::FlatWindow, _) => mismatch("flat-window needs a VPA"),
    }
}

/// Stores the window; meter `gamma(n) + n·⌈log₂|Σ|⌉`.
pub struct Trivial {
    window: VecDeque<Sym>,
    sigma: usize,
    member: Box<dyn Fn(&[Sym]) -> bool>,
    last: bool,
}

impl Trivial {
    pub fn new(sigma: usize, member: impl Fn(&[Sym]) -> bool + 'static) -> Self {
        let last = member(&[]);
        Trivial { window: VecDeque::new(), sigma, member: Box::new(member), last }
    }
}

impl Swa for Trivial {
    fn step(&mut self, op: WindowOp) -> bool {
        wnd_apply(&mut self.window, op);
        self.last = (self.member)(self.window.make_contiguous());
        self.last
    }
    fn accepts(&self) -> bool {
        self.last
    }
    fn space_bits(&self) -> usize {
        gamma_len(self.window.len() as u64) + self.window.len() * width(self.sigma)
    }
    fn window_len(&self) -> usize {
        self.window.len()
    }
}

/// Window length `n` and the distance `i` of the newest `a` from the right
/// end (`None` when the window has no `a`). Meter: both counters in binary
/// with the common width `⌊log₂(n+2)⌋ + 1`, `i = 0` standing for none.
pub struct CounterLa {
    a: Sym,
    n: usize,
    i: Option<usize>,
}

impl CounterLa {
    pub fn new(a: Sym) -> Self {
        CounterLa { a, n: 0, i: None }
    }

    /// Checks that `d` accepts exactly the words containing the letter `a`.
    pub fn for_dfa(d: &Dfa) -> Result<Self> {
        let Some(a) = d.alphabet.index("a") else {
            return Err(Error::KindMachineMismatch("alphabet has no letter `a`".into()));
        };
        let k = d.alphabet.len();
        let delta = (0..2).map(|q| (0..k).map(|b| if q == 1 || b == a { 1 } else { 0 }).collect()).collect();
        let la = Dfa::new(d.alphabet.clone(), vec!["n".into(), "y".into()], 0, vec![false, true], delta)?;
        if !la.equivalent(d) {
            return Err(Error::KindMachineMismatch("counter-la needs the DFA of `contains a`".into()));
        }
        Ok(CounterLa::new(a))
    }
}

impl Swa for CounterLa {
    fn step(&mut self, op: WindowOp) -> bool {
        match op {
            WindowOp::Push(b) => {
                self.n += 1;
                self.i = if b == self.a { Some(1) } else { self.i.map(|i| i + 1) };
            }
            WindowOp::Pop => {
                self.n = self.n.saturating_sub(1);
                if self.i.is_some_and(|i| i > self.n) {
                    self.i = None;
                }
            }
        }
        self.accepts()
    }
    fn accepts(&self) -> bool {
        self.i.is_some()
    }
    fn space_bits(&self) -> usize {
        2 * ((usize::BITS - (self.n + 2).leading_zeros()) as usize)
    }
    fn window_len(&self) -> usize {
        self.n
    }
}

/// Run-length list of the Nerode classes of all suffixes of the window,
/// oldest (the whole window) first and `ε` last. Meter: gamma(#runs) and per
/// run the class in fixed width plus gamma(count − 1).
pub struct PathSummary {
    cong: RightCongruence,
    runs: VecDeque<(usize, usize)>,
}

impl PathSummary {
    pub fn new(d: &Dfa) -> Self {
        let cong = nerode_congruence(d);
        let runs = VecDeque::from([(cong.class_of_empty, 1)]);
        PathSummary { cong, runs }
    }

    pub fn runs(&self) -> usize {
        self.runs.len()
    }
}

impl Swa for PathSummary {
    fn step(&mut self, op: WindowOp) -> bool {
        match op {
            WindowOp::Push(a) => {
                let mut next: VecDeque<(usize, usize)> = VecDeque::with_capacity(self.runs.len() + 1);
                let eps = self.cong.class_of_empty;
                for (c, k) in self.runs.iter().copied().map(|(c, k)| (self.cong.step[c][a], k)).chain([(eps, 1)]) {
                    match next.back_mut() {
                        Some((d, m)) if *d == c => *m += k,
                        _ => next.push_back((c, k)),
                    }
                }
                self.runs = next;
            }
            WindowOp::Pop => {
                if self.window_len() > 0 {
                    let front = self.runs.front_mut().unwrap();
                    front.1 -= 1;
                    if front.1 == 0 {
                        self.runs.pop_front();
                    }
                }
            }
        }
        self.accepts()
    }
    fn accepts(&self) -> bool {
        let c = self.runs.front().unwrap().0;
        self.cong.tag.as_ref().is_some_and(|t| t[c])
    }
    fn space_bits(&self) -> usize {
        let w = width(self.cong.index());
        gamma_len(self.runs.len() as u64) + self.runs.iter().map(|&(_, k)| w + gamma_len(k as u64 - 1)).sum::<usize>()
    }
    fn window_len(&self) -> usize {
        self.runs.iter().map(|&(_, k)| k).sum::<usize>() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Int(Sym),
    /// Unmatched return, read on the empty stack.
    Ret(Sym),
    /// Unmatched call.
    Call(Sym),
    Block { c: Sym, inner: Vec<Node>, r: Sym, phi: Transform },
}

/// The window as its monotonic factorization: a top-level sequence of
/// unmatched returns, unmatched calls, internal letters and matched blocks
/// `c z r` carrying their state transformation. Popping the oldest letter
/// of a block exposes its interior and turns `r` into an unmatched return.
///
/// Meter: each level is run-length compressed; a level is gamma(#runs) and
/// per run a 2-bit tag, the letter(s) in fixed width, gamma(count − 1), and
/// for blocks the interior level recursively.
pub struct FlatWindow {
    vpa: Vpa,
    top: VecDeque<Node>,
    calls: usize,
    len: usize,
}

impl FlatWindow {
    pub fn new(vpa: Vpa) -> Self {
        FlatWindow { vpa, top: VecDeque::new(), calls: 0, len: 0 }
    }

    fn apply(&self, n: &Node, p: usize) -> usize {
        match n {
            Node::Int(a) => self.vpa.int[p][*a],
            Node::Ret(r) => self.vpa.ret[p][*r][0],
            Node::Call(c) => self.vpa.call[p][*c].1,
            Node::Block { phi, .. } => phi[p],
        }
    }

    fn level_bits(&self, level: &[&Node]) -> usize {
        let w = width(self.vpa.alpha.len());
        let mut bits = 0;
        let mut runs = 0;
        let mut i = 0;
        while i < level.len() {
            let mut j = i + 1;
            while j < level.len() && level[j] == level[i] {
                j += 1;
            }
            runs += 1;
            bits += 2 + gamma_len((j - i - 1) as u64);
            bits += match level[i] {
                Node::Block { inner, .. } => 2 * w + self.level_bits(&inner.iter().collect::<Vec<_>>()),
                _ => w,
            };
            i = j;
        }
        bits + gamma_len(runs as u64)
    }
}

impl Swa for FlatWindow {
    fn step(&mut self, op: WindowOp) -> bool {
        match op {
            WindowOp::Push(a) => {
                self.len += 1;
                match self.vpa.alpha.kind(a) {
                    Kind::Internal => self.top.push_back(Node::Int(a)),
                    Kind::Call => {
                        self.calls += 1;
                        self.top.push_back(Node::Call(a));
                    }
                    Kind::Return if self.calls == 0 => self.top.push_back(Node::Ret(a)),
                    Kind::Return => {
                        let mut inner = Vec::new();
                        let c = loop {
                            match self.top.pop_back().unwrap() {
                                Node::Call(c) => break c,
                                n => inner.push(n),
                            }
                        };
                        inner.reverse();
                        self.calls -= 1;
                        let id: Transform = (0..self.vpa.num_states()).collect();
                        let z = inner.iter().fold(id, |t, n| t.iter().map(|&p| self.apply(n, p)).collect());
                        let phi = self.vpa.wrap(c, &z, a);
                        self.top.push_back(Node::Block { c, inner, r: a, phi });
                    }
                }
            }
            WindowOp::Pop => {
                if let Some(front) = self.top.pop_front() {
                    self.len -= 1;
                    match front {
                        Node::Call(_) => self.calls -= 1,
                        Node::Block { inner, r, .. } => {
                            self.top.push_front(Node::Ret(r));
                            for n in inner.into_iter().rev() {
                                self.top.push_front(n);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        self.accepts()
    }
    fn accepts(&self) -> bool {
        let q = self.top.iter().fold(self.vpa.initial, |p, n| self.apply(n, p));
        self.vpa.finals[q]
    }
    fn space_bits(&self) -> usize {
        self.level_bits(&self.top.iter().collect::<Vec<_>>())
    }
    fn window_len(&self) -> usize {
        self.len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProfileMethod {
    Oracle,
    Measured,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceProfile {
    /// `|ĉν(Σ^{≤n})|` (oracle) or the largest observed state (measured).
    pub counts: Vec<u64>,
    /// `V(n)` in bits.
    pub bits: Vec<u32>,
    pub method: ProfileMethod,
}

fn floor_log2(x: u64) -> u32 {
    if x == 0 {
        0
    } else {
        63 - x.leading_zeros()
    }
}

/// `V(n) = ⌊log₂ |ĉν(Σ^{≤n})|⌋` by enumerating suffix-class tuples.
pub fn optimal_space_profile(m: &Machine, n_max: usize, budget: u64) -> Result<SpaceProfile> {
    let counts: Vec<u64> = match m {
        Machine::Dfa(d) => {
            let layers = suffix_expansion_layers(&nerode_congruence(d), n_max, budget)?;
            layers.iter().scan(0u64, |acc, l| {
                *acc += l.len() as u64;
                Some(*acc)
            })
            .collect()
        }
        Machine::Vpa(v) => {
            let nu = |w: &[Sym]| Some(v.config_word(&v.nu(w)));
            census(v.alpha.len(), n_max, &|_| true, &nu, CensusMode::SuffixExpansion, budget)?.cumulative
        }
        _ => return Err(Error::KindMachineMismatch("the oracle needs a DFA or a VPA".into())),
    };
    let bits = counts.iter().map(|&c| floor_log2(c)).collect();
    Ok(SpaceProfile { counts, bits, method: ProfileMethod::Oracle })
}

/// Largest meter reading per window length over a random stream that first
/// fills the window to `n_max` and then slides it.
pub fn measured_profile(swa: &mut dyn Swa, sigma: usize, n_max: usize, steps: usize, rng: &mut impl rand::Rng) -> SpaceProfile {
    let mut worst = vec![0u64; n_max + 1];
    worst[0] = swa.space_bits() as u64;
    for _ in 0..steps {
        let op = if swa.window_len() < n_max && rng.gen_bool(0.6) { WindowOp::Push(rng.gen_range(0..sigma)) } else { WindowOp::Pop };
        swa.step(op);
        let n = swa.window_len();
        worst[n] = worst[n].max(swa.space_bits() as u64);
    }
    for n in 1..=n_max {
        worst[n] = worst[n].max(worst[n - 1]);
    }
    SpaceProfile { bits: worst.iter().map(|&b| b as u32).collect(), counts: worst, method: ProfileMethod::Measured }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::examples::*;
    use crate::vpa::fixtures;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ops(rng: &mut ChaCha8Rng, sigma: usize, count: usize, cap: usize) -> Vec<WindowOp> {
        let mut len = 0usize;
        (0..count)
            .map(|_| {
                let push = len < cap && rng.gen_bool(0.55);
                if push {
                    len += 1;
                    WindowOp::Push(rng.gen_range(0..sigma))
                } else {
                    len = len.saturating_sub(1);
                    WindowOp::Pop
                }
            })
            .collect()
    }

    fn differential(mut a: Box<dyn Swa>, mut b: Box<dyn Swa>, ops: &[WindowOp]) {
        assert_eq!(a.accepts(), b.accepts());
        for (t, &op) in ops.iter().enumerate() {
            assert_eq!(a.step(op), b.step(op), "step {t}");
            assert_eq!(a.window_len(), b.window_len());
        }
    }

    #[test]
    fn wnd_examples() {
        use WindowOp::*;
        assert_eq!(wnd(&[Push(0), Push(1), Pop]), vec![1]);
        assert_eq!(wnd(&[Pop]), Vec::<Sym>::new());
        assert_eq!(wnd(&[Push(0), Pop, Pop, Push(1)]), vec![1]);
    }

    proptest! {
        #[test]
        fn wnd_defining_equations(w in proptest::collection::vec(0usize..3, 0..12), a in 0usize..3) {
            let mut x: VecDeque<Sym> = w.iter().copied().collect();
            wnd_apply(&mut x, WindowOp::Push(a));
            let mut expect = w.clone();
            expect.push(a);
            prop_assert_eq!(Vec::from(x), expect);
            let mut y: VecDeque<Sym> = w.iter().copied().collect();
            wnd_apply(&mut y, WindowOp::Pop);
            prop_assert_eq!(Vec::from(y), w.get(1..).unwrap_or(&[]).to_vec());
        }
    }

    #[test]
    fn stream_tokens() {
        let ab = Alphabet::new(["a", "b"]);
        assert_eq!(parse_stream(&ab, "a b pop\n a").unwrap(), vec![WindowOp::Push(0), WindowOp::Push(1), WindowOp::Pop, WindowOp::Push(0)]);
        assert!(parse_stream(&ab, "a x").is_err());
    }

    #[test]
    fn counter_la_example_stream() {
        let mut c = CounterLa::new(0);
        let bits: Vec<bool> = [WindowOp::Push(0), WindowOp::Push(1), WindowOp::Pop, WindowOp::Pop].iter().map(|&op| c.step(op)).collect();
        assert_eq!(bits, vec![true, true, false, false]);
    }

    #[test]
    fn counter_la_agrees_and_stays_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ops = random_ops(&mut rng, 2, 10_000, 256);
        let mut c = CounterLa::for_dfa(&contains_a()).unwrap();
        let d = contains_a();
        let mut t = Trivial::new(2, move |w| d.accepts(w));
        for &op in &ops {
            assert_eq!(c.step(op), t.step(op));
            let n = c.window_len();
            assert!(c.space_bits() <= 2 * (floor_log2(n as u64 + 2) as usize + 2));
        }
        assert!(CounterLa::for_dfa(&first_a()).is_err());
    }

    #[test]
    fn empty_stream_bits() {
        for d in [contains_a(), universal(), empty()] {
            let m = Machine::Dfa(d.clone());
            for k in [SwaKind::Trivial, SwaKind::PathSummary] {
                assert_eq!(make_swa(k, &m).unwrap().accepts(), d.accepts(&[]));
            }
        }
        let v = fixtures::wm();
        assert_eq!(make_swa(SwaKind::FlatWindow, &Machine::Vpa(v.clone())).unwrap().accepts(), v.accepts(&[]));
    }

    #[test]
    fn trivial_meter_counts_letters() {
        let d = contains_a();
        let mut t = Trivial::new(4, move |w| d.accepts(w));
        for _ in 0..10 {
            t.step(WindowOp::Push(1));
        }
        assert!(t.space_bits() >= 10 * 2);
    }

    #[test]
    fn path_summary_matches_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [contains_a(), first_a(), a_star_b_star(), ab_or_ba_star(), empty()] {
            let ops = random_ops(&mut rng, 2, 10_000, 256);
            let m = Machine::Dfa(d);
            differential(make_swa(SwaKind::PathSummary, &m).unwrap(), make_swa(SwaKind::Trivial, &m).unwrap(), &ops);
        }
    }

    #[test]
    fn path_summary_on_la_uses_two_runs() {
        let mut p = PathSummary::new(&contains_a());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for op in random_ops(&mut rng, 2, 2000, 200) {
            p.step(op);
            assert!(p.runs() <= 2);
        }
    }

    #[test]
    fn flat_window_matches_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for v in fixtures::all() {
            let k = v.alpha.len();
            let ops = random_ops(&mut rng, k, 10_000, 256);
            let m = Machine::Vpa(v);
            differential(make_swa(SwaKind::FlatWindow, &m).unwrap(), make_swa(SwaKind::Trivial, &m).unwrap(), &ops);
        }
    }

    #[test]
    fn kind_mismatch() {
        let v = Machine::Vpa(fixtures::wm());
        assert!(matches!(make_swa(SwaKind::PathSummary, &v), Err(Error::KindMachineMismatch(_))));
        assert!(matches!(make_swa(SwaKind::FlatWindow, &Machine::Dfa(contains_a())), Err(Error::KindMachineMismatch(_))));
    }

    #[test]
    fn oracle_examples() {
        let p = optimal_space_profile(&Machine::Dfa(contains_a()), 10, u64::MAX).unwrap();
        for n in 0..=10u64 {
            assert_eq!(p.counts[n as usize], (n + 1) * (n + 2) / 2);
        }
        assert_eq!(p.bits[2], 2);
        let e = optimal_space_profile(&Machine::Dfa(empty()), 10, u64::MAX).unwrap();
        assert_eq!(e.counts, (1..=11).collect::<Vec<u64>>());
        let f = optimal_space_profile(&Machine::Dfa(first_a()), 10, u64::MAX).unwrap();
        for n in 0..=10 {
            assert!(f.bits[n] as usize >= n);
        }
    }

    /// Oracle by brute force: distinct tuples of Nerode classes of suffixes.
    #[test]
    fn oracle_matches_brute_force() {
        for d in [contains_a(), first_a(), a_star_b_star()] {
            let cong = nerode_congruence(&d);
            let p = optimal_space_profile(&Machine::Dfa(d), 8, u64::MAX).unwrap();
            let tuples: std::collections::HashSet<Vec<usize>> = crate::words::words_upto(2, 8)
                .iter()
                .map(|w| (0..=w.len()).map(|i| cong.class_of(&w[i..])).collect())
                .collect();
            assert_eq!(p.counts[8], tuples.len() as u64);
        }
    }

    #[test]
    fn oracle_monotone_with_log_floor() {
        let mut machines: Vec<Machine> = [contains_a(), first_a(), a_star_b_star(), ab_or_ba_star()].into_iter().map(Machine::Dfa).collect();
        machines.extend(fixtures::all().into_iter().map(Machine::Vpa));
        for m in &machines {
            let n = if matches!(m, Machine::Vpa(_)) { 6 } else { 10 };
            let p = optimal_space_profile(m, n, 1 << 24).unwrap();
            assert!(p.bits.windows(2).all(|x| x[0] <= x[1]));
            for (k, &b) in p.bits.iter().enumerate() {
                assert!(b as i64 >= floor_log2(k as u64 + 1) as i64 - 1);
            }
        }
    }

    #[test]
    fn measured_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = CounterLa::new(0);
        let p = measured_profile(&mut s, 2, 32, 4000, &mut rng);
        assert!(p.bits.windows(2).all(|x| x[0] <= x[1]));
        assert_eq!(p.method, ProfileMethod::Measured);
    }
}
