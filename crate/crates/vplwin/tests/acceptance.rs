//! The twelve acceptance criteria, one report line each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::io::Write;
use std::time::{Duration, Instant};
use vplwin::cfg::{cfg_bounded, Boundedness, Cfg};
use vplwin::classify::{classify_regular, classify_vpl, replay_dfa, replay_vpa, ClassifyParams, Evidence, Klass};
use vplwin::dichotomy::{log_fit, search_critical_tuple, verify_critical_tuple, CriticalSearch, CriticalTuple, TreeCodec};
use vplwin::flattening::{bounded_overapprox, monotonic_factorizations, Flattener};
use vplwin::growth::{census, growth_verdict, CensusMode, GrowthKind};
use vplwin::nfa::Nfa;
use vplwin::regular::{nerode_congruence, Dfa};
use vplwin::text::{parse_machine, Machine};
use vplwin::transducer::{Lookahead, Transducer};
use vplwin::vpa::{monotonic_factorization, PushdownAlphabet, Vpa};
use vplwin::window::{make_swa, optimal_space_profile, wnd_apply, SwaKind, WindowOp};
use vplwin::words::{words_of_len, words_upto};
use vplwin::{Sym, Word};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn load(name: &str) -> Machine {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_machine(&std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))).unwrap()
}

fn dfa(name: &str) -> Dfa {
    match load(name) {
        Machine::Dfa(d) => d,
        _ => panic!("{name} is not a DFA"),
    }
}

fn vpa(name: &str) -> Vpa {
    match load(name) {
        Machine::Vpa(v) => v,
        _ => panic!("{name} is not a VPA"),
    }
}

fn transducer(name: &str) -> Transducer {
    match load(name) {
        Machine::Transducer(t) => t,
        _ => panic!("{name} is not a transducer"),
    }
}

fn grammar(name: &str) -> Cfg {
    match load(name) {
        Machine::Cfg(g) => g,
        _ => panic!("{name} is not a grammar"),
    }
}

const VPAS: [&str; 6] = ["la.vpa", "matched.vpa", "wm.vpa", "dyckish.vpa", "first-a.vpa", "toplast.vpa"];
const DFAS: [&str; 4] = ["la.dfa", "first-a.dfa", "empty.dfa", "univ.dfa"];

fn c1_window_semantics() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut w = VecDeque::new();
    // Reference: a growable array with a moving head.
    let (mut buf, mut head) = (Vec::<Sym>::new(), 0usize);
    let mut mismatches = 0;
    for _ in 0..100_000 {
        let op = if rng.gen_bool(0.5) { WindowOp::Push(rng.gen_range(0..3)) } else { WindowOp::Pop };
        wnd_apply(&mut w, op);
        match op {
            WindowOp::Push(a) => buf.push(a),
            WindowOp::Pop => head = (head + 1).min(buf.len()),
        }
        if !w.iter().eq(buf[head..].iter()) {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches"))?;
    within(t, Duration::from_secs(5))?;
    Ok("10^5 operations, 0 mismatches".into())
}

fn c2_counter_la() -> Outcome {
    let la = Machine::Dfa(dfa("la.dfa"));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut steps, mut longest) = (0usize, 0usize);
    for s in 0..10_000 {
        let mut fast = make_swa(SwaKind::CounterLa, &la).map_err(|e| e.to_string())?;
        let mut slow = make_swa(SwaKind::Trivial, &la).map_err(|e| e.to_string())?;
        let len = if s % 100 == 0 { 700 } else { rng.gen_range(1..120) };
        let cap = if s % 100 == 0 { 256 } else { rng.gen_range(1..=256) };
        for _ in 0..len {
            let push = fast.window_len() < cap && rng.gen_bool(0.6);
            let op = if push { WindowOp::Push(rng.gen_range(0..2)) } else { WindowOp::Pop };
            let (x, y) = (fast.step(op), slow.step(op));
            ensure(x == y, format!("stream {s}: answers differ"))?;
            let n = fast.window_len();
            let bound = 2 * ((usize::BITS - 1 - (n + 2).leading_zeros()) as usize + 2);
            ensure(fast.space_bits() <= bound, format!("{} bits at window {n}, bound {bound}", fast.space_bits()))?;
            longest = longest.max(n);
            steps += 1;
        }
    }
    Ok(format!("10^4 streams, {steps} steps, windows up to {longest}"))
}

fn c3_la_oracle() -> Outcome {
    let t = Instant::now();
    let d = dfa("la.dfa");
    let p = optimal_space_profile(&Machine::Dfa(d.clone()), 10, 1 << 24).map_err(|e| e.to_string())?;
    // Brute force: a window is summarized by its length and the membership
    // of each of its suffixes; for LA membership is the Nerode class.
    let mut seen = HashSet::new();
    for n in 0..=10 {
        for w in words_of_len(2, n) {
            seen.insert((0..=n).map(|i| d.accepts(&w[i..])).collect::<Vec<_>>());
        }
        let closed = ((n + 1) * (n + 2) / 2) as u64;
        ensure(p.counts[n] == closed && seen.len() as u64 == closed, format!("n = {n}: oracle {}, brute {}, closed {closed}", p.counts[n], seen.len()))?;
    }
    ensure(p.bits[2] == 2, format!("V(2) = {}", p.bits[2]))?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("counts {:?}, V(2) = 2", p.counts))
}

fn c4_twenty_letter_word() -> Outcome {
    let alpha = PushdownAlphabet::new(&["a"], &["b"], &["c"]).map_err(|e| e.to_string())?;
    let w = alpha.symbols.parse_word("bcabbcabaabcaaababba").map_err(|e| e.to_string())?;
    ensure(w.len() == 20, "word length")?;
    let f = monotonic_factorization(&alpha, &w);
    let shown: Vec<String> = f.iter().filter(|x| !x.is_empty()).map(|x| alpha.symbols.show(x)).collect();
    let got = shown.join(" | ");
    ensure(got == "bcabb | cab | a | abc | a | aababb | a", got.clone())?;
    Ok(got)
}

fn c5_rat_trans() -> Outcome {
    let t = Instant::now();
    let f = transducer("leftblock.tdc");
    let g = |x: &[Sym]| f.evaluate(x).ok().flatten();
    let c = census(2, 10, &|_| true, &g, CensusMode::SuffixExpansion, 1 << 24).map_err(|e| e.to_string())?;
    for n in 1..=10 {
        ensure(c.per_length[n] == 1 << n, format!("n = {n}: {}", c.per_length[n]))?;
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("{:?}", &c.per_length[1..]))
}

fn c6_nu_f() -> Outcome {
    let mut checked = 0usize;
    for name in VPAS {
        let v = vpa(name);
        let fl = Flattener::new(&v);
        for w in words_upto(v.alpha.len(), 8) {
            let canon = monotonic_factorization(&v.alpha, &w);
            let alt = monotonic_factorizations(&v, &w).into_iter().find(|f| *f != canon);
            for f in std::iter::once(canon).chain(alt) {
                let s = fl.flatten(&w, Some(&f)).map_err(|e| format!("{name}: {e}"))?;
                let nf = fl.nu_f(&s).map_err(|e| format!("{name}: {e}"))?;
                ensure(nf == v.nu(&w), format!("{name}: ν_f differs on {}", v.show_word(&w)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} flattenings over {} VPAs, 0 failures", VPAS.len()))
}

fn c7_flat_reg_eq() -> Outcome {
    let mut done = Vec::new();
    for name in VPAS {
        let v = vpa(name);
        let fl = Flattener::new(&v);
        let g = fl.state_grammars().map_err(|e| e.to_string())?;
        if matches!(fl.s0_bounded(&g), Boundedness::Unbounded { .. }) {
            continue;
        }
        let rf = fl.build_reg_flat().map_err(|e| e.to_string())?;
        let flat: BTreeSet<_> = fl.flat_words(&g, 5).iter().flatten().map(|s| fl.nu_f(s).unwrap()).collect();
        let reg: BTreeSet<_> = (0..=5).flat_map(|l| rf.dfa.accepted_of_len(l)).map(|r| fl.nu_f(&r).unwrap()).collect();
        ensure(flat == reg, format!("{name}: {} vs {} images", flat.len(), reg.len()))?;
        done.push(format!("{name} ({} images)", flat.len()));
    }
    ensure(done.len() >= 2, "fewer than two VPAs with bounded S0")?;
    Ok(done.join(", "))
}

/// `{(a, i) : some word has a suffix of length i ≤ depth starting with a}`.
fn psi_heads(sufs: impl IntoIterator<Item = Word>) -> BTreeSet<(Sym, usize)> {
    sufs.into_iter().filter(|w| !w.is_empty()).map(|w| (w[0], w.len())).collect()
}

fn c8_apx() -> Outcome {
    let g = grammar("anbn.cfg");
    let ap = bounded_overapprox(&g).map_err(|e| e.to_string())?;
    let k = g.words_by_length(10);
    for l in 0..=10 {
        for w in &k[l] {
            ensure(ap.accepts(w), format!("K ⊄ R at {w:?}"))?;
        }
        let r = ap.dfa.accepted_of_len(l);
        ensure(k[l].is_empty() == r.is_empty(), format!("length sets differ at {l}"))?;
    }
    let psi_k = psi_heads(g.suffix_grammar().words_by_length(10).into_iter().flatten());
    let mut suf = Nfa::from_dfa(&ap.dfa);
    suf.initial = ap.dfa.reachable_bfs();
    let suf = suf.determinize();
    let psi_r = psi_heads((0..=10).flat_map(|l| suf.accepted_of_len(l)));
    ensure(psi_k == psi_r, "Ψ differs")?;
    Ok(format!("K ⊆ R, equal lengths and Ψ ({} pairs) to depth 10", psi_k.len()))
}

fn c9_critical_tuples() -> Outcome {
    let fa = dfa("first-a.dfa");
    let p = |d: &Dfa, s: &str| d.alphabet.parse_word(s).unwrap();
    let ct = CriticalTuple { u2: p(&fa, "a"), v2: p(&fa, "b"), u: p(&fa, "aa"), v: p(&fa, "bb") };
    ensure(verify_critical_tuple(&nerode_congruence(&fa.minimize()), &ct), "(a, b, aa, bb) rejected")?;
    let la = dfa("la.dfa");
    let r = search_critical_tuple(&nerode_congruence(&la.minimize()), 4).map_err(|e| e.to_string())?;
    ensure(r == CriticalSearch::NoneBounded { bound: 4 }, format!("LA search: {r:?}"))?;
    let params = ClassifyParams { census_depth: Some(10), ..ClassifyParams::default() };
    let mut got = Vec::new();
    for (name, want) in [("empty.dfa", Klass::Constant), ("univ.dfa", Klass::Constant), ("la.dfa", Klass::Logarithmic), ("first-a.dfa", Klass::Linear)] {
        let d = dfa(name);
        let v = classify_regular(&d, &params).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.klass == want, format!("{name}: {}", v.klass))?;
        let counts = v.evidence.iter().find_map(|e| match e {
            Evidence::Census { counts, .. } => Some(counts.clone()),
            _ => None,
        });
        ensure(counts.as_ref().map(Vec::len) == Some(11), format!("{name}: census missing"))?;
        replay_dfa(&d, &v, &params).map_err(|e| format!("{name}: {e}"))?;
        got.push(format!("{name}: {}", v.klass));
    }
    Ok(got.join(", "))
}

fn c10_tree_encoding() -> Outcome {
    let t = transducer("trailblock.tdc");
    ensure(t.is_right_subsequential(), "trailblock is not right-subsequential")?;
    let la = Lookahead::trivial(&t).map_err(|e| e.to_string())?;
    // The codec refuses machines failing well-behavedness or carrying a critical tuple.
    let codec = TreeCodec::new(&la).map_err(|e| e.to_string())?;
    let entry = la.machine.initial[0];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let n = rng.gen_range(0..=60);
        let w: Word = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let tree = codec.encode(entry, &w);
        ensure(codec.deserialize(&codec.serialize(&tree)).as_ref() == Some(&tree), "serialization round trip")?;
        for i in 0..=n {
            ensure(codec.decode(&tree, n - i) == t.evaluate(&w[i..]).unwrap(), format!("decode differs on {w:?} at {i}"))?;
        }
    }
    let pts: Vec<(usize, f64)> = (4..=10)
        .map(|e| {
            let n = 1usize << e;
            let total: usize = (0..32)
                .map(|_| {
                    let w: Word = (0..n).map(|_| rng.gen_range(0..2)).collect();
                    codec.serialize(&codec.encode(entry, &w)).len()
                })
                .sum();
            (n, total as f64 / 32.0)
        })
        .collect();
    let (a, b, resid) = log_fit(&pts);
    ensure(b > 0.0 && resid < 0.1, format!("fit {a:.1} + {b:.1}·log n, residual {resid:.3}"))?;
    Ok(format!("100 words decoded; size ≈ {a:.1} + {b:.1}·log₂ n, residual {:.1}%", resid * 100.0))
}

/// The oracle trend agrees with the class: constant and logarithmic need a
/// polynomial census, linear needs `c(N) ≥ 2^{N/2}`.
fn consistent(klass: Klass, counts: &[u64]) -> bool {
    let n = counts.len() - 1;
    match klass {
        Klass::Constant | Klass::Logarithmic => growth_verdict(counts).kind == GrowthKind::Polynomial,
        Klass::Linear => counts[n] >= 1 << (n / 2),
    }
}

fn c11_trichotomy() -> Outcome {
    let t = Instant::now();
    let params = ClassifyParams::default();
    let mut got = Vec::new();
    for name in DFAS {
        let d = dfa(name).minimize();
        let v = classify_regular(&d, &params).map_err(|e| format!("{name}: {e}"))?;
        // Independent census: tuples of suffix states of the minimal DFA.
        let mut seen = HashSet::new();
        let counts: Vec<u64> = (0..=10)
            .map(|n| {
                for w in words_of_len(d.alphabet.len(), n) {
                    seen.insert((0..=n).map(|i| d.run_from(d.initial, &w[i..])).collect::<Vec<_>>());
                }
                seen.len() as u64
            })
            .collect();
        ensure(consistent(v.klass, &counts), format!("{name}: {} vs census {counts:?}", v.klass))?;
        replay_dfa(&d, &v, &params).map_err(|e| format!("{name}: {e}"))?;
        got.push(format!("{name} {}", v.klass));
    }
    for name in VPAS {
        let m = vpa(name);
        let v = classify_vpl(&m, &params).map_err(|e| format!("{name}: {e}"))?;
        let nu = |x: &[Sym]| Some(m.config_word(&m.nu(x)));
        let counts = census(m.alpha.len(), 8, &|_| true, &nu, CensusMode::SuffixExpansion, 1 << 26).map_err(|e| e.to_string())?.cumulative;
        ensure(consistent(v.klass, &counts), format!("{name}: {} vs census {counts:?}", v.klass))?;
        if v.klass == Klass::Constant {
            ensure(m.is_trivial().is_some(), format!("{name}: constant without triviality"))?;
        }
        replay_vpa(&m, &v, &params).map_err(|e| format!("{name}: {e}"))?;
        got.push(format!("{name} {}", v.klass));
    }
    within(t, Duration::from_secs(300))?;
    Ok(got.join(", "))
}

fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

fn c12_boundedness() -> Outcome {
    let anbn = grammar("anbn.cfg");
    let dyck = grammar("dyck.cfg");
    ensure(matches!(cfg_bounded(&anbn), Boundedness::Bounded { .. }), "ANBN not bounded")?;
    ensure(matches!(cfg_bounded(&dyck), Boundedness::Unbounded { .. }), "DYCK bounded")?;
    let counts = dyck.counts_by_length(12);
    // Brute force over {a, b}^12 with a running balance.
    let brute = words_of_len(2, 12)
        .iter()
        .filter(|w| {
            let mut h = 0i32;
            w.iter().all(|&x| {
                h += if x == 0 { 1 } else { -1 };
                h >= 0
            }) && h == 0
        })
        .count() as u64;
    ensure(counts[12] == 132 && brute == 132 && catalan(6) == 132, format!("grammar {} brute {brute}", counts[12]))?;
    for n in 0..=6 {
        ensure(counts[2 * n] == catalan(n as u64), format!("length {}", 2 * n))?;
    }
    Ok("ANBN bounded, DYCK unbounded, 132 Dyck words of length 12".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("window semantics", c1_window_semantics),
        ("counter-la against trivial", c2_counter_la),
        ("LA suffix-class oracle", c3_la_oracle),
        ("monotonic factorization of the 20-letter word", c4_twenty_letter_word),
        ("leftmost a-block suffix census", c5_rat_trans),
        ("ν_f of flattenings equals ν_A", c6_nu_f),
        ("ν_f images of Flat and RegFlat", c7_flat_reg_eq),
        ("bounded overapproximation of ANBN", c8_apx),
        ("critical tuples and regular verdicts", c9_critical_tuples),
        ("logarithmic tree encoding", c10_tree_encoding),
        ("classifier against the census", c11_trichotomy),
        ("grammar boundedness and Dyck counts", c12_boundedness),
    ];
    let mut failed = Vec::new();
    let out = std::io::stdout();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        // Straight to stdout so the lines survive output capture.
        let _ = writeln!(out.lock(), "criterion {:>2} {tag} {name}: {detail} [{:.1?}]", i + 1, t.elapsed());
        if r.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
