//! Constant / logarithmic / linear classification of window space, with the
//! evidence behind each verdict.
//!
//! Proofs come from exact procedures (emptiness, the pair graph, grammar
//! boundedness). Bounded searches and censuses only support a verdict; a
//! disagreement between the two is reported as an error.

use crate::cfg::{cfg_bounded, Boundedness, Cfg};
use crate::dichotomy::{
    default_window, fooling_from_critical_tuple, search_critical_tuple, verify_critical_tuple, verify_fooling_scheme,
    well_behaved_check, CriticalSearch, CriticalTuple, FoolingBounds, FoolingScheme, WellBehaved,
};
use crate::error::{Error, Result};
use crate::flattening::{FlatLetter, Flattener, RegFlat};
use crate::growth::{census, growth_verdict, CensusMode, GrowthKind};
use crate::par;
use crate::regular::{nerode_congruence, suffix_expansion_layers, Dfa, RightCongruence};
use crate::transducer::{derive_lookahead, AdjacencyBounds, LookaheadBounds};
use crate::vpa::Vpa;
use crate::words::{is_suffix, words_upto, Alphabet, Sym, Word};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Klass {
    Constant,
    Logarithmic,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Proved,
    OracleSupported,
    BoundedSearch,
}

/// Where the words of a fooling scheme live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// The input alphabet; `t` is the Nerode class (DFA) or `ν_A` (VPA).
    Input,
    /// Flattenings; `t` is `ν_f` on `Flat`.
    Flat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Trivial { universal: bool },
    CriticalTuple { tuple: CriticalTuple, normalized: CriticalTuple },
    SearchNegative { search: String, bound: usize },
    FoolingScheme { domain: Domain, scheme: FoolingScheme, distinct: Vec<usize> },
    UnboundedS0 { nonterminal: String, left: bool, pumps: (Word, Word) },
    BoundedS0 { words: Vec<Word> },
    /// `|Rep ∩ Γ^{≤h}|` for `h = 0..`.
    RepGrowth { counts: Vec<u64>, growth: GrowthKind },
    /// `|ĉ(Σ^{≤n})|` for `n = 0..`.
    Census { counts: Vec<u64>, growth: GrowthKind },
    Inconclusive { stage: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrichotomyVerdict {
    pub klass: Klass,
    pub confidence: Confidence,
    pub evidence: Vec<Evidence>,
    /// Letter names for the words in `evidence`.
    pub alphabet: Vec<String>,
    /// Letter names for schemes over flattenings; empty for DFAs.
    pub flat_alphabet: Vec<String>,
}

/// Bounds of the direct fooling-scheme search over the input alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectBounds {
    pub max_uv: usize,
    pub max_z: usize,
}

#[derive(Clone, Debug)]
pub struct ClassifyParams {
    /// Default 10 for DFAs, 8 for VPAs.
    pub census_depth: Option<usize>,
    /// Default `2 · index²`.
    pub search_bound: Option<usize>,
    /// Word extensions a census may spend.
    pub budget: u64,
    pub fooling: FoolingBounds,
    pub direct: DirectBounds,
    /// Also mine look-ahead witnesses of `t_f` on `RegFlat` for candidates.
    pub flat_candidates: bool,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            census_depth: None,
            search_bound: None,
            budget: 1 << 26,
            fooling: FoolingBounds { n_max: 5, slope: 64 },
            direct: DirectBounds { max_uv: 3, max_z: 2 },
            flat_candidates: false,
        }
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) => 2,
        Error::InconsistentEvidence(_) | Error::Validation(_) => 3,
        _ => 1,
    }
}

fn census_evidence(counts: Vec<u64>) -> (GrowthKind, Evidence) {
    let growth = growth_verdict(&counts).kind;
    (growth, Evidence::Census { counts, growth })
}

fn cumulative(layers: &[Vec<Vec<u32>>]) -> Vec<u64> {
    layers
        .iter()
        .scan(0u64, |acc, l| {
            *acc += l.len() as u64;
            Some(*acc)
        })
        .collect()
}

/// The Nerode class of `x` as a one-letter word.
fn class_word(cong: &RightCongruence) -> impl Fn(&[Sym]) -> Option<Word> + '_ {
    move |x| Some(vec![cong.class_of(x)])
}

/// Linear verdicts need a census that is not polynomial; logarithmic ones
/// need a polynomial census.
fn settle(klass: Klass, confidence: Confidence, growth: GrowthKind, depth: usize) -> Result<(Klass, Confidence)> {
    match (klass, growth) {
        (Klass::Linear, GrowthKind::Polynomial) => {
            Err(Error::InconsistentEvidence(format!("linear witness but the census is polynomial up to {depth}")))
        }
        (Klass::Logarithmic, GrowthKind::Exponential) => Err(Error::InconsistentEvidence(format!(
            "all searches negative but the census is exponential up to {depth}"
        ))),
        (Klass::Logarithmic, GrowthKind::Inconclusive) => {
            Err(Error::BudgetExceeded(format!("census inconclusive at depth {depth}; no tie-break for negative searches")))
        }
        _ => Ok((klass, confidence)),
    }
}

pub fn classify_regular(dfa: &Dfa, params: &ClassifyParams) -> Result<TrichotomyVerdict> {
    let depth = params.census_depth.unwrap_or(10);
    let d = dfa.minimize();
    let cong = nerode_congruence(&d);
    let (growth, census_ev) = census_evidence(cumulative(&suffix_expansion_layers(&cong, depth, params.budget)?));
    let mut evidence = Vec::new();
    let verdict = |klass, confidence, evidence| TrichotomyVerdict {
        klass,
        confidence,
        evidence,
        alphabet: d.alphabet.names.clone(),
        flat_alphabet: Vec::new(),
    };
    if d.is_empty() || d.is_universal() {
        evidence.push(Evidence::Trivial { universal: d.is_universal() });
        evidence.push(census_ev);
        return Ok(verdict(Klass::Constant, Confidence::Proved, evidence));
    }
    let bound = params.search_bound.unwrap_or_else(|| crate::dichotomy::default_search_bound(&cong));
    let (klass, confidence) = match search_critical_tuple(&cong, bound)? {
        CriticalSearch::Found { tuple, normalized } => {
            if !verify_critical_tuple(&cong, &tuple) {
                return Err(Error::Validation("search returned a tuple the pair graph rejects".into()));
            }
            let t = class_word(&cong);
            // The tuple itself counts 2^n suffix-class tuples when {u, v}
            // is a suffix code; the normalized one is tried second.
            for ct in [&tuple, &normalized] {
                let fs = FoolingScheme { u2: ct.u2.clone(), v2: ct.v2.clone(), u: ct.u.clone(), v: ct.v.clone(), z: vec![(0, Vec::new())] };
                if let Ok(r) = verify_fooling_scheme(&t, &fs, params.fooling) {
                    evidence.push(Evidence::FoolingScheme { domain: Domain::Input, scheme: fs, distinct: r.distinct });
                    break;
                }
            }
            evidence.insert(0, Evidence::CriticalTuple { tuple, normalized });
            (Klass::Linear, Confidence::Proved)
        }
        CriticalSearch::NoneBounded { bound } => {
            evidence.push(Evidence::SearchNegative { search: "critical tuple".into(), bound });
            (Klass::Logarithmic, Confidence::OracleSupported)
        }
    };
    evidence.push(census_ev);
    let (klass, confidence) = settle(klass, confidence, growth, depth)?;
    Ok(verdict(klass, confidence, evidence))
}

/// `|Rep ∩ Γ^{≤h}|` for `h ≤ depth`, or None when the configurations of
/// some height exceed the budget.
pub fn rep_growth(vpa: &Vpa, depth: usize, budget: u64) -> Result<Option<Vec<u64>>> {
    let mut reps = HashSet::new();
    let mut counts = Vec::new();
    let mut spent = 0u64;
    for h in 0..=depth {
        let layer = vpa.reachable_of_height(h);
        spent += layer.len() as u64;
        if spent > budget {
            return Ok(None);
        }
        for c in layer {
            reps.insert(vpa.rep(&c)?);
        }
        counts.push(reps.len() as u64);
    }
    Ok(Some(counts))
}

/// Constant-`Z` schemes `(u2, v2, u1 u2, v1 v2, {z})` in canonical order,
/// verified against `t`.
pub fn direct_fooling_search(
    sigma: usize,
    t: &(dyn Fn(&[Sym]) -> Option<Word> + Sync),
    b: DirectBounds,
    fb: FoolingBounds,
) -> Option<(FoolingScheme, Vec<usize>)> {
    let uv: Vec<Word> = words_upto(sigma, b.max_uv).into_iter().filter(|w| !w.is_empty()).collect();
    let zs = words_upto(sigma, b.max_z);
    let pairs: Vec<(usize, usize)> = (0..uv.len()).flat_map(|i| (i + 1..uv.len()).map(move |j| (i, j))).collect();
    let quick = FoolingBounds { n_max: 2.min(fb.n_max), ..fb };
    let found = par::map(&pairs, |&(i, j)| {
        let (u, v) = (&uv[i], &uv[j]);
        for k in 1..=u.len().min(v.len()) {
            let (u2, v2) = (u[u.len() - k..].to_vec(), v[v.len() - k..].to_vec());
            if u2 == v2 {
                continue;
            }
            for z in &zs {
                let fs = FoolingScheme { u2: u2.clone(), v2: v2.clone(), u: u.clone(), v: v.clone(), z: vec![(0, z.clone())] };
                if verify_fooling_scheme(t, &fs, quick).is_err() {
                    continue;
                }
                if let Ok(r) = verify_fooling_scheme(t, &fs, fb) {
                    return Some((fs, r.distinct));
                }
            }
        }
        None
    });
    found.into_iter().flatten().next()
}

fn config_fn(vpa: &Vpa) -> impl Fn(&[Sym]) -> Option<Word> + Sync + '_ {
    move |x| Some(vpa.config_word(&vpa.nu(x)))
}

/// `ν_f` on `Flat`, undefined elsewhere.
pub fn flat_nu<'a>(fl: &'a Flattener<'a>, rf: &'a RegFlat) -> impl Fn(&[Sym]) -> Option<Word> + Sync + 'a {
    move |x| {
        if !fl.is_flat(&rf.grammars, x) {
            return None;
        }
        fl.nu_f(x).ok().map(|c| fl.vpa.config_word(&c))
    }
}

/// `ν_f` on `RegFlat`, undefined elsewhere.
pub fn reg_flat_nu<'a>(fl: &'a Flattener<'a>, rf: &'a RegFlat) -> impl Fn(&[Sym]) -> Option<Word> + Sync + 'a {
    move |x| {
        if !rf.dfa.accepts(x) {
            return None;
        }
        fl.nu_f(x).ok().map(|c| fl.vpa.config_word(&c))
    }
}

/// DFA over `Σ_f` for words of length `len` with `letter` at `pos`.
fn positional_dfa(alpha: &Alphabet, len: usize, pos: usize, letter: Sym) -> Dfa {
    let sink = len + 1;
    let delta = (0..=sink)
        .map(|i| (0..alpha.len()).map(|a| if i < len && (i != pos || a == letter) { i + 1 } else { sink }).collect())
        .collect();
    let mut finals = vec![false; len + 2];
    finals[len] = true;
    Dfa { alphabet: alpha.clone(), states: (0..=sink).map(|i| i.to_string()).collect(), initial: 0, finals, delta }
}

fn quotient<'g>(rf: &'g RegFlat, fl: &Flattener, tau: Sym) -> Result<(usize, &'g Cfg)> {
    match fl.alpha.decode(tau) {
        FlatLetter::Transform(i) => Ok((i, &rf.grammars.quotients[i])),
        _ => Err(Error::Validation("state letters must follow a transform".into())),
    }
}

/// Replace every complete `R_1`-factor (transform first) of `w` by a word
/// of `S_1` with the same transform and length. Factors already in `S_1`
/// are kept.
fn apx_factors(fl: &Flattener, rf: &RegFlat, w: &[Sym]) -> Result<Word> {
    let mut out = Vec::with_capacity(w.len());
    let mut i = 0;
    while i < w.len() {
        let e = (i + 1..w.len()).find(|&k| !fl.alpha.is_state(w[k])).unwrap_or(w.len());
        let seg = &w[i..e];
        match fl.alpha.decode(seg[0]) {
            FlatLetter::Transform(_) => {
                let (_, q) = quotient(rf, fl, seg[0])?;
                out.push(seg[0]);
                if q.accepts(&seg[1..]) {
                    out.extend(&seg[1..]);
                } else {
                    out.extend(q.least_word(seg.len() - 1, None).ok_or_else(|| Error::NoApx(fl.show(seg)))?);
                }
            }
            _ => out.extend(seg),
        }
        i = e;
    }
    Ok(out)
}

/// If the last `tail` letters of `x` start inside an `R_1`-factor, replace
/// that factor by an `S_1` word with the same transform and length that
/// keeps the state at the cut.
fn repair_crossing(fl: &Flattener, rf: &RegFlat, x: &[Sym], tail: usize) -> Result<Word> {
    let j = x.len() - tail;
    if tail == 0 || !fl.alpha.is_state(x[j]) {
        return Ok(x.to_vec());
    }
    let s = (0..j)
        .rev()
        .find(|&i| !fl.alpha.is_state(x[i]))
        .ok_or_else(|| Error::Validation("the suffix starts inside a leading state run".into()))?;
    let e = (j..x.len()).find(|&i| !fl.alpha.is_state(x[i])).unwrap_or(x.len());
    let (_, q) = quotient(rf, fl, x[s])?;
    let body = &x[s + 1..e];
    let body = if q.accepts(body) {
        body.to_vec()
    } else {
        let d = positional_dfa(&fl.alpha.alphabet, body.len(), j - s - 1, x[j]);
        q.intersect_witness(&d).ok_or_else(|| Error::NoApx(fl.show(&x[s..e])))?
    };
    Ok([&x[..=s], body.as_slice(), &x[e..]].concat())
}

/// Turn a scheme verified for `ν_f` on `RegFlat` into one for `ν_f` on
/// `Flat`: rotate so that `u`, `v` and every `z` start with a call or a
/// transform, repair the factor cut by `u2` (resp. `v2`), then move every
/// remaining factor into `S_1`. The result is verified before it is
/// returned.
pub fn transfer_fooling_scheme(fl: &Flattener, rf: &RegFlat, fs: &FoolingScheme, b: FoolingBounds) -> Result<(FoolingScheme, Vec<usize>)> {
    let lead = |w: &[Sym]| w.first().is_none_or(|&s| !fl.alpha.is_state(s));
    let mut fs = fs.clone();
    if !(lead(&fs.u) && lead(&fs.v) && fs.z.iter().all(|(_, z)| lead(z))) {
        let has_lead = |w: &[Sym]| w.iter().any(|&s| !fl.alpha.is_state(s));
        if !has_lead(&fs.u) {
            if !has_lead(&fs.v) {
                return Err(Error::Precondition("rotation impossible: u and v are both state words".into()));
            }
            std::mem::swap(&mut fs.u, &mut fs.v);
            std::mem::swap(&mut fs.u2, &mut fs.v2);
        }
        let k = fs.u.iter().position(|&s| !fl.alpha.is_state(s)).expect("checked above");
        let (u3, u4) = (fs.u[..k].to_vec(), fs.u[k..].to_vec());
        fs = FoolingScheme {
            u2: [fs.u2.as_slice(), &u3].concat(),
            v2: [fs.v2.as_slice(), &u3].concat(),
            u: [u4.as_slice(), &fs.u, &u3].concat(),
            v: [u4.as_slice(), &fs.v, &u3].concat(),
            z: fs.z.iter().map(|(n, z)| (*n, [u4.as_slice(), z].concat())).collect(),
        };
    }
    // Replacements keep factor lengths, so the cut between `u1` and `u2`
    // stays put; the factor across it is already in `S_1` after the repair.
    let fix = |x: &[Sym], x2: &[Sym]| apx_factors(fl, rf, &repair_crossing(fl, rf, x, x2.len())?);
    let (u, v) = (fix(&fs.u, &fs.u2)?, fix(&fs.v, &fs.v2)?);
    let out = FoolingScheme {
        u2: u[u.len() - fs.u2.len()..].to_vec(),
        v2: v[v.len() - fs.v2.len()..].to_vec(),
        u,
        v,
        z: fs.z.iter().map(|(n, z)| Ok((*n, apx_factors(fl, rf, z)?))).collect::<Result<_>>()?,
    };
    debug_assert!(is_suffix(&out.u2, &out.u) && out.u2.len() == out.v2.len());
    let r = verify_fooling_scheme(&flat_nu(fl, rf), &out, b)?;
    Ok((out, r.distinct))
}

/// Candidates from the look-ahead of `t_f` on `RegFlat`: a failure of
/// well-behavedness or a critical tuple. `t_f` only agrees with `ν_f` up to
/// `rep`, so each candidate is re-verified for `ν_f` before transfer.
fn flat_candidates(fl: &Flattener, rf: &RegFlat, params: &ClassifyParams, evidence: &mut Vec<Evidence>) -> Option<(FoolingScheme, Vec<usize>)> {
    let fail = |evidence: &mut Vec<Evidence>, reason: String| {
        evidence.push(Evidence::Inconclusive { stage: "flat candidates".into(), reason });
    };
    let tf = fl.t_f_transducer().restrict_domain(&rf.dfa);
    let bounds = LookaheadBounds {
        adjacency: AdjacencyBounds { max_len: 2, k: 8, budget: 50_000 },
        state_cap: 10_000,
        validation_depth: 5,
    };
    let la = match derive_lookahead(&tf, bounds) {
        Ok(la) => la,
        Err(e) => {
            fail(evidence, format!("look-ahead: {e}"));
            return None;
        }
    };
    let mut candidates = Vec::new();
    let a = la.projection();
    match well_behaved_check(&a, default_window(&a), 100_000) {
        Ok(WellBehaved::Not(nw)) => candidates.push(nw.scheme()),
        Ok(_) => {}
        Err(e) => fail(evidence, format!("well-behavedness: {e}")),
    }
    let t_la = |x: &[Sym]| la.evaluate(x).ok().flatten();
    if let Ok(CriticalSearch::Found { normalized, .. }) = search_critical_tuple(&la.annotation.congruence, 4) {
        let adj = AdjacencyBounds { max_len: 2, k: 8, budget: 50_000 };
        match fooling_from_critical_tuple(&fl.alpha.alphabet, &t_la, &normalized, params.fooling, adj) {
            Ok((fs, _)) => candidates.push(fs),
            Err(e) => fail(evidence, format!("critical tuple without a scheme: {e}")),
        }
    }
    let nu = reg_flat_nu(fl, rf);
    for fs in candidates {
        if let Err(e) = verify_fooling_scheme(&nu, &fs, params.fooling) {
            fail(evidence, format!("candidate holds for t_f but not for ν_f: {e}"));
            continue;
        }
        match transfer_fooling_scheme(fl, rf, &fs, params.fooling) {
            Ok(found) => return Some(found),
            Err(e) => fail(evidence, format!("transfer: {e}")),
        }
    }
    None
}

pub fn classify_vpl(vpa: &Vpa, params: &ClassifyParams) -> Result<TrichotomyVerdict> {
    let depth = params.census_depth.unwrap_or(8);
    let fl = Flattener::new(vpa);
    let alphabet = vpa.alpha.symbols.names.clone();
    let flat_alphabet = fl.alpha.alphabet.names.clone();
    let verdict = |klass, confidence, evidence| TrichotomyVerdict {
        klass,
        confidence,
        evidence,
        alphabet: alphabet.clone(),
        flat_alphabet: flat_alphabet.clone(),
    };
    let nu = config_fn(vpa);
    let counts = census(vpa.alpha.len(), depth, &|_| true, &nu, CensusMode::SuffixExpansion, params.budget)?.cumulative;
    let (growth, census_ev) = census_evidence(counts);
    let mut evidence = Vec::new();
    if let Some(universal) = vpa.is_trivial() {
        evidence.push(Evidence::Trivial { universal });
        evidence.push(census_ev);
        return Ok(verdict(Klass::Constant, Confidence::Proved, evidence));
    }
    let grammars = fl.state_grammars()?;
    let (klass, confidence) = match cfg_bounded(&grammars.s0) {
        Boundedness::Unbounded { nonterminal, left, pumps } => {
            evidence.push(Evidence::UnboundedS0 { nonterminal, left, pumps });
            (Klass::Linear, Confidence::Proved)
        }
        Boundedness::Bounded { words } => {
            evidence.push(Evidence::BoundedS0 { words });
            bounded_s0(vpa, &fl, params, depth, &mut evidence)?
        }
    };
    evidence.push(census_ev);
    let (klass, confidence) = settle(klass, confidence, growth, depth)?;
    Ok(verdict(klass, confidence, evidence))
}

fn bounded_s0(vpa: &Vpa, fl: &Flattener, params: &ClassifyParams, depth: usize, evidence: &mut Vec<Evidence>) -> Result<(Klass, Confidence)> {
    let mut confidence = Confidence::OracleSupported;
    match rep_growth(vpa, depth, params.budget)? {
        Some(counts) => {
            let growth = growth_verdict(&counts).kind;
            evidence.push(Evidence::RepGrowth { counts, growth });
            match growth {
                GrowthKind::Exponential => {
                    // A verified scheme makes a replayable certificate.
                    let nu = config_fn(vpa);
                    if let Some((scheme, distinct)) = direct_fooling_search(vpa.alpha.len(), &nu, params.direct, params.fooling) {
                        evidence.push(Evidence::FoolingScheme { domain: Domain::Input, scheme, distinct });
                    }
                    return Ok((Klass::Linear, Confidence::OracleSupported));
                }
                GrowthKind::Inconclusive => confidence = Confidence::BoundedSearch,
                GrowthKind::Polynomial => {}
            }
        }
        None => {
            evidence.push(Evidence::Inconclusive { stage: "rep growth".into(), reason: "configuration budget".into() });
            confidence = Confidence::BoundedSearch;
        }
    }
    let nu = config_fn(vpa);
    if let Some((scheme, distinct)) = direct_fooling_search(vpa.alpha.len(), &nu, params.direct, params.fooling) {
        evidence.push(Evidence::FoolingScheme { domain: Domain::Input, scheme, distinct });
        return Ok((Klass::Linear, Confidence::OracleSupported));
    }
    evidence.push(Evidence::SearchNegative { search: "direct fooling scheme".into(), bound: params.direct.max_uv });
    if params.flat_candidates {
        let rf = fl.build_reg_flat()?;
        let before = evidence.len();
        if let Some((scheme, distinct)) = flat_candidates(fl, &rf, params, evidence) {
            evidence.push(Evidence::FoolingScheme { domain: Domain::Flat, scheme, distinct });
            return Ok((Klass::Linear, Confidence::OracleSupported));
        }
        if evidence.len() > before {
            confidence = Confidence::BoundedSearch;
        }
    }
    Ok((Klass::Logarithmic, confidence))
}

/// Recheck every certificate of a verdict against the machine.
pub fn replay_dfa(dfa: &Dfa, v: &TrichotomyVerdict, params: &ClassifyParams) -> Result<()> {
    let d = dfa.minimize();
    let cong = nerode_congruence(&d);
    for e in &v.evidence {
        match e {
            Evidence::Trivial { universal } => {
                if (*universal && !d.is_universal()) || (!*universal && !d.is_empty()) {
                    return Err(Error::Validation("triviality certificate fails".into()));
                }
            }
            Evidence::CriticalTuple { tuple, normalized } => {
                if !verify_critical_tuple(&cong, tuple) || !verify_critical_tuple(&cong, normalized) {
                    return Err(Error::Validation("critical tuple fails".into()));
                }
            }
            Evidence::FoolingScheme { scheme, .. } => {
                verify_fooling_scheme(&class_word(&cong), scheme, params.fooling)?;
            }
            Evidence::Census { counts, .. } => {
                let again = cumulative(&suffix_expansion_layers(&cong, counts.len() - 1, params.budget)?);
                if &again != counts {
                    return Err(Error::Validation("census differs on recomputation".into()));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn replay_vpa(vpa: &Vpa, v: &TrichotomyVerdict, params: &ClassifyParams) -> Result<()> {
    let fl = Flattener::new(vpa);
    for e in &v.evidence {
        match e {
            Evidence::Trivial { universal } => {
                if vpa.is_trivial() != Some(*universal) {
                    return Err(Error::Validation("triviality certificate fails".into()));
                }
            }
            Evidence::UnboundedS0 { nonterminal, .. } => match cfg_bounded(&fl.state_grammars()?.s0) {
                Boundedness::Unbounded { nonterminal: n2, .. } if &n2 == nonterminal => {}
                _ => return Err(Error::Validation("S0 boundedness differs on recomputation".into())),
            },
            Evidence::BoundedS0 { .. } => {
                if !matches!(cfg_bounded(&fl.state_grammars()?.s0), Boundedness::Bounded { .. }) {
                    return Err(Error::Validation("S0 boundedness differs on recomputation".into()));
                }
            }
            Evidence::FoolingScheme { domain: Domain::Input, scheme, .. } => {
                verify_fooling_scheme(&config_fn(vpa), scheme, params.fooling)?;
            }
            Evidence::FoolingScheme { domain: Domain::Flat, scheme, .. } => {
                let rf = fl.build_reg_flat()?;
                verify_fooling_scheme(&flat_nu(&fl, &rf), scheme, params.fooling)?;
            }
            Evidence::RepGrowth { counts, .. } => {
                if rep_growth(vpa, counts.len() - 1, params.budget)?.as_ref() != Some(counts) {
                    return Err(Error::Validation("rep growth differs on recomputation".into()));
                }
            }
            Evidence::Census { counts, .. } => {
                let nu = config_fn(vpa);
                let again = census(vpa.alpha.len(), counts.len() - 1, &|_| true, &nu, CensusMode::SuffixExpansion, params.budget)?;
                if &again.cumulative != counts {
                    return Err(Error::Validation("census differs on recomputation".into()));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

impl fmt::Display for Klass {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Klass::Constant => "constant",
            Klass::Logarithmic => "logarithmic",
            Klass::Linear => "linear",
        })
    }
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Confidence::Proved => "proved",
            Confidence::OracleSupported => "oracle-supported",
            Confidence::BoundedSearch => "bounded-search",
        })
    }
}

impl fmt::Display for TrichotomyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let sigma = Alphabet { names: self.alphabet.clone() };
        let flat = Alphabet { names: self.flat_alphabet.clone() };
        let show = |w: &[Sym]| sigma.show(w);
        writeln!(f, "class: {} ({})", self.klass, self.confidence)?;
        for e in &self.evidence {
            match e {
                Evidence::Trivial { universal } => {
                    writeln!(f, "  trivial: the language is {}", if *universal { "universal" } else { "empty" })?
                }
                Evidence::CriticalTuple { tuple: t, normalized: n } => writeln!(
                    f,
                    "  critical tuple: ({}, {}, {}, {}), normalized ({}, {}, {}, {})",
                    show(&t.u2),
                    show(&t.v2),
                    show(&t.u),
                    show(&t.v),
                    show(&n.u2),
                    show(&n.v2),
                    show(&n.u),
                    show(&n.v)
                )?,
                Evidence::SearchNegative { search, bound } => writeln!(f, "  {search}: none up to {bound}")?,
                Evidence::FoolingScheme { domain, scheme: s, distinct } => {
                    let a = if *domain == Domain::Flat { &flat } else { &sigma };
                    let zs: Vec<String> = s.z.iter().map(|(n, z)| format!("{n}:{}", a.show(z))).collect();
                    writeln!(
                        f,
                        "  fooling scheme over {}: u2={} v2={} u={} v={} Z=[{}]; distinct {:?}",
                        if *domain == Domain::Flat { "Flat" } else { "Σ*" },
                        a.show(&s.u2),
                        a.show(&s.v2),
                        a.show(&s.u),
                        a.show(&s.v),
                        zs.join(", "),
                        distinct
                    )?
                }
                Evidence::UnboundedS0 { nonterminal, left, pumps } => writeln!(
                    f,
                    "  S0 unbounded: {nonterminal} pumps {} and {} on the {}",
                    flat.show(&pumps.0),
                    flat.show(&pumps.1),
                    if *left { "left" } else { "right" }
                )?,
                Evidence::BoundedS0 { words } => {
                    writeln!(f, "  S0 bounded by {} words", words.len())?;
                }
                Evidence::RepGrowth { counts, growth } => writeln!(f, "  Rep growth {growth:?}: {counts:?}")?,
                Evidence::Census { counts, growth } => writeln!(f, "  census {growth:?}: {counts:?}")?,
                Evidence::Inconclusive { stage, reason } => writeln!(f, "  {stage}: inconclusive ({reason})")?,
            }
        }
        Ok(())
    }
}
