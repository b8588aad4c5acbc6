//! Censuses of images of languages, the polynomial/exponential verdict on
//! count sequences, image grammars and short preimages.

use crate::cfg::{cfg_bounded, Boundedness, Cfg, GSym};
use crate::error::{Error, Result};
use crate::par;
use crate::transducer::Transducer;
use crate::words::{words_of_len, Sym, Word};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CensusMode {
    /// Count distinct images `t(x)`.
    Image,
    /// Count distinct tuples `t(a_1⋯a_n) t(a_2⋯a_n) ⋯ t(ε)`.
    SuffixExpansion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    /// Distinct images of words of length exactly `k`.
    pub per_length: Vec<u64>,
    /// Distinct images of words of length at most `k`.
    pub cumulative: Vec<u64>,
}

/// Image census of `X ∩ Σ^{≤n}` under `t`; words outside the domain of `t`
/// are skipped. In suffix-expansion mode a word counts only if all of its
/// suffixes are in the domain.
pub fn census(
    sigma: usize,
    n: usize,
    member: &(dyn Fn(&[Sym]) -> bool + Sync),
    t: &(dyn Fn(&[Sym]) -> Option<Word> + Sync),
    mode: CensusMode,
    budget: u64,
) -> Result<Census> {
    let mut spent = 0u64;
    let mut all: HashSet<Vec<Word>> = HashSet::new();
    let mut per_length = Vec::new();
    let mut cumulative = Vec::new();
    for k in 0..=n {
        spent += (sigma as u64).saturating_pow(k as u32);
        if spent > budget {
            return Err(Error::BudgetExceeded(format!("census at length {k}")));
        }
        let words = words_of_len(sigma, k);
        let images: Vec<Option<Vec<Word>>> = par::map(&words, |w| {
            if !member(w) {
                return None;
            }
            match mode {
                CensusMode::Image => t(w).map(|y| vec![y]),
                CensusMode::SuffixExpansion => (0..=w.len()).map(|i| t(&w[i..])).collect(),
            }
        });
        let layer: HashSet<Vec<Word>> = images.into_iter().flatten().collect();
        per_length.push(layer.len() as u64);
        all.extend(layer);
        cumulative.push(all.len() as u64);
    }
    Ok(Census { per_length, cumulative })
}

/// Least-squares polynomial of the given degree through `(i, ys[i])`,
/// evaluated at `at`.
pub fn poly_fit_predict(ys: &[f64], degree: usize, at: usize) -> f64 {
    let d = degree.min(ys.len().saturating_sub(1));
    let m = d + 1;
    // Normal equations on x scaled to [0, 1] for conditioning.
    let scale = (ys.len().max(2) - 1) as f64;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (i, &y) in ys.iter().enumerate() {
        let x = i as f64 / scale;
        let pows: Vec<f64> = (0..m).map(|k| x.powi(k as i32)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += pows[r] * pows[c];
            }
            a[r][m] += pows[r] * y;
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        if a[col][col].abs() < 1e-12 {
            continue;
        }
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..m).map(|k| if a[k][k].abs() < 1e-12 { 0.0 } else { a[k][m] / a[k][k] }).collect();
    let x = at as f64 / scale;
    coef.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthKind {
    Polynomial,
    Exponential,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthVerdict {
    pub kind: GrowthKind,
    /// Cubic fit on the first half, extrapolated to the last point.
    pub predicted: f64,
    pub observed: u64,
    /// `(c(N)/c(N/2)) / (c(N/2)/c(N/4))`
    pub acceleration: f64,
}

/// Dual test on a nondecreasing count sequence `c(0..=N)`: a cubic is fitted
/// through `n ≤ N/2` and extrapolated to `N`, and the doubling ratio is
/// compared with the previous one. Exponential needs both the fit to fail
/// and the ratio to accelerate; polynomial needs neither.
pub fn growth_verdict(counts: &[u64]) -> GrowthVerdict {
    let n = counts.len().saturating_sub(1);
    let obs = counts.last().copied().unwrap_or(0);
    if n < 4 {
        return GrowthVerdict { kind: GrowthKind::Inconclusive, predicted: f64::NAN, observed: obs, acceleration: f64::NAN };
    }
    let half: Vec<f64> = counts[..=n / 2].iter().map(|&c| c as f64).collect();
    // Step-shaped counts make a lone cubic swing negative; take the
    // most generous of the low-degree fits.
    let pred = (1..=3).map(|d| poly_fit_predict(&half, d, n)).fold(f64::MIN, f64::max);
    let fit_fails = obs as f64 > 1.05 * pred + 1.0;
    let c = |i: usize| counts[i].max(1) as f64;
    let accel = (c(n) / c(n / 2)) / (c(n / 2) / c(n / 4));
    let kind = match (fit_fails, accel >= 1.5) {
        (true, true) => GrowthKind::Exponential,
        (false, false) => GrowthKind::Polynomial,
        _ => GrowthKind::Inconclusive,
    };
    GrowthVerdict { kind, predicted: pred, observed: obs, acceleration: accel }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub kind: GrowthKind,
    pub census: Vec<u64>,
    pub evidence: String,
    pub verdict: GrowthVerdict,
}

/// Growth of a context-free language: the structural boundedness verdict,
/// cross-checked against the word census up to `n`.
pub fn cfg_growth(g: &Cfg, n: usize) -> GrowthReport {
    let per_length = g.counts_by_length(n);
    let mut cum = Vec::new();
    let mut s = 0;
    for c in &per_length {
        s += c;
        cum.push(s);
    }
    let verdict = growth_verdict(&cum);
    let (kind, evidence) = match cfg_bounded(g) {
        Boundedness::Bounded { words } => {
            let ws: Vec<String> = words.iter().map(|w| g.terminals.show(w)).collect();
            (GrowthKind::Polynomial, format!("bounded by {}", ws.join(" ")))
        }
        Boundedness::Unbounded { nonterminal, pumps: (u, v), .. } => (
            GrowthKind::Exponential,
            format!("{nonterminal} pumps {} and {}", g.terminals.show(&u), g.terminals.show(&v)),
        ),
    };
    GrowthReport { kind, census: cum, evidence, verdict }
}

/// Grammar for `t(X)` where `X = L(gx)`.
pub fn image_grammar(gx: &Cfg, t: &Transducer) -> Cfg {
    let r = t.to_left();
    let (cnf, eps) = gx.to_cnf();
    let nq = r.num_states();
    let mut h = Cfg::new(r.output.clone());
    h.nonterminals = vec!["S'".into()];
    let base = 1;
    let id = |a: usize, p: usize, q: usize| base + (a * nq + p) * nq + q;
    for a in 0..cnf.num_nt() {
        for p in 0..nq {
            for q in 0..nq {
                h.nonterminals.push(format!("{}[{},{}]", cnf.nonterminals[a], r.states[p], r.states[q]));
            }
        }
    }
    for (a, body) in &cnf.productions {
        match body.as_slice() {
            [GSym::T(c)] => {
                for (p, c2, y, q) in &r.trans {
                    if c2 == c {
                        h.add(id(*a, *p, *q), y.iter().map(|&b| GSym::T(b)).collect());
                    }
                }
            }
            [GSym::N(b), GSym::N(c)] => {
                for p in 0..nq {
                    for q in 0..nq {
                        for m in 0..nq {
                            h.add(id(*a, p, q), vec![GSym::N(id(*b, p, m)), GSym::N(id(*c, m, q))]);
                        }
                    }
                }
            }
            _ => unreachable!("grammar is in Chomsky normal form"),
        }
    }
    for &p in &r.initial {
        for q in 0..nq {
            if r.accept[q] {
                let mut body = vec![GSym::N(id(cnf.start, p, q))];
                body.extend(r.out_term(q).iter().map(|&b| GSym::T(b)));
                h.add(0, body);
                if eps && p == q {
                    h.add(0, r.out_term(q).iter().map(|&b| GSym::T(b)).collect());
                }
            }
        }
    }
    h.trim()
}

/// Number of nonterminals of the pair grammar built for short preimages.
pub fn pair_grammar_size(gx: &Cfg, t: &Transducer) -> usize {
    let (cnf, _) = gx.to_cnf();
    let nq = t.to_left().num_states();
    1 + cnf.num_nt() * nq * nq
}

/// Upper bound on the length of a shortest preimage of an output of length
/// `m`: a minimal derivation tree has at most `(2m − 1)·D` nodes with
/// `D = c + (c − 1)(2^c − 1)` and `c` the number of pair nonterminals.
pub fn preimage_bound(c: usize, m: usize) -> u128 {
    let big = 2u128.saturating_pow(c.min(120) as u32).saturating_sub(1);
    let d = (c as u128).saturating_add((c as u128).saturating_sub(1).saturating_mul(big));
    if m == 0 {
        big.max(1)
    } else {
        d.saturating_mul(2 * m as u128 - 1)
    }
}

/// A shortest `x ∈ L(gx)` with `t(x) = y`, if any.
pub fn short_preimage(gx: &Cfg, t: &Transducer, y: &[Sym]) -> Option<Word> {
    let r = t.to_left();
    let (cnf, eps) = gx.to_cnf();
    let nq = r.num_states();
    let m = y.len();
    let nn = cnf.num_nt() * nq * nq;
    let id = |a: usize, p: usize, q: usize| (a * nq + p) * nq + q;
    // best[span][nt], spans (i, j) with i ≤ j
    let span = |i: usize, j: usize| i * (m + 1) + j;
    let mut best: Vec<Vec<Option<Word>>> = vec![vec![None; nn]; (m + 1) * (m + 1)];
    let better = |old: &Option<Word>, new: &Word| old.as_ref().is_none_or(|o| new.len() < o.len() || (new.len() == o.len() && new < o));
    for len in 0..=m {
        for i in 0..=m - len {
            let j = i + len;
            // terminal productions
            for (a, body) in &cnf.productions {
                if let [GSym::T(c)] = body.as_slice() {
                    for (p, c2, z, q) in &r.trans {
                        if c2 == c && z.as_slice() == &y[i..j] {
                            let k = id(*a, *p, *q);
                            let w = vec![*c];
                            if better(&best[span(i, j)][k], &w) {
                                best[span(i, j)][k] = Some(w);
                            }
                        }
                    }
                }
            }
            // binary productions; splits at the ends depend on this span itself
            loop {
                let mut changed = false;
                for (a, body) in &cnf.productions {
                    let [GSym::N(b), GSym::N(c)] = body.as_slice() else { continue };
                    for p in 0..nq {
                        for q in 0..nq {
                            for mid in 0..nq {
                                for s in i..=j {
                                    let (Some(u), Some(v)) =
                                        (&best[span(i, s)][id(*b, p, mid)], &best[span(s, j)][id(*c, mid, q)])
                                    else {
                                        continue;
                                    };
                                    let w: Word = [u.as_slice(), v.as_slice()].concat();
                                    let k = id(*a, p, q);
                                    if better(&best[span(i, j)][k], &w) {
                                        best[span(i, j)][k] = Some(w);
                                        changed = true;
                                    }
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    let mut out: Option<Word> = None;
    for &p in &r.initial {
        for q in 0..nq {
            if !r.accept[q] {
                continue;
            }
            let o = r.out_term(q);
            if o.len() > m || &y[m - o.len()..] != o {
                continue;
            }
            if eps && p == q && o == y {
                out = Some(Vec::new());
            }
            if let Some(w) = &best[span(0, m - o.len())][id(cnf.start, p, q)] {
                if better(&out, w) {
                    out = Some(w.clone());
                }
            }
        }
    }
    out
}

/// Distinct outputs of `t` on `L(g) ∩ Σ^{≤n}`.
pub fn image_census_by_enumeration(g: &Cfg, t: &Transducer, n: usize) -> BTreeSet<Word> {
    g.words_by_length(n).into_iter().flatten().filter_map(|x| t.evaluate(&x).ok().flatten()).collect()
}
