//! Line-oriented text formats for machines, grammars and witnesses.
//!
//! Every format starts with a header line (`@dfa`, `@vpa`, `@transducer`,
//! `@cfg`, `@critical-tuple`, `@fooling-scheme`) followed by `key: value`
//! lines. `#` starts a comment; blank lines are ignored. The empty word is
//! spelled `_`.

use crate::cfg::{Cfg, GSym};
use crate::error::{Error, Result};
use crate::regular::Dfa;
use crate::transducer::{Direction, Transducer};
use crate::vpa::{PushdownAlphabet, Vpa};
use crate::words::{Alphabet, Word};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub enum Machine {
    Dfa(Dfa),
    Vpa(Vpa),
    Transducer(Transducer),
    Cfg(Cfg),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    CriticalTuple { u2: String, v2: String, u: String, v: String },
    FoolingScheme { u2: String, v2: String, u: String, v: String, z: Vec<(usize, String)> },
}

struct Lines<'a> {
    header: String,
    items: Vec<(usize, &'a str, &'a str)>,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn lines(text: &str) -> Result<Lines<'_>> {
    let mut header = None;
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            if !line.starts_with('@') {
                return perr(i + 1, "expected a header such as @dfa");
            }
            header = Some(line.to_string());
            continue;
        }
        let production = header.as_deref() == Some("@cfg") && line.contains("->");
        match line.split_once(':').filter(|_| !production) {
            Some((k, v)) => items.push((i + 1, k.trim(), v.trim())),
            None if production => items.push((i + 1, "", line)),
            // Continuation lines belong to the previous key (e.g. a block under `delta:`).
            None => match items.last() {
                Some(&(_, k, _)) => items.push((i + 1, k, line)),
                None => return perr(i + 1, "expected `key: value`"),
            },
        }
    }
    match header {
        Some(header) => Ok(Lines { header, items }),
        None => perr(0, "empty input"),
    }
}

fn names(v: &str) -> Vec<String> {
    v.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn lookup(map: &HashMap<String, usize>, name: &str, line: usize, what: &str) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| Error::Parse { line, msg: format!("unknown {what} `{name}`") })
}

fn index(v: &[String]) -> HashMap<String, usize> {
    v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

fn parse_out_word(alpha: &Alphabet, s: &str, line: usize) -> Result<Word> {
    alpha.parse_word(s).map_err(|e| Error::Parse { line, msg: e.to_string() })
}

fn show_out_word(alpha: &Alphabet, w: &[usize]) -> String {
    if w.is_empty() {
        "_".into()
    } else {
        alpha.show(w)
    }
}

pub fn parse_machine(text: &str) -> Result<Machine> {
    let l = lines(text)?;
    match l.header.as_str() {
        "@dfa" => parse_dfa(text).map(Machine::Dfa),
        "@vpa" => parse_vpa(text).map(Machine::Vpa),
        "@transducer" => parse_transducer(text).map(Machine::Transducer),
        "@cfg" => parse_cfg(text).map(Machine::Cfg),
        h => perr(1, format!("unknown header {h}")),
    }
}

fn single(l: &Lines, key: &str) -> Result<(usize, String)> {
    let found: Vec<_> = l.items.iter().filter(|(_, k, _)| *k == key).collect();
    match found.as_slice() {
        [(line, _, v)] => Ok((*line, v.to_string())),
        [] => perr(0, format!("missing `{key}:`")),
        _ => perr(found[1].0, format!("duplicate `{key}:`")),
    }
}

fn optional(l: &Lines, key: &str) -> Option<(usize, String)> {
    l.items.iter().find(|(_, k, _)| *k == key).map(|(line, _, v)| (*line, v.to_string()))
}

fn many<'a>(l: &'a Lines, key: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    l.items.iter().filter(move |(_, k, v)| *k == key && !v.is_empty()).map(|(line, _, v)| (*line, *v))
}

fn expect_header(l: &Lines, h: &str) -> Result<()> {
    if l.header != h {
        return perr(1, format!("expected {h}, found {}", l.header));
    }
    Ok(())
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let l = lines(text)?;
    expect_header(&l, "@dfa")?;
    let alphabet = Alphabet { names: names(&single(&l, "alphabet")?.1) };
    let states = names(&single(&l, "states")?.1);
    let si = index(&states);
    let (il, iv) = single(&l, "initial")?;
    let initial = lookup(&si, iv.trim(), il, "state")?;
    let mut finals = vec![false; states.len()];
    if let Some((fl, fv)) = optional(&l, "final") {
        for n in names(&fv) {
            finals[lookup(&si, &n, fl, "state")?] = true;
        }
    }
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; states.len()];
    for (line, v) in many(&l, "delta") {
        let (lhs, rhs) = v.split_once("->").ok_or(Error::Parse { line, msg: "expected `q a -> p`".into() })?;
        let parts = names(lhs);
        if parts.len() != 2 {
            return perr(line, "expected `q a -> p`");
        }
        let q = lookup(&si, &parts[0], line, "state")?;
        let a = alphabet.index(&parts[1]).ok_or(Error::Parse { line, msg: format!("unknown symbol `{}`", parts[1]) })?;
        let p = lookup(&si, rhs.trim(), line, "state")?;
        if delta[q][a].replace(p).is_some() {
            return perr(line, "duplicate transition");
        }
    }
    let mut table = Vec::new();
    for (q, row) in delta.into_iter().enumerate() {
        let mut r = Vec::new();
        for (a, p) in row.into_iter().enumerate() {
            match p {
                Some(p) => r.push(p),
                None => return perr(0, format!("missing transition for {} {}", states[q], alphabet.name(a))),
            }
        }
        table.push(r);
    }
    Dfa::new(alphabet, states, initial, finals, table)
}

pub fn print_dfa(d: &Dfa) -> String {
    let mut s = String::from("@dfa\n");
    let _ = writeln!(s, "alphabet: {}", d.alphabet.names.join(" "));
    let _ = writeln!(s, "states: {}", d.states.join(" "));
    let _ = writeln!(s, "initial: {}", d.states[d.initial]);
    let fin: Vec<&str> = (0..d.num_states()).filter(|&q| d.finals[q]).map(|q| d.states[q].as_str()).collect();
    let _ = writeln!(s, "final: {}", fin.join(" "));
    for q in 0..d.num_states() {
        for a in 0..d.alphabet.len() {
            let _ = writeln!(s, "delta: {} {} -> {}", d.states[q], d.alphabet.name(a), d.states[d.delta[q][a]]);
        }
    }
    s
}

fn is_bottom(s: &str) -> bool {
    matches!(s, "⊥" | "bot" | "_|_")
}

pub fn parse_vpa(text: &str) -> Result<Vpa> {
    let l = lines(text)?;
    expect_header(&l, "@vpa")?;
    let calls = names(&single(&l, "calls")?.1);
    let returns = names(&single(&l, "returns")?.1);
    let internals = optional(&l, "internals").map(|(_, v)| names(&v)).unwrap_or_default();
    fn r(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    let alpha = PushdownAlphabet::new(&r(&calls), &r(&returns), &r(&internals))?;
    let mut stack = vec!["⊥".to_string()];
    stack.extend(names(&single(&l, "stack")?.1).into_iter().filter(|s| !is_bottom(s)));
    let states = names(&single(&l, "states")?.1);
    let si = index(&states);
    let gi = index(&stack);
    let (il, iv) = single(&l, "initial")?;
    let initial = lookup(&si, iv.trim(), il, "state")?;
    let mut finals = vec![false; states.len()];
    if let Some((fl, fv)) = optional(&l, "final") {
        for n in names(&fv) {
            finals[lookup(&si, &n, fl, "state")?] = true;
        }
    }
    let n = states.len();
    let k = alpha.len();
    let g = stack.len();
    let mut call = vec![vec![None; k]; n];
    let mut ret = vec![vec![vec![None; g]; k]; n];
    let mut int = vec![vec![None; k]; n];
    let sym = |name: &str, line: usize, kind: crate::vpa::Kind| -> Result<usize> {
        match alpha.symbols.index(name) {
            Some(a) if alpha.kind(a) == kind => Ok(a),
            Some(_) => perr(line, format!("`{name}` has the wrong kind")),
            None => perr(line, format!("unknown symbol `{name}`")),
        }
    };
    let gamma = |name: &str, line: usize| -> Result<usize> {
        if is_bottom(name) {
            Ok(0)
        } else {
            lookup(&gi, name, line, "stack symbol")
        }
    };
    for (line, v) in many(&l, "push") {
        let (lhs, rhs) = v.split_once("->").ok_or(Error::Parse { line, msg: "expected `q a -> γ p`".into() })?;
        let (lp, rp) = (names(lhs), names(rhs));
        if lp.len() != 2 || rp.len() != 2 {
            return perr(line, "expected `q a -> γ p`");
        }
        let q = lookup(&si, &lp[0], line, "state")?;
        let a = sym(&lp[1], line, crate::vpa::Kind::Call)?;
        let gm = gamma(&rp[0], line)?;
        if gm == 0 {
            return perr(line, "⊥ is never pushed");
        }
        if call[q][a].replace((gm, lookup(&si, &rp[1], line, "state")?)).is_some() {
            return perr(line, "duplicate push transition");
        }
    }
    for (line, v) in many(&l, "pop") {
        let (lhs, rhs) = v.split_once("->").ok_or(Error::Parse { line, msg: "expected `q b γ -> p`".into() })?;
        let lp = names(lhs);
        if lp.len() != 3 {
            return perr(line, "expected `q b γ -> p`");
        }
        let q = lookup(&si, &lp[0], line, "state")?;
        let b = sym(&lp[1], line, crate::vpa::Kind::Return)?;
        let gm = gamma(&lp[2], line)?;
        if ret[q][b][gm].replace(lookup(&si, rhs.trim(), line, "state")?).is_some() {
            return perr(line, "duplicate pop transition");
        }
    }
    for (line, v) in many(&l, "int") {
        let (lhs, rhs) = v.split_once("->").ok_or(Error::Parse { line, msg: "expected `q c -> p`".into() })?;
        let lp = names(lhs);
        if lp.len() != 2 {
            return perr(line, "expected `q c -> p`");
        }
        let q = lookup(&si, &lp[0], line, "state")?;
        let c = sym(&lp[1], line, crate::vpa::Kind::Internal)?;
        if int[q][c].replace(lookup(&si, rhs.trim(), line, "state")?).is_some() {
            return perr(line, "duplicate internal transition");
        }
    }
    let missing = |what: String| perr::<()>(0, format!("missing transition: {what}"));
    let mut call_t = vec![vec![(0, 0); k]; n];
    let mut ret_t = vec![vec![Vec::new(); k]; n];
    let mut int_t = vec![vec![0; k]; n];
    for q in 0..n {
        for a in 0..k {
            let an = alpha.symbols.name(a);
            match alpha.kind(a) {
                crate::vpa::Kind::Call => match call[q][a] {
                    Some(t) => call_t[q][a] = t,
                    None => missing(format!("push {} {an}", states[q]))?,
                },
                crate::vpa::Kind::Return => {
                    for gm in 0..g {
                        match ret[q][a][gm] {
                            Some(p) => ret_t[q][a].push(p),
                            None => missing(format!("pop {} {an} {}", states[q], stack[gm]))?,
                        }
                    }
                }
                crate::vpa::Kind::Internal => match int[q][a] {
                    Some(p) => int_t[q][a] = p,
                    None => missing(format!("int {} {an}", states[q]))?,
                },
            }
        }
    }
    Vpa::new(alpha, states, stack, initial, finals, call_t, ret_t, int_t)
}

pub fn print_vpa(m: &Vpa) -> String {
    use crate::vpa::Kind;
    let mut s = String::from("@vpa\n");
    let sy = |k| m.alpha.of_kind(k).iter().map(|&a| m.alpha.symbols.name(a).to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "calls: {}", sy(Kind::Call));
    let _ = writeln!(s, "returns: {}", sy(Kind::Return));
    let _ = writeln!(s, "internals: {}", sy(Kind::Internal));
    let _ = writeln!(s, "stack: {}", m.stack[1..].join(" "));
    let _ = writeln!(s, "states: {}", m.states.join(" "));
    let _ = writeln!(s, "initial: {}", m.states[m.initial]);
    let fin: Vec<&str> = (0..m.num_states()).filter(|&q| m.finals[q]).map(|q| m.states[q].as_str()).collect();
    let _ = writeln!(s, "final: {}", fin.join(" "));
    for q in 0..m.num_states() {
        for a in 0..m.alpha.len() {
            let an = m.alpha.symbols.name(a);
            match m.alpha.kind(a) {
                Kind::Call => {
                    let (g, p) = m.call[q][a];
                    let _ = writeln!(s, "push: {} {an} -> {} {}", m.states[q], m.stack[g], m.states[p]);
                }
                Kind::Return => {
                    for g in 0..m.stack.len() {
                        let _ = writeln!(s, "pop: {} {an} {} -> {}", m.states[q], m.stack[g], m.states[m.ret[q][a][g]]);
                    }
                }
                Kind::Internal => {
                    let _ = writeln!(s, "int: {} {an} -> {}", m.states[q], m.states[m.int[q][a]]);
                }
            }
        }
    }
    s
}

pub fn parse_transducer(text: &str) -> Result<Transducer> {
    let l = lines(text)?;
    expect_header(&l, "@transducer")?;
    let (dl, dv) = single(&l, "direction")?;
    let direction = match dv.as_str() {
        "left" => Direction::Left,
        "right" => Direction::Right,
        _ => return perr(dl, "direction must be left or right"),
    };
    let input = Alphabet { names: names(&single(&l, "in")?.1) };
    let output = Alphabet { names: names(&single(&l, "out")?.1) };
    let states = names(&single(&l, "states")?.1);
    let si = index(&states);
    let (el, ev) = optional(&l, "entry").or_else(|| optional(&l, "initial")).ok_or(Error::Parse {
        line: 0,
        msg: "missing `entry:` or `initial:`".into(),
    })?;
    let initial = names(&ev).iter().map(|n| lookup(&si, n, el, "state")).collect::<Result<Vec<_>>>()?;
    let mut accept = vec![false; states.len()];
    if let Some((al, av)) = optional(&l, "accept") {
        for n in names(&av) {
            accept[lookup(&si, &n, al, "state")?] = true;
        }
    }
    let mut trans = Vec::new();
    for (line, v) in many(&l, "trans") {
        let (lhs, rhs) = v.split_once("->").ok_or(Error::Parse { line, msg: "expected `q a / y -> p`".into() })?;
        let (qa, y) = lhs.split_once('/').ok_or(Error::Parse { line, msg: "expected `q a / y -> p`".into() })?;
        let qa = names(qa);
        if qa.len() != 2 {
            return perr(line, "expected `q a / y -> p`");
        }
        let q = lookup(&si, &qa[0], line, "state")?;
        let a = input.index(&qa[1]).ok_or(Error::Parse { line, msg: format!("unknown input symbol `{}`", qa[1]) })?;
        let y = parse_out_word(&output, y, line)?;
        let p = lookup(&si, rhs.trim(), line, "state")?;
        trans.push((q, a, y, p));
    }
    let mut term = vec![None; states.len()];
    for (line, v) in many(&l, "term") {
        let (q, y) = v.split_once('/').ok_or(Error::Parse { line, msg: "expected `q / y`".into() })?;
        let q = lookup(&si, q.trim(), line, "state")?;
        term[q] = Some(parse_out_word(&output, y, line)?);
    }
    Transducer::from_written(direction, states, input, output, initial, accept, trans, term)
}

pub fn print_transducer(t: &Transducer) -> String {
    let mut s = String::from("@transducer\n");
    let dir = match t.direction {
        Direction::Left => "left",
        Direction::Right => "right",
    };
    let _ = writeln!(s, "direction: {dir}");
    let _ = writeln!(s, "in: {}", t.input.names.join(" "));
    let _ = writeln!(s, "out: {}", t.output.names.join(" "));
    let _ = writeln!(s, "states: {}", t.states.join(" "));
    let ini: Vec<&str> = t.initial.iter().map(|&q| t.states[q].as_str()).collect();
    let key = if t.direction == Direction::Right { "entry" } else { "initial" };
    let _ = writeln!(s, "{key}: {}", ini.join(" "));
    let acc: Vec<&str> = (0..t.states.len()).filter(|&q| t.accept[q]).map(|q| t.states[q].as_str()).collect();
    let _ = writeln!(s, "accept: {}", acc.join(" "));
    for (q, a, y, p) in t.written() {
        let _ = writeln!(s, "trans: {} {} / {} -> {}", t.states[q], t.input.name(a), show_out_word(&t.output, &y), t.states[p]);
    }
    for (q, o) in t.term.iter().enumerate() {
        if let Some(o) = o {
            let _ = writeln!(s, "term: {} / {}", t.states[q], show_out_word(&t.output, o));
        }
    }
    s
}

pub fn parse_cfg(text: &str) -> Result<Cfg> {
    let l = lines(text)?;
    expect_header(&l, "@cfg")?;
    let (sl, sv) = single(&l, "start")?;
    // Nonterminals are exactly the left-hand sides; order of first appearance, start first.
    let mut nts: Vec<String> = vec![sv.trim().to_string()];
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    for &(line, _, v) in l.items.iter().filter(|(_, k, _)| k.is_empty()) {
        let (lhs, rhs) = v.split_once("->").unwrap();
        let lhs = lhs.trim().to_string();
        if !nts.contains(&lhs) {
            nts.push(lhs.clone());
        }
        raw.push((line, lhs, rhs.to_string()));
    }
    let terminals: Vec<String> = match optional(&l, "terminals") {
        Some((_, v)) => names(&v),
        None => {
            let mut t: Vec<String> = Vec::new();
            for (_, _, rhs) in &raw {
                for alt in rhs.split('|') {
                    for tok in alt.split_whitespace() {
                        if tok != "_" && tok != "ε" && !nts.iter().any(|n| n == tok) && !t.iter().any(|x| x == tok) {
                            t.push(tok.to_string());
                        }
                    }
                }
            }
            t
        }
    };
    let ni = index(&nts);
    let ti = index(&terminals);
    let mut productions = Vec::new();
    for (line, lhs, rhs) in raw {
        let a = ni[&lhs];
        for alt in rhs.split('|') {
            let mut body = Vec::new();
            for tok in alt.split_whitespace() {
                if tok == "_" || tok == "ε" {
                    continue;
                }
                if let Some(&n) = ni.get(tok) {
                    body.push(GSym::N(n));
                } else if let Some(&t) = ti.get(tok) {
                    body.push(GSym::T(t));
                } else {
                    return perr(line, format!("unknown symbol `{tok}`"));
                }
            }
            productions.push((a, body));
        }
    }
    if !ni.contains_key(sv.trim()) {
        return perr(sl, "unknown start symbol");
    }
    Ok(Cfg { terminals: Alphabet { names: terminals }, nonterminals: nts, start: 0, productions })
}

pub fn print_cfg(g: &Cfg) -> String {
    let mut s = String::from("@cfg\n");
    let _ = writeln!(s, "terminals: {}", g.terminals.names.join(" "));
    let _ = writeln!(s, "start: {}", g.nonterminals[g.start]);
    for (a, body) in &g.productions {
        let rhs: Vec<&str> = body
            .iter()
            .map(|x| match *x {
                GSym::T(t) => g.terminals.name(t),
                GSym::N(n) => g.nonterminals[n].as_str(),
            })
            .collect();
        let rhs = if rhs.is_empty() { "_".to_string() } else { rhs.join(" ") };
        let _ = writeln!(s, "{} -> {}", g.nonterminals[*a], rhs);
    }
    s
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let l = lines(text)?;
    let get = |k: &str| single(&l, k).map(|(_, v)| v);
    match l.header.as_str() {
        "@critical-tuple" => Ok(Witness::CriticalTuple { u2: get("u2")?, v2: get("v2")?, u: get("u")?, v: get("v")? }),
        "@fooling-scheme" => {
            let mut z = Vec::new();
            for (line, v) in many(&l, "z") {
                let (n, w) = v.split_once(char::is_whitespace).unwrap_or((v, "_"));
                let n: usize = n.parse().map_err(|_| Error::Parse { line, msg: "expected `z: n word`".into() })?;
                z.push((n, w.trim().to_string()));
            }
            Ok(Witness::FoolingScheme { u2: get("u2")?, v2: get("v2")?, u: get("u")?, v: get("v")?, z })
        }
        h => perr(1, format!("unknown witness header {h}")),
    }
}

pub fn print_witness(w: &Witness) -> String {
    let e = |s: &str| if s.is_empty() { "_".to_string() } else { s.to_string() };
    match w {
        Witness::CriticalTuple { u2, v2, u, v } => {
            format!("@critical-tuple\nu2: {}\nv2: {}\nu: {}\nv: {}\n", e(u2), e(v2), e(u), e(v))
        }
        Witness::FoolingScheme { u2, v2, u, v, z } => {
            let mut s = format!("@fooling-scheme\nu2: {}\nv2: {}\nu: {}\nv: {}\n", e(u2), e(v2), e(u), e(v));
            for (n, w) in z {
                let _ = writeln!(s, "z: {n} {}", e(w));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::examples::*;
    use crate::vpa::fixtures;

    #[test]
    fn dfa_round_trip() {
        for d in [contains_a(), first_a(), empty(), universal(), ab_or_ba_star()] {
            assert_eq!(parse_dfa(&print_dfa(&d)).unwrap(), d);
        }
    }

    #[test]
    fn dfa_block_syntax_and_errors() {
        let t = "@dfa\nalphabet: a b\nstates: n y\ninitial: n\nfinal: y\ndelta:\n n a -> y\n n b -> n # stay\n y a -> y\n y b -> y\n";
        assert_eq!(parse_dfa(t).unwrap(), contains_a_named());
        let missing = "@dfa\nalphabet: a b\nstates: n\ninitial: n\ndelta: n a -> n\n";
        assert!(matches!(parse_dfa(missing), Err(Error::Parse { .. })));
    }

    fn contains_a_named() -> Dfa {
        let mut d = contains_a();
        d.states = vec!["n".into(), "y".into()];
        d
    }

    #[test]
    fn vpa_round_trip() {
        for m in fixtures::all() {
            let back = parse_vpa(&print_vpa(&m)).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn vpa_totality_is_enforced() {
        let t = "@vpa\ncalls: a\nreturns: b\nstack: g\nstates: q\ninitial: q\npush: q a -> g q\n";
        assert!(matches!(parse_vpa(t), Err(Error::Parse { .. })));
    }

    #[test]
    fn transducer_round_trip() {
        for src in [include_str!("../../../corpus/leftblock.tdc"), include_str!("../../../corpus/id.tdc"), include_str!("../../../corpus/trailblock.tdc")] {
            let t = parse_transducer(src).unwrap();
            assert_eq!(parse_transducer(&print_transducer(&t)).unwrap(), t);
        }
    }

    #[test]
    fn cfg_round_trip() {
        for src in [include_str!("../../../corpus/anbn.cfg"), include_str!("../../../corpus/dyck.cfg")] {
            let g = parse_cfg(src).unwrap();
            assert_eq!(parse_cfg(&print_cfg(&g)).unwrap(), g);
        }
    }

    #[test]
    fn witness_round_trip() {
        let w = Witness::FoolingScheme {
            u2: "a".into(),
            v2: "b".into(),
            u: "aa".into(),
            v: "bb".into(),
            z: vec![(0, "".into()), (1, "a".into())],
        };
        let back = parse_witness(&print_witness(&w)).unwrap();
        match back {
            Witness::FoolingScheme { z, .. } => assert_eq!(z, vec![(0, "_".to_string()), (1, "a".to_string())]),
            _ => panic!(),
        }
    }
}
