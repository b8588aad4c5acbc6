//! Context-free grammars: enumeration, normal forms, products with finite
//! automata, boundedness and length sets.

use crate::regular::Dfa;
use crate::semilinear::Semilinear;
use crate::words::{is_suffix, power, primitive_root, Alphabet, Sym, Word};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GSym {
    T(Sym),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cfg {
    pub terminals: Alphabet,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub productions: Vec<(usize, Vec<GSym>)>,
}

/// Length bound used when length sets are computed by tabulation.
pub const LENGTH_TABLE: usize = 512;

impl Cfg {
    pub fn new(terminals: Alphabet) -> Self {
        Cfg { terminals, nonterminals: vec!["S".into()], start: 0, productions: Vec::new() }
    }

    pub fn add_nt(&mut self, name: impl Into<String>) -> usize {
        self.nonterminals.push(name.into());
        self.nonterminals.len() - 1
    }

    pub fn add(&mut self, a: usize, body: Vec<GSym>) {
        self.productions.push((a, body));
    }

    pub fn num_nt(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn with_start(&self, s: usize) -> Cfg {
        let mut g = self.clone();
        g.start = s;
        g
    }

    pub fn nullable(&self) -> Vec<bool> {
        let mut n = vec![false; self.num_nt()];
        let mut changed = true;
        while changed {
            changed = false;
            for (a, body) in &self.productions {
                if !n[*a] && body.iter().all(|x| matches!(x, GSym::N(b) if n[*b])) {
                    n[*a] = true;
                    changed = true;
                }
            }
        }
        n
    }

    pub fn productive(&self) -> Vec<bool> {
        let mut p = vec![false; self.num_nt()];
        let mut changed = true;
        while changed {
            changed = false;
            for (a, body) in &self.productions {
                if !p[*a] && body.iter().all(|x| matches!(x, GSym::T(_)) || matches!(x, GSym::N(b) if p[*b])) {
                    p[*a] = true;
                    changed = true;
                }
            }
        }
        p
    }

    pub fn is_empty(&self) -> bool {
        !self.productive()[self.start]
    }

    /// Remove unproductive and unreachable nonterminals; the start symbol is kept.
    pub fn trim(&self) -> Cfg {
        let prod = self.productive();
        let useful: Vec<&(usize, Vec<GSym>)> = self
            .productions
            .iter()
            .filter(|(a, body)| prod[*a] && body.iter().all(|x| !matches!(x, GSym::N(b) if !prod[*b])))
            .collect();
        let mut reach = vec![false; self.num_nt()];
        reach[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for (_, body) in useful.iter().filter(|(x, _)| *x == a) {
                for s in body {
                    if let GSym::N(b) = *s {
                        if !reach[b] {
                            reach[b] = true;
                            stack.push(b);
                        }
                    }
                }
            }
        }
        let mut map = HashMap::new();
        let mut names = Vec::new();
        for a in 0..self.num_nt() {
            if reach[a] && (prod[a] || a == self.start) {
                map.insert(a, names.len());
                names.push(self.nonterminals[a].clone());
            }
        }
        let productions = useful
            .iter()
            .filter(|(a, _)| map.contains_key(a))
            .map(|(a, body)| {
                (map[a], body.iter().map(|x| match *x { GSym::N(b) => GSym::N(map[&b]), t => t }).collect())
            })
            .collect();
        Cfg { terminals: self.terminals.clone(), nonterminals: names, start: map[&self.start], productions }
    }

    /// Words of each nonterminal by exact length, for lengths `0..=n`.
    pub fn languages_upto(&self, n: usize) -> Vec<Vec<BTreeSet<Word>>> {
        let k = self.num_nt();
        let mut table: Vec<Vec<BTreeSet<Word>>> = vec![Vec::new(); k];
        for l in 0..=n {
            for row in table.iter_mut() {
                row.push(BTreeSet::new());
            }
            loop {
                let mut changed = false;
                for (a, body) in &self.productions {
                    let words = concat_exact(body, l, &table);
                    for w in words {
                        if table[*a][l].insert(w) {
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        table
    }

    /// `L(G) ∩ Σ^l` for `l = 0..=n`.
    pub fn words_by_length(&self, n: usize) -> Vec<BTreeSet<Word>> {
        self.languages_upto(n).swap_remove(self.start)
    }

    pub fn counts_by_length(&self, n: usize) -> Vec<u64> {
        self.words_by_length(n).iter().map(|s| s.len() as u64).collect()
    }

    /// Membership of every length `0..=m` in the length set of each nonterminal.
    pub fn length_tables(&self, m: usize) -> Vec<Vec<bool>> {
        let k = self.num_nt();
        let mut t = vec![vec![false; m + 1]; k];
        for l in 0..=m {
            loop {
                let mut changed = false;
                for (a, body) in &self.productions {
                    if t[*a][l] {
                        continue;
                    }
                    if body_has_length(body, l, &t) {
                        t[*a][l] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        t
    }

    /// Shortest word of each nonterminal (None if unproductive).
    pub fn shortest_words(&self) -> Vec<Option<Word>> {
        let mut best: Vec<Option<Word>> = vec![None; self.num_nt()];
        let mut changed = true;
        while changed {
            changed = false;
            for (a, body) in &self.productions {
                let mut w = Vec::new();
                let mut ok = true;
                for x in body {
                    match *x {
                        GSym::T(t) => w.push(t),
                        GSym::N(b) => match &best[b] {
                            Some(x) => w.extend(x),
                            None => {
                                ok = false;
                                break;
                            }
                        },
                    }
                }
                if ok && best[*a].as_ref().is_none_or(|b| w.len() < b.len()) {
                    best[*a] = Some(w);
                    changed = true;
                }
            }
        }
        best
    }

    /// Chomsky normal form for `L ∖ {ε}`; the flag says whether `ε ∈ L`.
    pub fn to_cnf(&self) -> (Cfg, bool) {
        let g = self.trim();
        let eps = g.nullable()[g.start];
        let mut h = Cfg { terminals: g.terminals.clone(), nonterminals: g.nonterminals.clone(), start: g.start, productions: Vec::new() };
        // Terminals inside long bodies become fresh nonterminals.
        let mut term_nt: HashMap<Sym, usize> = HashMap::new();
        let mut bodies: Vec<(usize, Vec<GSym>)> = Vec::new();
        for (a, body) in &g.productions {
            if body.len() >= 2 {
                let b = body
                    .iter()
                    .map(|x| match *x {
                        GSym::T(t) => {
                            let id = *term_nt.entry(t).or_insert_with(|| {
                                let id = h.add_nt(format!("T_{}", g.terminals.name(t)));
                                bodies.push((id, vec![GSym::T(t)]));
                                id
                            });
                            GSym::N(id)
                        }
                        n => n,
                    })
                    .collect();
                bodies.push((*a, b));
            } else {
                bodies.push((*a, body.clone()));
            }
        }
        // Binarize.
        let mut bin: Vec<(usize, Vec<GSym>)> = Vec::new();
        for (a, body) in bodies {
            if body.len() <= 2 {
                bin.push((a, body));
                continue;
            }
            let mut cur = a;
            for i in 0..body.len() - 2 {
                let next = h.add_nt(format!("{}_{}", h.nonterminals[a], i + 1));
                bin.push((cur, vec![body[i], GSym::N(next)]));
                cur = next;
            }
            bin.push((cur, vec![body[body.len() - 2], body[body.len() - 1]]));
        }
        h.productions = bin;
        // Remove ε-productions.
        let null = h.nullable();
        let mut noeps: BTreeSet<(usize, Vec<GSym>)> = BTreeSet::new();
        for (a, body) in &h.productions {
            match body.as_slice() {
                [] => {}
                [x, y] => {
                    noeps.insert((*a, vec![*x, *y]));
                    if matches!(x, GSym::N(b) if null[*b]) {
                        noeps.insert((*a, vec![*y]));
                    }
                    if matches!(y, GSym::N(b) if null[*b]) {
                        noeps.insert((*a, vec![*x]));
                    }
                }
                _ => {
                    noeps.insert((*a, body.clone()));
                }
            }
        }
        // Remove unit productions.
        let k = h.num_nt();
        let mut unit = vec![vec![false; k]; k];
        for (a, row) in unit.iter_mut().enumerate() {
            row[a] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (a, body) in &noeps {
                if let [GSym::N(b)] = body.as_slice() {
                    for x in 0..k {
                        if unit[x][*a] && !unit[x][*b] {
                            unit[x][*b] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        let mut prods: BTreeSet<(usize, Vec<GSym>)> = BTreeSet::new();
        for x in 0..k {
            for (a, body) in &noeps {
                if unit[x][*a] && !matches!(body.as_slice(), [GSym::N(_)]) {
                    prods.insert((x, body.clone()));
                }
            }
        }
        h.productions = prods.into_iter().collect();
        (h.trim(), eps)
    }

    /// Grammar for the suffixes of `L(G)` (all of them, including ε and the words themselves).
    pub fn suffix_grammar(&self) -> Cfg {
        self.affix_grammar(true)
    }

    pub fn prefix_grammar(&self) -> Cfg {
        self.affix_grammar(false)
    }

    fn affix_grammar(&self, suffix: bool) -> Cfg {
        let k = self.num_nt();
        let mut g = self.clone();
        let tag = if suffix { "suf" } else { "pre" };
        let aff: Vec<usize> = (0..k).map(|a| g.add_nt(format!("{}_{tag}", self.nonterminals[a]))).collect();
        for (a, body) in &self.productions {
            g.add(aff[*a], Vec::new());
            for i in 0..body.len() {
                let piece: Vec<GSym> = if suffix {
                    let mut p = vec![match body[i] {
                        GSym::N(b) => GSym::N(aff[b]),
                        t => t,
                    }];
                    p.extend(&body[i + 1..]);
                    p
                } else {
                    let mut p = body[..i].to_vec();
                    p.push(match body[i] {
                        GSym::N(b) => GSym::N(aff[b]),
                        t => t,
                    });
                    p
                };
                g.add(aff[*a], piece);
            }
        }
        g.start = aff[self.start];
        g.trim()
    }

    pub fn factor_grammar(&self) -> Cfg {
        self.prefix_grammar().suffix_grammar()
    }

    /// Grammar for `{u : A ⇒⁺ u A v}` (`left`) or `{v : A ⇒⁺ u A v}`.
    pub fn pump_grammar(&self, a: usize, left: bool) -> Cfg {
        let k = self.num_nt();
        let mut g = self.clone();
        let p: Vec<usize> = (0..k).map(|b| g.add_nt(format!("P_{}", self.nonterminals[b]))).collect();
        let start = g.add_nt(format!("pump_{}", self.nonterminals[a]));
        g.add(p[a], Vec::new());
        for (b, body) in &self.productions {
            for (i, x) in body.iter().enumerate() {
                if let GSym::N(c) = *x {
                    let piece: Vec<GSym> = if left {
                        let mut v = body[..i].to_vec();
                        v.push(GSym::N(p[c]));
                        v
                    } else {
                        let mut v = vec![GSym::N(p[c])];
                        v.extend(&body[i + 1..]);
                        v
                    };
                    if *b == a {
                        g.add(start, piece.clone());
                    }
                    g.add(p[*b], piece);
                }
            }
        }
        g.start = start;
        g.trim()
    }

    /// Some word of `L(G) ∩ L(d)`, shortest under the fixpoint, or None.
    pub fn intersect_witness(&self, d: &Dfa) -> Option<Word> {
        assert_eq!(d.alphabet.len(), self.terminals.len());
        let n = d.num_states();
        let k = self.num_nt();
        // best[a][p][q]
        let mut best: Vec<Vec<Vec<Option<Word>>>> = vec![vec![vec![None; n]; n]; k];
        let mut changed = true;
        while changed {
            changed = false;
            for (a, body) in &self.productions {
                for p in 0..n {
                    // Reachable (state, word) after each prefix of the body.
                    let mut cur: HashMap<usize, Word> = HashMap::from([(p, Vec::new())]);
                    for x in body {
                        let mut next: HashMap<usize, Word> = HashMap::new();
                        for (&s, w) in &cur {
                            match *x {
                                GSym::T(t) => {
                                    let mut w2 = w.clone();
                                    w2.push(t);
                                    keep_shorter(&mut next, d.delta[s][t], w2);
                                }
                                GSym::N(b) => {
                                    for q in 0..n {
                                        if let Some(x) = &best[b][s][q] {
                                            let w2 = [w.clone(), x.clone()].concat();
                                            keep_shorter(&mut next, q, w2);
                                        }
                                    }
                                }
                            }
                        }
                        cur = next;
                    }
                    for (q, w) in cur {
                        if best[*a][p][q].as_ref().is_none_or(|b| w.len() < b.len()) {
                            best[*a][p][q] = Some(w);
                            changed = true;
                        }
                    }
                }
            }
        }
        (0..n).filter(|&q| d.finals[q]).filter_map(|q| best[self.start][d.initial][q].clone()).min_by_key(|w| w.len())
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let names = (0..=w.len()).map(|i| i.to_string()).collect();
        let k = self.terminals.len();
        let sink = w.len() + 1;
        let mut delta = vec![vec![sink; k]; w.len() + 2];
        for (i, &a) in w.iter().enumerate() {
            delta[i][a] = i + 1;
        }
        let mut names: Vec<String> = names;
        names.push("sink".into());
        let mut finals = vec![false; w.len() + 2];
        finals[w.len()] = true;
        let d = Dfa { alphabet: self.terminals.clone(), states: names, initial: 0, finals, delta };
        self.intersect_witness(&d).is_some()
    }

    /// Lexicographically least word of length `len`, optionally with a
    /// prescribed first letter.
    pub fn least_word(&self, len: usize, first: Option<Sym>) -> Option<Word> {
        let (cnf, eps) = self.to_cnf();
        if len == 0 {
            return (eps && first.is_none()).then(Vec::new);
        }
        let mut by_head: Vec<Vec<&[GSym]>> = vec![Vec::new(); cnf.num_nt()];
        for (a, body) in &cnf.productions {
            by_head[*a].push(body);
        }
        let mut memo = HashMap::new();
        least_cnf(&by_head, cnf.start, len, first, &mut memo)
    }

    /// Whether `L(G) ⊆ z*`; on failure a word of `L(G)` outside `z*`.
    pub fn subset_of_star(&self, z: &[Sym]) -> Option<Word> {
        let d = star_dfa(&self.terminals, z).complement();
        self.intersect_witness(&d)
    }
}

fn keep_shorter(m: &mut HashMap<usize, Word>, q: usize, w: Word) {
    match m.get(&q) {
        Some(x) if x.len() <= w.len() => {}
        _ => {
            m.insert(q, w);
        }
    }
}

/// DFA for `z*` (for `z = ε` the language `{ε}`).
pub fn star_dfa(alpha: &Alphabet, z: &[Sym]) -> Dfa {
    let n = z.len().max(1);
    let sink = n;
    let mut delta = vec![vec![sink; alpha.len()]; n + 1];
    if !z.is_empty() {
        for (i, &a) in z.iter().enumerate() {
            delta[i][a] = (i + 1) % n;
        }
    }
    let mut finals = vec![false; n + 1];
    finals[0] = true;
    Dfa { alphabet: alpha.clone(), states: (0..=n).map(|i| format!("z{i}")).collect(), initial: 0, finals, delta }
}

fn concat_exact(body: &[GSym], l: usize, table: &[Vec<BTreeSet<Word>>]) -> Vec<Word> {
    // partial[len] = words for the processed prefix of the body
    let mut partial: Vec<Vec<Word>> = vec![Vec::new(); l + 1];
    partial[0].push(Vec::new());
    for x in body {
        let mut next: Vec<Vec<Word>> = vec![Vec::new(); l + 1];
        for (m, ws) in partial.iter().enumerate() {
            if ws.is_empty() {
                continue;
            }
            match *x {
                GSym::T(t) => {
                    if m < l {
                        for w in ws {
                            let mut w2 = w.clone();
                            w2.push(t);
                            next[m + 1].push(w2);
                        }
                    }
                }
                GSym::N(b) => {
                    for j in 0..=l - m {
                        if j >= table[b].len() {
                            break;
                        }
                        for y in &table[b][j] {
                            for w in ws {
                                next[m + j].push([w.as_slice(), y.as_slice()].concat());
                            }
                        }
                    }
                }
            }
        }
        for v in next.iter_mut() {
            v.sort_unstable();
            v.dedup();
        }
        partial = next;
    }
    std::mem::take(&mut partial[l])
}

fn body_has_length(body: &[GSym], l: usize, t: &[Vec<bool>]) -> bool {
    let mut cur = vec![false; l + 1];
    cur[0] = true;
    for x in body {
        let mut next = vec![false; l + 1];
        for m in 0..=l {
            if !cur[m] {
                continue;
            }
            match *x {
                GSym::T(_) => {
                    if m < l {
                        next[m + 1] = true;
                    }
                }
                GSym::N(b) => {
                    for j in 0..=l - m {
                        if t[b][j] {
                            next[m + j] = true;
                        }
                    }
                }
            }
        }
        cur = next;
    }
    cur[l]
}

type LeastMemo = HashMap<(usize, usize, Option<Sym>), Option<Word>>;

fn least_cnf(by_head: &[Vec<&[GSym]>], a: usize, len: usize, first: Option<Sym>, memo: &mut LeastMemo) -> Option<Word> {
    if let Some(r) = memo.get(&(a, len, first)) {
        return r.clone();
    }
    let mut best: Option<Word> = None;
    for body in &by_head[a] {
        let cand = match **body {
            [GSym::T(t)] => (len == 1 && first.is_none_or(|f| f == t)).then(|| vec![t]),
            [GSym::N(b), GSym::N(c)] => {
                let mut m: Option<Word> = None;
                for i in 1..len {
                    let Some(x) = least_cnf(by_head, b, i, first, memo) else { continue };
                    let Some(y) = least_cnf(by_head, c, len - i, None, memo) else { continue };
                    let w = [x, y].concat();
                    if m.as_ref().is_none_or(|m| w < *m) {
                        m = Some(w);
                    }
                }
                m
            }
            _ => None,
        };
        if let Some(w) = cand {
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
    }
    memo.insert((a, len, first), best.clone());
    best
}

/// Exact length set of `L(G)` as a semilinear set.
///
/// Lengths are tabulated up to [`LENGTH_TABLE`] and the ultimately periodic
/// pattern is read off the table.
pub fn parikh_length_set(g: &Cfg) -> Semilinear {
    let t = g.length_tables(LENGTH_TABLE);
    Semilinear::from_table(&t[g.start])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Boundedness {
    Bounded { words: Vec<Word> },
    /// `pumps` are two non-commuting words that both pump `nonterminal` on the given side.
    Unbounded { nonterminal: String, left: bool, pumps: (Word, Word) },
}

/// Decide whether `L(G) ⊆ w_1* ⋯ w_k*`.
///
/// The language is bounded iff for every nonterminal `A` the left pumps
/// `{u : A ⇒⁺ uAv}` and the right pumps are each contained in the star of a
/// single word. Both containments are decided with a product against the
/// complement of `z*`.
pub fn cfg_bounded(g: &Cfg) -> Boundedness {
    let g = g.trim();
    if g.is_empty() {
        return Boundedness::Bounded { words: Vec::new() };
    }
    let (scc, recursive) = nonterminal_sccs(&g);
    let mut roots: Vec<[Option<Word>; 2]> = vec![[None, None]; g.num_nt()];
    for a in (0..g.num_nt()).filter(|&a| recursive[a]) {
        for (side, left) in [(0, true), (1, false)] {
            let pg = g.pump_grammar(a, left);
            if pg.is_empty() {
                continue;
            }
            // Shortest non-empty pump.
            let nonempty = star_dfa(&g.terminals, &[]).complement();
            let Some(u) = pg.intersect_witness(&nonempty) else { continue };
            let z = primitive_root(&u);
            if let Some(bad) = pg.subset_of_star(&z) {
                return Boundedness::Unbounded { nonterminal: g.nonterminals[a].clone(), left, pumps: (u, bad) };
            }
            roots[a][side] = Some(z);
        }
    }
    let mut memo = HashMap::new();
    let words = bounding_words(&g, g.start, &[], &scc, &roots, &mut memo).unwrap_or_default();
    let mut out: Vec<Word> = Vec::new();
    for w in words {
        if out.last() != Some(&w) {
            out.push(w);
        }
    }
    Boundedness::Bounded { words: out }
}

/// SCC index of every nonterminal in the "occurs in a body of" graph, and
/// whether the nonterminal lies on a cycle.
fn nonterminal_sccs(g: &Cfg) -> (Vec<usize>, Vec<bool>) {
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..g.num_nt()).map(|_| graph.add_node(())).collect();
    let mut self_loop = vec![false; g.num_nt()];
    for (a, body) in &g.productions {
        for x in body {
            if let GSym::N(b) = *x {
                graph.update_edge(nodes[*a], nodes[b], ());
                if b == *a {
                    self_loop[b] = true;
                }
            }
        }
    }
    let mut scc = vec![0; g.num_nt()];
    let mut recursive = self_loop;
    for (i, comp) in tarjan_scc(&graph).into_iter().enumerate() {
        for n in &comp {
            scc[n.index()] = i;
            if comp.len() > 1 {
                recursive[n.index()] = true;
            }
        }
    }
    (scc, recursive)
}

/// Bounding list for the words of `a` whose derivation trees avoid `banned`
/// below the root; None when there are no such words. Only nonterminals of
/// the same SCC as `a` can recur, so `banned` is kept restricted to it.
fn bounding_words(
    g: &Cfg,
    a: usize,
    banned: &[usize],
    scc: &[usize],
    roots: &[[Option<Word>; 2]],
    memo: &mut HashMap<(usize, Vec<usize>), Option<Vec<Word>>>,
) -> Option<Vec<Word>> {
    if banned.contains(&a) {
        return None;
    }
    let key: Vec<usize> = banned.iter().copied().filter(|&b| scc[b] == scc[a]).collect();
    if let Some(r) = memo.get(&(a, key.clone())) {
        return r.clone();
    }
    let mut inner = key.clone();
    inner.push(a);
    inner.sort_unstable();
    let mut mid: Vec<Word> = Vec::new();
    let mut any = false;
    'prod: for (x, body) in &g.productions {
        if *x != a {
            continue;
        }
        let mut seq = Vec::new();
        for s in body {
            match *s {
                GSym::T(t) => seq.push(vec![t]),
                GSym::N(b) => {
                    let sub: Vec<usize> = if scc[b] == scc[a] { inner.clone() } else { Vec::new() };
                    match bounding_words(g, b, &sub, scc, roots, memo) {
                        Some(ws) => seq.extend(ws),
                        None => continue 'prod,
                    }
                }
            }
        }
        any = true;
        mid.extend(seq);
    }
    let out = if any {
        let mut v = Vec::new();
        v.extend(roots[a][0].clone());
        v.extend(mid);
        v.extend(roots[a][1].clone());
        Some(v)
    } else {
        None
    };
    memo.insert((a, key), out.clone());
    out
}

/// Whether two words commute (`uv = vu`).
pub fn commute(u: &[Sym], v: &[Sym]) -> bool {
    power(u, v.len()) == power(v, u.len())
}

/// `u` is not a suffix of `v` and `v` is not a suffix of `u`.
pub fn suffix_code(u: &[Sym], v: &[Sym]) -> bool {
    !is_suffix(u, v) && !is_suffix(v, u)
}

/// Unused-symbol check that is handy for grammars built programmatically.
pub fn used_terminals(g: &Cfg) -> HashSet<Sym> {
    g.productions.iter().flat_map(|(_, b)| b.iter().filter_map(|x| if let GSym::T(t) = x { Some(*t) } else { None })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_cfg;
    use crate::words::{in_bounded_product, words_upto};

    fn anbn() -> Cfg {
        parse_cfg(include_str!("../../../corpus/anbn.cfg")).unwrap()
    }
    fn dyck() -> Cfg {
        parse_cfg(include_str!("../../../corpus/dyck.cfg")).unwrap()
    }
    fn ab_star() -> Cfg {
        parse_cfg("@cfg\nterminals: a b\nstart: S\nS -> a b S | _\n").unwrap()
    }
    fn ab_star_a() -> Cfg {
        parse_cfg("@cfg\nterminals: a b\nstart: S\nS -> a b S | a\n").unwrap()
    }
    fn finite() -> Cfg {
        parse_cfg("@cfg\nterminals: a\nstart: S\nS -> a | a a a\n").unwrap()
    }

    /// Oracle: Catalan numbers by the recurrence.
    fn catalan(n: usize) -> u64 {
        let mut c = vec![1u64; n + 1];
        for i in 1..=n {
            c[i] = (0..i).map(|j| c[j] * c[i - 1 - j]).sum();
        }
        c[n]
    }

    #[test]
    fn enumeration() {
        let c = anbn().counts_by_length(8);
        assert_eq!(c, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let d = dyck().counts_by_length(12);
        for k in 0..=6 {
            assert_eq!(d[2 * k], catalan(k));
        }
        assert_eq!(d[12], 132);
    }

    #[test]
    fn cnf_preserves_language() {
        for g in [anbn(), dyck(), ab_star(), ab_star_a(), finite()] {
            let (c, eps) = g.to_cnf();
            for (_, body) in &c.productions {
                assert!(matches!(body.as_slice(), [GSym::T(_)] | [GSym::N(_), GSym::N(_)]));
            }
            let a = g.words_by_length(8);
            let b = c.words_by_length(8);
            assert_eq!(eps, a[0].contains(&vec![]));
            for l in 1..=8 {
                assert_eq!(a[l], b[l]);
            }
        }
    }

    #[test]
    fn membership_and_intersection() {
        let g = dyck();
        for w in words_upto(2, 8) {
            let expect = g.words_by_length(w.len())[w.len()].contains(&w);
            assert_eq!(g.accepts(&w), expect);
        }
    }

    #[test]
    fn length_sets() {
        assert_eq!(parikh_length_set(&anbn()).to_string(), "0+2N");
        assert_eq!(parikh_length_set(&finite()).to_string(), "{1, 3}");
        assert_eq!(parikh_length_set(&ab_star_a()).to_string(), "1+2N");
        // Validated against enumeration up to 20.
        for g in [anbn(), dyck(), ab_star(), ab_star_a(), finite()] {
            let s = parikh_length_set(&g);
            let c = g.counts_by_length(20);
            for (n, &k) in c.iter().enumerate() {
                assert_eq!(s.contains(n as u64), k > 0);
            }
        }
    }

    #[test]
    fn boundedness() {
        match cfg_bounded(&anbn()) {
            Boundedness::Bounded { words } => assert_eq!(words, vec![vec![0], vec![1]]),
            b => panic!("{b:?}"),
        }
        match cfg_bounded(&ab_star()) {
            Boundedness::Bounded { words } => {
                for w in ab_star().words_by_length(12).iter().flatten() {
                    assert!(in_bounded_product(w, &words));
                }
            }
            b => panic!("{b:?}"),
        }
        match cfg_bounded(&dyck()) {
            Boundedness::Unbounded { pumps: (u, v), .. } => assert!(!commute(&u, &v)),
            b => panic!("{b:?}"),
        }
    }

    #[test]
    fn bounded_words_cover_enumeration() {
        for g in [anbn(), ab_star(), ab_star_a(), finite()] {
            let Boundedness::Bounded { words } = cfg_bounded(&g) else { panic!() };
            for w in g.words_by_length(12).iter().flatten() {
                assert!(in_bounded_product(w, &words), "{w:?} not in {words:?}");
            }
        }
    }

    #[test]
    fn factor_languages_of_bounded_grammars_are_bounded() {
        for g in [anbn(), ab_star(), ab_star_a()] {
            let f = g.factor_grammar();
            let all: BTreeSet<Word> = g.words_by_length(14).into_iter().flatten().collect();
            let facs: BTreeSet<Word> = f.words_by_length(6).into_iter().flatten().collect();
            for x in &facs {
                assert!(all.iter().any(|w| w.windows(x.len().max(1)).any(|s| x.is_empty() || s == x.as_slice())));
            }
            let Boundedness::Bounded { words } = cfg_bounded(&f) else { panic!("factor language unbounded") };
            for x in &facs {
                assert!(in_bounded_product(x, &words));
            }
        }
    }

    #[test]
    fn least_words_match_enumeration() {
        for g in [anbn(), dyck(), ab_star_a()] {
            let by_len = g.words_by_length(8);
            for (l, ws) in by_len.iter().enumerate() {
                assert_eq!(g.least_word(l, None), ws.iter().next().cloned());
                for a in 0..g.terminals.len() {
                    assert_eq!(g.least_word(l, Some(a)), ws.iter().find(|w| w.first() == Some(&a)).cloned());
                }
            }
        }
    }

    #[test]
    fn affix_grammars() {
        let g = anbn();
        let suf: BTreeSet<Word> = g.suffix_grammar().words_by_length(5).into_iter().flatten().collect();
        let mut expect = BTreeSet::new();
        for w in g.words_by_length(10).iter().flatten() {
            for i in 0..=w.len() {
                if w.len() - i <= 5 {
                    expect.insert(w[i..].to_vec());
                }
            }
        }
        assert_eq!(suf, expect);
    }
}
