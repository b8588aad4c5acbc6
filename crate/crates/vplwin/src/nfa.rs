//! Nondeterministic automata with ε-moves, used as an intermediate form for
//! reversal, projections and images. Only what those constructions need.

use crate::regular::Dfa;
use crate::words::{Alphabet, Sym};
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug)]
pub struct Nfa {
    pub alphabet: Alphabet,
    pub num_states: usize,
    pub initial: Vec<usize>,
    pub finals: Vec<bool>,
    pub trans: Vec<Vec<(Sym, usize)>>,
    pub eps: Vec<Vec<usize>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, num_states: usize) -> Self {
        Nfa {
            alphabet,
            num_states,
            initial: Vec::new(),
            finals: vec![false; num_states],
            trans: vec![Vec::new(); num_states],
            eps: vec![Vec::new(); num_states],
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.num_states += 1;
        self.finals.push(false);
        self.trans.push(Vec::new());
        self.eps.push(Vec::new());
        self.num_states - 1
    }

    pub fn add(&mut self, p: usize, a: Sym, q: usize) {
        self.trans[p].push((a, q));
    }

    pub fn add_eps(&mut self, p: usize, q: usize) {
        self.eps[p].push(q);
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        let mut n = Nfa::new(d.alphabet.clone(), d.num_states());
        n.initial = vec![d.initial];
        n.finals = d.finals.clone();
        for (q, row) in d.delta.iter().enumerate() {
            for (a, &p) in row.iter().enumerate() {
                n.add(q, a, p);
            }
        }
        n
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &q in &self.eps[p] {
                if set.insert(q) {
                    stack.push(q);
                }
            }
        }
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut cur: BTreeSet<usize> = self.initial.iter().copied().collect();
        self.closure(&mut cur);
        for &a in w {
            let mut next = BTreeSet::new();
            for &p in &cur {
                next.extend(self.trans[p].iter().filter(|(b, _)| *b == a).map(|&(_, q)| q));
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&p| self.finals[p])
    }

    pub fn reverse(&self) -> Nfa {
        let mut r = Nfa::new(self.alphabet.clone(), self.num_states);
        r.initial = (0..self.num_states).filter(|&q| self.finals[q]).collect();
        for &q in &self.initial {
            r.finals[q] = true;
        }
        for p in 0..self.num_states {
            for &(a, q) in &self.trans[p] {
                r.add(q, a, p);
            }
            for &q in &self.eps[p] {
                r.add_eps(q, p);
            }
        }
        r
    }

    /// Subset construction; the result is total (the empty set is the sink).
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut start: BTreeSet<usize> = self.initial.iter().copied().collect();
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next = BTreeSet::new();
                for &p in &sets[i] {
                    next.extend(self.trans[p].iter().filter(|(b, _)| *b == a).map(|&(_, q)| q));
                }
                self.closure(&mut next);
                let len = sets.len();
                let id = *index.entry(next.clone()).or_insert(len);
                if id == len {
                    sets.push(next);
                }
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            states: (0..sets.len()).map(|i| format!("d{i}")).collect(),
            initial: 0,
            finals: sets.iter().map(|s| s.iter().any(|&p| self.finals[p])).collect(),
            delta,
        }
    }
}

/// DFA for the reversal of a DFA's language.
pub fn reverse_dfa(d: &Dfa) -> Dfa {
    Nfa::from_dfa(d).reverse().determinize().minimize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::examples::*;
    use crate::words::words_upto;

    #[test]
    fn determinize_round_trip() {
        for d in [contains_a(), first_a(), a_star_b_star(), ab_or_ba_star()] {
            let n = Nfa::from_dfa(&d);
            assert!(n.determinize().equivalent(&d));
        }
    }

    #[test]
    fn reversal() {
        // Reverse of "starts with a" is "ends with a".
        let r = reverse_dfa(&first_a());
        for w in words_upto(2, 6) {
            assert_eq!(r.accepts(&w), w.last() == Some(&0));
        }
        let rr = reverse_dfa(&r);
        assert!(rr.equivalent(&first_a()));
    }
}
