//! Symbols, alphabets and word enumeration.

use crate::error::{Error, Result};
use serde::Serialize;

/// A symbol is an index into its alphabet.
pub type Sym = usize;
pub type Word = Vec<Sym>;

/// Ordered set of named symbols. Order is declaration order and fixes the
/// canonical enumeration order of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    pub names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<Sym> {
        self.names.iter().position(|n| n == name)
    }

    pub fn sym(&self, name: &str) -> Result<Sym> {
        self.index(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s]
    }

    /// Parse a word. Whitespace-separated tokens are used when the text
    /// contains whitespace, otherwise every character is one symbol.
    /// `_` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "_" || t == "ε" {
            return Ok(Vec::new());
        }
        if t.contains(char::is_whitespace) {
            t.split_whitespace().map(|tok| self.sym(tok)).collect()
        } else if self.names.iter().all(|n| n.chars().count() == 1) {
            t.chars().map(|c| self.sym(&c.to_string())).collect()
        } else {
            // Multi-character names without separators: greedy longest match.
            let mut out = Vec::new();
            let mut rest = t;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len())
                    .ok_or_else(|| Error::UnknownSymbol(rest.to_string()))?;
                out.push(best.0);
                rest = &rest[best.1.len()..];
            }
            Ok(out)
        }
    }

    /// Render a word; single-character alphabets are concatenated, others
    /// are space separated. The empty word prints as `ε`.
    pub fn show(&self, w: &[Sym]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&s| self.names[s].as_str()).collect::<Vec<_>>().join(sep)
    }
}

/// All words of length exactly `n` over `k` symbols, in lexicographic order.
pub fn words_of_len(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for w in &out {
            for a in 0..k {
                let mut x = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

/// All words of length at most `n`, shortlex order.
pub fn words_upto(k: usize, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|l| words_of_len(k, l)).collect()
}

/// Number of words of length at most `n` over `k` letters (saturating).
pub fn count_upto(k: usize, n: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=n {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k as u128);
    }
    total
}

/// Decode the `i`-th word of length `n` in lexicographic order.
pub fn nth_word(k: usize, n: usize, mut i: u64) -> Word {
    let mut w = vec![0; n];
    for pos in (0..n).rev() {
        w[pos] = (i % k as u64) as usize;
        i /= k as u64;
    }
    w
}

/// Every word over `{u, v}` with at most `n` factors, as concatenations.
pub fn products_upto(u: &[Sym], v: &[Sym], n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for f in [u, v] {
                let mut x = w.clone();
                x.extend_from_slice(f);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words over `{u, v}` with exactly `n` factors, in factor-lexicographic order.
pub fn products_exact(u: &[Sym], v: &[Sym], n: usize) -> Vec<Word> {
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for f in [u, v] {
                let mut x = w.clone();
                x.extend_from_slice(f);
                next.push(x);
            }
        }
        layer = next;
    }
    layer
}

pub fn is_suffix<T: PartialEq>(s: &[T], w: &[T]) -> bool {
    s.len() <= w.len() && &w[w.len() - s.len()..] == s
}

/// Length of the longest common suffix.
pub fn common_suffix_len<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    x.iter().rev().zip(y.iter().rev()).take_while(|(a, b)| a == b).count()
}

/// `w` repeated `k` times.
pub fn power(w: &[Sym], k: usize) -> Word {
    let mut out = Vec::with_capacity(w.len() * k);
    for _ in 0..k {
        out.extend_from_slice(w);
    }
    out
}

/// Shortest `r` with `w = r^k` for some `k`.
pub fn primitive_root(w: &[Sym]) -> Word {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

/// Membership in `w_1* w_2* ... w_k*`.
pub fn in_bounded_product(x: &[Sym], ws: &[Word]) -> bool {
    // reach[i] = can we be at position i of x having consumed some prefix of the factor list
    let n = x.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for w in ws {
        if w.is_empty() {
            continue;
        }
        for i in 0..=n {
            if reach[i] && i + w.len() <= n && &x[i..i + w.len()] == w.as_slice() {
                reach[i + w.len()] = true;
            }
        }
    }
    reach[n]
}

/// Convolution `u ⊗ v` with `None` as the padding symbol.
pub fn convolve<T: Clone>(u: &[T], v: &[T]) -> Vec<(Option<T>, Option<T>)> {
    let n = u.len().max(v.len());
    (0..n).map(|i| (u.get(i).cloned(), v.get(i).cloned())).collect()
}
