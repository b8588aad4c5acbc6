//! Ultimately periodic subsets of ℕ (semilinear sets in one dimension).

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// `finite ∪ { n ≥ threshold : n mod period ∈ residues }`, with every
/// element of `finite` below `threshold`. A period of 0 means the set is finite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Semilinear {
    pub finite: BTreeSet<u64>,
    pub threshold: u64,
    pub period: u64,
    pub residues: BTreeSet<u64>,
}

impl Semilinear {
    pub fn empty() -> Self {
        Semilinear { finite: BTreeSet::new(), threshold: 0, period: 0, residues: BTreeSet::new() }
    }

    pub fn finite(xs: impl IntoIterator<Item = u64>) -> Self {
        let finite: BTreeSet<u64> = xs.into_iter().collect();
        let threshold = finite.iter().max().map_or(0, |m| m + 1);
        Semilinear { finite, threshold, period: 0, residues: BTreeSet::new() }.canonical()
    }

    /// `{ offset + k·period : k ≥ 0 }`
    pub fn progression(offset: u64, period: u64) -> Self {
        if period == 0 {
            return Self::finite([offset]);
        }
        Semilinear { finite: BTreeSet::new(), threshold: offset, period, residues: BTreeSet::from([offset % period]) }
            .canonical()
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            self.finite.contains(&n)
        } else {
            self.period > 0 && self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period == 0 || self.residues.is_empty()
    }

    /// Membership vector for `0..=m`.
    pub fn table(&self, m: u64) -> Vec<bool> {
        (0..=m).map(|n| self.contains(n)).collect()
    }

    pub fn union(&self, o: &Semilinear) -> Semilinear {
        let p = match (self.period, o.period) {
            (0, q) | (q, 0) => q,
            (a, b) => crate::regular::lcm(a as usize, b as usize) as u64,
        };
        let t = self.threshold.max(o.threshold);
        let finite = (0..t).filter(|&n| self.contains(n) || o.contains(n)).collect();
        let residues = if p == 0 {
            BTreeSet::new()
        } else {
            (t..t + p).filter(|&n| self.contains(n) || o.contains(n)).map(|n| n % p).collect()
        };
        Semilinear { finite, threshold: t, period: p, residues }.canonical()
    }

    /// Smallest period and threshold describing the same set.
    pub fn canonical(&self) -> Semilinear {
        let mut s = self.clone();
        if s.period == 0 || s.residues.is_empty() {
            s.period = 0;
            s.residues.clear();
            s.threshold = s.finite.iter().max().map_or(0, |m| m + 1);
            return s;
        }
        // Smallest divisor of the period that is still a period beyond the threshold.
        let p0 = s.period;
        for d in 1..=p0 {
            if p0.is_multiple_of(d) && (s.threshold..s.threshold + p0).all(|n| s.contains(n) == s.contains(n + d)) {
                let residues = (s.threshold..s.threshold + d).filter(|&n| s.contains(n)).map(|n| n % d).collect();
                s = Semilinear { finite: s.finite.clone(), threshold: s.threshold, period: d, residues };
                break;
            }
        }
        while s.threshold > 0 {
            let n = s.threshold - 1;
            let periodic = s.residues.contains(&(n % s.period));
            if s.finite.contains(&n) != periodic {
                break;
            }
            s.finite.remove(&n);
            s.threshold = n;
        }
        s
    }

    /// Detect an ultimately periodic description of a membership vector.
    ///
    /// The vector is assumed to cover the preperiod and at least two full
    /// periods; the smallest (period, threshold) that explains the second
    /// half of the vector is chosen.
    pub fn from_table(bits: &[bool]) -> Semilinear {
        let m = bits.len();
        if m == 0 {
            return Self::empty();
        }
        for p in 1..=m / 4 {
            // Lowest threshold t such that bits[n] == bits[n+p] for all t ≤ n < m-p.
            let mut t = m - p;
            while t > 0 && bits[t - 1] == bits[t - 1 + p] {
                t -= 1;
            }
            if t <= m / 2 {
                let finite = (0..t).filter(|&n| bits[n]).map(|n| n as u64).collect();
                let residues = (t..t + p).filter(|&n| bits[n]).map(|n| (n % p) as u64).collect();
                return Semilinear { finite, threshold: t as u64, period: p as u64, residues }.canonical();
            }
        }
        Self::finite((0..m).filter(|&n| bits[n]).map(|n| n as u64))
    }

    /// Progressions `offset + period·ℕ` whose union (with the finite part) is the set.
    pub fn progressions(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self.finite.iter().map(|&n| (n, 0)).collect();
        if self.period > 0 {
            for &r in &self.residues {
                let mut f = self.threshold - self.threshold % self.period + r;
                if f < self.threshold {
                    f += self.period;
                }
                out.push((f, self.period));
            }
        }
        out
    }
}

impl fmt::Display for Semilinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fin: Vec<String> = self.finite.iter().map(|n| n.to_string()).collect();
        let mut parts = Vec::new();
        if !fin.is_empty() {
            parts.push(format!("{{{}}}", fin.join(", ")));
        }
        for (o, p) in self.progressions() {
            if p > 0 {
                parts.push(format!("{o}+{p}N"));
            }
        }
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_forms() {
        assert_eq!(Semilinear::progression(0, 2).to_string(), "0+2N");
        assert_eq!(Semilinear::finite([1, 3]).to_string(), "{1, 3}");
        assert_eq!(Semilinear::progression(1, 2).to_string(), "1+2N");
        assert_eq!(Semilinear::empty().to_string(), "∅");
    }

    #[test]
    fn detection() {
        let bits: Vec<bool> = (0..64).map(|n| n % 2 == 0).collect();
        assert_eq!(Semilinear::from_table(&bits), Semilinear::progression(0, 2));
        let bits: Vec<bool> = (0..64).map(|n| n == 1 || n == 3).collect();
        assert_eq!(Semilinear::from_table(&bits), Semilinear::finite([1, 3]));
        let bits: Vec<bool> = (0..64).map(|n| n == 2 || (n >= 5 && n % 3 == 1)).collect();
        let s = Semilinear::from_table(&bits);
        assert_eq!(s.to_string(), "{2} ∪ 7+3N");
    }

    #[test]
    fn union_and_canonical() {
        let u = Semilinear::progression(0, 2).union(&Semilinear::progression(1, 2));
        assert_eq!(u, Semilinear::progression(0, 1));
        assert_eq!(u.to_string(), "0+1N");
    }

    proptest! {
        #[test]
        fn detection_round_trip(fin in proptest::collection::btree_set(0u64..10, 0..4), t in 0u64..10, p in 1u64..6, res in proptest::collection::btree_set(0u64..6, 0..4)) {
            let res: BTreeSet<u64> = res.into_iter().filter(|&r| r < p).collect();
            let fin: BTreeSet<u64> = fin.into_iter().filter(|&n| n < t).collect();
            let s = Semilinear { finite: fin, threshold: t, period: p, residues: res }.canonical();
            let back = Semilinear::from_table(&s.table(80));
            for n in 0..200 {
                prop_assert_eq!(back.contains(n), s.contains(n));
            }
            prop_assert_eq!(back, s);
        }
    }
}
