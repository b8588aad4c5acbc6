//! Bit-level serialization used for space metering and tree encodings.
//!
//! Numbers are written with the Elias gamma code of `n + 1`, which takes
//! `2⌊log₂(n+1)⌋ + 1` bits. Symbols from a finite set of size `k` use a
//! fixed width of `⌈log₂ k⌉` bits (zero bits when `k ≤ 1`).

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitWriter {
    bits: Vec<bool>,
}

/// Bits needed to write one symbol from a set of `k` values.
pub fn width(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Number of binary digits of `n` (1 for zero).
pub fn bitlen(n: u64) -> usize {
    if n == 0 {
        1
    } else {
        (u64::BITS - n.leading_zeros()) as usize
    }
}

/// Length in bits of the gamma code for `n`.
pub fn gamma_len(n: u64) -> usize {
    2 * (bitlen(n + 1) - 1) + 1
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn fixed(&mut self, value: u64, w: usize) {
        for i in (0..w).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn gamma(&mut self, n: u64) {
        let m = n + 1;
        let l = bitlen(m);
        for _ in 0..l - 1 {
            self.bits.push(false);
        }
        self.fixed(m, l);
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.bits.len()
    }

    pub fn bit(&mut self) -> Option<bool> {
        let b = *self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    pub fn fixed(&mut self, w: usize) -> Option<u64> {
        let mut v = 0u64;
        for _ in 0..w {
            v = (v << 1) | self.bit()? as u64;
        }
        Some(v)
    }

    pub fn gamma(&mut self) -> Option<u64> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
        }
        let rest = self.fixed(zeros)?;
        Some(((1u64 << zeros) | rest) - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(width(1), 0);
        assert_eq!(width(2), 1);
        assert_eq!(width(3), 2);
        assert_eq!(width(4), 2);
        assert_eq!(width(5), 3);
        assert_eq!(bitlen(0), 1);
        assert_eq!(bitlen(8), 4);
        assert_eq!(gamma_len(0), 1);
        assert_eq!(gamma_len(1), 3);
    }

    proptest! {
        #[test]
        fn gamma_round_trip(xs in proptest::collection::vec(0u64..1_000_000, 0..20)) {
            let mut w = BitWriter::new();
            for &x in &xs { w.gamma(x); }
            let expect: usize = xs.iter().map(|&x| gamma_len(x)).sum();
            prop_assert_eq!(w.len(), expect);
            let bits = w.into_bits();
            let mut r = BitReader::new(&bits);
            for &x in &xs { prop_assert_eq!(r.gamma(), Some(x)); }
            prop_assert!(r.at_end());
        }
    }
}
