//! Fixed-length binary strings, the search-space elements of the target EA.

use std::fmt;

use rand::Rng;

/// A candidate solution of fixed length `n`. Every element is 0 or 1 and the
/// length never changes during a run.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { bits: vec![1; n] }
    }

    /// Builds from raw bits; panics if any element is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bit values must be 0 or 1");
        Self { bits }
    }

    /// Parses a string of `0`/`1` characters, e.g. `"1010"`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return None,
            }
        }
        Some(Self { bits })
    }

    /// Parses a hex string into `n` bits (most significant nibble first).
    /// Fails if the hex digits cannot cover `n` bits or set bits past `n`.
    pub fn from_hex(s: &str, n: usize) -> Option<Self> {
        let nibbles: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(16).map(|d| d as u8))
            .collect::<Option<_>>()?;
        if nibbles.len() * 4 < n {
            return None;
        }
        let mut bits = Vec::with_capacity(n);
        for nib in nibbles {
            for k in (0..4).rev() {
                if bits.len() == n {
                    if nib >> k & 1 == 1 {
                        return None;
                    }
                } else {
                    bits.push(nib >> k & 1);
                }
            }
        }
        Some(Self { bits })
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let bits = (0..n).map(|_| rng.gen_range(0..=1u8)).collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len(), other.len());
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a ^ b)
            .collect();
        BitString { bits }
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    /// Interprets the first `n` bits of an integer counter, LSB at index 0.
    /// Handy for exhaustive enumeration in tests.
    pub fn from_index(idx: u64, n: usize) -> Self {
        let bits = (0..n).map(|i| (idx >> i & 1) as u8).collect();
        Self { bits }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
