//! Ridge and LeadingOnes benchmark functions and their XOR-mask black-box
//! instance families.
//!
//! An instance is a base function together with a mask `a`; evaluating `x`
//! means evaluating the base function on `x XOR a`. The all-zero mask yields
//! the canonical instance. Evaluation is pure and exact-integer.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstring::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Ridge,
    LeadingOnes,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("bit string length {got} does not match instance size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("mask length {got} does not match instance size {expected}")]
    MaskLengthMismatch { expected: usize, got: usize },
}

/// One member of a black-box instance class: a base function plus a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    kind: ProblemKind,
    n: usize,
    mask: BitString,
}

impl ProblemInstance {
    pub fn new(kind: ProblemKind, n: usize, mask: BitString) -> Result<Self, ProblemError> {
        if mask.len() != n {
            return Err(ProblemError::MaskLengthMismatch {
                expected: n,
                got: mask.len(),
            });
        }
        Ok(Self { kind, n, mask })
    }

    /// The canonical instance (all-zero mask).
    pub fn canonical(kind: ProblemKind, n: usize) -> Self {
        Self {
            kind,
            n,
            mask: BitString::zeros(n),
        }
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &BitString {
        &self.mask
    }

    pub fn mask_is_zero(&self) -> bool {
        self.mask.iter().all(|b| b == 0)
    }

    /// Fitness of the optimum: `2n` for Ridge, `n` for LeadingOnes.
    pub fn optimum_fitness(&self) -> u64 {
        match self.kind {
            ProblemKind::Ridge => 2 * self.n as u64,
            ProblemKind::LeadingOnes => self.n as u64,
        }
    }

    /// Evaluates `x` under the mask. Ridge yields `n + i` for strings of the
    /// form `1^i 0^(n-i)` (after unmasking) and `n - |ones|` otherwise;
    /// LeadingOnes counts the leading 1-bits.
    pub fn evaluate(&self, x: &BitString) -> Result<u64, ProblemError> {
        if x.len() != self.n {
            return Err(ProblemError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let bit = |i: usize| x.get(i) ^ self.mask.get(i);
        Ok(match self.kind {
            ProblemKind::LeadingOnes => {
                let mut lo = 0u64;
                for i in 0..self.n {
                    if bit(i) == 1 {
                        lo += 1;
                    } else {
                        break;
                    }
                }
                lo
            }
            ProblemKind::Ridge => {
                let n = self.n as u64;
                let mut prefix = 0usize;
                while prefix < self.n && bit(prefix) == 1 {
                    prefix += 1;
                }
                // Ridge form iff everything after the 1-prefix is 0.
                let mut tail_ones = 0u64;
                for i in prefix..self.n {
                    tail_ones += bit(i) as u64;
                }
                if tail_ones == 0 {
                    n + prefix as u64
                } else {
                    n - (prefix as u64 + tail_ones)
                }
            }
        })
    }

    pub fn is_optimum(&self, x: &BitString) -> Result<bool, ProblemError> {
        Ok(self.evaluate(x)? == self.optimum_fitness())
    }
}

/// How the experiment configuration names an instance mask:
/// `"zeros"`, `"random(SEED)"`, or an explicit hex string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MaskSpec {
    Zeros,
    Random { seed: u64 },
    Hex(String),
}

impl MaskSpec {
    pub fn build(&self, n: usize) -> Option<BitString> {
        match self {
            MaskSpec::Zeros => Some(BitString::zeros(n)),
            MaskSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Some(BitString::random(n, &mut rng))
            }
            MaskSpec::Hex(s) => BitString::from_hex(s, n),
        }
    }
}

impl FromStr for MaskSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "zeros" {
            return Ok(MaskSpec::Zeros);
        }
        if let Some(rest) = s.strip_prefix("random(").and_then(|r| r.strip_suffix(')')) {
            let seed = rest
                .trim()
                .parse::<u64>()
                .map_err(|e| format!("bad mask seed: {e}"))?;
            return Ok(MaskSpec::Random { seed });
        }
        if !s.is_empty() && s.chars().all(|c| c.is_ascii_hexdigit()) {
            return Ok(MaskSpec::Hex(s.to_string()));
        }
        Err(format!("unrecognised mask spec: {s:?}"))
    }
}

impl TryFrom<String> for MaskSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<MaskSpec> for String {
    fn from(m: MaskSpec) -> String {
        match m {
            MaskSpec::Zeros => "zeros".to_string(),
            MaskSpec::Random { seed } => format!("random({seed})"),
            MaskSpec::Hex(s) => s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn ridge_examples() {
        let inst = ProblemInstance::canonical(ProblemKind::Ridge, 4);
        assert_eq!(inst.evaluate(&bs("0000")).unwrap(), 4);
        assert_eq!(inst.evaluate(&bs("1010")).unwrap(), 2);
        assert_eq!(inst.evaluate(&bs("1111")).unwrap(), 8);
        assert_eq!(inst.evaluate(&bs("1100")).unwrap(), 6);

        let masked = ProblemInstance::new(ProblemKind::Ridge, 4, bs("0101")).unwrap();
        assert_eq!(masked.evaluate(&bs("0101")).unwrap(), 4);
    }

    #[test]
    fn leading_ones_examples() {
        let inst = ProblemInstance::canonical(ProblemKind::LeadingOnes, 5);
        assert_eq!(inst.evaluate(&bs("11010")).unwrap(), 2);
        assert_eq!(inst.evaluate(&bs("11111")).unwrap(), 5);
        assert_eq!(inst.evaluate(&bs("01111")).unwrap(), 0);
    }

    #[test]
    fn optimum_detection() {
        let ridge = ProblemInstance::canonical(ProblemKind::Ridge, 4);
        assert!(ridge.is_optimum(&bs("1111")).unwrap());
        let lo = ProblemInstance::canonical(ProblemKind::LeadingOnes, 4);
        assert!(!lo.is_optimum(&bs("1110")).unwrap());
        let lo_masked = ProblemInstance::new(ProblemKind::LeadingOnes, 4, bs("1111")).unwrap();
        assert!(lo_masked.is_optimum(&bs("0000")).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let inst = ProblemInstance::canonical(ProblemKind::Ridge, 4);
        assert_eq!(
            inst.evaluate(&bs("000")),
            Err(ProblemError::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn mask_invariance_small_exhaustive() {
        // evaluate(kind, a, x) == evaluate(kind, 0, x ^ a), exhaustive n=6
        let n = 6;
        for kind in [ProblemKind::Ridge, ProblemKind::LeadingOnes] {
            let canonical = ProblemInstance::canonical(kind, n);
            for a_idx in 0..1u64 << n {
                let a = BitString::from_index(a_idx, n);
                let inst = ProblemInstance::new(kind, n, a.clone()).unwrap();
                for x_idx in 0..1u64 << n {
                    let x = BitString::from_index(x_idx, n);
                    assert_eq!(
                        inst.evaluate(&x).unwrap(),
                        canonical.evaluate(&x.xor(&a)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn ridge_has_exactly_n_plus_one_high_points() {
        // Exactly n+1 strings reach fitness >= n: the ridge points under mask.
        let n = 10;
        let inst = ProblemInstance::new(
            ProblemKind::Ridge,
            n,
            BitString::parse("1001101011").unwrap(),
        )
        .unwrap();
        let high = (0..1u64 << n)
            .filter(|&i| inst.evaluate(&BitString::from_index(i, n)).unwrap() >= n as u64)
            .count();
        assert_eq!(high, n + 1);
    }

    #[test]
    fn leading_ones_suffix_flips_are_neutral() {
        let n = 8;
        let inst = ProblemInstance::canonical(ProblemKind::LeadingOnes, n);
        for x_idx in 0..1u64 << n {
            let x = BitString::from_index(x_idx, n);
            let lo = inst.evaluate(&x).unwrap() as usize;
            for pos in (lo + 1)..n {
                let mut y = x.clone();
                y.flip(pos);
                assert_eq!(inst.evaluate(&y).unwrap(), lo as u64);
            }
        }
    }

    #[test]
    fn mask_spec_parsing() {
        assert_eq!("zeros".parse::<MaskSpec>().unwrap(), MaskSpec::Zeros);
        assert_eq!(
            "random(7)".parse::<MaskSpec>().unwrap(),
            MaskSpec::Random { seed: 7 }
        );
        assert_eq!(
            "a5".parse::<MaskSpec>().unwrap(),
            MaskSpec::Hex("a5".into())
        );
        assert!("nope!".parse::<MaskSpec>().is_err());

        let m = MaskSpec::Hex("a5".into()).build(8).unwrap();
        assert_eq!(format!("{m:?}"), "10100101");
        // hex must not set bits past n
        assert!(MaskSpec::Hex("ff".into()).build(4).is_none());
        assert!(MaskSpec::Hex("f0".into()).build(4).is_some());
    }
}
