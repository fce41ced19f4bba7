//! Packed truth tables indexed by `m`-bit words (`b_0` most significant).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::BitWord;

/// Widest table accepted; 2^28 bits is 32 MiB.
pub const MAX_TABLE_ARITY: usize = 28;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TruthTable(arity={}, weight={})",
            self.arity,
            self.weight()
        )
    }
}

impl TruthTable {
    pub fn zeros(arity: usize) -> Result<Self> {
        if arity > MAX_TABLE_ARITY {
            return Err(Error::Order {
                n: arity,
                min: 0,
                max: MAX_TABLE_ARITY,
            });
        }
        let len = 1usize << arity;
        Ok(TruthTable {
            arity,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(u64) -> u8) -> Result<Self> {
        let mut t = Self::zeros(arity)?;
        for x in 0..t.len() as u64 {
            if f(x) & 1 == 1 {
                t.set(x, 1);
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of entries, `2^arity`.
    #[inline]
    pub fn len(&self) -> usize {
        1usize << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, index: u64) -> u8 {
        ((self.words[(index >> 6) as usize] >> (index & 63)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, index: u64, bit: u8) {
        let w = &mut self.words[(index >> 6) as usize];
        let m = 1u64 << (index & 63);
        if bit & 1 == 1 {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: u64) {
        self.words[(index >> 6) as usize] ^= 1u64 << (index & 63);
    }

    /// Value at a word of matching length.
    pub fn eval(&self, x: &BitWord) -> Result<u8> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        Ok(self.get(x.value()))
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Entry-wise XOR.
    pub fn xor(&self, other: &TruthTable) -> Result<TruthTable> {
        if self.arity != other.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: other.arity,
            });
        }
        Ok(TruthTable {
            arity: self.arity,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// ASCII `0`/`1` string in index order.
    pub fn to_binary_string(&self) -> String {
        (0..self.len() as u64)
            .map(|i| if self.get(i) == 1 { '1' } else { '0' })
            .collect()
    }

    /// Hex digits in index order, four entries per digit, lowest index in the
    /// digit's most significant bit. Short tables are padded with zero entries.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u8;
            for j in 0..4 {
                let i = (4 * d + j) as u64;
                let b = if (i as usize) < self.len() {
                    self.get(i)
                } else {
                    0
                };
                nib = (nib << 1) | b;
            }
            write!(out, "{nib:x}").unwrap();
        }
        out
    }

    /// Parses either the binary or the hex layout; whitespace and a `0x` prefix are ignored.
    pub fn parse(arity: usize, text: &str) -> Result<Self> {
        let clean: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let clean = clean
            .strip_prefix("0x")
            .or_else(|| clean.strip_prefix("0X"))
            .unwrap_or(&clean);
        let mut t = Self::zeros(arity)?;
        let n = t.len();
        if clean.len() == n && clean.bytes().all(|c| c == b'0' || c == b'1') {
            for (i, c) in clean.bytes().enumerate() {
                t.set(i as u64, c - b'0');
            }
            return Ok(t);
        }
        let digits = n.div_ceil(4);
        if clean.len() != digits {
            return Err(Error::Parse(format!(
                "truth table of arity {arity} needs {n} binary digits or {digits} hex digits, got {} characters",
                clean.len()
            )));
        }
        for (d, c) in clean.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            for j in 0..4 {
                let i = 4 * d + j;
                let b = ((nib >> (3 - j)) & 1) as u8;
                if i < n {
                    t.set(i as u64, b);
                } else if b == 1 {
                    return Err(Error::Parse("nonzero padding in hex table".into()));
                }
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_layout() {
        // Entries 0..8 = 1,0,0,0, 0,0,0,1.
        let t = TruthTable::from_fn(3, |x| u8::from(x == 0 || x == 7)).unwrap();
        assert_eq!(t.to_hex(), "81");
        assert_eq!(t.to_binary_string(), "10000001");
        assert_eq!(TruthTable::parse(3, "0x81").unwrap(), t);
        assert_eq!(TruthTable::parse(3, "1000 0001").unwrap(), t);
        assert!(TruthTable::parse(3, "811").is_err());
    }

    #[test]
    fn padded_small_tables() {
        let t = TruthTable::from_fn(1, |x| x as u8).unwrap();
        assert_eq!(t.to_hex(), "4");
        assert_eq!(TruthTable::parse(1, "4").unwrap(), t);
        assert!(TruthTable::parse(1, "5").is_err());
    }

    proptest! {
        #[test]
        fn hex_round_trip(arity in 0usize..10, seed in any::<u64>()) {
            let t = TruthTable::from_fn(arity, |x| ((seed.rotate_left(x as u32 % 64) ^ x) & 1) as u8).unwrap();
            prop_assert_eq!(TruthTable::parse(arity, &t.to_hex()).unwrap(), t.clone());
            prop_assert_eq!(TruthTable::parse(arity, &t.to_binary_string()).unwrap(), t);
        }
    }
}
