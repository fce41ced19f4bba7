//! Running a rule to a full de Bruijn cycle, checking it, and streaming it.

use std::borrow::Borrow;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsr::sweep_budget;
use crate::rules::Rule;
use crate::word::BitWord;

/// Largest order for which [`generate`] materializes the sequence (256 MiB of bits).
pub const MAX_GENERATE_ORDER: usize = 28;

/// One period of a generated sequence, one byte per bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedSequence {
    pub n: usize,
    pub bits: Vec<u8>,
    pub start: BitWord,
}

impl GeneratedSequence {
    /// Wraps an existing bit string of length `2^n`; the start state is its first window.
    pub fn from_bits(n: usize, bits: Vec<u8>) -> Result<Self> {
        if !(1..=MAX_GENERATE_ORDER).contains(&n) {
            return Err(Error::Order {
                n,
                min: 1,
                max: MAX_GENERATE_ORDER,
            });
        }
        if bits.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                actual: bits.len(),
            });
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Parse(format!("bit value {b} is not 0 or 1")));
        }
        let start = window_at(&bits, n, 0);
        Ok(GeneratedSequence { n, bits, start })
    }

    /// Parses an ASCII `0`/`1` string, ignoring whitespace.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(n, bits)
    }

    pub fn is_de_bruijn(&self) -> bool {
        verify_de_bruijn(&self.bits, self.n)
    }

    /// The same cycle read from the all-zero window, or `None` if that window never occurs.
    pub fn canonical_form(&self) -> Option<String> {
        let len = self.bits.len();
        let start = (0..len).find(|&i| (0..self.n).all(|j| self.bits[(i + j) % len] == 0))?;
        Some(
            (0..len)
                .map(|i| char::from(b'0' + self.bits[(start + i) % len]))
                .collect(),
        )
    }

    pub fn to_hex(&self) -> String {
        pack_hex(&self.bits)
    }
}

impl fmt::Display for GeneratedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| char::from(b'0' + b)).collect();
        f.write_str(&s)
    }
}

fn window_at(bits: &[u8], n: usize, i: usize) -> BitWord {
    let len = bits.len();
    let mut v = 0u64;
    for j in 0..n {
        v = (v << 1) | u64::from(bits[(i + j) % len]);
    }
    BitWord::new(v, n).expect("n within word range")
}

/// Steps `rule` from `start` for one full period of `2^n` bits.
pub fn generate(rule: &Rule, start: &BitWord) -> Result<GeneratedSequence> {
    let n = rule.order();
    if start.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: start.len(),
        });
    }
    sweep_budget(n, MAX_GENERATE_ORDER)?;
    let total = 1u64 << n;
    let mut bits = Vec::with_capacity(total as usize);
    let mut stream = BitStream::from_state(rule, start);
    for i in 0..total {
        if i > 0 && stream.state() == start.value() {
            return Err(Error::NotDeBruijn {
                period: i,
                expected: total,
            });
        }
        bits.push(stream.next_bit());
    }
    if stream.state() != start.value() {
        return Err(Error::NotDeBruijn {
            period: total + 1,
            expected: total,
        });
    }
    Ok(GeneratedSequence {
        n,
        bits,
        start: *start,
    })
}

/// [`generate`] from the all-zero state.
pub fn generate_canonical(rule: &Rule) -> Result<GeneratedSequence> {
    generate(rule, &BitWord::zeros(rule.order())?)
}

/// True iff the `2^n` cyclic windows of `bits` are pairwise distinct.
pub fn verify_de_bruijn(bits: &[u8], n: usize) -> bool {
    if n == 0 || n > MAX_GENERATE_ORDER || bits.len() != 1 << n || bits.iter().any(|&b| b > 1) {
        return false;
    }
    let len = bits.len();
    let mask = (1u64 << n) - 1;
    let mut seen = vec![0u64; len.div_ceil(64)];
    let mut w = 0u64;
    for &b in &bits[..n - 1] {
        w = (w << 1) | u64::from(b);
    }
    for i in 0..len {
        w = ((w << 1) | u64::from(bits[(i + n - 1) % len])) & mask;
        let (slot, bit) = ((w >> 6) as usize, 1u64 << (w & 63));
        if seen[slot] & bit != 0 {
            return false;
        }
        seen[slot] |= bit;
    }
    true
}

/// Packs bits eight to a byte, first bit in the most significant position; the tail is zero-padded.
pub fn pack_hex(bits: &[u8]) -> String {
    use std::fmt::Write as _;
    let mut out = String::with_capacity(bits.len().div_ceil(4));
    for chunk in bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)));
        write!(out, "{byte:02x}").unwrap();
    }
    out
}

/// Endless bit stream driven by a rule. Holds only the current state.
#[derive(Clone, Debug)]
pub struct BitStream<R: Borrow<Rule>> {
    rule: R,
    state: u64,
    mask: u64,
}

impl<R: Borrow<Rule>> BitStream<R> {
    /// Starts from the all-zero state.
    pub fn new(rule: R) -> Self {
        let n = rule.borrow().order();
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        BitStream {
            rule,
            state: 0,
            mask,
        }
    }

    pub fn from_state(rule: R, start: &BitWord) -> Self {
        let mut s = Self::new(rule);
        s.state = start.value() & s.mask;
        s
    }

    #[inline]
    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn state_word(&self) -> BitWord {
        BitWord::new(self.state, self.rule.borrow().order()).expect("state fits")
    }

    /// Emits the oldest bit of the current state and clocks the register once.
    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        let rule = self.rule.borrow();
        let n = rule.order();
        let out = ((self.state >> (n - 1)) & 1) as u8;
        let b = rule.next_bit_raw(self.state);
        self.state = ((self.state << 1) | u64::from(b)) & self.mask;
        out
    }
}

impl<R: Borrow<Rule>> Iterator for BitStream<R> {
    type Item = u8;

    #[inline]
    fn next(&mut self) -> Option<u8> {
        Some(self.next_bit())
    }
}

/// A conjugate pair `(0, x)`, `(1, x)` of `n`-bit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConjugatePair {
    pub zero: BitWord,
    pub one: BitWord,
}

impl ConjugatePair {
    pub fn from_suffix(n: usize, suffix: u64) -> Self {
        let zero = BitWord::new(suffix, n).expect("suffix fits");
        ConjugatePair {
            zero,
            one: zero.conjugate(),
        }
    }
}

impl fmt::Display for ConjugatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.zero, self.one)
    }
}

/// Conjugate pairs on which the rule departs from its base register.
pub fn fired_pairs(rule: &Rule) -> Result<Vec<ConjugatePair>> {
    let n = rule.order();
    sweep_budget(n, crate::fsr::MAX_SWEEP_ORDER)?;
    let half = 1u64 << (n - 1);
    let mut out = Vec::new();
    for suffix in 0..half {
        let lo = rule.fires_raw(suffix);
        let hi = rule.fires_raw(suffix | half);
        if lo != hi {
            let (fired, other) = if lo {
                (suffix, suffix | half)
            } else {
                (suffix | half, suffix)
            };
            return Err(Error::NotConjugateClosed(format!(
                "{} (conjugate {})",
                BitWord::new(fired, n)?,
                BitWord::new(other, n)?
            )));
        }
        if lo {
            out.push(ConjugatePair::from_suffix(n, suffix));
        }
    }
    Ok(out)
}
