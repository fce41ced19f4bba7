//! Fixed-length binary words.
//!
//! A [`BitWord`] holds up to 64 bits `b_0, b_1, ..., b_{m-1}` where `b_0` is the
//! leftmost (oldest) bit. Internally `b_0` sits in the most significant position
//! of the `m`-bit field, so the numeric value of a word is also its index in any
//! truth table and numeric order coincides with lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Largest supported word length.
pub const MAX_WORD_LEN: usize = 64;

/// An immutable word of `len` bits, `1 <= len <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    value: u64,
    len: u8,
}

/// Maximal cyclic run of zeros in a word.
///
/// The all-zero word has an unbounded run, which compares above every finite length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZeroRun {
    Finite(usize),
    Infinite,
}

impl fmt::Display for ZeroRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroRun::Finite(k) => write!(f, "{k}"),
            ZeroRun::Infinite => f.write_str("inf"),
        }
    }
}

#[inline]
fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitWord {
    /// Builds a word from its numeric value (`b_0` most significant).
    pub fn new(value: u64, len: usize) -> Result<Self, Error> {
        if len == 0 || len > MAX_WORD_LEN {
            return Err(Error::WordLength(len));
        }
        if value & !mask(len) != 0 {
            return Err(Error::WordValue { value, len });
        }
        Ok(Self::from_raw(value, len))
    }

    /// Unchecked constructor; `value` is truncated to `len` bits.
    #[inline]
    pub(crate) fn from_raw(value: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_WORD_LEN).contains(&len));
        BitWord {
            value: value & mask(len),
            len: len as u8,
        }
    }

    pub fn zeros(len: usize) -> Result<Self, Error> {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Result<Self, Error> {
        Self::new(mask(len.min(MAX_WORD_LEN)), len)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self, Error> {
        if bits.is_empty() || bits.len() > MAX_WORD_LEN {
            return Err(Error::WordLength(bits.len()));
        }
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(Error::Parse(format!("bit value {b} is not 0 or 1")));
            }
            value = (value << 1) | u64::from(b);
        }
        Ok(Self::from_raw(value, bits.len()))
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit `b_i`, counted from the left.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.value >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.bits().collect()
    }

    #[inline]
    pub fn first(&self) -> u8 {
        self.bit(0)
    }

    #[inline]
    pub fn last(&self) -> u8 {
        (self.value & 1) as u8
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.value.count_ones() as usize
    }

    /// Flips `b_0`.
    #[inline]
    pub fn conjugate(&self) -> Self {
        Self::from_raw(self.value ^ (1u64 << (self.len() - 1)), self.len())
    }

    /// Flips `b_{m-1}`.
    #[inline]
    pub fn companion(&self) -> Self {
        Self::from_raw(self.value ^ 1, self.len())
    }

    pub fn complement(&self) -> Self {
        Self::from_raw(!self.value, self.len())
    }

    #[inline]
    pub fn rotate_left(&self, k: usize) -> Self {
        let m = self.len();
        let k = k % m;
        if k == 0 {
            return *self;
        }
        Self::from_raw((self.value << k) | (self.value >> (m - k)), m)
    }

    #[inline]
    pub fn rotate_right(&self, k: usize) -> Self {
        let m = self.len();
        self.rotate_left(m - k % m)
    }

    /// Drops `b_0` and appends `bit` on the right: one register clock.
    #[inline]
    pub fn shift_in(&self, bit: u8) -> Self {
        Self::from_raw((self.value << 1) | u64::from(bit & 1), self.len())
    }

    /// Appends `bit` on the right, growing the word by one.
    pub fn push(&self, bit: u8) -> Result<Self, Error> {
        if self.len() == MAX_WORD_LEN {
            return Err(Error::WordLength(MAX_WORD_LEN + 1));
        }
        Ok(Self::from_raw(
            (self.value << 1) | u64::from(bit & 1),
            self.len() + 1,
        ))
    }

    /// True iff the word is lexicographically no greater than any of its rotations.
    ///
    /// Linear scan that tracks the period of the longest prenecklace prefix.
    pub fn is_necklace(&self) -> bool {
        let m = self.len();
        let mut p = 1;
        for i in 1..m {
            match self.bit(i - p).cmp(&self.bit(i)) {
                Ordering::Greater => return false,
                Ordering::Less => p = i + 1,
                Ordering::Equal => {}
            }
        }
        m.is_multiple_of(p)
    }

    /// Offset `r` such that `rotate_left(r)` is the least rotation (Booth's algorithm).
    pub fn least_rotation_offset(&self) -> usize {
        let m = self.len();
        let at = |i: usize| self.bit(i % m);
        let mut fail: Vec<isize> = vec![-1; 2 * m];
        let mut k = 0usize;
        for j in 1..2 * m {
            let sj = at(j);
            let mut i = fail[j - k - 1];
            while i != -1 && sj != at(k + i as usize + 1) {
                if sj < at(k + i as usize + 1) {
                    k = j - i as usize - 1;
                }
                i = fail[i as usize];
            }
            if i == -1 && sj != at(k) {
                if sj < at(k) {
                    k = j;
                }
                fail[j - k] = -1;
            } else {
                fail[j - k] = i + 1;
            }
        }
        k % m
    }

    /// The least rotation of the word.
    pub fn necklace(&self) -> Self {
        self.rotate_left(self.least_rotation_offset())
    }

    /// Smallest `p >= 1` with `rotate_left(p) == self`.
    pub fn least_period(&self) -> usize {
        let m = self.len();
        (1..=m)
            .find(|&p| m.is_multiple_of(p) && self.rotate_left(p) == *self)
            .unwrap_or(m)
    }

    /// Length of the longest cyclic run of zeros.
    pub fn max_zero_run(&self) -> ZeroRun {
        let m = self.len();
        if self.value == 0 {
            return ZeroRun::Infinite;
        }
        // Start just after a one so no run wraps past the scan window.
        let start = (0..m).find(|&i| self.bit(i) == 1).unwrap_or(0) + 1;
        let (mut best, mut cur) = (0, 0);
        for t in 0..m {
            if self.bit((start + t) % m) == 0 {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        ZeroRun::Finite(best)
    }

    /// True iff the word starts with `b_0 = b_1 = 0`.
    #[inline]
    pub fn starts_with_double_zero(&self) -> bool {
        self.len() >= 2 && self.value >> (self.len() - 2) == 0
    }

    /// True iff the word opens with a zero run of the maximal cyclic length.
    pub fn starts_with_max_zero_run(&self) -> bool {
        match self.max_zero_run() {
            ZeroRun::Infinite => true,
            ZeroRun::Finite(0) => true,
            ZeroRun::Finite(r) => r <= self.len() && self.value >> (self.len() - r) == 0,
        }
    }

    /// True iff two cyclically adjacent positions both hold zero.
    pub fn has_cyclic_double_zero(&self) -> bool {
        let zeros = !self.value & mask(self.len());
        zeros & self.rotate_left(1).complement().value != 0
    }

    /// Parity of the word.
    #[inline]
    pub fn parity(&self) -> u8 {
        (self.value.count_ones() & 1) as u8
    }
}

impl PartialOrd for BitWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order; words of different lengths compare by length first.
impl Ord for BitWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.value.cmp(&other.value))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "unexpected character {:?} in bit word {s:?}",
                    other as char
                ))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::from_bits(&bits)
    }
}

impl serde::Serialize for BitWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BitWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rotation classes used by the special shift operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftClass {
    /// Rotations with `b_0 = 0`.
    LeadingZero,
    /// Rotations with `b_{m-1} = 1`.
    EndingOne,
    /// Rotations opening with a maximal cyclic zero run.
    MaxZeroRun,
    /// Rotations opening with `00`.
    DoubleZero,
}

impl ShiftClass {
    fn admits(self, w: &BitWord) -> bool {
        match self {
            ShiftClass::LeadingZero => w.first() == 0,
            ShiftClass::EndingOne => w.last() == 1,
            ShiftClass::MaxZeroRun => w.starts_with_max_zero_run(),
            ShiftClass::DoubleZero => w.starts_with_double_zero(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ShiftClass::LeadingZero => "a leading-zero state",
            ShiftClass::EndingOne => "an ending-one state",
            ShiftClass::MaxZeroRun => "a state opening with a maximal zero run",
            ShiftClass::DoubleZero => "a state opening with two zeros",
        }
    }

    /// Left-rotation offsets `0 = p_0 < p_1 < ... < m` at which `w` lands in this class.
    ///
    /// Returns the offsets in a fixed buffer plus their count.
    fn offsets(self, w: &BitWord) -> ([u8; MAX_WORD_LEN], usize) {
        let mut buf = [0u8; MAX_WORD_LEN];
        let mut count = 0;
        let m = w.len();
        match self {
            ShiftClass::LeadingZero => {
                for p in 0..m {
                    if w.bit(p) == 0 {
                        buf[count] = p as u8;
                        count += 1;
                    }
                }
            }
            ShiftClass::EndingOne => {
                for p in 0..m {
                    if w.bit((p + m - 1) % m) == 1 {
                        buf[count] = p as u8;
                        count += 1;
                    }
                }
            }
            ShiftClass::DoubleZero => {
                for p in 0..m {
                    if w.bit(p) == 0 && w.bit((p + 1) % m) == 0 {
                        buf[count] = p as u8;
                        count += 1;
                    }
                }
            }
            ShiftClass::MaxZeroRun => {
                let run = match w.max_zero_run() {
                    ZeroRun::Finite(r) if r > 0 => r,
                    _ => 0,
                };
                for p in 0..m {
                    if run == 0 || w.rotate_left(p).value >> (m - run) == 0 {
                        buf[count] = p as u8;
                        count += 1;
                    }
                }
            }
        }
        (buf, count)
    }

    /// `k`-fold application of the class's shift operator.
    ///
    /// `k` is reduced modulo the number of class positions around one full turn.
    pub fn power(self, w: &BitWord, k: u64) -> Result<BitWord, Error> {
        if !self.admits(w) {
            return Err(Error::Precondition(format!("{w} is not {}", self.name())));
        }
        Ok(self.power_unchecked(w, k))
    }

    #[inline]
    pub(crate) fn power_unchecked(self, w: &BitWord, k: u64) -> BitWord {
        let m = w.len();
        let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        match self {
            ShiftClass::LeadingZero => {
                let zeros = !w.value & full;
                let r = k % u64::from(zeros.count_ones());
                return w.rotate_left(nth_from_msb(zeros, m, r));
            }
            ShiftClass::EndingOne => {
                // Rotation by p ends with bit p - 1; bit m - 1 gives p = 0.
                let ones = w.value & full;
                let mut r = k % u64::from(ones.count_ones());
                if ones & 1 == 1 {
                    if r == 0 {
                        return *w;
                    }
                    r -= 1;
                }
                return w.rotate_left(nth_from_msb(ones & !1, m, r) + 1);
            }
            _ => {}
        }
        let (offsets, count) = self.offsets(w);
        debug_assert!(count > 0 && offsets[0] == 0);
        w.rotate_left(offsets[(k % count as u64) as usize] as usize)
    }
}

/// Index, counted from the first bit, of the `r`-th set bit of `bits` (an `m`-bit value).
#[inline]
fn nth_from_msb(mut bits: u64, m: usize, r: u64) -> usize {
    for _ in 0..r {
        bits &= !(1u64 << (63 - bits.leading_zeros()));
    }
    m - 1 - (63 - bits.leading_zeros() as usize)
}

/// First leading-zero rotation reached by repeated left shifts.
pub fn shift_lz(v: &BitWord) -> Result<BitWord, Error> {
    ShiftClass::LeadingZero.power(v, 1)
}

/// First ending-one rotation reached by repeated left shifts.
pub fn shift_eo(u: &BitWord) -> Result<BitWord, Error> {
    ShiftClass::EndingOne.power(u, 1)
}

/// Next rotation that also opens with a maximal zero run.
pub fn shift_rz(v: &BitWord) -> Result<BitWord, Error> {
    ShiftClass::MaxZeroRun.power(v, 1)
}

/// First rotation opening with `00` reached by repeated left shifts.
pub fn shift_dz(v: &BitWord) -> Result<BitWord, Error> {
    ShiftClass::DoubleZero.power(v, 1)
}
