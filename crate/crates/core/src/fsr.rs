//! Feedback shift registers and their cycle structure.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{TruthTable, MAX_TABLE_ARITY};
use crate::word::{BitWord, MAX_WORD_LEN};

/// Default cap on the order accepted by full state-space sweeps.
pub const MAX_SWEEP_ORDER: usize = 26;

/// Cap for [`FeedbackFunction::cycle_index`], which stores 4 bytes per state.
pub const MAX_INDEX_ORDER: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FeedbackKind {
    /// Pure cycling register, `f = x_0`.
    Pcr,
    /// Pure summing register, `f = x_0 + ... + x_{n-1}`.
    Psr,
    /// Complemented summing register, `f = 1 + x_0 + ... + x_{n-1}`.
    Csr,
    /// Arbitrary nonsingular feedback given by its truth table.
    Table(TruthTable),
}

/// A nonsingular feedback function of order `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeedbackFunction {
    order: usize,
    kind: FeedbackKind,
}

impl FeedbackFunction {
    pub fn pcr(n: usize) -> Result<Self> {
        Self::new(n, FeedbackKind::Pcr)
    }

    pub fn psr(n: usize) -> Result<Self> {
        Self::new(n, FeedbackKind::Psr)
    }

    pub fn csr(n: usize) -> Result<Self> {
        Self::new(n, FeedbackKind::Csr)
    }

    /// Wraps a truth table, rejecting it unless `f(0, x) != f(1, x)` for every suffix `x`.
    pub fn table(table: TruthTable) -> Result<Self> {
        let n = table.arity();
        check_order(n, 2, MAX_TABLE_ARITY)?;
        let half = 1u64 << (n - 1);
        for suffix in 0..half {
            if table.get(suffix) == table.get(suffix | half) {
                return Err(Error::Singular(
                    BitWord::from_raw(suffix, n - 1).to_string(),
                ));
            }
        }
        Ok(FeedbackFunction {
            order: n,
            kind: FeedbackKind::Table(table),
        })
    }

    pub fn new(n: usize, kind: FeedbackKind) -> Result<Self> {
        match kind {
            FeedbackKind::Table(t) => {
                if t.arity() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        actual: t.arity(),
                    });
                }
                Self::table(t)
            }
            FeedbackKind::Pcr => {
                check_order(n, 2, MAX_WORD_LEN)?;
                Ok(FeedbackFunction { order: n, kind })
            }
            FeedbackKind::Psr | FeedbackKind::Csr => {
                check_order(n, 2, MAX_WORD_LEN - 1)?;
                Ok(FeedbackFunction { order: n, kind })
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &FeedbackKind {
        &self.kind
    }

    /// Name used in CLI output and JSON.
    pub fn name(&self) -> &'static str {
        match self.kind {
            FeedbackKind::Pcr => "pcr",
            FeedbackKind::Psr => "psr",
            FeedbackKind::Csr => "csr",
            FeedbackKind::Table(_) => "table",
        }
    }

    /// `f(state)` for an `n`-bit state value; no length check.
    #[inline]
    pub fn eval_raw(&self, state: u64) -> u8 {
        match &self.kind {
            FeedbackKind::Pcr => ((state >> (self.order - 1)) & 1) as u8,
            FeedbackKind::Psr => (state.count_ones() & 1) as u8,
            FeedbackKind::Csr => ((state.count_ones() & 1) ^ 1) as u8,
            FeedbackKind::Table(t) => t.get(state),
        }
    }

    pub fn evaluate(&self, state: &BitWord) -> Result<u8> {
        self.check_state(state)?;
        Ok(self.eval_raw(state.value()))
    }

    /// One clock: `s_1, ..., s_{n-1}, f(s)`.
    pub fn step(&self, state: &BitWord) -> Result<BitWord> {
        self.check_state(state)?;
        Ok(state.shift_in(self.eval_raw(state.value())))
    }

    pub(crate) fn check_state(&self, state: &BitWord) -> Result<()> {
        if state.len() != self.order {
            return Err(Error::LengthMismatch {
                expected: self.order,
                actual: state.len(),
            });
        }
        Ok(())
    }

    /// Length of the word that names a cycle: `n + 1` for the summing registers, `n` otherwise.
    pub fn window_len(&self) -> usize {
        match self.kind {
            FeedbackKind::Psr | FeedbackKind::Csr => self.order + 1,
            _ => self.order,
        }
    }

    /// The window of the cycle through `state`, starting at `state`.
    pub fn window_of(&self, state: &BitWord) -> BitWord {
        match self.kind {
            FeedbackKind::Psr | FeedbackKind::Csr => BitWord::from_raw(
                (state.value() << 1) | u64::from(self.eval_raw(state.value())),
                self.order + 1,
            ),
            _ => *state,
        }
    }

    /// Decomposes the state space into cycles, sorted by necklace.
    pub fn decompose(&self) -> Result<Vec<CycleRecord>> {
        self.decompose_with_limit(MAX_SWEEP_ORDER)
    }

    pub fn decompose_with_limit(&self, max_order: usize) -> Result<Vec<CycleRecord>> {
        sweep_budget(self.order, max_order)?;
        let total = 1u64 << self.order;
        let mut visited = vec![0u64; (total as usize).div_ceil(64)];
        let mut cycles = Vec::new();
        for start in 0..total {
            if visited[(start >> 6) as usize] >> (start & 63) & 1 == 1 {
                continue;
            }
            let mut rep = start;
            let mut count = 0u64;
            let mut ones = 0u64;
            let mut s = start;
            loop {
                visited[(s >> 6) as usize] |= 1 << (s & 63);
                count += 1;
                ones += s >> (self.order - 1);
                rep = rep.min(s);
                s = ((s << 1) | u64::from(self.eval_raw(s))) & (total - 1);
                if s == start {
                    break;
                }
            }
            cycles.push(self.record(BitWord::from_raw(rep, self.order), count, ones));
        }
        cycles.sort_by_key(|a| a.necklace);
        Ok(cycles)
    }

    /// Decomposition plus a map from every state to its cycle.
    pub fn cycle_index(&self) -> Result<CycleIndex> {
        sweep_budget(self.order, MAX_INDEX_ORDER)?;
        let cycles = self.decompose_with_limit(MAX_INDEX_ORDER)?;
        let m = (1u64 << self.order) - 1;
        let mut id = vec![u32::MAX; 1usize << self.order];
        for (i, c) in cycles.iter().enumerate() {
            let start = c.representative.value();
            let mut s = start;
            loop {
                id[s as usize] = i as u32;
                s = ((s << 1) | u64::from(self.eval_raw(s))) & m;
                if s == start {
                    break;
                }
            }
        }
        Ok(CycleIndex { cycles, id })
    }

    /// Record of the cycle through `state`, found by walking it.
    pub fn cycle_of(&self, state: &BitWord) -> Result<CycleRecord> {
        self.check_state(state)?;
        let start = state.value();
        let m = if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        };
        let (mut rep, mut count, mut ones, mut s) = (start, 0u64, 0u64, start);
        loop {
            count += 1;
            ones += s >> (self.order - 1);
            rep = rep.min(s);
            s = ((s << 1) | u64::from(self.eval_raw(s))) & m;
            if s == start {
                break;
            }
        }
        Ok(self.record(BitWord::from_raw(rep, self.order), count, ones))
    }

    fn record(&self, representative: BitWord, state_count: u64, ones: u64) -> CycleRecord {
        let (necklace, weight) = match self.kind {
            FeedbackKind::Table(_) => (representative, ones as usize),
            _ => {
                let nk = self.window_of(&representative).necklace();
                (nk, nk.weight())
            }
        };
        CycleRecord {
            necklace,
            representative,
            least_period: state_count,
            weight,
            state_count,
        }
    }
}

impl fmt::Display for FeedbackFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of order {}", self.name(), self.order)
    }
}

fn check_order(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::Order { n, min, max });
    }
    Ok(())
}

pub(crate) fn sweep_budget(n: usize, max_order: usize) -> Result<()> {
    if n > max_order {
        return Err(Error::Budget {
            what: format!("sweeping all 2^{n} states"),
            predicted: 1u128 << n,
            budget: 1u128 << max_order,
        });
    }
    Ok(())
}

/// One cycle of a feedback shift register.
///
/// `necklace` is the least rotation of the cycle's ambient window (`n` bits for
/// the cycling register and explicit tables, `n + 1` bits for the summing
/// registers). For explicit tables, whose cycles need not have short periods,
/// it is the lexicographically least state of the cycle and `weight` counts
/// ones over one period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycleRecord {
    pub necklace: BitWord,
    /// Lexicographically least `n`-bit state on the cycle.
    pub representative: BitWord,
    pub least_period: u64,
    pub weight: usize,
    pub state_count: u64,
}

impl fmt::Display for CycleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.necklace)
    }
}

/// Cycles of a register with a state-to-cycle lookup.
#[derive(Clone, Debug)]
pub struct CycleIndex {
    pub cycles: Vec<CycleRecord>,
    id: Vec<u32>,
}

impl CycleIndex {
    /// Position in `cycles` of the cycle holding the `n`-bit state with value `state`.
    #[inline]
    pub fn cycle_id(&self, state: u64) -> usize {
        self.id[state as usize] as usize
    }

    pub fn cycle_of(&self, state: &BitWord) -> &CycleRecord {
        &self.cycles[self.cycle_id(state.value())]
    }

    /// Position of the cycle with the given necklace.
    pub fn find(&self, necklace: &BitWord) -> Option<usize> {
        self.cycles
            .binary_search_by(|c| c.necklace.cmp(necklace))
            .ok()
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Number of cycles of the cycling register, `(1/n) sum_{d | n} phi(d) 2^(n/d)`.
pub fn pcr_cycle_count(n: usize) -> Result<u64> {
    check_order(n, 1, 64)?;
    let n = n as u64;
    let total: u128 = divisors(n)
        .map(|d| u128::from(euler_phi(d)) << (n / d))
        .sum();
    Ok((total / u128::from(n)) as u64)
}

/// Number of cycles of the summing register of order `n`.
///
/// For even `n` this is `Z_{n+1} / 2`. For odd `n = 2^t n' - 1` with `n'` odd the
/// count is `Z_{n+1} - (1 / (2(n+1))) sum_{d | n'} phi(n'/d) 2^(d 2^t)`.
pub fn psr_cycle_count(n: usize) -> Result<u64> {
    check_order(n, 2, 63)?;
    let z = u128::from(pcr_cycle_count(n + 1)?);
    if n.is_multiple_of(2) {
        return Ok((z / 2) as u64);
    }
    let m = (n + 1) as u64;
    let t = m.trailing_zeros();
    let odd = m >> t;
    let sum: u128 = divisors(odd)
        .map(|d| u128::from(euler_phi(odd / d)) << (d << t))
        .sum();
    Ok((z - sum / (2 * u128::from(m))) as u64)
}

/// Embeds an `n`-bit state into its PSR window by appending the parity bit.
pub fn extend_psr_state(c: &BitWord) -> Result<BitWord> {
    c.push(c.parity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let s = w("101100");
        assert_eq!(FeedbackFunction::pcr(6).unwrap().evaluate(&s).unwrap(), 1);
        assert_eq!(FeedbackFunction::psr(6).unwrap().evaluate(&s).unwrap(), 1);
        assert_eq!(FeedbackFunction::csr(6).unwrap().evaluate(&s).unwrap(), 0);
        assert!(FeedbackFunction::pcr(6)
            .unwrap()
            .evaluate(&w("10110"))
            .is_err());
    }

    #[test]
    fn step_examples() {
        let pcr = FeedbackFunction::pcr(6).unwrap();
        let psr = FeedbackFunction::psr(6).unwrap();
        assert_eq!(pcr.step(&w("011010")).unwrap(), w("110100"));
        assert_eq!(psr.step(&w("000001")).unwrap(), w("000011"));
        assert_eq!(psr.step(&w("000011")).unwrap(), w("000110"));
    }

    #[test]
    fn pcr_step_is_rotation() {
        let pcr = FeedbackFunction::pcr(7).unwrap();
        for v in 0..128 {
            let s = BitWord::from_raw(v, 7);
            assert_eq!(pcr.step(&s).unwrap(), s.rotate_left(1));
        }
    }

    #[test]
    fn small_decompositions() {
        let pcr2 = FeedbackFunction::pcr(2).unwrap().decompose().unwrap();
        let names: Vec<String> = pcr2.iter().map(|c| c.necklace.to_string()).collect();
        assert_eq!(names, ["00", "01", "11"]);
        assert_eq!(
            FeedbackFunction::pcr(6).unwrap().decompose().unwrap().len(),
            14
        );
        let psr6 = FeedbackFunction::psr(6).unwrap().decompose().unwrap();
        assert_eq!(psr6.len(), 10);
        let expected = [
            "0000000", "0000011", "0000101", "0001001", "0001111", "0010111", "0011011", "0011101",
            "0101011", "0111111",
        ];
        let names: Vec<String> = psr6.iter().map(|c| c.necklace.to_string()).collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn cycle_count_formulas() {
        assert_eq!(pcr_cycle_count(6).unwrap(), 14);
        assert_eq!(pcr_cycle_count(1).unwrap(), 2);
        assert_eq!(pcr_cycle_count(7).unwrap(), 20);
        assert_eq!(psr_cycle_count(6).unwrap(), 10);
        assert_eq!(psr_cycle_count(2).unwrap(), 2);
        assert_eq!(psr_cycle_count(3).unwrap(), 4);
        for n in 2..=16 {
            assert_eq!(
                pcr_cycle_count(n).unwrap() as usize,
                FeedbackFunction::pcr(n).unwrap().decompose().unwrap().len(),
                "pcr {n}"
            );
            assert_eq!(
                psr_cycle_count(n).unwrap() as usize,
                FeedbackFunction::psr(n).unwrap().decompose().unwrap().len(),
                "psr {n}"
            );
        }
    }

    #[test]
    fn decomposition_partitions_state_space() {
        for n in 2..=16 {
            for f in [
                FeedbackFunction::pcr(n).unwrap(),
                FeedbackFunction::psr(n).unwrap(),
                FeedbackFunction::csr(n).unwrap(),
            ] {
                let cycles = f.decompose().unwrap();
                let total: u64 = cycles.iter().map(|c| c.state_count).sum();
                assert_eq!(total, 1 << n, "{f}");
                let window = f.window_len();
                for c in &cycles {
                    assert!(c.necklace.is_necklace());
                    assert_eq!(c.necklace.len(), window);
                    assert_eq!(window as u64 % c.least_period, 0, "{f} {c}");
                    match f.kind() {
                        FeedbackKind::Psr => assert_eq!(c.weight % 2, 0),
                        FeedbackKind::Csr => assert_eq!(c.weight % 2, 1),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn pcr_cycles_share_weight() {
        let f = FeedbackFunction::pcr(8).unwrap();
        for v in 0..256 {
            let s = BitWord::from_raw(v, 8);
            assert_eq!(f.cycle_of(&s).unwrap().weight, s.weight());
        }
    }

    #[test]
    fn psr_extension() {
        assert_eq!(extend_psr_state(&w("000000")).unwrap(), w("0000000"));
        assert_eq!(extend_psr_state(&w("010101")).unwrap(), w("0101011"));
        let ext = extend_psr_state(&w("101010")).unwrap();
        assert_eq!(ext, w("1010101"));
        assert_eq!(ext.necklace(), w("0101011"));
    }

    #[test]
    fn singular_tables_rejected() {
        let t = TruthTable::from_fn(3, |_| 0).unwrap();
        assert!(matches!(
            FeedbackFunction::table(t),
            Err(Error::Singular(_))
        ));
        let pcr_table = TruthTable::from_fn(3, |x| (x >> 2) as u8).unwrap();
        let f = FeedbackFunction::table(pcr_table).unwrap();
        assert_eq!(f.decompose().unwrap().len(), 4);
    }

    #[test]
    fn cycle_index_lookup() {
        let f = FeedbackFunction::psr(6).unwrap();
        let idx = f.cycle_index().unwrap();
        let c2 = idx.find(&w("0101011")).unwrap();
        assert_eq!(idx.cycle_id(w("101010").value()), c2);
        assert_eq!(idx.cycle_of(&w("010101")).necklace, w("0101011"));
        for v in 0..64 {
            let s = BitWord::from_raw(v, 6);
            assert_eq!(idx.cycle_of(&s).necklace, f.window_of(&s).necklace());
        }
    }

    #[test]
    fn sweep_budget_enforced() {
        let f = FeedbackFunction::pcr(30).unwrap();
        assert!(matches!(f.decompose(), Err(Error::Budget { .. })));
    }
}
