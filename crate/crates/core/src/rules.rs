//! Successor rules: each family is a next-bit function on `n`-bit states that
//! follows a base register and complements its output on selected states.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fsr::{self, CycleRecord, FeedbackFunction, FeedbackKind};
use crate::graph::CycleOrder;
use crate::table::TruthTable;
use crate::word::{BitWord, ShiftClass, MAX_WORD_LEN};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Fires when `L_lz^k (0, c_1..c_{n-1})` is a necklace.
    PcrLzK {
        k: u64,
    },
    /// Fires when `L_eo^k (c_1..c_{n-1}, 1)` is a necklace.
    PcrEoK {
        k: u64,
    },
    /// Rotation to the last zero, in closed form. Same output as `PcrLzK` with `k = lcm(1..n-1) - 1`.
    PcrLzPrev,
    /// Rotation past the first one, in closed form. Same output as `PcrEoK` with `k = 1`.
    PcrEoNext,
    /// `ks = [1, k_2, ..., n + 1]`: the shift power depends on the band holding the zero count of `v`.
    PcrWeightBandsLz {
        ks: Vec<usize>,
    },
    /// As above, banded on the weight of `u`.
    PcrWeightBandsEo {
        ks: Vec<usize>,
    },
    /// `g[w - 1]` is the shift power for zero count `w`, `0 <= g[w - 1] < w`.
    PcrGLz {
        g: Vec<usize>,
    },
    /// `g[w - 1]` is the shift power for weight `w`.
    PcrGEo {
        g: Vec<usize>,
    },
    /// One leading-zero state per PCR cycle other than `(1)`.
    PcrTable {
        choice: Vec<BitWord>,
    },
    /// The lexicographic-representative rule over any nonsingular register.
    Jfb {
        f: FeedbackFunction,
    },
    PsrRunK {
        k: u64,
    },
    PsrEoK {
        k: u64,
    },
    PsrIndexS,
    PsrIndexT,
    /// One admissible ending-one `(n+1)`-bit state per PSR cycle other than `(0)`.
    PsrEoTable {
        choice: Vec<BitWord>,
    },
    PsrMixedK {
        k: u64,
    },
}

/// Register whose feedback a rule follows between fired states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Register {
    Pcr,
    Psr,
    Custom,
}

/// The two families whose parameters are explicit per-cycle choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    Pcr,
    PsrEo,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PcrLzK { .. } => "pcr-lz-k",
            Family::PcrEoK { .. } => "pcr-eo-k",
            Family::PcrLzPrev => "new1-rule",
            Family::PcrEoNext => "new2-rule",
            Family::PcrWeightBandsLz { .. } => "pcr-weight-bands-lz",
            Family::PcrWeightBandsEo { .. } => "pcr-weight-bands-eo",
            Family::PcrGLz { .. } => "pcr-g-lz",
            Family::PcrGEo { .. } => "pcr-g-eo",
            Family::PcrTable { .. } => "pcr-table",
            Family::Jfb { .. } => "jfb",
            Family::PsrRunK { .. } => "psr-run-k",
            Family::PsrEoK { .. } => "psr-eo-k",
            Family::PsrIndexS => "psr-index-s",
            Family::PsrIndexT => "psr-index-t",
            Family::PsrEoTable { .. } => "psr-eo-table",
            Family::PsrMixedK { .. } => "psr-mixed-k",
        }
    }

    pub fn register(&self) -> Register {
        match self {
            Family::Jfb { .. } => Register::Custom,
            Family::PsrRunK { .. }
            | Family::PsrEoK { .. }
            | Family::PsrIndexS
            | Family::PsrIndexT
            | Family::PsrEoTable { .. }
            | Family::PsrMixedK { .. } => Register::Psr,
            _ => Register::Pcr,
        }
    }

    /// The cycle order whose spanning tree this family builds.
    pub fn order(&self) -> CycleOrder {
        match self {
            Family::PcrLzK { .. }
            | Family::PcrLzPrev
            | Family::PcrWeightBandsLz { .. }
            | Family::PcrGLz { .. }
            | Family::PcrTable { .. } => CycleOrder::WeightTowardHeavier,
            Family::PcrEoK { .. }
            | Family::PcrEoNext
            | Family::PcrWeightBandsEo { .. }
            | Family::PcrGEo { .. } => CycleOrder::WeightTowardLighter,
            Family::Jfb { .. } => CycleOrder::Lexicographic,
            Family::PsrRunK { .. } => CycleOrder::Run,
            Family::PsrEoK { .. }
            | Family::PsrIndexS
            | Family::PsrIndexT
            | Family::PsrEoTable { .. } => CycleOrder::Necklace,
            Family::PsrMixedK { .. } => CycleOrder::Mixed,
        }
    }

    /// Names accepted by [`RuleSpec::from_json`], in display order.
    pub const NAMES: [&'static str; 16] = [
        "pcr-lz-k",
        "pcr-eo-k",
        "new1-rule",
        "new2-rule",
        "pcr-weight-bands-lz",
        "pcr-weight-bands-eo",
        "pcr-g-lz",
        "pcr-g-eo",
        "pcr-table",
        "jfb",
        "psr-run-k",
        "psr-eo-k",
        "psr-index-s",
        "psr-index-t",
        "psr-eo-table",
        "psr-mixed-k",
    ];

    fn params(&self) -> Value {
        match self {
            Family::PcrLzK { k }
            | Family::PcrEoK { k }
            | Family::PsrRunK { k }
            | Family::PsrEoK { k }
            | Family::PsrMixedK { k } => json!({ "k": k }),
            Family::PcrWeightBandsLz { ks } | Family::PcrWeightBandsEo { ks } => {
                json!({ "ks": ks })
            }
            Family::PcrGLz { g } | Family::PcrGEo { g } => json!({ "g": g }),
            Family::PcrTable { choice } | Family::PsrEoTable { choice } => {
                json!({ "choice": choice.iter().map(|w| w.to_string()).collect::<Vec<_>>() })
            }
            Family::Jfb { f } => match f.kind() {
                FeedbackKind::Table(t) => json!({ "f": "table", "table": t.to_hex() }),
                _ => json!({ "f": f.name() }),
            },
            Family::PcrLzPrev | Family::PcrEoNext | Family::PsrIndexS | Family::PsrIndexT => {
                json!({})
            }
        }
    }
}

/// A rule family together with the register order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub n: usize,
    pub family: Family,
}

impl RuleSpec {
    pub fn new(n: usize, family: Family) -> Self {
        RuleSpec { n, family }
    }

    /// All violated invariants, or `Ok` when the spec is usable.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let n = self.n;
        let max = match self.family.register() {
            Register::Pcr => MAX_WORD_LEN,
            _ => MAX_WORD_LEN - 1,
        };
        if n < 2 || n > max {
            errs.push(format!(
                "order {n} is outside 2..={max} for {}",
                self.family.name()
            ));
            return Err(errs);
        }
        match &self.family {
            Family::PcrWeightBandsLz { ks } | Family::PcrWeightBandsEo { ks } => {
                check_bands(n, ks, &mut errs)
            }
            Family::PcrGLz { g } | Family::PcrGEo { g } => {
                if g.len() != n {
                    errs.push(format!(
                        "g needs {n} entries (weights 1..={n}), got {}",
                        g.len()
                    ));
                }
                for (i, &v) in g.iter().enumerate() {
                    if v > i {
                        errs.push(format!("g[{}] = {v} is not below {}", i + 1, i + 1));
                    }
                }
            }
            Family::PsrEoK { k } if *k == 0 => errs.push("psr-eo-k needs k >= 1".into()),
            Family::Jfb { f } if f.order() != n => errs.push(format!(
                "feedback function has order {}, expected {n}",
                f.order()
            )),
            Family::PcrTable { choice } => check_pcr_table(n, choice, &mut errs),
            Family::PsrEoTable { choice } => check_psr_eo_table(n, choice, &mut errs),
            _ => {}
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Validates and prepares the spec for stepping.
    pub fn compile(&self) -> Result<Rule> {
        Rule::new(self.clone())
    }

    /// Convenience one-off evaluation; compile once when stepping repeatedly.
    pub fn next_bit(&self, state: &BitWord) -> Result<u8> {
        self.compile()?.next_bit(state)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "family": self.family.name(), "params": self.family.params() })
    }

    /// Parses `{"n": .., "family": .., "params": {..}}`. Does not validate.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| spec_err("rule spec must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| spec_err("missing integer field \"n\""))? as usize;
        let name = obj
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| spec_err("missing string field \"family\""))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(m)) => m,
            Some(_) => return Err(spec_err("\"params\" must be an object")),
        };
        let k = |default: Option<u64>| -> Result<u64> {
            match params.get("k") {
                Some(v) => v
                    .as_u64()
                    .ok_or_else(|| spec_err("\"k\" must be a nonnegative integer")),
                None => default.ok_or_else(|| spec_err(format!("{name} needs parameter \"k\""))),
            }
        };
        let list = |key: &str| -> Result<Vec<usize>> {
            let arr = params
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| spec_err(format!("{name} needs array parameter \"{key}\"")))?;
            arr.iter()
                .map(|v| {
                    v.as_u64().map(|x| x as usize).ok_or_else(|| {
                        spec_err(format!("\"{key}\" entries must be nonnegative integers"))
                    })
                })
                .collect()
        };
        let choice = || -> Result<Vec<BitWord>> {
            let arr = params
                .get("choice")
                .and_then(Value::as_array)
                .ok_or_else(|| spec_err(format!("{name} needs array parameter \"choice\"")))?;
            arr.iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| spec_err("\"choice\" entries must be bit strings"))?
                        .parse()
                })
                .collect()
        };
        let family = match name {
            "pcr-lz-k" => Family::PcrLzK { k: k(None)? },
            "pcr-eo-k" => Family::PcrEoK { k: k(None)? },
            "new1-rule" => Family::PcrLzPrev,
            "new2-rule" => Family::PcrEoNext,
            "pcr-weight-bands-lz" => Family::PcrWeightBandsLz { ks: list("ks")? },
            "pcr-weight-bands-eo" => Family::PcrWeightBandsEo { ks: list("ks")? },
            "pcr-g-lz" => Family::PcrGLz { g: list("g")? },
            "pcr-g-eo" => Family::PcrGEo { g: list("g")? },
            "pcr-table" => Family::PcrTable { choice: choice()? },
            "jfb" => Family::Jfb {
                f: parse_feedback(n, params)?,
            },
            "psr-run-k" => Family::PsrRunK { k: k(None)? },
            "psr-eo-k" => Family::PsrEoK { k: k(None)? },
            "psr-index-s" => Family::PsrIndexS,
            "psr-index-t" => Family::PsrIndexT,
            "psr-eo-table" => Family::PsrEoTable { choice: choice()? },
            "psr-mixed-k" => Family::PsrMixedK { k: k(None)? },
            other => {
                return Err(spec_err(format!(
                    "unknown family {other:?}; expected one of {}",
                    Family::NAMES.join(", ")
                )))
            }
        };
        Ok(RuleSpec { n, family })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.family.name(), self.n)?;
        match &self.family {
            Family::PcrLzK { k }
            | Family::PcrEoK { k }
            | Family::PsrRunK { k }
            | Family::PsrEoK { k }
            | Family::PsrMixedK { k } => write!(f, " k={k}"),
            Family::PcrWeightBandsLz { ks } | Family::PcrWeightBandsEo { ks } => {
                write!(f, " ks={ks:?}")
            }
            Family::PcrGLz { g } | Family::PcrGEo { g } => write!(f, " g={g:?}"),
            Family::Jfb { f: ff } => write!(f, " f={}", ff.name()),
            _ => Ok(()),
        }
    }
}

impl Serialize for RuleSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RuleSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        RuleSpec::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(vec![msg.into()])
}

fn parse_feedback(n: usize, params: &Map<String, Value>) -> Result<FeedbackFunction> {
    let kind = params.get("f").and_then(Value::as_str).unwrap_or("pcr");
    match kind {
        "pcr" => FeedbackFunction::pcr(n),
        "psr" => FeedbackFunction::psr(n),
        "csr" => FeedbackFunction::csr(n),
        "table" => {
            let text = params
                .get("table")
                .and_then(Value::as_str)
                .ok_or_else(|| spec_err("jfb with f=table needs a \"table\" string"))?;
            FeedbackFunction::table(TruthTable::parse(n, text)?)
        }
        other => Err(spec_err(format!(
            "unknown feedback {other:?}; expected pcr, psr, csr or table"
        ))),
    }
}

fn check_bands(n: usize, ks: &[usize], errs: &mut Vec<String>) {
    if ks.len() < 2 {
        errs.push(format!("ks needs at least two entries, got {ks:?}"));
        return;
    }
    if ks[0] != 1 {
        errs.push(format!("ks must start with 1, got {}", ks[0]));
    }
    if ks[ks.len() - 1] != n + 1 {
        errs.push(format!(
            "ks must end with n + 1 = {}, got {}",
            n + 1,
            ks[ks.len() - 1]
        ));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        errs.push(format!("ks must be strictly ascending, got {ks:?}"));
    }
    if ks[ks.len() - 2] >= n {
        errs.push(format!(
            "second-to-last entry of ks must be below n = {n}, got {}",
            ks[ks.len() - 2]
        ));
    }
}

fn check_pcr_table(n: usize, choice: &[BitWord], errs: &mut Vec<String>) {
    let mut necklaces = Vec::with_capacity(choice.len());
    for w in choice {
        if w.len() != n {
            errs.push(format!("chosen state {w} does not have {n} bits"));
        } else if w.first() != 0 {
            errs.push(format!("chosen state {w} does not start with 0"));
        } else {
            necklaces.push(w.necklace());
        }
    }
    check_one_per_cycle(
        fsr::pcr_cycle_count(n).map(|z| z - 1),
        &mut necklaces,
        choice.len(),
        errs,
    );
}

fn check_psr_eo_table(n: usize, choice: &[BitWord], errs: &mut Vec<String>) {
    let mut necklaces = Vec::with_capacity(choice.len());
    for w in choice {
        if w.len() != n + 1 {
            errs.push(format!("chosen state {w} does not have {} bits", n + 1));
        } else if w.last() != 1 {
            errs.push(format!("chosen state {w} does not end with 1"));
        } else if w.weight() % 2 != 0 {
            errs.push(format!(
                "chosen state {w} has odd weight, so no PSR cycle holds it"
            ));
        } else {
            let nk = w.necklace();
            if ending_one_count(&nk) > 1 && *w == nk {
                errs.push(format!(
                    "chosen state {w} is the necklace of a cycle with several ending-one states"
                ));
            }
            necklaces.push(nk);
        }
    }
    check_one_per_cycle(
        fsr::psr_cycle_count(n).map(|z| z - 1),
        &mut necklaces,
        choice.len(),
        errs,
    );
}

fn check_one_per_cycle(
    expected: Result<u64>,
    necklaces: &mut [BitWord],
    given: usize,
    errs: &mut Vec<String>,
) {
    necklaces.sort();
    for pair in necklaces.windows(2) {
        if pair[0] == pair[1] {
            errs.push(format!(
                "cycle ({}) has more than one chosen state",
                pair[0]
            ));
        }
    }
    if let Ok(expected) = expected {
        if given as u64 != expected {
            errs.push(format!(
                "expected one chosen state for each of {expected} cycles, got {given}"
            ));
        }
    }
}

/// Distinct rotations of `w` ending in 1.
fn ending_one_count(w: &BitWord) -> usize {
    let p = w.least_period();
    (0..p).filter(|&i| w.rotate_left(i).last() == 1).count()
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A validated spec, ready for stepping.
#[derive(Clone, Debug)]
pub struct Rule {
    spec: RuleSpec,
    /// Sorted chosen-state values for the table families.
    chosen: Vec<u64>,
}

impl Rule {
    pub fn new(spec: RuleSpec) -> Result<Self> {
        spec.validate().map_err(Error::InvalidSpec)?;
        let mut chosen: Vec<u64> = match &spec.family {
            Family::PcrTable { choice } | Family::PsrEoTable { choice } => {
                choice.iter().map(|w| w.value()).collect()
            }
            _ => Vec::new(),
        };
        chosen.sort_unstable();
        Ok(Rule { spec, chosen })
    }

    /// Skips validation; for exercising failure paths.
    #[cfg(test)]
    pub(crate) fn unchecked(spec: RuleSpec) -> Self {
        let mut chosen: Vec<u64> = match &spec.family {
            Family::PcrTable { choice } | Family::PsrEoTable { choice } => {
                choice.iter().map(|w| w.value()).collect()
            }
            _ => Vec::new(),
        };
        chosen.sort_unstable();
        Rule { spec, chosen }
    }

    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.spec.n
    }

    /// The register this rule modifies.
    pub fn base_function(&self) -> FeedbackFunction {
        match &self.spec.family {
            Family::Jfb { f } => f.clone(),
            fam => match fam.register() {
                Register::Psr => FeedbackFunction::psr(self.spec.n),
                _ => FeedbackFunction::pcr(self.spec.n),
            }
            .expect("order validated"),
        }
    }

    pub fn next_bit(&self, state: &BitWord) -> Result<u8> {
        if state.len() != self.spec.n {
            return Err(Error::LengthMismatch {
                expected: self.spec.n,
                actual: state.len(),
            });
        }
        Ok(self.next_bit_raw(state.value()))
    }

    /// The successor bit for the state with value `c`; `c` must fit in `n` bits.
    #[inline]
    pub fn next_bit_raw(&self, c: u64) -> u8 {
        self.base_bit_raw(c) ^ u8::from(self.fires_raw(c))
    }

    /// Bit the unmodified register would produce.
    #[inline]
    pub fn base_bit_raw(&self, c: u64) -> u8 {
        let n = self.spec.n;
        match &self.spec.family {
            Family::Jfb { f } => f.eval_raw(c),
            fam => match fam.register() {
                Register::Psr => (c.count_ones() & 1) as u8,
                _ => ((c >> (n - 1)) & 1) as u8,
            },
        }
    }

    /// True iff the rule complements the base bit at state `c`.
    pub fn fires_raw(&self, c: u64) -> bool {
        let n = self.spec.n;
        let suffix = c & low_mask(n - 1);
        // v = 0, c_1..c_{n-1}; u = c_1..c_{n-1}, 1
        let v = || BitWord::from_raw(suffix, n);
        let u = || BitWord::from_raw((suffix << 1) | 1, n);
        let s = (suffix.count_ones() & 1) as u64;
        match &self.spec.family {
            Family::PcrLzK { k } => ShiftClass::LeadingZero
                .power_unchecked(&v(), *k)
                .is_necklace(),
            Family::PcrEoK { k } => ShiftClass::EndingOne
                .power_unchecked(&u(), *k)
                .is_necklace(),
            Family::PcrLzPrev => {
                let zeros = !suffix & low_mask(n - 1);
                if zeros == 0 {
                    return v().is_necklace();
                }
                // Largest j in 1..n with c_j = 0.
                let j = n - 1 - zeros.trailing_zeros() as usize;
                v().rotate_left(j).is_necklace()
            }
            Family::PcrEoNext => {
                if suffix == 0 {
                    return u().is_necklace();
                }
                // Least j in 1..n with c_j = 1.
                let j = n - 1 - (63 - suffix.leading_zeros() as usize);
                u().rotate_left(j).is_necklace()
            }
            Family::PcrWeightBandsLz { ks } => {
                let w = n - suffix.count_ones() as usize;
                let lo = band_floor(ks, w);
                ShiftClass::LeadingZero
                    .power_unchecked(&v(), (lo - 1) as u64)
                    .is_necklace()
            }
            Family::PcrWeightBandsEo { ks } => {
                let w = suffix.count_ones() as usize + 1;
                let lo = band_floor(ks, w);
                ShiftClass::EndingOne
                    .power_unchecked(&u(), (lo - 1) as u64)
                    .is_necklace()
            }
            Family::PcrGLz { g } => {
                let w = n - suffix.count_ones() as usize;
                ShiftClass::LeadingZero
                    .power_unchecked(&v(), g[w - 1] as u64)
                    .is_necklace()
            }
            Family::PcrGEo { g } => {
                let w = suffix.count_ones() as usize + 1;
                ShiftClass::EndingOne
                    .power_unchecked(&u(), g[w - 1] as u64)
                    .is_necklace()
            }
            Family::PcrTable { .. } => self.chosen.binary_search(&suffix).is_ok(),
            Family::Jfb { f } => {
                if suffix == 0 {
                    // Special case: the successor bit is the complement of c_0.
                    return u64::from(f.eval_raw(c)) == c >> (n - 1);
                }
                is_cycle_representative(f, suffix << 1)
                    || is_cycle_representative(f, (suffix << 1) | 1)
            }
            Family::PsrRunK { k } => {
                let w = BitWord::from_raw((suffix << 2) | ((1 ^ s) << 1) | 1, n + 1);
                w.starts_with_max_zero_run()
                    && ShiftClass::MaxZeroRun.power_unchecked(&w, *k).is_necklace()
            }
            Family::PsrEoK { k } => {
                let w = psr_eo_word(n, suffix, s);
                let x = ShiftClass::EndingOne.power_unchecked(&w, *k);
                if x != w {
                    x.is_necklace()
                } else {
                    ShiftClass::EndingOne.power_unchecked(&w, 1).is_necklace()
                }
            }
            Family::PsrIndexS | Family::PsrIndexT => {
                let w = psr_eo_word(n, suffix, s);
                let d = w.value() >> 1;
                let idx = if matches!(self.spec.family, Family::PsrIndexS) {
                    n - 1 - d.trailing_zeros() as usize
                } else {
                    n - 1 - (63 - d.leading_zeros() as usize)
                };
                w.rotate_left(idx + 1).is_necklace()
            }
            Family::PsrEoTable { .. } => {
                let w = psr_eo_word(n, suffix, s);
                self.chosen.binary_search(&w.value()).is_ok()
            }
            Family::PsrMixedK { k } => {
                let cyc = BitWord::from_raw((suffix << 1) | s, n + 1);
                if cyc.has_cyclic_double_zero() {
                    return s == 0
                        && ShiftClass::DoubleZero
                            .power_unchecked(&BitWord::from_raw(suffix, n + 1), *k)
                            .is_necklace();
                }
                let zeros = !suffix & low_mask(n - 1);
                if zeros == 0 {
                    return false;
                }
                // Least j >= 1 with c_j = 0.
                let j = n - 1 - (63 - zeros.leading_zeros() as usize);
                BitWord::from_raw((suffix << 1) | 1, n + 1)
                    .rotate_left(j)
                    .is_necklace()
            }
        }
    }
}

/// `1 + c_1 + ... + c_{n-1}, c_1, ..., c_{n-1}, 1` as an `(n+1)`-bit word.
#[inline]
fn psr_eo_word(n: usize, suffix: u64, s: u64) -> BitWord {
    BitWord::from_raw(((1 ^ s) << n) | (suffix << 1) | 1, n + 1)
}

/// Lower end of the band `k_i <= w < k_{i+1}`.
#[inline]
fn band_floor(ks: &[usize], w: usize) -> usize {
    let i = ks.partition_point(|&k| k <= w);
    ks[i - 1]
}

/// True iff `x` is the least state on its `f`-cycle; walks the cycle.
fn is_cycle_representative(f: &FeedbackFunction, x: u64) -> bool {
    let m = low_mask(f.order());
    let mut s = ((x << 1) | u64::from(f.eval_raw(x))) & m;
    while s != x {
        if s < x {
            return false;
        }
        s = ((s << 1) | u64::from(f.eval_raw(s))) & m;
    }
    true
}

/// Admissible chosen states for each cycle, in cycle order.
pub fn table_options(kind: TableKind, n: usize) -> Result<Vec<(CycleRecord, Vec<BitWord>)>> {
    let f = match kind {
        TableKind::Pcr => FeedbackFunction::pcr(n)?,
        TableKind::PsrEo => FeedbackFunction::psr(n)?,
    };
    let mut out = Vec::new();
    for cyc in f.decompose()? {
        let nk = cyc.necklace;
        let p = nk.least_period();
        let rotations = (0..p).map(|i| nk.rotate_left(i));
        let mut opts: Vec<BitWord> = match kind {
            TableKind::Pcr => {
                if nk.weight() == n {
                    continue;
                }
                rotations.filter(|r| r.first() == 0).collect()
            }
            TableKind::PsrEo => {
                if nk.weight() == 0 {
                    continue;
                }
                let eo: Vec<BitWord> = rotations.filter(|r| r.last() == 1).collect();
                if eo.len() == 1 {
                    eo
                } else {
                    eo.into_iter().filter(|r| *r != nk).collect()
                }
            }
        };
        opts.sort();
        out.push((cyc, opts));
    }
    Ok(out)
}

/// Number of distinct table specs, the product of per-cycle option counts.
pub fn table_choice_count(kind: TableKind, n: usize) -> Result<u128> {
    Ok(table_options(kind, n)?
        .iter()
        .map(|(_, o)| o.len() as u128)
        .product())
}

/// Every valid table spec, refusing when there are more than `budget`.
pub fn enumerate_table_choices(kind: TableKind, n: usize, budget: u128) -> Result<TableChoices> {
    let options = table_options(kind, n)?;
    let total: u128 = options.iter().map(|(_, o)| o.len() as u128).product();
    if total > budget {
        return Err(Error::Budget {
            what: format!(
                "enumerating {} table choices at n={n}",
                table_family_name(kind)
            ),
            predicted: total,
            budget,
        });
    }
    Ok(TableChoices {
        kind,
        n,
        options: options.into_iter().map(|(_, o)| o).collect(),
        digits: None,
        remaining: total,
    })
}

fn table_family_name(kind: TableKind) -> &'static str {
    match kind {
        TableKind::Pcr => "pcr-table",
        TableKind::PsrEo => "psr-eo-table",
    }
}

/// Mixed-radix walk over per-cycle options.
#[derive(Clone, Debug)]
pub struct TableChoices {
    kind: TableKind,
    n: usize,
    options: Vec<Vec<BitWord>>,
    digits: Option<Vec<usize>>,
    remaining: u128,
}

impl TableChoices {
    pub fn total(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }

    fn spec_for(&self, digits: &[usize]) -> RuleSpec {
        let choice = digits
            .iter()
            .zip(&self.options)
            .map(|(&d, o)| o[d])
            .collect();
        let family = match self.kind {
            TableKind::Pcr => Family::PcrTable { choice },
            TableKind::PsrEo => Family::PsrEoTable { choice },
        };
        RuleSpec::new(self.n, family)
    }

    /// The spec at position `index` of the enumeration, last cycle varying fastest.
    pub fn nth_spec(&self, mut index: u128) -> Option<RuleSpec> {
        if index >= self.total() {
            return None;
        }
        let mut digits = vec![0; self.options.len()];
        for (d, o) in digits.iter_mut().zip(&self.options).rev() {
            let r = o.len() as u128;
            *d = (index % r) as usize;
            index /= r;
        }
        Some(self.spec_for(&digits))
    }
}

impl Iterator for TableChoices {
    type Item = RuleSpec;

    fn next(&mut self) -> Option<RuleSpec> {
        if self.remaining == 0 {
            return None;
        }
        match &mut self.digits {
            None => self.digits = Some(vec![0; self.options.len()]),
            Some(d) => {
                for i in (0..d.len()).rev() {
                    d[i] += 1;
                    if d[i] < self.options[i].len() {
                        break;
                    }
                    d[i] = 0;
                }
            }
        }
        self.remaining -= 1;
        let d = self.digits.clone().expect("set above");
        Some(self.spec_for(&d))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}
