//! Explicit feedback functions of generated sequences and their algebraic normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::fsr::FeedbackFunction;
use crate::generator::{fired_pairs, ConjugatePair, GeneratedSequence, MAX_GENERATE_ORDER};
use crate::rules::Rule;
use crate::table::TruthTable;
use crate::word::BitWord;

/// `h(x_1..x_{n-1})`: the XOR over fired pairs of the indicator of the pair's shared suffix.
pub fn h_from_pairs(n: usize, pairs: &[ConjugatePair]) -> Result<TruthTable> {
    let mut h = TruthTable::zeros(n - 1)?;
    let mask = (1u64 << (n - 1)) - 1;
    for p in pairs {
        if p.zero.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: p.zero.len(),
            });
        }
        h.flip(p.zero.value() & mask);
    }
    Ok(h)
}

/// [`h_from_pairs`] from a flat set of fired states, which must be closed under conjugation.
pub fn h_from_states(n: usize, states: &[BitWord]) -> Result<TruthTable> {
    let mut sorted: Vec<u64> = states.iter().map(|s| s.value()).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut pairs = Vec::new();
    for s in states {
        if s.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: s.len(),
            });
        }
        if sorted.binary_search(&s.conjugate().value()).is_err() {
            return Err(Error::NotConjugateClosed(s.to_string()));
        }
        if s.first() == 0 {
            pairs.push(ConjugatePair {
                zero: *s,
                one: s.conjugate(),
            });
        }
    }
    pairs.sort();
    pairs.dedup();
    h_from_pairs(n, &pairs)
}

/// The lexicographic-comparison product over all nontrivial rotations, evaluated term by term.
fn necklace_product(x: &BitWord) -> u8 {
    let n = x.len();
    let b = |i: usize| x.bit(i % n);
    let mut product = 1u8;
    for i in 1..n {
        // f_i = sum_j [x_l = x_{l+i} for l < j] * !x_j * x_{j+i}  +  [x_l = x_{l+i} for all l]
        let mut fi = 0u8;
        let mut prefix_equal = 1u8;
        for j in 0..n {
            fi ^= prefix_equal & (1 ^ b(j)) & b(j + i);
            prefix_equal &= 1 ^ (b(j) ^ b(j + i));
        }
        fi ^= prefix_equal;
        product &= fi;
    }
    product
}

/// Truth table of "x is a necklace" built from the product formula.
pub fn necklace_indicator(n: usize) -> Result<TruthTable> {
    if n == 0 || n > crate::table::MAX_TABLE_ARITY {
        return Err(Error::Order {
            n,
            min: 1,
            max: crate::table::MAX_TABLE_ARITY,
        });
    }
    TruthTable::from_fn(n, |x| necklace_product(&BitWord::new(x, n).expect("fits")))
}

/// Feedback `f = base + h` whose single cycle is the rule's de Bruijn sequence.
pub fn rule_feedback(rule: &Rule) -> Result<TruthTable> {
    let n = rule.order();
    let h = h_from_pairs(n, &fired_pairs(rule)?)?;
    let mask = (1u64 << (n - 1)) - 1;
    TruthTable::from_fn(n, |x| rule.base_bit_raw(x) ^ h.get(x & mask))
}

/// Clocks the register `f` from `0^n` for `2^n` steps and checks it closes with period `2^n`.
pub fn feedback_sequence(f: &FeedbackFunction) -> Result<GeneratedSequence> {
    let n = f.order();
    if n > MAX_GENERATE_ORDER {
        return Err(Error::Order {
            n,
            min: 1,
            max: MAX_GENERATE_ORDER,
        });
    }
    let total = 1u64 << n;
    let mask = total - 1;
    let mut state = 0u64;
    let mut bits = Vec::with_capacity(total as usize);
    for i in 0..total {
        if i > 0 && state == 0 {
            return Err(Error::NotDeBruijn {
                period: i,
                expected: total,
            });
        }
        bits.push(((state >> (n - 1)) & 1) as u8);
        state = ((state << 1) | u64::from(f.eval_raw(state))) & mask;
    }
    if state != 0 {
        return Err(Error::NotDeBruijn {
            period: total + 1,
            expected: total,
        });
    }
    GeneratedSequence::from_bits(n, bits)
}

/// `x_0 + N(0, x_1, ..., x_{n-1})` with `N` the necklace indicator.
pub fn leading_zero_necklace_feedback(n: usize) -> Result<TruthTable> {
    let ind = necklace_indicator(n)?;
    let mask = (1u64 << (n - 1)) - 1;
    TruthTable::from_fn(n, |x| ((x >> (n - 1)) as u8 & 1) ^ ind.get(x & mask))
}

/// `x_0 + N(x_1, ..., x_{n-1}, 1)`.
pub fn ending_one_necklace_feedback(n: usize) -> Result<TruthTable> {
    let ind = necklace_indicator(n)?;
    let mask = (1u64 << (n - 1)) - 1;
    TruthTable::from_fn(n, |x| {
        ((x >> (n - 1)) as u8 & 1) ^ ind.get(((x & mask) << 1) | 1)
    })
}

/// XOR of monomials; each monomial is a bitmask over variables `x_0..x_{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnfPolynomial {
    arity: usize,
    /// Bit `m - 1 - i` of a mask stands for `x_i`, matching the table index convention.
    monomials: Vec<u64>,
}

impl AnfPolynomial {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Monomials as sorted variable lists; the constant term is the empty list.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        self.monomials.iter().map(|&m| self.vars(m)).collect()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Largest monomial size.
    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn vars(&self, mask: u64) -> Vec<usize> {
        (0..self.arity)
            .filter(|&i| mask >> (self.arity - 1 - i) & 1 == 1)
            .collect()
    }

    pub fn evaluate(&self, x: u64) -> u8 {
        self.monomials
            .iter()
            .fold(0u8, |acc, &m| acc ^ u8::from(x & m == m))
    }

    pub fn to_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.arity, |x| self.evaluate(x))
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<Vec<usize>> = self.monomials();
        // Variable lists in lexicographic order, constant last.
        terms.sort_by(|a, b| match (a.is_empty(), b.is_empty()) {
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            _ => a.cmp(b),
        });
        let parts: Vec<String> = terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "1".to_string()
                } else {
                    t.iter().map(|i| format!("x{i}")).collect()
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Möbius transform over the subset lattice.
pub fn to_anf(t: &TruthTable) -> AnfPolynomial {
    let m = t.arity();
    let mut coef: Vec<u8> = (0..t.len() as u64).map(|i| t.get(i)).collect();
    for bit in 0..m {
        let step = 1usize << bit;
        for i in 0..coef.len() {
            if i & step != 0 {
                coef[i] ^= coef[i ^ step];
            }
        }
    }
    let monomials = coef
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 1)
        .map(|(i, _)| i as u64)
        .collect();
    AnfPolynomial {
        arity: m,
        monomials,
    }
}
