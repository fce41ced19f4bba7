//! Reference sequences at n = 6 and helpers shared by the integration tests.
#![allow(dead_code)]

use debruijn::census::{expected_count, lcm_even, lcm_range, CensusFamily};
use debruijn::rules::{table_options, TableKind};
use debruijn::{BitWord, Family, FeedbackFunction, RuleSpec, TruthTable};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Weight-band rules: (leading-zero form?, band list, sequence).
pub const BANDS: [(bool, &[usize], &str); 10] = [
    (
        true,
        &[1, 7],
        "0000001111110110100100110111010101100101000101111001110001100001",
    ),
    (
        true,
        &[1, 2, 7],
        "0000001000011000101000111001001011001101001111010101110110111111",
    ),
    (
        true,
        &[1, 2, 3, 7],
        "0000001000101001001101010111000111011000011001011011111100111101",
    ),
    (
        true,
        &[1, 2, 3, 4, 7],
        "0000001001011011111100111101001100001101010001010111000111011001",
    ),
    (
        true,
        &[1, 2, 3, 4, 5, 7],
        "0000001010111000111011001001011011111100111101001100001101010001",
    ),
    (
        false,
        &[1, 7],
        "0000001111110111100111000110110100110000101110101100101010001001",
    ),
    (
        false,
        &[1, 3, 7],
        "0000001100111100101100011100001010100110111111011010111010001001",
    ),
    (
        false,
        &[1, 3, 4, 7],
        "0000001100101101100011101111110101110011110000101010011010001001",
    ),
    (
        false,
        &[1, 2, 3, 5, 7],
        "0000001001000101010011011010111010000110011110111111001011000111",
    ),
    (
        false,
        &[1, 2, 3, 4, 5, 7],
        "0000001001000101010011010000110010110110001110101110011110111111",
    ),
];

pub const LZ_K: [(u64, &str); 10] = [
    (
        0,
        "0000001111110110100100110111010101100101000101111001110001100001",
    ),
    (
        1,
        "0000001000011000101000111001001011001101001111010101110110111111",
    ),
    (
        2,
        "0000001000101001001101010111100111111011000011001011011100011101",
    ),
    (
        3,
        "0000001001011101101001100001101111110011100011110101000101011001",
    ),
    (
        4,
        "0000001011001101001001111110110111010101111000110000111001010001",
    ),
    (
        55,
        "0000001101001111010100010101110110111111000111001001011001100001",
    ),
    (
        56,
        "0000001000011101001001101010111100111111011001010001011011100011",
    ),
    (
        57,
        "0000001000111101010110010010111011010011011111100111000011000101",
    ),
    (
        58,
        "0000001001111110110111010101111000111001011000011001101000101001",
    ),
    (
        59,
        "0000001010111000111011001001011011111100111101001100001101010001",
    ),
];

pub const EO_K: [(u64, &str); 10] = [
    (
        0,
        "0000001111110111100111000110110100110000101110101100101010001001",
    ),
    (
        1,
        "0000001001111001101001011011001000111000101011111101110101000011",
    ),
    (
        2,
        "0000001100111100101100011100001010100110111111011010111010001001",
    ),
    (
        3,
        "0000001001000101101100101010000111011111101011100111100011010011",
    ),
    (
        4,
        "0000001100001010100011110111111001110001001101101001011101011001",
    ),
    (
        55,
        "0000001001101001011011001000111010111001111110111100010101000011",
    ),
    (
        56,
        "0000001100101111110111010110001111001110000101010011011010001001",
    ),
    (
        57,
        "0000001001000101101111110110010101110101000011100011010011110011",
    ),
    (
        58,
        "0000001100001010100011100010011011010111011111101001011001111001",
    ),
    (
        59,
        "0000001001000101010011010000110010110110001110101110011110111111",
    ),
];

pub const GRANDDADDY: &str = "0000001000011000101000111001001011001101001111010101110110111111";
pub const GRANDMAMA: &str = "0000001001000101010011010000110010110110001110101110011110111111";
pub const PCR4: &str = "0000001111110110100100110111010101100101000101111001110001100001";
pub const PCR3_J1: &str = "0000001111110111100111000110110100110000101110101100101010001001";
pub const NEW1: &str = "0000001010111000111011001001011011111100111101001100001101010001";
pub const NEW2: &str = "0000001001111001101001011011001000111000101011111101110101000011";

pub const RUN_K: [&str; 3] = [
    "0000001001000101110010101101010000111010011111101111000110110011",
    "0000001001000101110010100001110100111111011110001101010110110011",
    "0000001001000101101010111001010000111010011111101111000110110011",
];

/// Necklace-order rule, k = 1..=11.
pub const PSR_EO_K: [(u64, &str); 11] = [
    (
        1,
        "0000001111110111100011011001110100110000101110010101101010001001",
    ),
    (
        2,
        "0000001100001010001111000100111010101101001011111101110011011001",
    ),
    (
        3,
        "0000001100110111111011010101100011110010111000010100111010001001",
    ),
    (
        4,
        "0000001111000110110011101111110100110000101110010101101010001001",
    ),
    (
        5,
        "0000001111011111100011011001110100110000101110010101101010001001",
    ),
    (
        6,
        "0000001100001010001111110111100010011101010110100101110011011001",
    ),
    (
        7,
        "0000001100110110101011000111111011110010111000010100111010001001",
    ),
    (
        8,
        "0000001111000110110011101001100001011111101110010101101010001001",
    ),
    (
        9,
        "0000001111000110111111011001110100110000101110010101101010001001",
    ),
    (
        10,
        "0000001100001010001111000100111011111101010110100101110011011001",
    ),
    (
        11,
        "0000001100110110101011000111101111110010111000010100111010001001",
    ),
];

pub const MIXED_K: [&str; 12] = [
    "0000001111110101011010010001001110110011011100101000010111100011",
    "0000001100010010001111010101101000010100111011001101110010111111",
    "0000001100110111001000100101111000111111010100001010110100111011",
    "0000001101110010100001011111100011110101011010010001001110110011",
    "0000001111110101011010000101001110110011011100101111000100100011",
    "0000001100011110101000010101101001110110011011100100010010111111",
    "0000001100110111001010000101111000111111010101101001000100111011",
    "0000001101110010111111000100100011110101011010000101001110110011",
    "0000001111110101000010101101001110110011011100100010010111100011",
    "0000001100011110101011010010001001110110011011100101000010111111",
    "0000001100110111001011110001001000111111010101101000010100111011",
    "0000001101110010001001011111100011110101000010101101001110110011",
];

/// Tree for the rotate-to-last-zero rule: (child necklace, parent necklace).
pub const FIG1_EDGES: [(&str, &str); 13] = [
    ("000000", "000001"),
    ("000001", "000101"),
    ("000101", "010101"),
    ("010101", "010111"),
    ("010111", "011111"),
    ("011111", "111111"),
    ("000011", "001101"),
    ("001001", "001011"),
    ("001101", "010111"),
    ("000111", "010111"),
    ("001011", "011011"),
    ("001111", "011111"),
    ("011011", "011111"),
];

/// Run-order tree, k = 0: (child, parent, label).
pub const FIG2_EDGES: [(&str, &str, &str); 9] = [
    ("0111111", "0001111", "101111"),
    ("0011101", "0001111", "100111"),
    ("0101011", "0000101", "101010"),
    ("0010111", "0000101", "100101"),
    ("0001001", "0000101", "100010"),
    ("0001111", "0000011", "100011"),
    ("0000101", "0000011", "100001"),
    ("0011011", "0000011", "100110"),
    ("0000011", "0000000", "100000"),
];

pub fn bits_of(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}

pub fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn random_bands(n: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut ks = vec![1];
    ks.extend((2..n).filter(|_| rng.gen_bool(0.5)));
    ks.push(n + 1);
    ks
}

fn random_g(n: usize, rng: &mut StdRng) -> Vec<usize> {
    (1..=n).map(|w| rng.gen_range(0..w)).collect()
}

pub fn random_choice(kind: TableKind, n: usize, rng: &mut StdRng) -> Vec<BitWord> {
    table_options(kind, n)
        .unwrap()
        .into_iter()
        .map(|(_, opts)| *opts.choose(rng).unwrap())
        .collect()
}

/// A random nonsingular feedback `x_0 + h(x_1..x_{n-1})`.
pub fn random_nonsingular(n: usize, rng: &mut StdRng) -> FeedbackFunction {
    let h: Vec<u8> = (0..1u64 << (n - 1)).map(|_| rng.gen_range(0..2)).collect();
    let t = TruthTable::from_fn(n, |x| {
        ((x >> (n - 1)) as u8 & 1) ^ h[(x & ((1 << (n - 1)) - 1)) as usize]
    })
    .unwrap();
    FeedbackFunction::table(t).unwrap()
}

/// Every family at order `n` with boundary and random parameters.
pub fn representative_specs(n: usize, rng: &mut StdRng) -> Vec<RuleSpec> {
    let nn = n as u64;
    let pcr_top = (lcm_range(1, nn - 1) - 1) as u64;
    let psr_eo_top = (lcm_even(nn) - 1) as u64;
    let mixed_top = (lcm_range(1, nn - 2) - 1) as u64;
    let run_top = (expected_count(CensusFamily::PsrRunK, n).unwrap().0 - 1) as u64;
    let mut fams = Vec::new();
    for k in [0, 1, 2, pcr_top] {
        fams.push(Family::PcrLzK { k });
        fams.push(Family::PcrEoK { k });
    }
    for k in [0, 1, 2, run_top] {
        fams.push(Family::PsrRunK { k });
    }
    for k in [0, 1, 2, mixed_top] {
        fams.push(Family::PsrMixedK { k });
    }
    for k in [1, 2, psr_eo_top.max(1)] {
        fams.push(Family::PsrEoK { k });
    }
    fams.extend([
        Family::PcrLzPrev,
        Family::PcrEoNext,
        Family::PsrIndexS,
        Family::PsrIndexT,
    ]);
    for _ in 0..3 {
        fams.push(Family::PcrWeightBandsLz {
            ks: random_bands(n, rng),
        });
        fams.push(Family::PcrWeightBandsEo {
            ks: random_bands(n, rng),
        });
        fams.push(Family::PcrGLz {
            g: random_g(n, rng),
        });
        fams.push(Family::PcrGEo {
            g: random_g(n, rng),
        });
        fams.push(Family::PcrTable {
            choice: random_choice(TableKind::Pcr, n, rng),
        });
        fams.push(Family::PsrEoTable {
            choice: random_choice(TableKind::PsrEo, n, rng),
        });
    }
    fams.push(Family::Jfb {
        f: FeedbackFunction::pcr(n).unwrap(),
    });
    fams.push(Family::Jfb {
        f: FeedbackFunction::psr(n).unwrap(),
    });
    fams.push(Family::Jfb {
        f: FeedbackFunction::csr(n).unwrap(),
    });
    fams.push(Family::Jfb {
        f: random_nonsingular(n, rng),
    });
    fams.into_iter().map(|f| RuleSpec::new(n, f)).collect()
}
