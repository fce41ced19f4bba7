//! Exhaustive family-wise enumeration and the counting formulas it is checked against.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsr::FeedbackFunction;
use crate::generator::generate_canonical;
use crate::rules::{enumerate_table_choices, table_choice_count, Family, RuleSpec, TableKind};
use crate::word::{ShiftClass, ZeroRun};

/// Default cap on the number of sequences a census may generate.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Least common multiple of `a..=b`.
pub fn lcm_range(a: u64, b: u64) -> u128 {
    (a.max(1)..=b).fold(1u128, |acc, x| acc.lcm(&u128::from(x)))
}

/// `lcm(2, 4, ..., 2 * floor(n / 2))`.
pub fn lcm_even(n: u64) -> u128 {
    (1..=n / 2).fold(1u128, |acc, x| acc.lcm(&u128::from(2 * x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub residue: i128,
    pub modulus: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CrtOutcome {
    /// Unique solution modulo the lcm of the moduli.
    Solved { residue: u128, modulus: u128 },
    /// Two congruences whose residues differ modulo the gcd of their moduli.
    Unsolvable {
        first: Congruence,
        second: Congruence,
    },
}

/// Solves a system of congruences whose moduli need not be coprime.
pub fn gcrt_solve(system: &[(i128, u64)]) -> Result<CrtOutcome> {
    if let Some(&(_, 0)) = system.iter().find(|c| c.1 == 0) {
        return Err(Error::Precondition("moduli must be at least 1".into()));
    }
    let cong: Vec<Congruence> = system
        .iter()
        .map(|&(residue, modulus)| Congruence { residue, modulus })
        .collect();
    for i in 0..cong.len() {
        for j in i + 1..cong.len() {
            let g = i128::from(cong[i].modulus.gcd(&cong[j].modulus));
            if (cong[i].residue - cong[j].residue).rem_euclid(g) != 0 {
                return Ok(CrtOutcome::Unsolvable {
                    first: cong[i],
                    second: cong[j],
                });
            }
        }
    }
    let (mut x, mut m) = (0i128, 1i128);
    for c in &cong {
        let (a2, m2) = (c.residue, i128::from(c.modulus));
        let e = m.extended_gcd(&m2);
        let g = e.gcd;
        let l = m / g * m2;
        // x + m * t = a2 (mod m2)  =>  t = (a2 - x) / g * inv(m / g) (mod m2 / g)
        let t = ((a2 - x) / g).rem_euclid(m2 / g) * e.x.rem_euclid(m2 / g) % (m2 / g);
        x = (x + m * t).rem_euclid(l);
        m = l;
    }
    Ok(CrtOutcome::Solved {
        residue: x as u128,
        modulus: m as u128,
    })
}

/// Number of residue vectors `(r_1, ..., r_t)`, `0 <= r_i < m_i`, whose system is solvable.
pub fn count_solvable_systems(moduli: &[u64]) -> Result<u128> {
    let total: u128 = moduli.iter().map(|&m| u128::from(m)).product();
    if total > 1 << 20 {
        return Err(Error::Budget {
            what: "counting residue vectors".into(),
            predicted: total,
            budget: 1 << 20,
        });
    }
    let mut count = 0;
    for mut idx in 0..total {
        let mut system = Vec::with_capacity(moduli.len());
        for &m in moduli {
            system.push(((idx % u128::from(m)) as i128, m));
            idx /= u128::from(m);
        }
        if matches!(gcrt_solve(&system)?, CrtOutcome::Solved { .. }) {
            count += 1;
        }
    }
    Ok(count)
}

/// Families with a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusFamily {
    PcrLzK,
    PcrEoK,
    PcrWeightBandsLz,
    PcrWeightBandsEo,
    PcrGLz,
    PcrGEo,
    /// Union of both g families.
    PcrGBoth,
    PcrTable,
    PsrRunK,
    PsrEoK,
    PsrEoTable,
    PsrMixedK,
}

impl CensusFamily {
    pub const ALL: [CensusFamily; 12] = [
        CensusFamily::PcrLzK,
        CensusFamily::PcrEoK,
        CensusFamily::PcrWeightBandsLz,
        CensusFamily::PcrWeightBandsEo,
        CensusFamily::PcrGLz,
        CensusFamily::PcrGEo,
        CensusFamily::PcrGBoth,
        CensusFamily::PcrTable,
        CensusFamily::PsrRunK,
        CensusFamily::PsrEoK,
        CensusFamily::PsrEoTable,
        CensusFamily::PsrMixedK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CensusFamily::PcrLzK => "pcr-lz-k",
            CensusFamily::PcrEoK => "pcr-eo-k",
            CensusFamily::PcrWeightBandsLz => "pcr-weight-bands-lz",
            CensusFamily::PcrWeightBandsEo => "pcr-weight-bands-eo",
            CensusFamily::PcrGLz => "pcr-g-lz",
            CensusFamily::PcrGEo => "pcr-g-eo",
            CensusFamily::PcrGBoth => "pcr-g-both",
            CensusFamily::PcrTable => "pcr-table",
            CensusFamily::PsrRunK => "psr-run-k",
            CensusFamily::PsrEoK => "psr-eo-k",
            CensusFamily::PsrEoTable => "psr-eo-table",
            CensusFamily::PsrMixedK => "psr-mixed-k",
        }
    }
}

impl fmt::Display for CensusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CensusFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CensusFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = CensusFamily::ALL.iter().map(|f| f.name()).collect();
                Error::InvalidSpec(vec![format!(
                    "no census for family {s:?}; expected one of {}",
                    names.join(", ")
                )])
            })
    }
}

fn factorial(n: u64) -> u128 {
    (1..=u128::from(n)).product()
}

/// Sizes of the maximal-zero-run rotation orbits, one per nonzero PSR cycle.
fn run_orbit_sizes(n: usize) -> Result<Vec<u64>> {
    let cycles = FeedbackFunction::psr(n)?.decompose()?;
    Ok(cycles
        .iter()
        .filter(|c| c.necklace.max_zero_run() != ZeroRun::Infinite)
        .map(|c| {
            let nk = c.necklace;
            let mut seen = 1u64;
            let mut x = ShiftClass::MaxZeroRun.power_unchecked(&nk, 1);
            while x != nk {
                seen += 1;
                x = ShiftClass::MaxZeroRun.power_unchecked(&x, 1);
            }
            seen
        })
        .collect())
}

fn run_period(n: usize) -> Result<u128> {
    Ok(run_orbit_sizes(n)?
        .into_iter()
        .fold(1u128, |acc, s| acc.lcm(&u128::from(s))))
}

/// Distinct-sequence count predicted for the family, with the formula's name.
pub fn expected_count(family: CensusFamily, n: usize) -> Result<(u128, String)> {
    let nn = n as u64;
    Ok(match family {
        CensusFamily::PcrLzK | CensusFamily::PcrEoK => {
            (lcm_range(1, nn - 1), format!("lcm(1..{})", n - 1))
        }
        CensusFamily::PcrWeightBandsLz | CensusFamily::PcrWeightBandsEo => {
            (1u128 << (n - 2), format!("2^{}", n - 2))
        }
        CensusFamily::PcrGLz | CensusFamily::PcrGEo => (factorial(nn - 1), format!("{}!", n - 1)),
        CensusFamily::PcrGBoth => (2 * factorial(nn - 1), format!("2*{}!", n - 1)),
        CensusFamily::PcrTable => (
            table_choice_count(TableKind::Pcr, n)?,
            "product of leading-zero states per cycle".into(),
        ),
        CensusFamily::PsrEoTable => (
            table_choice_count(TableKind::PsrEo, n)?,
            "product of admissible ending-one states per cycle".into(),
        ),
        CensusFamily::PsrEoK => {
            let evens: Vec<String> = (1..=nn / 2).map(|i| (2 * i).to_string()).collect();
            (lcm_even(nn) - 1, format!("lcm({})-1", evens.join(",")))
        }
        CensusFamily::PsrMixedK => (lcm_range(1, nn - 2), format!("lcm(1..{})", n - 2)),
        CensusFamily::PsrRunK => (run_period(n)?, "lcm of maximal-run orbit sizes".into()),
    })
}

/// Number of specs the census would generate.
pub fn predicted_size(family: CensusFamily, n: usize) -> Result<u128> {
    let nn = n as u64;
    Ok(match family {
        CensusFamily::PcrLzK | CensusFamily::PcrEoK => lcm_range(1, nn - 1),
        CensusFamily::PcrWeightBandsLz | CensusFamily::PcrWeightBandsEo => 1u128 << (n - 2),
        CensusFamily::PcrGLz | CensusFamily::PcrGEo => factorial(nn),
        CensusFamily::PcrGBoth => 2 * factorial(nn),
        CensusFamily::PcrTable => table_choice_count(TableKind::Pcr, n)?,
        CensusFamily::PsrEoTable => table_choice_count(TableKind::PsrEo, n)?,
        CensusFamily::PsrEoK => lcm_even(nn),
        CensusFamily::PsrMixedK => lcm_range(1, nn - 2),
        CensusFamily::PsrRunK => run_period(n)?,
    })
}

/// Human-readable parameter domain.
pub fn domain_description(family: CensusFamily, n: usize) -> Result<String> {
    let size = predicted_size(family, n)?;
    Ok(match family {
        CensusFamily::PcrLzK
        | CensusFamily::PcrEoK
        | CensusFamily::PsrMixedK
        | CensusFamily::PsrRunK => {
            format!("k in 0..{size}")
        }
        CensusFamily::PsrEoK => format!("k in 1..={size}"),
        CensusFamily::PcrWeightBandsLz | CensusFamily::PcrWeightBandsEo => {
            format!("all {size} band lists")
        }
        CensusFamily::PcrGLz | CensusFamily::PcrGEo | CensusFamily::PcrGBoth => {
            format!("all {size} maps g")
        }
        CensusFamily::PcrTable | CensusFamily::PsrEoTable => format!("all {size} table choices"),
    })
}

fn all_g_maps(n: usize) -> Vec<Vec<usize>> {
    let mut maps = vec![Vec::new()];
    for w in 1..=n {
        maps = maps
            .into_iter()
            .flat_map(|m| {
                (0..w).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    maps
}

/// Every valid band list `[1, ..., n + 1]`.
pub fn all_band_lists(n: usize) -> Vec<Vec<usize>> {
    let middle: Vec<usize> = (2..n).collect();
    (0..1u64 << middle.len())
        .map(|mask| {
            let mut ks = vec![1];
            ks.extend(
                middle
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &k)| k),
            );
            ks.push(n + 1);
            ks
        })
        .collect()
}

fn specs_for(family: CensusFamily, n: usize, budget: u128) -> Result<Vec<RuleSpec>> {
    let size = predicted_size(family, n)?;
    if size > budget {
        return Err(Error::Budget {
            what: format!("{family} census at n={n}"),
            predicted: size,
            budget,
        });
    }
    let size = size as u64;
    let specs = match family {
        CensusFamily::PcrLzK => (0..size)
            .map(|k| RuleSpec::new(n, Family::PcrLzK { k }))
            .collect(),
        CensusFamily::PcrEoK => (0..size)
            .map(|k| RuleSpec::new(n, Family::PcrEoK { k }))
            .collect(),
        CensusFamily::PsrRunK => (0..size)
            .map(|k| RuleSpec::new(n, Family::PsrRunK { k }))
            .collect(),
        CensusFamily::PsrMixedK => (0..size)
            .map(|k| RuleSpec::new(n, Family::PsrMixedK { k }))
            .collect(),
        CensusFamily::PsrEoK => (1..=size)
            .map(|k| RuleSpec::new(n, Family::PsrEoK { k }))
            .collect(),
        CensusFamily::PcrWeightBandsLz => all_band_lists(n)
            .into_iter()
            .map(|ks| RuleSpec::new(n, Family::PcrWeightBandsLz { ks }))
            .collect(),
        CensusFamily::PcrWeightBandsEo => all_band_lists(n)
            .into_iter()
            .map(|ks| RuleSpec::new(n, Family::PcrWeightBandsEo { ks }))
            .collect(),
        CensusFamily::PcrGLz => all_g_maps(n)
            .into_iter()
            .map(|g| RuleSpec::new(n, Family::PcrGLz { g }))
            .collect(),
        CensusFamily::PcrGEo => all_g_maps(n)
            .into_iter()
            .map(|g| RuleSpec::new(n, Family::PcrGEo { g }))
            .collect(),
        CensusFamily::PcrGBoth => all_g_maps(n)
            .into_iter()
            .flat_map(|g| {
                [
                    RuleSpec::new(n, Family::PcrGLz { g: g.clone() }),
                    RuleSpec::new(n, Family::PcrGEo { g }),
                ]
            })
            .collect(),
        CensusFamily::PcrTable => enumerate_table_choices(TableKind::Pcr, n, budget)?.collect(),
        CensusFamily::PsrEoTable => enumerate_table_choices(TableKind::PsrEo, n, budget)?.collect(),
    };
    Ok(specs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub family: CensusFamily,
    pub n: usize,
    pub domain: String,
    pub enumerated: u128,
    pub distinct: u128,
    pub expected: u128,
    pub formula: String,
    pub matches: bool,
    /// False if any spec failed to produce a de Bruijn sequence.
    pub all_de_bruijn: bool,
    pub wall_seconds: f64,
}

impl CensusReport {
    pub fn header() -> String {
        format!(
            "{:<22} {:>3} {:>12} {:>10} {:>10}  {:<6} {:>9}  {}",
            "family", "n", "enumerated", "distinct", "expected", "match", "seconds", "formula"
        )
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<22} {:>3} {:>12} {:>10} {:>10}  {:<6} {:>9.3}  {}",
            self.family.name(),
            self.n,
            self.enumerated,
            self.distinct,
            self.expected,
            self.matches,
            self.wall_seconds,
            self.formula
        )
    }
}

/// Generates every parameterization in parallel and counts distinct sequences.
pub fn run_census(family: CensusFamily, n: usize, budget: u128) -> Result<CensusReport> {
    let t0 = Instant::now();
    let specs = specs_for(family, n, budget)?;
    let (expected, formula) = expected_count(family, n)?;
    let results: Vec<Option<Vec<u8>>> = specs
        .par_iter()
        .map(|spec| {
            let rule = spec.compile().ok()?;
            let seq = generate_canonical(&rule).ok()?;
            seq.is_de_bruijn().then_some(seq.bits)
        })
        .collect();
    let all_de_bruijn = results.iter().all(Option::is_some);
    let distinct: HashSet<&Vec<u8>> = results.iter().flatten().collect();
    let distinct = distinct.len() as u128;
    Ok(CensusReport {
        family,
        n,
        domain: domain_description(family, n)?,
        enumerated: specs.len() as u128,
        distinct,
        expected,
        formula,
        matches: all_de_bruijn && distinct == expected,
        all_de_bruijn,
        wall_seconds: t0.elapsed().as_secs_f64(),
    })
}
