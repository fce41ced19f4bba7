mod common;

use common::*;
use debruijn::anf::{
    ending_one_necklace_feedback, feedback_sequence, h_from_pairs, leading_zero_necklace_feedback,
    necklace_indicator, rule_feedback, to_anf,
};
use debruijn::fsr::{pcr_cycle_count, psr_cycle_count};
use debruijn::generator::{fired_pairs, generate, generate_canonical, verify_de_bruijn, BitStream};
use debruijn::graph::induced_tree;
use debruijn::rules::{Register, TableKind};
use debruijn::{BitWord, Family, FeedbackFunction, RuleSpec};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn k_family(which: u8, k: u64) -> Family {
    match which % 5 {
        0 => Family::PcrLzK { k },
        1 => Family::PcrEoK { k },
        2 => Family::PsrRunK { k },
        3 => Family::PsrEoK { k: k + 1 },
        _ => Family::PsrMixedK { k },
    }
}

#[test]
fn every_family_builds_a_tree_matching_its_order() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 3..=9 {
        for spec in representative_specs(n, &mut rng) {
            let rule = spec.compile().unwrap();
            let tree = induced_tree(&rule).unwrap_or_else(|e| panic!("{spec}: {e}"));
            let cycles = rule.base_function().decompose().unwrap().len();
            assert_eq!(tree.edges.len(), cycles - 1, "{spec}");
            assert_eq!(
                fired_pairs(&rule).unwrap().len() * 2,
                2 * (cycles - 1),
                "{spec}"
            );
            if let Some(extreme) = tree.order.extreme(&tree.vertices) {
                assert_eq!(tree.root, extreme, "{spec}");
            }
            for e in &tree.edges {
                let ord = tree
                    .order
                    .compare(&tree.vertices[e.parent], &tree.vertices[e.child]);
                assert_eq!(ord, Some(std::cmp::Ordering::Less), "{spec}");
                assert_ne!(
                    rule.base_function().cycle_of(&e.label).unwrap().necklace,
                    tree.vertices[e.parent].necklace,
                    "{spec}: label must lie in the child"
                );
            }
        }
    }
}

#[test]
fn feedback_weight_counts_joins() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 3..=9 {
        for spec in representative_specs(n, &mut rng) {
            let rule = spec.compile().unwrap();
            let h = h_from_pairs(n, &fired_pairs(&rule).unwrap()).unwrap();
            let expected = match spec.family.register() {
                Register::Pcr => pcr_cycle_count(n).unwrap() - 1,
                Register::Psr => psr_cycle_count(n).unwrap() - 1,
                Register::Custom => rule.base_function().decompose().unwrap().len() as u64 - 1,
            };
            assert_eq!(h.weight() as u64, expected, "{spec}");
        }
    }
}

#[test]
fn feedback_round_trip_and_identities() {
    let mut rng = StdRng::seed_from_u64(13);
    for n in 3..=8 {
        for spec in representative_specs(n, &mut rng) {
            let rule = spec.compile().unwrap();
            let anf = to_anf(&rule_feedback(&rule).unwrap());
            let f = FeedbackFunction::table(anf.to_table().unwrap()).unwrap();
            assert_eq!(
                feedback_sequence(&f).unwrap().bits,
                generate_canonical(&rule).unwrap().bits,
                "{spec}"
            );
        }
        let lz = RuleSpec::new(n, Family::PcrLzK { k: 0 }).compile().unwrap();
        assert_eq!(
            rule_feedback(&lz).unwrap(),
            leading_zero_necklace_feedback(n).unwrap()
        );
        let eo = RuleSpec::new(n, Family::PcrEoK { k: 0 }).compile().unwrap();
        assert_eq!(
            rule_feedback(&eo).unwrap(),
            ending_one_necklace_feedback(n).unwrap()
        );
    }
    for n in 1..=10 {
        let t = necklace_indicator(n).unwrap();
        for x in 0..1u64 << n {
            assert_eq!(t.get(x) == 1, BitWord::new(x, n).unwrap().is_necklace());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_families_give_de_bruijn_sequences(n in 3usize..=11, which in 0u8..5, k in 0u64..100_000) {
        let rule = RuleSpec::new(n, k_family(which, k)).compile().unwrap();
        let s = generate_canonical(&rule).unwrap();
        prop_assert!(verify_de_bruijn(&s.bits, n));
    }

    #[test]
    fn stream_agrees_with_generate(n in 3usize..=10, which in 0u8..5, k in 0u64..1000, start in any::<u64>()) {
        let rule = RuleSpec::new(n, k_family(which, k)).compile().unwrap();
        let start = BitWord::new(start & ((1 << n) - 1), n).unwrap();
        let full = generate(&rule, &start).unwrap();
        let streamed: Vec<u8> = BitStream::from_state(&rule, &start).take(2 << n).collect();
        prop_assert_eq!(&streamed[..1 << n], &full.bits[..]);
        prop_assert_eq!(&streamed[1 << n..], &full.bits[..]);
        // Any start gives a rotation of the same cycle.
        prop_assert_eq!(full.canonical_form(), Some(bit_string(&generate_canonical(&rule).unwrap().bits)));
    }

    #[test]
    fn random_tables_and_maps(n in 3usize..=9, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let fams = [
            Family::PcrTable { choice: random_choice(TableKind::Pcr, n, &mut rng) },
            Family::PsrEoTable { choice: random_choice(TableKind::PsrEo, n, &mut rng) },
            Family::Jfb { f: random_nonsingular(n, &mut rng) },
        ];
        for f in fams {
            let rule = RuleSpec::new(n, f).compile().unwrap();
            prop_assert!(generate_canonical(&rule).unwrap().is_de_bruijn());
        }
    }

    #[test]
    fn spec_json_round_trip(n in 3usize..=9, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for spec in representative_specs(n, &mut rng) {
            let text = spec.to_json().to_string();
            prop_assert_eq!(RuleSpec::from_json_str(&text).unwrap(), spec);
        }
    }

    #[test]
    fn single_flip_breaks_de_bruijn(k in 0u64..60, pos in 0usize..64) {
        let rule = RuleSpec::new(6, Family::PcrLzK { k }).compile().unwrap();
        let mut bits = generate_canonical(&rule).unwrap().bits;
        bits[pos] ^= 1;
        prop_assert!(!verify_de_bruijn(&bits, 6));
    }
}
