use debruijn::census::{predicted_size, run_census, CensusFamily};

#[test]
fn formulas_hold_from_four_to_eight() {
    for n in 4..=8 {
        for family in CensusFamily::ALL {
            if predicted_size(family, n).unwrap() > 100_000 {
                continue;
            }
            let r = run_census(family, n, 100_000).unwrap();
            assert!(r.all_de_bruijn, "{family} n={n}");
            assert!(r.matches, "{family} n={n}: {} distinct, expected {}", r.distinct, r.expected);
        }
    }
}

#[test]
fn necklace_order_count_to_ten() {
    for n in 3..=10 {
        let r = run_census(CensusFamily::PsrEoK, n, 1_000).unwrap();
        assert!(r.matches, "n={n}: {} distinct, expected {}", r.distinct, r.expected);
    }
}

#[test]
fn both_g_families_collapse_at_three() {
    // Order 3 has only two de Bruijn sequences.
    let r = run_census(CensusFamily::PcrGBoth, 3, 1_000).unwrap();
    assert_eq!((r.distinct, r.expected), (2, 4));
    assert!(!r.matches);
}
