//! Randomized invariants over the public API.

use eulerian_lab::bijections::{desc_to_exc, exc_to_desc};
use eulerian_lab::foata::{foata_inverse, foata_transform};
use eulerian_lab::perm::{Permutation, StatKind};
use proptest::prelude::*;

fn perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|word| Permutation::new(word).expect("a shuffled identity word"))
    })
}

proptest! {
    #[test]
    fn foata_roundtrips_both_ways(p in perm(9)) {
        prop_assert_eq!(foata_inverse(&foata_transform(&p)), p.clone());
        prop_assert_eq!(foata_transform(&foata_inverse(&p)), p);
    }

    #[test]
    fn foata_transfers_descents_to_anti_excedances(p in perm(9), r in 1..=4u32) {
        let phi = foata_transform(&p);
        prop_assert_eq!(
            p.count_stat(StatKind::descent(r).unwrap()),
            phi.count_stat(StatKind::anti_excedance(r).unwrap())
        );
    }

    #[test]
    fn statistic_bijections_invert_each_other(p in perm(9)) {
        prop_assert_eq!(desc_to_exc(&exc_to_desc(&p)), p.clone());
        prop_assert_eq!(exc_to_desc(&desc_to_exc(&p)), p);
    }

    #[test]
    fn inversion_swaps_excedances_and_anti_excedances(p in perm(9), r in 1..=3u32) {
        prop_assert_eq!(
            p.count_stat(StatKind::excedance(r).unwrap()),
            p.inverse().count_stat(StatKind::anti_excedance(r).unwrap())
        );
    }

    #[test]
    fn unit_distance_steps_partition_the_word(p in perm(9)) {
        let des = p.count_stat(StatKind::descent(1).unwrap());
        let asc = p.count_stat(StatKind::ascent(1).unwrap());
        prop_assert_eq!(des + asc, p.len() - 1);
    }

    #[test]
    fn double_inversion_is_the_identity(p in perm(9)) {
        prop_assert_eq!(p.inverse().inverse(), p);
    }
}
