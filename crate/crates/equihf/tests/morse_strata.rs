mod oracles;

use std::collections::BTreeSet;

use equihf::morseflow::{codim1_faces, corner_count, corner_label, enumerate_strata, relation_string, Sign, Space};

#[test]
fn enumeration_matches_brute_force() {
    for i in 0..=6 {
        for sigma in [Sign::Plus, Sign::Minus] {
            for (space, parametrized) in [(Space::Q, false), (Space::P, true)] {
                if space == Space::Q && i == 0 {
                    continue;
                }
                let ours: BTreeSet<String> = enumerate_strata(space, i, sigma, None).unwrap().iter().map(ToString::to_string).collect();
                let sign = if sigma == Sign::Plus { 1 } else { -1 };
                assert_eq!(ours, oracles::strata_bruteforce(parametrized, i, sign), "{space:?} i = {i} sigma = {sigma}");
            }
        }
    }
}

#[test]
fn corners_carry_distinct_labels() {
    for i in 1..=6 {
        let corners: Vec<_> = enumerate_strata(Space::P, i, Sign::Minus, None).unwrap().into_iter().filter(|s| s.dim() == 0).collect();
        assert_eq!(corners.len() as u64, corner_count(i));
        let labels: BTreeSet<String> = corners.iter().map(|s| corner_label(s).expect("corners are labelled")).collect();
        assert_eq!(labels.len(), corners.len());
    }
}

#[test]
fn codimension_filter_partitions_the_strata() {
    for i in 1..=5 {
        let all = enumerate_strata(Space::P, i, Sign::Plus, None).unwrap();
        let split: usize = (0..=i).map(|c| enumerate_strata(Space::P, i, Sign::Plus, Some(c)).unwrap().len()).sum();
        assert_eq!(all.len(), split);
    }
}

#[test]
fn relations_match_the_hand_written_ones() {
    for (i, sigma) in [(1, Sign::Plus), (1, Sign::Minus), (2, Sign::Plus)] {
        let expected = oracles::reference_relation(i, sigma == Sign::Plus).unwrap();
        assert_eq!(relation_string(i, sigma), expected);
    }
}

#[test]
fn faces_are_codimension_one_strata() {
    for i in 1..=6 {
        for sigma in [Sign::Plus, Sign::Minus] {
            let codim1: BTreeSet<String> = enumerate_strata(Space::P, i, sigma, Some(1)).unwrap().iter().map(ToString::to_string).collect();
            let faces: BTreeSet<String> = codim1_faces(i, sigma).iter().map(|f| f.stratum.to_string()).collect();
            assert_eq!(faces, codim1);
        }
    }
}
