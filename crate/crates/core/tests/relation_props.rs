use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projflip_core::checks::{disjoint_homothety_pair, disjoint_site_pairs, random_seed, OCTOGON};
use projflip_core::coherence::Configuration;
use projflip_core::flip::{apply_flip, find_flip_sites, hexagon, Direction};
use projflip_core::io::{ConfigurationFile, OctogonFile};
use projflip_core::relations::{
    apply_word, check_involution, check_octogon, configurations_equal, words_equal_action, FlipEvent, FlipWord,
    RelationError, SiteAddress,
};

fn dot_event(id: projflip_core::coherence::DotId, direction: Direction) -> FlipEvent {
    FlipEvent { site: SiteAddress::Dot(id), direction }
}

fn octogon() -> (Configuration, FlipWord) {
    let f = OctogonFile::parse(OCTOGON).unwrap();
    (f.seed.to_configuration().unwrap(), f.word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flips_are_involutions(seed in any::<u64>(), n in prop::sample::select(vec![4usize, 6])) {
        let (_, c) = random_seed(n, &mut ChaCha8Rng::seed_from_u64(seed));
        for (dot, _) in find_flip_sites(&c) {
            prop_assert!(check_involution(&c, dot).unwrap());
        }
    }

    #[test]
    fn flip_swaps_only_the_center(seed in any::<u64>()) {
        let (_, c) = random_seed(6, &mut ChaCha8Rng::seed_from_u64(seed));
        for (dot, dir) in find_flip_sites(&c) {
            let hex = hexagon(&c, dot).unwrap();
            let out = apply_flip(&c, dot, dir).unwrap();
            let fresh = c.next_id();
            prop_assert!(!out.dots.contains_key(&dot));
            prop_assert_eq!(out.dots[&fresh].color, c.dots[&dot].color.opposite());
            for id in hex.boundary() {
                prop_assert_eq!(&out.dots[&id].element, &c.dots[&id].element);
                prop_assert_eq!(out.dots[&id].color, c.dots[&id].color);
            }
            // the new center is adjacent to the former outer corners
            let hex2 = hexagon(&out, fresh).unwrap();
            let outer: BTreeSet<_> = hex.outer.iter().copied().collect();
            let neigh: BTreeSet<_> = hex2.neighbours.iter().copied().collect();
            prop_assert_eq!(outer, neigh);
            prop_assert!(out.validate().unwrap().is_coherent());
        }
    }

    #[test]
    fn involution_words_act_trivially(seed in any::<u64>()) {
        let (_, c) = random_seed(4, &mut ChaCha8Rng::seed_from_u64(seed));
        let Some(&(dot, dir)) = find_flip_sites(&c).first() else { return Ok(()) };
        let there_and_back = FlipWord { events: vec![dot_event(dot, dir), dot_event(c.next_id(), dir.inverse())] };
        prop_assert!(words_equal_action(&[c], &there_and_back, &FlipWord::default()).is_ok());
    }

    #[test]
    fn application_is_deterministic(seed in any::<u64>()) {
        let (_, c) = random_seed(6, &mut ChaCha8Rng::seed_from_u64(seed));
        let word = FlipWord { events: find_flip_sites(&c).into_iter().take(1).map(|(d, dir)| dot_event(d, dir)).collect() };
        let a = serde_json::to_string(&ConfigurationFile::from_configuration(&apply_word(&c, &word).unwrap())).unwrap();
        let b = serde_json::to_string(&ConfigurationFile::from_configuration(&apply_word(&c, &word).unwrap())).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn disjoint_flips_commute_as_words() {
    let c = disjoint_homothety_pair();
    let (a, b) = disjoint_site_pairs(&c)[0];
    let dir = |id| Direction::for_center(c.dots[&id].color);
    let ab = FlipWord { events: vec![dot_event(a, dir(a)), dot_event(b, dir(b))] };
    let ba = FlipWord { events: vec![dot_event(b, dir(b)), dot_event(a, dir(a))] };
    words_equal_action(&[c], &ab, &ba).unwrap();
}

#[test]
fn shipped_octogon_closes() {
    let (c, w) = octogon();
    assert!(check_octogon(&c, &w).unwrap());
    words_equal_action(&[c], &w, &FlipWord::default()).unwrap();
}

#[test]
fn truncated_octogon_does_not_close() {
    let (c, mut w) = octogon();
    w.events.pop();
    assert!(!configurations_equal(&apply_word(&c, &w).unwrap(), &c));
    assert!(matches!(words_equal_action(&[c], &w, &FlipWord::default()), Err(RelationError::Mismatch { seed: 0 })));
}

#[test]
fn inapplicable_event_is_reported() {
    let (c, _) = octogon();
    let w = FlipWord { events: vec![dot_event(9999, Direction::PointToLine)] };
    assert!(matches!(apply_word(&c, &w), Err(RelationError::InapplicableEvent { index: 0, .. })));
}
