use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projflip_core::arrangement::Arrangement;
use projflip_core::checks::{random_script, sampled_sign_changes, FOUR_LINES};
use projflip_core::exact::rat;
use projflip_core::flip::Direction;
use projflip_core::motion::{all_triples, event_word, track_arrangement, triple_event_times, Breakpoint, MotionScript};
use projflip_core::relations::{apply_word, SiteAddress};
use projflip_core::seed::seed_configuration;

fn signs(a: &Arrangement) -> BTreeSet<Vec<i8>> {
    a.regions().iter().map(|r| r.signs.clone()).collect()
}

/// x = 0 and y = 0 fixed, x + y = u and x - 2y = v with (u, v) once around
/// the origin, plus two far lines.
fn loop_script() -> MotionScript {
    let r = |n: i64| rat(n, 1);
    let uv = [(3, 1), (-1, 3), (-3, -1), (1, -3), (3, 1)];
    let fixed = |v: [i64; 3]| (0..5).map(|t| Breakpoint(r(t), v.map(r))).collect::<Vec<_>>();
    MotionScript::new(vec![
        fixed([1, 0, 0]),
        fixed([0, 1, 0]),
        uv.iter().enumerate().map(|(t, &(u, _))| Breakpoint(r(t as i64), [r(1), r(1), r(-u)])).collect(),
        uv.iter().enumerate().map(|(t, &(_, v))| Breakpoint(r(t as i64), [r(1), r(-2), r(-v)])).collect(),
        fixed([1, 3, -100]),
        fixed([3, -1, -90]),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn isolator_matches_sampling(seed in any::<u64>(), segments in 1usize..=3) {
        let ms = random_script(4, segments, &mut ChaCha8Rng::seed_from_u64(seed));
        for t in all_triples(4) {
            let exact = triple_event_times(&ms, t).unwrap().iter().filter(|r| r.is_crossing()).count();
            prop_assert_eq!(exact, sampled_sign_changes(&ms, t, 1000));
        }
    }

    #[test]
    fn snapshots_keep_the_census(seed in any::<u64>(), segments in 1usize..=3) {
        let ms = random_script(4, segments, &mut ChaCha8Rng::seed_from_u64(seed));
        let tl = track_arrangement(&ms).unwrap();
        for a in &tl.snapshots {
            let c = a.census();
            prop_assert_eq!((c.regions, c.euler), (7, 1));
        }
    }

    #[test]
    fn reversal_reverses_the_word(seed in any::<u64>(), segments in 1usize..=3) {
        let ms = random_script(4, segments, &mut ChaCha8Rng::seed_from_u64(seed));
        let (_, w) = event_word(&ms).unwrap();
        let (_, back) = event_word(&ms.reversed()).unwrap();
        prop_assert_eq!(w.events.len(), back.events.len());
        for (e, f) in w.events.iter().zip(back.events.iter().rev()) {
            prop_assert_eq!(&e.site, &f.site);
            prop_assert_eq!(e.direction.inverse(), f.direction);
        }
    }
}

#[test]
fn four_line_script_transforms_four_times() {
    let ms = MotionScript::parse(FOUR_LINES).unwrap();
    let (tl, w) = event_word(&ms).unwrap();
    assert_eq!(w.events.len(), 4);
    assert_eq!(tl.snapshots.len(), 5);
    let directions: BTreeSet<Direction> = tl.events.iter().map(|e| e.direction).collect();
    assert!(!directions.is_empty());
}

#[test]
fn four_line_word_reaches_the_terminal_arrangement() {
    let ms = MotionScript::parse(FOUR_LINES).unwrap();
    let (tl, w) = event_word(&ms).unwrap();
    let first = &tl.snapshots[0];
    let dual = first.dual_quadrangulation(&first.checkerboard_color().unwrap());
    let start = seed_configuration(&dual, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let end = apply_word(&start, &w).unwrap();
    let labels: BTreeSet<Vec<i8>> = end.dots.values().map(|d| d.label.clone().unwrap()).collect();
    assert_eq!(labels, signs(tl.snapshots.last().unwrap()));
    assert!(end.validate().unwrap().is_coherent());
}

#[test]
fn closed_loop_returns_to_the_start() {
    let ms = loop_script();
    let (tl, w) = event_word(&ms).unwrap();
    assert_eq!(w.events.len(), 8);
    assert_eq!(signs(&tl.snapshots[0]), signs(tl.snapshots.last().unwrap()));
    let mut per_triple = std::collections::BTreeMap::new();
    for e in &w.events {
        let SiteAddress::Lines(t) = e.site else { panic!("motion events are line addressed") };
        *per_triple.entry(t).or_insert(0) += 1;
    }
    assert_eq!(per_triple.len(), 4);
    assert!(per_triple.values().all(|&k| k == 2));
}

#[test]
fn static_script_has_one_snapshot() {
    let r = |n: i64| rat(n, 1);
    let still = |v: [i64; 3]| vec![Breakpoint(r(0), v.map(r)), Breakpoint(r(1), v.map(r))];
    let ms = MotionScript::new(vec![still([1, 0, 0]), still([0, 1, 0]), still([1, 1, -1]), still([1, -1, -2])]);
    let tl = track_arrangement(&ms).unwrap();
    assert!(tl.events.is_empty());
    assert_eq!(tl.snapshots.len(), 1);
}
