use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projflip_core::arrangement::Arrangement;
use projflip_core::checks::{random_generic_lines, random_script, random_seed, SuiteManifest, DEFAULT_SUITE, FOUR_LINES, OCTOGON};
use projflip_core::exact::{rat, ProjLine};
use projflip_core::flip::find_flip_sites;
use projflip_core::io::{
    format_rational, parse_rational, to_pretty_json, ConfigurationFile, FlipWordFile, IoError, LineSetFile, OctogonFile,
};
use projflip_core::motion::{event_word, MotionScript};
use projflip_core::relations::{FlipEvent, FlipWord, SiteAddress};
use projflip_core::render::{render_dual_dot, render_svg, Chart};

fn lines(v: &[(i64, i64, i64)]) -> Vec<ProjLine> {
    v.iter().map(|&(a, b, c)| ProjLine::from_ints(a, b, c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rationals_print_as_p_over_q(n in -1000i64..=1000, d in 1i64..=1000) {
        let r = rat(n, d);
        let s = format_rational(&r);
        prop_assert!(s.contains('/'));
        prop_assert_eq!(parse_rational(&s).unwrap(), r);
    }

    #[test]
    fn line_sets_round_trip(seed in any::<u64>(), n in 2usize..=8) {
        let f = LineSetFile::from_lines(&random_generic_lines(n, &mut ChaCha8Rng::seed_from_u64(seed)));
        let text = to_pretty_json(&f);
        let back = LineSetFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(to_pretty_json(&back), text);
    }

    #[test]
    fn configurations_round_trip(seed in any::<u64>()) {
        let (_, c) = random_seed(4, &mut ChaCha8Rng::seed_from_u64(seed));
        let f = ConfigurationFile::from_configuration(&c);
        let text = to_pretty_json(&f);
        let back = ConfigurationFile::parse(&text).unwrap();
        prop_assert_eq!(&back.to_configuration().unwrap(), &c);
        prop_assert_eq!(to_pretty_json(&back), text);
    }

    #[test]
    fn words_round_trip(seed in any::<u64>()) {
        let (_, c) = random_seed(6, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut events: Vec<FlipEvent> = find_flip_sites(&c)
            .into_iter()
            .map(|(d, direction)| FlipEvent { site: SiteAddress::Dot(d), direction })
            .collect();
        events.push(FlipEvent { site: SiteAddress::Lines([0, 1, 2]), direction: projflip_core::flip::Direction::LineToPoint });
        let f = FlipWordFile::new(FlipWord { events });
        let text = to_pretty_json(&f);
        prop_assert_eq!(FlipWordFile::parse(&text).unwrap(), f);
    }

    #[test]
    fn motion_scripts_round_trip(seed in any::<u64>(), segments in 1usize..=3) {
        let ms = random_script(4, segments, &mut ChaCha8Rng::seed_from_u64(seed));
        let text = to_pretty_json(&ms);
        prop_assert_eq!(MotionScript::parse(&text).unwrap(), ms);
    }
}

#[test]
fn shipped_files_round_trip() {
    let ms = MotionScript::parse(FOUR_LINES).unwrap();
    assert_eq!(MotionScript::parse(&to_pretty_json(&ms)).unwrap(), ms);
    let oct = OctogonFile::parse(OCTOGON).unwrap();
    assert_eq!(OctogonFile::parse(&to_pretty_json(&oct)).unwrap(), oct);
    let suite = SuiteManifest::parse(DEFAULT_SUITE).unwrap();
    assert_eq!(SuiteManifest::parse(&to_pretty_json(&suite)).unwrap(), suite);
}

#[test]
fn rejected_inputs() {
    assert!(matches!(LineSetFile::parse(r#"{"version":"projflip/lines/9","lines":[]}"#), Err(IoError::Version { .. })));
    assert!(matches!(LineSetFile::parse("{"), Err(IoError::Json(_))));
    assert!(LineSetFile::parse(r#"{"version":"projflip/lines/1","lines":[["1","x","0"]]}"#).is_err());
    let one = LineSetFile::parse(r#"{"version":"projflip/lines/1","lines":[["1","0","0"]]}"#).unwrap();
    assert!(matches!(one.to_lines(), Err(IoError::Invalid(_))));
    let zero = LineSetFile::parse(r#"{"version":"projflip/lines/1","lines":[["0","0","0"],["1","0","0"]]}"#).unwrap();
    assert!(matches!(zero.to_lines(), Err(IoError::Projective(_))));
    let integers = LineSetFile::parse(r#"{"version":"projflip/lines/1","lines":[["1","0","0"],["0","2","1/2"]]}"#).unwrap();
    assert_eq!(integers.to_lines().unwrap()[1], ProjLine::from_ints(0, 4, 1));
}

#[test]
fn four_line_word_file() {
    let (_, w) = event_word(&MotionScript::parse(FOUR_LINES).unwrap()).unwrap();
    let text = to_pretty_json(&FlipWordFile::new(w.clone()));
    assert!(text.contains("\"lines\""));
    assert_eq!(FlipWordFile::parse(&text).unwrap().word, w);
}

#[test]
fn svg_counts() {
    for (set, lines_n, regions_n) in [
        (lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, -1, -2)]), 4, 7),
        (lines(&[(1, 0, 0), (0, 1, 0)]), 2, 2),
    ] {
        let arr = Arrangement::build(&set).unwrap();
        let col = arr.checkerboard_color().unwrap();
        let svg = render_svg(&arr, &col, Chart::Auto).unwrap();
        assert_eq!(svg.matches("class=\"line\"").count(), lines_n);
        assert_eq!(svg.matches("class=\"region\"").count(), regions_n);
        assert!(!svg.contains("d=\"\""), "every element is drawn: {svg}");
        assert_eq!(render_svg(&arr, &col, Chart::Auto).unwrap(), svg);
    }
}

#[test]
fn dot_counts() {
    for (set, nodes, edges) in [
        (lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, -1, -2)]), 7, 12),
        (lines(&[(1, 0, 0), (0, 1, 0)]), 2, 2),
    ] {
        let arr = Arrangement::build(&set).unwrap();
        let dual = arr.dual_quadrangulation(&arr.checkerboard_color().unwrap());
        let dot = render_dual_dot(&dual);
        assert_eq!(dot.matches("fillcolor=").count(), nodes);
        assert_eq!(dot.matches(" -- ").count(), edges);
        assert_eq!(dot.matches("fillcolor=black").count(), dual.dots.iter().filter(|d| d.color == projflip_core::arrangement::Color::Black).count());
        assert_eq!(render_dual_dot(&dual), dot);
    }
}

#[test]
fn explicit_charts() {
    let arr = Arrangement::build(&lines(&[(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, -1, -2)])).unwrap();
    let col = arr.checkerboard_color().unwrap();
    // x = 0 is the line at infinity of the x chart
    assert!(render_svg(&arr, &col, Chart::X).is_err());
    let y = render_svg(&arr, &col, Chart::Z).unwrap();
    assert_eq!(y.matches("class=\"region\"").count(), 7);
}
