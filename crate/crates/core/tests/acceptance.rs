//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Oracles here are written independently of the library code
//! they check.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use projflip_core::arrangement::{Arrangement, ArrangementError, Color};
use projflip_core::checks::{
    disjoint_homothety_pair, disjoint_site_pairs, octogon_mutants, random_script, random_seed, run_suite,
    SuiteManifest, DEFAULT_SUITE, FOUR_LINES, OCTOGON,
};
use projflip_core::coherence::{Configuration, DotId, Element};
use projflip_core::exact::{ProjLine, ProjPoint, Rational, Triple};
use projflip_core::flip::{apply_flip, desargues_axis, find_flip_sites, Direction, FlipSite};
use projflip_core::io::OctogonFile;
use projflip_core::motion::{track_arrangement, triple_event_times, MotionScript};
use projflip_core::relations::apply_word;

type Outcome = Result<String, String>;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn cross(a: &Triple, b: &Triple) -> Triple {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn det(a: &Triple, b: &Triple, c: &Triple) -> BigInt {
    let x = cross(b, c);
    &a[0] * &x[0] + &a[1] * &x[1] + &a[2] * &x[2]
}

fn zero(v: &Triple) -> bool {
    v.iter().all(Zero::is_zero)
}

fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Random integer lines, redrawn until no two coincide and no three meet.
fn generic_lines(n: usize, rng: &mut ChaCha8Rng) -> Vec<ProjLine> {
    loop {
        let raw: Vec<Triple> = (0..n).map(|_| [0; 3].map(|_| big(rng.gen_range(-12..=12)))).collect();
        if raw.iter().any(zero) {
            continue;
        }
        let pairs_ok = (0..n).all(|i| (i + 1..n).all(|j| !zero(&cross(&raw[i], &raw[j]))));
        let triples_ok = (0..n).all(|i| (i + 1..n).all(|j| (j + 1..n).all(|k| !det(&raw[i], &raw[j], &raw[k]).is_zero())));
        if pairs_ok && triples_ok {
            return raw.into_iter().map(|v| ProjLine::from_triple(v).unwrap()).collect();
        }
    }
}

fn crit_1_3(rng: &mut ChaCha8Rng) -> (Outcome, Outcome, Outcome) {
    let mut census_ok = Ok(0usize);
    let mut color_ok = Ok(0usize);
    let mut dual_ok = Ok(0usize);
    let bump = |r: &mut Result<usize, String>, good: bool, msg: &dyn Fn() -> String| {
        if let Ok(k) = r {
            if good {
                *k += 1
            } else {
                *r = Err(msg())
            }
        }
    };
    for n in [2usize, 4, 6, 8] {
        for _ in 0..50 {
            let lines = generic_lines(n, rng);
            let arr = match Arrangement::build(&lines) {
                Ok(a) => a,
                Err(e) => {
                    census_ok = Err(format!("n={n}: {e}"));
                    continue;
                }
            };
            let c = arr.census();
            let want = (binom2(n), n * (n - 1), binom2(n) + 1, 1i64);
            bump(&mut census_ok, (c.vertices, c.arcs, c.regions, c.euler) == want, &|| format!("n={n}: census {c:?}, want {want:?}"));

            let col = match arr.checkerboard_color() {
                Ok(col) => col,
                Err(e) => {
                    color_ok = Err(format!("n={n}: {e}"));
                    continue;
                }
            };
            let proper = arr.arcs().iter().all(|a| col.color(a.regions.0) != col.color(a.regions.1));
            bump(&mut color_ok, proper, &|| format!("n={n}: two regions sharing an arc have one color"));

            let dual = arr.dual_quadrangulation(&col);
            let alternating = dual.faces.len() == binom2(n)
                && dual.faces.iter().all(|f| {
                    let cs = f.corners.map(|d| dual.dots[d].color);
                    cs[0] != cs[1] && cs[1] != cs[2] && cs[2] != cs[3] && cs[3] != cs[0]
                        && f.corners.iter().all(|&d| dual.dots[d].color == col.color(dual.dots[d].region))
                });
            bump(&mut dual_ok, alternating, &|| format!("n={n}: a dual face does not alternate colors"));
        }
    }
    for n in [3usize, 5] {
        for _ in 0..50 {
            let arr = Arrangement::build(&generic_lines(n, rng)).map_err(|e| e.to_string());
            let res = arr.map(|a| a.checkerboard_color().err());
            let good = matches!(res, Ok(Some(ArrangementError::NotBipartite { .. })));
            bump(&mut color_ok, good, &|| format!("n={n}: expected NotBipartite"));
        }
    }
    (
        census_ok.map(|k| format!("{k} arrangements")),
        color_ok.map(|k| format!("{k} colorings and odd rejections")),
        dual_ok.map(|k| format!("{k} dual quadrangulations")),
    )
}

fn point(rng: &mut ChaCha8Rng) -> Triple {
    loop {
        let v = [0; 3].map(|_| big(rng.gen_range(-20..=20)));
        if !zero(&v) {
            return v;
        }
    }
}

fn crit_4(rng: &mut ChaCha8Rng) -> Outcome {
    let mut done = 0;
    let mut draws = 0;
    while done < 1000 {
        draws += 1;
        if draws > 100_000 {
            return Err(format!("only {done} sites after {draws} draws"));
        }
        let o = point(rng);
        let a = [0; 3].map(|_| point(rng));
        let b = a.clone().map(|p| {
            let (s, t) = (big(rng.gen_range(-20..=20)), big(rng.gen_range(-20..=20)));
            [0, 1, 2].map(|k| &s * &o[k] + &t * &p[k])
        });
        let to_pt = |v: &Triple| ProjPoint::from_triple(v.clone());
        let (Ok(center), Ok(t1), Ok(t2)) = (
            to_pt(&o),
            a.iter().map(to_pt).collect::<Result<Vec<_>, _>>(),
            b.iter().map(to_pt).collect::<Result<Vec<_>, _>>(),
        ) else {
            continue;
        };
        let Ok(site) = FlipSite::new(center, t1.try_into().unwrap(), t2.try_into().unwrap()) else { continue };
        let Ok(res) = desargues_axis(&site) else { continue };
        // own axis points: meets of corresponding sides
        let side = |p: &Triple, q: &Triple| cross(p, q);
        let xyz: Vec<Triple> = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(i, j)| cross(&side(&a[i], &a[j]), &side(&b[i], &b[j])))
            .collect();
        if xyz.iter().any(zero) {
            return Err("a pair of corresponding sides coincides on an accepted site".into());
        }
        if !det(&xyz[0], &xyz[1], &xyz[2]).is_zero() {
            return Err(format!("axis points not collinear: {xyz:?}"));
        }
        for (mine, theirs) in xyz.iter().zip(&res.axis_points) {
            if !zero(&cross(mine, theirs.coords())) {
                return Err("library axis point differs from the meet of corresponding sides".into());
            }
            let l = res.axis.coords();
            let on: BigInt = (0..3).map(|k| &l[k] * &mine[k]).sum();
            if !on.is_zero() {
                return Err("axis misses an axis point".into());
            }
        }
        done += 1;
    }
    Ok(format!("{done} sites, all determinants zero"))
}

/// Element-level fingerprint of a configuration: the multiset of dot
/// elements and the multiset of faces, each face read up to rotation by
/// two corners and reflection.
fn fingerprint(c: &Configuration) -> (Vec<String>, Vec<Vec<String>>) {
    let key = |id: &DotId| -> String {
        let d = &c.dots[id];
        match &d.element {
            Some(Element::Point(p)) => format!("P{:?}", p.coords()),
            Some(Element::Line(l)) => format!("L{:?}", l.coords()),
            None => format!("{:?}?", d.color),
        }
    };
    let mut dots: Vec<String> = c.dots.keys().map(key).collect();
    dots.sort();
    let mut faces: Vec<Vec<String>> = c
        .faces
        .iter()
        .map(|f| {
            let k: Vec<String> = f.corners.iter().map(key).collect();
            let variants = [
                vec![k[0].clone(), k[1].clone(), k[2].clone(), k[3].clone()],
                vec![k[2].clone(), k[3].clone(), k[0].clone(), k[1].clone()],
                vec![k[0].clone(), k[3].clone(), k[2].clone(), k[1].clone()],
                vec![k[2].clone(), k[1].clone(), k[0].clone(), k[3].clone()],
            ];
            variants.into_iter().min().unwrap()
        })
        .collect();
    faces.sort();
    (dots, faces)
}

fn same(a: &Configuration, b: &Configuration) -> bool {
    fingerprint(a) == fingerprint(b)
}

fn direction_for(c: &Configuration, id: DotId) -> Direction {
    match c.dots[&id].color {
        Color::Black => Direction::PointToLine,
        Color::White => Direction::LineToPoint,
    }
}

fn crit_5(rng: &mut ChaCha8Rng) -> Outcome {
    let mut seeds = 0;
    let mut flips = 0;
    let mut k = 0;
    while seeds < 100 {
        k += 1;
        let n = if k % 2 == 0 { 4 } else { 6 };
        let (_, c) = random_seed(n, rng);
        let sites = find_flip_sites(&c);
        if sites.is_empty() {
            continue;
        }
        seeds += 1;
        for (dot, dir) in sites {
            let fresh = c.next_id();
            let there = apply_flip(&c, dot, dir).map_err(|e| format!("flip at {dot}: {e}"))?;
            if same(&there, &c) {
                return Err(format!("flip at {dot} changed nothing"));
            }
            let back = apply_flip(&there, fresh, direction_for(&there, fresh)).map_err(|e| format!("inverse at {fresh}: {e}"))?;
            if !same(&back, &c) {
                return Err(format!("n={n}: flip at {dot} and back differs from the seed"));
            }
            flips += 1;
        }
    }
    Ok(format!("{seeds} seeds, {flips} flip/unflip pairs"))
}

fn both_orders(c: &Configuration, d1: DotId, d2: DotId) -> Result<bool, String> {
    let go = |x: DotId, y: DotId| -> Result<Configuration, String> {
        let a = apply_flip(c, x, direction_for(c, x)).map_err(|e| e.to_string())?;
        apply_flip(&a, y, direction_for(&a, y)).map_err(|e| e.to_string())
    };
    Ok(same(&go(d1, d2)?, &go(d2, d1)?))
}

fn crit_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut pairs = 0;
    let fixed = disjoint_homothety_pair();
    for (a, b) in disjoint_site_pairs(&fixed) {
        if !both_orders(&fixed, a, b)? {
            return Err(format!("homothety pair ({a},{b}) does not commute"));
        }
        pairs += 1;
    }
    let mut random_seeds = 0;
    for _ in 0..40 {
        let (_, c) = random_seed(8, rng);
        let found = disjoint_site_pairs(&c);
        if found.is_empty() {
            continue;
        }
        random_seeds += 1;
        for (a, b) in found {
            if !both_orders(&c, a, b)? {
                return Err(format!("n=8 pair ({a},{b}) does not commute"));
            }
            pairs += 1;
        }
        if random_seeds == 3 {
            break;
        }
    }
    if pairs == 0 || random_seeds == 0 {
        return Err("no random seed with two disjoint sites".into());
    }
    Ok(format!("{pairs} pairs over {} seeds", random_seeds + 1))
}

fn crit_7() -> Outcome {
    let inst = OctogonFile::parse(OCTOGON).map_err(|e| e.to_string())?;
    let seed = inst.seed.to_configuration().map_err(|e| e.to_string())?;
    if inst.word.events.len() != 8 {
        return Err(format!("word has {} events", inst.word.events.len()));
    }
    let end = apply_word(&seed, &inst.word).map_err(|e| e.to_string())?;
    if !same(&end, &seed) {
        return Err("eight flips do not return to the seed".into());
    }
    let mutants = octogon_mutants(&seed, &inst.word);
    if mutants.is_empty() {
        return Err("no mutants".into());
    }
    for (k, m) in mutants.iter().enumerate() {
        if let Ok(end) = apply_word(&seed, m) {
            if same(&end, &seed) {
                return Err(format!("mutant {k} also closes"));
            }
        }
    }
    Ok(format!("cycle closes, {} mutants all fail", mutants.len()))
}

fn rat_det(m: [[Rational; 3]; 3]) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Sign changes of a triple determinant seen on a grid of 1000 steps per
/// breakpoint segment.
fn sampled_changes(ms: &MotionScript, t: [usize; 3]) -> usize {
    let mut times: Vec<Rational> = ms.trajectories.iter().flat_map(|tr| tr.iter().map(|b| b.0.clone())).collect();
    times.sort();
    times.dedup();
    let mut changes = 0;
    let mut last = 0i8;
    for w in times.windows(2) {
        let step = (&w[1] - &w[0]) / Rational::from_integer(big(1000));
        for s in 0..=1000 {
            let time = &w[0] + &step * Rational::from_integer(big(s));
            let d = rat_det(t.map(|i| ms.coeffs_at(i, &time)));
            let sg = if d.is_positive() { 1 } else if d.is_negative() { -1 } else { 0 };
            if sg != 0 {
                if last != 0 && sg != last {
                    changes += 1;
                }
                last = sg;
            }
        }
    }
    changes
}

fn normalized(mut s: Vec<i8>) -> Vec<i8> {
    if s.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        s.iter_mut().for_each(|x| *x = -*x);
    }
    s
}

/// The two snapshots differ in exactly one region, a triangle whose sign
/// vector is negated at exactly the event triple.
fn one_triangle_apart(a: &Arrangement, b: &Arrangement, triple: [usize; 3]) -> bool {
    let sa: BTreeSet<Vec<i8>> = a.regions().iter().map(|r| r.signs.clone()).collect();
    let sb: BTreeSet<Vec<i8>> = b.regions().iter().map(|r| r.signs.clone()).collect();
    let gone: Vec<_> = sa.difference(&sb).collect();
    let new: Vec<_> = sb.difference(&sa).collect();
    if gone.len() != 1 || new.len() != 1 {
        return false;
    }
    let mut flipped = gone[0].clone();
    for &i in &triple {
        flipped[i] = -flipped[i];
    }
    let tri = |arr: &Arrangement, s: &Vec<i8>| arr.regions().iter().any(|r| &r.signs == s && r.boundary.len() == 3);
    normalized(flipped) == *new[0] && tri(a, gone[0]) && tri(b, new[0])
}

fn crit_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut triples = 0;
    let mut events = 0;
    for k in 0..20 {
        let segments = rng.gen_range(1..=3);
        let ms = random_script(4, segments, rng);
        for t in projflip_core::motion::all_triples(4) {
            let exact = triple_event_times(&ms, t).map_err(|e| e.to_string())?.iter().filter(|r| r.is_crossing()).count();
            let sampled = sampled_changes(&ms, t);
            if exact != sampled {
                return Err(format!("script {k} triple {t:?}: isolator {exact}, sampling {sampled}"));
            }
            triples += 1;
        }
        let tl = track_arrangement(&ms).map_err(|e| e.to_string())?;
        if tl.snapshots.len() != tl.events.len() + 1 {
            return Err(format!("script {k}: {} snapshots for {} events", tl.snapshots.len(), tl.events.len()));
        }
        for (j, e) in tl.events.iter().enumerate() {
            if !one_triangle_apart(&tl.snapshots[j], &tl.snapshots[j + 1], e.triple) {
                return Err(format!("script {k}: snapshots {j} and {} are not one flip apart", j + 1));
            }
        }
        events += tl.events.len();
    }
    let four = MotionScript::parse(FOUR_LINES).map_err(|e| e.to_string())?;
    let tl = track_arrangement(&four).map_err(|e| e.to_string())?;
    if tl.events.len() != 4 {
        return Err(format!("four-line script has {} events", tl.events.len()));
    }
    for (j, e) in tl.events.iter().enumerate() {
        if !one_triangle_apart(&tl.snapshots[j], &tl.snapshots[j + 1], e.triple) {
            return Err(format!("four-line snapshots {j} and {} are not one flip apart", j + 1));
        }
    }
    Ok(format!("{triples} triples agree, {events} random events, four-line script has 4 events"))
}

fn crit_9() -> Outcome {
    let m = SuiteManifest::parse(DEFAULT_SUITE).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&run_suite(&m, None).map_err(|e| e.to_string())?).unwrap();
    let b = serde_json::to_string(&run_suite(&m, None).map_err(|e| e.to_string())?).unwrap();
    if a != b {
        return Err("two runs of the suite differ".into());
    }
    if !a.contains("\"passed\":true,\"checks\"") {
        return Err("the shipped suite does not pass".into());
    }
    Ok(format!("{} identical bytes", a.len()))
}

fn report(label: &str, limit: Option<Duration>, elapsed: Duration, outcome: &Outcome) -> bool {
    let over = limit.is_some_and(|l| elapsed > l);
    let ok = outcome.is_ok() && !over;
    let detail = match outcome {
        Ok(s) => s.clone(),
        Err(e) => e.clone(),
    };
    let budget = limit.map(|l| format!(" (limit {:.0} s)", l.as_secs_f64())).unwrap_or_default();
    println!(
        "{} {label}: {detail} [{:.2} s{budget}]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_da11);
    let mut all = true;

    let ((c1, c2, c3), d) = timed(|| crit_1_3(&mut rng));
    all &= report("1 region-count law", Some(Duration::from_secs(10)), d, &c1);
    all &= report("2 checkerboard law", None, d, &c2);
    all &= report("3 dual quadrangulation", None, d, &c3);

    let (c4, d) = timed(|| crit_4(&mut rng));
    all &= report("4 Desargues instances", Some(Duration::from_secs(30)), d, &c4);
    let (c5, d) = timed(|| crit_5(&mut rng));
    all &= report("5 involution", None, d, &c5);
    let (c6, d) = timed(|| crit_6(&mut rng));
    all &= report("6 commutation", None, d, &c6);
    let (c7, d) = timed(crit_7);
    all &= report("7 octogon", None, d, &c7);
    let (c8, d) = timed(|| crit_8(&mut rng));
    all &= report("8 motion/event oracle", Some(Duration::from_secs(60)), d, &c8);
    let (c9, d) = timed(crit_9);
    all &= report("9 determinism", None, d, &c9);

    if !all {
        std::process::exit(1);
    }
}
