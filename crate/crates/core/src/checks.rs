//! Named verification checks and the suite runner behind `verify`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{check_generic, Arrangement, ArrangementError};
use crate::coherence::{Configuration, Dot, DotId, Element, Face};
use crate::exact::{collinear, int, rat, ProjLine, ProjPoint, Rational};
use crate::flip::{apply_flip, desargues_axis, find_flip_sites, hexagon, FlipSite};
use crate::io::{IoError, OctogonFile, SUITE_VERSION};
use crate::motion::{all_triples, track_arrangement, triple_event_times, triple_polys, Breakpoint, MotionError, MotionScript};
use crate::relations::{
    apply_word, check_commutation, check_involution, check_octogon, configurations_equal, resolve, site_triple, FlipEvent, FlipWord,
    SiteAddress,
};
use crate::seed::seed_on;

pub const FOUR_LINES: &str = include_str!("../data/four-lines.json");
pub const OCTOGON: &str = include_str!("../data/octogon.json");
pub const DEFAULT_SUITE: &str = include_str!("../data/default.json");

const COORD: i64 = 9;
const MAX_FAILURES: usize = 10;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: String,
    #[serde(default)]
    pub params: CheckParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub version: String,
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<CheckSpec>,
}

impl SuiteManifest {
    pub fn parse(text: &str) -> Result<SuiteManifest, IoError> {
        let m: SuiteManifest = serde_json::from_str(text)?;
        if m.version != SUITE_VERSION {
            return Err(IoError::Version {
                found: m.version,
                expected: SUITE_VERSION,
            });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
}

pub trait Check {
    fn name(&self) -> &'static str;
    fn default_params(&self) -> CheckParams;
    fn run(&self, params: &CheckParams, rng: &mut ChaCha8Rng) -> Tally;
}

/// Running count of instances and failure messages.
#[derive(Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub failures: Vec<String>,
    pub errors: usize,
}

impl Tally {
    fn ok(&mut self) {
        self.instances += 1;
    }

    fn fail(&mut self, msg: String) {
        self.instances += 1;
        self.errors += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg);
        }
    }

    fn check(&mut self, good: bool, msg: impl FnOnce() -> String) {
        if good {
            self.ok()
        } else {
            self.fail(msg())
        }
    }

    fn into_outcome(self, name: &str) -> CheckOutcome {
        CheckOutcome {
            name: name.to_string(),
            passed: self.errors == 0 && self.instances > 0,
            instances: self.instances,
            failures: self.failures,
        }
    }
}

pub fn random_generic_lines<R: Rng>(n: usize, rng: &mut R) -> Vec<ProjLine> {
    loop {
        let lines: Option<Vec<ProjLine>> = (0..n)
            .map(|_| {
                let v = [0; 3].map(|_| int(rng.gen_range(-COORD..=COORD)));
                ProjLine::from_triple(v).ok()
            })
            .collect();
        if let Some(lines) = lines {
            if check_generic(&lines).is_generic() {
                return lines;
            }
        }
    }
}

/// A coherent configuration on the dual of a random generic arrangement
/// of `n` lines (`n` even).
pub fn random_seed<R: Rng>(n: usize, rng: &mut R) -> (Arrangement, Configuration) {
    loop {
        let arr = Arrangement::build(&random_generic_lines(n, rng)).expect("generic");
        let Ok(col) = arr.checkerboard_color() else { continue };
        let template = Configuration::from_dual(&arr.dual_quadrangulation(&col));
        if let Ok(c) = seed_on(&template, rng) {
            return (arr, c);
        }
    }
}

fn random_point<R: Rng>(rng: &mut R) -> ProjPoint {
    loop {
        let v = [0; 3].map(|_| int(rng.gen_range(-COORD..=COORD)));
        if let Ok(p) = ProjPoint::from_triple(v) {
            return p;
        }
    }
}

/// Two triangles in perspective from a random center: the second
/// triangle's vertices are random points on the rays through the first.
pub fn random_perspective_site<R: Rng>(rng: &mut R) -> FlipSite {
    loop {
        let center = random_point(rng);
        let t1 = [0; 3].map(|_| random_point(rng));
        let t2 = t1.clone().map(|p| {
            let (a, b) = (int(rng.gen_range(-COORD..=COORD)), int(rng.gen_range(-COORD..=COORD)));
            let (c, q) = (center.coords(), p.coords());
            ProjPoint::from_triple([0, 1, 2].map(|k| &a * &c[k] + &b * &q[k]))
        });
        let Ok(t2) = t2.into_iter().collect::<Result<Vec<_>, _>>() else { continue };
        let t2: [ProjPoint; 3] = t2.try_into().expect("three");
        if let Ok(site) = FlipSite::new(center, t1, t2) {
            if desargues_axis(&site).is_ok() {
                return site;
            }
        }
    }
}

/// A script of `n` lines over `0..=segments` with random coefficients at
/// every integer time, redrawn until the motion is valid and generic.
pub fn random_script<R: Rng>(n: usize, segments: usize, rng: &mut R) -> MotionScript {
    loop {
        let trajectories = (0..n)
            .map(|_| {
                (0..=segments)
                    .map(|t| {
                        Breakpoint(
                            rat(t as i64, 1),
                            [0; 3].map(|_| rat(rng.gen_range(-COORD..=COORD), 1)),
                        )
                    })
                    .collect()
            })
            .collect();
        let ms = MotionScript::new(trajectories);
        if track_arrangement(&ms).is_ok() {
            return ms;
        }
    }
}

/// Sign changes of each triple determinant over `steps` equally spaced
/// rational samples per segment.
pub fn sampled_sign_changes(ms: &MotionScript, triple: [usize; 3], steps: usize) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for (a, b, p) in triple_polys(ms, triple) {
        for k in 0..=steps {
            let t = &a + (&b - &a) * rat(k as i64, steps as i64);
            let v = p.eval(&t);
            if v == Rational::from_integer(0.into()) {
                continue;
            }
            let s = v > Rational::from_integer(0.into());
            if last.is_some_and(|l| l != s) {
                count += 1;
            }
            last = Some(s);
        }
    }
    count
}

/// The triple whose triangle flips between two arrangements of the same
/// lines, if they differ by exactly one triangle flip.
pub fn single_triangle_flip(before: &Arrangement, after: &Arrangement) -> Option<[usize; 3]> {
    let a: BTreeSet<&Vec<i8>> = before.regions().iter().map(|r| &r.signs).collect();
    let b: BTreeSet<&Vec<i8>> = after.regions().iter().map(|r| &r.signs).collect();
    let gone: Vec<&&Vec<i8>> = a.difference(&b).collect();
    let new: Vec<&&Vec<i8>> = b.difference(&a).collect();
    if gone.len() != 1 || new.len() != 1 {
        return None;
    }
    let k = before.region_by_signs(gone[0])?;
    let region = &before.regions()[k];
    if region.boundary.len() != 3 {
        return None;
    }
    let mut triple: Vec<usize> = region.boundary.iter().map(|&e| before.arcs()[e].line).collect();
    triple.sort();
    triple.dedup();
    let triple: [usize; 3] = triple.try_into().ok()?;
    let mut flipped = gone[0].to_vec();
    for &i in &triple {
        flipped[i] = -flipped[i];
    }
    if flipped.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        flipped.iter_mut().for_each(|x| *x = -*x);
    }
    (flipped == **new[0]).then_some(triple)
}

fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

struct Census;
struct Coloring;
struct DesarguesSweep;
struct Involution;
struct Commutation;
struct Octogon;
struct Motion;

impl Check for Census {
    fn name(&self) -> &'static str {
        "census"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: Some(6), instances: Some(50), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let n = p.n.unwrap_or(6);
        let mut t = Tally::default();
        for _ in 0..p.instances.unwrap_or(50) {
            let lines = random_generic_lines(n, rng);
            match Arrangement::build(&lines) {
                Ok(arr) => {
                    let c = arr.census();
                    t.check(
                        c.regions == binom2(n) + 1 && c.vertices == binom2(n) && c.arcs == n * (n - 1) && c.euler == 1,
                        || format!("{lines:?}: {c:?}"),
                    );
                }
                Err(e) => t.fail(format!("{lines:?}: {e}")),
            }
        }
        t
    }
}

impl Check for Coloring {
    fn name(&self) -> &'static str {
        "coloring"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: Some(4), instances: Some(50), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let n = p.n.unwrap_or(4);
        let mut t = Tally::default();
        for _ in 0..p.instances.unwrap_or(50) {
            let lines = random_generic_lines(n, rng);
            let arr = Arrangement::build(&lines).expect("generic");
            match (n % 2, arr.checkerboard_color()) {
                (0, Ok(col)) => {
                    let dual = arr.dual_quadrangulation(&col);
                    let alternating = dual.faces.iter().all(|f| {
                        (0..4).all(|k| dual.dots[f.corners[k]].color != dual.dots[f.corners[(k + 1) % 4]].color)
                    });
                    t.check(alternating, || format!("{lines:?}: dual face colors do not alternate"));
                }
                (1, Err(ArrangementError::NotBipartite { .. })) => t.ok(),
                (_, r) => t.fail(format!("{lines:?}: unexpected {:?}", r.map(|_| ()))),
            }
        }
        t
    }
}

impl Check for DesarguesSweep {
    fn name(&self) -> &'static str {
        "desargues-sweep"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: None, instances: Some(1000), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let mut t = Tally::default();
        for _ in 0..p.instances.unwrap_or(1000) {
            let site = random_perspective_site(rng);
            match desargues_axis(&site) {
                Ok(r) => {
                    let [x, y, z] = &r.axis_points;
                    t.check(collinear(x, y, z), || format!("{site:?}: axis points not collinear"));
                }
                Err(e) => t.fail(format!("{site:?}: {e}")),
            }
        }
        t
    }
}

impl Check for Involution {
    fn name(&self) -> &'static str {
        "involution"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: Some(4), instances: Some(100), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let n = p.n.unwrap_or(4);
        let mut t = Tally::default();
        while t.instances < p.instances.unwrap_or(100) {
            let (_, c) = random_seed(n, rng);
            let sites = find_flip_sites(&c);
            let Some(&(dot, _)) = sites.first() else { continue };
            match check_involution(&c, dot) {
                Ok(good) => t.check(good, || format!("dot {dot}: flip and inverse differ from the seed")),
                Err(e) => t.fail(format!("dot {dot}: {e}")),
            }
        }
        t
    }
}

/// Two copies of the homothety disk, the second moved by a projective map,
/// with disjoint ids. Both centers are flip sites with disjoint supports.
pub fn disjoint_homothety_pair() -> Configuration {
    let p = ProjPoint::from_ints;
    let center = p(0, 0, 1);
    let t1 = [p(1, 0, 1), p(0, 1, 1), p(1, 1, 1)];
    let t2 = [p(2, 0, 1), p(0, 2, 1), p(2, 2, 1)];
    let mut conf = Configuration::default();
    for (base, shift) in [(0, 0i64), (7, 5)] {
        let mv = |q: &ProjPoint| {
            let v = q.coords();
            ProjPoint::from_triple([&v[0] + &v[2] * int(shift), &v[1] + &v[2] * int(2 * shift), v[2].clone()]).expect("nonzero")
        };
        let (c, a, b) = (mv(&center), t1.clone().map(|q| mv(&q)), t2.clone().map(|q| mv(&q)));
        let join = |x: &ProjPoint, y: &ProjPoint| crate::exact::join(x, y).expect("distinct");
        let sides = [join(&a[2], &a[0]), join(&a[0], &a[1]), join(&a[1], &a[2])];
        let mut put = |id: DotId, e: Element| {
            conf.dots.insert(
                id,
                Dot {
                    color: e.color(),
                    element: Some(e),
                    label: None,
                    provenance: None,
                },
            );
        };
        put(base, Element::Point(c));
        for i in 0..3u64 {
            put(base + 1 + i, Element::Line(sides[i as usize].clone()));
            put(base + 4 + i, Element::Point(b[i as usize].clone()));
        }
        for i in 0..3u64 {
            conf.faces.push(Face {
                corners: [base, base + 1 + i, base + 4 + i, base + 1 + (i + 1) % 3],
                label: None,
            });
        }
    }
    conf
}

/// Pairs of flip sites with disjoint supports.
pub fn disjoint_site_pairs(c: &Configuration) -> Vec<(DotId, DotId)> {
    let sites: Vec<(DotId, BTreeSet<DotId>)> = find_flip_sites(c)
        .into_iter()
        .filter_map(|(d, _)| hexagon(c, d).ok().map(|h| (d, h.support())))
        .collect();
    let mut out = Vec::new();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            if sites[i].1.is_disjoint(&sites[j].1) {
                out.push((sites[i].0, sites[j].0));
            }
        }
    }
    out
}

impl Check for Commutation {
    fn name(&self) -> &'static str {
        "commutation"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: Some(8), instances: Some(10), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let n = p.n.unwrap_or(8);
        let mut t = Tally::default();
        let pair = disjoint_homothety_pair();
        match check_commutation(&pair, 0, 7) {
            Ok(good) => t.check(good, || "homothety pair: orders differ".to_string()),
            Err(e) => t.fail(format!("homothety pair: {e}")),
        }
        let want = p.instances.unwrap_or(10);
        let mut draws = 0;
        while t.instances < want + 1 && draws < 50 * want {
            draws += 1;
            let (_, c) = random_seed(n, rng);
            let Some(&(a, b)) = disjoint_site_pairs(&c).first() else { continue };
            match check_commutation(&c, a, b) {
                Ok(good) => t.check(good, || format!("dots {a}, {b}: orders differ")),
                Err(e) => t.fail(format!("dots {a}, {b}: {e}")),
            }
        }
        t
    }
}

/// Every substitution of one event by a flip, available at that step,
/// whose lines are not all among the lines the word itself flips.
pub fn octogon_mutants(c: &Configuration, word: &FlipWord) -> Vec<FlipWord> {
    let mut own = BTreeSet::new();
    let mut cur = c.clone();
    for ev in &word.events {
        let Ok(id) = resolve(&cur, &ev.site) else { break };
        own.extend(site_triple(&cur, id).into_iter().flatten());
        match apply_flip(&cur, id, ev.direction) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    let mut out = Vec::new();
    let mut cur = c.clone();
    for (k, ev) in word.events.iter().enumerate() {
        let Ok(id) = resolve(&cur, &ev.site) else { break };
        for (other, dir) in find_flip_sites(&cur) {
            let unrelated = site_triple(&cur, other).is_none_or(|t| t.iter().any(|x| !own.contains(x)));
            if other != id && unrelated {
                let mut w = word.clone();
                w.events[k] = FlipEvent {
                    site: SiteAddress::Dot(other),
                    direction: dir,
                };
                out.push(w);
            }
        }
        match apply_flip(&cur, id, ev.direction) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    out
}

impl Check for Octogon {
    fn name(&self) -> &'static str {
        "octogon"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams::default()
    }

    fn run(&self, _: &CheckParams, _: &mut ChaCha8Rng) -> Tally {
        let mut t = Tally::default();
        let inst = match OctogonFile::parse(OCTOGON).and_then(|f| Ok((f.seed.to_configuration()?, f.word))) {
            Ok(x) => x,
            Err(e) => {
                t.fail(format!("shipped instance: {e}"));
                return t;
            }
        };
        let (c, word) = inst;
        match check_octogon(&c, &word) {
            Ok(good) => t.check(good, || "shipped cycle does not return to its seed".to_string()),
            Err(e) => t.fail(format!("shipped cycle: {e}")),
        }
        // judged on the geometry alone, not on the triple pattern
        for (k, m) in octogon_mutants(&c, &word).iter().enumerate() {
            let closes = apply_word(&c, m).is_ok_and(|end| configurations_equal(&c, &end));
            t.check(!closes, || format!("mutant {k} still closes up"));
        }
        t
    }
}

impl Check for Motion {
    fn name(&self) -> &'static str {
        "motion"
    }

    fn default_params(&self) -> CheckParams {
        CheckParams { n: Some(4), instances: Some(20), seed: None }
    }

    fn run(&self, p: &CheckParams, rng: &mut ChaCha8Rng) -> Tally {
        let mut t = Tally::default();
        match MotionScript::parse(FOUR_LINES).map_err(|e| e.to_string()).and_then(|ms| track_arrangement(&ms).map_err(|e| e.to_string())) {
            Ok(tl) => t.check(tl.events.len() == 4, || format!("four-line script: {} events", tl.events.len())),
            Err(e) => t.fail(format!("four-line script: {e}")),
        }
        let n = p.n.unwrap_or(4);
        for _ in 0..p.instances.unwrap_or(20) {
            let segments = rng.gen_range(1..=3);
            let ms = random_script(n, segments, rng);
            match script_agrees(&ms) {
                Ok(()) => t.ok(),
                Err(e) => t.fail(e),
            }
        }
        t
    }
}

/// Root isolation against dense sampling, and the one-flip diff between
/// consecutive snapshots.
pub fn script_agrees(ms: &MotionScript) -> Result<(), String> {
    let err = |e: MotionError| e.to_string();
    for triple in all_triples(ms.trajectories.len()) {
        let exact = triple_event_times(ms, triple).map_err(err)?.iter().filter(|r| r.is_crossing()).count();
        let sampled = sampled_sign_changes(ms, triple, 1000);
        if exact != sampled {
            return Err(format!("triple {triple:?}: {exact} crossings, {sampled} sampled sign changes"));
        }
    }
    let tl = track_arrangement(ms).map_err(err)?;
    for (k, w) in tl.snapshots.windows(2).enumerate() {
        if single_triangle_flip(&w[0], &w[1]) != Some(tl.events[k].triple) {
            return Err(format!("snapshots {k} and {} are not one flip apart", k + 1));
        }
    }
    Ok(())
}

pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(Census),
        Box::new(Coloring),
        Box::new(DesarguesSweep),
        Box::new(Involution),
        Box::new(Commutation),
        Box::new(Octogon),
        Box::new(Motion),
    ]
}

pub fn lookup(name: &str) -> Option<Box<dyn Check>> {
    registry().into_iter().find(|c| c.name() == name)
}

/// Runs every check of the manifest in order. Each check gets its own
/// generator, seeded from its parameters or from the base seed and its
/// position, so the report depends only on the manifest and the seed.
pub fn run_suite(m: &SuiteManifest, seed_override: Option<u64>) -> Result<SuiteReport, SuiteError> {
    let base = seed_override.unwrap_or(m.seed);
    let checks: Vec<Box<dyn Check>> = m
        .checks
        .iter()
        .map(|s| lookup(&s.name).ok_or_else(|| SuiteError::UnknownCheck(s.name.clone())))
        .collect::<Result<_, _>>()?;
    let mut outcomes = Vec::with_capacity(checks.len());
    for (k, (spec, check)) in m.checks.iter().zip(&checks).enumerate() {
        let defaults = check.default_params();
        let params = CheckParams {
            n: spec.params.n.or(defaults.n),
            instances: spec.params.instances.or(defaults.instances),
            seed: spec.params.seed,
        };
        let s = params.seed.unwrap_or_else(|| base.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        outcomes.push(check.run(&params, &mut rng).into_outcome(check.name()));
    }
    Ok(SuiteReport {
        seed: base,
        passed: outcomes.iter().all(|o| o.passed),
        checks: outcomes,
    })
}
