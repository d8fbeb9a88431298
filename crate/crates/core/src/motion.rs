//! Lines moving along piecewise-linear coefficient paths.
//!
//! On each elementary time segment every line is linear in `t`, so the
//! determinant of three lines is a cubic. Its roots are the times at which
//! the three lines pass through a common point.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{check_generic, Arrangement, ArrangementError, GenericityReport};
use crate::exact::{clear_denominators, ProjLine, Rational, Triple};
use crate::flip::Direction;
use crate::io::{q, q3, IoError, MOTION_VERSION};
use crate::poly::{isolate_roots, Poly, RealRoot};
use crate::relations::{FlipEvent, FlipWord, SiteAddress};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint(#[serde(with = "q")] pub Rational, #[serde(with = "q3")] pub [Rational; 3]);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionScript {
    pub version: String,
    pub trajectories: Vec<Vec<Breakpoint>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("{0} trajectories; at least 3 are required")]
    TooFewLines(usize),
    #[error("trajectory {0} needs at least two breakpoints")]
    TooFewBreakpoints(usize),
    #[error("trajectory {0}: breakpoint times are not strictly increasing")]
    NonIncreasingTimes(usize),
    #[error("trajectory {0} does not span the common time interval")]
    IntervalMismatch(usize),
    #[error("trajectory {line} passes through the zero triple on segment {segment}")]
    ZeroLine { line: usize, segment: usize },
    #[error("arrangement at time {time} is not generic: {report}")]
    EndpointNotGeneric { time: String, report: GenericityReport },
    #[error("lines {triple:?} are concurrent throughout segment {segment}")]
    IdenticallyZero { triple: [usize; 3], segment: usize },
    #[error("lines {triple:?} become concurrent at breakpoint time {time}")]
    EventAtBreakpoint { triple: [usize; 3], time: String },
    #[error("events at {a:?} and {b:?} happen at the same time (~{approx})")]
    SimultaneousEvents { a: [usize; 3], b: [usize; 3], approx: f64 },
    #[error("lines {0:?} are concurrent at one time (~{1})")]
    QuadruplePoint([usize; 4], f64),
    #[error("snapshot failed: {0}")]
    Snapshot(ArrangementError),
}

impl MotionScript {
    pub fn new(trajectories: Vec<Vec<Breakpoint>>) -> MotionScript {
        MotionScript {
            version: MOTION_VERSION.to_string(),
            trajectories,
        }
    }

    pub fn parse(text: &str) -> Result<MotionScript, IoError> {
        let m: MotionScript = serde_json::from_str(text)?;
        if m.version != MOTION_VERSION {
            return Err(IoError::Version {
                found: m.version,
                expected: MOTION_VERSION,
            });
        }
        Ok(m)
    }

    pub fn interval(&self) -> (Rational, Rational) {
        let t = &self.trajectories[0];
        (t[0].0.clone(), t[t.len() - 1].0.clone())
    }

    pub fn validate(&self) -> Result<(), MotionError> {
        let n = self.trajectories.len();
        if n < 3 {
            return Err(MotionError::TooFewLines(n));
        }
        for (i, tr) in self.trajectories.iter().enumerate() {
            if tr.len() < 2 {
                return Err(MotionError::TooFewBreakpoints(i));
            }
            if tr.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(MotionError::NonIncreasingTimes(i));
            }
        }
        let (t0, t1) = self.interval();
        for (i, tr) in self.trajectories.iter().enumerate() {
            if tr[0].0 != t0 || tr[tr.len() - 1].0 != t1 {
                return Err(MotionError::IntervalMismatch(i));
            }
        }
        for (line, tr) in self.trajectories.iter().enumerate() {
            for (segment, w) in tr.windows(2).enumerate() {
                if passes_through_zero(&w[0].1, &w[1].1) {
                    return Err(MotionError::ZeroLine { line, segment });
                }
            }
        }
        for t in [t0, t1] {
            let lines: Vec<ProjLine> = self.oriented_at(&t).into_iter().map(|v| ProjLine::from_triple(v).expect("nonzero")).collect();
            let report = check_generic(&lines);
            if !report.is_generic() {
                return Err(MotionError::EndpointNotGeneric { time: t.to_string(), report });
            }
        }
        Ok(())
    }

    /// Union of all breakpoint times.
    pub fn segment_times(&self) -> Vec<Rational> {
        let mut ts: Vec<Rational> = self.trajectories.iter().flatten().map(|b| b.0.clone()).collect();
        ts.sort();
        ts.dedup();
        ts
    }

    pub fn coeffs_at(&self, line: usize, t: &Rational) -> [Rational; 3] {
        let tr = &self.trajectories[line];
        let k = tr
            .windows(2)
            .position(|w| *t <= w[1].0)
            .unwrap_or(tr.len() - 2);
        let (a, b) = (&tr[k], &tr[k + 1]);
        let s = (t - &a.0) / (&b.0 - &a.0);
        [0, 1, 2].map(|c| &a.1[c] + &s * (&b.1[c] - &a.1[c]))
    }

    /// Integer coefficient triples at `t`, scaled by a positive factor so
    /// that orientations vary continuously.
    pub fn oriented_at(&self, t: &Rational) -> Vec<Triple> {
        (0..self.trajectories.len())
            .map(|i| clear_denominators(&self.coeffs_at(i, t)).expect("validated nonzero"))
            .collect()
    }

    /// Coefficients of line `i` on `[a, b]` as linear polynomials in `t`.
    fn linear_on(&self, i: usize, a: &Rational, b: &Rational) -> [Poly; 3] {
        let (ca, cb) = (self.coeffs_at(i, a), self.coeffs_at(i, b));
        [0, 1, 2].map(|c| {
            let slope = (&cb[c] - &ca[c]) / (b - a);
            Poly::new(vec![&ca[c] - &slope * a, slope])
        })
    }

    /// Same trajectories run backwards in time, `t -> t0 + t1 - t`.
    pub fn reversed(&self) -> MotionScript {
        let (t0, t1) = self.interval();
        let sum = t0 + t1;
        MotionScript::new(
            self.trajectories
                .iter()
                .map(|tr| tr.iter().rev().map(|b| Breakpoint(&sum - &b.0, b.1.clone())).collect())
                .collect(),
        )
    }
}

fn passes_through_zero(a: &[Rational; 3], b: &[Rational; 3]) -> bool {
    if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
        return true;
    }
    // zero in between iff b is a negative multiple of a
    let k = (0..3).find(|&c| !a[c].is_zero()).expect("nonzero");
    let s = &b[k] / &a[k];
    s.is_negative() && (0..3).all(|c| b[c] == &s * &a[c])
}

fn det_poly(rows: [&[Poly; 3]; 3]) -> Poly {
    let [a, b, c] = rows;
    let minor = |x: usize, y: usize| b[x].mul(&c[y]).add(&b[y].mul(&c[x]).scale(&Rational::from_integer((-1).into())));
    a[0].mul(&minor(1, 2))
        .add(&a[1].mul(&minor(0, 2)).scale(&Rational::from_integer((-1).into())))
        .add(&a[2].mul(&minor(0, 1)))
}

pub fn all_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// A root of one triple determinant.
#[derive(Debug, Clone)]
pub struct TripleRoot {
    pub time: RealRoot,
    pub segment: usize,
    /// Sign of the determinant just before and just after.
    pub before: i8,
    pub after: i8,
}

impl TripleRoot {
    pub fn is_crossing(&self) -> bool {
        self.before != self.after
    }
}

fn sgn(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Determinant polynomials of a triple, one per elementary segment.
pub fn triple_polys(ms: &MotionScript, triple: [usize; 3]) -> Vec<(Rational, Rational, Poly)> {
    let ts = ms.segment_times();
    ts.windows(2)
        .map(|w| {
            let rows = triple.map(|i| ms.linear_on(i, &w[0], &w[1]));
            (w[0].clone(), w[1].clone(), det_poly([&rows[0], &rows[1], &rows[2]]))
        })
        .collect()
}

/// Every time in `(t0, t1)` at which the three lines are concurrent, with
/// the determinant's sign on either side.
pub fn triple_event_times(ms: &MotionScript, triple: [usize; 3]) -> Result<Vec<TripleRoot>, MotionError> {
    let polys = triple_polys(ms, triple);
    let mut out = Vec::new();
    for (segment, (a, b, p)) in polys.iter().enumerate() {
        if p.is_zero() {
            return Err(MotionError::IdenticallyZero { triple, segment });
        }
        if segment > 0 && p.eval(a).is_zero() {
            return Err(MotionError::EventAtBreakpoint { triple, time: a.to_string() });
        }
        for time in isolate_roots(p, a, b) {
            let (before, after) = match &time {
                RealRoot::Isolated { lo, hi, .. } => (sgn(&p.eval(lo)), sgn(&p.eval(hi))),
                RealRoot::Exact(r) => {
                    // sign of the leading term of the expansion at r
                    let m = p.multiplicity(r);
                    let mut d = p.clone();
                    for _ in 0..m {
                        d = d.derivative();
                    }
                    let after = sgn(&d.eval(r));
                    (if m % 2 == 1 { -after } else { after }, after)
                }
            };
            out.push(TripleRoot { time, segment, before, after });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MotionEvent {
    pub time: RealRoot,
    pub triple: [usize; 3],
    pub direction: Direction,
}

impl MotionEvent {
    pub fn to_flip_event(&self) -> FlipEvent {
        FlipEvent {
            site: SiteAddress::Lines(self.triple),
            direction: self.direction,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EventTimeline {
    pub events: Vec<MotionEvent>,
    /// Sample times: the start, one time after each event, and the end.
    pub snapshot_times: Vec<Rational>,
    pub snapshots: Vec<Arrangement>,
}

struct Critical {
    time: RealRoot,
    triple: [usize; 3],
    crossing: Option<Direction>,
}

fn collision(a: [usize; 3], b: [usize; 3], approx: f64) -> MotionError {
    let mut lines: Vec<usize> = a.iter().chain(&b).copied().collect();
    lines.sort();
    lines.dedup();
    if lines.len() == 4 && a.iter().filter(|x| b.contains(x)).count() == 2 {
        MotionError::QuadruplePoint(lines.try_into().expect("four"), approx)
    } else {
        MotionError::SimultaneousEvents { a, b, approx }
    }
}

fn ordered_criticals(ms: &MotionScript) -> Result<Vec<Critical>, MotionError> {
    ms.validate()?;
    let mut all: Vec<Critical> = Vec::new();
    for triple in all_triples(ms.trajectories.len()) {
        for r in triple_event_times(ms, triple)? {
            let crossing = r.is_crossing().then_some(if r.after > 0 { Direction::PointToLine } else { Direction::LineToPoint });
            let c = Critical { time: r.time, triple, crossing };
            // insertion keeps `all` sorted; equal times are rejected
            let mut pos = all.len();
            while pos > 0 {
                match all[pos - 1].time.compare(&mut c.time.clone()) {
                    Ordering::Less => break,
                    Ordering::Equal => return Err(collision(all[pos - 1].triple, triple, c.time.approx())),
                    Ordering::Greater => pos -= 1,
                }
            }
            if let Some(next) = all.get_mut(pos) {
                if next.time.compare(&mut c.time.clone()) == Ordering::Equal {
                    return Err(collision(next.triple, triple, c.time.approx()));
                }
            }
            all.insert(pos, c);
        }
    }
    Ok(all)
}

/// A rational strictly between two distinct ordered roots.
fn between(a: &mut RealRoot, b: &mut RealRoot) -> Rational {
    while a.hi() >= b.lo() {
        a.refine();
        b.refine();
    }
    (a.hi() + b.lo()) / Rational::from_integer(2.into())
}

/// All crossing events in time order, with snapshots between them.
pub fn track_arrangement(ms: &MotionScript) -> Result<EventTimeline, MotionError> {
    let mut crit = ordered_criticals(ms)?;
    let (t0, t1) = ms.interval();
    let mut events = Vec::new();
    let mut snapshot_times = vec![t0];
    for k in 0..crit.len() {
        let Some(direction) = crit[k].crossing else { continue };
        let sample = if k + 1 < crit.len() {
            let (head, tail) = crit.split_at_mut(k + 1);
            between(&mut head[k].time, &mut tail[0].time)
        } else {
            t1.clone()
        };
        events.push(MotionEvent {
            time: crit[k].time.clone(),
            triple: crit[k].triple,
            direction,
        });
        snapshot_times.push(sample);
    }
    if events.is_empty() {
        snapshot_times.clear();
        snapshot_times.push(ms.interval().0);
    }
    let snapshots = snapshot_times
        .iter()
        .map(|t| Arrangement::build_oriented(ms.oriented_at(t)).map_err(MotionError::Snapshot))
        .collect::<Result<_, _>>()?;
    Ok(EventTimeline {
        events,
        snapshot_times,
        snapshots,
    })
}

/// The flip word of a motion, one line-addressed event per crossing.
pub fn event_word(ms: &MotionScript) -> Result<(EventTimeline, FlipWord), MotionError> {
    let tl = track_arrangement(ms)?;
    let word = FlipWord {
        events: tl.events.iter().map(MotionEvent::to_flip_event).collect(),
    };
    Ok((tl, word))
}
