//! Constructive generator for coherent configurations.
//!
//! For a tile `(A, ell, B, m)` with fixed homogeneous representatives,
//! `det(A, B, ell x m) = (A.ell)(B.m) - (A.m)(B.ell)`. Choosing
//! representatives with `p.q = 1` for every black/white pair joined by a
//! dual edge therefore makes every tile coherent and rules out every
//! corner incidence. Those conditions are linear in each element once its
//! neighbours are fixed, so dots are assigned one at a time in reverse
//! degeneracy order: each new dot then sees at most three assigned
//! neighbours and is found by solving a 3x3 rational system, with random
//! rows filling in the free directions.
//!
//! The right-hand sides need not all be `1`: any `+-1` edge signs whose
//! product around every face is `1` work as well. On the projective plane
//! there are two such classes up to rescaling. The trivial one forces many
//! elements to coincide (for four lines, all four points), so when region
//! sign vectors are available the nontrivial class is used: `-1` exactly on
//! edges whose normalized sign vectors differ in more than one entry, i.e.
//! where the chosen sphere lifts of the two regions are not adjacent.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::arrangement::{Color, DualGraph};
use crate::coherence::{Configuration, DotId, Element};
use crate::exact::{clear_denominators, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("dot {dot} sees {neighbours} assigned neighbours; the cycle through it cannot be closed")]
    CycleNotClosed { dot: DotId, neighbours: usize },
    #[error("face {face} is not coherent after assignment")]
    Incoherent { face: usize },
    #[error("no assignment with pairwise distinct elements after {0} attempts")]
    Degenerate(usize),
}

const ATTEMPTS: usize = 64;
const COORD: i64 = 9;

type Vec3 = [Rational; 3];

/// Distinct dots joined to `id` by a side of some face.
pub(crate) fn neighbours(c: &Configuration, id: DotId) -> BTreeSet<DotId> {
    let mut out = BTreeSet::new();
    for f in &c.faces {
        for k in 0..4 {
            if f.corners[k] == id {
                out.insert(f.corners[(k + 1) % 4]);
                out.insert(f.corners[(k + 3) % 4]);
            }
        }
    }
    out.remove(&id);
    out
}

/// Reverse of the order obtained by repeatedly deleting a minimum-degree
/// dot, ties broken by id.
fn degeneracy_order(c: &Configuration) -> Vec<DotId> {
    let mut adj: BTreeMap<DotId, BTreeSet<DotId>> =
        c.dots.keys().map(|&id| (id, neighbours(c, id))).collect();
    let mut removed = Vec::with_capacity(adj.len());
    while !adj.is_empty() {
        let (&id, _) = adj
            .iter()
            .min_by_key(|(id, nb)| (nb.len(), **id))
            .expect("nonempty");
        let nb = adj.remove(&id).expect("present");
        for x in nb {
            if let Some(s) = adj.get_mut(&x) {
                s.remove(&id);
            }
        }
        removed.push(id);
    }
    removed.reverse();
    removed
}

fn det(m: &[Vec3; 3]) -> Rational {
    let [a, b, c] = m;
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Cramer's rule; `None` when singular.
fn solve3(rows: &[Vec3; 3], rhs: &[Rational; 3]) -> Option<Vec3> {
    let d = det(rows);
    if d.is_zero() {
        return None;
    }
    let mut out: Vec3 = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (col, o) in out.iter_mut().enumerate() {
        let mut m = rows.clone();
        for r in 0..3 {
            m[r][col] = rhs[r].clone();
        }
        *o = det(&m) / &d;
    }
    Some(out)
}

fn random_vec<R: Rng>(rng: &mut R) -> Vec3 {
    [0; 3].map(|_| Rational::from_integer(rng.gen_range(-COORD..=COORD).into()))
}

/// Edge sign between two adjacent dots (see module docs).
fn edge_sign(c: &Configuration, a: DotId, b: DotId) -> Rational {
    let (Some(sa), Some(sb)) = (&c.dots[&a].label, &c.dots[&b].label) else {
        return Rational::one();
    };
    if sa.len() < 3 {
        // with two lines the two classes cannot be told apart edge by edge
        return Rational::one();
    }
    let differ = sa.iter().zip(sb).filter(|(x, y)| x != y).count();
    if differ == 1 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn dot3(a: &Vec3, b: &Vec3) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// A coherent configuration on the given dual graph with pairwise distinct
/// elements.
pub fn seed_configuration<R: Rng>(dual: &DualGraph, rng: &mut R) -> Result<Configuration, SeedError> {
    seed_on(&Configuration::from_dual(dual), rng)
}

/// Fills every dot of `template`; existing assignments are discarded.
pub fn seed_on<R: Rng>(template: &Configuration, rng: &mut R) -> Result<Configuration, SeedError> {
    let order = degeneracy_order(template);
    let nbrs: BTreeMap<DotId, BTreeSet<DotId>> =
        template.dots.keys().map(|&id| (id, neighbours(template, id))).collect();

    let mut last_err = SeedError::Degenerate(ATTEMPTS);
    'attempt: for _ in 0..ATTEMPTS {
        let mut vecs: BTreeMap<DotId, Vec3> = BTreeMap::new();
        for &id in &order {
            let (fixed, signs): (Vec<Vec3>, Vec<Rational>) = nbrs[&id]
                .iter()
                .filter_map(|x| vecs.get(x).map(|v| (v.clone(), edge_sign(template, id, *x))))
                .unzip();
            if fixed.len() > 3 {
                // over-determined: all four or more conditions must agree
                let rows = [fixed[0].clone(), fixed[1].clone(), fixed[2].clone()];
                let rhs = [signs[0].clone(), signs[1].clone(), signs[2].clone()];
                let Some(v) = solve3(&rows, &rhs) else {
                    continue 'attempt;
                };
                if fixed[3..].iter().zip(&signs[3..]).any(|(r, s)| dot3(r, &v) != *s) {
                    return Err(SeedError::CycleNotClosed { dot: id, neighbours: fixed.len() });
                }
                vecs.insert(id, v);
                continue;
            }
            let mut solved = None;
            for _ in 0..16 {
                let mut rows: Vec<Vec3> = fixed.clone();
                let mut rhs: Vec<Rational> = signs.clone();
                while rows.len() < 3 {
                    rows.push(random_vec(rng));
                    rhs.push(Rational::from_integer(rng.gen_range(-COORD..=COORD).into()));
                }
                let rows: [Vec3; 3] = rows.try_into().expect("three rows");
                let rhs: [Rational; 3] = rhs.try_into().expect("three values");
                if let Some(v) = solve3(&rows, &rhs).filter(|v| v.iter().any(|x| !x.is_zero())) {
                    solved = Some(v);
                    break;
                }
            }
            match solved {
                Some(v) => {
                    vecs.insert(id, v);
                }
                None => continue 'attempt,
            }
        }

        let mut c = template.clone();
        for (id, v) in &vecs {
            let t = clear_denominators(v).expect("nonzero");
            let e = match c.dots[id].color {
                Color::Black => Element::Point(crate::exact::ProjPoint::from_triple(t).expect("nonzero")),
                Color::White => Element::Line(crate::exact::ProjLine::from_triple(t).expect("nonzero")),
            };
            c.dots.get_mut(id).expect("dot").element = Some(e);
        }
        match c.validate() {
            Ok(r) if !r.is_coherent() => {
                last_err = SeedError::Incoherent { face: r.failures[0].face };
                continue;
            }
            Err(_) => continue,
            Ok(_) => {}
        }
        let mut seen = BTreeSet::new();
        if c.dots.values().all(|d| seen.insert(d.element.clone())) {
            return Ok(c);
        }
    }
    Err(last_err)
}
