//! Flip words and the relations they satisfy.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Color;
use crate::coherence::{Configuration, DotId, Element};
use crate::flip::{apply_flip, hexagon, Direction, FlipError};

/// Where a flip happens: a dot id, or the triangle bounded by three
/// arrangement lines (resolved through face labels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteAddress {
    Dot(DotId),
    Lines([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipEvent {
    pub site: SiteAddress,
    pub direction: Direction,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipWord {
    pub events: Vec<FlipEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("event {index} cannot be applied: {source}")]
    InapplicableEvent { index: usize, source: FlipError },
    #[error("lines {0:?} do not address a unique flip site")]
    UnresolvedSite([usize; 3]),
    #[error("flip supports overlap at dots {0:?}")]
    OverlappingSupports(Vec<DotId>),
    #[error("not an octogon pattern: {0}")]
    NotAnOctogonPattern(String),
    #[error("words act differently on seed {seed}")]
    Mismatch { seed: usize },
    #[error("seed {seed}: {source}")]
    OnSeed { seed: usize, source: Box<RelationError> },
}

/// Lines of the three face labels around a degree-three dot.
pub fn site_triple(c: &Configuration, id: DotId) -> Option<[usize; 3]> {
    let hex = hexagon(c, id).ok()?;
    let mut lines = BTreeSet::new();
    for f in hex.faces {
        let (i, j) = c.faces[f].label?;
        lines.insert(i);
        lines.insert(j);
    }
    let v: Vec<usize> = lines.into_iter().collect();
    v.try_into().ok()
}

pub fn resolve(c: &Configuration, site: &SiteAddress) -> Result<DotId, RelationError> {
    match site {
        SiteAddress::Dot(id) => Ok(*id),
        SiteAddress::Lines(t) => {
            let mut want = *t;
            want.sort();
            let hits: Vec<DotId> = c
                .dots
                .keys()
                .copied()
                .filter(|&id| c.degree(id) == 3 && site_triple(c, id) == Some(want))
                .collect();
            match hits[..] {
                [id] => Ok(id),
                _ => Err(RelationError::UnresolvedSite(*t)),
            }
        }
    }
}

/// Applies the events in order. Dot-addressed events must carry the
/// direction their center's color dictates; line-addressed events take it
/// from the resolved center.
pub fn apply_word(c: &Configuration, word: &FlipWord) -> Result<Configuration, RelationError> {
    let mut cur = c.clone();
    for (index, ev) in word.events.iter().enumerate() {
        let wrap = |source| RelationError::InapplicableEvent { index, source };
        let id = resolve(&cur, &ev.site)?;
        let dir = match ev.site {
            SiteAddress::Dot(_) => ev.direction,
            SiteAddress::Lines(_) => Direction::for_center(cur.dots[&id].color),
        };
        cur = apply_flip(&cur, id, dir).map_err(wrap)?;
    }
    Ok(cur)
}

/// Words addressed by lines, rewritten against the dot ids they resolve
/// to when applied to `c`.
pub fn to_dot_word(c: &Configuration, word: &FlipWord) -> Result<FlipWord, RelationError> {
    let mut cur = c.clone();
    let mut out = FlipWord::default();
    for (index, ev) in word.events.iter().enumerate() {
        let id = resolve(&cur, &ev.site)?;
        let dir = Direction::for_center(cur.dots[&id].color);
        cur = apply_flip(&cur, id, dir).map_err(|source| RelationError::InapplicableEvent { index, source })?;
        out.events.push(FlipEvent {
            site: SiteAddress::Dot(id),
            direction: dir,
        });
    }
    Ok(out)
}

fn canonical_face(c: [DotId; 4]) -> [DotId; 4] {
    // black corners sit at even positions; keep that while rotating/reflecting
    let mut best = c;
    for k in [0, 2] {
        let mut r = c;
        r.rotate_left(k);
        let rev = [r[0], r[3], r[2], r[1]];
        best = best.min(r).min(rev);
    }
    best
}

fn face_set(c: &Configuration, map: &BTreeMap<DotId, DotId>) -> Option<Vec<[DotId; 4]>> {
    let mut v: Vec<[DotId; 4]> = c
        .faces
        .iter()
        .map(|f| {
            let m = f.corners.map(|x| map.get(&x).copied());
            m.iter().all(Option::is_some).then(|| canonical_face(m.map(|x| x.expect("mapped"))))
        })
        .collect::<Option<_>>()?;
    v.sort();
    Some(v)
}

const EXHAUSTIVE_LIMIT: usize = 8;

/// Equality up to renaming dots: same colors, same elements, same faces.
pub fn configurations_equal(a: &Configuration, b: &Configuration) -> bool {
    if a.dots.len() != b.dots.len() || a.faces.len() != b.faces.len() {
        return false;
    }
    let key = |c: &Configuration, id: DotId| (c.dots[&id].color, c.element(id).cloned());
    let mut groups_a: BTreeMap<(Color, Option<Element>), Vec<DotId>> = BTreeMap::new();
    let mut groups_b: BTreeMap<(Color, Option<Element>), Vec<DotId>> = BTreeMap::new();
    for &id in a.dots.keys() {
        groups_a.entry(key(a, id)).or_default().push(id);
    }
    for &id in b.dots.keys() {
        groups_b.entry(key(b, id)).or_default().push(id);
    }
    if groups_a.len() != groups_b.len() || groups_a.iter().zip(&groups_b).any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len()) {
        return false;
    }
    let mut map = BTreeMap::new();
    let mut loose = Vec::new();
    for (k, va) in &groups_a {
        let vb = &groups_b[k];
        if va.len() == 1 {
            map.insert(va[0], vb[0]);
        } else {
            // several dots share an element; matched below
            loose.push((va.clone(), vb.clone()));
        }
    }
    let target = match face_set(b, &b.dots.keys().map(|&k| (k, k)).collect()) {
        Some(t) => t,
        None => return false,
    };
    if loose.is_empty() {
        return face_set(a, &map).as_ref() == Some(&target);
    }
    if loose.iter().map(|(v, _)| v.len()).sum::<usize>() > EXHAUSTIVE_LIMIT {
        // fall back to matching identical ids and provenances
        for (va, vb) in &loose {
            for &x in va {
                let y = vb
                    .iter()
                    .copied()
                    .find(|&y| y == x && a.dots[&x].provenance == b.dots[&y].provenance)
                    .or_else(|| {
                        vb.iter()
                            .copied()
                            .find(|&y| a.dots[&x].provenance.is_some() && a.dots[&x].provenance == b.dots[&y].provenance)
                    });
                match y {
                    Some(y) => {
                        map.insert(x, y);
                    }
                    None => return false,
                }
            }
        }
        return face_set(a, &map).as_ref() == Some(&target);
    }
    search(a, &loose, 0, &mut map, &target)
}

fn search(
    a: &Configuration,
    loose: &[(Vec<DotId>, Vec<DotId>)],
    g: usize,
    map: &mut BTreeMap<DotId, DotId>,
    target: &[[DotId; 4]],
) -> bool {
    let Some((va, vb)) = loose.get(g) else {
        return face_set(a, map).as_deref() == Some(target);
    };
    permute(vb.clone(), 0, &mut |perm| {
        for (x, y) in va.iter().zip(perm) {
            map.insert(*x, *y);
        }
        search(a, loose, g + 1, map, target)
    })
}

fn permute(mut v: Vec<DotId>, k: usize, f: &mut dyn FnMut(&[DotId]) -> bool) -> bool {
    if k == v.len() {
        return f(&v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permute(v.clone(), k + 1, f) {
            return true;
        }
        v.swap(k, i);
    }
    false
}

/// Flipping at `dot` and then back at the fresh center restores `c`.
pub fn check_involution(c: &Configuration, dot: DotId) -> Result<bool, RelationError> {
    let dir = Direction::for_center(c.dots.get(&dot).map_or(Color::Black, |d| d.color));
    let word = FlipWord {
        events: vec![FlipEvent {
            site: SiteAddress::Dot(dot),
            direction: dir,
        }],
    };
    let once = apply_word(c, &word)?;
    let fresh = c.next_id();
    let back = apply_flip(&once, fresh, dir.inverse())
        .map_err(|source| RelationError::InapplicableEvent { index: 1, source })?;
    Ok(configurations_equal(c, &back))
}

/// Flips at two sites with disjoint supports commute.
pub fn check_commutation(c: &Configuration, d1: DotId, d2: DotId) -> Result<bool, RelationError> {
    let s1 = hexagon(c, d1).map_err(|source| RelationError::InapplicableEvent { index: 0, source })?.support();
    let s2 = hexagon(c, d2).map_err(|source| RelationError::InapplicableEvent { index: 1, source })?.support();
    let shared: Vec<DotId> = s1.intersection(&s2).copied().collect();
    if !shared.is_empty() {
        return Err(RelationError::OverlappingSupports(shared));
    }
    let ev = |d: DotId| FlipEvent {
        site: SiteAddress::Dot(d),
        direction: Direction::for_center(c.dots[&d].color),
    };
    let ab = apply_word(c, &FlipWord { events: vec![ev(d1), ev(d2)] })?;
    let ba = apply_word(c, &FlipWord { events: vec![ev(d2), ev(d1)] })?;
    Ok(configurations_equal(&ab, &ba))
}

/// Checks the shape of an octogon word on `c` (eight flips; with labels,
/// the four triples of one four-line set, each twice) and that applying it
/// returns to `c`.
pub fn check_octogon(c: &Configuration, word: &FlipWord) -> Result<bool, RelationError> {
    if word.events.len() != 8 {
        return Err(RelationError::NotAnOctogonPattern(format!("{} events, expected 8", word.events.len())));
    }
    let mut cur = c.clone();
    let mut triples: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut labelled = true;
    for (index, ev) in word.events.iter().enumerate() {
        let id = resolve(&cur, &ev.site)?;
        match site_triple(&cur, id) {
            Some(t) => *triples.entry(t).or_default() += 1,
            None => labelled = false,
        }
        let dir = match ev.site {
            SiteAddress::Dot(_) => ev.direction,
            SiteAddress::Lines(_) => Direction::for_center(cur.dots.get(&id).map_or(Color::Black, |d| d.color)),
        };
        cur = apply_flip(&cur, id, dir).map_err(|source| RelationError::InapplicableEvent { index, source })?;
    }
    if labelled {
        let lines: BTreeSet<usize> = triples.keys().flatten().copied().collect();
        if lines.len() != 4 || triples.len() != 4 || triples.values().any(|&k| k != 2) {
            return Err(RelationError::NotAnOctogonPattern(format!("triples {triples:?}")));
        }
    }
    Ok(configurations_equal(c, &cur))
}

/// Both words are applicable to every seed and give equal results.
pub fn words_equal_action(seeds: &[Configuration], w1: &FlipWord, w2: &FlipWord) -> Result<(), RelationError> {
    for (seed, c) in seeds.iter().enumerate() {
        let on = |e: RelationError| RelationError::OnSeed { seed, source: Box::new(e) };
        let a = apply_word(c, w1).map_err(on)?;
        let b = apply_word(c, w2).map_err(on)?;
        if !configurations_equal(&a, &b) {
            return Err(RelationError::Mismatch { seed });
        }
    }
    Ok(())
}
