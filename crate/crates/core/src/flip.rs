//! Desargues flips.
//!
//! A flip site is a dot of degree three. Its three faces form a hexagon:
//! the center, three neighbours `N[i]` of the opposite color, and three
//! outer corners `O[i]` of the center's color, where `O[i]` shares a face
//! with `N[i]` and `N[i+1]`.
//!
//! When the center is a point `P`, the neighbours are lines and the outer
//! corners are points. The vertices `N[i] ^ N[i+1]` form a triangle that is
//! in perspective from `P` with the triangle of outer points (coherence of
//! the three faces says exactly that). The flip replaces `P` by the axis of
//! that perspectivity, and the new center is adjacent to the outer corners.
//! The line-centered flip is the same construction in the dual plane.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Color;
use crate::coherence::{Configuration, Dot, DotId, Element, Face, Provenance, ValidationReport};
use crate::exact::{collinear, incident, join, meet, ProjLine, ProjPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    PointToLine,
    LineToPoint,
}

impl Direction {
    pub fn inverse(self) -> Direction {
        match self {
            Direction::PointToLine => Direction::LineToPoint,
            Direction::LineToPoint => Direction::PointToLine,
        }
    }

    /// Direction of a flip centered at a dot of the given color.
    pub fn for_center(color: Color) -> Direction {
        match color {
            Color::Black => Direction::PointToLine,
            Color::White => Direction::LineToPoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("dot {dot} is not a flip site: {reason}")]
    NotAFlipSite { dot: DotId, reason: String },
    #[error("degenerate perspective site: {0}")]
    DegenerateSite(String),
    #[error("corresponding sides coincide; the axis is undetermined")]
    SideLinesCoincide,
    #[error("flip result failed coherence validation: {0:?}")]
    IncoherentResult(ValidationReport),
}

/// Two triangles in perspective from `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSite {
    pub center: ProjPoint,
    pub rays: [ProjLine; 3],
    pub triangle1: [ProjPoint; 3],
    pub triangle2: [ProjPoint; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipResult {
    pub axis: ProjLine,
    /// `AB ^ A'B'`, `BC ^ B'C'`, `CA ^ C'A'`.
    pub axis_points: [ProjPoint; 3],
}

fn degenerate(msg: &str) -> FlipError {
    FlipError::DegenerateSite(msg.to_string())
}

impl FlipSite {
    /// Checks the perspectivity and derives the rays.
    pub fn new(center: ProjPoint, triangle1: [ProjPoint; 3], triangle2: [ProjPoint; 3]) -> Result<FlipSite, FlipError> {
        if triangle1.iter().chain(&triangle2).any(|v| *v == center) {
            return Err(degenerate("a triangle vertex coincides with the center"));
        }
        let [a, b, c] = &triangle1;
        let [a2, b2, c2] = &triangle2;
        if collinear(a, b, c) || collinear(a2, b2, c2) {
            return Err(degenerate("a triangle is flat"));
        }
        let rays = [0, 1, 2].map(|i| join(&center, &triangle1[i]).expect("vertex differs from center"));
        for i in 0..3 {
            if !incident(&triangle2[i], &rays[i]) {
                return Err(degenerate("triangles are not in perspective from the center"));
            }
        }
        if rays[0] == rays[1] || rays[1] == rays[2] || rays[0] == rays[2] {
            return Err(degenerate("two rays coincide"));
        }
        Ok(FlipSite {
            center,
            rays,
            triangle1,
            triangle2,
        })
    }
}

/// Axis of perspectivity of a site. Collinearity of the three side
/// intersections is verified, not assumed.
pub fn desargues_axis(site: &FlipSite) -> Result<FlipResult, FlipError> {
    let t = &site.triangle1;
    let u = &site.triangle2;
    let mut pts = Vec::with_capacity(3);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let side = join(&t[i], &t[j]).map_err(|_| degenerate("triangle1 has repeated vertices"))?;
        let side2 = join(&u[i], &u[j]).map_err(|_| degenerate("triangle2 has repeated vertices"))?;
        pts.push(meet(&side, &side2).map_err(|_| FlipError::SideLinesCoincide)?);
    }
    let axis_points: [ProjPoint; 3] = pts.try_into().expect("three points");
    let [x, y, z] = &axis_points;
    if !collinear(x, y, z) {
        return Err(degenerate("side intersections are not collinear"));
    }
    let axis = join(x, y)
        .or_else(|_| join(y, z))
        .or_else(|_| join(x, z))
        .map_err(|_| degenerate("all side intersections coincide"))?;
    Ok(FlipResult { axis, axis_points })
}

/// The three faces around a degree-three dot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hexagon {
    pub center: DotId,
    pub neighbours: [DotId; 3],
    /// `outer[i]` shares a face with `neighbours[i]` and `neighbours[i+1]`.
    pub outer: [DotId; 3],
    pub faces: [usize; 3],
}

impl Hexagon {
    pub fn boundary(&self) -> Vec<DotId> {
        let mut b: Vec<DotId> = self.neighbours.iter().chain(&self.outer).copied().collect();
        b.sort();
        b
    }

    /// Center and boundary.
    pub fn support(&self) -> BTreeSet<DotId> {
        let mut s: BTreeSet<DotId> = self.boundary().into_iter().collect();
        s.insert(self.center);
        s
    }
}

fn not_site(dot: DotId, reason: &str) -> FlipError {
    FlipError::NotAFlipSite {
        dot,
        reason: reason.to_string(),
    }
}

pub fn hexagon(c: &Configuration, id: DotId) -> Result<Hexagon, FlipError> {
    if !c.dots.contains_key(&id) {
        return Err(not_site(id, "unknown dot"));
    }
    let faces = c.faces_at(id);
    if faces.len() != 3 || c.degree(id) != 3 {
        return Err(not_site(id, &format!("degree {} is not 3", c.degree(id))));
    }
    let mut parts = Vec::with_capacity(3);
    for &f in &faces {
        let k = c.faces[f].corners.iter().position(|&x| x == id).expect("corner");
        let cs = c.faces[f].corners;
        parts.push((f, cs[(k + 1) % 4], cs[(k + 2) % 4], cs[(k + 3) % 4]));
    }
    // chain the faces so consecutive ones share a neighbour
    let (f0, a, o0, b) = parts[0];
    let find = |n: DotId, skip: usize| {
        parts
            .iter()
            .find(|p| p.0 != skip && (p.1 == n || p.3 == n))
            .copied()
    };
    let Some((f1, x1, o1, y1)) = find(b, f0) else {
        return Err(not_site(id, "faces do not close up around the dot"));
    };
    let c2 = if x1 == b { y1 } else { x1 };
    let Some((f2, x2, o2, y2)) = find(c2, f1).filter(|p| p.0 != f0) else {
        return Err(not_site(id, "faces do not close up around the dot"));
    };
    let back = if x2 == c2 { y2 } else { x2 };
    if back != a {
        return Err(not_site(id, "faces do not close up around the dot"));
    }
    let hex = Hexagon {
        center: id,
        neighbours: [a, b, c2],
        outer: [o0, o1, o2],
        faces: [f0, f1, f2],
    };
    if hex.support().len() != 7 {
        return Err(not_site(id, "hexagon corners are not distinct"));
    }
    Ok(hex)
}

/// Builds the perspective site for a hexagon, read in the dual plane when
/// the center is a line.
fn site_for(c: &Configuration, hex: &Hexagon) -> Result<(Direction, FlipSite), FlipError> {
    let dir = Direction::for_center(c.dots[&hex.center].color);
    let el = |id: DotId| {
        c.element(id)
            .cloned()
            .ok_or_else(|| not_site(hex.center, &format!("dot {id} is unassigned")))
    };
    let as_point = |e: Element| match e {
        Element::Point(p) => p,
        Element::Line(l) => l.dual(),
    };
    let as_line = |e: Element| match e {
        Element::Line(l) => l,
        Element::Point(p) => p.dual(),
    };
    let center = as_point(el(hex.center)?);
    let ns: Vec<ProjLine> = hex.neighbours.iter().map(|&n| el(n).map(as_line)).collect::<Result<_, _>>()?;
    let os: Vec<ProjPoint> = hex.outer.iter().map(|&o| el(o).map(as_point)).collect::<Result<_, _>>()?;
    let mut t1 = Vec::with_capacity(3);
    for i in 0..3 {
        t1.push(meet(&ns[i], &ns[(i + 1) % 3]).map_err(|_| degenerate("two neighbour lines coincide"))?);
    }
    let t1: [ProjPoint; 3] = t1.try_into().expect("three");
    let t2: [ProjPoint; 3] = os.try_into().expect("three");
    Ok((dir, FlipSite::new(center, t1, t2)?))
}

/// The perspective site at a dot, as a point-centered site (dualized when
/// the dot carries a line).
pub fn flip_site(c: &Configuration, id: DotId) -> Result<(Direction, FlipSite), FlipError> {
    site_for(c, &hexagon(c, id)?)
}

/// Flips the configuration at `site_dot`. The new center gets a fresh id
/// and records the hexagon boundary as its provenance.
pub fn apply_flip(c: &Configuration, site_dot: DotId, direction: Direction) -> Result<Configuration, FlipError> {
    let hex = hexagon(c, site_dot)?;
    let (dir, site) = site_for(c, &hex)?;
    if dir != direction {
        return Err(not_site(site_dot, &format!("center color requires {dir:?}")));
    }
    let result = desargues_axis(&site)?;
    let (element, color) = match dir {
        Direction::PointToLine => (Element::Line(result.axis), Color::White),
        Direction::LineToPoint => (Element::Point(result.axis.dual()), Color::Black),
    };

    let old = &c.dots[&site_dot];
    let triple: Option<BTreeSet<usize>> = hex
        .faces
        .iter()
        .map(|&f| c.faces[f].label.map(|(i, j)| [i, j]))
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect());
    let label = match (&old.label, &triple) {
        (Some(s), Some(t)) if t.len() == 3 => {
            let mut s = s.clone();
            for &k in t {
                s[k] = -s[k];
            }
            if s.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                s.iter_mut().for_each(|x| *x = -*x);
            }
            Some(s)
        }
        _ => None,
    };

    let new_id = c.next_id();
    let mut out = c.clone();
    out.dots.remove(&site_dot);
    out.dots.insert(
        new_id,
        Dot {
            color,
            element: Some(element),
            label,
            provenance: Some(Provenance { site: hex.boundary() }),
        },
    );
    let mut removed = hex.faces;
    removed.sort();
    let old_labels = hex.faces.map(|f| c.faces[f].label);
    for &f in removed.iter().rev() {
        out.faces.remove(f);
    }
    for i in 0..3 {
        let (prev, n, next) = (hex.outer[(i + 2) % 3], hex.neighbours[i], hex.outer[i]);
        let corners = match color {
            Color::Black => [new_id, prev, n, next],
            Color::White => [prev, n, next, new_id],
        };
        out.faces.push(Face {
            corners,
            // the face not containing neighbour i
            label: old_labels[(i + 1) % 3],
        });
    }

    let report = out.validate().map_err(|_| FlipError::IncoherentResult(ValidationReport::default()))?;
    if !report.is_coherent() {
        return Err(FlipError::IncoherentResult(report));
    }
    Ok(out)
}

/// Every dot at which a flip applies, with its direction.
pub fn find_flip_sites(c: &Configuration) -> Vec<(DotId, Direction)> {
    c.dots
        .iter()
        .filter(|(&id, _)| c.degree(id) == 3)
        .filter_map(|(&id, d)| {
            let dir = Direction::for_center(d.color);
            apply_flip(c, id, dir).ok().map(|_| (id, dir))
        })
        .collect()
}
