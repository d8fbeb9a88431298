//! Tiles, the coherence predicate, and point/line configurations on a
//! bicolored quadrangulation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Color, DualGraph, SignVector};
use crate::exact::{incident, join, meet, ProjLine, ProjPoint};

pub type DotId = u64;

/// A point sits on a black dot, a line on a white dot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Point(ProjPoint),
    Line(ProjLine),
}

impl Element {
    pub fn color(&self) -> Color {
        match self {
            Element::Point(_) => Color::Black,
            Element::Line(_) => Color::White,
        }
    }

    pub fn as_point(&self) -> Option<&ProjPoint> {
        match self {
            Element::Point(p) => Some(p),
            Element::Line(_) => None,
        }
    }

    pub fn as_line(&self) -> Option<&ProjLine> {
        match self {
            Element::Line(l) => Some(l),
            Element::Point(_) => None,
        }
    }
}

/// Corners `A, ell, B, m` in clockwise order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub a: ProjPoint,
    pub ell: ProjLine,
    pub b: ProjPoint,
    pub m: ProjLine,
}

/// Which clause of the coherence definition a tile violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TileFailure {
    /// A point corner lies on a line corner.
    Incidence,
    /// `(AB)` misses `ell ^ m`.
    MeetJoin,
}

impl Tile {
    pub fn new(a: ProjPoint, ell: ProjLine, b: ProjPoint, m: ProjLine) -> Tile {
        Tile { a, ell, b, m }
    }

    /// The same tile read from the opposite corner.
    pub fn rotated(&self) -> Tile {
        Tile::new(self.b.clone(), self.m.clone(), self.a.clone(), self.ell.clone())
    }

    pub fn failure(&self) -> Option<TileFailure> {
        let Tile { a, ell, b, m } = self;
        if incident(a, ell) || incident(a, m) || incident(b, ell) || incident(b, m) {
            return Some(TileFailure::Incidence);
        }
        if a == b || ell == m {
            return None;
        }
        let x = meet(ell, m).expect("ell != m");
        let ab = join(a, b).expect("a != b");
        if incident(&x, &ab) {
            None
        } else {
            Some(TileFailure::MeetJoin)
        }
    }
}

pub fn is_coherent_tile(t: &Tile) -> bool {
    t.failure().is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoherenceError {
    #[error("point is incident to one of the lines")]
    IncidentInput,
    #[error("the two lines coincide")]
    CoincidentLines,
    #[error("dot {0} has no assigned element")]
    MissingAssignment(DotId),
    #[error("dot {0} carries an element of the wrong color")]
    ColorMismatch(DotId),
    #[error("face {0} references unknown dot {1}")]
    UnknownDot(usize, DotId),
    #[error("face {0} does not alternate black and white corners")]
    BadFace(usize),
}

/// The line on which every coherent partner `B != A` of `(A, ell, _, m)`
/// must lie.
pub fn coherent_partner_locus(
    a: &ProjPoint,
    ell: &ProjLine,
    m: &ProjLine,
) -> Result<ProjLine, CoherenceError> {
    if incident(a, ell) || incident(a, m) {
        return Err(CoherenceError::IncidentInput);
    }
    let x = meet(ell, m).map_err(|_| CoherenceError::CoincidentLines)?;
    Ok(join(a, &x).expect("a is off ell, so a != ell ^ m"))
}

/// Records which flip created a dot: the sorted ids of the six hexagon
/// boundary dots around the site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Provenance {
    pub site: Vec<DotId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dot {
    pub color: Color,
    pub element: Option<Element>,
    /// Region sign vector when the dot comes from an arrangement.
    pub label: Option<SignVector>,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Corners in cyclic order, black first.
    pub corners: [DotId; 4],
    /// Pair of arrangement lines meeting at the dual vertex, when known.
    pub label: Option<(usize, usize)>,
}

/// A bicolored quadrangulation with points on black dots and lines on
/// white dots.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Configuration {
    pub dots: BTreeMap<DotId, Dot>,
    pub faces: Vec<Face>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceFailure {
    pub face: usize,
    pub corners: [DotId; 4],
    pub clause: TileFailure,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<FaceFailure>,
}

impl ValidationReport {
    pub fn is_coherent(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Configuration {
    /// Unassigned configuration on the dots and faces of a dual graph.
    /// Dot ids are region indices.
    pub fn from_dual(dual: &DualGraph) -> Configuration {
        let dots = dual
            .dots
            .iter()
            .enumerate()
            .map(|(k, d)| {
                (
                    k as DotId,
                    Dot {
                        color: d.color,
                        element: None,
                        label: Some(d.signs.clone()),
                        provenance: None,
                    },
                )
            })
            .collect();
        let faces = dual
            .faces
            .iter()
            .map(|f| Face {
                corners: f.corners.map(|c| c as DotId),
                label: Some(f.lines),
            })
            .collect();
        Configuration { dots, faces }
    }

    pub fn assign(&mut self, id: DotId, element: Element) -> Result<(), CoherenceError> {
        let dot = self.dots.get_mut(&id).ok_or(CoherenceError::MissingAssignment(id))?;
        if dot.color != element.color() {
            return Err(CoherenceError::ColorMismatch(id));
        }
        dot.element = Some(element);
        Ok(())
    }

    pub fn element(&self, id: DotId) -> Option<&Element> {
        self.dots.get(&id).and_then(|d| d.element.as_ref())
    }

    pub fn point(&self, id: DotId) -> Result<&ProjPoint, CoherenceError> {
        self.element(id)
            .ok_or(CoherenceError::MissingAssignment(id))?
            .as_point()
            .ok_or(CoherenceError::ColorMismatch(id))
    }

    pub fn line(&self, id: DotId) -> Result<&ProjLine, CoherenceError> {
        self.element(id)
            .ok_or(CoherenceError::MissingAssignment(id))?
            .as_line()
            .ok_or(CoherenceError::ColorMismatch(id))
    }

    /// Number of face corners at a dot, which equals its degree in a
    /// closed quadrangulation.
    pub fn degree(&self, id: DotId) -> usize {
        self.faces
            .iter()
            .flat_map(|f| f.corners.iter())
            .filter(|&&c| c == id)
            .count()
    }

    pub fn faces_at(&self, id: DotId) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&k| self.faces[k].corners.contains(&id))
            .collect()
    }

    /// Dual edges recovered from face sides; each edge is seen from its two
    /// faces, so sides are counted once per pair.
    pub fn edge_count(&self) -> usize {
        self.faces.len() * 4 / 2
    }

    pub fn next_id(&self) -> DotId {
        self.dots.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn tile(&self, face: usize) -> Result<Tile, CoherenceError> {
        let f = &self.faces[face];
        for &c in &f.corners {
            if !self.dots.contains_key(&c) {
                return Err(CoherenceError::UnknownDot(face, c));
            }
        }
        let colors = f.corners.map(|c| self.dots[&c].color);
        if colors != [Color::Black, Color::White, Color::Black, Color::White] {
            return Err(CoherenceError::BadFace(face));
        }
        Ok(Tile::new(
            self.point(f.corners[0])?.clone(),
            self.line(f.corners[1])?.clone(),
            self.point(f.corners[2])?.clone(),
            self.line(f.corners[3])?.clone(),
        ))
    }

    /// Every face read as a tile must be coherent.
    pub fn validate(&self) -> Result<ValidationReport, CoherenceError> {
        for (&id, dot) in &self.dots {
            match &dot.element {
                None => return Err(CoherenceError::MissingAssignment(id)),
                Some(e) if e.color() != dot.color => return Err(CoherenceError::ColorMismatch(id)),
                Some(_) => {}
            }
        }
        let mut report = ValidationReport::default();
        for k in 0..self.faces.len() {
            if let Some(clause) = self.tile(k)?.failure() {
                report.failures.push(FaceFailure {
                    face: k,
                    corners: self.faces[k].corners,
                    clause,
                });
            }
        }
        Ok(report)
    }
}

pub fn validate_configuration(c: &Configuration) -> Result<ValidationReport, CoherenceError> {
    c.validate()
}
