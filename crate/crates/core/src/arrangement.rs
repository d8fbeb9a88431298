//! Cell complex of the real projective plane cut out by generic lines.
//!
//! The complex is traced on the sphere double cover: every line lifts to
//! a great circle, sphere vertices are ordered along each circle by exact
//! angular comparison, and sphere cells are identified by their sign
//! vectors against the oriented line coefficients. Antipodal cells are
//! merged by normalizing sign vectors so that the first entry is positive.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{concurrent, cross, dot, int, is_zero, primitive, sign, ProjLine, ProjPoint, Triple};

/// Signs of a cell against every line, normalized so the first nonzero
/// entry is `+1`. Entries are `-1`, `0` or `1`.
pub type SignVector = Vec<i8>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("need at least two lines, got {0}")]
    TooFewLines(usize),
    #[error("a line has an all-zero coefficient triple")]
    ZeroLine,
    #[error("lines are not generic: {0}")]
    NotGeneric(GenericityReport),
    #[error("region adjacency graph is not bipartite (odd cycle through region {region})")]
    NotBipartite { region: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub coincident: Vec<[usize; 2]>,
    pub concurrent: Vec<[usize; 3]>,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.coincident.is_empty() && self.concurrent.is_empty()
    }
}

impl std::fmt::Display for GenericityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for [i, j] in &self.coincident {
            parts.push(format!("lines {i} and {j} coincide"));
        }
        for [i, j, k] in &self.concurrent {
            parts.push(format!("lines {i}, {j}, {k} are concurrent"));
        }
        if parts.is_empty() {
            write!(f, "generic")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Reports every coincident pair and every concurrent triple of pairwise
/// distinct lines.
pub fn check_generic(lines: &[ProjLine]) -> GenericityReport {
    let n = lines.len();
    let mut report = GenericityReport::default();
    for i in 0..n {
        for j in i + 1..n {
            if lines[i] == lines[j] {
                report.coincident.push([i, j]);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let distinct = lines[i] != lines[j] && lines[j] != lines[k] && lines[i] != lines[k];
                if distinct && concurrent(&lines[i], &lines[j], &lines[k]) {
                    report.concurrent.push([i, j, k]);
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: ProjPoint,
    /// Indices of the two lines through this vertex, `lines.0 < lines.1`.
    pub lines: (usize, usize),
    /// Sphere lift: cross product of the two oriented line vectors.
    pub lift: Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub line: usize,
    pub ends: (usize, usize),
    /// Position of this arc along its line, in `0..n-1`.
    pub position: usize,
    /// The two regions on either side.
    pub regions: (usize, usize),
    /// Signs of the arc interior (zero at `line`).
    pub signs: SignVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub signs: SignVector,
    /// Bounding arcs in cyclic order.
    pub boundary: Vec<usize>,
    /// Corner vertices in cyclic order.
    pub corners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    lines: Vec<ProjLine>,
    oriented: Vec<Triple>,
    vertices: Vec<Vertex>,
    arcs: Vec<Arc>,
    regions: Vec<Region>,
    /// Regions around each vertex, counter-clockwise on the sphere lift.
    vertex_regions: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub vertices: usize,
    pub arcs: usize,
    pub regions: usize,
    pub euler: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<Color>,
}

impl Coloring {
    pub fn color(&self, region: usize) -> Color {
        self.colors[region]
    }

    pub fn swapped(&self) -> Coloring {
        Coloring {
            colors: self.colors.iter().map(|c| c.opposite()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDot {
    pub region: usize,
    pub color: Color,
    pub signs: SignVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualFace {
    pub vertex: usize,
    pub lines: (usize, usize),
    /// Dots around the vertex in clockwise order, starting at a black dot.
    pub corners: [usize; 4],
}

/// The bicolored quadrangulation dual to an arrangement.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub dots: Vec<DualDot>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<DualFace>,
}

fn normalize_signs(mut s: SignVector) -> SignVector {
    if s.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in s.iter_mut() {
            *x = -*x;
        }
    }
    s
}

fn neg(v: &Triple) -> Triple {
    v.clone().map(|x| -x)
}

fn add(a: &Triple, b: &Triple) -> Triple {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

/// Plane frame orthogonal to `axis`: `(u, axis x u)`, so that increasing
/// angle in `(x.u, x.w)` coordinates is counter-clockwise seen from `axis`.
fn frame(axis: &Triple) -> (Triple, Triple) {
    let basis = [
        [int(1), int(0), int(0)],
        [int(0), int(1), int(0)],
        [int(0), int(0), int(1)],
    ];
    let u = basis
        .iter()
        .map(|e| cross(axis, e))
        .find(|u| !is_zero(u))
        .expect("axis is nonzero");
    let w = cross(axis, &u);
    (u, w)
}

fn angle_cmp(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> Ordering {
    let half = |p: &(BigInt, BigInt)| -> u8 {
        if p.1.is_positive() || (p.1.is_zero() && p.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = &a.0 * &b.1 - &a.1 * &b.0;
        // positive cross means b is counter-clockwise of a
        BigInt::zero().cmp(&c)
    })
}

/// Indices of `dirs` sorted counter-clockwise around `axis`.
pub(crate) fn angular_order(axis: &Triple, dirs: &[Triple]) -> Vec<usize> {
    let (u, w) = frame(axis);
    let coords: Vec<(BigInt, BigInt)> = dirs.iter().map(|d| (dot(d, &u), dot(d, &w))).collect();
    let mut idx: Vec<usize> = (0..dirs.len()).collect();
    idx.sort_by(|&a, &b| angle_cmp(&coords[a], &coords[b]));
    idx
}

impl Arrangement {
    /// Builds the arrangement of canonical lines.
    pub fn build(lines: &[ProjLine]) -> Result<Arrangement, ArrangementError> {
        Self::build_oriented(lines.iter().map(|l| l.coords().clone()).collect())
    }

    /// Builds the arrangement keeping the given coefficient signs, which
    /// fixes the sign vectors used to label regions.
    pub fn build_oriented(oriented: Vec<Triple>) -> Result<Arrangement, ArrangementError> {
        let n = oriented.len();
        if n < 2 {
            return Err(ArrangementError::TooFewLines(n));
        }
        let oriented: Vec<Triple> = oriented.into_iter().map(primitive).collect();
        let lines: Vec<ProjLine> = oriented
            .iter()
            .map(|v| ProjLine::from_triple(v.clone()))
            .collect::<Result<_, _>>()
            .map_err(|_| ArrangementError::ZeroLine)?;
        let report = check_generic(&lines);
        if !report.is_generic() {
            return Err(ArrangementError::NotGeneric(report));
        }

        let mut vertices = Vec::new();
        let mut vertex_id = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let lift = cross(&oriented[i], &oriented[j]);
                vertex_id.insert((i, j), vertices.len());
                vertices.push(Vertex {
                    point: ProjPoint::from_triple(lift.clone()).expect("distinct lines"),
                    lines: (i, j),
                    lift,
                });
            }
        }
        let vid = |a: usize, b: usize| vertex_id[&(a.min(b), a.max(b))];

        let signs_at = |x: &Triple| -> SignVector { oriented.iter().map(|l| sign(&dot(l, x))).collect() };

        // Sphere arcs per line, then merged into projective arcs keyed by
        // (line, normalized interior signs).
        struct RawArc {
            line: usize,
            position: usize,
            ends: (usize, usize),
            signs: SignVector,
            sides: (SignVector, SignVector),
        }
        let mut raw_arcs: Vec<RawArc> = Vec::new();
        for (i, li) in oriented.iter().enumerate() {
            let mut pts: Vec<(usize, Triple)> = Vec::new();
            for j in (0..n).filter(|&j| j != i) {
                let v = vid(i, j);
                pts.push((v, vertices[v].lift.clone()));
                pts.push((v, neg(&vertices[v].lift)));
            }
            let dirs: Vec<Triple> = pts.iter().map(|p| p.1.clone()).collect();
            let order = angular_order(li, &dirs);
            // the second half of the circle is the antipodal copy
            for pos in 0..n - 1 {
                let (a, b) = (&pts[order[pos]], &pts[order[pos + 1]]);
                let mid = {
                    let s = add(&a.1, &b.1);
                    if is_zero(&s) {
                        cross(li, &a.1)
                    } else {
                        s
                    }
                };
                let mut interior = signs_at(&mid);
                interior[i] = 0;
                let mut plus = interior.clone();
                plus[i] = 1;
                let mut minus = interior.clone();
                minus[i] = -1;
                raw_arcs.push(RawArc {
                    line: i,
                    position: pos,
                    ends: (a.0, b.0),
                    signs: normalize_signs(interior),
                    sides: (normalize_signs(plus), normalize_signs(minus)),
                });
            }
        }

        let mut region_keys: Vec<SignVector> = raw_arcs
            .iter()
            .flat_map(|a| [a.sides.0.clone(), a.sides.1.clone()])
            .collect();
        region_keys.sort();
        region_keys.dedup();
        let region_index: BTreeMap<SignVector, usize> = region_keys
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();

        let mut arc_index: BTreeMap<(usize, SignVector), usize> = BTreeMap::new();
        let arcs: Vec<Arc> = raw_arcs
            .into_iter()
            .enumerate()
            .map(|(k, a)| {
                arc_index.insert((a.line, a.signs.clone()), k);
                Arc {
                    line: a.line,
                    ends: a.ends,
                    position: a.position,
                    regions: (region_index[&a.sides.0], region_index[&a.sides.1]),
                    signs: a.signs,
                }
            })
            .collect();

        let mut regions = Vec::with_capacity(region_keys.len());
        for key in &region_keys {
            let (corners, boundary) = trace_region(key, &oriented, &vertices, &arcs, &arc_index, &signs_at);
            regions.push(Region {
                signs: key.clone(),
                boundary,
                corners,
            });
        }

        let vertex_regions = vertices
            .iter()
            .map(|v| {
                let (i, j) = v.lines;
                let p = &v.lift;
                let mut a = cross(&oriented[j], p);
                if dot(&oriented[i], &a).is_negative() {
                    a = neg(&a);
                }
                let mut b = cross(&oriented[i], p);
                if dot(&oriented[j], &b).is_negative() {
                    b = neg(&b);
                }
                let quads = [(1i8, 1i8), (-1, 1), (-1, -1), (1, -1)];
                let dirs: Vec<Triple> = quads
                    .iter()
                    .map(|&(si, sj)| {
                        let sa = if si > 0 { a.clone() } else { neg(&a) };
                        let sb = if sj > 0 { b.clone() } else { neg(&b) };
                        add(&sa, &sb)
                    })
                    .collect();
                let base = signs_at(p);
                let order = angular_order(p, &dirs);
                let mut out = [0usize; 4];
                for (slot, &q) in order.iter().enumerate() {
                    let mut s = base.clone();
                    s[i] = quads[q].0;
                    s[j] = quads[q].1;
                    out[slot] = region_index[&normalize_signs(s)];
                }
                out
            })
            .collect();

        Ok(Arrangement {
            lines,
            oriented,
            vertices,
            arcs,
            regions,
            vertex_regions,
        })
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn oriented_lines(&self) -> &[Triple] {
        &self.oriented
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn vertex_regions(&self) -> &[[usize; 4]] {
        &self.vertex_regions
    }

    pub fn region_by_signs(&self, signs: &[i8]) -> Option<usize> {
        let key = normalize_signs(signs.to_vec());
        self.regions.binary_search_by(|r| r.signs.cmp(&key)).ok()
    }

    pub fn census(&self) -> Census {
        let (v, e, f) = (self.vertices.len(), self.arcs.len(), self.regions.len());
        Census {
            vertices: v,
            arcs: e,
            regions: f,
            euler: v as i64 - e as i64 + f as i64,
        }
    }

    /// Proper two-coloring of the region adjacency graph by breadth-first
    /// search from region 0, which is colored black.
    pub fn checkerboard_color(&self) -> Result<Coloring, ArrangementError> {
        let f = self.regions.len();
        let mut adj = vec![Vec::new(); f];
        for a in &self.arcs {
            adj[a.regions.0].push(a.regions.1);
            adj[a.regions.1].push(a.regions.0);
        }
        let mut colors: Vec<Option<Color>> = vec![None; f];
        colors[0] = Some(Color::Black);
        let mut queue = VecDeque::from([0usize]);
        while let Some(r) = queue.pop_front() {
            let c = colors[r].expect("queued regions are colored");
            for &s in &adj[r] {
                match colors[s] {
                    None => {
                        colors[s] = Some(c.opposite());
                        queue.push_back(s);
                    }
                    Some(cs) if cs == c => return Err(ArrangementError::NotBipartite { region: s }),
                    Some(_) => {}
                }
            }
        }
        Ok(Coloring {
            colors: colors.into_iter().map(|c| c.expect("complex is connected")).collect(),
        })
    }

    /// The dual bicolored quadrangulation: one dot per region, one edge per
    /// arc and one quadrilateral per vertex.
    pub fn dual_quadrangulation(&self, coloring: &Coloring) -> DualGraph {
        let dots = self
            .regions
            .iter()
            .enumerate()
            .map(|(k, r)| DualDot {
                region: k,
                color: coloring.color(k),
                signs: r.signs.clone(),
            })
            .collect();
        let edges = self.arcs.iter().map(|a| a.regions).collect();
        let faces = self
            .vertices
            .iter()
            .zip(&self.vertex_regions)
            .enumerate()
            .map(|(k, (v, ccw))| {
                let mut cw = *ccw;
                cw.reverse();
                if coloring.color(cw[0]) != Color::Black {
                    cw.rotate_left(1);
                }
                DualFace {
                    vertex: k,
                    lines: v.lines,
                    corners: cw,
                }
            })
            .collect();
        DualGraph { dots, edges, faces }
    }

    /// Regions bounded by exactly three arcs.
    pub fn triangular_regions(&self) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&k| self.regions[k].boundary.len() == 3)
            .collect()
    }
}

fn trace_region(
    key: &SignVector,
    oriented: &[Triple],
    vertices: &[Vertex],
    arcs: &[Arc],
    arc_index: &BTreeMap<(usize, SignVector), usize>,
    signs_at: &dyn Fn(&Triple) -> SignVector,
) -> (Vec<usize>, Vec<usize>) {
    let n = oriented.len();
    let mut corners: Vec<(usize, Triple)> = Vec::new();
    for (k, v) in vertices.iter().enumerate() {
        for x in [v.lift.clone(), neg(&v.lift)] {
            let s = signs_at(&x);
            let fits = (0..n)
                .filter(|&m| m != v.lines.0 && m != v.lines.1)
                .all(|m| s[m] == key[m]);
            if fits {
                corners.push((k, x));
            }
        }
    }
    if n == 2 {
        // lune: both arcs, single projective vertex
        let boundary: Vec<usize> = (0..arcs.len()).collect();
        return (corners.iter().map(|c| c.0).collect(), boundary);
    }
    let center = corners.iter().fold([int(0), int(0), int(0)], |acc, c| add(&acc, &c.1));
    let dirs: Vec<Triple> = corners.iter().map(|c| c.1.clone()).collect();
    let order = angular_order(&center, &dirs);
    let m = order.len();
    let mut boundary = Vec::with_capacity(m);
    for t in 0..m {
        let (a, b) = (&corners[order[t]], &corners[order[(t + 1) % m]]);
        let (la, lb) = (vertices[a.0].lines, vertices[b.0].lines);
        let line = [la.0, la.1]
            .into_iter()
            .find(|x| *x == lb.0 || *x == lb.1)
            .expect("consecutive corners share a line");
        let mut s = signs_at(&add(&a.1, &b.1));
        s[line] = 0;
        boundary.push(arc_index[&(line, normalize_signs(s))]);
    }
    (order.iter().map(|&t| corners[t].0).collect(), boundary)
}
