//! Exact projective-plane primitives over the rationals.
//!
//! Points and lines are homogeneous triples kept in a canonical integer
//! form: coprime entries with the first nonzero entry positive. Two
//! triples are projectively equal iff their canonical forms are identical,
//! so equality, hashing and ordering are all structural.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar (always reduced, positive denominator).
pub type Rational = BigRational;

/// A homogeneous integer triple.
pub type Triple = [BigInt; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("homogeneous triple is identically zero")]
    ZeroVector,
    #[error("points coincide; the joining line is undetermined")]
    CoincidentPoints,
    #[error("lines coincide; the meeting point is undetermined")]
    CoincidentLines,
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cross(a: &Triple, b: &Triple) -> Triple {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot(a: &Triple, b: &Triple) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn det3(a: &Triple, b: &Triple, c: &Triple) -> BigInt {
    dot(a, &cross(b, c))
}

pub fn is_zero(v: &Triple) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Clears denominators and common factors but keeps the overall sign.
pub fn clear_denominators(raw: &[Rational; 3]) -> Result<Triple, ProjectiveError> {
    if raw.iter().all(Zero::is_zero) {
        return Err(ProjectiveError::ZeroVector);
    }
    let lcm = raw
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints = raw
        .clone()
        .map(|r| r.numer() * (&lcm / r.denom()));
    Ok(primitive(ints))
}

/// Divides out the gcd of the entries. The sign is preserved.
pub fn primitive(v: Triple) -> Triple {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.map(|x| x / &g)
}

fn canonical(v: Triple) -> Result<Triple, ProjectiveError> {
    if is_zero(&v) {
        return Err(ProjectiveError::ZeroVector);
    }
    let v = primitive(v);
    let lead_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    Ok(if lead_negative { v.map(|x| -x) } else { v })
}

/// Canonical homogeneous form of a rational triple.
pub fn normalize(raw: &[Rational; 3]) -> Result<Triple, ProjectiveError> {
    canonical(clear_denominators(raw)?)
}

macro_rules! proj_element {
    ($name:ident, $open:literal, $close:literal) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Triple);

        impl $name {
            pub fn new(raw: &[Rational; 3]) -> Result<Self, ProjectiveError> {
                normalize(raw).map(Self)
            }

            pub fn from_triple(v: Triple) -> Result<Self, ProjectiveError> {
                canonical(v).map(Self)
            }

            /// Convenience constructor for small integer coordinates.
            ///
            /// Panics on the zero vector.
            pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
                Self::from_triple([int(a), int(b), int(c)]).expect("nonzero triple")
            }

            pub fn coords(&self) -> &Triple {
                &self.0
            }

            pub fn rational_coords(&self) -> [Rational; 3] {
                self.0.clone().map(Rational::from_integer)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}, {}, {}{}", $open, self.0[0], self.0[1], self.0[2], $close)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    };
}

proj_element!(ProjPoint, "(", ")");
proj_element!(ProjLine, "[", "]");

impl ProjPoint {
    /// The line with the same homogeneous triple.
    pub fn dual(&self) -> ProjLine {
        ProjLine(self.0.clone())
    }
}

impl ProjLine {
    /// The point with the same homogeneous triple.
    pub fn dual(&self) -> ProjPoint {
        ProjPoint(self.0.clone())
    }
}

/// Line through two distinct points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, ProjectiveError> {
    let v = cross(&p.0, &q.0);
    if is_zero(&v) {
        return Err(ProjectiveError::CoincidentPoints);
    }
    ProjLine::from_triple(v)
}

/// Intersection point of two distinct lines.
pub fn meet(l: &ProjLine, m: &ProjLine) -> Result<ProjPoint, ProjectiveError> {
    let v = cross(&l.0, &m.0);
    if is_zero(&v) {
        return Err(ProjectiveError::CoincidentLines);
    }
    ProjPoint::from_triple(v)
}

pub fn incident(p: &ProjPoint, l: &ProjLine) -> bool {
    dot(&p.0, &l.0).is_zero()
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    det3(&p.0, &q.0, &r.0).is_zero()
}

pub fn concurrent(l: &ProjLine, m: &ProjLine, n: &ProjLine) -> bool {
    det3(&l.0, &m.0, &n.0).is_zero()
}

/// Applies an integer 3x3 matrix to a point. Lines transform by the
/// inverse transpose, for which the adjugate transpose is used.
pub fn transform_point(m: &[Triple; 3], p: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    ProjPoint::from_triple([dot(&m[0], &p.0), dot(&m[1], &p.0), dot(&m[2], &p.0)])
}

pub fn transform_line(m: &[Triple; 3], l: &ProjLine) -> Result<ProjLine, ProjectiveError> {
    // cofactor rows; C^T M = det(M) I
    let cof = [cross(&m[1], &m[2]), cross(&m[2], &m[0]), cross(&m[0], &m[1])];
    ProjLine::from_triple(cof.map(|row| dot(&row, &l.0)))
}

pub fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
