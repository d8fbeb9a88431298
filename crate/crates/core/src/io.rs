//! JSON file formats. Rationals are written as `"p/q"` strings; plain
//! integers are accepted on input.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arrangement::Color;
use crate::coherence::{Configuration, Dot, DotId, Element, Face, Provenance};
use crate::exact::{clear_denominators, ProjLine, ProjPoint, ProjectiveError, Rational};
use crate::relations::FlipWord;

pub const LINES_VERSION: &str = "projflip/lines/1";
pub const CONFIGURATION_VERSION: &str = "projflip/configuration/1";
pub const WORD_VERSION: &str = "projflip/word/1";
pub const MOTION_VERSION: &str = "projflip/motion/1";
pub const SUITE_VERSION: &str = "projflip/suite/1";
pub const OCTOGON_VERSION: &str = "projflip/octogon/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported version {found:?}, expected {expected:?}")]
    Version { found: String, expected: &'static str },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
    Ok(r)
}

/// Serde adapter for a single rational.
pub mod q {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for a rational triple.
pub mod q3 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational; 3], s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(|r| format_rational(&r)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Rational; 3], D::Error> {
        let v = <[String; 3]>::deserialize(d)?;
        let [a, b, c] = v;
        Ok([
            parse_rational(&a).map_err(D::Error::custom)?,
            parse_rational(&b).map_err(D::Error::custom)?,
            parse_rational(&c).map_err(D::Error::custom)?,
        ])
    }
}

#[derive(Serialize, Deserialize)]
struct Triple3(#[serde(with = "q3")] [Rational; 3]);

fn check_version(found: &str, expected: &'static str) -> Result<(), IoError> {
    if found != expected {
        return Err(IoError::Version { found: found.to_string(), expected });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSetFile {
    pub version: String,
    #[serde(with = "triples")]
    pub lines: Vec<[Rational; 3]>,
}

mod triples {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[[Rational; 3]], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|t| Triple3(t.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[Rational; 3]>, D::Error> {
        Ok(Vec::<Triple3>::deserialize(d)?.into_iter().map(|t| t.0).collect())
    }
}

impl LineSetFile {
    pub fn from_lines(lines: &[ProjLine]) -> LineSetFile {
        LineSetFile {
            version: LINES_VERSION.to_string(),
            lines: lines.iter().map(ProjLine::rational_coords).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<LineSetFile, IoError> {
        let f: LineSetFile = serde_json::from_str(text)?;
        check_version(&f.version, LINES_VERSION)?;
        Ok(f)
    }

    pub fn to_lines(&self) -> Result<Vec<ProjLine>, IoError> {
        if self.lines.len() < 2 {
            return Err(IoError::Invalid(format!("{} lines; at least 2 are required", self.lines.len())));
        }
        Ok(self.lines.iter().map(ProjLine::new).collect::<Result<_, _>>()?)
    }

    /// Integer triples with their signs kept, as needed for oriented
    /// arrangements.
    pub fn oriented(&self) -> Result<Vec<crate::exact::Triple>, IoError> {
        Ok(self.lines.iter().map(clear_denominators).collect::<Result<_, _>>()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ElementRepr {
    Point(#[serde(with = "q3")] [Rational; 3]),
    Line(#[serde(with = "q3")] [Rational; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct DotRepr {
    id: DotId,
    color: Color,
    element: Option<ElementRepr>,
    label: Option<Vec<i8>>,
    provenance: Option<Vec<DotId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FaceRepr {
    corners: [DotId; 4],
    label: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub version: String,
    dots: Vec<DotRepr>,
    faces: Vec<FaceRepr>,
}

impl ConfigurationFile {
    pub fn from_configuration(c: &Configuration) -> ConfigurationFile {
        let dots = c
            .dots
            .iter()
            .map(|(&id, d)| DotRepr {
                id,
                color: d.color,
                element: d.element.as_ref().map(|e| match e {
                    Element::Point(p) => ElementRepr::Point(p.rational_coords()),
                    Element::Line(l) => ElementRepr::Line(l.rational_coords()),
                }),
                label: d.label.clone(),
                provenance: d.provenance.as_ref().map(|p| p.site.clone()),
            })
            .collect();
        let faces = c
            .faces
            .iter()
            .map(|f| FaceRepr {
                corners: f.corners,
                label: f.label,
            })
            .collect();
        ConfigurationFile {
            version: CONFIGURATION_VERSION.to_string(),
            dots,
            faces,
        }
    }

    pub fn parse(text: &str) -> Result<ConfigurationFile, IoError> {
        let f: ConfigurationFile = serde_json::from_str(text)?;
        check_version(&f.version, CONFIGURATION_VERSION)?;
        Ok(f)
    }

    pub fn to_configuration(&self) -> Result<Configuration, IoError> {
        let mut dots = BTreeMap::new();
        for d in &self.dots {
            let element = match &d.element {
                None => None,
                Some(ElementRepr::Point(v)) => Some(Element::Point(ProjPoint::new(v)?)),
                Some(ElementRepr::Line(v)) => Some(Element::Line(ProjLine::new(v)?)),
            };
            if element.as_ref().is_some_and(|e| e.color() != d.color) {
                return Err(IoError::Invalid(format!("dot {} has an element of the wrong color", d.id)));
            }
            let dot = Dot {
                color: d.color,
                element,
                label: d.label.clone(),
                provenance: d.provenance.clone().map(|site| Provenance { site }),
            };
            if dots.insert(d.id, dot).is_some() {
                return Err(IoError::Invalid(format!("duplicate dot id {}", d.id)));
            }
        }
        let mut faces = Vec::with_capacity(self.faces.len());
        for (k, f) in self.faces.iter().enumerate() {
            for c in f.corners {
                if !dots.contains_key(&c) {
                    return Err(IoError::Invalid(format!("face {k} names unknown dot {c}")));
                }
            }
            faces.push(Face {
                corners: f.corners,
                label: f.label,
            });
        }
        Ok(Configuration { dots, faces })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipWordFile {
    pub version: String,
    #[serde(flatten)]
    pub word: FlipWord,
}

impl FlipWordFile {
    pub fn new(word: FlipWord) -> FlipWordFile {
        FlipWordFile {
            version: WORD_VERSION.to_string(),
            word,
        }
    }

    pub fn parse(text: &str) -> Result<FlipWordFile, IoError> {
        let f: FlipWordFile = serde_json::from_str(text)?;
        check_version(&f.version, WORD_VERSION)?;
        Ok(f)
    }
}

/// A shipped octogon relation instance: the lines the seed was built
/// from, the seed itself and the eight-flip cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OctogonFile {
    pub version: String,
    pub lines: LineSetFile,
    pub seed: ConfigurationFile,
    pub word: FlipWord,
}

impl OctogonFile {
    pub fn parse(text: &str) -> Result<OctogonFile, IoError> {
        let f: OctogonFile = serde_json::from_str(text)?;
        check_version(&f.version, OCTOGON_VERSION)?;
        Ok(f)
    }
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
