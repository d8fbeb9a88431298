//! SVG pictures of arrangements and DOT text for dual graphs.
//!
//! Geometry is computed exactly in an affine chart; coordinates are only
//! rounded when written out.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, Color, Coloring, DualGraph};
use crate::exact::{Rational, Triple};

/// Which coordinate is set to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Auto,
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("line {line} is the line at infinity of chart {chart:?}")]
    ChartDegenerate { line: usize, chart: Chart },
}

const SIZE: f64 = 480.0;

type Pt = [Rational; 2];

impl Chart {
    /// Index of the homogeneous coordinate fixed to one, and the two
    /// coordinates used as affine x and y.
    fn axes(self) -> (usize, usize, usize) {
        match self {
            Chart::Z | Chart::Auto => (2, 0, 1),
            Chart::X => (0, 1, 2),
            Chart::Y => (1, 0, 2),
        }
    }

    fn at_infinity(self, l: &Triple) -> bool {
        let (w, a, b) = self.axes();
        !l[w].is_zero() && l[a].is_zero() && l[b].is_zero()
    }

    /// Picks a chart in which no line is at infinity.
    pub fn resolve(self, arr: &Arrangement) -> Result<Chart, RenderError> {
        let lines = arr.oriented_lines();
        let bad = |c: Chart| lines.iter().position(|l| c.at_infinity(l));
        match self {
            Chart::Auto => [Chart::Z, Chart::X, Chart::Y]
                .into_iter()
                .find(|&c| bad(c).is_none())
                .ok_or(RenderError::ChartDegenerate { line: 0, chart: Chart::Z }),
            c => match bad(c) {
                Some(line) => Err(RenderError::ChartDegenerate { line, chart: c }),
                None => Ok(c),
            },
        }
    }

    fn affine(self, p: &Triple) -> Option<Pt> {
        let (w, a, b) = self.axes();
        if p[w].is_zero() {
            return None;
        }
        let d = Rational::from_integer(p[w].clone());
        Some([Rational::from_integer(p[a].clone()) / &d, Rational::from_integer(p[b].clone()) / &d])
    }

    /// A line `l . h = 0` as `c0 + c1 x + c2 y` in chart coordinates, where
    /// `h` has a one in the fixed slot.
    fn linear(self, l: &Triple) -> [Rational; 3] {
        let (w, a, b) = self.axes();
        [w, a, b].map(|k| Rational::from_integer(l[k].clone()))
    }
}

fn eval(f: &[Rational; 3], p: &Pt) -> Rational {
    &f[0] + &f[1] * &p[0] + &f[2] * &p[1]
}

/// Keeps the part of a convex polygon where `f >= 0`.
fn clip(poly: &[Pt], f: &[Rational; 3]) -> Vec<Pt> {
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (p, q) = (&poly[k], &poly[(k + 1) % poly.len()]);
        let (fp, fq) = (eval(f, p), eval(f, q));
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
            let s = &fp / (&fp - &fq);
            out.push([&p[0] + &s * (&q[0] - &p[0]), &p[1] + &s * (&q[1] - &p[1])]);
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

struct Window {
    lo: Pt,
    hi: Pt,
}

impl Window {
    fn around(points: &[Pt]) -> Window {
        let r = |n: i64| Rational::from_integer(n.into());
        if points.is_empty() {
            return Window { lo: [r(-1), r(-1)], hi: [r(1), r(1)] };
        }
        let mut lo = points[0].clone();
        let mut hi = points[0].clone();
        for p in points {
            for c in 0..2 {
                if p[c] < lo[c] {
                    lo[c] = p[c].clone();
                }
                if p[c] > hi[c] {
                    hi[c] = p[c].clone();
                }
            }
        }
        let span = (&hi[0] - &lo[0]).max(&hi[1] - &lo[1]).max(r(1));
        let pad = span / r(2);
        Window {
            lo: [&lo[0] - &pad, &lo[1] - &pad],
            hi: [&hi[0] + &pad, &hi[1] + &pad],
        }
    }

    fn polygon(&self) -> Vec<Pt> {
        vec![
            self.lo.clone(),
            [self.hi[0].clone(), self.lo[1].clone()],
            self.hi.clone(),
            [self.lo[0].clone(), self.hi[1].clone()],
        ]
    }

    fn scale(&self) -> f64 {
        let w = (&self.hi[0] - &self.lo[0]).max(&self.hi[1] - &self.lo[1]);
        SIZE / w.to_f64().unwrap_or(1.0)
    }

    /// Pixel coordinates with y pointing down.
    fn px(&self, p: &Pt) -> (f64, f64) {
        let s = self.scale();
        let x = (&p[0] - &self.lo[0]).to_f64().unwrap_or(0.0) * s;
        let y = (&self.hi[1] - &p[1]).to_f64().unwrap_or(0.0) * s;
        (x, y)
    }

    /// The segment of `f = 0` inside the window.
    fn chord(&self, f: &[Rational; 3]) -> Option<(Pt, Pt)> {
        let neg = [-&f[0], -&f[1], -&f[2]];
        // a degenerate polygon: clip the window to both sides of the line
        let upper = clip(&self.polygon(), f);
        let on: Vec<Pt> = clip(&upper, &neg);
        let mut on = on;
        on.sort();
        on.dedup();
        match on.len() {
            0 | 1 => None,
            _ => Some((on[0].clone(), on[on.len() - 1].clone())),
        }
    }
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn path_of(w: &Window, poly: &[Pt]) -> String {
    let mut d = String::new();
    for (k, p) in poly.iter().enumerate() {
        let (x, y) = w.px(p);
        let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, fmt(x), fmt(y));
    }
    d.push('Z');
    d
}

const LINE_COLORS: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

pub fn render_svg(arr: &Arrangement, col: &Coloring, chart: Chart) -> Result<String, RenderError> {
    let chart = chart.resolve(arr)?;
    let lines: Vec<[Rational; 3]> = arr.oriented_lines().iter().map(|l| chart.linear(l)).collect();
    let verts: Vec<Pt> = arr.vertices().iter().filter_map(|v| chart.affine(v.point.coords())).collect();
    let win = Window::around(&verts);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">",
        s = SIZE
    );
    let _ = writeln!(out, "<g class=\"regions\" stroke=\"none\">");
    for (k, region) in arr.regions().iter().enumerate() {
        // the region meets the chart in up to two convex pieces, one per
        // sign of the fixed coordinate
        let mut d = Vec::new();
        for sigma in [1i8, -1] {
            let mut poly = win.polygon();
            for (f, &s) in lines.iter().zip(&region.signs) {
                let g = if s * sigma > 0 { f.clone() } else { [-&f[0], -&f[1], -&f[2]] };
                poly = clip(&poly, &g);
                if poly.is_empty() {
                    break;
                }
            }
            if poly.len() >= 3 {
                d.push(path_of(&win, &poly));
            }
        }
        let fill = match col.color(k) {
            Color::Black => "#404040",
            Color::White => "#f4f4f4",
        };
        let _ = writeln!(out, "<path class=\"region\" data-region=\"{k}\" fill=\"{fill}\" d=\"{}\"/>", d.join(" "));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "<g class=\"lines\" fill=\"none\" stroke-width=\"2\">");
    for (i, f) in lines.iter().enumerate() {
        let d = match win.chord(f) {
            Some((p, q)) => {
                let ((x0, y0), (x1, y1)) = (win.px(&p), win.px(&q));
                format!("M{} {} L{} {}", fmt(x0), fmt(y0), fmt(x1), fmt(y1))
            }
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "<path class=\"line\" data-line=\"{i}\" stroke=\"{}\" d=\"{d}\"/>",
            LINE_COLORS[i % LINE_COLORS.len()]
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_dual_dot(d: &DualGraph) -> String {
    let mut out = String::from("graph dual {\n");
    if !d.dots.is_empty() {
        out.push_str("  node [style=filled, shape=circle];\n");
    }
    for (k, dot) in d.dots.iter().enumerate() {
        let (fill, font) = match dot.color {
            Color::Black => ("black", "white"),
            Color::White => ("white", "black"),
        };
        let _ = writeln!(out, "  d{k} [fillcolor={fill}, fontcolor={font}, label=\"{k}\"];");
    }
    for (a, b) in &d.edges {
        let _ = writeln!(out, "  d{a} -- d{b};");
    }
    out.push_str("}\n");
    out
}
