//! Univariate rational polynomials and exact real root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// Coefficients from the constant term up; never has trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) + other.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.lead().expect("division by the zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().expect("nonempty") / dl;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => self.clone(),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Order of vanishing at `t`.
    pub fn multiplicity(&self, t: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::new(vec![-t.clone(), Rational::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while p.eval(t).is_zero() {
            p = p.div_rem(&lin).0;
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn sign_changes(seq: &[Poly], t: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(t))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct roots in `(lo, hi]`.
pub fn count_roots(seq: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

/// A real algebraic number: a rational, or the unique root of a
/// squarefree polynomial strictly inside `(lo, hi)`, where the polynomial
/// is nonzero at both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rational),
    Isolated { poly: Poly, lo: Rational, hi: Rational },
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

impl RealRoot {
    pub fn lo(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    /// Halves the isolating interval; exact roots are left alone.
    pub fn refine(&mut self) {
        if let RealRoot::Isolated { poly, lo, hi } = self {
            let mid = (&*lo + &*hi) * half();
            let vm = poly.eval(&mid);
            if vm.is_zero() {
                *self = RealRoot::Exact(mid);
                return;
            }
            if vm.is_positive() == poly.eval(lo).is_positive() {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while self.width() >= *width {
            self.refine();
        }
    }

    pub fn approx(&self) -> f64 {
        ((self.lo() + self.hi()) * half()).to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison. Both operands may be refined.
    pub fn compare(&mut self, other: &mut RealRoot) -> Ordering {
        loop {
            match (&*self, &*other) {
                (RealRoot::Exact(a), RealRoot::Exact(b)) => return a.cmp(b),
                (RealRoot::Exact(r), RealRoot::Isolated { poly, lo, hi }) => {
                    if lo < r && r < hi && poly.eval(r).is_zero() {
                        return Ordering::Equal;
                    }
                    if r <= lo {
                        return Ordering::Less;
                    }
                    if r >= hi {
                        return Ordering::Greater;
                    }
                    other.refine();
                }
                (RealRoot::Isolated { .. }, RealRoot::Exact(_)) => return other.compare(self).reverse(),
                (
                    RealRoot::Isolated { poly: pa, lo: la, hi: ha },
                    RealRoot::Isolated { poly: pb, lo: lb, hi: hb },
                ) => {
                    if ha <= lb {
                        return Ordering::Less;
                    }
                    if hb <= la {
                        return Ordering::Greater;
                    }
                    let g = pa.gcd(pb);
                    if g.degree().unwrap_or(0) > 0 {
                        let lo = la.max(lb);
                        let hi = ha.min(hb);
                        if count_roots(&g.sturm(), lo, hi) > 0 {
                            return Ordering::Equal;
                        }
                    }
                    self.refine();
                    other.refine();
                }
            }
        }
    }
}

/// Distinct roots of `p` in the open interval `(a, b)`, in increasing
/// order. `p` must be nonzero.
pub fn isolate_roots(p: &Poly, a: &Rational, b: &Rational) -> Vec<RealRoot> {
    let p = p.squarefree();
    match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => {
            let r = -&p.0[0] / &p.0[1];
            return if a < &r && &r < b { vec![RealRoot::Exact(r)] } else { Vec::new() };
        }
        _ => {}
    }
    let seq = p.sturm();
    let mut out = Vec::new();
    // the flag marks intervals whose right end is already accounted for
    let mut stack = vec![(a.clone(), b.clone(), true)];
    while let Some((lo, hi, hi_done)) = stack.pop() {
        let mut k = count_roots(&seq, &lo, &hi);
        let hi_root = p.eval(&hi).is_zero();
        if hi_root {
            if !hi_done {
                out.push(RealRoot::Exact(hi.clone()));
            }
            k -= 1;
        }
        if k == 0 {
            continue;
        }
        if k == 1 && !p.eval(&lo).is_zero() && !hi_root {
            out.push(RealRoot::Isolated { poly: p.clone(), lo, hi });
            continue;
        }
        let mid = (&lo + &hi) * half();
        stack.push((mid.clone(), hi, hi_done || hi_root));
        stack.push((lo, mid, false));
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    out
}
