//! Second-homology lattices of the supported rational surfaces and the
//! symplectic data living on them.
//!
//! `Blowup(l)` is the plane blown up in l points with basis H, E_1, ..., E_l
//! (H^2 = 1, E_i^2 = -1, mixed products 0). `Quadric` is the sphere product
//! with basis F, B (F^2 = B^2 = 0, F.B = 1). Symplectic forms are normalized
//! so that area(H) = 1 on blow-ups and area(F) = 1 on the quadric.

use crate::rat::{rint, Rat};
use crate::{Error, Result};
use num::{One, Signed};
use std::fmt;

/// Public cap on the number of blow-up points. Enumeration applies its own
/// (smaller, configurable) cap; this one bounds the algebra.
pub const HARD_MAX_L: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    /// CP^2 # l conjugate-CP^2; l = 0 is the plane itself.
    Blowup(usize),
    /// S^2 x S^2.
    Quadric,
}

impl Space {
    pub fn rank(self) -> usize {
        match self {
            Space::Blowup(l) => l + 1,
            Space::Quadric => 2,
        }
    }

    pub fn blowups(self) -> Option<usize> {
        match self {
            Space::Blowup(l) => Some(l),
            Space::Quadric => None,
        }
    }

    /// Anticanonical class: 3H - E_1 - ... - E_l, resp. 2F + 2B.
    pub fn c1(self) -> Class {
        match self {
            Space::Blowup(l) => {
                let mut c = vec![-1i64; l + 1];
                c[0] = 3;
                Class { space: self, coeffs: c }
            }
            Space::Quadric => Class { space: self, coeffs: vec![2, 2] },
        }
    }

    /// Accepts "M<l>" (l <= 16) or "quadric".
    pub fn parse(s: &str) -> Result<Space> {
        if s == "quadric" {
            return Ok(Space::Quadric);
        }
        if let Some(rest) = s.strip_prefix('M') {
            if let Ok(l) = rest.parse::<usize>() {
                if rest == l.to_string() && l <= HARD_MAX_L {
                    return Ok(Space::Blowup(l));
                }
            }
        }
        Err(Error::BadWeights(format!(
            "unknown space {s:?}; expected M0..M{HARD_MAX_L} or quadric"
        )))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Blowup(l) => write!(f, "M{l}"),
            Space::Quadric => write!(f, "quadric"),
        }
    }
}

/// Integral homology class. Coefficients are stored in basis order:
/// (h, e_1, ..., e_l) on blow-ups, (f, b) on the quadric. Ordering is
/// lexicographic on the coefficient vector, which fixes every deterministic
/// listing in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Class {
    space: Space,
    coeffs: Vec<i64>,
}

impl Class {
    pub fn new(space: Space, coeffs: Vec<i64>) -> Result<Class> {
        if coeffs.len() != space.rank() {
            return Err(Error::BadCoeffLen { space, got: coeffs.len(), want: space.rank() });
        }
        Ok(Class { space, coeffs })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn zero(space: Space) -> Class {
        Class { space, coeffs: vec![0; space.rank()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn plus(&self, other: &Class) -> Result<Class> {
        self.zip(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &Class) -> Result<Class> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Class, op: impl Fn(i64, i64) -> i64) -> Result<Class> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect();
        Ok(Class { space: self.space, coeffs })
    }

    /// Intersection pairing. Diagonal (+1, -1, ..., -1) on blow-ups;
    /// hyperbolic on the quadric.
    pub fn intersect(&self, other: &Class) -> Result<i64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        Ok(match self.space {
            Space::Blowup(_) => {
                let mut acc = self.coeffs[0] * other.coeffs[0];
                for (a, b) in self.coeffs[1..].iter().zip(&other.coeffs[1..]) {
                    acc -= a * b;
                }
                acc
            }
            Space::Quadric => self.coeffs[0] * other.coeffs[1] + self.coeffs[1] * other.coeffs[0],
        })
    }

    pub fn square(&self) -> i64 {
        self.intersect(self).expect("same space")
    }

    /// Arithmetic genus 1 + (A^2 - c_1.A)/2. The anticanonical class is
    /// characteristic, so the division is exact; a remainder is a bug.
    pub fn genus(&self) -> i64 {
        let sq = self.square();
        let deg = self.space.c1().intersect(self).expect("same space");
        let twice = sq - deg;
        assert!(twice % 2 == 0, "genus must be integral for {self:?}");
        1 + twice / 2
    }

    /// Lattice reflection x -> x + (x.m) m in the (-2)-class m.
    pub fn reflect(&self, mirror: &Class) -> Result<Class> {
        let msq = mirror.intersect(mirror)?;
        if msq != -2 {
            return Err(Error::BadMirror(msq));
        }
        let t = self.intersect(mirror)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&mirror.coeffs)
            .map(|(&a, &m)| a + t * m)
            .collect();
        Ok(Class { space: self.space, coeffs })
    }
}

impl fmt::Display for Class {
    /// Human form, e.g. "3H-E1-E2" or "2B+F". Zero prints as "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match self.space {
            Space::Blowup(l) => {
                let mut v = vec!["H".to_string()];
                v.extend((1..=l).map(|i| format!("E{i}")));
                v
            }
            Space::Quadric => vec!["F".to_string(), "B".to_string()],
        };
        let mut out = String::new();
        for (c, name) in self.coeffs.iter().zip(&names) {
            if *c == 0 {
                continue;
            }
            if *c > 0 && !out.is_empty() {
                out.push('+');
            }
            match *c {
                1 => {}
                -1 => out.push('-'),
                n => out.push_str(&n.to_string()),
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// Symplectic form, recorded by its areas on the basis. Blow-up weights
/// delta_i are the areas of the exceptional classes (the line has area 1);
/// the quadric carries area 1 on F and mu on B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SympClass {
    Blowup { delta: Vec<Rat> },
    Quadric { mu: Rat },
}

impl SympClass {
    pub fn blowup(delta: Vec<Rat>) -> Result<SympClass> {
        if delta.len() > HARD_MAX_L {
            return Err(Error::CapExceeded { l: delta.len(), cap: HARD_MAX_L });
        }
        Ok(SympClass::Blowup { delta })
    }

    pub fn quadric(mu: Rat) -> SympClass {
        SympClass::Quadric { mu }
    }

    pub fn space(&self) -> Space {
        match self {
            SympClass::Blowup { delta } => Space::Blowup(delta.len()),
            SympClass::Quadric { .. } => Space::Quadric,
        }
    }

    pub fn delta(&self) -> &[Rat] {
        match self {
            SympClass::Blowup { delta } => delta,
            SympClass::Quadric { .. } => &[],
        }
    }

    /// Symplectic area of a class, linear in the coefficients:
    /// a + sum b_i delta_i on blow-ups, f + b mu on the quadric.
    pub fn area(&self, a: &Class) -> Result<Rat> {
        if a.space() != self.space() {
            return Err(Error::SpaceMismatch(a.space(), self.space()));
        }
        Ok(match self {
            SympClass::Blowup { delta } => {
                let mut acc = rint(a.coeffs()[0]);
                for (c, d) in a.coeffs()[1..].iter().zip(delta) {
                    acc += d * rint(*c);
                }
                acc
            }
            SympClass::Quadric { mu } => rint(a.coeffs()[0]) + mu * rint(a.coeffs()[1]),
        })
    }

    /// Area of the anticanonical class: 3 - sum delta_i, resp. 2 + 2 mu.
    pub fn total_area(&self) -> Rat {
        self.area(&self.space().c1()).expect("own space")
    }

    /// Reduced form: weights positive, sorted descending, and the top three
    /// (padded with zeros) sum to at most 1. Quadric: mu >= 1.
    pub fn is_reduced(&self) -> bool {
        match self {
            SympClass::Blowup { delta } => {
                if delta.iter().any(|d| !d.is_positive()) {
                    return false;
                }
                if delta.windows(2).any(|w| w[0] < w[1]) {
                    return false;
                }
                let top3: Rat = delta.iter().take(3).sum();
                top3 <= rint(1)
            }
            SympClass::Quadric { mu } => *mu >= rint(1),
        }
    }

    /// Reduced and the anticanonical class has positive area.
    pub fn is_c1_nef(&self) -> bool {
        self.is_reduced() && self.total_area().is_positive()
    }

    /// Strictly interior point of the reduced cone: weights pairwise
    /// distinct, every inequality strict. Quadric: mu > 1.
    pub fn is_interior(&self) -> bool {
        match self {
            SympClass::Blowup { delta } => {
                if delta.iter().any(|d| !d.is_positive()) {
                    return false;
                }
                if delta.windows(2).any(|w| w[0] <= w[1]) {
                    return false;
                }
                let top3: Rat = delta.iter().take(3).sum();
                top3 < rint(1)
            }
            SympClass::Quadric { mu } => *mu > rint(1),
        }
    }

    /// Restrictive weights: reduced, total mass below 1, delta_1 > delta_2,
    /// and each middle weight dominates the whole tail after it.
    pub fn is_restrictive(&self) -> bool {
        let SympClass::Blowup { delta } = self else { return false };
        if !self.is_reduced() {
            return false;
        }
        let l = delta.len();
        if delta.iter().sum::<Rat>() >= rint(1) {
            return false;
        }
        if l >= 2 && delta[0] <= delta[1] {
            return false;
        }
        for k in 1..l.saturating_sub(1) {
            let tail: Rat = delta[k + 1..].iter().sum();
            if delta[k] <= tail {
                return false;
            }
        }
        true
    }

    /// Reflections in (-2)-classes of area zero: E_i - E_j for equal weights,
    /// H - E_i - E_j - E_k for weight triples summing to 1, F - B at mu = 1.
    /// Empty exactly at interior points.
    pub fn reflection_generators(&self) -> Vec<Class> {
        let mut out = Vec::new();
        match self {
            SympClass::Blowup { delta } => {
                let l = delta.len();
                let space = Space::Blowup(l);
                for i in 0..l {
                    for j in i + 1..l {
                        if delta[i] == delta[j] {
                            let mut c = vec![0; l + 1];
                            c[i + 1] = 1;
                            c[j + 1] = -1;
                            out.push(Class { space, coeffs: c });
                        }
                    }
                }
                for i in 0..l {
                    for j in i + 1..l {
                        for k in j + 1..l {
                            if &delta[i] + &delta[j] + &delta[k] == rint(1) {
                                let mut c = vec![0; l + 1];
                                c[0] = 1;
                                c[i + 1] = -1;
                                c[j + 1] = -1;
                                c[k + 1] = -1;
                                out.push(Class { space, coeffs: c });
                            }
                        }
                    }
                }
            }
            SympClass::Quadric { mu } => {
                if mu.is_one() {
                    out.push(Class { space: Space::Quadric, coeffs: vec![1, -1] });
                }
            }
        }
        out
    }
}

impl fmt::Display for SympClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SympClass::Blowup { delta } => {
                let parts: Vec<String> = delta.iter().map(crate::rat::fmt_rat).collect();
                write!(f, "{}({})", self.space(), parts.join(","))
            }
            SympClass::Quadric { mu } => write!(f, "quadric(mu={})", crate::rat::fmt_rat(mu)),
        }
    }
}

/// Convenience constructor used across the crate's tests.
#[cfg(test)]
pub(crate) fn bl(coeffs: &[i64]) -> Class {
    Class::new(Space::Blowup(coeffs.len() - 1), coeffs.to_vec()).unwrap()
}

#[cfg(test)]
pub(crate) fn qd(f: i64, b: i64) -> Class {
    Class::new(Space::Quadric, vec![f, b]).unwrap()
}

#[cfg(test)]
pub(crate) fn weights(delta: &[(i64, i64)]) -> SympClass {
    SympClass::blowup(delta.iter().map(|&(n, d)| crate::rat::rat(n, d)).collect()).unwrap()
}
