//! Cyclic anticanonical divisor configurations and the moves between them:
//! smoothing a node, toric and non-toric blow-up, and the blow-down
//! reduction that drives every configuration to a germ on at most one
//! blow-up point (or to the terminal two-component shape).

use crate::lattice::{Class, Space, SympClass, HARD_MAX_L};
use crate::rat::Rat;
use crate::{Error, Result};
use num::Signed;
use std::fmt;

/// Cyclically ordered list of homology classes summing to the anticanonical
/// class. Lists that differ by rotation or reversal describe the same
/// configuration; `canonicalize` picks the representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    space: Space,
    classes: Vec<Class>,
}

/// Outcome of `validate`: every broken requirement, spelled out.
#[derive(Debug, Clone)]
pub struct Validation {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// One blow-down step. `BlowDown` folds the last exceptional class into the
/// unique component containing it; `RemoveExceptional` deletes a component
/// equal to that class and stretches its neighbors; `Terminal` marks the
/// irreducible two-component shape (cubic with one double point plus the
/// exceptional sphere).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    BlowDown { result: Config, component: Class },
    RemoveExceptional { result: Config, component: Class },
    Terminal,
}

impl Config {
    pub fn new(space: Space, classes: Vec<Class>) -> Result<Config> {
        if classes.is_empty() {
            return Err(Error::BadConfig("a configuration needs at least one component".into()));
        }
        for c in &classes {
            if c.space() != space {
                return Err(Error::SpaceMismatch(space, c.space()));
            }
        }
        Ok(Config { space, classes })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor enforces at least one component
    }

    pub fn total(&self) -> Class {
        let mut acc = Class::zero(self.space);
        for c in &self.classes {
            acc = acc.plus(c).expect("same space");
        }
        acc
    }

    pub fn self_intersection_seq(&self) -> Vec<i64> {
        self.classes.iter().map(Class::square).collect()
    }

    pub fn area_seq(&self, w: &SympClass) -> Result<Vec<Rat>> {
        self.classes.iter().map(|c| w.area(c)).collect()
    }

    /// The requirements that do not involve a symplectic form: the classes
    /// sum to the anticanonical class, single components are elliptic,
    /// longer cycles consist of spheres with adjacency product 1 (2 for a
    /// two-component cycle) and product 0 otherwise.
    fn structural_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let k = self.len();
        let c1 = self.space.c1();
        let total = self.total();
        if total != c1 {
            v.push(format!("components sum to {total}, not the anticanonical class {c1}"));
        }
        let want_genus = if k == 1 { 1 } else { 0 };
        for (i, a) in self.classes.iter().enumerate() {
            let g = a.genus();
            if g != want_genus {
                v.push(format!("component {i} ({a}) has genus {g}, expected {want_genus}"));
            }
        }
        if k == 2 {
            let p = self.classes[0].intersect(&self.classes[1]).expect("same space");
            if p != 2 {
                v.push(format!("the two components meet in {p}, expected 2"));
            }
        } else if k >= 3 {
            for i in 0..k {
                for j in i + 1..k {
                    let adjacent = j == i + 1 || (i == 0 && j == k - 1);
                    let want = i64::from(adjacent);
                    let p = self.classes[i].intersect(&self.classes[j]).expect("same space");
                    if p != want {
                        v.push(format!(
                            "components {i} and {j} ({} and {}) meet in {p}, expected {want}",
                            self.classes[i], self.classes[j]
                        ));
                    }
                }
            }
        }
        v
    }

    pub fn is_structurally_valid(&self) -> bool {
        self.structural_violations().is_empty()
    }

    /// Full check against a symplectic form: structure plus positive area
    /// on every component.
    pub fn validate(&self, w: &SympClass) -> Validation {
        let mut violations = self.structural_violations();
        if w.space() != self.space {
            violations.push(format!(
                "weights live on {}, configuration on {}",
                w.space(),
                self.space
            ));
        } else {
            for (i, a) in self.classes.iter().enumerate() {
                let area = w.area(a).expect("same space");
                if !area.is_positive() {
                    violations.push(format!(
                        "component {i} ({a}) has area {} at {w}",
                        crate::rat::fmt_rat(&area)
                    ));
                }
            }
        }
        Validation { ok: violations.is_empty(), violations }
    }

    pub fn is_t_positive(&self, w: &SympClass) -> bool {
        w.space() == self.space
            && self
                .classes
                .iter()
                .all(|a| w.area(a).expect("same space").is_positive())
    }

    /// 12 - k - (sum)^2. Zero for valid cycles of maximal length; each
    /// non-toric blow-up raises it by one.
    pub fn charge(&self) -> i64 {
        let t = self.total();
        12 - self.len() as i64 - t.square()
    }

    pub fn is_toric(&self) -> bool {
        self.len() >= 3 && self.charge() == 0 && self.is_structurally_valid()
    }

    /// Dihedral normal form: the lexicographically smallest among all
    /// rotations of the cycle and of its reversal.
    pub fn canonicalize(&self) -> Config {
        let k = self.len();
        let mut best = self.classes.clone();
        let mut reversed = self.classes.clone();
        reversed.reverse();
        for seq in [&self.classes, &reversed] {
            for shift in 0..k {
                let mut cand: Vec<Class> = Vec::with_capacity(k);
                cand.extend_from_slice(&seq[shift..]);
                cand.extend_from_slice(&seq[..shift]);
                if cand < best {
                    best = cand;
                }
            }
        }
        Config { space: self.space, classes: best }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::BadConfig(format!(
                "index {i} out of range for {} components",
                self.len()
            )));
        }
        Ok(())
    }

    /// Merges the node between components i and i+1 (cyclically) into a
    /// single component. A two-component cycle smooths to the elliptic
    /// configuration.
    pub fn smoothing(&self, i: usize) -> Result<Config> {
        self.check_index(i)?;
        let k = self.len();
        if k == 1 {
            return Err(Error::BadConfig("an elliptic configuration has no node to smooth".into()));
        }
        let j = (i + 1) % k;
        let merged = self.classes[i].plus(&self.classes[j]).expect("same space");
        let mut classes = Vec::with_capacity(k - 1);
        classes.push(merged);
        let mut t = (j + 1) % k;
        while t != i {
            classes.push(self.classes[t].clone());
            t = (t + 1) % k;
        }
        Ok(Config { space: self.space, classes })
    }

    fn next_blowup_space(&self) -> Result<(usize, Space)> {
        let Space::Blowup(l) = self.space else {
            return Err(Error::Unsupported("blow-up moves are defined on the blow-ups of the plane".into()));
        };
        if l + 1 > HARD_MAX_L {
            return Err(Error::CapExceeded { l: l + 1, cap: HARD_MAX_L });
        }
        Ok((l, Space::Blowup(l + 1)))
    }

    fn extended(&self, space: Space) -> Vec<Vec<i64>> {
        self.classes
            .iter()
            .map(|c| {
                let mut v = c.coeffs().to_vec();
                v.resize(space.rank(), 0);
                v
            })
            .collect()
    }

    /// Blows up the node between components i and i+1, inserting the new
    /// exceptional sphere as a component. Preserves charge.
    pub fn toric_blow_up(&self, i: usize) -> Result<Config> {
        self.check_index(i)?;
        if self.len() == 1 {
            return Err(Error::BadConfig("an elliptic configuration has no node to blow up".into()));
        }
        let (l, space) = self.next_blowup_space()?;
        let e = l + 1; // coefficient slot of the new exceptional class
        let k = self.len();
        let j = (i + 1) % k;
        let mut coeffs = self.extended(space);
        coeffs[i][e] -= 1;
        coeffs[j][e] -= 1;
        let mut exceptional = vec![0i64; space.rank()];
        exceptional[e] = 1;
        let mut classes: Vec<Class> = Vec::with_capacity(k + 1);
        for (t, c) in coeffs.into_iter().enumerate() {
            classes.push(Class::new(space, c).expect("rank"));
            if t == i {
                classes.push(Class::new(space, exceptional.clone()).expect("rank"));
            }
        }
        Ok(Config { space, classes })
    }

    /// Blows up a point in the interior of component i. Raises charge by 1.
    pub fn non_toric_blow_up(&self, i: usize) -> Result<Config> {
        self.check_index(i)?;
        let (l, space) = self.next_blowup_space()?;
        let mut coeffs = self.extended(space);
        coeffs[i][l + 1] -= 1;
        let classes = coeffs
            .into_iter()
            .map(|c| Class::new(space, c).expect("rank"))
            .collect();
        Ok(Config { space, classes })
    }

    /// One blow-down of the last exceptional class. Requires a structurally
    /// valid configuration on at least two blow-up points; validity pins the
    /// last coefficient pattern down to three shapes, anything else is a bug.
    pub fn reduce_once(&self) -> Result<ReductionStep> {
        let Space::Blowup(l) = self.space else {
            return Err(Error::Unsupported("reduction is defined on the blow-ups of the plane".into()));
        };
        if l < 2 {
            return Err(Error::Unsupported(
                "reduction applies from two blow-up points up".into(),
            ));
        }
        {
            let v = self.structural_violations();
            if !v.is_empty() {
                return Err(Error::BadConfig(format!(
                    "cannot reduce an invalid configuration: {}",
                    v.join("; ")
                )));
            }
        }
        let k = self.len();
        let down = Space::Blowup(l - 1);
        let drop_last = |coeffs: &[i64]| -> Class {
            Class::new(down, coeffs[..l].to_vec()).expect("rank")
        };
        let mut nonzero: Vec<(usize, i64)> = self
            .classes
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let v = c.coeffs()[l];
                (v != 0).then_some((i, v))
            })
            .collect();
        nonzero.sort_by_key(|&(_, v)| std::cmp::Reverse(v));
        let pattern: Vec<i64> = nonzero.iter().map(|&(_, v)| v).collect();
        let bug = || {
            Error::Bug(format!(
                "unexpected last-coefficient pattern {pattern:?} in {self}"
            ))
        };
        match pattern.as_slice() {
            [1, -1, -1] => {
                // The exceptional sphere is a component; its neighbors carry
                // the -1 and absorb it.
                let (idx, _) = nonzero[0];
                let comp = &self.classes[idx];
                let pure = comp.coeffs()[..l].iter().all(|&c| c == 0);
                if !pure || k < 3 {
                    return Err(bug());
                }
                let prev = (idx + k - 1) % k;
                let next = (idx + 1) % k;
                let mut classes = Vec::with_capacity(k - 1);
                for t in 0..k {
                    if t == idx {
                        continue;
                    }
                    let mut c = self.classes[t].coeffs().to_vec();
                    if t == prev || t == next {
                        c[l] += 1;
                    }
                    if c[l] != 0 {
                        return Err(bug());
                    }
                    classes.push(drop_last(&c));
                }
                Ok(ReductionStep::RemoveExceptional {
                    result: Config { space: down, classes },
                    component: comp.clone(),
                })
            }
            [-1] => {
                let (idx, _) = nonzero[0];
                let classes = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(t, c)| {
                        let mut v = c.coeffs().to_vec();
                        if t == idx {
                            v[l] += 1;
                        }
                        drop_last(&v)
                    })
                    .collect();
                Ok(ReductionStep::BlowDown {
                    result: Config { space: down, classes },
                    component: self.classes[idx].clone(),
                })
            }
            [1, -2] => {
                let (idx, _) = nonzero[0];
                let pure = self.classes[idx].coeffs()[..l].iter().all(|&c| c == 0);
                if k != 2 || !pure {
                    return Err(bug());
                }
                Ok(ReductionStep::Terminal)
            }
            _ => Err(bug()),
        }
    }

    /// Iterated blow-down. Stops on at most one blow-up point or at the
    /// terminal shape and returns the configuration reached.
    pub fn germ(&self) -> Result<Config> {
        let Space::Blowup(_) = self.space else {
            return Err(Error::Unsupported("reduction is defined on the blow-ups of the plane".into()));
        };
        let mut cur = self.clone();
        while matches!(cur.space, Space::Blowup(l) if l >= 2) {
            match cur.reduce_once()? {
                ReductionStep::BlowDown { result, .. }
                | ReductionStep::RemoveExceptional { result, .. } => cur = result,
                ReductionStep::Terminal => break,
            }
        }
        Ok(cur)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{bl, weights};
    use rand::{Rng, SeedableRng};

    fn cfg(coeffs: &[&[i64]]) -> Config {
        let classes: Vec<Class> = coeffs.iter().map(|c| bl(c)).collect();
        Config::new(classes[0].space(), classes).unwrap()
    }

    #[test]
    fn validity_by_length() {
        assert!(cfg(&[&[3]]).is_structurally_valid());
        assert!(cfg(&[&[2], &[1]]).is_structurally_valid());
        assert!(cfg(&[&[1], &[1], &[1]]).is_structurally_valid());
        // repeated classes are fine when the products work out
        assert!(cfg(&[&[1, 0, 0], &[1, 0, 0], &[1, -1, -1]]).is_structurally_valid());
        // wrong sum
        assert!(!cfg(&[&[1, 0], &[1, 0], &[1, 0]]).is_structurally_valid());
        // wrong genus for a single component
        assert!(!cfg(&[&[1]]).is_structurally_valid());
        // adjacency product broken
        assert!(!cfg(&[&[2], &[1], &[0]]).is_structurally_valid());
    }

    #[test]
    fn validation_messages() {
        let w = weights(&[(2, 5), (1, 5)]);
        let good = cfg(&[&[1, 0, 0], &[1, 0, 0], &[1, -1, -1]]);
        assert!(good.validate(&w).ok);
        // -H + 2E_1 - E_2 has negative area at these weights
        let c = cfg(&[&[2, -1, 0], &[1, -1, 0], &[-1, 2, -1], &[0, 0, 1], &[1, -1, -1]]);
        assert!(c.is_structurally_valid());
        let v = c.validate(&w);
        assert!(!v.ok && v.violations.iter().any(|s| s.contains("area")));
        let mismatch = good.validate(&weights(&[(1, 2)]));
        assert!(!mismatch.ok);
    }

    #[test]
    fn charge_and_toric() {
        let plane = cfg(&[&[1], &[1], &[1]]);
        assert_eq!(plane.charge(), 0);
        assert!(plane.is_toric());
        assert_eq!(cfg(&[&[3]]).charge(), 2);
        assert_eq!(cfg(&[&[3, -1]]).charge(), 3);
        let g4 = cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]);
        assert!(g4.is_structurally_valid() && g4.is_toric());
    }

    #[test]
    fn smoothing_steps() {
        let plane = cfg(&[&[1], &[1], &[1]]);
        let pair = plane.smoothing(0).unwrap();
        assert_eq!(pair, cfg(&[&[2], &[1]]));
        assert!(pair.is_structurally_valid());
        assert_eq!(pair.smoothing(1).unwrap(), cfg(&[&[3]]));
        assert!(cfg(&[&[3]]).smoothing(0).is_err());
        // one node fewer, same total class: charge goes up by one
        assert_eq!(pair.charge(), plane.charge() + 1);
    }

    #[test]
    fn blow_up_moves() {
        let plane = cfg(&[&[1], &[1], &[1]]);
        let up = plane.toric_blow_up(0).unwrap();
        assert_eq!(up, cfg(&[&[1, -1], &[0, 1], &[1, -1], &[1, 0]]));
        assert!(up.is_structurally_valid() && up.is_toric());
        assert_eq!(up.charge(), plane.charge());
        let e = cfg(&[&[3]]);
        let twice = e.non_toric_blow_up(0).unwrap().non_toric_blow_up(0).unwrap();
        assert_eq!(twice, cfg(&[&[3, -1, -1]]));
        assert_eq!(twice.charge(), e.charge() + 2);
    }

    #[test]
    fn smoothing_after_toric_blow_up_is_non_toric_blow_up() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..50 {
            // random valid configuration grown from the plane
            let mut c = cfg(&[&[1], &[1], &[1]]);
            for _ in 0..rng.gen_range(0..4) {
                let i = rng.gen_range(0..c.len());
                c = if rng.gen_bool(0.5) {
                    c.toric_blow_up(i).unwrap()
                } else {
                    c.non_toric_blow_up(i).unwrap()
                };
            }
            let i = rng.gen_range(0..c.len());
            let k = c.len();
            let up = c.toric_blow_up(i).unwrap();
            // new exceptional component sits at index i+1
            let before = up.smoothing(i).unwrap();
            let after = up.smoothing(i + 1).unwrap();
            let j = (i + 1) % k;
            assert_eq!(
                before.canonicalize(),
                c.non_toric_blow_up(j).unwrap().canonicalize()
            );
            assert_eq!(
                after.canonicalize(),
                c.non_toric_blow_up(i).unwrap().canonicalize()
            );
        }
    }

    #[test]
    fn canonical_form_is_dihedral_invariant() {
        let c = cfg(&[&[1, -1], &[0, 1], &[1, -1], &[1, 0]]);
        let rotated = cfg(&[&[0, 1], &[1, -1], &[1, 0], &[1, -1]]);
        let reversed = cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]);
        assert_eq!(c.canonicalize(), rotated.canonicalize());
        assert_eq!(c.canonicalize(), reversed.canonicalize());
        let canon = c.canonicalize();
        assert_eq!(canon.canonicalize(), canon);
    }

    #[test]
    fn reduction_cases() {
        // exceptional sphere as a component: remove it
        let c = cfg(&[&[1, 0, -1], &[1, -1, 0], &[0, 1, 0], &[1, -1, -1], &[0, 0, 1]]);
        match c.reduce_once().unwrap() {
            ReductionStep::RemoveExceptional { result, component } => {
                assert_eq!(component, bl(&[0, 0, 1]));
                assert_eq!(result, cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]));
                assert!(result.is_structurally_valid());
            }
            other => panic!("expected removal, got {other:?}"),
        }
        assert_eq!(c.germ().unwrap(), cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]));
        // last point blown up on a component interior: fold it back
        let c = cfg(&[&[1, 0, -1], &[1, -1, 0], &[0, 1, 0], &[1, -1, 0]]);
        assert!(c.is_structurally_valid());
        match c.reduce_once().unwrap() {
            ReductionStep::BlowDown { result, component } => {
                assert_eq!(component, bl(&[1, 0, -1]));
                assert_eq!(result, cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]));
            }
            other => panic!("expected blow-down, got {other:?}"),
        }
        // terminal pair
        let t = cfg(&[&[3, -1, -2], &[0, 0, 1]]);
        assert!(matches!(t.reduce_once().unwrap(), ReductionStep::Terminal));
        assert_eq!(t.germ().unwrap(), t);
        // germs on one point come back unchanged
        let g4 = cfg(&[&[1, 0], &[1, -1], &[0, 1], &[1, -1]]);
        assert_eq!(g4.germ().unwrap(), g4);
        // invalid input is rejected
        assert!(cfg(&[&[1, 0, 0], &[1, 0, 0], &[1, 0, 0]]).reduce_once().is_err());
    }

    #[test]
    fn random_blow_up_towers_reduce_to_small_germs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xd06);
        for _ in 0..60 {
            let mut c = cfg(&[&[1], &[1], &[1]]);
            for _ in 0..rng.gen_range(1..6) {
                let i = rng.gen_range(0..c.len());
                c = if rng.gen_bool(0.6) {
                    c.toric_blow_up(i).unwrap()
                } else {
                    c.non_toric_blow_up(i).unwrap()
                };
            }
            assert!(c.is_structurally_valid());
            let g = c.germ().unwrap();
            match g.space() {
                Space::Blowup(l) => assert!(l <= 1 || g.len() == 2),
                Space::Quadric => panic!("germ left the blow-up family"),
            }
            assert!(g.is_structurally_valid());
        }
    }
}
