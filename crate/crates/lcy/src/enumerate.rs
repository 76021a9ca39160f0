//! Brute-force enumeration of anticanonical divisor configurations with
//! positive component areas, up to cyclic order, reversal, and the
//! reflections fixing the symplectic form.
//!
//! The minimal models (plane, one blow-up, quadric) use closed family
//! lists. From two blow-up points on, configurations are grown as paths in
//! the class catalog and closed by the residual class, which keeps the
//! search exact and finite.

use crate::catalog::{catalog_members, quadric_catalog};
use crate::config::Config;
use crate::lattice::{Class, Space, SympClass, HARD_MAX_L};
use crate::rat::{fmt_rat, rint, Rat};
use crate::{Error, Result};
use num::Signed;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Keep only configurations of maximal length (the toric ones).
    pub toric_only: bool,
    /// Refuse blow-up counts above this (enumeration cost grows quickly).
    pub max_l: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { toric_only: false, max_l: 6 }
    }
}

/// Everything the enumeration found at one weight vector.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub w: SympClass,
    /// Orbit representatives under the zero-area reflections, sorted.
    pub all: Vec<Config>,
    /// Every configuration in canonical dihedral form, before the quotient.
    pub raw: BTreeSet<Config>,
    /// Canonical form -> orbit representative.
    pub orbit_map: BTreeMap<Config, Config>,
    /// The representatives of maximal length.
    pub toric: Vec<Config>,
    /// The single-component configuration, when the anticanonical area allows it.
    pub elliptic: Option<Config>,
    /// Representative count by number of components.
    pub per_length: BTreeMap<usize, usize>,
    /// Reflections that were quotiented out.
    pub generators: Vec<Class>,
    pub quotient_applied: bool,
    pub warning: Option<String>,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.all.len()
    }

    pub fn toric_count(&self) -> usize {
        self.toric.len()
    }
}

pub fn enumerate_lcy(w: &SympClass, opts: &EnumOptions) -> Result<EnumerationResult> {
    if !w.is_reduced() {
        return Err(Error::BadWeights(format!("weights {w} are not in reduced form")));
    }
    let cap = opts.max_l.min(HARD_MAX_L);
    if let Space::Blowup(l) = w.space() {
        if l > cap {
            return Err(Error::CapExceeded { l, cap });
        }
    }
    let total = w.total_area();
    let mut warning = None;
    let mut raw = if !total.is_positive() {
        warning = Some(format!(
            "anticanonical area {} is not positive, so no configuration has positive component areas",
            fmt_rat(&total)
        ));
        BTreeSet::new()
    } else {
        match w.space() {
            Space::Blowup(0) => plane_list(),
            Space::Blowup(1) => one_point_list(w)?,
            Space::Blowup(_) => dfs_enumerate(w, opts.toric_only)?,
            Space::Quadric => quadric_list(w),
        }
    };
    if opts.toric_only {
        let want = match w.space() {
            Space::Blowup(l) => l + 3,
            Space::Quadric => 4,
        };
        raw.retain(|c| c.len() == want);
    }
    debug_assert!(raw.iter().all(|c| {
        c.is_structurally_valid() && c.is_t_positive(w) && *c == c.canonicalize()
    }));

    let generators = w.reflection_generators();
    debug_assert!(!w.is_interior() || generators.is_empty());
    let orbit_map = orbit_quotient(&raw, &generators)?;
    let reps: BTreeSet<Config> = orbit_map.values().cloned().collect();
    let all: Vec<Config> = reps.into_iter().collect();
    let toric: Vec<Config> = all.iter().filter(|c| c.is_toric()).cloned().collect();
    let elliptic = all.iter().find(|c| c.len() == 1).cloned();
    let mut per_length = BTreeMap::new();
    for c in &all {
        *per_length.entry(c.len()).or_insert(0usize) += 1;
    }
    Ok(EnumerationResult {
        w: w.clone(),
        all,
        raw,
        orbit_map,
        toric,
        elliptic,
        per_length,
        generators: generators.clone(),
        quotient_applied: !generators.is_empty(),
        warning,
    })
}

fn insert_canonical(out: &mut BTreeSet<Config>, space: Space, coeffs: &[&[i64]]) {
    let classes: Vec<Class> = coeffs
        .iter()
        .map(|c| Class::new(space, c.to_vec()).expect("component length"))
        .collect();
    let cfg = Config::new(space, classes).expect("nonempty");
    out.insert(cfg.canonicalize());
}

fn plane_list() -> BTreeSet<Config> {
    let s = Space::Blowup(0);
    let mut out = BTreeSet::new();
    insert_canonical(&mut out, s, &[&[3]]);
    insert_canonical(&mut out, s, &[&[2], &[1]]);
    insert_canonical(&mut out, s, &[&[1], &[1], &[1]]);
    out
}

/// Closed lists on one blow-up point, finite exactly when the weight is
/// below 1. Membership of the tail families is controlled by the area of
/// -kH + (k+1)E_1, positive for k < delta/(1-delta).
fn one_point_list(w: &SympClass) -> Result<BTreeSet<Config>> {
    let delta = &w.delta()[0];
    if delta >= &rint(1) {
        return Err(Error::InfiniteCatalog(
            "weight 1 on the exceptional class admits arbitrarily long line chains".into(),
        ));
    }
    let r = delta / (rint(1) - delta);
    let s = Space::Blowup(1);
    let mut out = BTreeSet::new();
    insert_canonical(&mut out, s, &[&[3, -1]]);
    insert_canonical(&mut out, s, &[&[2, 0], &[1, -1]]);
    insert_canonical(&mut out, s, &[&[2, -1], &[1, 0]]);
    insert_canonical(&mut out, s, &[&[1, 0], &[1, 0], &[1, -1]]);
    let mut k = 0i64;
    while rint(k) < r {
        insert_canonical(&mut out, s, &[&[k + 3, -(k + 2)], &[-k, k + 1]]);
        insert_canonical(&mut out, s, &[&[k + 2, -(k + 1)], &[-k, k + 1], &[1, -1]]);
        insert_canonical(&mut out, s, &[&[k + 1, -k], &[1, -1], &[-k, k + 1], &[1, -1]]);
        k += 1;
    }
    Ok(out)
}

/// Closed lists on the quadric; coefficients are (f, b). The fiber-heavy
/// component B - kF keeps positive area for k < mu.
fn quadric_list(w: &SympClass) -> BTreeSet<Config> {
    let SympClass::Quadric { mu } = w else { unreachable!("caller matched the space") };
    let s = Space::Quadric;
    let mut out = BTreeSet::new();
    insert_canonical(&mut out, s, &[&[2, 2]]);
    insert_canonical(&mut out, s, &[&[1, 2], &[1, 0]]);
    insert_canonical(&mut out, s, &[&[1, 1], &[1, 1]]);
    let mut k = 0i64;
    while &rint(k) < mu {
        insert_canonical(&mut out, s, &[&[k + 2, 1], &[-k, 1]]);
        insert_canonical(&mut out, s, &[&[k + 1, 1], &[1, 0], &[-k, 1]]);
        insert_canonical(&mut out, s, &[&[k, 1], &[1, 0], &[-k, 1], &[1, 0]]);
        k += 1;
    }
    out
}

struct Dfs<'a> {
    cat: &'a [Class],
    dots: Vec<Vec<i64>>,
    areas: Vec<Rat>,
    index: BTreeMap<&'a [i64], usize>,
    neighbors: Vec<Vec<usize>>,
    total: Rat,
    c1_coeffs: Vec<i64>,
    space: Space,
    max_len: usize,
    toric_only: bool,
    out: BTreeSet<Config>,
}

impl Dfs<'_> {
    fn emit(&mut self, path: &[usize], residual: usize) {
        let classes: Vec<Class> = path
            .iter()
            .chain(std::iter::once(&residual))
            .map(|&i| self.cat[i].clone())
            .collect();
        let cfg = Config::new(self.space, classes).expect("nonempty").canonicalize();
        self.out.insert(cfg);
    }

    fn extend(&mut self, path: &mut Vec<usize>, sum: &mut Vec<i64>, area: &Rat) {
        let len = path.len();
        let first = path[0];
        let last = *path.last().expect("path starts nonempty");
        if len >= 2 && (!self.toric_only || len + 1 == self.max_len) {
            let rcoeffs: Vec<i64> =
                self.c1_coeffs.iter().zip(sum.iter()).map(|(c, s)| c - s).collect();
            if let Some(&r) = self.index.get(rcoeffs.as_slice()) {
                if r >= first
                    && self.dots[r][last] == 1
                    && self.dots[r][first] == 1
                    && path[1..len - 1].iter().all(|&p| self.dots[r][p] == 0)
                {
                    self.emit(path, r);
                }
            }
        }
        if len + 1 >= self.max_len {
            return;
        }
        for ni in 0..self.neighbors[last].len() {
            let c = self.neighbors[last][ni];
            if c < first {
                continue;
            }
            if path[..len - 1].iter().any(|&p| self.dots[c][p] != 0) {
                continue;
            }
            let next_area = area + &self.areas[c];
            if next_area >= self.total {
                continue;
            }
            path.push(c);
            for (s, v) in sum.iter_mut().zip(self.cat[c].coeffs()) {
                *s += v;
            }
            self.extend(path, sum, &next_area);
            path.pop();
            for (s, v) in sum.iter_mut().zip(self.cat[c].coeffs()) {
                *s -= v;
            }
        }
    }
}

/// Catalog-driven search. Components are catalog members; a cycle is a path
/// whose classes meet the previous one in a point and nothing earlier, closed
/// by the residual of the anticanonical class. The path never gets longer
/// than l + 2 because the length of a valid cycle is at most l + 3.
fn dfs_enumerate(w: &SympClass, toric_only: bool) -> Result<BTreeSet<Config>> {
    let space = w.space();
    let l = space.blowups().expect("blow-up space");
    let c1 = space.c1();
    let cat: Vec<Class> = catalog_members(w)?.into_iter().filter(|c| *c != c1).collect();
    let n = cat.len();
    let total = w.total_area();
    let dots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| cat[i].intersect(&cat[j]).expect("same space")).collect())
        .collect();
    let areas: Vec<Rat> = cat.iter().map(|c| w.area(c).expect("same space")).collect();
    let index: BTreeMap<&[i64], usize> = cat.iter().enumerate().map(|(i, c)| (c.coeffs(), i)).collect();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| dots[i][j] == 1).collect())
        .collect();
    let mut dfs = Dfs {
        cat: &cat,
        dots,
        areas,
        index,
        neighbors,
        total,
        c1_coeffs: c1.coeffs().to_vec(),
        space,
        max_len: l + 3,
        toric_only,
        out: BTreeSet::new(),
    };

    if !toric_only {
        dfs.out.insert(Config::new(space, vec![c1.clone()])?);
        for a in 0..n {
            let rest = c1.minus(&cat[a])?;
            if let Some(&b) = dfs.index.get(rest.coeffs()) {
                if b >= a && dfs.dots[a][b] == 2 {
                    let cfg = Config::new(space, vec![cat[a].clone(), cat[b].clone()])?;
                    dfs.out.insert(cfg.canonicalize());
                }
            }
        }
    }
    for m in 0..n {
        let mut path = vec![m];
        let mut sum = dfs.cat[m].coeffs().to_vec();
        let area = dfs.areas[m].clone();
        dfs.extend(&mut path, &mut sum, &area);
    }
    Ok(dfs.out)
}

fn reflect_config(c: &Config, g: &Class) -> Result<Config> {
    let classes: Result<Vec<Class>> = c.classes().iter().map(|a| a.reflect(g)).collect();
    Config::new(c.space(), classes?)
}

/// Groups the canonical set into orbits of the reflection group and picks
/// the smallest member of each orbit. Reflections preserve validity, areas,
/// and the catalog, so leaving the set is an internal error.
fn orbit_quotient(
    raw: &BTreeSet<Config>,
    generators: &[Class],
) -> Result<BTreeMap<Config, Config>> {
    let mut orbit_map = BTreeMap::new();
    if generators.is_empty() {
        for c in raw {
            orbit_map.insert(c.clone(), c.clone());
        }
        return Ok(orbit_map);
    }
    for c in raw {
        if orbit_map.contains_key(c) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        orbit.insert(c.clone());
        let mut stack = vec![c.clone()];
        while let Some(x) = stack.pop() {
            for g in generators {
                let y = reflect_config(&x, g)?.canonicalize();
                if !raw.contains(&y) {
                    return Err(Error::Bug(format!(
                        "reflection of {x} by {g} left the enumerated set"
                    )));
                }
                if orbit.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let rep = orbit.iter().next().expect("orbit contains c").clone();
        for x in orbit {
            orbit_map.insert(x, rep.clone());
        }
    }
    Ok(orbit_map)
}

/// Orbit representatives reachable from `seeds` by repeatedly smoothing one
/// node. Seeds must come from the same enumeration; the closure stays inside
/// it because smoothing preserves validity and positivity.
pub fn smoothing_closure(
    res: &EnumerationResult,
    seeds: &[Config],
) -> Result<BTreeSet<Config>> {
    let mut seen = BTreeSet::new();
    let mut work = Vec::new();
    for s in seeds {
        let rep = res.orbit_map.get(&s.canonicalize()).ok_or_else(|| {
            Error::BadConfig(format!("seed {s} is not part of the enumeration at {}", res.w))
        })?;
        if seen.insert(rep.clone()) {
            work.push(rep.clone());
        }
    }
    while let Some(c) = work.pop() {
        if c.len() < 2 {
            continue;
        }
        for i in 0..c.len() {
            let sm = c.smoothing(i)?.canonicalize();
            let rep = res.orbit_map.get(&sm).ok_or_else(|| {
                Error::Bug(format!("smoothing {sm} is missing from the enumeration at {}", res.w))
            })?;
            if seen.insert(rep.clone()) {
                work.push(rep.clone());
            }
        }
    }
    Ok(seen)
}

/// True when the two weight vectors provably see the same configuration
/// set: equal class catalogs and equal reflection generators. In that case
/// both enumerations are run and compared, and a difference is an internal
/// error.
pub fn stability_check(w1: &SympClass, w2: &SympClass, opts: &EnumOptions) -> Result<bool> {
    if w1.space() != w2.space() {
        return Err(Error::SpaceMismatch(w1.space(), w2.space()));
    }
    if !w1.is_reduced() || !w2.is_reduced() {
        return Err(Error::BadWeights("stability check needs reduced weights".into()));
    }
    let same_catalog = match w1.space() {
        Space::Blowup(0) => true,
        Space::Blowup(_) => catalog_members(w1)? == catalog_members(w2)?,
        Space::Quadric => quadric_catalog(w1)? == quadric_catalog(w2)?,
    };
    if !same_catalog || w1.reflection_generators() != w2.reflection_generators() {
        return Ok(false);
    }
    let r1 = enumerate_lcy(w1, opts)?;
    let r2 = enumerate_lcy(w2, opts)?;
    if r1.all != r2.all {
        return Err(Error::Bug(format!(
            "equal catalogs and generators but different configuration sets at {w1} and {w2}"
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::weights;
    use crate::rat::rat;

    fn count(w: &SympClass) -> (usize, usize) {
        let r = enumerate_lcy(w, &EnumOptions::default()).unwrap();
        (r.count(), r.toric_count())
    }

    #[test]
    fn plane_counts() {
        let w = SympClass::blowup(vec![]).unwrap();
        let r = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
        assert_eq!(r.count(), 3);
        assert_eq!(r.toric_count(), 1);
        assert!(r.elliptic.is_some());
        assert_eq!(r.per_length, [(1, 1), (2, 1), (3, 1)].into_iter().collect());
        assert!(!r.quotient_applied);
    }

    #[test]
    fn one_point_counts() {
        assert_eq!(count(&weights(&[(1, 3)])), (7, 1));
        assert_eq!(count(&weights(&[(1, 2)])), (7, 1));
        assert_eq!(count(&weights(&[(2, 3)])), (10, 2));
        assert!(matches!(
            enumerate_lcy(&weights(&[(1, 1)]), &EnumOptions::default()),
            Err(Error::InfiniteCatalog(_))
        ));
    }

    #[test]
    fn quadric_counts() {
        let cases = [
            (rat(1, 1), 5, 1),
            (rat(3, 2), 9, 2),
            (rat(2, 1), 9, 2),
            (rat(7, 3), 12, 3),
        ];
        for (mu, want, toric_want) in cases {
            let w = SympClass::quadric(mu);
            let r = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
            assert_eq!(r.count(), want, "at {w}");
            assert_eq!(r.toric_count(), toric_want, "toric at {w}");
        }
        let r = enumerate_lcy(&SympClass::quadric(rat(1, 1)), &EnumOptions::default()).unwrap();
        assert!(r.quotient_applied);
        assert!(r.raw.len() > r.count());
    }

    #[test]
    fn two_point_interior_oracle() {
        let w = weights(&[(2, 5), (1, 5)]);
        let r = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
        assert_eq!(r.count(), 26);
        assert_eq!(r.toric_count(), 2);
        assert!(!r.quotient_applied);
        assert_eq!(r.raw.len(), 26);
        // toric components stay inside the toric catalog
        let tcat: BTreeSet<Class> =
            crate::catalog::toric_catalog_members(&w).unwrap().into_iter().collect();
        for c in &r.toric {
            for a in c.classes() {
                assert!(tcat.contains(a), "{a} outside the toric catalog");
            }
        }
    }

    #[test]
    fn two_point_wall_oracle() {
        let w = weights(&[(3, 10), (3, 10)]);
        let r = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
        assert_eq!(r.count(), 13);
        assert_eq!(r.toric_count(), 1);
        assert!(r.quotient_applied);
        assert!(r.raw.len() > 13);
        // representative of each orbit is minimal and self-consistent
        for (c, rep) in &r.orbit_map {
            assert!(rep <= c);
            assert_eq!(r.orbit_map.get(rep), Some(rep));
        }
    }

    #[test]
    fn toric_only_matches_filter() {
        for w in [weights(&[(2, 5), (1, 5)]), weights(&[(6, 15), (5, 15), (4, 15)])] {
            let full = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
            let t = enumerate_lcy(&w, &EnumOptions { toric_only: true, max_l: 6 }).unwrap();
            assert_eq!(t.all, full.toric);
        }
    }

    #[test]
    fn closed_one_point_lists_match_search() {
        for d in [(1, 3), (1, 2), (2, 3), (3, 4)] {
            let w = weights(&[d]);
            let closed = one_point_list(&w).unwrap();
            let searched = dfs_enumerate(&w, false).unwrap();
            assert_eq!(closed, searched, "at {w}");
        }
    }

    #[test]
    fn smoothing_closure_covers_plane() {
        let w = SympClass::blowup(vec![]).unwrap();
        let r = enumerate_lcy(&w, &EnumOptions::default()).unwrap();
        let closure = smoothing_closure(&r, &r.toric).unwrap();
        assert_eq!(closure.len(), r.count());
    }

    #[test]
    fn stability_inside_and_across_chambers() {
        let opts = EnumOptions::default();
        let a = weights(&[(11, 20)]);
        let b = weights(&[(3, 5)]);
        assert!(stability_check(&a, &b, &opts).unwrap());
        let c = weights(&[(1, 2)]);
        assert!(!stability_check(&b, &c, &opts).unwrap());
        assert!(stability_check(&a, &a, &opts).unwrap());
        assert!(matches!(
            stability_check(&a, &SympClass::quadric(rat(2, 1)), &opts),
            Err(Error::SpaceMismatch(_, _))
        ));
    }

    #[test]
    fn cap_and_reduction_errors() {
        let w = weights(&[(1, 8); 7]);
        assert!(matches!(
            enumerate_lcy(&w, &EnumOptions::default()),
            Err(Error::CapExceeded { l: 7, cap: 6 })
        ));
        let unsorted = weights(&[(1, 5), (2, 5)]);
        assert!(matches!(
            enumerate_lcy(&unsorted, &EnumOptions::default()),
            Err(Error::BadWeights(_))
        ));
    }

    #[test]
    fn non_nef_weights_warn_and_return_empty() {
        // reduced, but the anticanonical area is -1/3
        let w = weights(&[(1, 3); 10]);
        let r = enumerate_lcy(&w, &EnumOptions { toric_only: false, max_l: 12 }).unwrap();
        assert_eq!(r.count(), 0);
        assert!(r.warning.is_some());
    }
}
