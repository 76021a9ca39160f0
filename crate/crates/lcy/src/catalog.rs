//! Catalogs of homology classes that can appear as components of a cyclic
//! anticanonical configuration, pre-filtered by symplectic area.
//!
//! For a reduced form on `M_l` every genus-zero component lies in one of six
//! coefficient families; the catalog materializes exactly the members whose
//! area lies strictly between 0 and the anticanonical area. The quadric has
//! its own short list. Square `-n` sphere classes on `M_2`/`M_3` are also
//! tabulated for cross-checks.

use crate::lattice::{Class, Space, SympClass};
use crate::rat::{ceil_i64, rint, Rat};
use crate::{Error, Result};
use num::Signed;
use std::collections::BTreeSet;

/// Calls `f` with every subset of `pool` (indices into a coefficient
/// vector). Pool sizes are bounded by the blow-up cap, so a bitmask walk
/// is fine.
fn for_subsets(pool: &[usize], mut f: impl FnMut(&[usize])) {
    assert!(pool.len() < 31);
    let mut subset = Vec::with_capacity(pool.len());
    for mask in 0u32..(1 << pool.len()) {
        subset.clear();
        subset.extend(pool.iter().enumerate().filter(|&(j, _)| mask >> j & 1 == 1).map(|(_, &i)| i));
        f(&subset);
    }
}

struct Collector<'a> {
    w: &'a SympClass,
    total: Rat,
    out: BTreeSet<Class>,
}

impl Collector<'_> {
    /// Keeps the class when its area lies in the open window (0, total).
    fn offer(&mut self, coeffs: Vec<i64>) {
        let class = Class::new(self.w.space(), coeffs).expect("catalog coefficient length");
        debug_assert_eq!(class.genus(), 0, "catalog families are rational: {class}");
        let area = self.w.area(&class).expect("catalog space");
        if area.is_positive() && area < self.total {
            self.out.insert(class);
        }
    }
}

fn blowup_weights(w: &SympClass) -> Result<&[Rat]> {
    match w {
        SympClass::Blowup { delta } => {
            if delta.is_empty() {
                return Err(Error::Unsupported(
                    "class catalog needs at least one blow-up point".into(),
                ));
            }
            if !w.is_reduced() {
                return Err(Error::BadWeights(format!("weights {w} are not in reduced form")));
            }
            Ok(delta)
        }
        SympClass::Quadric { .. } => Err(Error::Unsupported(
            "blow-up class catalog does not apply to the quadric".into(),
        )),
    }
}

/// Genus-zero members of the six coefficient families, area-filtered.
/// `toric_only` keeps the three families that can occur in a configuration
/// of maximal length.
fn family_members(w: &SympClass, toric_only: bool) -> Result<BTreeSet<Class>> {
    let delta = blowup_weights(w)?;
    let l = delta.len();
    let total = w.total_area();
    let mut col = Collector { w, total: total.clone(), out: BTreeSet::new() };

    // Family kH - (k-1)E_1 - sum_eps E_i: the k window is solved exactly.
    // area(k) = k(1 - d1) + d1 - eps_sum, so d1 >= 1 makes the family
    // infinite (only reachable in reduced form at l = 1).
    let one_minus = rint(1) - &delta[0];
    if !one_minus.is_positive() {
        return Err(Error::InfiniteCatalog(format!(
            "first weight {} is not below 1, so the line family never runs out",
            crate::rat::fmt_rat(&delta[0])
        )));
    }
    let tail: Vec<usize> = (2..=l).collect();
    for_subsets(&tail, |eps| {
        let eps_sum: Rat = eps.iter().map(|&i| delta[i - 1].clone()).sum();
        let lo = (&eps_sum - &delta[0]) / &one_minus;
        let hi = (&total - &delta[0] + &eps_sum) / &one_minus;
        let k_first = ceil_i64(&lo) + i64::from(crate::rat::is_integer(&lo)); // strict bound
        let k_last = ceil_i64(&hi) - 1;
        for k in k_first..=k_last {
            let mut c = vec![0i64; l + 1];
            c[0] = k;
            c[1] = -(k - 1);
            for &i in eps {
                c[i] = -1;
            }
            col.offer(c);
        }
    });

    // Family H - E_1 - sum_eps E_i.
    for_subsets(&tail, |eps| {
        let mut c = vec![0i64; l + 1];
        c[0] = 1;
        c[1] = -1;
        for &i in eps {
            c[i] = -1;
        }
        col.offer(c);
    });

    // Family E_p - sum_eps E_i with eps beyond p.
    for p in 2..=l {
        let beyond: Vec<usize> = (p + 1..=l).collect();
        for_subsets(&beyond, |eps| {
            let mut c = vec![0i64; l + 1];
            c[p] = 1;
            for &i in eps {
                c[i] = -1;
            }
            col.offer(c);
        });
    }

    if !toric_only {
        // Family 2H - sum_eps E_i (conics missing the first point).
        for_subsets(&tail, |eps| {
            let mut c = vec![0i64; l + 1];
            c[0] = 2;
            for &i in eps {
                c[i] = -1;
            }
            col.offer(c);
        });

        // Family 3H - E_1 - ... - E_{p-1} - 2E_p - sum_eps E_i.
        for p in 2..=l {
            let beyond: Vec<usize> = (p + 1..=l).collect();
            for_subsets(&beyond, |eps| {
                let mut c = vec![0i64; l + 1];
                c[0] = 3;
                for i in 1..p {
                    c[i] = -1;
                }
                c[p] = -2;
                for &i in eps {
                    c[i] = -1;
                }
                col.offer(c);
            });
        }
    }

    Ok(col.out)
}

/// Every class that can be a component of some configuration at `w`:
/// the area-windowed genus-zero families plus, when the anticanonical area
/// is positive, the anticanonical class itself (the one genus-one member).
pub fn catalog_members(w: &SympClass) -> Result<Vec<Class>> {
    let mut set = family_members(w, false)?;
    if w.total_area().is_positive() {
        set.insert(w.space().c1());
    }
    Ok(set.into_iter().collect())
}

/// Members that can appear in maximal-length (toric) configurations.
pub fn toric_catalog_members(w: &SympClass) -> Result<Vec<Class>> {
    Ok(family_members(w, true)?.into_iter().collect())
}

/// Catalog for the quadric: short closed list of sphere classes in the area
/// window plus the anticanonical class.
pub fn quadric_catalog(w: &SympClass) -> Result<Vec<Class>> {
    let SympClass::Quadric { mu } = w else {
        return Err(Error::Unsupported("quadric catalog needs quadric weights".into()));
    };
    if !w.is_reduced() {
        return Err(Error::BadWeights(format!("quadric weights {w} need mu >= 1")));
    }
    let total = w.total_area();
    let mut col = Collector { w, total, out: BTreeSet::new() };
    // coeffs are (f, b); k runs over 0 <= k < mu.
    let kmax = ceil_i64(mu) - 1;
    col.offer(vec![1, 2]); // 2B + F
    col.offer(vec![1, 0]); // F
    col.offer(vec![1, 1]); // B + F
    for k in 0..=kmax {
        col.offer(vec![k + 2, 1]); // B + (k+2)F
        col.offer(vec![k + 1, 1]);
        col.offer(vec![k, 1]);
        col.offer(vec![-k, 1]); // B - kF, area mu - k > 0
    }
    let mut set = col.out;
    set.insert(Space::Quadric.c1());
    Ok(set.into_iter().collect())
}

/// Sphere classes of square `-n` with positive area, tabulated for two and
/// three blow-up points.
pub fn negative_sphere_classes(n: i64, w: &SympClass) -> Result<Vec<Class>> {
    if n < 1 {
        return Err(Error::Unsupported(format!("sphere table needs n >= 1, got {n}")));
    }
    let delta = blowup_weights(w)?;
    let l = delta.len();
    let space = w.space();
    let mk = |coeffs: Vec<i64>| Class::new(space, coeffs).expect("table length");
    let raw: Vec<Class> = match (l, n) {
        (2, 1) => vec![mk(vec![0, 1, 0]), mk(vec![0, 0, 1]), mk(vec![1, -1, -1])],
        (2, n) if n % 2 == 1 => {
            let k = (n - 1) / 2;
            vec![mk(vec![-k, k + 1, 0])]
        }
        (2, n) => {
            let k = n / 2;
            vec![mk(vec![-(k - 1), k, -1])]
        }
        (3, 1) => vec![
            mk(vec![0, 1, 0, 0]),
            mk(vec![0, 0, 1, 0]),
            mk(vec![0, 0, 0, 1]),
            mk(vec![1, -1, -1, 0]),
            mk(vec![1, -1, 0, -1]),
            mk(vec![1, 0, -1, -1]),
        ],
        (3, 2) => vec![
            mk(vec![0, 1, -1, 0]),
            mk(vec![0, 1, 0, -1]),
            mk(vec![0, 0, 1, -1]),
            mk(vec![1, -1, -1, -1]),
        ],
        (3, n) if n % 2 == 1 => {
            let k = (n - 1) / 2;
            vec![mk(vec![-k, k + 1, 0, 0]), mk(vec![-(k - 1), k, -1, -1])]
        }
        (3, n) => {
            let k = (n - 2) / 2;
            vec![mk(vec![-k, k + 1, -1, 0]), mk(vec![-k, k + 1, 0, -1])]
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "sphere tables cover M2 and M3 only, not M{l}"
            )))
        }
    };
    let mut out: Vec<Class> = raw
        .into_iter()
        .inspect(|c| debug_assert_eq!(c.square(), -n, "table entry square for {c}"))
        .filter(|c| w.area(c).expect("same space").is_positive())
        .collect();
    out.sort();
    Ok(out)
}
