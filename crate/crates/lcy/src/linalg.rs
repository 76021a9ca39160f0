//! Small exact linear algebra kit: reduced row echelon solving, rational
//! Fourier-Motzkin feasibility with witness extraction, and convex-hull
//! membership for simplices. Everything is over `Rat`; no floating point.

use crate::rat::{rint, Rat};
use num::{Signed, Zero};

/// Affine solution set of A x = b: one particular solution plus a basis of
/// the kernel of A. Empty `nullspace` means the solution is unique.
pub(crate) struct LinearSolution {
    pub particular: Vec<Rat>,
    pub nullspace: Vec<Vec<Rat>>,
}

/// Exact Gauss-Jordan solve. Returns None when the system is inconsistent.
pub(crate) fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<LinearSolution> {
    assert_eq!(a.len(), b.len());
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    // Augmented matrix, reduced in place.
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut particular = vec![Rat::zero(); cols];
    for (pi, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = m[pi][cols].clone();
    }
    let mut nullspace = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = rint(1);
        for (pi, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[pi][free].clone();
        }
        nullspace.push(v);
    }
    Some(LinearSolution { particular, nullspace })
}

/// One linear inequality `coeffs . x + constant >= 0`, strict when `strict`.
#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub strict: bool,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, constant: Rat, strict: bool) -> Constraint {
        Constraint { coeffs, constant, strict }
    }

    fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (c, v) in self.coeffs.iter().zip(x) {
            acc += c * v;
        }
        acc
    }

    fn holds(&self, x: &[Rat]) -> bool {
        let v = self.eval(x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

/// Fourier-Motzkin feasibility over `n` rational variables. Returns a point
/// satisfying every constraint, or None when the system is infeasible.
/// Intended for the handful-of-variables systems arising here; the
/// elimination blowup is irrelevant at that size.
pub(crate) fn feasible_point(n: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    for c in constraints {
        assert_eq!(c.coeffs.len(), n);
    }
    if n == 0 {
        let ok = constraints.iter().all(|c| {
            if c.strict {
                c.constant.is_positive()
            } else {
                !c.constant.is_negative()
            }
        });
        return ok.then(Vec::new);
    }
    let var = n - 1;
    let mut lowers: Vec<&Constraint> = Vec::new(); // positive coefficient on var
    let mut uppers: Vec<&Constraint> = Vec::new(); // negative coefficient
    let mut reduced: Vec<Constraint> = Vec::new();
    for c in constraints {
        let k = &c.coeffs[var];
        if k.is_zero() {
            reduced.push(Constraint::new(c.coeffs[..var].to_vec(), c.constant.clone(), c.strict));
        } else if k.is_positive() {
            lowers.push(c);
        } else {
            uppers.push(c);
        }
    }
    for lo in &lowers {
        for up in &uppers {
            // cl > 0, cu < 0; cl*up - cu*lo cancels the variable.
            let cl = lo.coeffs[var].clone();
            let cu = up.coeffs[var].clone();
            let coeffs: Vec<Rat> = (0..var)
                .map(|j| &cl * &up.coeffs[j] - &cu * &lo.coeffs[j])
                .collect();
            let constant = &cl * &up.constant - &cu * &lo.constant;
            reduced.push(Constraint::new(coeffs, constant, lo.strict || up.strict));
        }
    }
    let mut point = feasible_point(var, &reduced)?;
    // Bounds for the eliminated variable at the partial point.
    let bound = |c: &Constraint| -> (Rat, bool) {
        let mut rest = c.constant.clone();
        for j in 0..var {
            rest += &c.coeffs[j] * &point[j];
        }
        (-rest / c.coeffs[var].clone(), c.strict)
    };
    let mut lo: Option<(Rat, bool)> = None;
    for c in &lowers {
        let (v, s) = bound(c);
        if lo.as_ref().map_or(true, |(bv, bs)| v > *bv || (v == *bv && s && !bs)) {
            lo = Some((v, s));
        }
    }
    let mut hi: Option<(Rat, bool)> = None;
    for c in &uppers {
        let (v, s) = bound(c);
        if hi.as_ref().map_or(true, |(bv, bs)| v < *bv || (v == *bv && s && !bs)) {
            hi = Some((v, s));
        }
    }
    let value = match (&lo, &hi) {
        (None, None) => Rat::zero(),
        (Some((a, strict)), None) => {
            if *strict {
                a + rint(1)
            } else {
                a.clone()
            }
        }
        (None, Some((b, strict))) => {
            if *strict {
                b - rint(1)
            } else {
                b.clone()
            }
        }
        (Some((a, sa)), Some((b, sb))) => {
            assert!(a <= b, "elimination left an empty interval");
            if a == b {
                assert!(!sa && !sb, "elimination left a degenerate open interval");
                a.clone()
            } else {
                (a + b) / rint(2)
            }
        }
    };
    point.push(value);
    debug_assert!(constraints.iter().all(|c| c.holds(&point)));
    Some(point)
}

/// Exact membership of `point` in the convex hull of `vertices`, all living
/// in the same ambient rational space. Handles degenerate vertex sets by
/// searching the affine solution set for nonnegative barycentric weights.
pub(crate) fn in_hull(point: &[Rat], vertices: &[Vec<Rat>]) -> bool {
    let dim = point.len();
    let k = vertices.len();
    assert!(k > 0);
    for v in vertices {
        assert_eq!(v.len(), dim);
    }
    // Rows: one per coordinate plus the affine row sum(lambda) = 1.
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|d| vertices.iter().map(|v| v[d].clone()).collect())
        .collect();
    a.push(vec![rint(1); k]);
    let mut b: Vec<Rat> = point.to_vec();
    b.push(rint(1));
    let Some(sol) = solve(&a, &b) else { return false };
    if sol.nullspace.is_empty() {
        return sol.particular.iter().all(|x| !x.is_negative());
    }
    let t = sol.nullspace.len();
    let constraints: Vec<Constraint> = (0..k)
        .map(|i| {
            let coeffs = sol.nullspace.iter().map(|v| v[i].clone()).collect();
            Constraint::new(coeffs, sol.particular[i].clone(), false)
        })
        .collect();
    feasible_point(t, &constraints).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn rv(xs: &[(i64, i64)]) -> Vec<Rat> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x - y = 1 -> (2, 1)
        let a = vec![rv(&[(1, 1), (1, 1)]), rv(&[(1, 1), (-1, 1)])];
        let s = solve(&a, &rv(&[(3, 1), (1, 1)])).unwrap();
        assert_eq!(s.particular, rv(&[(2, 1), (1, 1)]));
        assert!(s.nullspace.is_empty());
    }

    #[test]
    fn solve_inconsistent_and_underdetermined() {
        let a = vec![rv(&[(1, 1), (1, 1)]), rv(&[(2, 1), (2, 1)])];
        assert!(solve(&a, &rv(&[(1, 1), (3, 1)])).is_none());
        let s = solve(&a, &rv(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(s.nullspace.len(), 1);
        // particular + t * kernel stays a solution
        let x = &s.particular[0] + &s.nullspace[0][0];
        let y = &s.particular[1] + &s.nullspace[0][1];
        assert_eq!(x + y, rat(1, 1));
    }

    #[test]
    fn feasibility_intervals() {
        // 0 < x < 1
        let cs = vec![
            Constraint::new(rv(&[(1, 1)]), rat(0, 1), true),
            Constraint::new(rv(&[(-1, 1)]), rat(1, 1), true),
        ];
        let p = feasible_point(1, &cs).unwrap();
        assert!(p[0] > rat(0, 1) && p[0] < rat(1, 1));
        // x > 0 and x < 0: empty
        let cs = vec![
            Constraint::new(rv(&[(1, 1)]), rat(0, 1), true),
            Constraint::new(rv(&[(-1, 1)]), rat(0, 1), true),
        ];
        assert!(feasible_point(1, &cs).is_none());
        // pinned point x = 1
        let cs = vec![
            Constraint::new(rv(&[(1, 1)]), rat(-1, 1), false),
            Constraint::new(rv(&[(-1, 1)]), rat(1, 1), false),
        ];
        assert_eq!(feasible_point(1, &cs).unwrap(), rv(&[(1, 1)]));
    }

    #[test]
    fn feasibility_2d() {
        // x >= 0, y >= 0, x + y <= 1, x > y
        let cs = vec![
            Constraint::new(rv(&[(1, 1), (0, 1)]), rat(0, 1), false),
            Constraint::new(rv(&[(0, 1), (1, 1)]), rat(0, 1), false),
            Constraint::new(rv(&[(-1, 1), (-1, 1)]), rat(1, 1), false),
            Constraint::new(rv(&[(1, 1), (-1, 1)]), rat(0, 1), true),
        ];
        let p = feasible_point(2, &cs).unwrap();
        assert!(p[0] > p[1] && &p[0] + &p[1] <= rat(1, 1) && p[1] >= rat(0, 1));
        // adding y > x makes it empty
        let mut cs2 = cs;
        cs2.push(Constraint::new(rv(&[(-1, 1), (1, 1)]), rat(0, 1), true));
        assert!(feasible_point(2, &cs2).is_none());
    }

    #[test]
    fn hull_membership() {
        let tri = vec![rv(&[(0, 1), (0, 1)]), rv(&[(1, 1), (0, 1)]), rv(&[(0, 1), (1, 1)])];
        assert!(in_hull(&rv(&[(1, 4), (1, 4)]), &tri));
        assert!(in_hull(&rv(&[(1, 2), (1, 2)]), &tri)); // boundary counts
        assert!(in_hull(&rv(&[(0, 1), (0, 1)]), &tri));
        assert!(!in_hull(&rv(&[(3, 4), (3, 4)]), &tri));
        assert!(!in_hull(&rv(&[(-1, 10), (1, 2)]), &tri));
        // segment in the plane
        let seg = vec![rv(&[(0, 1), (0, 1)]), rv(&[(1, 1), (1, 1)])];
        assert!(in_hull(&rv(&[(1, 3), (1, 3)]), &seg));
        assert!(!in_hull(&rv(&[(1, 3), (1, 2)]), &seg));
        // degenerate: repeated vertex
        let dup = vec![rv(&[(0, 1)]), rv(&[(1, 1)]), rv(&[(1, 1)])];
        assert!(in_hull(&rv(&[(1, 2)]), &dup));
        assert!(!in_hull(&rv(&[(2, 1)]), &dup));
    }
}
