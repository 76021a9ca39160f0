//! Moment polygons for toric configurations: exact Delzant verification,
//! boundary data extraction, dual edge solving, boundary monodromy, and
//! continued-fraction tautness tests for boundary self-intersection cycles.
//!
//! Everything here is exact: vertices are rational points, directions are
//! primitive integer vectors, and convexity is decided by a winding count
//! rather than by angles.

use crate::config::Config;
use crate::lattice::SympClass;
use crate::linalg::{self, Constraint, LinearSolution};
use crate::rat::{rint, Rat};
use crate::{Error, Result};
use num::{BigInt, Integer, One, Signed, Zero};

/// Convex polygon with rational vertices and primitive-step Delzant corners,
/// stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    verts: Vec<(Rat, Rat)>,
}

/// Edge directions, edge lengths (multiples of the primitive direction), and
/// the self-intersection numbers read off the corner relations
/// d_{i-1} + d_{i+1} = -s_i d_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryData {
    pub dirs: Vec<(i64, i64)>,
    pub lengths: Vec<Rat>,
    pub self_ints: Vec<i64>,
}

fn shoelace(verts: &[(Rat, Rat)]) -> Rat {
    let k = verts.len();
    let mut s = rint(0);
    for i in 0..k {
        let (x0, y0) = &verts[i];
        let (x1, y1) = &verts[(i + 1) % k];
        s += x0 * y1 - x1 * y0;
    }
    s
}

/// Primitive integer vector pointing along the rational direction (dx, dy).
fn primitive_dir(dx: &Rat, dy: &Rat) -> Option<(i64, i64)> {
    if dx.is_zero() && dy.is_zero() {
        return None;
    }
    let scale = dx.denom().lcm(dy.denom());
    let nx = dx.numer() * (&scale / dx.denom());
    let ny = dy.numer() * (&scale / dy.denom());
    let g = nx.gcd(&ny);
    Some((i64::try_from(nx / &g).ok()?, i64::try_from(ny / &g).ok()?))
}

fn cross(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128
}

/// Index of the closed half of the direction circle: 0 for the upper half
/// (including +x), 1 for the lower (including -x).
fn half(u: (i64, i64)) -> u8 {
    u8::from(!(u.1 > 0 || (u.1 == 0 && u.0 > 0)))
}

/// Strict counterclockwise order on directions starting just above +x.
fn angle_lt(u: (i64, i64), v: (i64, i64)) -> bool {
    match half(u).cmp(&half(v)) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => cross(u, v) > 0,
    }
}

/// Turning number of a direction cycle in which every consecutive pair
/// already turns left by less than a half turn: the number of times the
/// angular order wraps.
fn winding(dirs: &[(i64, i64)]) -> usize {
    let k = dirs.len();
    (0..k).filter(|&i| !angle_lt(dirs[i], dirs[(i + 1) % k])).count()
}

/// Whether a vertex cycle (taken counterclockwise) bounds a Delzant polygon:
/// at least three distinct corners, primitive consecutive direction pairs of
/// determinant one, and total turning exactly one revolution.
pub fn is_delzant_cycle(verts: &[(Rat, Rat)]) -> bool {
    let k = verts.len();
    if k < 3 {
        return false;
    }
    let mut dirs = Vec::with_capacity(k);
    for i in 0..k {
        let (x0, y0) = &verts[i];
        let (x1, y1) = &verts[(i + 1) % k];
        match primitive_dir(&(x1 - x0), &(y1 - y0)) {
            Some(d) => dirs.push(d),
            None => return false,
        }
    }
    if (0..k).any(|i| cross(dirs[i], dirs[(i + 1) % k]) != 1) {
        return false;
    }
    winding(&dirs) == 1
}

impl Polygon {
    /// Wraps a vertex cycle, reorienting counterclockwise first.
    pub fn new(mut verts: Vec<(Rat, Rat)>) -> Result<Polygon> {
        if shoelace(&verts).is_negative() {
            verts.reverse();
        }
        if !is_delzant_cycle(&verts) {
            return Err(Error::BadBoundary("vertex cycle is not Delzant".into()));
        }
        Ok(Polygon { verts })
    }

    pub fn vertices(&self) -> &[(Rat, Rat)] {
        &self.verts
    }

    pub fn area(&self) -> Rat {
        shoelace(&self.verts) / rint(2)
    }

    pub fn boundary_data(&self) -> BoundaryData {
        let k = self.verts.len();
        let mut dirs = Vec::with_capacity(k);
        let mut lengths = Vec::with_capacity(k);
        for i in 0..k {
            let (x0, y0) = &self.verts[i];
            let (x1, y1) = &self.verts[(i + 1) % k];
            let (dx, dy) = (x1 - x0, y1 - y0);
            let d = primitive_dir(&dx, &dy).expect("polygon edges are nonzero");
            let len = if d.0 != 0 { dx / rint(d.0) } else { dy / rint(d.1) };
            dirs.push(d);
            lengths.push(len);
        }
        let self_ints = (0..k)
            .map(|i| {
                let prev = dirs[(i + k - 1) % k];
                let next = dirs[(i + 1) % k];
                let s = -cross(prev, next);
                let d = dirs[i];
                debug_assert_eq!(
                    (prev.0 as i128 + next.0 as i128 + s * d.0 as i128,
                     prev.1 as i128 + next.1 as i128 + s * d.1 as i128),
                    (0, 0),
                    "corner relation must close"
                );
                s as i64
            })
            .collect();
        BoundaryData { dirs, lengths, self_ints }
    }

    /// Complete invariant under unimodular affine maps: the (self-int,
    /// length) edge cycle, minimized lexicographically over rotations of the
    /// cycle and of its reversal.
    pub fn canonical_sa(&self) -> Vec<(i64, Rat)> {
        let bd = self.boundary_data();
        let pairs: Vec<(i64, Rat)> =
            bd.self_ints.iter().copied().zip(bd.lengths.iter().cloned()).collect();
        let k = pairs.len();
        let mut reversed = pairs.clone();
        reversed.reverse();
        let mut best: Option<Vec<(i64, Rat)>> = None;
        for cand in [pairs, reversed] {
            for r in 0..k {
                let rot: Vec<_> = (0..k).map(|i| cand[(i + r) % k].clone()).collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.expect("polygon has edges")
    }
}

/// Edge directions generated from self-intersections: d1 = (0,-1),
/// d2 = (1,0), then d_{i+1} = -s_i d_i - d_{i-1}. The two remaining cyclic
/// corner relations must close, else the data describe no boundary.
pub fn generating_set(s: &[i64]) -> Result<Vec<(i64, i64)>> {
    let k = s.len();
    if k < 3 {
        return Err(Error::BadBoundary(format!("need at least three edges, got {k}")));
    }
    let mut d: Vec<(i64, i64)> = Vec::with_capacity(k);
    d.push((0, -1));
    d.push((1, 0));
    for i in 2..k {
        let prev = d[i - 1];
        let pprev = d[i - 2];
        d.push((-s[i - 1] * prev.0 - pprev.0, -s[i - 1] * prev.1 - pprev.1));
    }
    let wrap_first = (d[k - 1].0 + d[1].0 + s[0] * d[0].0, d[k - 1].1 + d[1].1 + s[0] * d[0].1);
    let wrap_last =
        (d[k - 2].0 + d[0].0 + s[k - 1] * d[k - 1].0, d[k - 2].1 + d[0].1 + s[k - 1] * d[k - 1].1);
    if wrap_first != (0, 0) || wrap_last != (0, 0) {
        return Err(Error::BadBoundary(format!(
            "self-intersections {s:?} do not close up into a boundary"
        )));
    }
    Ok(d)
}

/// Polygon from self-intersections and edge lengths: walk the generated
/// directions from the origin. The walk must return to the origin and bound
/// a Delzant polygon.
pub fn build_polygon(s: &[i64], a: &[Rat]) -> Result<Polygon> {
    if s.len() != a.len() {
        return Err(Error::BadBoundary(format!(
            "{} self-intersections vs {} edge lengths",
            s.len(),
            a.len()
        )));
    }
    if let Some(bad) = a.iter().find(|v| !v.is_positive()) {
        return Err(Error::BadBoundary(format!("edge length {bad} is not positive")));
    }
    let dirs = generating_set(s)?;
    let mut verts = Vec::with_capacity(s.len());
    let mut q = (rint(0), rint(0));
    for (len, dir) in a.iter().zip(&dirs) {
        verts.push(q.clone());
        q = (q.0 + len * rint(dir.0), q.1 + len * rint(dir.1));
    }
    if !q.0.is_zero() || !q.1.is_zero() {
        return Err(Error::BadBoundary("edge vectors do not close up".into()));
    }
    Polygon::new(verts)
}

/// Moment polygon of a toric configuration at the given weights: edges carry
/// the component self-intersections and areas in cyclic order.
pub fn moment_polygon(c: &Config, w: &SympClass) -> Result<Polygon> {
    if !c.is_toric() {
        return Err(Error::BadConfig(format!("{c} is not toric")));
    }
    let areas = c.area_seq(w)?;
    if let Some(bad) = areas.iter().find(|v| !v.is_positive()) {
        return Err(Error::BadConfig(format!("component area {bad} is not positive at {w}")));
    }
    build_polygon(&c.self_intersection_seq(), &areas)
}

/// Sign-definite solutions of the cyclic intersection pairing against the
/// component areas. `solution` is None when the system is inconsistent.
#[derive(Debug, Clone)]
pub struct GsReport {
    pub corank: usize,
    pub solution: Option<Vec<Rat>>,
    pub positive: Option<Vec<Rat>>,
    pub nonpositive: Option<Vec<Rat>>,
}

fn assemble(sol: &LinearSolution, t: &[Rat]) -> Vec<Rat> {
    let k = sol.particular.len();
    (0..k)
        .map(|i| {
            let mut v = sol.particular[i].clone();
            for (j, tj) in t.iter().enumerate() {
                v += &sol.nullspace[j][i] * tj;
            }
            v
        })
        .collect()
}

/// Solves Q z = areas where Q is the configuration's intersection matrix
/// (self-intersections on the diagonal, adjacency off it), then searches the
/// affine solution set for a strictly positive and for a nonpositive point.
pub fn gs_solve(c: &Config, w: &SympClass) -> Result<GsReport> {
    let k = c.len();
    let s = c.self_intersection_seq();
    let areas = c.area_seq(w)?;
    let mut q = vec![vec![rint(0); k]; k];
    for i in 0..k {
        q[i][i] = rint(s[i]);
    }
    match k {
        1 => {}
        2 => {
            q[0][1] = rint(2);
            q[1][0] = rint(2);
        }
        _ => {
            for i in 0..k {
                q[i][(i + 1) % k] += rint(1);
                q[i][(i + k - 1) % k] += rint(1);
            }
        }
    }
    let Some(sol) = linalg::solve(&q, &areas) else {
        return Ok(GsReport { corank: 0, solution: None, positive: None, nonpositive: None });
    };
    let n = sol.nullspace.len();
    let signed_constraints = |sign: i64, strict: bool| -> Vec<Constraint> {
        (0..k)
            .map(|i| {
                let coeffs = (0..n).map(|j| &sol.nullspace[j][i] * rint(sign)).collect();
                Constraint::new(coeffs, &sol.particular[i] * rint(sign), strict)
            })
            .collect()
    };
    let positive =
        linalg::feasible_point(n, &signed_constraints(1, true)).map(|t| assemble(&sol, &t));
    let nonpositive =
        linalg::feasible_point(n, &signed_constraints(-1, false)).map(|t| assemble(&sol, &t));
    for (z, wants_positive) in
        [(&positive, true), (&nonpositive, false)].into_iter().filter_map(|(z, p)| {
            z.as_ref().map(|z| (z, p))
        })
    {
        let sign_ok = if wants_positive {
            z.iter().all(Signed::is_positive)
        } else {
            z.iter().all(|v| !v.is_positive())
        };
        let resubstituted = (0..k).all(|i| {
            let lhs: Rat = (0..k).map(|j| &q[i][j] * &z[j]).sum();
            lhs == areas[i]
        });
        if !sign_ok || !resubstituted {
            return Err(Error::Bug(format!("witness {z:?} fails re-substitution for {c}")));
        }
    }
    Ok(GsReport { corank: n, solution: Some(sol.particular), positive, nonpositive })
}

/// Integer 2x2 matrix, exact at any size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub entries: [[BigInt; 2]; 2],
}

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2::from_i64([[1, 0], [0, 1]])
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Mat2 {
        Mat2 {
            entries: [
                [BigInt::from(m[0][0]), BigInt::from(m[0][1])],
                [BigInt::from(m[1][0]), BigInt::from(m[1][1])],
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        let e = &self.entries;
        e[0][0].is_one() && e[0][1].is_zero() && e[1][0].is_zero() && e[1][1].is_one()
    }

    fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.entries;
        let b = &rhs.entries;
        Mat2 {
            entries: [
                [&a[0][0] * &b[0][0] + &a[0][1] * &b[1][0], &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1]],
                [&a[1][0] * &b[0][0] + &a[1][1] * &b[1][0], &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1]],
            ],
        }
    }

    fn negate(&mut self) {
        for row in self.entries.iter_mut() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
    }
}

/// Boundary monodromy of a self-intersection cycle:
/// (-1)^k times the ordered product of the corner matrices [[s,-1],[1,0]].
/// It is the identity exactly when the cycle bounds a closed polygon.
pub fn monodromy(s: &[i64]) -> Mat2 {
    let mut m = Mat2::identity();
    for &v in s {
        m = m.mul(&Mat2::from_i64([[v, -1], [1, 0]]));
    }
    if s.len() % 2 == 1 {
        m.negate();
    }
    m
}

/// Value of a continued fraction b1 - 1/(b2 - 1/(...)), projectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfValue {
    Finite(Rat),
    Infinity,
}

/// Evaluates right to left on formal pairs (p, q) ~ p/q, so intermediate
/// zeros pass through instead of dividing by zero. Empty input is Infinity.
pub fn cf_eval(b: &[Rat]) -> CfValue {
    let Some(last) = b.last() else { return CfValue::Infinity };
    let mut p = last.clone();
    let mut q = rint(1);
    for v in b[..b.len() - 1].iter().rev() {
        let np = v * &p - &q;
        q = std::mem::replace(&mut p, np);
    }
    if q.is_zero() {
        CfValue::Infinity
    } else {
        CfValue::Finite(p / q)
    }
}

/// Whether every tail value [n_j, ..., n_k] for j >= 2 is finite and
/// strictly positive.
pub fn cf_admissible(n: &[i64]) -> bool {
    let k = n.len();
    let mut tail: Option<Rat> = None; // value of [n_{j+1}, ..., n_k]
    for j in (1..k).rev() {
        let r = match &tail {
            None => rint(n[j]),
            Some(t) if t.is_zero() => return false, // tail blows up
            Some(t) => rint(n[j]) - rint(1) / t,
        };
        if !r.is_positive() {
            return false;
        }
        tail = Some(r);
    }
    true
}

/// Whether n is a boundary cycle of the special kind: entries sum to
/// 3(k-1) where k+1 is the length, the first k entries contract to zero,
/// and all proper tails stay positive.
pub fn is_cusp_cycle(n: &[i64]) -> bool {
    if n.len() < 2 {
        return false;
    }
    let k = n.len() - 1;
    if n.iter().sum::<i64>() != 3 * (k as i64 - 1) {
        return false;
    }
    let head: Vec<Rat> = n[..k].iter().map(|&v| rint(v)).collect();
    cf_eval(&head) == CfValue::Finite(rint(0)) && cf_admissible(&n[..k])
}

/// Self-intersection cycle of the blow-up dual: (n, a) with a_i >= 0 and
/// n_i + a_i >= 2 maps to (1, 1-(n_1+a_1), -(n_2+a_2), ..., 1-(n_{k+1}+a_{k+1})).
pub fn phi_map(n: &[i64], a: &[i64]) -> Result<Vec<i64>> {
    if !is_cusp_cycle(n) {
        return Err(Error::BadConfig(format!("{n:?} is not a contractible boundary cycle")));
    }
    if a.len() != n.len() || a.iter().any(|&v| v < 0) {
        return Err(Error::BadConfig(format!(
            "blow-up multiplicities {a:?} must be nonnegative and match {n:?}"
        )));
    }
    let p: Vec<i64> = n.iter().zip(a).map(|(x, y)| x + y).collect();
    if let Some(bad) = p.iter().position(|&v| v < 2) {
        return Err(Error::BadConfig(format!("entry {} of n + a is below 2", bad + 1)));
    }
    let k = n.len() - 1;
    let mut seq = Vec::with_capacity(k + 2);
    seq.push(1);
    seq.push(1 - p[0]);
    seq.extend(p[1..k].iter().map(|v| -v));
    seq.push(1 - p[k]);
    Ok(seq)
}

/// All (n, a) pairs mapping onto the given cycle, in lexicographic order of
/// n. The search over n_i in [1, p_i] is complete: positivity of the tails
/// forces every n_i >= 1, and a_i >= 0 caps n_i at p_i.
pub fn phi_preimages(seq: &[i64]) -> Result<Vec<(Vec<i64>, Vec<i64>)>> {
    if seq.len() < 3 || seq[0] != 1 {
        return Err(Error::BadConfig(format!(
            "{seq:?} does not have the blown-up dual shape (leading 1, length at least 3)"
        )));
    }
    let k = seq.len() - 2;
    let mut p = Vec::with_capacity(k + 1);
    p.push(1 - seq[1]);
    p.extend(seq[2..=k].iter().map(|v| -v));
    p.push(1 - seq[k + 1]);
    if let Some(bad) = p.iter().position(|&v| v < 2) {
        return Err(Error::BadConfig(format!(
            "{seq:?} does not have the blown-up dual shape (entry {} maps below 2)",
            bad + 1
        )));
    }
    let budget = 3 * (k as i64 - 1);
    let mut out = Vec::new();
    let mut n = vec![0i64; k + 1];
    search(&p, budget, 0, &mut n, &mut out);
    return Ok(out);

    fn search(
        p: &[i64],
        budget: i64,
        i: usize,
        n: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        let k = p.len() - 1;
        if i == k {
            let rest = budget - n[..k].iter().sum::<i64>();
            if rest > p[k] {
                return;
            }
            n[k] = rest;
            if is_cusp_cycle(n) {
                let a: Vec<i64> = p.iter().zip(n.iter()).map(|(x, y)| x - y).collect();
                out.push((n.clone(), a));
            }
            return;
        }
        for v in 1..=p[i] {
            n[i] = v;
            search(p, budget, i + 1, n, out);
        }
    }
}

/// Verdict of the tautness test on a boundary self-intersection cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TautVerdict {
    Taut,
    NotTaut(Vec<(Vec<i64>, Vec<i64>)>),
    Undecided,
}

/// Blown-up dual cycles are taut exactly when their preimage is unique;
/// outside that shape a short list of families is known taut up to rotation
/// and reversal, and everything else is left undecided.
pub fn def_taut(seq: &[i64]) -> TautVerdict {
    if let Ok(pre) = phi_preimages(seq) {
        return match pre.len() {
            0 => TautVerdict::Undecided,
            1 => TautVerdict::Taut,
            _ => TautVerdict::NotTaut(pre),
        };
    }
    let known_taut = |c: &[i64]| -> bool {
        match c {
            [1, p] => *p <= 3,
            [-1, p] => (-3..=-1).contains(p),
            [1, 1, p] => *p <= 1,
            [0, p] => *p <= 4,
            _ => false,
        }
    };
    let k = seq.len();
    let mut reversed = seq.to_vec();
    reversed.reverse();
    for cand in [seq.to_vec(), reversed] {
        for r in 0..k {
            let rot: Vec<i64> = (0..k).map(|i| cand[(i + r) % k]).collect();
            if known_taut(&rot) {
                return TautVerdict::Taut;
            }
        }
    }
    TautVerdict::Undecided
}
