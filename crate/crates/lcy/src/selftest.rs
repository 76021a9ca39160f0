//! Built-in oracle grid: every closed formula is recomputed by brute-force
//! enumeration at fixed sample points, with polygon, mutation and tautness
//! invariants checked alongside. The command-line selftest prints the report
//! and fails on any mismatch.

use crate::delzant::{def_taut, gs_solve, moment_polygon, monodromy, TautVerdict};
use crate::enumerate::{enumerate_lcy, EnumOptions};
use crate::formulas::{
    count_m2_general, count_m2_toric, count_m3_toric, count_minimal, kkp_upper_bound,
    lemma_relation_check, restrictive_count_general, restrictive_count_toric,
    toric_region_member, Exactness,
};
use crate::lattice::SympClass;
use crate::mutation::{mutation_graph, realization_report};
use crate::rat::{fmt_rat, rat, rint};
use crate::{Error, Result};

/// Outcome of the oracle grid: one line per check, mismatches counted.
/// The report is deterministic, so two runs print identical bytes.
#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    pub failures: usize,
}

impl Report {
    fn note(&mut self, what: &str, outcome: Result<bool>) {
        match outcome {
            Ok(true) => self.lines.push(format!("ok   {what}")),
            Ok(false) => {
                self.failures += 1;
                self.lines.push(format!("FAIL {what}"));
            }
            Err(e) => {
                self.failures += 1;
                self.lines.push(format!("FAIL {what} ({e})"));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn mw(pairs: &[(i64, i64)]) -> SympClass {
    SympClass::blowup(pairs.iter().map(|&(n, d)| rat(n, d)).collect())
        .expect("sample weights are valid")
}

fn label(pairs: &[(i64, i64)]) -> String {
    let parts: Vec<String> = pairs.iter().map(|&(n, d)| fmt_rat(&rat(n, d))).collect();
    format!("({})", parts.join(","))
}

pub fn run() -> Report {
    let mut rep = Report { lines: Vec::new(), failures: 0 };
    let opts = EnumOptions::default();
    minimal_spaces(&mut rep, &opts);
    two_blowups(&mut rep, &opts);
    three_blowups(&mut rep, &opts);
    rep.note(
        "step-sum identity for bases 2..4 up to six points",
        Ok((2..=4).all(|a| (2..=6).all(|l| lemma_relation_check(a, l)))),
    );
    polygons(&mut rep, &opts);
    graphs(&mut rep, &opts);
    regions(&mut rep, &opts);
    tautness(&mut rep);
    rep
}

fn matches_minimal(w: &SympClass, opts: &EnumOptions) -> Result<bool> {
    let res = enumerate_lcy(w, opts)?;
    let (n, t) = count_minimal(w)?;
    Ok(res.count() as u64 == n && res.toric_count() as u64 == t)
}

fn minimal_spaces(rep: &mut Report, opts: &EnumOptions) {
    let plane = SympClass::blowup(vec![]).expect("plane weights");
    rep.note("plane: closed count matches enumeration", matches_minimal(&plane, opts));
    for (n, d) in [(1i64, 1i64), (3, 2), (2, 1), (7, 3)] {
        let w = SympClass::quadric(rat(n, d));
        let what = format!("quadric {}: closed count matches enumeration", fmt_rat(&rat(n, d)));
        rep.note(&what, matches_minimal(&w, opts));
    }
    for (n, d) in [(1i64, 3i64), (1, 2), (2, 3), (3, 4)] {
        let w = mw(&[(n, d)]);
        let what =
            format!("one blow-up {}: closed count matches enumeration", fmt_rat(&rat(n, d)));
        rep.note(&what, matches_minimal(&w, opts));
    }
}

fn two_blowups(rep: &mut Report, opts: &EnumOptions) {
    let grid: &[&[(i64, i64)]] = &[
        &[(2, 5), (1, 5)],
        &[(3, 5), (1, 5)],
        &[(7, 10), (1, 10)],
        &[(5, 8), (1, 8)],
        &[(3, 10), (3, 10)],
        &[(1, 2), (1, 4)],
        &[(1, 2), (1, 2)],
    ];
    for pairs in grid {
        let w = mw(pairs);
        let what = format!("two blow-ups {}: formulas match enumeration", label(pairs));
        rep.note(&what, check_point(&w, opts));
    }
}

fn three_blowups(rep: &mut Report, opts: &EnumOptions) {
    let grid: &[&[(i64, i64)]] = &[
        &[(2, 5), (1, 5), (1, 10)],
        &[(1, 2), (1, 4), (1, 8)],
        &[(6, 15), (5, 15), (4, 15)],
        &[(34, 60), (13, 60), (13, 60)],
        &[(1, 3), (1, 3), (1, 3)],
    ];
    for pairs in grid {
        let w = mw(pairs);
        let what = format!("three blow-ups {}: formulas match enumeration", label(pairs));
        rep.note(&what, check_point(&w, opts));
    }
}

/// One sample point: the per-family toric count, the general count where the
/// closed form applies, the restrictive count where the weights are
/// restrictive, and the coarse upper bound.
fn check_point(w: &SympClass, opts: &EnumOptions) -> Result<bool> {
    let res = enumerate_lcy(w, opts)?;
    let l = w.delta().len();
    let toric = if l == 2 { count_m2_toric(w)? } else { count_m3_toric(w)? };
    if toric != res.toric_count() as u64 {
        return Ok(false);
    }
    if l == 2 {
        match count_m2_general(w) {
            Ok(n) => {
                if n != res.count() as u64 {
                    return Ok(false);
                }
            }
            // on the closed boundary edge only the toric count has a closed form
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if w.is_restrictive() {
        let (n, ex) = restrictive_count_general(w)?;
        if ex != Exactness::Exact || n != res.count() as i64 {
            return Ok(false);
        }
        let (t, ex) = restrictive_count_toric(w)?;
        if ex != Exactness::Exact || t != res.toric_count() as i64 {
            return Ok(false);
        }
    }
    Ok(kkp_upper_bound(w)? >= toric)
}

fn polygons(rep: &mut Report, opts: &EnumOptions) {
    rep.note("two blow-ups (2/5,1/5): polygon areas, monodromy, dual edge signs", {
        (|| {
            let w = mw(&[(2, 5), (1, 5)]);
            let res = enumerate_lcy(&w, opts)?;
            let sq = w.delta().iter().fold(rint(0), |acc, d| acc + d * d);
            let half = (rint(1) - sq) / rint(2);
            for c in &res.toric {
                if moment_polygon(c, &w)?.area() != half {
                    return Ok(false);
                }
                if gs_solve(c, &w)?.positive.is_none() {
                    return Ok(false);
                }
            }
            for c in res.all.iter().filter(|c| c.len() >= 3) {
                if monodromy(&c.self_intersection_seq()).is_identity() != c.is_toric() {
                    return Ok(false);
                }
            }
            Ok(true)
        })()
    });
    rep.note("quadric 2: polygon area equals the fiber size", {
        (|| {
            let w = SympClass::quadric(rat(2, 1));
            let res = enumerate_lcy(&w, opts)?;
            for c in &res.toric {
                if moment_polygon(c, &w)?.area() != rint(2) {
                    return Ok(false);
                }
            }
            Ok(true)
        })()
    });
}

fn graphs(rep: &mut Report, opts: &EnumOptions) {
    let anchors: &[(&str, SympClass, usize)] = &[
        ("quadric 2", SympClass::quadric(rat(2, 1)), 2),
        ("two blow-ups (2/5,1/5)", mw(&[(2, 5), (1, 5)]), 2),
        ("three blow-ups (6/15,5/15,4/15)", mw(&[(6, 15), (5, 15), (4, 15)]), 4),
    ];
    for (desc, w, nodes) in anchors {
        rep.note(&format!("mutation graph over {desc}: {nodes} nodes, connected"), {
            (|| {
                let g = mutation_graph(w, opts)?;
                Ok(g.nodes.len() == *nodes && g.is_connected())
            })()
        });
    }
    rep.note("smoothing closure: full up to two blow-ups, escapes at (6/15,5/15,4/15)", {
        (|| {
            let plane = SympClass::blowup(vec![]).expect("plane weights");
            if !realization_report(&plane, opts)?.uncovered.is_empty() {
                return Ok(false);
            }
            if !realization_report(&mw(&[(2, 5), (1, 5)]), opts)?.uncovered.is_empty() {
                return Ok(false);
            }
            Ok(!realization_report(&mw(&[(6, 15), (5, 15), (4, 15)]), opts)?
                .uncovered
                .is_empty())
        })()
    });
}

fn regions(rep: &mut Report, opts: &EnumOptions) {
    rep.note("four blow-ups: no toric configurations on the excluded segment", {
        (|| {
            let w = mw(&[(1, 6), (1, 6), (1, 6), (1, 6)]);
            if toric_region_member(&w)? {
                return Ok(false);
            }
            Ok(enumerate_lcy(&w, opts)?.toric_count() == 0)
        })()
    });
    rep.note("four blow-ups: restrictive interior point has the predicted toric count", {
        (|| {
            let w = mw(&[(1, 2), (1, 5), (1, 10), (1, 20)]);
            if !toric_region_member(&w)? {
                return Ok(false);
            }
            let res = enumerate_lcy(&w, opts)?;
            if res.toric_count() == 0 {
                return Ok(false);
            }
            let (t, ex) = restrictive_count_toric(&w)?;
            Ok(ex == Exactness::Exact && t == res.toric_count() as i64)
        })()
    });
    rep.note("five blow-ups: interior point carries toric configurations", {
        (|| {
            let w = mw(&[(1, 2), (1, 8), (1, 8), (1, 8), (1, 8)]);
            if !toric_region_member(&w)? {
                return Ok(false);
            }
            Ok(enumerate_lcy(&w, opts)?.toric_count() > 0)
        })()
    });
}

fn tautness(rep: &mut Report) {
    rep.note(
        "boundary tautness anchors",
        (|| {
            let seq = [1, -2, -3, -3, -2, -3, -2];
            match def_taut(&seq) {
                TautVerdict::NotTaut(pre) => {
                    if pre.len() < 2
                        || !pre.contains(&(vec![2, 1, 3, 2, 1, 3], vec![1, 2, 0, 0, 2, 0]))
                        || !pre.contains(&(vec![3, 1, 3, 1, 3, 1], vec![0, 2, 0, 1, 0, 2]))
                    {
                        return Ok(false);
                    }
                }
                _ => return Ok(false),
            }
            Ok(def_taut(&[1, -2, -2, -2]) == TautVerdict::Taut
                && def_taut(&[1, 3]) == TautVerdict::Taut
                && def_taut(&[0, 4]) == TautVerdict::Taut)
        })(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_green_and_deterministic() {
        let a = run();
        assert_eq!(a.failures, 0, "failing lines: {:?}", a.lines);
        let b = run();
        assert_eq!(a.lines, b.lines);
        assert!(a.passed());
        assert!(a.lines.len() >= 20);
    }
}
