//! Corner mutations of moment polygons and the mutation graph over the
//! toric configurations at a fixed symplectic class.
//!
//! A mutation slices the polygon along the eigenray of a corner (the sum of
//! the two primitive edge directions leaving it), shears the piece beyond
//! the cut by the transvection fixing the ray, and reglues. The mutated
//! corner straightens and a new corner appears where the ray exits; the
//! result is kept only when it is again Delzant.

use crate::config::Config;
use crate::delzant::{moment_polygon, Polygon};
use crate::enumerate::{enumerate_lcy, smoothing_closure, EnumOptions, EnumerationResult};
use crate::lattice::SympClass;
use crate::rat::{rint, Rat};
use crate::{Error, Result};
use num::{Signed, Zero};
use std::collections::{BTreeMap, VecDeque};

/// Result of mutating one corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationOutcome {
    Accepted(Polygon),
    /// The eigenray leaves the polygon through a corner.
    VertexHit,
    /// Regluing produced a corner that is not unimodular.
    NotDelzant,
}

/// Mutates the polygon at corner `v`. The eigenray must exit through the
/// interior of an edge; everything strictly past the cut, walking
/// counterclockwise from `v`, is sheared back onto the cut line.
pub fn toric_mutate(p: &Polygon, v: usize) -> Result<MutationOutcome> {
    let verts = p.vertices();
    let k = verts.len();
    if v >= k {
        return Err(Error::BadBoundary(format!("corner {v} out of range for a {k}-gon")));
    }
    let bd = p.boundary_data();
    let e_next = bd.dirs[v];
    let e_prev = bd.dirs[(v + k - 1) % k];
    // primitive automatically: any common divisor divides det(e_prev, e_next) = 1
    let w = (e_next.0 - e_prev.0, e_next.1 - e_prev.1);
    let (wx, wy) = (rint(w.0), rint(w.1));
    let anchor = verts[v].clone();
    // first boundary hit of the ray anchor + t w, t > 0; edges parallel to
    // the ray cannot carry the exit point
    let mut hits: Vec<(Rat, usize, Rat)> = Vec::new();
    for j in 0..k {
        let pj = &verts[j];
        let qj = &verts[(j + 1) % k];
        let (dx, dy) = (&qj.0 - &pj.0, &qj.1 - &pj.1);
        let den = &wx * &dy - &wy * &dx;
        if den.is_zero() {
            continue;
        }
        let (rx, ry) = (&pj.0 - &anchor.0, &pj.1 - &anchor.1);
        let t = (&rx * &dy - &ry * &dx) / &den;
        let u = (&rx * &wy - &ry * &wx) / &den;
        if t.is_positive() && !u.is_negative() && u <= rint(1) {
            debug_assert_eq!(&anchor.0 + &t * &wx, &pj.0 + &u * &dx);
            debug_assert_eq!(&anchor.1 + &t * &wy, &pj.1 + &u * &dy);
            hits.push((t, j, u));
        }
    }
    let tmin = hits
        .iter()
        .map(|(t, _, _)| t.clone())
        .min()
        .ok_or_else(|| Error::Bug(format!("eigenray from corner {v} never leaves the polygon")))?;
    let mut exit = None;
    for (t, j, u) in &hits {
        if *t == tmin {
            if u.is_zero() || *u == rint(1) {
                return Ok(MutationOutcome::VertexHit);
            }
            exit = Some(*j);
        }
    }
    let j = exit.expect("the minimum is attained");
    let x_pt = (&anchor.0 + &tmin * &wx, &anchor.1 + &tmin * &wy);
    // transvection fixing the cut line pointwise
    let shear = |pt: &(Rat, Rat)| {
        let c = &wx * (&pt.1 - &anchor.1) - &wy * (&pt.0 - &anchor.0);
        (&pt.0 + &c * &wx, &pt.1 + &c * &wy)
    };
    let mut cycle = vec![x_pt];
    let mut i = (j + 1) % k;
    while i != v {
        cycle.push(verts[i].clone());
        i = (i + 1) % k;
    }
    i = (v + 1) % k;
    loop {
        cycle.push(shear(&verts[i]));
        if i == j {
            break;
        }
        i = (i + 1) % k;
    }
    debug_assert_eq!(cycle.len(), k, "one corner dropped, one gained");
    let prev = &verts[(v + k - 1) % k];
    let tnext = shear(&verts[(v + 1) % k]);
    debug_assert!(
        ((&anchor.0 - &prev.0) * (&tnext.1 - &anchor.1)
            - (&anchor.1 - &prev.1) * (&tnext.0 - &anchor.0))
            .is_zero(),
        "the mutated corner must straighten"
    );
    match Polygon::new(cycle) {
        Ok(q) => {
            debug_assert_eq!(q.area(), p.area(), "shears preserve area");
            Ok(MutationOutcome::Accepted(q))
        }
        Err(Error::BadBoundary(_)) => Ok(MutationOutcome::NotDelzant),
        Err(e) => Err(e),
    }
}

/// One accepted mutation between graph nodes: mutating node `from` at the
/// given corner of its moment polygon lands on node `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MutationEdge {
    pub from: usize,
    pub vertex: usize,
    pub to: usize,
}

/// Accepted mutation whose boundary data matches no enumerated node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutOfSetMutation {
    pub from: usize,
    pub vertex: usize,
    pub boundary: Vec<(i64, Rat)>,
}

/// Mutation graph at one symplectic class. Nodes are the enumerator's toric
/// orbit representatives; mutation results are identified with nodes through
/// the boundary-data invariant of their polygons.
#[derive(Debug, Clone)]
pub struct MutationGraph {
    pub w: SympClass,
    pub nodes: Vec<Config>,
    pub polygons: Vec<Polygon>,
    pub edges: Vec<MutationEdge>,
    pub out_of_set: Vec<OutOfSetMutation>,
    pub rejected_vertex_hits: usize,
    pub rejected_non_delzant: usize,
}

pub fn mutation_graph(w: &SympClass, opts: &EnumOptions) -> Result<MutationGraph> {
    mutation_graph_from(&enumerate_lcy(w, opts)?)
}

/// Builds the graph from an enumeration that is already at hand.
pub fn mutation_graph_from(res: &EnumerationResult) -> Result<MutationGraph> {
    if res.toric.is_empty() {
        return Err(Error::BadConfig(format!("no toric configurations at {}", res.w)));
    }
    let nodes = res.toric.clone();
    let mut polygons = Vec::with_capacity(nodes.len());
    let mut index_of: BTreeMap<Vec<(i64, Rat)>, usize> = BTreeMap::new();
    for (i, c) in nodes.iter().enumerate() {
        let p = moment_polygon(c, &res.w)?;
        let key = p.canonical_sa();
        if let Some(&prev) = index_of.get(&key) {
            // distinct toric configurations determine distinct polygons
            return Err(Error::Bug(format!(
                "configurations {} and {} share boundary data at {}",
                nodes[prev], c, res.w
            )));
        }
        index_of.insert(key, i);
        polygons.push(p);
    }
    let mut edges = Vec::new();
    let mut out_of_set = Vec::new();
    let mut rejected_vertex_hits = 0;
    let mut rejected_non_delzant = 0;
    for (i, p) in polygons.iter().enumerate() {
        for v in 0..p.vertices().len() {
            match toric_mutate(p, v)? {
                MutationOutcome::Accepted(q) => match index_of.get(&q.canonical_sa()) {
                    Some(&j) => edges.push(MutationEdge { from: i, vertex: v, to: j }),
                    None => out_of_set.push(OutOfSetMutation {
                        from: i,
                        vertex: v,
                        boundary: q.canonical_sa(),
                    }),
                },
                MutationOutcome::VertexHit => rejected_vertex_hits += 1,
                MutationOutcome::NotDelzant => rejected_non_delzant += 1,
            }
        }
    }
    Ok(MutationGraph {
        w: res.w.clone(),
        nodes,
        polygons,
        edges,
        out_of_set,
        rejected_vertex_hits,
        rejected_non_delzant,
    })
}

impl MutationGraph {
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Shortest move sequence between two nodes, following recorded
    /// mutations forward. `None` when unreachable.
    pub fn mutation_path(&self, from: usize, to: usize) -> Result<Option<Vec<MutationEdge>>> {
        let n = self.nodes.len();
        if from >= n || to >= n {
            return Err(Error::BadConfig(format!(
                "node index out of range, the graph has {n} nodes"
            )));
        }
        let mut parent: Vec<Option<MutationEdge>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(i) = queue.pop_front() {
            if i == to {
                break;
            }
            for e in &self.edges {
                if e.from == i && !seen[e.to] {
                    seen[e.to] = true;
                    parent[e.to] = Some(*e);
                    queue.push_back(e.to);
                }
            }
        }
        if !seen[to] {
            return Ok(None);
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let e = parent[cur].expect("visited nodes carry a parent move");
            path.push(e);
            cur = e.from;
        }
        path.reverse();
        Ok(Some(path))
    }
}

/// How much of the enumerated set the toric configurations reach by
/// repeatedly smoothing nodes. Uncovered configurations witness that
/// smoothing alone does not exhaust the set.
#[derive(Debug, Clone)]
pub struct RealizationReport {
    pub w: SympClass,
    pub covered: Vec<Config>,
    pub uncovered: Vec<Config>,
}

pub fn realization_report(w: &SympClass, opts: &EnumOptions) -> Result<RealizationReport> {
    let mut full = opts.clone();
    full.toric_only = false; // the closure walks through every length
    let res = enumerate_lcy(w, &full)?;
    let covered = smoothing_closure(&res, &res.toric)?;
    let uncovered = res.all.iter().filter(|c| !covered.contains(*c)).cloned().collect();
    Ok(RealizationReport { w: res.w.clone(), covered: covered.into_iter().collect(), uncovered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delzant::build_polygon;
    use crate::lattice::{bl, weights, Space};
    use crate::rat::rat;
    use rand::{Rng, SeedableRng};

    fn ints(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn rectangle_mutates_to_sheared_rectangle() {
        let p = build_polygon(&[0, 0, 0, 0], &ints(&[2, 1, 2, 1])).unwrap();
        assert_eq!(p.vertices()[2], (rint(1), rint(-2)));
        let q = match toric_mutate(&p, 2).unwrap() {
            MutationOutcome::Accepted(q) => q,
            other => panic!("mutation rejected: {other:?}"),
        };
        assert_eq!(q.area(), p.area());
        assert_eq!(
            q.vertices(),
            &[(rint(0), rint(-1)), (rint(0), rint(-2)), (rint(3), rint(-2)), (rint(1), rint(-1))]
        );
        let sheared = build_polygon(&[2, 0, -2, 0], &ints(&[3, 1, 1, 1])).unwrap();
        assert_eq!(q.canonical_sa(), sheared.canonical_sa());
    }

    #[test]
    fn monotone_triangle_mutations_rejected() {
        let p = build_polygon(&[1, 1, 1], &ints(&[1, 1, 1])).unwrap();
        for v in 0..3 {
            assert_eq!(toric_mutate(&p, v).unwrap(), MutationOutcome::NotDelzant);
        }
    }

    #[test]
    fn monotone_square_mutations_hit_corners() {
        let p = build_polygon(&[0, 0, 0, 0], &ints(&[1, 1, 1, 1])).unwrap();
        for v in 0..4 {
            assert_eq!(toric_mutate(&p, v).unwrap(), MutationOutcome::VertexHit);
        }
        assert!(toric_mutate(&p, 4).is_err());
    }

    #[test]
    fn mutation_commutes_with_unimodular_maps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let base = build_polygon(&[2, 0, -2, 0], &ints(&[3, 1, 1, 1])).unwrap();
        for _ in 0..20 {
            let (mut a, mut b, mut c, mut d) = (1i64, 0i64, 0i64, 1i64);
            for _ in 0..4 {
                let s = rng.gen_range(-3..=3);
                if rng.gen_bool(0.5) {
                    b += a * s;
                    d += c * s;
                } else {
                    a += b * s;
                    c += d * s;
                }
            }
            let tx = rat(rng.gen_range(-10..=10), 2);
            let ty = rat(rng.gen_range(-10..=10), 3);
            let mapped: Vec<(Rat, Rat)> = base
                .vertices()
                .iter()
                .map(|(x, y)| {
                    (rint(a) * x + rint(b) * y + &tx, rint(c) * x + rint(d) * y + &ty)
                })
                .collect();
            let moved = Polygon::new(mapped).unwrap();
            for v in 0..4 {
                match (toric_mutate(&base, v).unwrap(), toric_mutate(&moved, v).unwrap()) {
                    (MutationOutcome::Accepted(p0), MutationOutcome::Accepted(p1)) => {
                        assert_eq!(p0.canonical_sa(), p1.canonical_sa());
                    }
                    (r0, r1) => assert_eq!(r0, r1),
                }
            }
        }
    }

    fn reversible(g: &MutationGraph) {
        for e in &g.edges {
            assert!(
                g.edges.iter().any(|f| f.from == e.to && f.to == e.from),
                "edge {e:?} has no reverse"
            );
        }
    }

    #[test]
    fn quadric_rectangle_chain() {
        for (mu, nodes) in [(rat(1, 1), 1usize), (rat(2, 1), 2), (rat(3, 1), 3), (rat(7, 3), 3)] {
            let w = SympClass::quadric(mu);
            let g = mutation_graph(&w, &EnumOptions::default()).unwrap();
            assert_eq!(g.nodes.len(), nodes, "at {w}");
            assert!(g.is_connected(), "at {w}");
            assert!(g.out_of_set.is_empty(), "at {w}");
            reversible(&g);
        }
    }

    #[test]
    fn blowup_graphs_connect() {
        for (delta, nodes) in [
            (vec![(1, 3)], 1usize),
            (vec![(1, 2)], 1),
            (vec![(2, 3)], 2),
            (vec![(2, 5), (1, 5)], 2),
            (vec![(3, 5), (1, 5)], 3),
        ] {
            let w = weights(&delta);
            let g = mutation_graph(&w, &EnumOptions::default()).unwrap();
            assert_eq!(g.nodes.len(), nodes, "at {w}");
            assert!(g.is_connected(), "at {w}");
            reversible(&g);
        }
    }

    #[test]
    fn kkp_point_graph() {
        let w = weights(&[(6, 15), (5, 15), (4, 15)]);
        let g = mutation_graph(&w, &EnumOptions::default()).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert!(g.is_connected());
        reversible(&g);
        let path = g.mutation_path(0, g.nodes.len() - 1).unwrap().unwrap();
        assert!(!path.is_empty());
        assert_eq!(path[0].from, 0);
        assert_eq!(path.last().unwrap().to, g.nodes.len() - 1);
        for pair in path.windows(2) {
            assert_eq!(pair[0].to, pair[1].from);
        }
        assert!(g.mutation_path(0, 9).is_err());
    }

    #[test]
    fn smoothing_coverage_reports() {
        let opts = EnumOptions::default();
        // minimal spaces and two blow-ups: smoothing the toric set covers everything
        let full = [
            SympClass::blowup(vec![]).unwrap(),
            SympClass::quadric(rat(1, 1)),
            SympClass::quadric(rat(2, 1)),
            weights(&[(1, 3)]),
            weights(&[(1, 2)]),
            weights(&[(2, 5), (1, 5)]),
            weights(&[(3, 10), (3, 10)]),
        ];
        for w in full {
            let rep = realization_report(&w, &opts).unwrap();
            assert!(rep.uncovered.is_empty(), "{} uncovered at {w}", rep.uncovered.len());
        }
        // three blow-ups: a known configuration escapes the closure
        let w = weights(&[(6, 15), (5, 15), (4, 15)]);
        let report = realization_report(&w, &opts).unwrap();
        assert!(!report.uncovered.is_empty());
        let witness = Config::new(
            Space::Blowup(3),
            vec![
                bl(&[1, -1, -1, 0]),
                bl(&[0, 0, 1, -1]),
                bl(&[0, 1, -1, 0]),
                bl(&[1, -1, 0, 0]),
                bl(&[1, 0, 0, 0]),
            ],
        )
        .unwrap();
        let res = enumerate_lcy(&w, &opts).unwrap();
        let rep = res.orbit_map.get(&witness.canonicalize()).expect("witness is enumerated");
        assert!(report.uncovered.contains(rep), "witness should escape smoothing");
    }
}
