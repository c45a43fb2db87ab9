//! The level of the semiflow at a fixed radius: points with equal closed
//! balls are identified, giving a quotient multigraph.
//!
//! The graph is cut into cells whose positions depend on the radius modulo
//! 1/2. Inside one open segment cell either no point is identified with
//! anything, or the whole segment is glued isometrically onto another one,
//! or every ball is the whole graph. Testing one representative per cell is
//! therefore enough; a quarter-point decides the direction of gluing.

use std::collections::HashMap;

use crate::ball::{closed_ball, BallSet};
use crate::canon::Multigraph;
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, MetricGraph};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct SegmentCell {
    pub edge: usize,
    pub lo: Rational,
    pub hi: Rational,
    pub tail_cell: usize,
    pub head_cell: usize,
}

impl SegmentCell {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Point at fraction `num/den` of the way from `lo` to `hi`.
    fn at(&self, g: &MetricGraph, num: i64, den: i64) -> GraphPoint {
        let t = &self.lo + &(self.length() * Rational::frac(num, den));
        g.point(self.edge, t).expect("segment lies on its edge")
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub radius: Rational,
    /// Graph vertices first (same indices), then interior cut points edge by edge.
    pub vertex_cells: Vec<GraphPoint>,
    pub segment_cells: Vec<SegmentCell>,
}

/// Interior cut offsets of every edge for radius `r`.
pub fn cut_offsets(r: &Rational) -> Vec<Rational> {
    let two = Rational::from_int(2);
    let half = Rational::frac(1, 2);
    let quarter = Rational::frac(1, 4);
    let e0 = r - &((r * &two).floor() / &two);
    let one = Rational::one();
    if e0.is_zero() {
        vec![half]
    } else if e0 == quarter {
        vec![quarter, half, Rational::frac(3, 4)]
    } else if e0 < quarter {
        vec![e0.clone(), &half - &e0, half.clone(), &half + &e0, &one - &e0]
    } else {
        vec![&half - &e0, e0.clone(), half.clone(), &one - &e0, &half + &e0]
    }
}

pub fn subdivision(g: &MetricGraph, r: &Rational) -> Result<Subdivision> {
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.to_string()));
    }
    let cuts = cut_offsets(r);
    let mut vertex_cells: Vec<GraphPoint> = (0..g.num_vertices()).map(|v| g.vertex_point(v)).collect();
    let mut segment_cells = Vec::with_capacity(g.num_edges() * (cuts.len() + 1));
    for e in 0..g.num_edges() {
        let ed = g.edge(e);
        let mut prev_cell = ed.tail;
        let mut prev_t = Rational::zero();
        for c in &cuts {
            vertex_cells.push(g.point(e, c.clone())?);
            let cell = vertex_cells.len() - 1;
            segment_cells.push(SegmentCell {
                edge: e,
                lo: prev_t,
                hi: c.clone(),
                tail_cell: prev_cell,
                head_cell: cell,
            });
            prev_cell = cell;
            prev_t = c.clone();
        }
        segment_cells.push(SegmentCell {
            edge: e,
            lo: prev_t,
            hi: Rational::one(),
            tail_cell: prev_cell,
            head_cell: ed.head,
        });
    }
    Ok(Subdivision { radius: r.clone(), vertex_cells, segment_cells })
}

#[derive(Clone, Debug)]
pub struct QVertex {
    /// Vertex cells mapped here; the first is the representative.
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct QEdge {
    /// Segment cells glued together, with `true` when a cell runs against
    /// the first one.
    pub cells: Vec<(usize, bool)>,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub radius: Rational,
    pub subdivision: Subdivision,
    pub vertices: Vec<QVertex>,
    pub edges: Vec<QEdge>,
    /// Index in `vertices` of the class whose ball is the whole graph.
    pub x_vertex: Option<usize>,
    /// Segment cells collapsed into the whole-graph class.
    pub x_segments: Vec<usize>,
}

impl QuotientGraph {
    pub fn multigraph(&self) -> Multigraph {
        Multigraph { n: self.vertices.len(), edges: self.edges.iter().map(|e| (e.tail, e.head)).collect() }
    }

    /// The common ball of the cells in vertex class `i`.
    pub fn class_ball(&self, g: &MetricGraph, i: usize) -> Result<BallSet> {
        let cell = self.vertices[i].cells[0];
        closed_ball(g, &self.subdivision.vertex_cells[cell], &self.radius)
    }

    /// No two cells share a ball and at most one point has the whole graph
    /// as its ball.
    pub fn is_injective(&self) -> bool {
        self.x_segments.is_empty()
            && self.edges.iter().all(|e| e.cells.len() == 1)
            && self.vertices.iter().all(|v| v.cells.len() == 1)
    }
}

/// Ball identity used while grouping cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum BallKey {
    /// Coverage in units of `1/den`, flattened as `count, lo, hi, ...` per edge.
    Scaled(Vec<i64>),
    Exact(BallSet),
}

/// Computes ball keys for one radius. Every representative offset and the
/// radius itself are multiples of `1 / (4 lcm(den r, 2))`, so when that
/// denominator is small the balls are computed in integers.
enum Keyer {
    Scaled { den: i64, r: i64 },
    Exact(Rational),
}

impl Keyer {
    fn new(g: &MetricGraph, r: &Rational) -> Self {
        let limit = 1i64 << 40;
        let scaled = r.denom_u64().and_then(|d| i64::try_from(d).ok()).and_then(|d| {
            let den = 4 * num_integer::Integer::lcm(&d, &2);
            let reach = (g.num_edges() as i64 + 2).checked_mul(den)?;
            let rr = (r * &Rational::from_int(den)).floor_i64()?;
            (reach < limit && rr < limit).then_some((den, rr))
        });
        match scaled {
            Some((den, r)) => Keyer::Scaled { den, r },
            None => Keyer::Exact(r.clone()),
        }
    }

    fn key(&self, g: &MetricGraph, p: &GraphPoint) -> Result<BallKey> {
        match self {
            Keyer::Exact(r) => Ok(BallKey::Exact(closed_ball(g, p, r)?.with_meta(None))),
            Keyer::Scaled { den, r } => {
                let den = *den;
                let t = (p.t() * &Rational::from_int(den))
                    .floor_i64()
                    .expect("representative offsets are multiples of the scaled unit");
                let e = g.edge(p.edge());
                let vertex = g.point_vertex(p);
                let to = |v: usize| -> i64 {
                    match vertex {
                        Some(u) => den * g.d(u, v) as i64,
                        None => (t + den * g.d(e.tail, v) as i64).min(den - t + den * g.d(e.head, v) as i64),
                    }
                };
                let mut out = Vec::with_capacity(3 * g.num_edges());
                for f in 0..g.num_edges() {
                    let ef = g.edge(f);
                    let (a, b) = (to(ef.tail), to(ef.head));
                    let mut ivs: [(i64, i64); 3] = [(0, -1); 3];
                    let mut n = 0;
                    if *r >= a {
                        ivs[n] = (0, (r - a).min(den));
                        n += 1;
                    }
                    if vertex.is_none() && f == p.edge() {
                        ivs[n] = ((t - r).max(0), (t + r).min(den));
                        n += 1;
                    }
                    if *r >= b {
                        ivs[n] = ((den - (r - b)).max(0), den);
                        n += 1;
                    }
                    let ivs = &mut ivs[..n];
                    ivs.sort_unstable();
                    let at = out.len();
                    out.push(0);
                    let mut count = 0;
                    for &(lo, hi) in ivs.iter() {
                        if count > 0 && lo <= out[out.len() - 1] {
                            let last = out.len() - 1;
                            out[last] = out[last].max(hi);
                        } else {
                            out.push(lo);
                            out.push(hi);
                            count += 1;
                        }
                    }
                    out[at] = count;
                }
                Ok(BallKey::Scaled(out))
            }
        }
    }

    fn whole(&self, g: &MetricGraph) -> BallKey {
        match self {
            Keyer::Exact(_) => BallKey::Exact(BallSet::whole(g)),
            Keyer::Scaled { den, .. } => BallKey::Scaled([1, 0, *den].repeat(g.num_edges())),
        }
    }
}

/// Quotient of `g` by equality of radius-`r` balls.
pub fn project(g: &MetricGraph, r: &Rational) -> Result<QuotientGraph> {
    let sub = subdivision(g, r)?;
    let keyer = Keyer::new(g, r);
    let whole = keyer.whole(g);

    let mut vertex_of: Vec<usize> = Vec::with_capacity(sub.vertex_cells.len());
    let mut vertices: Vec<QVertex> = Vec::new();
    let mut x_vertex: Option<usize> = None;
    let mut by_ball: HashMap<BallKey, usize> = HashMap::new();
    for (i, p) in sub.vertex_cells.iter().enumerate() {
        let key = keyer.key(g, p)?;
        let slot = if key == whole {
            *x_vertex.get_or_insert_with(|| {
                vertices.push(QVertex { cells: Vec::new() });
                vertices.len() - 1
            })
        } else {
            match by_ball.get(&key) {
                Some(&k) => k,
                None => {
                    vertices.push(QVertex { cells: Vec::new() });
                    by_ball.insert(key, vertices.len() - 1);
                    vertices.len() - 1
                }
            }
        };
        vertices[slot].cells.push(i);
        vertex_of.push(slot);
    }

    let mut x_segments = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seg_by_ball: HashMap<BallKey, usize> = HashMap::new();
    for (i, s) in sub.segment_cells.iter().enumerate() {
        let key = keyer.key(g, &s.at(g, 1, 2))?;
        if key == whole {
            x_segments.push(i);
            continue;
        }
        let k = *seg_by_ball.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    for &i in &x_segments {
        let s = &sub.segment_cells[i];
        for c in [s.tail_cell, s.head_cell] {
            if Some(vertex_of[c]) != x_vertex {
                return Err(Error::Internal(format!(
                    "segment cell {i} has the whole graph as ball but its end cell {c} does not"
                )));
            }
        }
    }

    let mut edges = Vec::with_capacity(classes.len());
    for members in classes {
        let rep = &sub.segment_cells[members[0]];
        let (rt, rh) = (vertex_of[rep.tail_cell], vertex_of[rep.head_cell]);
        let mut cells = vec![(members[0], false)];
        if members.len() > 1 {
            let q_rep = keyer.key(g, &rep.at(g, 1, 4))?;
            let tq_rep = keyer.key(g, &rep.at(g, 3, 4))?;
            if q_rep == tq_rep {
                return Err(Error::Internal(format!("segment cell {} folds onto itself", members[0])));
            }
            for &m in &members[1..] {
                let s = &sub.segment_cells[m];
                if s.length() != rep.length() {
                    return Err(Error::Internal(format!("glued cells {} and {m} differ in length", members[0])));
                }
                let q = keyer.key(g, &s.at(g, 1, 4))?;
                let tq = keyer.key(g, &s.at(g, 3, 4))?;
                let reversed = if q == q_rep && tq == tq_rep {
                    false
                } else if q == tq_rep && tq == q_rep {
                    true
                } else {
                    return Err(Error::Internal(format!(
                        "cells {} and {m} share a midpoint ball but not their quarter balls",
                        members[0]
                    )));
                };
                let (t, h) = (vertex_of[s.tail_cell], vertex_of[s.head_cell]);
                let ends = if reversed { (h, t) } else { (t, h) };
                if ends != (rt, rh) {
                    return Err(Error::Internal(format!("glued cells {} and {m} disagree at their ends", members[0])));
                }
                cells.push((m, reversed));
            }
        }
        edges.push(QEdge { cells, tail: rt, head: rh });
    }

    Ok(QuotientGraph { radius: r.clone(), subdivision: sub, vertices, edges, x_vertex, x_segments })
}

pub fn is_injective(g: &MetricGraph, r: &Rational) -> Result<bool> {
    Ok(project(g, r)?.is_injective())
}

/// Topological summary of a quotient level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
    pub b0: usize,
    pub b1: usize,
    pub chi: i64,
    /// Segment cells whose ball is the whole graph.
    pub n0: usize,
    pub degree_multiset: Vec<usize>,
    pub canonical_code: String,
    pub is_point: bool,
}

impl Fingerprint {
    /// Same homeomorphism type.
    pub fn same_type(&self, other: &Fingerprint) -> bool {
        self.canonical_code == other.canonical_code
    }
}

pub fn fingerprint(q: &QuotientGraph) -> Fingerprint {
    let mg = q.multigraph();
    let (v, e) = (mg.n, mg.edges.len());
    let b0 = components(&mg);
    let smooth = mg.smoothed(&[]);
    let mut degree_multiset = smooth.degrees();
    degree_multiset.sort_unstable();
    Fingerprint {
        vertices: v,
        edges: e,
        b0,
        b1: e + b0 - v,
        chi: v as i64 - e as i64,
        n0: q.x_segments.len(),
        degree_multiset,
        canonical_code: smooth.canonical_code(),
        is_point: v == 1 && e == 0,
    }
}

fn components(mg: &Multigraph) -> usize {
    let mut parent: Vec<usize> = (0..mg.n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = mg.n;
    for &(u, v) in &mg.edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Margins of the Euler-characteristic and Betti bounds for a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub unit_edges: usize,
    /// `chi - (1 - 6|E|)`.
    pub basic_margin: i64,
    /// `chi - (1 + n0 - 6|E|)`.
    pub n0_margin: i64,
    /// `chi - (1 + 2 n0 - 6|E|)`; can be negative on valid quotients.
    pub doubled_n0_margin: i64,
    /// `(6|E| - n0) - b1`.
    pub betti_margin: i64,
}

impl EulerReport {
    pub fn doubled_n0_holds(&self) -> bool {
        self.doubled_n0_margin >= 0
    }
}

/// Checks `chi >= 1 - 6|E|`, `chi >= 1 + n0 - 6|E|` and `b1 <= 6|E| - n0`,
/// failing hard on a violation, and reports the margin of the stronger
/// `chi >= 1 + 2 n0 - 6|E|` without enforcing it.
pub fn euler_bounds_check(g: &MetricGraph, q: &QuotientGraph, f: &Fingerprint) -> Result<EulerReport> {
    if f.n0 != q.x_segments.len() {
        return Err(Error::Internal("fingerprint does not belong to this quotient".into()));
    }
    let e6 = 6 * g.num_edges() as i64;
    let n0 = f.n0 as i64;
    let report = EulerReport {
        unit_edges: g.num_edges(),
        basic_margin: f.chi - (1 - e6),
        n0_margin: f.chi - (1 + n0 - e6),
        doubled_n0_margin: f.chi - (1 + 2 * n0 - e6),
        betti_margin: (e6 - n0) - f.b1 as i64,
    };
    if report.basic_margin < 0 || report.n0_margin < 0 || report.betti_margin < 0 {
        return Err(Error::Internal(format!("Euler bound violated: {report:?}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn lengths(g: &MetricGraph, rad: Rational) -> Vec<Rational> {
        let s = subdivision(g, &rad).unwrap();
        s.segment_cells.iter().filter(|c| c.edge == 0).map(SegmentCell::length).collect()
    }

    #[test]
    fn cut_cases() {
        let g = fixtures::path_abc();
        assert_eq!(lengths(&g, r(3, 2)), vec![r(1, 2); 2]);
        assert_eq!(lengths(&g, r(5, 4)), vec![r(1, 4); 4]);
        let want: Vec<Rational> = [1, 3, 1, 1, 3, 1].iter().map(|&k| r(k, 10)).collect();
        assert_eq!(lengths(&g, r(11, 10)), want);
        let want: Vec<Rational> = [1, 1, 1, 1, 1, 1].iter().map(|&k| r(k, 6)).collect();
        assert_eq!(lengths(&g, r(1, 3)), want);
        assert_eq!(lengths(&g, r(2, 5)), vec![r(1, 10), r(3, 10), r(1, 10), r(1, 10), r(3, 10), r(1, 10)]);
        assert!(subdivision(&g, &r(0, 1)).is_err());
    }

    #[test]
    fn cycle_is_injective_at_half() {
        let g = fixtures::cycle(6);
        let q = project(&g, &r(1, 2)).unwrap();
        assert!(q.is_injective());
        assert_eq!((q.vertices.len(), q.edges.len()), (12, 12));
        assert!(is_injective(&g, &r(5, 4)).unwrap());
    }

    #[test]
    fn theta_at_one() {
        let g = fixtures::theta();
        let f0 = fingerprint(&project(&g, &r(1, 2)).unwrap());
        assert_eq!(f0.b1, 2);
        let q = project(&g, &r(1, 1)).unwrap();
        assert!(!q.is_injective());
        let f = fingerprint(&q);
        assert_eq!((f.b0, f.b1), (1, 1));
        assert_eq!(f.canonical_code, "1:0-0*1");
        let glued: Vec<_> = q.edges.iter().filter(|e| e.cells.len() == 2).collect();
        assert_eq!(glued.len(), 2);
        for e in glued {
            let edges: Vec<usize> = e.cells.iter().map(|(c, _)| q.subdivision.segment_cells[*c].edge).collect();
            assert_eq!(edges, vec![0, 1]);
        }
        let rep = euler_bounds_check(&g, &q, &f).unwrap();
        assert_eq!(rep.basic_margin, f.chi + 29);
    }

    #[test]
    fn scaled_and_exact_keys_agree() {
        for g in [fixtures::theta(), fixtures::comb(2), fixtures::cycle(5)] {
            for rad in [r(1, 2), r(7, 8), r(11, 10), r(5, 4), r(7, 3)] {
                let sub = subdivision(&g, &rad).unwrap();
                let scaled = Keyer::new(&g, &rad);
                assert!(matches!(scaled, Keyer::Scaled { .. }));
                let exact = Keyer::Exact(rad.clone());
                let mut pts = sub.vertex_cells.clone();
                for c in &sub.segment_cells {
                    pts.extend([c.at(&g, 1, 2), c.at(&g, 1, 4), c.at(&g, 3, 4)]);
                }
                for i in 0..pts.len() {
                    let (si, ei) = (scaled.key(&g, &pts[i]).unwrap(), exact.key(&g, &pts[i]).unwrap());
                    assert_eq!(si == scaled.whole(&g), ei == exact.whole(&g));
                    for j in 0..i {
                        let same_s = si == scaled.key(&g, &pts[j]).unwrap();
                        let same_e = ei == exact.key(&g, &pts[j]).unwrap();
                        assert_eq!(same_s, same_e, "{} vs {} at {rad}", pts[i], pts[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn path_collapses_at_diameter() {
        let g = fixtures::path_abc();
        let f = fingerprint(&project(&g, &r(2, 1)).unwrap());
        assert!(f.is_point);
        assert_eq!((f.b0, f.b1, f.chi), (1, 0, 1));
        assert!(project(&g, &r(1, 1)).unwrap().is_injective());
        assert!(!project(&g, &r(9, 8)).unwrap().is_injective());
    }
}
