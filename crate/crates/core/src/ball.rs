//! Closed subsets of a metric graph stored as interval unions per edge, and
//! the closed-ball expansion acting on them.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{merge_intervals, EdgeField};
use crate::graph::{GraphPoint, MetricGraph};
use crate::rational::Rational;

/// Sorted, maximal closed intervals inside `[0, 1]`. Degenerate intervals
/// stand for isolated points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeCoverage {
    intervals: Vec<(Rational, Rational)>,
}

impl EdgeCoverage {
    pub fn empty() -> Self {
        EdgeCoverage { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        EdgeCoverage { intervals: vec![(Rational::zero(), Rational::one())] }
    }

    /// Canonicalises arbitrary closed intervals; panics on an interval
    /// outside `[0, 1]` or with `lo > hi`.
    pub fn from_intervals(v: Vec<(Rational, Rational)>) -> Self {
        for (lo, hi) in &v {
            assert!(!lo.is_negative() && lo <= hi && hi <= &Rational::one(), "interval [{lo}, {hi}] outside [0,1]");
        }
        EdgeCoverage { intervals: merge_intervals(v) }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].0.is_zero() && self.intervals[0].1 == Rational::one()
    }

    pub fn contains(&self, s: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= s && s <= hi)
    }

    /// True when `s` lies in the relative interior of the covered set.
    pub fn contains_interior(&self, s: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo < s && s < hi)
    }

    pub fn length(&self) -> Rational {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn is_subset_of(&self, other: &EdgeCoverage) -> bool {
        self.intervals.iter().all(|(lo, hi)| other.intervals.iter().any(|(a, b)| a <= lo && hi <= b))
    }

    fn union(&self, other: &EdgeCoverage) -> EdgeCoverage {
        let mut v = self.intervals.clone();
        v.extend(other.intervals.iter().cloned());
        EdgeCoverage { intervals: merge_intervals(v) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallMeta {
    pub center: GraphPoint,
    pub radius: Rational,
}

/// A closed subset of a graph. Equality and hashing look at the covered
/// set only; `meta` is informational.
#[derive(Clone, Debug)]
pub struct BallSet {
    graph_id: u64,
    coverage: Vec<EdgeCoverage>,
    meta: Option<BallMeta>,
}

impl PartialEq for BallSet {
    fn eq(&self, other: &Self) -> bool {
        self.graph_id == other.graph_id && self.coverage == other.coverage
    }
}

impl Eq for BallSet {}

impl Hash for BallSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph_id.hash(state);
        self.coverage.hash(state);
    }
}

impl BallSet {
    /// Wraps per-edge coverages, adding the endpoint offsets of any covered
    /// vertex on every incident edge.
    pub fn from_coverage(g: &MetricGraph, mut coverage: Vec<EdgeCoverage>) -> Self {
        assert_eq!(coverage.len(), g.num_edges(), "one coverage per edge");
        let one = Rational::one();
        let zero = Rational::zero();
        let mut covered = vec![false; g.num_vertices()];
        for (e, c) in coverage.iter().enumerate() {
            let ed = g.edge(e);
            if c.contains(&zero) {
                covered[ed.tail] = true;
            }
            if c.contains(&one) {
                covered[ed.head] = true;
            }
        }
        for (e, c) in coverage.iter_mut().enumerate() {
            let ed = g.edge(e);
            let mut extra = Vec::new();
            if covered[ed.tail] && !c.contains(&zero) {
                extra.push((zero.clone(), zero.clone()));
            }
            if covered[ed.head] && !c.contains(&one) {
                extra.push((one.clone(), one.clone()));
            }
            if !extra.is_empty() {
                *c = c.union(&EdgeCoverage { intervals: extra });
            }
        }
        BallSet { graph_id: g.id(), coverage, meta: None }
    }

    pub fn empty(g: &MetricGraph) -> Self {
        BallSet { graph_id: g.id(), coverage: vec![EdgeCoverage::empty(); g.num_edges()], meta: None }
    }

    pub fn whole(g: &MetricGraph) -> Self {
        BallSet { graph_id: g.id(), coverage: vec![EdgeCoverage::full(); g.num_edges()], meta: None }
    }

    /// The finite set of the given points.
    pub fn from_points(g: &MetricGraph, pts: &[GraphPoint]) -> Result<Self> {
        let mut per = vec![Vec::new(); g.num_edges()];
        for p in pts {
            if p.edge() >= g.num_edges() {
                return Err(Error::InvalidEdge(p.edge(), g.num_edges()));
            }
            per[p.edge()].push((p.t().clone(), p.t().clone()));
        }
        Ok(Self::from_coverage(g, per.into_iter().map(EdgeCoverage::from_intervals).collect()))
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn coverage(&self) -> &[EdgeCoverage] {
        &self.coverage
    }

    pub fn meta(&self) -> Option<&BallMeta> {
        self.meta.as_ref()
    }

    pub fn with_meta(mut self, meta: Option<BallMeta>) -> Self {
        self.meta = meta;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.coverage.iter().all(EdgeCoverage::is_empty)
    }

    pub fn is_full(&self) -> bool {
        self.coverage.iter().all(EdgeCoverage::is_full)
    }

    pub fn contains(&self, p: &GraphPoint) -> bool {
        self.coverage[p.edge()].contains(p.t())
    }

    pub fn is_subset_of(&self, other: &BallSet) -> bool {
        self.coverage.iter().zip(&other.coverage).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn union(&self, other: &BallSet) -> Result<BallSet> {
        if self.graph_id != other.graph_id {
            return Err(Error::GraphMismatch);
        }
        let coverage = self.coverage.iter().zip(&other.coverage).map(|(a, b)| a.union(b)).collect();
        Ok(BallSet { graph_id: self.graph_id, coverage, meta: None })
    }

    /// Every interval endpoint, as raw `(edge, offset)` pairs.
    pub fn endpoints(&self) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        for (e, c) in self.coverage.iter().enumerate() {
            for (lo, hi) in &c.intervals {
                out.push((e, lo.clone()));
                if hi != lo {
                    out.push((e, hi.clone()));
                }
            }
        }
        out
    }

    /// Distance from each vertex to the set.
    ///
    /// A path from a vertex into an interval on edge `f` enters `f` through an
    /// endpoint vertex and first meets the interval at its near end, so only
    /// the lowest start and highest end per edge matter.
    fn vertex_distances(&self, g: &MetricGraph) -> Vec<Rational> {
        let nv = g.num_vertices();
        let mut seed: Vec<Option<Rational>> = vec![None; nv];
        let mut put = |v: usize, d: Rational| {
            if seed[v].as_ref().is_none_or(|old| &d < old) {
                seed[v] = Some(d);
            }
        };
        for (e, c) in self.coverage.iter().enumerate() {
            if let (Some(first), Some(last)) = (c.intervals.first(), c.intervals.last()) {
                let ed = g.edge(e);
                put(ed.tail, first.0.clone());
                put(ed.head, Rational::one() - &last.1);
            }
        }
        let seeds: Vec<(usize, Rational)> =
            seed.into_iter().enumerate().filter_map(|(v, d)| d.map(|d| (v, d))).collect();
        (0..nv)
            .map(|v| seeds.iter().map(|(u, d)| d + &Rational::from(g.d(*u, v))).min().expect("nonempty set"))
            .collect()
    }

    /// Distance fields from this set along every edge.
    fn fields(&self, g: &MetricGraph) -> Vec<EdgeField> {
        let vd = self.vertex_distances(g);
        (0..g.num_edges())
            .map(|f| {
                let ed = g.edge(f);
                EdgeField::new(vd[ed.tail].clone(), vd[ed.head].clone(), self.coverage[f].intervals.clone())
            })
            .collect()
    }

    /// Distance from an arbitrary point to the set.
    pub fn distance_to(&self, g: &MetricGraph, p: &GraphPoint) -> Rational {
        let vd = self.vertex_distances(g);
        let ed = g.edge(p.edge());
        EdgeField::new(vd[ed.tail].clone(), vd[ed.head].clone(), self.coverage[p.edge()].intervals.clone()).value(p.t())
    }
}

/// `{x : d(p, x) <= r}`.
pub fn closed_ball(g: &MetricGraph, p: &GraphPoint, r: &Rational) -> Result<BallSet> {
    if r.is_negative() {
        return Err(Error::NegativeRadius(r.to_string()));
    }
    let coverage = (0..g.num_edges()).map(|f| EdgeCoverage { intervals: g.point_field(p, f).sublevel(r) }).collect();
    Ok(BallSet { graph_id: g.id(), coverage, meta: Some(BallMeta { center: p.clone(), radius: r.clone() }) })
}

/// Whether the ball about `p` of radius `r` is the whole graph.
pub fn ball_is_whole(g: &MetricGraph, p: &GraphPoint, r: &Rational) -> bool {
    &g.eccentricity(p) <= r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub point: GraphPoint,
    /// The point is a limit of points outside the ball.
    pub outer: bool,
}

/// Points at distance exactly `r` from `p`.
pub fn sphere(g: &MetricGraph, p: &GraphPoint, r: &Rational) -> Result<Vec<BoundaryPoint>> {
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.to_string()));
    }
    let ball = closed_ball(g, p, r)?;
    let mut out: Vec<BoundaryPoint> = Vec::new();
    let mut vertex_seen = vec![false; g.num_vertices()];
    for f in 0..g.num_edges() {
        for s in g.point_field(p, f).level_points(r) {
            let point = g.point(f, s)?;
            match g.point_vertex(&point) {
                Some(v) => {
                    if !vertex_seen[v] {
                        vertex_seen[v] = true;
                        out.push(BoundaryPoint { outer: vertex_is_outer(g, &ball, v), point });
                    }
                }
                None => {
                    let outer = !ball.coverage[f].contains_interior(point.t());
                    out.push(BoundaryPoint { point, outer });
                }
            }
        }
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

fn vertex_is_outer(g: &MetricGraph, ball: &BallSet, v: usize) -> bool {
    g.incidence(v).iter().any(|&(e, end)| {
        let c = &ball.coverage[e];
        if end == 0 {
            !c.intervals.first().is_some_and(|(lo, hi)| lo.is_zero() && hi.is_positive())
        } else {
            !c.intervals.last().is_some_and(|(lo, hi)| hi == &Rational::one() && lo < hi)
        }
    })
}

/// Set equality; errors when the sets come from different graphs.
pub fn sets_equal(a: &BallSet, b: &BallSet) -> Result<bool> {
    if a.graph_id != b.graph_id {
        return Err(Error::GraphMismatch);
    }
    Ok(a.coverage == b.coverage)
}

/// `{x : d(x, A) <= t}`. The distance from a point to a closed interval of an
/// edge is reached at one of the interval's endpoints (or is zero), so this
/// equals the union of `A` with the radius-`t` balls about those endpoints.
pub fn dilate(g: &MetricGraph, a: &BallSet, t: &Rational) -> Result<BallSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.graph_id != g.id() {
        return Err(Error::GraphMismatch);
    }
    if t.is_negative() {
        return Err(Error::NegativeRadius(t.to_string()));
    }
    let coverage = a.fields(g).iter().map(|f| EdgeCoverage { intervals: f.sublevel(t) }).collect();
    Ok(BallSet { graph_id: a.graph_id, coverage, meta: None })
}

pub fn set_length(a: &BallSet) -> Rational {
    a.coverage.iter().map(EdgeCoverage::length).sum()
}

/// `1 - length(A) / length(X)`.
pub fn lyapunov(g: &MetricGraph, a: &BallSet) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Rational::one() - set_length(a) / Rational::from(g.num_edges()))
}

/// `sup_{x in A} d(x, B)`.
pub fn directed_hausdorff(g: &MetricGraph, a: &BallSet, b: &BallSet) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.graph_id != b.graph_id || a.graph_id != g.id() {
        return Err(Error::GraphMismatch);
    }
    let fields = b.fields(g);
    let mut best = Rational::zero();
    for (f, c) in a.coverage.iter().enumerate() {
        for (lo, hi) in &c.intervals {
            let (v, _) = fields[f].max_on(lo, hi);
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

pub fn hausdorff(g: &MetricGraph, a: &BallSet, b: &BallSet) -> Result<Rational> {
    let ab = directed_hausdorff(g, a, b)?;
    let ba = directed_hausdorff(g, b, a)?;
    Ok(Rational::max_of(&ab, &ba))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn cov(v: &[(i64, i64, i64, i64)]) -> EdgeCoverage {
        EdgeCoverage::from_intervals(v.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))).collect())
    }

    #[test]
    fn path_half_ball() {
        let g = fixtures::path_abc();
        let b = closed_ball(&g, &g.vertex_point(0), &r(1, 2)).unwrap();
        assert_eq!(b.coverage()[0], cov(&[(0, 1, 1, 2)]));
        assert!(b.coverage()[1].is_empty());
    }

    #[test]
    fn c4_ball() {
        let g = fixtures::cycle(4);
        let b = closed_ball(&g, &g.vertex_point(0), &r(3, 2)).unwrap();
        assert!(b.coverage()[0].is_full() && b.coverage()[3].is_full());
        assert_eq!(b.coverage()[1], cov(&[(0, 1, 1, 2)]));
        assert_eq!(b.coverage()[2], cov(&[(1, 2, 1, 1)]));
    }

    #[test]
    fn zero_radius_is_singleton() {
        let g = fixtures::theta();
        let p = g.point(4, r(1, 3)).unwrap();
        let b = closed_ball(&g, &p, &r(0, 1)).unwrap();
        assert_eq!(b, BallSet::from_points(&g, &[p]).unwrap());
        let v = g.vertex_point(0);
        let bv = closed_ball(&g, &v, &r(0, 1)).unwrap();
        assert_eq!(bv, BallSet::from_points(&g, &[v]).unwrap());
        assert!(closed_ball(&g, &g.vertex_point(0), &r(-1, 2)).is_err());
    }

    #[test]
    fn spheres() {
        let g = fixtures::path_abc();
        let s = sphere(&g, &g.vertex_point(0), &r(1, 2)).unwrap();
        assert_eq!(s, vec![BoundaryPoint { point: g.point(0, r(1, 2)).unwrap(), outer: true }]);

        let c4 = fixtures::cycle(4);
        let s = sphere(&c4, &c4.vertex_point(0), &r(2, 1)).unwrap();
        assert_eq!(s, vec![BoundaryPoint { point: c4.vertex_point(2), outer: false }]);

        let th = fixtures::theta();
        let p = th.point(0, r(1, 3)).unwrap();
        let s = sphere(&th, &p, &r(1, 1)).unwrap();
        let on_e2 = s.iter().find(|b| b.point.edge() == 1).unwrap();
        assert_eq!((on_e2.point.t().clone(), on_e2.outer), (r(2, 3), false));
        for b in &s {
            assert_eq!(th.point_distance(&p, &b.point), r(1, 1));
        }
        assert!(s.iter().filter(|b| b.point.edge() >= 2).all(|b| b.outer));
        assert!(sphere(&g, &g.vertex_point(0), &r(0, 1)).is_err());
    }

    #[test]
    fn theta_parallel_merge() {
        let g = fixtures::theta();
        let m1 = g.point(0, r(1, 2)).unwrap();
        let m2 = g.point(1, r(1, 2)).unwrap();
        let a = closed_ball(&g, &m1, &r(1, 1)).unwrap();
        let b = closed_ball(&g, &m2, &r(1, 1)).unwrap();
        assert!(sets_equal(&a, &b).unwrap());
        assert_eq!(set_length(&a), r(3, 1));
        assert_eq!(lyapunov(&g, &a).unwrap(), r(2, 5));
        let a = closed_ball(&g, &m1, &r(15, 16)).unwrap();
        let b = closed_ball(&g, &m2, &r(15, 16)).unwrap();
        assert!(!sets_equal(&a, &b).unwrap());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = BallSet::whole(&fixtures::path_abc());
        let b = BallSet::whole(&fixtures::cycle(2));
        assert_eq!(sets_equal(&a, &b).unwrap_err().code(), "graph-mismatch");
    }

    #[test]
    fn dilate_two_endpoints() {
        let g = fixtures::path_abc();
        let a = BallSet::from_points(&g, &[g.vertex_point(0), g.vertex_point(2)]).unwrap();
        assert!(dilate(&g, &a, &r(1, 1)).unwrap().is_full());
        assert_eq!(dilate(&g, &a, &r(0, 1)).unwrap(), a);
        assert!(dilate(&g, &BallSet::empty(&g), &r(1, 1)).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let g = fixtures::path_abc();
        let a = BallSet::from_coverage(&g, vec![EdgeCoverage::full(), EdgeCoverage::empty()]);
        assert_eq!(hausdorff(&g, &a, &BallSet::whole(&g)).unwrap(), r(1, 1));
        let p = g.point(0, r(1, 3)).unwrap();
        let q = g.point(1, r(3, 4)).unwrap();
        let sp = BallSet::from_points(&g, std::slice::from_ref(&p)).unwrap();
        let sq = BallSet::from_points(&g, std::slice::from_ref(&q)).unwrap();
        assert_eq!(hausdorff(&g, &sp, &sq).unwrap(), g.point_distance(&p, &q));
    }

    #[test]
    fn lyapunov_extremes() {
        let g = fixtures::cycle(6);
        let s = BallSet::from_points(&g, &[g.vertex_point(3)]).unwrap();
        assert_eq!(lyapunov(&g, &s).unwrap(), r(1, 1));
        assert_eq!(lyapunov(&g, &BallSet::whole(&g)).unwrap(), r(0, 1));
        assert_eq!(set_length(&BallSet::whole(&g)), r(6, 1));
    }

    #[test]
    fn vertex_consistency_is_enforced() {
        let g = fixtures::path_abc();
        let a = BallSet::from_coverage(&g, vec![cov(&[(1, 2, 1, 1)]), EdgeCoverage::empty()]);
        assert_eq!(a.coverage()[1], cov(&[(0, 1, 0, 1)]));
    }
}
