//! Brute-force oracles and random inputs shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use semiflow::quotient::QuotientGraph;
use semiflow::{closed_ball, BallSet, GraphPoint, MetricGraph, Rational};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// Every vertex plus offsets `j/k` on each edge.
pub fn grid_points(g: &MetricGraph, k: i64) -> Vec<GraphPoint> {
    let mut out: Vec<GraphPoint> = (0..g.num_vertices()).map(|v| g.vertex_point(v)).collect();
    for e in 0..g.num_edges() {
        for j in 1..k {
            out.push(g.point(e, r(j, k)).unwrap());
        }
    }
    out
}

/// Sample points of `A`: its grid points at resolution `1/k` plus every
/// interval endpoint.
pub fn set_samples(g: &MetricGraph, a: &BallSet, k: i64) -> Vec<GraphPoint> {
    let mut out: Vec<GraphPoint> = grid_points(g, k).into_iter().filter(|p| a.contains(p)).collect();
    for (e, c) in a.coverage().iter().enumerate() {
        for (lo, hi) in c.intervals() {
            out.push(g.point(e, lo.clone()).unwrap());
            out.push(g.point(e, hi.clone()).unwrap());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Hausdorff distance between two sample clouds using only point distances.
pub fn sampled_hausdorff(g: &MetricGraph, a: &[GraphPoint], b: &[GraphPoint]) -> Rational {
    let directed = |xs: &[GraphPoint], ys: &[GraphPoint]| {
        xs.iter().map(|x| ys.iter().map(|y| g.point_distance(x, y)).min().unwrap()).max().unwrap()
    };
    Rational::max_of(&directed(a, b), &directed(b, a))
}

/// Largest distance from `p` to a grid point at resolution `1/k`.
pub fn sampled_eccentricity(g: &MetricGraph, p: &GraphPoint, k: i64) -> Rational {
    grid_points(g, k).iter().map(|q| g.point_distance(p, q)).max().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellLabel {
    Vertex(usize),
    /// Edge class and position measured along its first member.
    Edge(usize, Rational),
    Whole,
}

/// Where the quotient sends a point, read off the cell structure.
pub fn quotient_label(q: &QuotientGraph, p: &GraphPoint) -> CellLabel {
    let sub = &q.subdivision;
    if let Some(i) = sub.vertex_cells.iter().position(|c| c == p) {
        let v = q.vertices.iter().position(|cls| cls.cells.contains(&i)).unwrap();
        return if Some(v) == q.x_vertex { CellLabel::Whole } else { CellLabel::Vertex(v) };
    }
    let (s, seg) = sub
        .segment_cells
        .iter()
        .enumerate()
        .find(|(_, s)| s.edge == p.edge() && &s.lo < p.t() && p.t() < &s.hi)
        .expect("point inside some segment");
    if q.x_segments.contains(&s) {
        return CellLabel::Whole;
    }
    for (k, e) in q.edges.iter().enumerate() {
        if let Some((_, rev)) = e.cells.iter().find(|(c, _)| *c == s) {
            let pos = if *rev { &seg.hi - p.t() } else { p.t() - &seg.lo };
            return CellLabel::Edge(k, pos);
        }
    }
    panic!("segment {s} belongs to no class");
}

/// Compares the identification made by `q` with direct ball equality over
/// grid points at resolution `1/k`. Returns a description of the first
/// disagreement.
pub fn cell_equivalence_mismatch(g: &MetricGraph, q: &QuotientGraph, k: i64) -> Option<String> {
    let pts = grid_points(g, k);
    let whole = BallSet::whole(g);
    let mut by_ball: HashMap<BallSet, usize> = HashMap::new();
    let mut by_label: HashMap<CellLabel, usize> = HashMap::new();
    let mut ball_class = Vec::new();
    let mut label_class = Vec::new();
    for p in &pts {
        let b = closed_ball(g, p, &q.radius).unwrap().with_meta(None);
        let label = quotient_label(q, p);
        if (b == whole) != (label == CellLabel::Whole) {
            return Some(format!("{p}: whole-ball status differs"));
        }
        let n = by_ball.len();
        ball_class.push(*by_ball.entry(b).or_insert(n));
        let n = by_label.len();
        label_class.push(*by_label.entry(label).or_insert(n));
    }
    for i in 0..pts.len() {
        for j in 0..i {
            if (ball_class[i] == ball_class[j]) != (label_class[i] == label_class[j]) {
                return Some(format!("{} and {} at r = {}", pts[i], pts[j], q.radius));
            }
        }
    }
    None
}

pub fn random_point<R: Rng>(rng: &mut R, g: &MetricGraph, den: i64) -> GraphPoint {
    let e = rng.gen_range(0..g.num_edges());
    g.point(e, r(rng.gen_range(0..=den), den)).unwrap()
}

pub fn random_radius<R: Rng>(rng: &mut R, max: i64, den: i64) -> Rational {
    r(rng.gen_range(0..=max * den), den)
}
