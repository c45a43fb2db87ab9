//! Merge radii between points and the ultrametric tree they form.
//!
//! Once the balls about two points coincide they keep coinciding for every
//! larger radius, so the merge radius can be found by bisection. Every
//! coincidence event equates two coverage endpoints of the form
//! `r - d`, `1 + d - r` or `t +- r`, where each `d` is an integer plus an
//! offset of one of the two points; solving for `r` gives a multiple of
//! `1 / (2 q)` with `q` the common denominator of the offsets and 2.

use num_integer::Integer;

use crate::ball::{closed_ball, sets_equal};
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, MetricGraph};
use crate::rational::Rational;

fn step_for(pts: &[&GraphPoint]) -> Result<i64> {
    let mut q: i64 = 2;
    for p in pts {
        let d = p
            .t()
            .denom_u64()
            .and_then(|d| i64::try_from(d).ok())
            .ok_or_else(|| Error::Internal(format!("offset denominator of {p} too large")))?;
        q = q.lcm(&d);
    }
    q.checked_mul(2).ok_or_else(|| Error::Internal("candidate denominator overflow".into()))
}

/// Smallest `m` in `1..=hi` with `pred(m)`, given `pred` is monotone and
/// `pred(hi)` holds.
fn first_true(hi: i64, mut pred: impl FnMut(i64) -> Result<bool>) -> Result<i64> {
    let (mut lo, mut hi) = (0i64, hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Least radius at which the balls about `p` and `q` coincide.
pub fn merge_radius(g: &MetricGraph, p: &GraphPoint, q: &GraphPoint) -> Result<Rational> {
    if p == q {
        return Err(Error::SamePoint);
    }
    let den = step_for(&[p, q])?;
    let top = Rational::max_of(&g.eccentricity(p), &g.eccentricity(q));
    let m_hi = (&top * &Rational::from_int(den)).ceil().floor_i64().expect("bounded");
    let at = |m: i64| Rational::frac(m, den);
    let m = first_true(m_hi, |m| {
        let r = at(m);
        sets_equal(&closed_ball(g, p, &r)?, &closed_ball(g, q, &r)?)
    })?;
    Ok(at(m))
}

/// Least radius at which the ball about `p` is the whole graph, found by
/// bisection over the same candidate set as merge radii.
pub fn extinction_radius(g: &MetricGraph, p: &GraphPoint) -> Result<Rational> {
    let den = step_for(&[p])?;
    let m_hi = Rational::from(g.num_edges()).floor_i64().expect("bounded") * den;
    let m = first_true(m_hi, |m| Ok(closed_ball(g, p, &Rational::frac(m, den))?.is_full()))?;
    Ok(Rational::frac(m, den))
}

/// Vertex points plus offsets `j/k` on every edge, for `resolution = 1/k`.
pub fn sample_points(g: &MetricGraph, resolution: &Rational) -> Result<Vec<GraphPoint>> {
    let bad = || Error::BadResolution(resolution.to_string());
    if !resolution.is_positive() || resolution.numer() != 1.into() {
        return Err(bad());
    }
    let k = resolution.denom_u64().and_then(|d| i64::try_from(d).ok()).ok_or_else(bad)?;
    let mut pts: Vec<GraphPoint> = (0..g.num_vertices()).map(|v| g.vertex_point(v)).collect();
    for e in 0..g.num_edges() {
        for j in 1..k {
            pts.push(g.point(e, Rational::frac(j, k))?);
        }
    }
    Ok(pts)
}

#[derive(Clone, Debug)]
pub struct MergeMatrix {
    pub points: Vec<GraphPoint>,
    pub mu: Vec<Vec<Rational>>,
}

pub fn merge_matrix(g: &MetricGraph, points: &[GraphPoint]) -> Result<MergeMatrix> {
    let n = points.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = merge_radius(g, &points[i], &points[j])?;
            mu[i][j] = m.clone();
            mu[j][i] = m;
        }
    }
    Ok(MergeMatrix { points: points.to_vec(), mu })
}

#[derive(Clone, Debug, Default)]
pub struct UltrametricReport {
    pub ok: bool,
    /// Triples `(i, j, k)` with `mu[i][k] > max(mu[i][j], mu[j][k])`.
    pub violations: Vec<(usize, usize, usize)>,
}

pub fn ultrametric_check(m: &MergeMatrix) -> UltrametricReport {
    let n = m.mu.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in i + 1..n {
                if j == i || j == k {
                    continue;
                }
                if m.mu[i][k] > Rational::max_of(&m.mu[i][j], &m.mu[j][k]) {
                    violations.push((i, j, k));
                }
            }
        }
    }
    UltrametricReport { ok: violations.is_empty(), violations }
}

#[derive(Clone, Debug)]
pub struct DendrogramNode {
    pub radius: Rational,
    /// Child node indices, ordered by their smallest member.
    pub children: Vec<usize>,
    /// Sorted point indices below this node.
    pub members: Vec<usize>,
}

/// Nodes `0..n` are the leaves, in point order; internal nodes follow in
/// order of increasing radius.
#[derive(Clone, Debug)]
pub struct Dendrogram {
    pub points: Vec<GraphPoint>,
    pub nodes: Vec<DendrogramNode>,
    pub root: usize,
    /// Radius at which each point's ball becomes the whole graph.
    pub extinction: Vec<Rational>,
    pub matrix: MergeMatrix,
}

impl Dendrogram {
    /// Point classes `{i, j : mu[i][j] <= r}`, each sorted, ordered by first member.
    pub fn cut(&self, r: &Rational) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if &node.radius <= r {
                out.push(node.members.clone());
            } else {
                stack.extend(node.children.iter().copied());
            }
        }
        out.sort();
        out
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Agglomerates `pts` by exact merge radius; points that join at the same
/// radius share one node.
pub fn build_merge_tree(g: &MetricGraph, pts: &[GraphPoint]) -> Result<Dendrogram> {
    if pts.len() < 2 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let matrix = merge_matrix(g, pts)?;
    let check = ultrametric_check(&matrix);
    if !check.ok {
        return Err(Error::Internal(format!(
            "merge radii violate the strong triangle inequality at {:?}",
            &check.violations[..check.violations.len().min(5)]
        )));
    }
    let n = pts.len();
    let mut nodes: Vec<DendrogramNode> =
        (0..n).map(|i| DendrogramNode { radius: Rational::zero(), children: Vec::new(), members: vec![i] }).collect();
    let mut pairs: Vec<(Rational, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((matrix.mu[i][j].clone(), i, j));
        }
    }
    pairs.sort();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut node_of: Vec<usize> = (0..n).collect();
    let mut k = 0;
    while k < pairs.len() {
        let radius = pairs[k].0.clone();
        let mut level: Vec<(usize, usize)> = Vec::new();
        while k < pairs.len() && pairs[k].0 == radius {
            let (a, b) = (find(&mut parent, pairs[k].1), find(&mut parent, pairs[k].2));
            if a != b {
                level.push((a, b));
            }
            k += 1;
        }
        if level.is_empty() {
            continue;
        }
        // group the components joined at this radius
        let mut roots: Vec<usize> = level.iter().flat_map(|&(a, b)| [a, b]).collect();
        roots.sort_unstable();
        roots.dedup();
        let old_node: Vec<(usize, usize)> = roots.iter().map(|&r| (r, node_of[r])).collect();
        for &(a, b) in &level {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (r, node) in old_node {
            let top = find(&mut parent, r);
            match groups.iter_mut().find(|(t, _)| *t == top) {
                Some((_, v)) => v.push(node),
                None => groups.push((top, vec![node])),
            }
        }
        for (top, mut children) in groups {
            children.sort_by_key(|&c| nodes[c].members[0]);
            let mut members: Vec<usize> = children.iter().flat_map(|&c| nodes[c].members.clone()).collect();
            members.sort_unstable();
            nodes.push(DendrogramNode { radius: radius.clone(), children, members });
            node_of[top] = nodes.len() - 1;
        }
    }
    let root = nodes.len() - 1;
    let extinction = pts.iter().map(|p| extinction_radius(g, p)).collect::<Result<Vec<_>>>()?;
    Ok(Dendrogram { points: pts.to_vec(), nodes, root, extinction, matrix })
}
