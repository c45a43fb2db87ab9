//! Finite metric graphs normalised to unit-length edges.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Deserialize;

use crate::ball::{BallSet, EdgeCoverage};
use crate::error::{Error, Result};
use crate::field::EdgeField;
use crate::rational::Rational;

/// Upper bound on unit edges produced by normalisation.
pub const MAX_UNIT_EDGES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

/// An edge of the input document, before subdivision.
#[derive(Clone, Debug)]
pub struct OriginalEdge {
    pub u: usize,
    pub v: usize,
    pub len: Rational,
    /// Unit edges it was split into, in tail-to-head order.
    pub units: std::ops::Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Input,
    /// `step`-th interior point of original edge `edge`, counted from its tail.
    Subdivision {
        edge: usize,
        step: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeOrigin {
    pub original: usize,
    pub piece: usize,
}

/// A location on a unit edge. Built through [`MetricGraph::point`], which
/// replaces endpoint offsets by the canonical vertex representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphPoint {
    pub(crate) edge: usize,
    pub(crate) t: Rational,
}

impl GraphPoint {
    pub fn edge(&self) -> usize {
        self.edge
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(e{}, {})", self.edge, self.t)
    }
}

#[derive(Clone, Debug)]
pub struct MetricGraph {
    name: String,
    vertex_names: Vec<String>,
    vertex_origin: Vec<VertexOrigin>,
    edges: Vec<Edge>,
    edge_origin: Vec<EdgeOrigin>,
    originals: Vec<OriginalEdge>,
    input_vertices: usize,
    scale: Rational,
    /// `(edge, end)` pairs per vertex, `end` 0 for tail and 1 for head.
    incidence: Vec<Vec<(usize, u8)>>,
    canonical_vertex: Vec<(usize, bool)>,
    dist: Vec<u32>,
    id: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    #[serde(default)]
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: String,
    v: String,
    #[serde(default = "unit_len")]
    len: String,
}

fn unit_len() -> String {
    "1".to_string()
}

/// Parse a JSON graph document and normalise it.
pub fn load_graph(document: &str) -> Result<MetricGraph> {
    let doc: GraphDoc = serde_json::from_str(document).map_err(|e| Error::Document(e.to_string()))?;
    let mut index = HashMap::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if index.insert(v.as_str(), i).is_some() {
            return Err(Error::DuplicateVertex(v.clone()));
        }
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let u = *index.get(e.u.as_str()).ok_or_else(|| Error::UnknownVertex(e.u.clone()))?;
        let v = *index.get(e.v.as_str()).ok_or_else(|| Error::UnknownVertex(e.v.clone()))?;
        edges.push((u, v, e.len.parse::<Rational>()?));
    }
    MetricGraph::from_edges(&doc.name, &doc.vertices, &edges)
}

impl MetricGraph {
    /// Build from named vertices and `(u, v, length)` triples.
    pub fn from_edges<S: AsRef<str>>(name: &str, vertices: &[S], edges: &[(usize, usize, Rational)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let n = vertices.len();
        let mut den_lcm = BigInt::one();
        for (i, (u, v, len)) in edges.iter().enumerate() {
            for w in [u, v] {
                if *w >= n {
                    return Err(Error::UnknownVertex(format!("#{w}")));
                }
            }
            if !len.is_positive() {
                return Err(Error::NonPositiveLength(i, len.to_string()));
            }
            den_lcm = den_lcm.lcm(&len.denom());
        }
        if !input_connected(n, edges) {
            return Err(Error::Disconnected);
        }
        let too_big = || Error::Document(format!("more than {MAX_UNIT_EDGES} unit edges"));
        let l = den_lcm.to_i64().ok_or_else(too_big)?;
        let scale = Rational::new(1, l)?;

        let mut vertex_names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut vertex_origin = vec![VertexOrigin::Input; n];
        let mut unit_edges = Vec::new();
        let mut edge_origin = Vec::new();
        let mut originals = Vec::with_capacity(edges.len());
        for (i, (u, v, len)) in edges.iter().enumerate() {
            let count = (len * &Rational::from_int(l))
                .floor_i64()
                .and_then(|c| usize::try_from(c).ok())
                .filter(|c| unit_edges.len() + c <= MAX_UNIT_EDGES)
                .ok_or_else(too_big)?;
            let start = unit_edges.len();
            let mut prev = *u;
            for piece in 0..count {
                let next = if piece + 1 == count {
                    *v
                } else {
                    vertex_names.push(format!("{}~{}:{}/{}", vertex_names[*u], vertex_names[*v], piece + 1, count));
                    vertex_origin.push(VertexOrigin::Subdivision { edge: i, step: piece + 1 });
                    vertex_names.len() - 1
                };
                unit_edges.push(Edge { tail: prev, head: next });
                edge_origin.push(EdgeOrigin { original: i, piece });
                prev = next;
            }
            originals.push(OriginalEdge { u: *u, v: *v, len: len.clone(), units: start..unit_edges.len() });
        }
        Ok(Self::assemble(name, vertex_names, vertex_origin, unit_edges, edge_origin, originals, n, scale))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: &str,
        vertex_names: Vec<String>,
        vertex_origin: Vec<VertexOrigin>,
        edges: Vec<Edge>,
        edge_origin: Vec<EdgeOrigin>,
        originals: Vec<OriginalEdge>,
        input_vertices: usize,
        scale: Rational,
    ) -> Self {
        let nv = vertex_names.len();
        let mut incidence = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.tail].push((i, 0));
            incidence[e.head].push((i, 1));
        }
        let canonical_vertex = incidence
            .iter()
            .map(|inc| {
                inc.iter()
                    .find(|(_, end)| *end == 0)
                    .map(|(e, _)| (*e, false))
                    .or_else(|| inc.first().map(|(e, _)| (*e, true)))
                    .expect("connected graph has no isolated vertex")
            })
            .collect();
        let dist = all_pairs_bfs(nv, &incidence, &edges);
        let mut h = DefaultHasher::new();
        nv.hash(&mut h);
        edges.hash(&mut h);
        scale.hash(&mut h);
        MetricGraph {
            name: name.to_string(),
            vertex_names,
            vertex_origin,
            edges,
            edge_origin,
            originals,
            input_vertices,
            scale,
            incidence,
            canonical_vertex,
            dist,
            id: h.finish(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Content hash; balls over graphs with different ids never compare.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn input_vertex_count(&self) -> usize {
        self.input_vertices
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_origin(&self, e: usize) -> EdgeOrigin {
        self.edge_origin[e]
    }

    pub fn originals(&self) -> &[OriginalEdge] {
        &self.originals
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_origin(&self, v: usize) -> &VertexOrigin {
        &self.vertex_origin[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn incidence(&self, v: usize) -> &[(usize, u8)] {
        &self.incidence[v]
    }

    /// Length of one unit edge in input units.
    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn to_user(&self, x: &Rational) -> Rational {
        x * &self.scale
    }

    pub fn from_user(&self, x: &Rational) -> Rational {
        x / &self.scale
    }

    /// Unit-edge distance between two vertices.
    pub fn d(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.num_vertices() + v]
    }

    pub fn vertex_distances(&self) -> Vec<Vec<u32>> {
        let n = self.num_vertices();
        self.dist.chunks(n).map(|row| row.to_vec()).collect()
    }

    /// Validated, canonical point at offset `t` of edge `edge`.
    pub fn point(&self, edge: usize, t: Rational) -> Result<GraphPoint> {
        if edge >= self.num_edges() {
            return Err(Error::InvalidEdge(edge, self.num_edges()));
        }
        if t.is_negative() || t > Rational::one() {
            return Err(Error::InvalidOffset(t.to_string()));
        }
        Ok(self.canonical(GraphPoint { edge, t }))
    }

    pub fn vertex_point(&self, v: usize) -> GraphPoint {
        let (edge, head) = self.canonical_vertex[v];
        GraphPoint { edge, t: if head { Rational::one() } else { Rational::zero() } }
    }

    fn canonical(&self, p: GraphPoint) -> GraphPoint {
        match self.raw_vertex(p.edge, &p.t) {
            Some(v) => self.vertex_point(v),
            None => p,
        }
    }

    fn raw_vertex(&self, edge: usize, t: &Rational) -> Option<usize> {
        if t.is_zero() {
            Some(self.edges[edge].tail)
        } else if t == &Rational::one() {
            Some(self.edges[edge].head)
        } else {
            None
        }
    }

    /// The vertex a point sits on, if any.
    pub fn point_vertex(&self, p: &GraphPoint) -> Option<usize> {
        self.raw_vertex(p.edge, &p.t)
    }

    /// Distance from an arbitrary edge offset to vertex `v`.
    pub(crate) fn offset_to_vertex(&self, edge: usize, t: &Rational, v: usize) -> Rational {
        let e = self.edges[edge];
        if let Some(u) = self.raw_vertex(edge, t) {
            return Rational::from(self.d(u, v));
        }
        let via_tail = t + &Rational::from(self.d(e.tail, v));
        let via_head = &(Rational::one() - t) + &Rational::from(self.d(e.head, v));
        Rational::min_of(&via_tail, &via_head)
    }

    pub fn point_to_vertex(&self, p: &GraphPoint, v: usize) -> Rational {
        self.offset_to_vertex(p.edge, &p.t, v)
    }

    /// Exact geodesic distance between two points.
    pub fn point_distance(&self, p: &GraphPoint, q: &GraphPoint) -> Rational {
        if let Some(v) = self.point_vertex(q) {
            return self.point_to_vertex(p, v);
        }
        let e = self.edges[q.edge];
        let via_tail = &q.t + &self.point_to_vertex(p, e.tail);
        let via_head = &(Rational::one() - &q.t) + &self.point_to_vertex(p, e.head);
        let mut best = Rational::min_of(&via_tail, &via_head);
        if p.edge == q.edge {
            let inner = (&p.t - &q.t).abs();
            if inner < best {
                best = inner;
            }
        }
        best
    }

    /// Distance field from a point (given by raw offset) along edge `f`.
    pub(crate) fn offset_field(&self, edge: usize, t: &Rational, f: usize) -> EdgeField {
        let ef = self.edges[f];
        let a = self.offset_to_vertex(edge, t, ef.tail);
        let b = self.offset_to_vertex(edge, t, ef.head);
        let local = if edge == f { vec![(t.clone(), t.clone())] } else { Vec::new() };
        EdgeField::new(a, b, local)
    }

    pub(crate) fn point_field(&self, p: &GraphPoint, f: usize) -> EdgeField {
        self.offset_field(p.edge, &p.t, f)
    }

    fn offset_eccentricity(&self, edge: usize, t: &Rational) -> Rational {
        let zero = Rational::zero();
        let one = Rational::one();
        (0..self.num_edges())
            .map(|f| self.offset_field(edge, t, f).max_on(&zero, &one).0)
            .max()
            .expect("graph has edges")
    }

    /// Largest distance from `p` to any point of the graph.
    pub fn eccentricity(&self, p: &GraphPoint) -> Rational {
        self.offset_eccentricity(p.edge, &p.t)
    }

    /// Global extrema of the eccentricity function and where they are attained.
    pub fn potential_profile(&self) -> PotentialProfile {
        let half = Rational::frac(1, 2);
        let halves = [(Rational::zero(), half.clone()), (half, Rational::one())];
        let mut pieces = Vec::with_capacity(2 * self.num_edges());
        for e in 0..self.num_edges() {
            for (lo, hi) in &halves {
                pieces.push((e, self.half_edge_envelope(e, lo, hi)));
            }
        }
        let m = pieces.iter().map(|(_, h)| h.min.clone()).min().expect("graph has edges");
        let big_m = pieces.iter().map(|(_, h)| h.max.clone()).max().expect("graph has edges");
        let mut centers = vec![Vec::new(); self.num_edges()];
        let mut extrema = vec![Vec::new(); self.num_edges()];
        for (e, h) in pieces {
            if h.min == m {
                centers[e].push(h.argmin.clone());
            }
            if h.max == big_m {
                extrema[e].extend(h.argmax.iter().cloned());
            }
        }
        let build = |ivs: Vec<Vec<(Rational, Rational)>>| {
            BallSet::from_coverage(self, ivs.into_iter().map(EdgeCoverage::from_intervals).collect())
        };
        PotentialProfile { m, big_m, centers: build(centers), extrema: build(extrema) }
    }

    /// The eccentricity restricted to `[lo, hi]`, a half of edge `e`, is the
    /// upper envelope of lines with slopes -1, 0 and 1: every per-edge term is
    /// linear there because vertex distances only break at offset 1/2.
    fn half_edge_envelope(&self, e: usize, lo: &Rational, hi: &Rational) -> HalfEnvelope {
        let zero = Rational::zero();
        let one = Rational::one();
        let width = hi - lo;
        let mut lines: [Option<Rational>; 3] = [None, None, None];
        for f in 0..self.num_edges() {
            let v_lo = self.offset_field(e, lo, f).max_on(&zero, &one).0;
            let v_hi = self.offset_field(e, hi, f).max_on(&zero, &one).0;
            let slope = (&v_hi - &v_lo) / &width;
            let idx = if slope == -Rational::one() {
                0
            } else if slope.is_zero() {
                1
            } else {
                debug_assert_eq!(slope, Rational::one());
                2
            };
            let c = &v_lo - &(&slope * lo);
            if lines[idx].as_ref().is_none_or(|old| &c > old) {
                lines[idx] = Some(c);
            }
        }
        let eval = |t: &Rational| -> Rational {
            let mut best: Option<Rational> = None;
            for (k, c) in lines.iter().enumerate() {
                if let Some(c) = c {
                    let v = match k {
                        0 => c - t,
                        1 => c.clone(),
                        _ => c + t,
                    };
                    if best.as_ref().is_none_or(|b| &v > b) {
                        best = Some(v);
                    }
                }
            }
            best.expect("at least one line")
        };
        let mut cands = vec![lo.clone(), hi.clone()];
        let two = Rational::from_int(2);
        if let (Some(dn), Some(fl)) = (&lines[0], &lines[1]) {
            cands.push(dn - fl);
        }
        if let (Some(fl), Some(up)) = (&lines[1], &lines[2]) {
            cands.push(fl - up);
        }
        if let (Some(dn), Some(up)) = (&lines[0], &lines[2]) {
            cands.push((dn - up) / &two);
        }
        cands.retain(|t| t >= lo && t <= hi);
        cands.sort();
        cands.dedup();
        let vals: Vec<Rational> = cands.iter().map(&eval).collect();
        let min = vals.iter().min().unwrap().clone();
        let at_min: Vec<&Rational> = cands.iter().zip(&vals).filter(|(_, v)| **v == min).map(|(t, _)| t).collect();
        let argmin = ((*at_min.first().unwrap()).clone(), (*at_min.last().unwrap()).clone());
        let (v_lo, v_hi) = (eval(lo), eval(hi));
        let max = Rational::max_of(&v_lo, &v_hi);
        let argmax = if min == max {
            vec![(lo.clone(), hi.clone())]
        } else {
            let mut a = Vec::new();
            if v_lo == max {
                a.push((lo.clone(), lo.clone()));
            }
            if v_hi == max {
                a.push((hi.clone(), hi.clone()));
            }
            a
        };
        HalfEnvelope { min, argmin, max, argmax }
    }

    /// Largest distance between two points of the graph.
    pub fn diameter(&self) -> Rational {
        self.potential_profile().big_m
    }
}

struct HalfEnvelope {
    min: Rational,
    argmin: (Rational, Rational),
    max: Rational,
    argmax: Vec<(Rational, Rational)>,
}

#[derive(Clone, Debug)]
pub struct PotentialProfile {
    /// Minimum eccentricity (the radius).
    pub m: Rational,
    /// Maximum eccentricity, equal to the diameter.
    pub big_m: Rational,
    pub centers: BallSet,
    pub extrema: BallSet,
}

fn input_connected(n: usize, edges: &[(usize, usize, Rational)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in edges {
        adj[*u].push(*v);
        adj[*v].push(*u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = n > 0;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|s| *s)
}

fn all_pairs_bfs(n: usize, incidence: &[Vec<(usize, u8)>], edges: &[Edge]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &(e, end) in &incidence[u] {
                let w = if end == 0 { edges[e].head } else { edges[e].tail };
                if row[w] == u32::MAX {
                    row[w] = row[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}
