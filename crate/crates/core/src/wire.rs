//! JSON, DOT and CSV renderings of engine results. All rationals are written
//! as reduced `p/q` strings.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::ball::{BallMeta, BallSet, EdgeCoverage};
use crate::error::{Error, Result};
use crate::evolution::{LocusKind, Timeline};
use crate::graph::{GraphPoint, MetricGraph};
use crate::merge::{Dendrogram, MergeMatrix};
use crate::quotient::{EulerReport, Fingerprint, QuotientGraph};
use crate::rational::Rational;

fn s(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn rational_field(v: &Value, what: &str) -> Result<Rational> {
    v.as_str().ok_or_else(|| Error::Document(format!("{what} must be a rational string")))?.parse()
}

pub fn point_json(p: &GraphPoint) -> Value {
    json!({"edge": p.edge(), "t": s(p.t())})
}

pub fn point_from_json(g: &MetricGraph, v: &Value) -> Result<GraphPoint> {
    let edge = v
        .get("edge")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Document("point needs an integer \"edge\"".into()))?;
    let t = rational_field(v.get("t").unwrap_or(&Value::Null), "point offset")?;
    g.point(edge as usize, t)
}

/// `{"units", "edges": [{"edge", "intervals"}], "meta"}`; with `user_units`
/// offsets and the radius are multiplied by the graph scale.
pub fn ball_json(g: &MetricGraph, b: &BallSet, user_units: bool) -> Value {
    let conv = |r: &Rational| if user_units { g.to_user(r) } else { r.clone() };
    let edges: Vec<Value> = b
        .coverage()
        .iter()
        .enumerate()
        .map(|(e, c)| {
            let ivs: Vec<Value> = c.intervals().iter().map(|(lo, hi)| json!([s(&conv(lo)), s(&conv(hi))])).collect();
            json!({"edge": e, "intervals": ivs})
        })
        .collect();
    let meta = match b.meta() {
        Some(m) => json!({"center": point_json(&m.center), "radius": s(&conv(&m.radius))}),
        None => Value::Null,
    };
    json!({"units": if user_units { "user" } else { "internal" }, "edges": edges, "meta": meta})
}

pub fn ball_from_json(g: &MetricGraph, v: &Value) -> Result<BallSet> {
    let user = match v.get("units").and_then(Value::as_str) {
        None | Some("internal") => false,
        Some("user") => true,
        Some(other) => return Err(Error::Document(format!("unknown units {other:?}"))),
    };
    let conv = |r: Rational| if user { g.from_user(&r) } else { r };
    let mut per = vec![Vec::new(); g.num_edges()];
    let edges = v
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Document("ball needs an \"edges\" array".into()))?;
    for entry in edges {
        let e = entry
            .get("edge")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Document("coverage entry needs an integer \"edge\"".into()))?
            as usize;
        if e >= g.num_edges() {
            return Err(Error::InvalidEdge(e, g.num_edges()));
        }
        let ivs = entry
            .get("intervals")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Document("coverage entry needs \"intervals\"".into()))?;
        for iv in ivs {
            let pair = iv
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Document("interval must be a pair of rational strings".into()))?;
            let lo = conv(rational_field(&pair[0], "interval end")?);
            let hi = conv(rational_field(&pair[1], "interval end")?);
            if lo.is_negative() || lo > hi || hi > Rational::one() {
                return Err(Error::InvalidOffset(format!("[{lo}, {hi}]")));
            }
            per[e].push((lo, hi));
        }
    }
    let meta = match v.get("meta") {
        Some(m) if !m.is_null() => {
            let center = point_from_json(g, m.get("center").unwrap_or(&Value::Null))?;
            let radius = conv(rational_field(m.get("radius").unwrap_or(&Value::Null), "radius")?);
            Some(BallMeta { center, radius })
        }
        _ => None,
    };
    let cov = per.into_iter().map(EdgeCoverage::from_intervals).collect();
    Ok(BallSet::from_coverage(g, cov).with_meta(meta))
}

pub fn fingerprint_json(f: &Fingerprint) -> Value {
    json!({
        "vertices": f.vertices,
        "edges": f.edges,
        "b0": f.b0,
        "b1": f.b1,
        "chi": f.chi,
        "n0": f.n0,
        "degree_multiset": f.degree_multiset,
        "canonical_code": f.canonical_code,
        "is_point": f.is_point,
    })
}

pub fn euler_json(r: &EulerReport) -> Value {
    json!({
        "unit_edges": r.unit_edges,
        "basic_margin": r.basic_margin,
        "n0_margin": r.n0_margin,
        "doubled_n0_margin": r.doubled_n0_margin,
        "betti_margin": r.betti_margin,
    })
}

pub fn quotient_json(g: &MetricGraph, q: &QuotientGraph, f: &Fingerprint) -> Value {
    let sub = &q.subdivision;
    let vertex_cells: Vec<Value> = sub.vertex_cells.iter().map(point_json).collect();
    let segments: Vec<Value> = sub
        .segment_cells
        .iter()
        .map(|c| json!({"edge": c.edge, "lo": s(&c.lo), "hi": s(&c.hi), "tail_cell": c.tail_cell, "head_cell": c.head_cell}))
        .collect();
    let vclasses: Vec<Value> = q
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| json!({"id": i, "whole": Some(i) == q.x_vertex, "vertex_cells": v.cells}))
        .collect();
    let eclasses: Vec<Value> = q
        .edges
        .iter()
        .map(|e| {
            let cells: Vec<Value> = e.cells.iter().map(|(c, rev)| json!({"segment": c, "reversed": rev})).collect();
            json!({"tail": e.tail, "head": e.head, "segments": cells})
        })
        .collect();
    json!({
        "radius": s(&q.radius),
        "radius_user": s(&g.to_user(&q.radius)),
        "cells": {"vertices": vertex_cells, "segments": segments},
        "classes": {"vertices": vclasses, "edges": eclasses, "whole_segments": q.x_segments},
        "fingerprint": fingerprint_json(f),
    })
}

/// Smoothed quotient in DOT; vertices are labelled with the number of cells
/// in their class, the whole-graph class with `X`.
pub fn quotient_dot(q: &QuotientGraph) -> String {
    let mg = q.multigraph();
    let mut protected = vec![false; mg.n];
    if let Some(x) = q.x_vertex {
        protected[x] = true;
    }
    let (sm, kept) = mg.smoothed_with_map(&protected);
    let mut out = String::from("graph quotient {\n");
    let _ = writeln!(out, "  label=\"r = {}\";", q.radius);
    for (i, &v) in kept.iter().enumerate() {
        let label = if Some(v) == q.x_vertex { "X".to_string() } else { q.vertices[v].cells.len().to_string() };
        let _ = writeln!(out, "  q{i} [label=\"{label}\"];");
    }
    for (u, v) in &sm.edges {
        let _ = writeln!(out, "  q{u} -- q{v};");
    }
    out.push_str("}\n");
    out
}

pub const TIMELINE_COLUMNS: &str = "locus_user_units,locus_internal,b0,b1,chi,n0,is_point,canonical_code,is_critical";

/// One row per locus; `approx` appends a decimal column for the user-unit locus.
pub fn timeline_csv(g: &MetricGraph, t: &Timeline, approx: bool) -> String {
    let mut out = String::from(TIMELINE_COLUMNS);
    if approx {
        out.push_str(",locus_user_approx");
    }
    out.push('\n');
    for e in &t.entries {
        let f = &e.fingerprint;
        let user = g.to_user(&e.locus);
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},\"{}\",{}",
            user, e.locus, f.b0, f.b1, f.chi, f.n0, f.is_point, f.canonical_code, e.critical
        );
        if approx {
            let _ = write!(out, ",{:.6}", user.to_f64());
        }
        out.push('\n');
    }
    out
}

pub fn timeline_json(g: &MetricGraph, t: &Timeline) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|e| {
            json!({
                "locus_internal": s(&e.locus),
                "locus_user_units": s(&g.to_user(&e.locus)),
                "kind": match e.kind { LocusKind::Grid => "grid", LocusKind::Interval => "interval" },
                "injective": e.injective,
                "left_critical": e.left_critical,
                "critical": e.critical,
                "fingerprint": fingerprint_json(&e.fingerprint),
            })
        })
        .collect();
    let runs: Vec<Value> = t
        .runs
        .iter()
        .map(|r| {
            json!({
                "from": s(&t.entries[r.first].locus),
                "to": s(&t.entries[r.last].locus),
                "canonical_code": r.canonical_code,
            })
        })
        .collect();
    json!({
        "diameter": s(&t.diameter),
        "scale": s(g.scale()),
        "distinct_type_count": t.distinct_type_count,
        "critical_times": t.critical_times.iter().map(s).collect::<Vec<_>>(),
        "left_critical_times": t.left_critical_times.iter().map(s).collect::<Vec<_>>(),
        "runs": runs,
        "entries": entries,
    })
}

/// Nested `{"node": {"radius", "children"}}`; leaves also carry their point
/// and extinction radius.
pub fn dendrogram_json(g: &MetricGraph, d: &Dendrogram, user_units: bool) -> Value {
    let conv = |r: &Rational| if user_units { g.to_user(r) } else { r.clone() };
    fn rec(d: &Dendrogram, id: usize, conv: &dyn Fn(&Rational) -> Rational) -> Value {
        let node = &d.nodes[id];
        if node.children.is_empty() {
            let i = node.members[0];
            json!({"node": {
                "radius": s(&conv(&node.radius)),
                "point": point_json(&d.points[i]),
                "index": i,
                "extinction": s(&conv(&d.extinction[i])),
                "children": [],
            }})
        } else {
            let kids: Vec<Value> = node.children.iter().map(|&c| rec(d, c, conv)).collect();
            json!({"node": {"radius": s(&conv(&node.radius)), "children": kids}})
        }
    }
    let mut v = rec(d, d.root, &conv);
    v["units"] = json!(if user_units { "user" } else { "internal" });
    v
}

/// Upper triangle of the matrix, one pair per row.
pub fn merge_matrix_csv(g: &MetricGraph, m: &MergeMatrix, user_units: bool) -> String {
    let mut out = String::from("i,j,edge_i,t_i,edge_j,t_j,mu\n");
    for i in 0..m.points.len() {
        for j in i + 1..m.points.len() {
            let (p, q) = (&m.points[i], &m.points[j]);
            let mu = if user_units { g.to_user(&m.mu[i][j]) } else { m.mu[i][j].clone() };
            let _ = writeln!(out, "{i},{j},{},{},{},{},{mu}", p.edge(), p.t(), q.edge(), q.t());
        }
    }
    out
}
