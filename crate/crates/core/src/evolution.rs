//! Topological types of the quotient levels as the radius grows.
//!
//! On a unit-edge graph the type can only change at multiples of 1/4, so
//! sampling every grid point and one point inside every open grid interval
//! covers the whole evolution.

use crate::error::Result;
use crate::graph::MetricGraph;
use crate::merge::merge_radius;
use crate::quotient::{fingerprint, project, subdivision, Fingerprint};
use crate::rational::Rational;

/// `{k/4 : 1 <= k <= 4 * diameter}`.
pub fn candidate_grid(g: &MetricGraph) -> Vec<Rational> {
    grid_up_to(&g.diameter())
}

fn grid_up_to(diam: &Rational) -> Vec<Rational> {
    let k_max = (diam * &Rational::from_int(4)).floor_i64().expect("diameter fits i64");
    (1..=k_max).map(|k| Rational::frac(k, 4)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusKind {
    /// A grid point `k/4`.
    Grid,
    /// The midpoint of the open interval `((k-1)/4, k/4)`.
    Interval,
}

#[derive(Clone, Debug)]
pub struct TimelineEntry {
    pub locus: Rational,
    pub kind: LocusKind,
    pub fingerprint: Fingerprint,
    pub injective: bool,
    /// Type differs from the open interval just below (grid points only).
    pub left_critical: bool,
    /// `left_critical`, or the types on the two adjacent open intervals differ.
    pub critical: bool,
}

/// A maximal run of consecutive entries with the same type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub first: usize,
    pub last: usize,
    pub canonical_code: String,
}

#[derive(Clone, Debug)]
pub struct Timeline {
    pub diameter: Rational,
    pub entries: Vec<TimelineEntry>,
    pub runs: Vec<Run>,
    pub distinct_type_count: usize,
    /// Grid points where the type differs from the interval on the left or
    /// the intervals on both sides differ.
    pub critical_times: Vec<Rational>,
    /// Grid points where the type differs from the interval on the left.
    pub left_critical_times: Vec<Rational>,
}

/// Fingerprints at every grid point and interval midpoint up to the diameter.
pub fn timeline(g: &MetricGraph) -> Result<Timeline> {
    let diameter = g.diameter();
    let grid = grid_up_to(&diameter);
    let mut entries = Vec::with_capacity(2 * grid.len());
    for gk in &grid {
        for (locus, kind) in [(gk - &Rational::frac(1, 8), LocusKind::Interval), (gk.clone(), LocusKind::Grid)] {
            let q = project(g, &locus)?;
            entries.push(TimelineEntry {
                fingerprint: fingerprint(&q),
                injective: q.is_injective(),
                locus,
                kind,
                left_critical: false,
                critical: false,
            });
        }
    }
    let mut critical_times = Vec::new();
    let mut left_critical_times = Vec::new();
    for i in (1..entries.len()).step_by(2) {
        let left = &entries[i - 1].fingerprint;
        let here = &entries[i].fingerprint;
        let left_change = !here.same_type(left);
        let across = entries.get(i + 1).is_some_and(|right| !right.fingerprint.same_type(left));
        entries[i].left_critical = left_change;
        entries[i].critical = left_change || across;
        if left_change {
            left_critical_times.push(entries[i].locus.clone());
        }
        if entries[i].critical {
            critical_times.push(entries[i].locus.clone());
        }
    }
    let mut runs: Vec<Run> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.canonical_code == e.fingerprint.canonical_code => run.last = i,
            _ => runs.push(Run { first: i, last: i, canonical_code: e.fingerprint.canonical_code.clone() }),
        }
    }
    let mut codes: Vec<&str> = entries.iter().map(|e| e.fingerprint.canonical_code.as_str()).collect();
    codes.sort_unstable();
    codes.dedup();
    let distinct_type_count = codes.len();
    Ok(Timeline { diameter, entries, runs, distinct_type_count, critical_times, left_critical_times })
}

#[derive(Clone, Debug)]
pub struct DistinctTypes {
    pub count: usize,
    /// First locus of each type, in order of appearance.
    pub representatives: Vec<(Rational, String)>,
}

pub fn distinct_types(g: &MetricGraph) -> Result<DistinctTypes> {
    Ok(distinct_types_of(&timeline(g)?))
}

pub fn distinct_types_of(t: &Timeline) -> DistinctTypes {
    let mut representatives: Vec<(Rational, String)> = Vec::new();
    for e in &t.entries {
        if !representatives.iter().any(|(_, c)| *c == e.fingerprint.canonical_code) {
            representatives.push((e.locus.clone(), e.fingerprint.canonical_code.clone()));
        }
    }
    DistinctTypes { count: representatives.len(), representatives }
}

#[derive(Clone, Debug)]
pub struct Robustness {
    /// Largest grid value below which every sampled level is injective.
    pub radius: Rational,
    /// First sampled radius where the level is not injective.
    pub first_failure: Rational,
}

/// Bracket `[radius, first_failure]` containing the supremum of radii at
/// which the level map is injective.
pub fn robustness_radius(g: &MetricGraph) -> Result<Robustness> {
    Ok(robustness_of(&timeline(g)?))
}

pub fn robustness_of(t: &Timeline) -> Robustness {
    let fail = t.entries.iter().find(|e| !e.injective);
    match fail {
        Some(e) => {
            let radius = match e.kind {
                LocusKind::Grid => e.locus.clone(),
                LocusKind::Interval => &e.locus - &Rational::frac(1, 8),
            };
            Robustness { radius, first_failure: e.locus.clone() }
        }
        None => {
            let d = t.diameter.clone();
            Robustness { radius: d.clone(), first_failure: d }
        }
    }
}

/// Smallest merge radius among the cut points and segment midpoints of the
/// subdivision at `r`. An upper bound for the injectivity radius restricted
/// to that sample.
pub fn sampled_merge_floor(g: &MetricGraph, r: &Rational) -> Result<Rational> {
    let sub = subdivision(g, r)?;
    let mut pts = sub.vertex_cells.clone();
    for s in &sub.segment_cells {
        let mid = Rational::midpoint(&s.lo, &s.hi);
        pts.push(g.point(s.edge, mid)?);
    }
    let mut best: Option<Rational> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let m = merge_radius(g, &pts[i], &pts[j])?;
            if best.as_ref().is_none_or(|b| &m < b) {
                best = Some(m);
            }
        }
    }
    Ok(best.expect("subdivision has at least two cells"))
}
