//! Distance from a source set to the points of a single unit edge.
//!
//! Along an edge parametrised by `s in [0,1]`, the distance to a source is the
//! minimum of three kinds of linear pieces: leave through the tail (`a + s`),
//! leave through the head (`b + 1 - s`), or walk inside the edge to one of the
//! source intervals lying on it. Between two consecutive local intervals the
//! function is a tent `min(s + A, D - s)`, which makes sublevel sets, level
//! sets and maxima all exact.

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct EdgeField {
    /// Distance from the source to the tail vertex.
    pub a: Rational,
    /// Distance from the source to the head vertex.
    pub b: Rational,
    /// Source intervals lying on this edge, sorted and disjoint.
    pub local: Vec<(Rational, Rational)>,
}

impl EdgeField {
    pub fn new(a: Rational, b: Rational, local: Vec<(Rational, Rational)>) -> Self {
        EdgeField { a, b, local }
    }

    pub fn value(&self, s: &Rational) -> Rational {
        let one = Rational::one();
        let mut v = Rational::min_of(&(&self.a + s), &(&self.b + &(&one - s)));
        for (c1, c2) in &self.local {
            let d = if s < c1 {
                c1 - s
            } else if s > c2 {
                s - c2
            } else {
                Rational::zero()
            };
            if d < v {
                v = d;
            }
        }
        v
    }

    /// `{s : value(s) <= r}` as sorted, maximal closed intervals.
    pub fn sublevel(&self, r: &Rational) -> Vec<(Rational, Rational)> {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut pieces: Vec<(Rational, Rational)> = Vec::with_capacity(self.local.len() + 2);
        if r >= &self.a {
            pieces.push((zero.clone(), Rational::min_of(&(r - &self.a), &one)));
        }
        for (c1, c2) in &self.local {
            pieces.push((Rational::max_of(&(c1 - r), &zero), Rational::min_of(&(c2 + r), &one)));
        }
        if r >= &self.b {
            pieces.push((Rational::max_of(&(&one - &(r - &self.b)), &zero), one));
        }
        merge_intervals(pieces)
    }

    /// Maximum of the field over `[lo, hi]` and a point attaining it.
    pub fn max_on(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        debug_assert!(lo <= hi);
        let two = Rational::from_int(2);
        let one = Rational::one();
        let head = &self.b + &one;
        let mut best: Option<(Rational, Rational)> = None;
        let mut consider = |g_lo: &Rational, g_hi: &Rational, inc: &Rational, dec: &Rational| {
            let x_lo = Rational::max_of(g_lo, lo);
            let x_hi = Rational::min_of(g_hi, hi);
            if x_lo > x_hi {
                return;
            }
            let peak = (dec - inc) / &two;
            let s = if peak < x_lo {
                x_lo
            } else if peak > x_hi {
                x_hi
            } else {
                peak
            };
            let v = Rational::min_of(&(&s + inc), &(dec - &s));
            if best.as_ref().is_none_or(|(bv, _)| &v > bv) {
                best = Some((v, s));
            }
        };

        let mut gap_lo = Rational::zero();
        let mut inc = self.a.clone();
        for (c1, c2) in &self.local {
            let dec = Rational::min_of(&head, c1);
            consider(&gap_lo, c1, &inc, &dec);
            gap_lo = c2.clone();
            inc = Rational::min_of(&self.a, &-c2);
        }
        consider(&gap_lo, &one, &inc, &head);

        // [lo, hi] lies entirely inside a local interval
        best.unwrap_or_else(|| (Rational::zero(), lo.clone()))
    }

    /// Offsets where the field equals `r`, for `r > 0`.
    pub fn level_points(&self, r: &Rational) -> Vec<Rational> {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut cands = vec![r - &self.a, &(&one + &self.b) - r];
        for (c1, c2) in &self.local {
            cands.push(c1 - r);
            cands.push(c2 + r);
        }
        let mut out: Vec<Rational> =
            cands.into_iter().filter(|s| s >= &zero && s <= &one && &self.value(s) == r).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Sort and merge closed intervals; touching intervals are joined.
pub fn merge_intervals(mut v: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    if v.len() <= 1 {
        return v;
    }
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
    for (lo, hi) in v {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}
