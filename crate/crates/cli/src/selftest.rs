use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiflow::{
    closed_ball, dilate, fixtures, hausdorff, merge_matrix, merge_radius, sample_points, sets_equal, timeline,
    ultrametric_check, Error, GraphPoint, MetricGraph, Rational, Result,
};

const CASES: usize = 25;

fn random_point(rng: &mut ChaCha8Rng, g: &MetricGraph) -> Result<GraphPoint> {
    let den = rng.gen_range(1..=12);
    g.point(rng.gen_range(0..g.num_edges()), Rational::frac(rng.gen_range(0..=den), den))
}

fn random_radius(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.gen_range(0..=32), rng.gen_range(1..=8))
}

/// Returns the number of failed cases.
fn laws(g: &MetricGraph, rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut failed = 0;
    for _ in 0..CASES {
        let p = random_point(rng, g)?;
        let q = random_point(rng, g)?;
        let (s, t) = (random_radius(rng), random_radius(rng));

        let b = closed_ball(g, &p, &s)?;
        if !sets_equal(&dilate(g, &b, &t)?, &closed_ball(g, &p, &(&s + &t))?)? {
            failed += 1;
        }

        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        if hi <= g.eccentricity(&p) && hausdorff(g, &b_at(g, &p, &lo)?, &b_at(g, &p, &hi)?)? != &hi - &lo {
            failed += 1;
        }

        if hausdorff(g, &b_at(g, &p, &lo)?, &b_at(g, &q, &lo)?)? > g.point_distance(&p, &q) {
            failed += 1;
        }

        if p != q {
            let mu = merge_radius(g, &p, &q)?;
            if !sets_equal(&b_at(g, &p, &(&mu + &hi))?, &b_at(g, &q, &(&mu + &hi))?)? {
                failed += 1;
            }
        }
    }
    Ok(failed)
}

fn b_at(g: &MetricGraph, p: &GraphPoint, r: &Rational) -> Result<semiflow::BallSet> {
    closed_ball(g, p, r)
}

fn structure(g: &MetricGraph) -> Result<usize> {
    let mut failed = 0;
    let prof = g.potential_profile();
    if &prof.m * &Rational::from_int(2) < prof.big_m {
        failed += 1;
    }
    let pts = sample_points(g, &Rational::frac(1, 2))?;
    if !ultrametric_check(&merge_matrix(g, &pts)?).ok {
        failed += 1;
    }
    let t = timeline(g)?;
    if !t.entries.last().is_some_and(|e| e.fingerprint.is_point) || t.distinct_type_count < 2 {
        failed += 1;
    }
    if !t.entries[0].injective {
        failed += 1;
    }
    Ok(failed)
}

pub fn run(seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = vec![fixtures::path_abc(), fixtures::cycle(6), fixtures::theta(), fixtures::comb(2)];
    graphs.push(fixtures::random_graph(&mut rng, 12));
    graphs.push(fixtures::random_tree(&mut rng, 12));
    let mut total = 0;
    for g in &graphs {
        let failed = laws(g, &mut rng)? + structure(g)?;
        println!("{} {}: {failed} failed", if failed == 0 { "ok" } else { "FAIL" }, g.name());
        if g.name() == "tree" {
            let t = timeline(g)?;
            if t.entries.iter().any(|e| e.fingerprint.b1 != 0) {
                println!("FAIL tree: quotient with a cycle");
                total += 1;
            }
        }
        total += failed;
    }
    if total > 0 {
        return Err(Error::Internal(format!("selftest: {total} checks failed (seed {seed})")));
    }
    println!("all checks passed (seed {seed})");
    Ok(())
}
