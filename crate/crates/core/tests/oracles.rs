mod common;

use common::{
    cell_equivalence_mismatch, r, random_point, random_radius, sampled_eccentricity, sampled_hausdorff, set_samples,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiflow::{closed_ball, fixtures, hausdorff, project, sets_equal, BallSet, Rational};

#[test]
fn eccentricity_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..12 {
        let g = fixtures::random_graph(&mut rng, 14);
        for _ in 0..4 {
            let p = random_point(&mut rng, &g, 9);
            let exact = g.eccentricity(&p);
            let sampled = sampled_eccentricity(&g, &p, 32);
            assert!(sampled <= exact, "{p}: sampled {sampled} exceeds {exact}");
            assert!(&exact - &sampled <= r(1, 64), "{p}: {exact} vs {sampled}");
        }
    }
}

#[test]
fn potential_profile_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs = vec![fixtures::path_abc(), fixtures::theta(), fixtures::cycle(5), fixtures::comb(3)];
    graphs.extend((0..6).map(|_| fixtures::random_graph(&mut rng, 14)));
    for g in &graphs {
        let prof = g.potential_profile();
        let eccs: Vec<Rational> = common::grid_points(g, 16).iter().map(|p| g.eccentricity(p)).collect();
        let lo = eccs.iter().min().unwrap();
        let hi = eccs.iter().max().unwrap();
        assert_eq!(&prof.big_m, hi, "{}", g.name());
        assert!(&prof.m <= lo && lo - &prof.m <= r(1, 32), "{}", g.name());
        assert!(&prof.m * &Rational::from_int(2) >= prof.big_m, "{}", g.name());
    }
}

#[test]
fn hausdorff_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let g = fixtures::random_graph(&mut rng, 8);
        let p = random_point(&mut rng, &g, 12);
        let q = random_point(&mut rng, &g, 12);
        let a = closed_ball(&g, &p, &random_radius(&mut rng, 2, 8)).unwrap();
        let b = closed_ball(&g, &q, &random_radius(&mut rng, 2, 8)).unwrap();
        let exact = hausdorff(&g, &a, &b).unwrap();
        let sampled = sampled_hausdorff(&g, &set_samples(&g, &a, 64), &set_samples(&g, &b, 64));
        assert!((&exact - &sampled).abs() <= r(1, 64), "{exact} vs {sampled}");
    }
}

#[test]
fn quotient_cells_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut graphs = vec![fixtures::path_abc(), fixtures::theta(), fixtures::cycle(4)];
    graphs.extend((0..8).map(|_| fixtures::random_graph(&mut rng, 12)));
    for g in &graphs {
        assert!(g.num_edges() <= 12);
        let top = (g.diameter().floor_i64().unwrap() + 1) * 8;
        for _ in 0..4 {
            let radius = r(rng.gen_range(1..=top), 8);
            let q = project(g, &radius).unwrap();
            if let Some(m) = cell_equivalence_mismatch(g, &q, 16) {
                panic!("{}: {m}", g.name());
            }
        }
    }
}

#[test]
fn theta_cells_at_one_match_brute_force() {
    let g = fixtures::theta();
    let q = project(&g, &Rational::one()).unwrap();
    assert_eq!(cell_equivalence_mismatch(&g, &q, 16), None);
}

#[test]
fn comb_profile_and_merges() {
    for depth in [3, 4] {
        let g = fixtures::comb(depth);
        let prof = g.potential_profile();
        assert_eq!(g.to_user(&prof.m), Rational::one());
        assert_eq!(g.to_user(&prof.big_m), Rational::from_int(2));
        let x0 = g.vertex_point(g.vertex_by_name("x0").unwrap());
        assert!(sets_equal(&prof.centers, &BallSet::from_points(&g, &[x0]).unwrap()).unwrap());
        let o = g.vertex_point(g.vertex_by_name("o").unwrap());
        for n in 1..=depth {
            let tip = g.vertex_point(g.vertex_by_name(&format!("y{n}")).unwrap());
            let mu = semiflow::merge_radius(&g, &o, &tip).unwrap();
            assert_eq!(g.to_user(&mu), r(2, 1 << n));
        }
    }
}
