//! Small graphs used in tests, the `selftest` command and examples.

use rand::Rng;

use crate::graph::MetricGraph;
use crate::rational::Rational;

fn unit(edges: &[(usize, usize)]) -> Vec<(usize, usize, Rational)> {
    edges.iter().map(|&(u, v)| (u, v, Rational::one())).collect()
}

/// `a - b - c` with unit lengths.
pub fn path_abc() -> MetricGraph {
    MetricGraph::from_edges("path", &["a", "b", "c"], &unit(&[(0, 1), (1, 2)])).unwrap()
}

/// Cycle on `n` vertices `v0 .. v(n-1)`, edge `k` joining `vk` to `v(k+1)`.
pub fn cycle(n: usize) -> MetricGraph {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|k| (k, (k + 1) % n)).collect();
    MetricGraph::from_edges(&format!("C{n}"), &names, &unit(&edges)).unwrap()
}

/// Two parallel unit edges `u - v` plus the path `u - w1 - w2 - v`.
pub fn theta() -> MetricGraph {
    MetricGraph::from_edges("theta", &["u", "v", "w1", "w2"], &unit(&[(0, 1), (0, 1), (0, 2), (2, 3), (3, 1)])).unwrap()
}

/// Comb truncated after `depth` teeth: the base segment from `(0,0)` to
/// `(1,0)` with a vertical tooth of height `2^-n` at abscissa `2^-n` for
/// `n = 0..=depth`.
///
/// Vertices: `o = (0,0)`, `x{n} = (2^-n, 0)`, `y{n} = (2^-n, 2^-n)`.
pub fn comb(depth: u32) -> MetricGraph {
    let n = depth as usize + 1;
    let mut names = vec!["o".to_string()];
    names.extend((0..n).map(|k| format!("x{k}")));
    names.extend((0..n).map(|k| format!("y{k}")));
    let x = |k: usize| 1 + k;
    let y = |k: usize| 1 + n + k;
    let pow = |k: usize| Rational::frac(1, 1i64 << k);
    let mut edges = vec![(0, x(depth as usize), pow(depth as usize))];
    for k in (0..depth as usize).rev() {
        edges.push((x(k + 1), x(k), pow(k + 1)));
    }
    for k in 0..n {
        edges.push((x(k), y(k), pow(k)));
    }
    MetricGraph::from_edges(&format!("comb{depth}"), &names, &edges).unwrap()
}

fn random_length<R: Rng>(rng: &mut R) -> Rational {
    Rational::frac(rng.gen_range(1..=4), 2)
}

/// Random tree with half-integer edge lengths and at most `max_units`
/// unit edges after normalisation.
pub fn random_tree<R: Rng>(rng: &mut R, max_units: usize) -> MetricGraph {
    assert!(max_units >= 2);
    let mut edges = Vec::new();
    let mut units = 0;
    loop {
        let len = random_length(rng);
        let cost = (&len * &Rational::from_int(2)).floor_i64().unwrap() as usize;
        if units + cost > max_units {
            if edges.is_empty() {
                continue;
            }
            break;
        }
        units += cost;
        let v = edges.len() + 1;
        edges.push((rng.gen_range(0..v), v, len));
    }
    let names: Vec<String> = (0..=edges.len()).map(|k| format!("t{k}")).collect();
    MetricGraph::from_edges("tree", &names, &edges).unwrap()
}

/// Random connected multigraph (loops and parallel edges allowed) with
/// half-integer edge lengths and at most `max_units` unit edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_units: usize) -> MetricGraph {
    assert!(max_units >= 4);
    let n = rng.gen_range(2..=(max_units / 4).max(2));
    let mut edges = Vec::new();
    let mut units = 0;
    for v in 1..n {
        let len = random_length(rng);
        units += (&len * &Rational::from_int(2)).floor_i64().unwrap() as usize;
        edges.push((rng.gen_range(0..v), v, len));
    }
    let extra = rng.gen_range(1..=3);
    for _ in 0..extra {
        let len = random_length(rng);
        let cost = (&len * &Rational::from_int(2)).floor_i64().unwrap() as usize;
        if units + cost > max_units {
            break;
        }
        units += cost;
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n), len));
    }
    let names: Vec<String> = (0..n).map(|k| format!("g{k}")).collect();
    MetricGraph::from_edges("random", &names, &edges).unwrap()
}

/// Random connected graph with exactly `edges` unit-length edges on
/// `vertices` vertices.
pub fn random_unit_graph<R: Rng>(rng: &mut R, vertices: usize, edges: usize) -> MetricGraph {
    assert!(vertices >= 2 && edges + 1 >= vertices);
    let mut list = Vec::with_capacity(edges);
    for v in 1..vertices {
        list.push((rng.gen_range(0..v), v, Rational::one()));
    }
    while list.len() < edges {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u != v {
            list.push((u, v, Rational::one()));
        }
    }
    let names: Vec<String> = (0..vertices).map(|k| format!("n{k}")).collect();
    MetricGraph::from_edges("random-unit", &names, &list).unwrap()
}
