//! Degree-2 smoothing and canonical labelling of small multigraphs.
//!
//! Two finite graphs are homeomorphic exactly when their smoothed forms are
//! isomorphic, so the canonical code of the smoothed multigraph serves as a
//! homeomorphism certificate.

use std::cmp::Ordering;

/// Undirected multigraph on vertices `0..n`; loops are `(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Suppresses every unprotected vertex of degree 2 that is not the base
    /// of a loop. A cycle component ends up as one vertex carrying a loop.
    pub fn smoothed(&self, protected: &[bool]) -> Multigraph {
        self.smoothed_with_map(protected).0
    }

    /// Like [`Multigraph::smoothed`], also returning the original index of
    /// every surviving vertex.
    pub fn smoothed_with_map(&self, protected: &[bool]) -> (Multigraph, Vec<usize>) {
        let mut ends: Vec<(usize, usize)> = self.edges.clone();
        let mut alive = vec![true; ends.len()];
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, &(u, v)) in ends.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        let mut gone = vec![false; self.n];
        let mut work: Vec<usize> = (0..self.n).rev().collect();
        while let Some(v) = work.pop() {
            if gone[v] || protected.get(v).copied().unwrap_or(false) || inc[v].len() != 2 {
                continue;
            }
            let (e1, e2) = (inc[v][0], inc[v][1]);
            if e1 == e2 {
                continue;
            }
            let other = |e: usize| if ends[e].0 == v { ends[e].1 } else { ends[e].0 };
            let (x, y) = (other(e1), other(e2));
            alive[e1] = false;
            alive[e2] = false;
            let ne = ends.len();
            ends.push((x, y));
            alive.push(true);
            for (w, old) in [(x, e1), (y, e2)] {
                let slot = inc[w].iter().position(|&e| e == old).expect("incidence");
                inc[w][slot] = ne;
            }
            inc[v].clear();
            gone[v] = true;
            work.push(x);
            work.push(y);
        }
        let mut relabel = vec![usize::MAX; self.n];
        let mut kept = Vec::new();
        for v in 0..self.n {
            if !gone[v] {
                relabel[v] = kept.len();
                kept.push(v);
            }
        }
        let edges = ends.iter().zip(&alive).filter(|(_, a)| **a).map(|(&(u, v), _)| (relabel[u], relabel[v])).collect();
        (Multigraph { n: kept.len(), edges }, kept)
    }

    /// Isomorphism-invariant string: two multigraphs get the same code iff
    /// they are isomorphic.
    pub fn canonical_code(&self) -> String {
        let code = Canon::new(self).run();
        let mut s = format!("{}:", self.n);
        let mut i = 0;
        while i < code.len() {
            let mut j = i;
            while j < code.len() && code[j] == code[i] {
                j += 1;
            }
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{}-{}*{}", code[i].0, code[i].1, j - i));
            i = j;
        }
        s
    }
}

type Code = Vec<(u32, u32)>;

struct Canon<'a> {
    g: &'a Multigraph,
    adj: Vec<Vec<usize>>,
    best: Option<(Code, Vec<u32>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Canon<'a> {
    fn new(g: &'a Multigraph) -> Self {
        let mut adj = vec![Vec::new(); g.n];
        for &(u, v) in &g.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Canon { g, adj, best: None, automorphisms: Vec::new() }
    }

    fn run(mut self) -> Code {
        if self.g.n == 0 {
            return Vec::new();
        }
        let mut loops = vec![0usize; self.g.n];
        for &(u, v) in &self.g.edges {
            if u == v {
                loops[u] += 1;
            }
        }
        let keys: Vec<(usize, usize)> = (0..self.g.n).map(|v| (self.adj[v].len(), loops[v])).collect();
        let colors = rank(&keys);
        self.search(colors, &mut Vec::new());
        self.best.expect("search visits a leaf").0
    }

    /// Colour refinement; colours are ranks of sorted signatures so the
    /// result commutes with relabelling.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>)> = (0..self.g.n)
                .map(|v| {
                    let mut nb: Vec<u32> = self.adj[v].iter().map(|&w| colors[w]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let c = count_classes(&next);
            colors = next;
            if c == classes {
                return colors;
            }
            classes = c;
        }
    }

    fn search(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let colors = self.refine(colors);
        let n = self.g.n;
        if count_classes(&colors) == n {
            self.leaf(colors);
            return;
        }
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..n as u32)
            .filter(|&c| sizes[c as usize] > 1)
            .min_by_key(|&c| (sizes[c as usize], c))
            .expect("non-discrete partition");
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let orbit = self.orbits_fixing(prefix);
                if explored.iter().any(|&w| orbit[w] == orbit[v]) {
                    continue;
                }
            }
            let next: Vec<u32> =
                colors.iter().enumerate().map(|(w, &c)| 2 * c + u32::from(c == target && w != v)).collect();
            prefix.push(v);
            self.search(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, labels: Vec<u32>) {
        let mut code: Code = self
            .g
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (labels[u], labels[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        code.sort_unstable();
        match &self.best {
            None => self.best = Some((code, labels)),
            Some((best, best_labels)) => match code.cmp(best) {
                Ordering::Less => self.best = Some((code, labels)),
                Ordering::Equal => {
                    let mut inv = vec![0usize; labels.len()];
                    for (v, &l) in best_labels.iter().enumerate() {
                        inv[l as usize] = v;
                    }
                    let gamma: Vec<usize> = labels.iter().map(|&l| inv[l as usize]).collect();
                    if gamma.iter().enumerate().any(|(v, &w)| v != w) {
                        self.automorphisms.push(gamma);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }

    /// Orbit representatives under the known automorphisms fixing `prefix`.
    fn orbits_fixing(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&v| gamma[v] == v) {
                for (v, &w) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present") as u32).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mg(n: usize, e: &[(usize, usize)]) -> Multigraph {
        Multigraph { n, edges: e.to_vec() }
    }

    fn permuted(g: &Multigraph, perm: &[usize]) -> Multigraph {
        let mut edges: Vec<(usize, usize)> = g.edges.iter().map(|&(u, v)| (perm[v], perm[u])).collect();
        edges.reverse();
        Multigraph { n: g.n, edges }
    }

    /// Isomorphism test by trying every permutation.
    fn brute_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
        fn norm(g: &Multigraph, p: &[usize]) -> Vec<(usize, usize)> {
            let mut e: Vec<_> = g.edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
            e.sort();
            e
        }
        if a.n != b.n || a.edges.len() != b.edges.len() {
            return false;
        }
        let target = norm(b, &(0..b.n).collect::<Vec<_>>());
        let mut perm: Vec<usize> = (0..a.n).collect();
        fn rec(k: usize, perm: &mut Vec<usize>, a: &Multigraph, target: &[(usize, usize)]) -> bool {
            if k == perm.len() {
                return norm(a, perm) == target;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                if rec(k + 1, perm, a, target) {
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }
        rec(0, &mut perm, a, &target)
    }

    #[test]
    fn cycle_smooths_to_loop() {
        let c = mg(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(c.smoothed(&[]).canonical_code(), "1:0-0*1");
        let p = mg(3, &[(0, 1), (1, 2)]);
        assert_eq!(p.smoothed(&[]).canonical_code(), "2:0-1*1");
        assert_eq!(mg(1, &[]).canonical_code(), "1:");
    }

    #[test]
    fn protected_vertex_survives() {
        let c = mg(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let s = c.smoothed(&[false, false, true, false]);
        assert_eq!(s.n, 1);
        let p = mg(3, &[(0, 1), (1, 2)]);
        assert_eq!(p.smoothed(&[false, true, false]).n, 3);
    }

    #[test]
    fn theta_and_figure_eight_differ() {
        let theta = mg(2, &[(0, 1), (0, 1), (0, 1)]);
        let eight = mg(1, &[(0, 0), (0, 0)]);
        let dumbbell = mg(2, &[(0, 0), (0, 1), (1, 1)]);
        let codes = [theta.canonical_code(), eight.canonical_code(), dumbbell.canonical_code()];
        assert_ne!(codes[0], codes[1]);
        assert_ne!(codes[0], codes[2]);
        assert_ne!(codes[1], codes[2]);
    }

    #[test]
    fn symmetric_graphs_finish() {
        // K_{3,3} and a large star have many automorphisms
        let mut k33 = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                k33.push((a, b));
            }
        }
        let g = mg(6, &k33);
        let h = permuted(&g, &[5, 3, 1, 0, 2, 4]);
        assert_eq!(g.canonical_code(), h.canonical_code());
        let star: Vec<(usize, usize)> = (1..40).map(|v| (0, v)).collect();
        assert_eq!(mg(40, &star).canonical_code(), "40:0-39*1,1-39*1,2-39*1,3-39*1,4-39*1,5-39*1,6-39*1,7-39*1,8-39*1,9-39*1,10-39*1,11-39*1,12-39*1,13-39*1,14-39*1,15-39*1,16-39*1,17-39*1,18-39*1,19-39*1,20-39*1,21-39*1,22-39*1,23-39*1,24-39*1,25-39*1,26-39*1,27-39*1,28-39*1,29-39*1,30-39*1,31-39*1,32-39*1,33-39*1,34-39*1,35-39*1,36-39*1,37-39*1,38-39*1");
    }

    fn arb_graph() -> impl Strategy<Value = Multigraph> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..8).prop_map(move |edges| Multigraph { n, edges })
        })
    }

    proptest! {
        #[test]
        fn code_is_relabelling_invariant(g in arb_graph(), seed in any::<u64>()) {
            let mut perm: Vec<usize> = (0..g.n).collect();
            let mut s = seed;
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(g.canonical_code(), permuted(&g, &perm).canonical_code());
        }

        #[test]
        fn code_separates_non_isomorphic(a in arb_graph(), b in arb_graph()) {
            prop_assert_eq!(a.canonical_code() == b.canonical_code(), brute_isomorphic(&a, &b));
        }
    }
}
