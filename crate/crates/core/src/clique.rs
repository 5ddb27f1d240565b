//! Exact maximum clique by bitset branch and bound.
//!
//! The solver follows the BBMC scheme: vertices are renumbered by a degeneracy
//! order, candidate sets are bitsets, and a greedy sequential coloring of the
//! candidates bounds the clique size reachable from each branch.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::cayley::SymmetricSet;
use crate::error::{Error, Result};
use crate::groups::GroupSpec;

/// Simple undirected graph with one bitset row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl DenseGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        DenseGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in 0..u {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Add `{u, v}`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> DenseGraph {
        let mut g = DenseGraph::new(self.n);
        for u in 0..self.n {
            for v in 0..u {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// The subgraph induced on `vertices`, renumbered `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> DenseGraph {
        let mut g = DenseGraph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices[..i].iter().enumerate() {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Adjacency-list text: a `# vertices N` header, then `u v1 v2 ...` lines.
    pub fn to_adjacency_list(&self) -> String {
        let mut out = format!("# vertices {}\n", self.n);
        for v in 0..self.n {
            write!(out, "{v}").unwrap();
            for w in self.neighbors(v) {
                write!(out, " {w}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_adjacency_list(text: &str) -> Result<DenseGraph> {
        let mut n = None;
        let mut lists = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(num) = rest.trim().strip_prefix("vertices") {
                    n = Some(num.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad header {line:?}")))?);
                }
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad adjacency line {line:?}")))?;
            lists.push(nums);
        }
        let n = n.unwrap_or_else(|| lists.iter().flatten().map(|&v| v + 1).max().unwrap_or(0));
        let mut g = DenseGraph::new(n);
        for list in &lists {
            for &w in &list[1..] {
                if list[0] >= n || w >= n {
                    return Err(Error::Structural(format!("vertex outside 0..{n}")));
                }
                g.add_edge(list[0], w);
            }
        }
        Ok(g)
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

/// A clique witness. `maximum` is true when the search finished within budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCertificate {
    pub vertices: Vec<usize>,
    pub maximum: bool,
    pub nodes: u64,
}

impl CliqueCertificate {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Maximum number of search nodes; `None` searches to completion.
    pub node_budget: Option<u64>,
    /// Worker threads for the top-level branches; 1 gives a deterministic witness.
    pub workers: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: None,
            workers: 1,
        }
    }
}

pub fn is_clique(g: &DenseGraph, u: &[usize]) -> bool {
    u.iter().all(|&x| x < g.num_vertices())
        && u.iter()
            .enumerate()
            .all(|(i, &x)| u[..i].iter().all(|&y| x != y && g.has_edge(x, y)))
}

pub fn max_clique(g: &DenseGraph) -> CliqueCertificate {
    max_clique_with(g, SolverOptions::default())
}

pub fn independence_number(g: &DenseGraph) -> CliqueCertificate {
    max_clique(&g.complement())
}

/// Largest clique containing `v`: `v` plus a maximum clique of its neighbourhood.
pub fn max_clique_containing(g: &DenseGraph, v: usize, opts: SolverOptions) -> CliqueCertificate {
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    let sub = g.induced(&nbrs);
    let inner = max_clique_with(&sub, opts);
    let mut vertices: Vec<usize> = std::iter::once(v).chain(inner.vertices.iter().map(|&i| nbrs[i])).collect();
    vertices.sort_unstable();
    CliqueCertificate {
        vertices,
        maximum: inner.maximum,
        nodes: inner.nodes,
    }
}

/// Degeneracy order: repeatedly remove a minimum-degree vertex (smallest index on ties).
pub fn degeneracy_order(g: &DenseGraph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| deg[v]).unwrap();
        removed[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    order
}

struct Search<'a> {
    g: &'a DenseGraph,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
}

impl Search<'_> {
    fn offer(&self, clique: &[usize]) {
        if clique.len() <= self.best.load(Ordering::Relaxed) {
            return;
        }
        let mut w = self.witness.lock().unwrap();
        if clique.len() > w.len() {
            *w = clique.to_vec();
            self.best.fetch_max(clique.len(), Ordering::Relaxed);
        }
    }

    /// Greedy sequential coloring of `p`; returns vertices with their color bounds,
    /// in increasing color order.
    fn color_sort(&self, p: &[u64], order: &mut Vec<usize>, bound: &mut Vec<usize>) {
        order.clear();
        bound.clear();
        let mut uncolored = p.to_vec();
        let mut class = vec![0u64; p.len()];
        let mut k = 0;
        while uncolored.iter().any(|&w| w != 0) {
            k += 1;
            class.copy_from_slice(&uncolored);
            loop {
                let Some(wi) = class.iter().position(|&w| w != 0) else { break };
                let v = wi * 64 + class[wi].trailing_zeros() as usize;
                class[wi] &= class[wi] - 1;
                uncolored[wi] &= !(1u64 << (v % 64));
                for (c, r) in class.iter_mut().zip(self.g.row(v)) {
                    *c &= !r;
                }
                order.push(v);
                bound.push(k);
            }
        }
    }

    fn expand(&self, clique: &mut Vec<usize>, p: &mut [u64]) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        let (mut order, mut bound) = (Vec::new(), Vec::new());
        self.color_sort(p, &mut order, &mut bound);
        for i in (0..order.len()).rev() {
            if clique.len() + bound[i] <= self.best.load(Ordering::Relaxed) {
                return;
            }
            let v = order[i];
            clique.push(v);
            let mut next: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                self.offer(clique);
            } else {
                self.expand(clique, &mut next);
            }
            clique.pop();
            p[v / 64] &= !(1u64 << (v % 64));
        }
    }
}

pub fn max_clique_with(g: &DenseGraph, opts: SolverOptions) -> CliqueCertificate {
    let n = g.num_vertices();
    if n == 0 {
        return CliqueCertificate {
            vertices: vec![],
            maximum: true,
            nodes: 0,
        };
    }
    // renumber so the high-core vertices come first
    let mut order = degeneracy_order(g);
    order.reverse();
    let h = g.induced(&order);
    let search = Search {
        g: &h,
        best: AtomicUsize::new(0),
        witness: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        budget: opts.node_budget.unwrap_or(u64::MAX),
        aborted: AtomicBool::new(false),
    };
    search.offer(&[0]);
    let mut all = vec![0u64; h.words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    if opts.workers <= 1 {
        search.expand(&mut Vec::new(), &mut all);
    } else {
        // top-level branches: vertex v with the candidates coloured before it
        let (mut top, mut bound) = (Vec::new(), Vec::new());
        search.color_sort(&all, &mut top, &mut bound);
        let branches: Vec<(usize, Vec<u64>)> = (0..top.len())
            .rev()
            .map(|i| {
                let mut p = vec![0u64; h.words];
                for &u in &top[..i] {
                    p[u / 64] |= 1 << (u % 64);
                }
                (i, p)
            })
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            branches.into_par_iter().for_each(|(i, p)| {
                if bound[i] <= search.best.load(Ordering::Relaxed) {
                    return;
                }
                let v = top[i];
                let mut next: Vec<u64> = p.iter().zip(h.row(v)).map(|(a, b)| a & b).collect();
                let mut clique = vec![v];
                if next.iter().all(|&w| w == 0) {
                    search.offer(&clique);
                } else {
                    search.expand(&mut clique, &mut next);
                }
            });
        });
    }
    let mut vertices: Vec<usize> = search.witness.into_inner().unwrap().iter().map(|&i| order[i]).collect();
    vertices.sort_unstable();
    debug_assert!(is_clique(g, &vertices));
    CliqueCertificate {
        vertices,
        maximum: !search.aborted.load(Ordering::Relaxed),
        nodes: search.nodes.load(Ordering::Relaxed),
    }
}

/// A subgroup `H` with `H \ {0} ⊆ S`, which is a clique of the Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupWitness {
    pub elements: Vec<usize>,
    /// Dimension over `F_p` for vector spaces.
    pub dim: Option<usize>,
    /// True when every subspace up to `max_dim` was examined.
    pub exhaustive: bool,
}

const SUBGROUP_NODE_BUDGET: u64 = 10_000_000;

/// Largest subgroup found inside `S ∪ {0}`. Over `F_p^n` this searches subspaces up to
/// dimension `max_dim` by extending bases inside `S`; other groups use only cyclic subgroups.
pub fn subgroup_clique_bound(g: &GroupSpec, s: &SymmetricSet, max_dim: usize) -> SubgroupWitness {
    let Some(p) = g.field_characteristic() else {
        let mut best = vec![0];
        for x in s.elements() {
            let ord = g.element_order(x) as usize;
            if ord <= best.len() {
                continue;
            }
            let multiples: Vec<usize> = (0..ord).map(|k| g.mul_idx(k as i64, x)).collect();
            if multiples[1..].iter().all(|&y| s.contains(y)) {
                best = multiples;
            }
        }
        best.sort_unstable();
        return SubgroupWitness {
            elements: best,
            dim: None,
            exhaustive: true,
        };
    };
    let mut state = SubspaceSearch {
        g,
        s,
        p,
        max_dim: max_dim.min(g.rank()),
        in_h: vec![false; g.order()],
        best: vec![0],
        nodes: 0,
        exhaustive: true,
    };
    state.in_h[0] = true;
    state.dfs(&mut vec![0], 0);
    let mut elements = state.best;
    elements.sort_unstable();
    let dim = (elements.len() as f64).log(p as f64).round() as usize;
    SubgroupWitness {
        elements,
        dim: Some(dim),
        exhaustive: state.exhaustive,
    }
}

struct SubspaceSearch<'a> {
    g: &'a GroupSpec,
    s: &'a SymmetricSet,
    p: u64,
    max_dim: usize,
    in_h: Vec<bool>,
    best: Vec<usize>,
    nodes: u64,
    exhaustive: bool,
}

impl SubspaceSearch<'_> {
    /// `h` lists the current subspace; new basis vectors are taken above `min_next`
    /// and must be the smallest element of their coset `y + H`.
    fn dfs(&mut self, h: &mut Vec<usize>, min_next: usize) {
        if h.len() > self.best.len() {
            self.best = h.clone();
        }
        let dim = h.len().ilog(self.p as usize) as usize;
        if dim >= self.max_dim {
            return;
        }
        let candidates: Vec<usize> = self.s.elements().filter(|&y| y > min_next && !self.in_h[y]).collect();
        for y in candidates {
            self.nodes += 1;
            if self.nodes > SUBGROUP_NODE_BUDGET {
                self.exhaustive = false;
                return;
            }
            if h.iter().any(|&x| self.g.add_idx(x, y) < y) {
                continue;
            }
            let mut added = Vec::with_capacity(h.len() * (self.p as usize - 1));
            let mut ok = true;
            'outer: for a in 1..self.p {
                let ay = self.g.mul_idx(a as i64, y);
                for &x in h.iter() {
                    let z = self.g.add_idx(ay, x);
                    if !self.s.contains(z) {
                        ok = false;
                        break 'outer;
                    }
                    added.push(z);
                }
            }
            if !ok {
                continue;
            }
            for &z in &added {
                self.in_h[z] = true;
            }
            let old = h.len();
            h.extend_from_slice(&added);
            self.dfs(h, y);
            h.truncate(old);
            for &z in &added {
                self.in_h[z] = false;
            }
            if !self.exhaustive {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn cycle(n: usize) -> DenseGraph {
        DenseGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn paley13() -> DenseGraph {
        let qr = [1, 3, 4, 9, 10, 12];
        let mut g = DenseGraph::new(13);
        for u in 0..13 {
            for v in 0..u {
                if qr.contains(&((u - v) % 13)) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Subset DP over all vertex masks: clique[m] iff clique[m without its lowest
    /// vertex] and that vertex is adjacent to the rest.
    fn brute_force_clique(g: &DenseGraph) -> usize {
        let n = g.num_vertices();
        let adj: Vec<u32> = (0..n)
            .map(|v| (0..n).filter(|&w| g.has_edge(v, w)).fold(0u32, |m, w| m | 1 << w))
            .collect();
        let mut clique = vec![false; 1 << n];
        clique[0] = true;
        let mut best = 0;
        for m in 1usize..1 << n {
            let v = m.trailing_zeros() as usize;
            let rest = m & (m - 1);
            clique[m] = clique[rest] && (adj[v] as usize & rest) == rest;
            if clique[m] {
                best = best.max(m.count_ones() as usize);
            }
        }
        best
    }

    fn random_graph(n: usize, density: f64, seed: u64) -> DenseGraph {
        let mut r = rng::stream(seed, 0, "graph");
        let mut g = DenseGraph::new(n);
        for u in 0..n {
            for v in 0..u {
                if r.gen_bool(density) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn clique_examples() {
        assert_eq!(max_clique(&cycle(5)).size(), 2);
        assert_eq!(max_clique(&DenseGraph::complete(6)).size(), 6);
        let p = max_clique(&paley13());
        assert_eq!(p.size(), 3);
        assert!(p.maximum && is_clique(&paley13(), &p.vertices));
        assert_eq!(max_clique(&DenseGraph::new(0)).size(), 0);
        assert_eq!(max_clique(&DenseGraph::new(3)).size(), 1);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(independence_number(&DenseGraph::new(7)).size(), 7);
        assert_eq!(independence_number(&DenseGraph::complete(7)).size(), 1);
        assert_eq!(independence_number(&cycle(5)).size(), 2);
    }

    #[test]
    fn is_clique_examples() {
        let c = cycle(5);
        assert!(is_clique(&c, &[]));
        assert!(is_clique(&c, &[3]));
        assert!(is_clique(&c, &[0, 1]));
        assert!(!is_clique(&c, &[0, 2]));
        assert!(!is_clique(&c, &[1, 1]));
        assert!(!is_clique(&c, &[9]));
    }

    #[test]
    fn parallel_and_budgeted_search() {
        let g = random_graph(120, 0.6, 3);
        let exact = max_clique(&g);
        let par = max_clique_with(&g, SolverOptions { node_budget: None, workers: 4 });
        assert_eq!(exact.size(), par.size());
        assert!(is_clique(&g, &par.vertices) && par.maximum);
        let cut = max_clique_with(&g, SolverOptions { node_budget: Some(3), workers: 1 });
        assert!(!cut.maximum);
        assert!(is_clique(&g, &cut.vertices));
        assert!(cut.size() <= exact.size());
    }

    #[test]
    fn max_clique_containing_matches_global_on_transitive_graphs() {
        let g = paley13();
        assert_eq!(max_clique_containing(&g, 0, SolverOptions::default()).size(), 3);
        let c = cycle(9);
        let w = max_clique_containing(&c, 4, SolverOptions::default());
        assert_eq!(w.size(), 2);
        assert!(w.vertices.contains(&4));
    }

    #[test]
    fn adjacency_list_round_trip() {
        let g = random_graph(70, 0.3, 8);
        assert_eq!(DenseGraph::parse_adjacency_list(&g.to_adjacency_list()).unwrap(), g);
        assert!(DenseGraph::parse_adjacency_list("# vertices 2\n0 5\n").is_err());
    }

    #[test]
    fn subgroup_examples() {
        let f = GroupSpec::vector_space(2, 4).unwrap();
        let full = SymmetricSet::full(&f);
        let w = subgroup_clique_bound(&f, &full, 4);
        assert_eq!(w.elements.len(), 16);
        assert_eq!(w.dim, Some(4));
        let one = SymmetricSet::from_elements(&f, &[5]).unwrap();
        assert_eq!(subgroup_clique_bound(&f, &one, 4).elements, vec![0, 5]);
        let z = GroupSpec::cyclic(12).unwrap();
        let s = SymmetricSet::from_elements(&z, &[4, 8, 3, 9]).unwrap();
        assert_eq!(subgroup_clique_bound(&z, &s, 1).elements, vec![0, 4, 8]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn solver_matches_subset_dp(n in 0usize..18, density in 0.1f64..0.9, seed in any::<u64>()) {
            let g = random_graph(n, density, seed);
            let c = max_clique(&g);
            prop_assert!(is_clique(&g, &c.vertices));
            prop_assert_eq!(c.size(), brute_force_clique(&g));
            let a = independence_number(&g);
            prop_assert_eq!(a.size(), brute_force_clique(&g.complement()));
        }
    }
}
