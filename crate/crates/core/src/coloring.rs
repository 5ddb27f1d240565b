//! Edge-colored complete and complete bipartite hosts.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{domain, structural, Error, Result};
use crate::groups::{sign_classes, GroupSpec};
use crate::rng;

/// The host graph. Bipartite hosts number the left side `0..left` and the
/// right side `left..left + right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Host {
    Complete { n: usize },
    Bipartite { left: usize, right: usize },
}

impl Host {
    pub fn num_vertices(&self) -> usize {
        match *self {
            Host::Complete { n } => n,
            Host::Bipartite { left, right } => left + right,
        }
    }

    pub fn num_edges(&self) -> usize {
        match *self {
            Host::Complete { n } => n * n.saturating_sub(1) / 2,
            Host::Bipartite { left, right } => left * right,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Host::Complete { .. })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match *self {
            Host::Complete { n } => u != v && u < n && v < n,
            Host::Bipartite { left, right } => {
                let (a, b) = (u.min(v), u.max(v));
                a < left && b >= left && b < left + right
            }
        }
    }

    /// Position of edge `{u, v}` in the canonical edge order.
    #[inline]
    pub fn edge_index(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        match *self {
            Host::Complete { .. } => b * (b - 1) / 2 + a,
            Host::Bipartite { left, right } => a * right + (b - left),
        }
    }

    pub fn edge_at(&self, index: usize) -> (usize, usize) {
        match *self {
            Host::Complete { .. } => {
                // invert b(b-1)/2 <= index
                let mut b = (((8 * index + 1) as f64).sqrt() as usize + 1) / 2;
                while b * (b - 1) / 2 > index {
                    b -= 1;
                }
                while (b + 1) * b / 2 <= index {
                    b += 1;
                }
                (index - b * (b - 1) / 2, b)
            }
            Host::Bipartite { left, right } => (index / right, left + index % right),
        }
    }

    /// Vertices adjacent to `v` in the host.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        let range = match *self {
            Host::Complete { n } => 0..n,
            Host::Bipartite { left, right } if v < left => left..left + right,
            Host::Bipartite { left, .. } => 0..left,
        };
        range.filter(move |&w| w != v)
    }

    /// All edges `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let h = *self;
        let (outer, inner): (usize, Box<dyn Fn(usize) -> std::ops::Range<usize>>) = match h {
            Host::Complete { n } => (n, Box::new(|b| 0..b)),
            Host::Bipartite { left, right } => (left, Box::new(move |_| 0..right)),
        };
        (0..outer).flat_map(move |x| {
            inner(x).map(move |y| match h {
                Host::Complete { .. } => (y, x),
                Host::Bipartite { left, .. } => (x, left + y),
            })
        })
    }
}

/// An edge coloring of a host graph with dense color ids `0..R`.
#[derive(Clone, Debug)]
pub struct EdgeColoring {
    host: Host,
    edge_color: Vec<u32>,
    classes: Vec<Vec<(u32, u32)>>,
    class_degree: Vec<u32>,
    max_degree: u32,
    root: Option<Vec<u32>>,
}

impl PartialEq for EdgeColoring {
    fn eq(&self, other: &Self) -> bool {
        self.host == other.host && self.edge_color == other.edge_color
    }
}

impl EdgeColoring {
    /// Build from one arbitrary label per edge (canonical edge order). Labels are
    /// relabelled to dense ids in increasing label order.
    pub fn from_labels<T: Ord + Copy + std::hash::Hash>(host: Host, labels: &[T]) -> Result<Self> {
        if labels.len() != host.num_edges() {
            return structural(format!(
                "{} labels for a host with {} edges",
                labels.len(),
                host.num_edges()
            ));
        }
        let mut distinct: Vec<T> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let id: HashMap<T, u32> = distinct.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
        let edge_color = labels.iter().map(|l| id[l]).collect();
        Self::from_edge_colors(host, edge_color)
    }

    /// Build from dense color ids, one per edge in canonical order. Every id in
    /// `0..=max` must be used.
    pub fn from_edge_colors(host: Host, edge_color: Vec<u32>) -> Result<Self> {
        if edge_color.len() != host.num_edges() {
            return structural(format!(
                "{} colors for a host with {} edges",
                edge_color.len(),
                host.num_edges()
            ));
        }
        let r = edge_color.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0usize; r];
        for &c in &edge_color {
            sizes[c as usize] += 1;
        }
        if let Some(c) = sizes.iter().position(|&s| s == 0) {
            return structural(format!("color id {c} is unused; ids must be dense"));
        }
        let mut classes: Vec<Vec<(u32, u32)>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for ((u, v), &c) in host.edges().zip(&edge_color) {
            classes[c as usize].push((u as u32, v as u32));
        }
        let mut scratch = vec![0u32; host.num_vertices()];
        let class_degree: Vec<u32> = classes
            .iter()
            .map(|edges| {
                let mut best = 0;
                for &(u, v) in edges {
                    for w in [u, v] {
                        scratch[w as usize] += 1;
                        best = best.max(scratch[w as usize]);
                    }
                }
                for &(u, v) in edges {
                    scratch[u as usize] = 0;
                    scratch[v as usize] = 0;
                }
                best
            })
            .collect();
        let max_degree = class_degree.iter().copied().max().unwrap_or(0);
        Ok(EdgeColoring {
            host,
            edge_color,
            classes,
            class_degree,
            max_degree,
            root: None,
        })
    }

    /// Build a refinement of `self` from new dense colors; the root map is composed.
    pub(crate) fn refine(&self, edge_color: Vec<u32>) -> Result<Self> {
        let mut out = Self::from_edge_colors(self.host, edge_color)?;
        let mut root = Vec::with_capacity(out.num_colors());
        for class in &out.classes {
            let (u, v) = class[0];
            let old = self.color(u as usize, v as usize);
            if class.iter().any(|&(a, b)| self.color(a as usize, b as usize) != old) {
                return structural("new coloring is not a refinement");
            }
            root.push(self.root_color(old) as u32);
        }
        out.root = Some(root);
        Ok(out)
    }

    /// The coloring induced on the complete graph over `vertices` (renumbered in
    /// the given order). Root colors refer to the root of `self`.
    pub fn restrict(&self, vertices: &[usize]) -> Result<Self> {
        let host = Host::Complete { n: vertices.len() };
        let mut seen = vec![false; self.num_vertices()];
        for &v in vertices {
            if v >= self.num_vertices() || std::mem::replace(&mut seen[v], true) {
                return structural(format!("vertex {v} is out of range or repeated"));
            }
        }
        let mut labels = Vec::with_capacity(host.num_edges());
        for (u, v) in host.edges() {
            if !self.host.has_edge(vertices[u], vertices[v]) {
                return structural("restriction must induce a complete graph");
            }
            labels.push(self.color(vertices[u], vertices[v]) as u32);
        }
        let mut out = Self::from_labels(host, &labels)?;
        let mut used = labels;
        used.sort_unstable();
        used.dedup();
        out.root = Some(used.iter().map(|&c| self.root_color(c as usize) as u32).collect());
        Ok(out)
    }

    pub fn host(&self) -> Host {
        self.host
    }

    pub fn num_vertices(&self) -> usize {
        self.host.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_color.len()
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    /// Color of the host edge `{u, v}`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> usize {
        self.edge_color[self.host.edge_index(u, v)] as usize
    }

    pub fn try_color(&self, u: usize, v: usize) -> Result<usize> {
        if !self.host.has_edge(u, v) {
            return structural(format!("{{{u}, {v}}} is not a host edge"));
        }
        Ok(self.color(u, v))
    }

    pub fn edge_colors(&self) -> &[u32] {
        &self.edge_color
    }

    /// Edges of color `c`, in canonical edge order.
    pub fn class(&self, c: usize) -> &[(u32, u32)] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<(u32, u32)>] {
        &self.classes
    }

    /// Maximum degree of color class `c`.
    pub fn class_degree(&self, c: usize) -> usize {
        self.class_degree[c] as usize
    }

    /// Δ, the largest degree of any color class.
    pub fn max_degree(&self) -> usize {
        self.max_degree as usize
    }

    pub fn is_proper(&self) -> bool {
        self.max_degree <= 1
    }

    /// For a refined coloring, the color of the original coloring this color came from.
    pub fn root_color(&self, c: usize) -> usize {
        match &self.root {
            Some(r) => r[c] as usize,
            None => c,
        }
    }

    pub fn is_refinement(&self) -> bool {
        self.root.is_some()
    }

    /// Serialize as one `u v color` line per edge, after a host header line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        match self.host {
            Host::Complete { n } => writeln!(out, "# complete {n}").unwrap(),
            Host::Bipartite { left, right } => writeln!(out, "# bipartite {left} {right}").unwrap(),
        }
        for ((u, v), c) in self.host.edges().zip(&self.edge_color) {
            writeln!(out, "{u} {v} {c}").unwrap();
        }
        out
    }

    /// Parse the edge-list format. Without a header the host is the complete
    /// graph on `0..=max vertex`. Color ids may be arbitrary integers.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut host = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("line {}: bad host header", lineno + 1)))
                };
                match words.as_slice() {
                    ["complete", n] => host = Some(Host::Complete { n: num(n)? }),
                    ["bipartite", a, b] => host = Some(Host::Bipartite { left: num(a)?, right: num(b)? }),
                    _ => {}
                }
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|w| w.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: expected `u v color`", lineno + 1)))?;
            let [u, v, c] = nums[..] else {
                return Err(Error::Parse(format!("line {}: expected `u v color`", lineno + 1)));
            };
            edges.push((u as usize, v as usize, c));
        }
        let host = host.unwrap_or_else(|| Host::Complete {
            n: edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0),
        });
        let mut labels = vec![None; host.num_edges()];
        for &(u, v, c) in &edges {
            if !host.has_edge(u, v) {
                return structural(format!("{{{u}, {v}}} is not a host edge"));
            }
            let slot = &mut labels[host.edge_index(u, v)];
            if slot.is_some() {
                return structural(format!("edge {{{u}, {v}}} listed twice"));
            }
            *slot = Some(c);
        }
        let labels: Vec<u64> = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| {
                    let (u, v) = host.edge_at(i);
                    Error::Structural(format!("edge {{{u}, {v}}} has no color"))
                })
            })
            .collect::<Result<_>>()?;
        Self::from_labels(host, &labels)
    }
}

/// Recompute Δ directly from per-vertex color multisets.
pub fn compute_max_degree(c: &EdgeColoring) -> usize {
    let mut per_vertex: Vec<HashMap<u32, usize>> = vec![HashMap::new(); c.num_vertices()];
    for ((u, v), &col) in c.host().edges().zip(c.edge_colors()) {
        *per_vertex[u].entry(col).or_default() += 1;
        *per_vertex[v].entry(col).or_default() += 1;
    }
    per_vertex
        .iter()
        .flat_map(|m| m.values().copied())
        .max()
        .unwrap_or(0)
}

/// A coloring whose vertices are group elements and whose colors are group elements too.
#[derive(Clone, Debug)]
pub struct GroupColoring {
    pub coloring: EdgeColoring,
    pub group: GroupSpec,
    /// Flat index of the element at each vertex (for bipartite hosts: the left copy).
    pub vertices: Vec<usize>,
    /// For difference colorings, the representative of the sign class; for
    /// bipartite products, the sum.
    pub color_elements: Vec<usize>,
}

fn check_vertex_set(g: &GroupSpec, a: &[usize]) -> Result<()> {
    if a.is_empty() {
        return structural("vertex set is empty");
    }
    let mut seen = vec![false; g.order()];
    for &x in a {
        if x >= g.order() {
            return structural(format!("element index {x} outside {g}"));
        }
        if std::mem::replace(&mut seen[x], true) {
            return structural(format!("element {} repeated", g.element(x)));
        }
    }
    Ok(())
}

/// Color `{x, y}` by the sign class of `x - y`.
pub fn difference_coloring(g: &GroupSpec, a: &[usize]) -> Result<GroupColoring> {
    check_vertex_set(g, a)?;
    let part = sign_classes(g);
    let host = Host::Complete { n: a.len() };
    let labels: Vec<u32> = host
        .edges()
        .map(|(u, v)| part.class_of(g.sub_idx(a[u], a[v])).unwrap() as u32)
        .collect();
    let coloring = EdgeColoring::from_labels(host, &labels)?;
    let mut used: Vec<u32> = labels;
    used.sort_unstable();
    used.dedup();
    let color_elements = used.iter().map(|&cl| part.classes()[cl as usize].rep).collect();
    Ok(GroupColoring {
        coloring,
        group: g.clone(),
        vertices: a.to_vec(),
        color_elements,
    })
}

/// Color `(a, b)` of `A x A` by `a + b`.
pub fn bipartite_product_coloring(g: &GroupSpec, a: &[usize]) -> Result<GroupColoring> {
    check_vertex_set(g, a)?;
    let host = Host::Bipartite { left: a.len(), right: a.len() };
    let labels: Vec<usize> = host
        .edges()
        .map(|(u, v)| g.add_idx(a[u], a[v - a.len()]))
        .collect();
    let coloring = EdgeColoring::from_labels(host, &labels)?;
    let mut used = labels;
    used.sort_unstable();
    used.dedup();
    Ok(GroupColoring {
        coloring,
        group: g.clone(),
        vertices: a.to_vec(),
        color_elements: used,
    })
}

const NONE: u32 = u32::MAX;

/// Refine `c` into a proper coloring. Classes with Δ_c ≤ 1 are kept, classes with
/// Δ_c = 2 are split into at most 3 matchings along their paths and cycles, and
/// larger classes are edge-colored with Δ_c + 1 matchings (Misra–Gries).
pub fn properize(c: &EdgeColoring) -> EdgeColoring {
    if c.is_proper() {
        return c.clone();
    }
    let nv = c.num_vertices();
    // sub-color of each edge within its class
    let mut sub = vec![0u32; c.num_edges()];
    let mut subs_used = vec![1u32; c.num_colors()];
    let mut nbr = vec![[NONE; 2]; nv];
    for (col, edges) in c.classes().iter().enumerate() {
        match c.class_degree(col) {
            0 | 1 => {}
            2 => {
                subs_used[col] = split_paths_and_cycles(c.host(), edges, &mut nbr, &mut sub);
            }
            d => {
                let colors = misra_gries(edges, d);
                for (&(u, v), s) in edges.iter().zip(colors) {
                    sub[c.host().edge_index(u as usize, v as usize)] = s;
                }
                subs_used[col] = d as u32 + 1;
            }
        }
    }
    // dense ids ordered by (old class, sub-index), skipping empty sub-classes
    let mut present: Vec<Vec<bool>> = subs_used.iter().map(|&k| vec![false; k as usize]).collect();
    for (e, &old) in c.edge_colors().iter().enumerate() {
        present[old as usize][sub[e] as usize] = true;
    }
    let mut offset: Vec<Vec<u32>> = Vec::with_capacity(present.len());
    let mut next = 0u32;
    for p in &present {
        offset.push(
            p.iter()
                .map(|&used| {
                    let id = next;
                    next += u32::from(used);
                    id
                })
                .collect(),
        );
    }
    let new_colors: Vec<u32> = c
        .edge_colors()
        .iter()
        .zip(&sub)
        .map(|(&old, &s)| offset[old as usize][s as usize])
        .collect();
    let out = c.refine(new_colors).expect("properize produces a refinement");
    debug_assert!(out.is_proper());
    out
}

/// Split a class of maximum degree 2 into matchings. Returns the number of sub-colors.
fn split_paths_and_cycles(host: Host, edges: &[(u32, u32)], nbr: &mut [[u32; 2]], sub: &mut [u32]) -> u32 {
    for &(u, v) in edges {
        for (a, b) in [(u, v), (v, u)] {
            let slot = &mut nbr[a as usize];
            if slot[0] == NONE {
                slot[0] = b;
            } else {
                slot[1] = b;
            }
        }
    }
    let degree = |nbr: &[[u32; 2]], x: u32| nbr[x as usize].iter().filter(|&&y| y != NONE).count();
    let mut done = vec![false; edges.len()];
    let index_of: HashMap<(u32, u32), usize> = edges.iter().enumerate().map(|(i, &(u, v))| ((u, v), i)).collect();
    let key = |a: u32, b: u32| (a.min(b), a.max(b));
    let mut used = 1;
    let mut walk = |start: u32, first: u32, nbr: &[[u32; 2]], done: &mut [bool], cycle: bool| {
        let mut path = Vec::new();
        let (mut prev, mut cur) = (start, first);
        path.push(index_of[&key(prev, cur)]);
        loop {
            let next = nbr[cur as usize].iter().copied().find(|&y| y != NONE && y != prev);
            match next {
                Some(y) if !done[index_of[&key(cur, y)]] && !path.contains(&index_of[&key(cur, y)]) => {
                    path.push(index_of[&key(cur, y)]);
                    prev = cur;
                    cur = y;
                }
                _ => break,
            }
        }
        let len = path.len();
        for (k, &e) in path.iter().enumerate() {
            done[e] = true;
            let s = if cycle && len % 2 == 1 && k == len - 1 { 2 } else { (k % 2) as u32 };
            let (u, v) = edges[e];
            sub[host.edge_index(u as usize, v as usize)] = s;
            used = used.max(s + 1);
        }
    };
    // paths first, from their endpoint with the smaller id
    for i in 0..edges.len() {
        let (u, v) = edges[i];
        for x in [u, v] {
            if !done[i] && degree(nbr, x) == 1 {
                let first = nbr[x as usize][0];
                walk(x, first, nbr, &mut done, false);
            }
        }
    }
    for i in 0..edges.len() {
        if !done[i] {
            let (u, v) = edges[i];
            walk(u, v, nbr, &mut done, true);
        }
    }
    for &(u, v) in edges {
        nbr[u as usize] = [NONE; 2];
        nbr[v as usize] = [NONE; 2];
    }
    used
}

/// Proper edge coloring of a simple graph with at most `delta + 1` colors.
fn misra_gries(edges: &[(u32, u32)], delta: usize) -> Vec<u32> {
    let mut local: HashMap<u32, usize> = HashMap::new();
    for &(u, v) in edges {
        for x in [u, v] {
            let next = local.len();
            local.entry(x).or_insert(next);
        }
    }
    let p = delta + 1;
    let nv = local.len();
    // at[x * p + col] = neighbour across the edge of color col at x
    let mut at = vec![NONE; nv * p];
    let free = |at: &[u32], x: usize| (0..p).find(|&col| at[x * p + col] == NONE).expect("degree < palette");
    let color_of = |at: &[u32], x: usize, y: usize| (0..p).find(|&col| at[x * p + col] == y as u32);
    let set = |at: &mut [u32], x: usize, y: usize, col: usize| {
        at[x * p + col] = y as u32;
        at[y * p + col] = x as u32;
    };
    let unset = |at: &mut [u32], x: usize, y: usize, col: usize| {
        at[x * p + col] = NONE;
        at[y * p + col] = NONE;
    };
    for &(eu, ev) in edges {
        let (u, v) = (local[&eu], local[&ev]);
        // maximal fan at u starting from v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let ext = (0..p).find_map(|col| {
                if at[last * p + col] != NONE {
                    return None;
                }
                let x = at[u * p + col];
                (x != NONE && !fan.contains(&(x as usize))).then_some(x as usize)
            });
            match ext {
                Some(x) => fan.push(x),
                None => break,
            }
        }
        let c = free(&at, u);
        let d = free(&at, *fan.last().unwrap());
        if c != d {
            // invert the cd-path starting at u
            let mut path = Vec::new();
            let (mut cur, mut col) = (u, d);
            while at[cur * p + col] != NONE {
                let next = at[cur * p + col] as usize;
                path.push((cur, next, col));
                cur = next;
                col = if col == c { d } else { c };
            }
            for &(x, y, col) in &path {
                unset(&mut at, x, y, col);
            }
            for &(x, y, col) in &path {
                set(&mut at, x, y, if col == c { d } else { c });
            }
        }
        // first fan vertex with d free, keeping the prefix a fan
        let mut w = 0;
        for i in 0..fan.len() {
            if i > 0 {
                let col = color_of(&at, u, fan[i]);
                match col {
                    Some(col) if at[fan[i - 1] * p + col] == NONE => {}
                    _ => break,
                }
            }
            if at[fan[i] * p + d] == NONE {
                w = i;
                break;
            }
        }
        for i in 0..w {
            let col = color_of(&at, u, fan[i + 1]).expect("fan edges are colored");
            unset(&mut at, u, fan[i + 1], col);
            set(&mut at, u, fan[i], col);
        }
        set(&mut at, u, fan[w], d);
    }
    edges
        .iter()
        .map(|&(a, b)| color_of(&at, local[&a], local[&b]).unwrap() as u32)
        .collect()
}

/// Cut every class with more than `⌊n/K⌋` edges into chunks of that size.
pub fn split_large_classes(c: &EdgeColoring, k: f64) -> Result<EdgeColoring> {
    let n = c.num_vertices();
    if !(k > 0.0) {
        return domain(format!("K = {k} must be positive"));
    }
    if !c.is_proper() {
        return domain("split_large_classes needs a proper coloring");
    }
    if c.num_colors() as f64 > k * n as f64 + 1e-9 {
        return domain(format!("{} colors exceed K n = {}", c.num_colors(), k * n as f64));
    }
    let cap = (n as f64 / k).floor() as usize;
    if cap == 0 {
        return domain(format!("n / K = {} leaves no room for an edge", n as f64 / k));
    }
    if c.classes().iter().all(|e| e.len() <= cap) {
        return Ok(c.clone());
    }
    let mut new_colors = vec![0u32; c.num_edges()];
    let mut next = 0u32;
    for edges in c.classes() {
        for chunk in edges.chunks(cap) {
            for &(u, v) in chunk {
                new_colors[c.host().edge_index(u as usize, v as usize)] = next;
            }
            next += 1;
        }
    }
    c.refine(new_colors)
}

/// The graph formed by the colors in a chosen subset.
#[derive(Clone, Debug)]
pub struct EntangledGraph<'a> {
    pub coloring: &'a EdgeColoring,
    pub included: Vec<bool>,
}

impl<'a> EntangledGraph<'a> {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.coloring.host().has_edge(u, v) && self.included[self.coloring.color(u, v)]
    }

    pub fn colors(&self) -> Vec<usize> {
        (0..self.included.len()).filter(|&c| self.included[c]).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.included
            .iter()
            .enumerate()
            .filter(|(_, &inc)| inc)
            .flat_map(move |(c, _)| self.coloring.class(c).iter().map(|&(u, v)| (u as usize, v as usize)))
    }

    pub fn num_edges(&self) -> usize {
        self.colors().iter().map(|&c| self.coloring.class(c).len()).sum()
    }

    pub fn to_dense(&self) -> crate::clique::DenseGraph {
        let mut g = crate::clique::DenseGraph::new(self.coloring.num_vertices());
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        g
    }

    /// One color id per line.
    pub fn to_color_list(&self) -> String {
        self.colors().iter().map(|c| format!("{c}\n")).collect()
    }
}

pub fn entangle<'a>(c: &'a EdgeColoring, colors: &[usize]) -> Result<EntangledGraph<'a>> {
    let mut included = vec![false; c.num_colors()];
    for &col in colors {
        if col >= c.num_colors() {
            return structural(format!("color {col} outside 0..{}", c.num_colors()));
        }
        included[col] = true;
    }
    Ok(EntangledGraph { coloring: c, included })
}

pub fn sample_entangled(c: &EdgeColoring, p: f64, seed: u64) -> Result<EntangledGraph<'_>> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("probability {p} outside [0, 1]"));
    }
    let mut rng = rng::stream(seed, 0, "entangle");
    let included = (0..c.num_colors()).map(|_| rng.gen_bool(p)).collect();
    Ok(EntangledGraph { coloring: c, included })
}

/// Parse a color-subset file (one color id per line).
pub fn parse_color_list(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<usize>().map_err(|_| Error::Parse(format!("bad color id {l:?}"))))
        .collect()
}

/// Number of distinct colors on edges inside `u`.
pub fn colors_within(c: &EdgeColoring, u: &[usize]) -> Result<usize> {
    let n = c.num_vertices();
    if let Some(&bad) = u.iter().find(|&&x| x >= n) {
        return structural(format!("vertex {bad} outside host of {n} vertices"));
    }
    let mut verts = u.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let mut seen = vec![false; c.num_colors()];
    let mut count = 0;
    for (i, &x) in verts.iter().enumerate() {
        for &y in &verts[..i] {
            if c.host().has_edge(x, y) {
                let col = c.color(x, y);
                if !std::mem::replace(&mut seen[col], true) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn all(g: &GroupSpec) -> Vec<usize> {
        (0..g.order()).collect()
    }

    fn class_sizes(c: &EdgeColoring) -> Vec<usize> {
        c.classes().iter().map(Vec::len).collect()
    }

    #[test]
    fn edge_index_round_trip() {
        for host in [Host::Complete { n: 9 }, Host::Bipartite { left: 3, right: 5 }] {
            for (i, (u, v)) in host.edges().enumerate() {
                assert_eq!(host.edge_index(u, v), i);
                assert_eq!(host.edge_index(v, u), i);
                assert_eq!(host.edge_at(i), (u, v));
                assert!(host.has_edge(u, v));
            }
            assert_eq!(host.edges().count(), host.num_edges());
        }
    }

    #[test]
    fn difference_coloring_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        let gc = difference_coloring(&f, &all(&f)).unwrap();
        assert_eq!(gc.coloring.num_colors(), 7);
        assert_eq!(gc.coloring.max_degree(), 1);
        assert_eq!(class_sizes(&gc.coloring), vec![4; 7]);

        let z5 = GroupSpec::cyclic(5).unwrap();
        let gc = difference_coloring(&z5, &all(&z5)).unwrap();
        assert_eq!(gc.coloring.num_colors(), 2);
        assert_eq!(gc.color_elements, vec![1, 2]);
        assert_eq!(gc.coloring.max_degree(), 2);
        assert_eq!(class_sizes(&gc.coloring), vec![5, 5]);

        let z7 = GroupSpec::cyclic(7).unwrap();
        assert_eq!(difference_coloring(&z7, &[0, 1]).unwrap().coloring.num_colors(), 1);
        assert!(difference_coloring(&z7, &[1, 1]).is_err());
        assert!(difference_coloring(&z7, &[]).is_err());
    }

    #[test]
    fn bipartite_product_examples() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let gc = bipartite_product_coloring(&z3, &all(&z3)).unwrap();
        assert_eq!(gc.coloring.num_colors(), 3);
        assert_eq!(class_sizes(&gc.coloring), vec![3, 3, 3]);
        assert!(gc.coloring.is_proper());

        let one = bipartite_product_coloring(&z3, &[0]).unwrap();
        assert_eq!((one.coloring.num_colors(), one.coloring.num_edges()), (1, 1));

        let f = GroupSpec::vector_space(2, 2).unwrap();
        let gc = bipartite_product_coloring(&f, &all(&f)).unwrap();
        assert_eq!(gc.coloring.num_colors(), 4);
        assert_eq!(gc.coloring.max_degree(), 1);
    }

    #[test]
    fn properize_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        let proper = difference_coloring(&f, &all(&f)).unwrap().coloring;
        assert_eq!(properize(&proper), proper);

        let z5 = GroupSpec::cyclic(5).unwrap();
        let c = difference_coloring(&z5, &all(&z5)).unwrap().coloring;
        let p = properize(&c);
        assert!(p.is_proper());
        // each 5-cycle splits into matchings of sizes 2, 2, 1
        assert_eq!(p.num_colors(), 6);
        assert_eq!(class_sizes(&p), vec![2, 2, 1, 2, 2, 1]);
        assert_eq!((0..6).map(|k| p.root_color(k)).collect::<Vec<_>>(), vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn split_examples() {
        let f = GroupSpec::vector_space(2, 4).unwrap();
        let c = difference_coloring(&f, &all(&f)).unwrap().coloring;
        assert_eq!(split_large_classes(&c, 1.0).unwrap(), c);
        assert!(!split_large_classes(&c, 1.0).unwrap().is_refinement());
        assert!(matches!(split_large_classes(&c, 32.0), Err(Error::Domain(_))));
        assert!(matches!(split_large_classes(&c, 0.5), Err(Error::Domain(_))));

        let z5 = GroupSpec::cyclic(5).unwrap();
        let nonproper = difference_coloring(&z5, &all(&z5)).unwrap().coloring;
        assert!(matches!(split_large_classes(&nonproper, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn split_with_cap_four() {
        // 15 perfect matchings of 8 edges on 16 vertices; K = 4 caps classes at 4 edges
        let f = GroupSpec::vector_space(2, 4).unwrap();
        let c = difference_coloring(&f, &all(&f)).unwrap().coloring;
        let s = split_large_classes(&c, 4.0).unwrap();
        assert!(s.classes().iter().all(|e| e.len() <= 4));
        assert_eq!(s.num_colors(), 30);
        assert!(s.num_colors() <= 2 * 4 * 16);
        for k in 0..s.num_colors() {
            assert_eq!(s.root_color(k), k / 2);
        }
    }

    #[test]
    fn entangle_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        let c = difference_coloring(&f, &all(&f)).unwrap().coloring;
        let full = entangle(&c, &(0..7).collect::<Vec<_>>()).unwrap();
        assert_eq!(full.num_edges(), 28);
        let empty = entangle(&c, &[]).unwrap();
        assert_eq!(empty.num_edges(), 0);
        assert!(entangle(&c, &[7]).is_err());
        let a = sample_entangled(&c, 0.5, 11).unwrap();
        let b = sample_entangled(&c, 0.5, 11).unwrap();
        assert_eq!(a.included, b.included);
        assert_eq!(parse_color_list(&a.to_color_list()).unwrap(), a.colors());
        assert!(sample_entangled(&c, 1.5, 0).is_err());
    }

    #[test]
    fn entangle_frequency_within_five_sigma() {
        let host = Host::Complete { n: 6 };
        let c = EdgeColoring::from_edge_colors(host, (0..15).collect()).unwrap();
        let trials = 10_000;
        let p = 0.3;
        let mut counts = vec![0usize; 15];
        for t in 0..trials {
            for col in sample_entangled(&c, p, t).unwrap().colors() {
                counts[col] += 1;
            }
        }
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for &k in &counts {
            assert!((k as f64 - trials as f64 * p).abs() <= 5.0 * sigma, "{k}");
        }
    }

    #[test]
    fn colors_within_examples() {
        let f = GroupSpec::vector_space(2, 4).unwrap();
        let c = difference_coloring(&f, &all(&f)).unwrap().coloring;
        assert_eq!(colors_within(&c, &[3]).unwrap(), 0);
        assert_eq!(colors_within(&c, &[]).unwrap(), 0);
        // coset 1000 + span{0100, 0010}: indices little-endian
        let coset = [1, 1 + 2, 1 + 4, 1 + 2 + 4];
        assert_eq!(colors_within(&c, &coset).unwrap(), 3);
        assert_eq!(colors_within(&c, &all(&f)).unwrap(), 15);
        assert!(colors_within(&c, &[16]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        let c = difference_coloring(&z5, &all(&z5)).unwrap().coloring;
        assert_eq!(EdgeColoring::parse_edge_list(&c.to_edge_list()).unwrap(), c);
        let b = bipartite_product_coloring(&z5, &[0, 1, 3]).unwrap().coloring;
        assert_eq!(EdgeColoring::parse_edge_list(&b.to_edge_list()).unwrap(), b);
        let headerless = "0 1 7\n0 2 9\n1 2 7\n";
        let p = EdgeColoring::parse_edge_list(headerless).unwrap();
        assert_eq!(p.num_colors(), 2);
        assert_eq!(p.max_degree(), 2);
        assert!(EdgeColoring::parse_edge_list("0 1 1\n").is_ok());
        assert!(EdgeColoring::parse_edge_list("0 1 1\n0 2 1\n").is_err());
        assert!(EdgeColoring::parse_edge_list("0 1\n").is_err());
    }

    fn assert_proper_exhaustive(c: &EdgeColoring) {
        let mut per_vertex: Vec<Vec<u32>> = vec![Vec::new(); c.num_vertices()];
        for ((u, v), &col) in c.host().edges().zip(c.edge_colors()) {
            per_vertex[u].push(col);
            per_vertex[v].push(col);
        }
        for mut m in per_vertex {
            let len = m.len();
            m.sort_unstable();
            m.dedup();
            assert_eq!(m.len(), len, "a vertex sees some color twice");
        }
    }

    fn random_coloring(n: usize, palette: u32, seed: u64) -> EdgeColoring {
        let host = Host::Complete { n };
        let mut r = rng::stream(seed, 0, "test-coloring");
        let labels: Vec<u32> = host.edges().map(|_| r.gen_range(0..palette)).collect();
        EdgeColoring::from_labels(host, &labels).unwrap()
    }

    proptest! {
        #[test]
        fn properize_is_a_proper_refinement(n in 2usize..24, palette in 1u32..8, seed in any::<u64>()) {
            let c = random_coloring(n, palette, seed);
            prop_assert_eq!(c.max_degree(), compute_max_degree(&c));
            let p = properize(&c);
            assert_proper_exhaustive(&p);
            prop_assert!(p.is_proper());
            prop_assert_eq!(compute_max_degree(&p), p.max_degree());
            prop_assert!(p.num_colors() <= (c.max_degree() + 1) * c.num_colors());
            for ((u, v), &col) in p.host().edges().zip(p.edge_colors()) {
                prop_assert_eq!(p.root_color(col as usize), c.color(u, v));
            }
        }

        #[test]
        fn delta_two_properize_within_three(n in 3usize..40, seed in any::<u64>()) {
            let z = GroupSpec::cyclic(n as u64 * 2 + 1).unwrap();
            let mut r = rng::stream(seed, 0, "subset");
            let a = rand::seq::index::sample(&mut r, z.order(), n).into_vec();
            let c = difference_coloring(&z, &a).unwrap().coloring;
            prop_assert!(c.max_degree() <= 2);
            let p = properize(&c);
            assert_proper_exhaustive(&p);
            prop_assert!(p.num_colors() <= 3 * c.num_colors());
        }

        #[test]
        fn split_is_a_proper_refinement(d in 2usize..6, k in 1usize..6) {
            let f = GroupSpec::vector_space(2, d).unwrap();
            let c = difference_coloring(&f, &all(&f)).unwrap().coloring;
            let n = c.num_vertices();
            let k = (k as f64).max(c.num_colors() as f64 / n as f64);
            if (n as f64 / k).floor() >= 1.0 {
                let s = split_large_classes(&c, k).unwrap();
                prop_assert!(s.is_proper());
                prop_assert!(s.num_colors() as f64 <= 2.0 * k * n as f64);
                prop_assert!(s.classes().iter().all(|e| e.len() as f64 <= n as f64 / k));
                for ((u, v), &col) in s.host().edges().zip(s.edge_colors()) {
                    prop_assert_eq!(s.root_color(col as usize), c.color(u, v));
                }
            }
        }

        #[test]
        fn proper_colorings_have_many_colors_within(seed in any::<u64>(), size in 0usize..12) {
            let z = GroupSpec::cyclic(61).unwrap();
            let mut r = rng::stream(seed, 0, "pool");
            let a = rand::seq::index::sample(&mut r, 61, 30).into_vec();
            let c = properize(&difference_coloring(&z, &a).unwrap().coloring);
            let u = rand::seq::index::sample(&mut r, 30, size).into_vec();
            prop_assert!(colors_within(&c, &u).unwrap() + 1 >= u.len());
        }
    }
}
