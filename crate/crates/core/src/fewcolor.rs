//! Few-color connectivity on edge-colored hosts: greedy span sequences, random
//! component growth, coalescence of components, spanning trees with few colors,
//! efficiently colored trees and the hard instance.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::coloring::{colors_within, properize, split_large_classes, EdgeColoring, Host};
use crate::error::{domain, structural, Error, Result};
use crate::rng;
use crate::UnionFind;

pub const DEFAULT_RETRIES: usize = 20;

/// `max(ln x, 1)`.
pub fn clamped_ln(x: f64) -> f64 {
    if x > std::f64::consts::E {
        x.ln()
    } else {
        1.0
    }
}

fn check_vertices(c: &EdgeColoring, vs: &[usize]) -> Result<()> {
    let n = c.num_vertices();
    let mut seen = vec![false; n];
    for &v in vs {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return structural(format!("vertex {v} is out of range or repeated"));
        }
    }
    Ok(())
}

/// A vertex set grown inside the host, with the number of crossing edges per color.
struct Frontier<'a> {
    c: &'a EdgeColoring,
    inside: Vec<bool>,
    count: usize,
    crossing: Vec<u32>,
}

impl<'a> Frontier<'a> {
    fn new(c: &'a EdgeColoring) -> Self {
        Frontier {
            c,
            inside: vec![false; c.num_vertices()],
            count: 0,
            crossing: vec![0; c.num_colors()],
        }
    }

    fn insert(&mut self, y: usize) {
        if self.inside[y] {
            return;
        }
        self.inside[y] = true;
        self.count += 1;
        for w in self.c.host().neighbors(y) {
            let col = self.c.color(y, w);
            if self.inside[w] {
                self.crossing[col] -= 1;
            } else {
                self.crossing[col] += 1;
            }
        }
    }

    /// Color with the most crossing edges, smallest id on ties.
    fn best(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for (col, &k) in self.crossing.iter().enumerate() {
            if k > 0 && best.map_or(true, |(b, _)| k > b) {
                best = Some((k, col));
            }
        }
        best.map(|(_, col)| col)
    }

    /// Crossing edges of `col` as `(outside, inside)` pairs, one per outside vertex.
    fn crossing_edges(&self, col: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in self.c.class(col) {
            let (a, b) = (a as usize, b as usize);
            match (self.inside[a], self.inside[b]) {
                (false, true) => out.push((a, b)),
                (true, false) => out.push((b, a)),
                _ => {}
            }
        }
        out.sort_unstable();
        out.dedup_by_key(|e| e.0);
        out
    }
}

/// The sets `V_0 ⊆ V_1 ⊆ … ⊆ V_s` of a greedy span.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanTrace {
    pub start: usize,
    pub colors: Vec<usize>,
    /// `added[i] = V_{i+1} ∖ V_i`, sorted.
    pub added: Vec<Vec<usize>>,
    /// `6 K max(ln n, 1)` with `K = colors / n`.
    pub bound: f64,
}

impl SpanTrace {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn step_sizes(&self) -> Vec<usize> {
        self.added.iter().map(Vec::len).collect()
    }

    /// `V_s`, sorted.
    pub fn reached(&self) -> Vec<usize> {
        let mut all: Vec<usize> = std::iter::once(self.start).chain(self.added.iter().flatten().copied()).collect();
        all.sort_unstable();
        all
    }

    pub fn within_bound(&self) -> bool {
        self.colors.len() as f64 <= self.bound + 1e-9
    }
}

/// Repeatedly add the color class matching the most outside vertices into the
/// current set, starting from `{v1}`, until every vertex is reached.
pub fn greedy_span(c: &EdgeColoring, v1: usize) -> Result<SpanTrace> {
    let n = c.num_vertices();
    if !c.host().is_complete() {
        return domain("greedy_span needs a complete host");
    }
    if !c.is_proper() {
        return domain("greedy_span needs a proper coloring");
    }
    if v1 >= n {
        return structural(format!("start vertex {v1} out of range"));
    }
    let mut f = Frontier::new(c);
    f.insert(v1);
    let mut colors = Vec::new();
    let mut added = Vec::new();
    while f.count < n {
        let col = f.best().expect("a complete host always has a crossing edge");
        let mut new: Vec<usize> = f.crossing_edges(col).into_iter().map(|(o, _)| o).collect();
        new.sort_unstable();
        for &y in &new {
            f.insert(y);
        }
        colors.push(col);
        added.push(new);
    }
    let k = c.num_colors() as f64 / n as f64;
    Ok(SpanTrace {
        start: v1,
        colors,
        added,
        bound: 6.0 * k * clamped_ln(n as f64),
    })
}

/// Vertices reachable from `v` along paths whose colors form a subsequence of `seq`.
pub fn span_from(c: &EdgeColoring, v: usize, seq: &[usize]) -> Result<Vec<usize>> {
    if v >= c.num_vertices() {
        return structural(format!("vertex {v} out of range"));
    }
    if let Some(&col) = seq.iter().find(|&&col| col >= c.num_colors()) {
        return structural(format!("color {col} out of range"));
    }
    let mut inside = vec![false; c.num_vertices()];
    inside[v] = true;
    for &col in seq {
        let new: Vec<usize> = c
            .class(col)
            .iter()
            .filter_map(|&(a, b)| match (inside[a as usize], inside[b as usize]) {
                (true, false) => Some(b as usize),
                (false, true) => Some(a as usize),
                _ => None,
            })
            .collect();
        for y in new {
            inside[y] = true;
        }
    }
    Ok(inside.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect())
}

/// Robust color count `N⁺(ε; C)`: the minimum over all deletions of `⌊εn⌋`
/// vertices of the number of colors still joining `C` to a surviving vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct NPlus {
    /// Colors on edges incident to `C`.
    pub colors: usize,
    /// Certified lower bound on `N⁺`.
    pub lower_bound: usize,
    /// Colors surviving the deletion of `deleted`; an upper bound on `N⁺`.
    pub achieved: usize,
    pub deleted: Vec<usize>,
}

/// Evaluate `N⁺(ε; C)`. A color `c` dies only when every vertex `y` joined to `C`
/// in color `c` is deleted, so weighting `y` by `Σ_c 1/|R_c|` makes the
/// `⌊εn⌋` heaviest vertices an upper bound on the number of dead colors.
pub fn n_plus(c: &EdgeColoring, comp: &[usize], eps: f64) -> NPlus {
    let n = c.num_vertices();
    let d = ((eps * n as f64) + 1e-9).floor().max(0.0) as usize;
    let mut in_comp = vec![false; n];
    for &x in comp {
        in_comp[x] = true;
    }
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(comp.len() * n);
    for &x in comp {
        for w in c.host().neighbors(x) {
            pairs.push((c.color(x, w) as u32, w as u32));
        }
    }
    pairs.par_sort_unstable();
    pairs.dedup();
    let mut weight = vec![0f64; n];
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        while j < pairs.len() && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        let share = 1.0 / (j - i) as f64;
        for p in &pairs[i..j] {
            weight[p.1 as usize] += share;
        }
        groups.push((i, j));
        i = j;
    }
    let total = groups.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weight[b].total_cmp(&weight[a]).then(a.cmp(&b)));
    order.truncate(d.min(n));
    let top: f64 = order.iter().map(|&y| weight[y]).sum();
    let lower_bound = total.saturating_sub((top + 1e-9).floor() as usize);
    let mut gone = vec![false; n];
    for &y in &order {
        gone[y] = true;
    }
    let killed = groups
        .iter()
        .filter(|&&(i, j)| pairs[i..j].iter().all(|p| gone[p.1 as usize]))
        .count();
    order.sort_unstable();
    NPlus {
        colors: total,
        lower_bound,
        achieved: total - killed,
        deleted: order,
    }
}

/// Number of distinct colors on edges between `comp` and the rest of the host.
pub fn leaving_colors(c: &EdgeColoring, comp: &[usize]) -> usize {
    let mut in_comp = vec![false; c.num_vertices()];
    for &x in comp {
        in_comp[x] = true;
    }
    let mut seen = vec![false; c.num_colors()];
    let mut count = 0;
    for &x in comp {
        for w in c.host().neighbors(x) {
            if !in_comp[w] {
                let col = c.color(x, w);
                if !std::mem::replace(&mut seen[col], true) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// An edge added to a forest while exposing colors; `step` is the exposure index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForestEdge {
    pub u: usize,
    pub v: usize,
    pub color: usize,
    pub step: usize,
}

/// Union the classes of `colors` in order, recording the edges that merge components.
pub fn expose(c: &EdgeColoring, colors: &[usize]) -> (UnionFind, Vec<ForestEdge>) {
    let mut uf = UnionFind::new(c.num_vertices());
    let mut forest = Vec::new();
    let mut done = vec![false; c.num_colors()];
    for (step, &col) in colors.iter().enumerate() {
        if std::mem::replace(&mut done[col], true) {
            continue;
        }
        for &(a, b) in c.class(col) {
            if uf.union(a as usize, b as usize).is_some() {
                forest.push(ForestEdge {
                    u: a as usize,
                    v: b as usize,
                    color: col,
                    step,
                });
            }
        }
    }
    (uf, forest)
}

fn group_by_label(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        out[l].push(v);
    }
    out
}

fn validate_growth_input(c: &EdgeColoring, k: f64, min_k: f64) -> Result<()> {
    let n = c.num_vertices() as f64;
    if !c.host().is_complete() {
        return domain("growth processes need a complete host");
    }
    if !c.is_proper() {
        return domain("growth processes need a proper coloring");
    }
    if !(k >= min_k) {
        return domain(format!("K = {k} is below {min_k}"));
    }
    if c.num_colors() as f64 > 2.0 * k * n + 1e-9 {
        return domain(format!("{} colors exceed 2Kn = {}", c.num_colors(), 2.0 * k * n));
    }
    let cap = n / k + 1e-9;
    if let Some(col) = (0..c.num_colors()).find(|&col| c.class(col).len() as f64 > cap) {
        return domain(format!("class {col} has more than n/K = {} edges", n / k));
    }
    Ok(())
}

/// Components of the graph formed by a random set of exposed colors.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentGrowth {
    /// Exposed colors in draw order (with repetition).
    pub exposed: Vec<usize>,
    pub labels: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub forest: Vec<ForestEdge>,
    /// Distinct colors leaving each component.
    pub leaving: Vec<usize>,
    /// Certified lower bound on `N⁺(ε; C)` per component.
    pub nplus_lower: Vec<usize>,
    pub eps: f64,
    pub threshold: f64,
    /// Vertices in components meeting the threshold.
    pub good_vertices: usize,
    pub success: bool,
    pub attempts: usize,
}

impl ComponentGrowth {
    fn build(c: &EdgeColoring, exposed: Vec<usize>, eps: f64, threshold: f64, attempts: usize) -> Self {
        let n = c.num_vertices();
        let (mut uf, forest) = expose(c, &exposed);
        let labels = uf.labels();
        let components = group_by_label(&labels);
        let stats: Vec<(usize, usize)> = components
            .par_iter()
            .map(|comp| (leaving_colors(c, comp), n_plus(c, comp, eps).lower_bound))
            .collect();
        let (leaving, nplus_lower): (Vec<usize>, Vec<usize>) = stats.into_iter().unzip();
        let good_vertices = components
            .iter()
            .zip(&nplus_lower)
            .filter(|(_, &lb)| lb as f64 >= threshold - 1e-9)
            .map(|(comp, _)| comp.len())
            .sum();
        ComponentGrowth {
            exposed,
            labels,
            components,
            forest,
            leaving,
            nplus_lower,
            eps,
            threshold,
            good_vertices,
            success: 10 * good_vertices >= 9 * n,
            attempts,
        }
    }
}

/// Number of colors drawn by the `K ln K` process: `⌈80 K ln K⌉`.
pub fn klogk_draws(k: f64) -> usize {
    (80.0 * k * k.ln()).ceil().max(1.0) as usize
}

pub(crate) fn run_klogk(c: &EdgeColoring, k: f64, seed: u64, retries: usize) -> Result<ComponentGrowth> {
    validate_growth_input(c, k, 2.0)?;
    let n = c.num_vertices();
    let r = c.num_colors();
    let m = klogk_draws(k);
    let threshold = k * n as f64 / 64.0;
    let mut last = None;
    for attempt in 0..retries.max(1) {
        let mut rng = rng::stream(seed, attempt as u64, "klogk");
        let exposed: Vec<usize> = (0..m).map(|_| rng.gen_range(0..r)).collect();
        let out = ComponentGrowth::build(c, exposed, 0.25, threshold, attempt + 1);
        if out.success {
            return Ok(out);
        }
        last = Some(out);
    }
    Ok(last.unwrap())
}

/// Expose `⌈80 K ln K⌉` uniformly random colors and check that 9/10 of the
/// vertices lie in components with `N⁺(1/4; C) ≥ Kn/64`, retrying with fresh
/// streams up to `retries` times.
pub fn klogk_growth(c: &EdgeColoring, k: f64, seed: u64, retries: usize) -> Result<ComponentGrowth> {
    let out = run_klogk(c, k, seed, retries)?;
    if out.success {
        Ok(out)
    } else {
        Err(Error::StatisticalFailure {
            operation: "klogk_growth",
            attempts: out.attempts,
            detail: format!(
                "{} of {} vertices in components with N+ >= {}",
                out.good_vertices,
                c.num_vertices(),
                out.threshold
            ),
        })
    }
}

/// Parameters of the ball process: `δ = 1/16`, `J = 2^⌊log2(δK)⌋`, `W = log2 J`,
/// `κ = 900K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallParams {
    pub k: f64,
    pub delta: f64,
    pub j: usize,
    pub w: u32,
    pub kappa: usize,
    pub horizon: usize,
}

impl BallParams {
    pub fn new(k: f64) -> Self {
        let delta = 1.0 / 16.0;
        let w = (delta * k).log2().floor().max(0.0) as u32;
        let kappa = (900.0 * k).ceil() as usize;
        BallParams {
            k,
            delta,
            j: 1 << w,
            w,
            kappa,
            horizon: 2 * kappa,
        }
    }
}

/// The ball grown around one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexGrowth {
    pub vertex: usize,
    /// `B_J` in order of arrival: `B_j` is the first `j` entries.
    pub ball: Vec<usize>,
    /// `t_j` for `j = 2, …, J` (1-based positions in the color stream).
    pub times: Vec<usize>,
    /// `T_J = max t_j`, or `None` if the horizon ran out first.
    pub t_j: Option<usize>,
    /// Lower bound on `N⁺(3/8; B_J)`, computed for vertices with `T_J ≤ κ`.
    pub nplus_lower: Option<usize>,
}

impl VertexGrowth {
    pub fn exceeds(&self, kappa: usize) -> bool {
        self.t_j.map_or(true, |t| t > kappa)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTrace {
    pub params: BallParams,
    /// `stream[t - 1] = s_t`.
    pub stream: Vec<usize>,
    pub vertices: Vec<VertexGrowth>,
    pub exceed_fraction: f64,
    /// Traced vertices with `T_J ≤ κ` whose ball meets `N⁺(3/8) ≥ Kn/128`.
    pub verified: usize,
    pub threshold: f64,
    pub success: bool,
    pub attempts: usize,
    /// Set when `K < 16` and the `K ln K` process ran instead.
    pub fallback: Option<ComponentGrowth>,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallOptions {
    /// Vertices to trace; all vertices when `None`.
    pub vertices: Option<Vec<usize>>,
    pub retries: usize,
    /// Compute `N⁺(3/8; B_J)` for the traced vertices.
    pub verify: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            vertices: None,
            retries: DEFAULT_RETRIES,
            verify: true,
        }
    }
}

fn grow_ball(c: &EdgeColoring, v: usize, params: &BallParams, stream: &[usize]) -> VertexGrowth {
    let n = c.num_vertices();
    let mut ball = vec![v];
    let mut in_ball = vec![false; n];
    let mut prefix = vec![false; n];
    in_ball[v] = true;
    prefix[v] = true;
    let mut cnt = vec![0u32; c.num_colors()];
    for w in c.host().neighbors(v) {
        cnt[c.color(v, w)] += 1;
    }
    let mut used = vec![false; stream.len() + 1];
    let mut times = Vec::new();
    let half = n as f64 / 2.0;
    let new_colors = |u: usize, cnt: &[u32]| c.host().neighbors(u).filter(|&w| cnt[c.color(u, w)] == 0).count();
    for j in 2..=params.j {
        let k = 1usize << (usize::BITS - 1 - (j - 1).leading_zeros());
        for &b in &ball[..k] {
            prefix[b] = true;
        }
        let mut chosen = None;
        for t in 1..=stream.len() {
            if used[t] {
                continue;
            }
            let col = stream[t - 1];
            let mut best: Option<usize> = None;
            for &(a, b) in c.class(col) {
                let (a, b) = (a as usize, b as usize);
                let u = match (prefix[a], prefix[b]) {
                    (true, false) => b,
                    (false, true) => a,
                    _ => continue,
                };
                if in_ball[u] || best.map_or(false, |x| x <= u) {
                    continue;
                }
                if new_colors(u, &cnt) as f64 >= half {
                    best = Some(u);
                }
            }
            if let Some(u) = best {
                chosen = Some((t, u));
                break;
            }
        }
        let Some((t, u)) = chosen else {
            return VertexGrowth {
                vertex: v,
                ball,
                times,
                t_j: None,
                nplus_lower: None,
            };
        };
        used[t] = true;
        times.push(t);
        in_ball[u] = true;
        ball.push(u);
        for w in c.host().neighbors(u) {
            let col = c.color(u, w);
            if in_ball[w] {
                cnt[col] -= 1;
            } else {
                cnt[col] += 1;
            }
        }
    }
    VertexGrowth {
        vertex: v,
        ball,
        t_j: Some(times.iter().copied().max().unwrap_or(0)),
        times,
        nplus_lower: None,
    }
}

/// Replay check: every `t_j` is the smallest unused position whose color joins
/// `B_k` to an outside vertex of `P_j`, and the recorded vertex is the smallest such.
pub fn replay_ball(c: &EdgeColoring, stream: &[usize], g: &VertexGrowth) -> bool {
    let n = c.num_vertices();
    let mut used = HashSet::new();
    for (idx, &t) in g.times.iter().enumerate() {
        let j = idx + 2;
        let k = 1usize << (usize::BITS - 1 - (j - 1).leading_zeros());
        let before = &g.ball[..j - 1];
        let nb: HashSet<usize> = before
            .iter()
            .flat_map(|&b| (0..n).filter(move |w| !before.contains(w)).map(move |w| c.color(b, w)))
            .collect();
        let qualifies = |s: usize| -> Option<usize> {
            let col = stream[s - 1];
            (0..n)
                .filter(|u| !before.contains(u))
                .filter(|&u| g.ball[..k].iter().any(|&b| c.color(b, u) == col))
                .find(|&u| {
                    let fresh = (0..n).filter(|&w| w != u && !nb.contains(&c.color(u, w))).count();
                    fresh as f64 >= n as f64 / 2.0
                })
        };
        for s in 1..t {
            if !used.contains(&s) && qualifies(s).is_some() {
                return false;
            }
        }
        if used.contains(&t) || qualifies(t) != Some(g.ball[j - 1]) {
            return false;
        }
        used.insert(t);
    }
    g.t_j.map_or(true, |tj| Some(tj) == g.times.iter().copied().max().or(Some(0)))
}

/// The ball process: a shared random color stream `s_1, s_2, …` grows from every
/// vertex `v` a ball `B_J(v)` of `J` vertices, each new vertex joining through the
/// earliest unused color that links it to the first `2^⌊log2(j−1)⌋` ball vertices
/// while contributing at least `n/2` new colors.
pub fn ball_growth(c: &EdgeColoring, k: f64, seed: u64) -> Result<GrowthTrace> {
    ball_growth_with(c, k, seed, &BallOptions::default())
}

pub fn ball_growth_with(c: &EdgeColoring, k: f64, seed: u64, opts: &BallOptions) -> Result<GrowthTrace> {
    let n = c.num_vertices();
    let params = BallParams::new(k);
    if k < 16.0 {
        validate_growth_input(c, k, f64::MIN_POSITIVE)?;
        let fallback = if k >= 2.0 { Some(run_klogk(c, k, seed, opts.retries)?) } else { None };
        return Ok(GrowthTrace {
            params,
            stream: Vec::new(),
            vertices: Vec::new(),
            exceed_fraction: 0.0,
            verified: 0,
            threshold: k * n as f64 / 128.0,
            success: fallback.as_ref().map_or(false, |f| f.success),
            attempts: fallback.as_ref().map_or(0, |f| f.attempts),
            fallback,
            warning: Some(format!("K = {k} < 16; ran the K ln K process instead")),
        });
    }
    validate_growth_input(c, k, 16.0)?;
    let traced = match &opts.vertices {
        Some(vs) => {
            check_vertices(c, vs)?;
            vs.clone()
        }
        None => (0..n).collect(),
    };
    let threshold = k * n as f64 / 128.0;
    let r = c.num_colors();
    let mut last = None;
    for attempt in 0..opts.retries.max(1) {
        let mut rng = rng::stream(seed, attempt as u64, "ball");
        let stream: Vec<usize> = if r == 0 {
            Vec::new()
        } else {
            (0..params.horizon).map(|_| rng.gen_range(0..r)).collect()
        };
        let mut vertices: Vec<VertexGrowth> = traced.par_iter().map(|&v| grow_ball(c, v, &params, &stream)).collect();
        if opts.verify {
            vertices.par_iter_mut().filter(|g| !g.exceeds(params.kappa)).for_each(|g| {
                g.nplus_lower = Some(n_plus(c, &g.ball, 3.0 / 8.0).lower_bound);
            });
        }
        let exceed = vertices.iter().filter(|g| g.exceeds(params.kappa)).count();
        let verified = vertices
            .iter()
            .filter(|g| g.nplus_lower.map_or(false, |lb| lb as f64 >= threshold - 1e-9))
            .count();
        let total = vertices.len().max(1);
        let success = if opts.verify {
            10 * verified >= 9 * vertices.len()
        } else {
            10 * (vertices.len() - exceed) >= 9 * vertices.len()
        };
        let out = GrowthTrace {
            params,
            stream,
            exceed_fraction: exceed as f64 / total as f64,
            vertices,
            verified,
            threshold,
            success,
            attempts: attempt + 1,
            fallback: None,
            warning: None,
        };
        if success {
            return Ok(out);
        }
        last = Some(out);
    }
    Ok(last.unwrap())
}

/// Result of greedily merging components one color at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct Coalescence {
    pub colors: Vec<usize>,
    /// Edges that merged two components; `step` indexes `colors`.
    pub merges: Vec<ForestEdge>,
    /// Good components before step 0 and after each step.
    pub good_counts: Vec<usize>,
    pub component_counts: Vec<usize>,
    /// Per step: whether `N_{i+1} ≤ N_i (1 − 1/512)`.
    pub decay_ok: Vec<bool>,
    /// Steps where no color merged two good components.
    pub fallback_steps: Vec<usize>,
    pub good_vertices: usize,
    pub participating: usize,
    /// At least 9n/10 vertices were good.
    pub preconditions_hold: bool,
    pub threshold: f64,
    /// A component of order at least n/4 arose.
    pub reached: bool,
    /// Vertices of the largest final component, sorted.
    pub largest: Vec<usize>,
}

impl Coalescence {
    pub fn decay_holds(&self) -> bool {
        self.decay_ok.iter().all(|&x| x)
    }
}

pub fn default_coalesce_steps(n: usize) -> usize {
    (900.0 * clamped_ln(n as f64)).ceil() as usize
}

/// Merge the given disjoint components by repeatedly adding the whole class of the
/// color that joins the most good components to other good components. A vertex
/// is good when its initial component has `N⁺(3/8; C) ≥ K n / 128` with
/// `K = colors / (2n)`, and a component is good when all its vertices are.
pub fn coalesce(c: &EdgeColoring, components: &[Vec<usize>], max_steps: Option<usize>) -> Result<Coalescence> {
    let n = c.num_vertices();
    let all: Vec<usize> = components.iter().flatten().copied().collect();
    check_vertices(c, &all)?;
    let max_steps = max_steps.unwrap_or_else(|| default_coalesce_steps(n));
    let k_eff = c.num_colors() as f64 / (2.0 * n.max(1) as f64);
    let threshold = k_eff * n as f64 / 128.0;
    let good_comp: Vec<bool> = components
        .par_iter()
        .map(|comp| n_plus(c, comp, 3.0 / 8.0).lower_bound as f64 >= threshold - 1e-9)
        .collect();
    let mut part = vec![false; n];
    let mut good = vec![false; n];
    let mut uf = UnionFind::new(n);
    let mut good_vertices = 0;
    for (comp, &gd) in components.iter().zip(&good_comp) {
        for &x in comp {
            part[x] = true;
            good[x] = gd;
            uf.union(comp[0], x);
        }
        if gd {
            good_vertices += comp.len();
        }
    }
    // good flag per root
    let mut root_good = vec![false; n];
    for comp in components {
        let r = uf.find(comp[0]);
        root_good[r] = comp.iter().all(|&x| good[x]);
    }
    let count = |uf: &mut UnionFind, root_good: &[bool]| -> (usize, usize, usize) {
        let mut seen = vec![false; n];
        let (mut comps, mut goods, mut largest) = (0, 0, 0);
        for &x in &all {
            let r = uf.find(x);
            if !std::mem::replace(&mut seen[r], true) {
                comps += 1;
                goods += root_good[r] as usize;
                largest = largest.max(uf.size_of(r));
            }
        }
        (comps, goods, largest)
    };
    let (c0, g0, mut largest) = count(&mut uf, &root_good);
    let mut out = Coalescence {
        colors: Vec::new(),
        merges: Vec::new(),
        good_counts: vec![g0],
        component_counts: vec![c0],
        decay_ok: Vec::new(),
        fallback_steps: Vec::new(),
        good_vertices,
        participating: all.len(),
        preconditions_hold: 10 * good_vertices >= 9 * n,
        threshold,
        reached: false,
        largest: Vec::new(),
    };
    let mut mark = vec![usize::MAX; n];
    let mut epoch = 0usize;
    while 4 * largest < n && out.colors.len() < max_steps {
        let step = out.colors.len();
        let mut score = |uf: &mut UnionFind, require_good: bool, epoch: &mut usize| -> Option<usize> {
            let mut best: Option<(usize, usize)> = None;
            for col in 0..c.num_colors() {
                *epoch += 1;
                let mut s = 0;
                for &(a, b) in c.class(col) {
                    let (a, b) = (a as usize, b as usize);
                    if !part[a] || !part[b] {
                        continue;
                    }
                    let (ra, rb) = (uf.find(a), uf.find(b));
                    if ra == rb || (require_good && !(root_good[ra] && root_good[rb])) {
                        continue;
                    }
                    for r in [ra, rb] {
                        if mark[r] != *epoch {
                            mark[r] = *epoch;
                            s += 1;
                        }
                    }
                }
                if s > 0 && best.map_or(true, |(bs, _)| s > bs) {
                    best = Some((s, col));
                }
            }
            best.map(|(_, col)| col)
        };
        let chosen = match score(&mut uf, true, &mut epoch) {
            Some(col) => col,
            None => match score(&mut uf, false, &mut epoch) {
                Some(col) => {
                    out.fallback_steps.push(step);
                    col
                }
                None => break,
            },
        };
        for &(a, b) in c.class(chosen) {
            let (a, b) = (a as usize, b as usize);
            if !part[a] || !part[b] {
                continue;
            }
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra == rb {
                continue;
            }
            let both = root_good[ra] && root_good[rb];
            let r = uf.union(a, b).unwrap();
            root_good[r] = both;
            out.merges.push(ForestEdge { u: a, v: b, color: chosen, step });
        }
        out.colors.push(chosen);
        let (ci, gi, li) = count(&mut uf, &root_good);
        let prev = *out.good_counts.last().unwrap();
        out.decay_ok.push(gi as f64 <= prev as f64 * (1.0 - 1.0 / 512.0) + 1e-9);
        out.good_counts.push(gi);
        out.component_counts.push(ci);
        largest = li;
    }
    out.reached = 4 * largest >= n && !all.is_empty();
    if let Some(&best) = all.iter().max_by_key(|&&x| (uf.size_of(x), std::cmp::Reverse(x))) {
        let r = uf.find(best);
        let mut big: Vec<usize> = all.iter().copied().filter(|&x| uf.find(x) == r).collect();
        big.sort_unstable();
        out.largest = big;
    }
    Ok(out)
}

/// A vertex attached to the growing set in `expand_component`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub vertex: usize,
    pub partner: usize,
    pub color: usize,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub colors: Vec<usize>,
    pub attachments: Vec<Attachment>,
    /// Vertices still outside, sorted.
    pub residual: Vec<usize>,
    /// `(n/|S|) K max(ln(1/δ), 1)` with `K = colors / n`.
    pub bound: f64,
}

impl Expansion {
    pub fn within_bound(&self) -> bool {
        self.colors.len() as f64 <= self.bound + 1e-9
    }
}

/// Grow `s` by whole color classes, each time taking the color that attaches the
/// most outside vertices, until at most `δn` vertices remain outside.
pub fn expand_component(c: &EdgeColoring, s: &[usize], delta: f64) -> Result<Expansion> {
    let n = c.num_vertices();
    if s.is_empty() {
        return structural("expand_component needs a nonempty start set");
    }
    check_vertices(c, s)?;
    let mut f = Frontier::new(c);
    for &x in s {
        f.insert(x);
    }
    let mut colors = Vec::new();
    let mut attachments = Vec::new();
    while (n - f.count) as f64 > delta * n as f64 + 1e-9 {
        let Some(col) = f.best() else { break };
        let step = colors.len();
        for (y, w) in f.crossing_edges(col) {
            if f.inside[y] {
                continue;
            }
            f.insert(y);
            attachments.push(Attachment {
                vertex: y,
                partner: w,
                color: col,
                step,
            });
        }
        colors.push(col);
    }
    let residual = (0..n).filter(|&y| !f.inside[y]).collect();
    let k = c.num_colors() as f64 / n as f64;
    let bound = n as f64 / s.len() as f64 * k * clamped_ln(1.0 / delta);
    Ok(Expansion {
        colors,
        attachments,
        residual,
        bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreePhase {
    Growth,
    Coalesce,
    Expand,
    Attach,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    /// Color in the host coloring the certificate refers to.
    pub color: usize,
    pub phase: TreePhase,
    pub step: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthPath {
    /// The ball process (K ≥ 16).
    Ball,
    /// The `K ln K` process (2 ≤ K < 16).
    KlogK,
    /// No growth phase (K < 2).
    Direct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineFlags {
    pub path: GrowthPath,
    /// The growth phase missed its target within the retry budget.
    pub statistical_failure: bool,
    pub growth_attempts: usize,
    pub coalesce_reached: bool,
    pub coalesce_steps: usize,
    pub coalesce_fallback_steps: usize,
    /// Every coalescence step shrank the good-component count by 1/512.
    pub coalesce_decay: bool,
    pub good_preconditions: bool,
}

/// A tree inside the host with its edge colors and the phase each edge came from.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeCertificate {
    pub host_vertices: usize,
    /// `n` in the decay bound `(1 − 1/512)^i n`.
    pub base_size: usize,
    /// Tree vertices, sorted.
    pub vertices: Vec<usize>,
    pub edges: Vec<TreeEdge>,
    pub phase1_colors: Vec<usize>,
    pub phase2_colors: Vec<usize>,
    /// Components of the tree's vertex set after the growth edges and after each
    /// coalescence step, replayed from the edges.
    pub component_counts: Vec<usize>,
    pub bound: f64,
    pub flags: PipelineFlags,
}

fn distinct_in_order(colors: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut seen = HashSet::new();
    colors.filter(|c| seen.insert(*c)).collect()
}

impl TreeCertificate {
    fn assemble(
        host_vertices: usize,
        base_size: usize,
        mut vertices: Vec<usize>,
        edges: Vec<TreeEdge>,
        bound: f64,
        flags: PipelineFlags,
    ) -> Self {
        vertices.sort_unstable();
        let phase = |p: TreePhase| distinct_in_order(edges.iter().filter(move |e| e.phase == p).map(|e| e.color));
        let mut cert = TreeCertificate {
            host_vertices,
            base_size,
            phase1_colors: phase(TreePhase::Growth),
            phase2_colors: phase(TreePhase::Coalesce),
            vertices,
            edges,
            component_counts: Vec::new(),
            bound,
            flags,
        };
        cert.component_counts = cert.replay_counts();
        cert
    }

    /// Distinct colors in order of first appearance.
    pub fn color_list(&self) -> Vec<usize> {
        distinct_in_order(self.edges.iter().map(|e| e.color))
    }

    pub fn num_colors(&self) -> usize {
        self.color_list().len()
    }

    pub fn within_bound(&self) -> bool {
        self.num_colors() as f64 <= self.bound + 1e-9
    }

    pub fn is_spanning(&self) -> bool {
        self.vertices.len() == self.host_vertices
    }

    fn replay_counts(&self) -> Vec<usize> {
        let pos: std::collections::HashMap<usize, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for e in self.edges.iter().filter(|e| e.phase == TreePhase::Growth) {
            uf.union(pos[&e.u], pos[&e.v]);
        }
        let mut counts = vec![uf.components()];
        for i in 0..self.flags.coalesce_steps {
            for e in self.edges.iter().filter(|e| e.phase == TreePhase::Coalesce && e.step == i) {
                uf.union(pos[&e.u], pos[&e.v]);
            }
            counts.push(uf.components());
        }
        counts
    }

    /// `ℓ_i ≤ (1 − 1/512)^i n` for every recorded step.
    pub fn decay_holds(&self) -> bool {
        self.component_counts
            .iter()
            .enumerate()
            .all(|(i, &l)| l as f64 <= (1.0 - 1.0 / 512.0f64).powi(i as i32) * self.base_size as f64 + 1e-9)
    }

    /// Check that the edges form a tree on `vertices`, that every color matches `c`
    /// and that the distinct-color count is within the bound.
    pub fn validate(&self, c: &EdgeColoring) -> Result<()> {
        if c.num_vertices() != self.host_vertices {
            return structural("certificate refers to a different host");
        }
        check_vertices(c, &self.vertices)?;
        if self.vertices.is_empty() {
            return structural("tree has no vertices");
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return structural(format!(
                "{} edges cannot form a tree on {} vertices",
                self.edges.len(),
                self.vertices.len()
            ));
        }
        let pos: std::collections::HashMap<usize, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            let (Some(&a), Some(&b)) = (pos.get(&e.u), pos.get(&e.v)) else {
                return structural(format!("edge {{{}, {}}} leaves the vertex set", e.u, e.v));
            };
            if c.try_color(e.u, e.v)? != e.color {
                return structural(format!("edge {{{}, {}}} has the wrong color", e.u, e.v));
            }
            if uf.union(a, b).is_none() {
                return structural(format!("edge {{{}, {}}} closes a cycle", e.u, e.v));
            }
        }
        if !self.within_bound() {
            return structural(format!("{} colors exceed the bound {}", self.num_colors(), self.bound));
        }
        Ok(())
    }
}

struct PhaseOne {
    components: Vec<Vec<usize>>,
    forest: Vec<ForestEdge>,
    path: GrowthPath,
    success: bool,
    attempts: usize,
}

fn phase_one(split: &EdgeColoring, k: f64, seed: u64, retries: usize) -> Result<PhaseOne> {
    let n = split.num_vertices();
    if k >= 16.0 {
        let opts = BallOptions {
            retries,
            ..BallOptions::default()
        };
        let trace = ball_growth_with(split, k, seed, &opts)?;
        let kappa = trace.params.kappa.min(trace.stream.len());
        let (mut uf, forest) = expose(split, &trace.stream[..kappa]);
        Ok(PhaseOne {
            components: group_by_label(&uf.labels()),
            forest,
            path: GrowthPath::Ball,
            success: trace.success,
            attempts: trace.attempts,
        })
    } else if k >= 2.0 {
        let g = run_klogk(split, k, seed, retries)?;
        Ok(PhaseOne {
            components: g.components,
            forest: g.forest,
            path: GrowthPath::KlogK,
            success: g.success,
            attempts: g.attempts,
        })
    } else {
        Ok(PhaseOne {
            components: (0..n).map(|v| vec![v]).collect(),
            forest: Vec::new(),
            path: GrowthPath::Direct,
            success: true,
            attempts: 0,
        })
    }
}

/// Spanning tree of a properly colored complete graph with at most
/// `1000 K max(ln(n/K), 1)` colors, `K = colors / n`.
pub fn spanning_tree(c: &EdgeColoring, seed: u64) -> Result<TreeCertificate> {
    let n = c.num_vertices();
    if !c.host().is_complete() {
        return domain("spanning_tree needs a complete host");
    }
    if !c.is_proper() {
        return domain("spanning_tree needs a proper coloring");
    }
    if n == 0 {
        return structural("host has no vertices");
    }
    let k = c.num_colors() as f64 / n as f64;
    let bound = 1000.0 * k * clamped_ln(n as f64 / k.max(f64::MIN_POSITIVE));
    let mut flags = PipelineFlags {
        path: GrowthPath::Direct,
        statistical_failure: false,
        growth_attempts: 0,
        coalesce_reached: false,
        coalesce_steps: 0,
        coalesce_fallback_steps: 0,
        coalesce_decay: true,
        good_preconditions: true,
    };
    if n == 1 {
        return Ok(TreeCertificate::assemble(1, 1, vec![0], Vec::new(), bound, flags));
    }
    let mut edges: Vec<TreeEdge> = Vec::new();
    let start: Vec<usize> = if k >= 2.0 {
        let split = split_large_classes(c, k)?;
        let p1 = phase_one(&split, k, seed, DEFAULT_RETRIES)?;
        flags.path = p1.path;
        flags.statistical_failure = !p1.success;
        flags.growth_attempts = p1.attempts;
        let co = coalesce(&split, &p1.components, None)?;
        flags.coalesce_reached = co.reached;
        flags.coalesce_steps = co.colors.len();
        flags.coalesce_fallback_steps = co.fallback_steps.len();
        flags.coalesce_decay = co.decay_holds();
        flags.good_preconditions = co.preconditions_hold;
        let mut member = vec![false; n];
        for &x in &co.largest {
            member[x] = true;
        }
        let tagged = p1
            .forest
            .iter()
            .map(|e| (e, TreePhase::Growth))
            .chain(co.merges.iter().map(|e| (e, TreePhase::Coalesce)));
        for (e, phase) in tagged {
            if member[e.u] && member[e.v] {
                edges.push(TreeEdge {
                    u: e.u,
                    v: e.v,
                    color: c.color(e.u, e.v),
                    phase,
                    step: e.step,
                });
            }
        }
        co.largest
    } else {
        vec![0]
    };
    let ex = expand_component(c, &start, k / n as f64)?;
    let mut inside = vec![false; n];
    for &x in &start {
        inside[x] = true;
    }
    for a in &ex.attachments {
        inside[a.vertex] = true;
        edges.push(TreeEdge {
            u: a.partner,
            v: a.vertex,
            color: a.color,
            phase: TreePhase::Expand,
            step: a.step,
        });
    }
    let mut used: HashSet<usize> = edges.iter().map(|e| e.color).collect();
    for (i, &y) in ex.residual.iter().enumerate() {
        let tree: Vec<usize> = (0..n).filter(|&w| inside[w]).collect();
        let w = tree
            .iter()
            .copied()
            .find(|&w| used.contains(&c.color(y, w)))
            .unwrap_or(tree[0]);
        let color = c.color(y, w);
        used.insert(color);
        edges.push(TreeEdge {
            u: w,
            v: y,
            color,
            phase: TreePhase::Attach,
            step: i,
        });
        inside[y] = true;
    }
    Ok(TreeCertificate::assemble(n, n, (0..n).collect(), edges, bound, flags))
}

/// An efficiently colored tree on a set `A_c ⊆ A` with `|A_c| ≥ |A|/4`: a phase-1
/// palette of at most `900K` colors followed by at most `900 ln n` phase-2 colors
/// under which the number of components decays geometrically.
pub fn efficient_tree(c: &EdgeColoring, a: &[usize], seed: u64) -> Result<TreeCertificate> {
    efficient_tree_with(c, a, seed, DEFAULT_RETRIES)
}

pub fn efficient_tree_with(c: &EdgeColoring, a: &[usize], seed: u64, retries: usize) -> Result<TreeCertificate> {
    if !c.host().is_complete() {
        return domain("efficient_tree needs a complete host");
    }
    if a.is_empty() {
        return structural("vertex set is empty");
    }
    let n = a.len();
    let mut verts = a.to_vec();
    verts.sort_unstable();
    let sub = c.restrict(&verts)?;
    let proper = if sub.is_proper() { sub } else { properize(&sub) };
    let k = proper.num_colors() as f64 / n as f64;
    let ln_n = clamped_ln(n as f64);
    let bound = 900.0 * (k.max(1.0) + ln_n);
    let base_flags = PipelineFlags {
        path: GrowthPath::Direct,
        statistical_failure: false,
        growth_attempts: 0,
        coalesce_reached: true,
        coalesce_steps: 0,
        coalesce_fallback_steps: 0,
        coalesce_decay: true,
        good_preconditions: true,
    };
    if proper.num_colors() == 0 {
        return Ok(TreeCertificate::assemble(c.num_vertices(), n, vec![verts[0]], Vec::new(), bound, base_flags));
    }
    let split = if k >= 2.0 { split_large_classes(&proper, k)? } else { proper.clone() };
    let mut detail = String::new();
    for attempt in 0..retries.max(1) {
        let s = rng::child_seed(seed, attempt as u64, "efficient-tree");
        let p1 = phase_one(&split, k, s, 1)?;
        let co = coalesce(&split, &p1.components, Some(default_coalesce_steps(n)))?;
        if !co.reached {
            detail = format!("largest component {} of {n} after {} colors", co.largest.len(), co.colors.len());
            continue;
        }
        let mut member = vec![false; n];
        for &x in &co.largest {
            member[x] = true;
        }
        let tagged = p1
            .forest
            .iter()
            .map(|e| (e, TreePhase::Growth))
            .chain(co.merges.iter().map(|e| (e, TreePhase::Coalesce)));
        let edges: Vec<TreeEdge> = tagged
            .filter(|(e, _)| member[e.u] && member[e.v])
            .map(|(e, phase)| TreeEdge {
                u: verts[e.u],
                v: verts[e.v],
                color: c.color(verts[e.u], verts[e.v]),
                phase,
                step: e.step,
            })
            .collect();
        let flags = PipelineFlags {
            path: p1.path,
            statistical_failure: !p1.success,
            growth_attempts: attempt + 1,
            coalesce_reached: true,
            coalesce_steps: co.colors.len(),
            coalesce_fallback_steps: co.fallback_steps.len(),
            coalesce_decay: co.decay_holds(),
            good_preconditions: co.preconditions_hold,
        };
        let vertices = co.largest.iter().map(|&x| verts[x]).collect();
        return Ok(TreeCertificate::assemble(c.num_vertices(), n, vertices, edges, bound, flags));
    }
    Err(Error::StatisticalFailure {
        operation: "efficient_tree",
        attempts: retries.max(1),
        detail,
    })
}

/// Phase-1 and phase-2 budgets of an efficiently colored tree: `900K` and `900 ln n`.
pub fn efficient_budgets(k: f64, n: usize) -> (f64, f64) {
    (900.0 * k.max(1.0), 900.0 * clamped_ln(n as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RichSubset {
    pub vertices: Vec<usize>,
    /// Colors inside the sampled core (before padding).
    pub core_colors: usize,
    pub core_size: usize,
    pub attempts: usize,
}

/// A `t`-subset of a Δ-bounded coloring containing at least `n/(20Δ)` colors.
pub fn rich_subset(c: &EdgeColoring, t: usize, seed: u64) -> Result<RichSubset> {
    rich_subset_with(c, t, seed, DEFAULT_RETRIES)
}

pub fn rich_subset_with(c: &EdgeColoring, t: usize, seed: u64, retries: usize) -> Result<RichSubset> {
    let n = c.num_vertices();
    let delta = c.max_degree().max(1);
    if !c.host().is_complete() {
        return domain("rich_subset needs a complete host");
    }
    if 100 * delta > n {
        return domain(format!("max degree {delta} exceeds n/100"));
    }
    if t > n || t * t * delta < n {
        return domain(format!("t = {t} must satisfy sqrt(n/Δ) <= t <= n"));
    }
    let mut t0 = 2;
    while t0 < t && delta * (t0 + 1) * t0 / 2 <= (n - 1) / 4 {
        t0 += 1;
    }
    let mut best = 0;
    for attempt in 0..retries.max(1) {
        let mut rng = rng::stream(seed, attempt as u64, "rich-subset");
        let mut core: Vec<usize> = sample(&mut rng, n, t0).into_vec();
        core.sort_unstable();
        let got = colors_within(c, &core)?;
        best = best.max(got);
        if 20 * delta * got >= n {
            let mut vertices = core.clone();
            let mut taken = vec![false; n];
            for &x in &core {
                taken[x] = true;
            }
            vertices.extend((0..n).filter(|&x| !taken[x]).take(t - t0));
            vertices.sort_unstable();
            return Ok(RichSubset {
                vertices,
                core_colors: got,
                core_size: t0,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::StatisticalFailure {
        operation: "rich_subset",
        attempts: retries.max(1),
        detail: format!("best core had {best} colors, needed {}", n as f64 / (20.0 * delta as f64)),
    })
}

/// A proper coloring of `K_{n+s}` built so that few colors cannot connect `A_n`
/// to all of `A_s`.
#[derive(Clone, Debug)]
pub struct HardInstance {
    pub coloring: EdgeColoring,
    pub n: usize,
    pub s: usize,
    /// Size of the random bipartite palette, `⌈Kn⌉`.
    pub palette: usize,
    pub bad_edges: usize,
    /// At most `5Kn` colors.
    pub within_budget: bool,
}

/// `A_n = 0..n`, `A_s = n..n+s` with `s = ⌈√(Kn)⌉`. Each vertex of `A_s`
/// colors its edges to `A_n` by a random injection into `⌈Kn⌉` colors; edges
/// that collide at their `A_n` end are recolored with fresh colors. `A_n` is
/// colored by `(i + j) mod n` and `A_s` is rainbow, each from its own palette.
pub fn hard_instance(n: usize, k: f64, seed: u64) -> Result<HardInstance> {
    if !(k >= 1.0) {
        return domain(format!("K = {k} must be at least 1"));
    }
    if n < 2 {
        return domain("hard_instance needs n >= 2");
    }
    let kn = k * n as f64;
    let s = kn.sqrt().ceil() as usize;
    let palette = kn.ceil() as usize;
    if s > n {
        return domain(format!("s = {s} exceeds n = {n}"));
    }
    let mut rng = rng::stream(seed, 0, "hard-instance");
    // bip[i][j]: color of the edge between A_s vertex i and A_n vertex j
    let mut bip: Vec<Vec<u32>> = (0..s)
        .map(|_| sample(&mut rng, palette, n).into_iter().map(|x| x as u32).collect())
        .collect();
    let mut next = palette as u32;
    let mut bad_edges = 0;
    let mut slot = vec![u32::MAX; palette];
    let mut group: Vec<Vec<usize>> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    for j in 0..n {
        group.clear();
        for i in 0..s {
            let col = bip[i][j] as usize;
            if slot[col] == u32::MAX {
                slot[col] = group.len() as u32;
                group.push(Vec::new());
                touched.push(col);
            }
            group[slot[col] as usize].push(i);
        }
        for g in &group {
            if g.len() > 1 {
                for &i in g {
                    bip[i][j] = next;
                    next += 1;
                    bad_edges += 1;
                }
            }
        }
        for col in touched.drain(..) {
            slot[col] = u32::MAX;
        }
    }
    let an_base = next;
    let as_base = an_base + n as u32;
    let host = Host::Complete { n: n + s };
    let labels: Vec<u32> = host
        .edges()
        .map(|(u, v)| {
            if v < n {
                an_base + ((u + v) % n) as u32
            } else if u < n {
                bip[v - n][u]
            } else {
                let (a, b) = (u - n, v - n);
                as_base + (b * (b - 1) / 2 + a) as u32
            }
        })
        .collect();
    let coloring = EdgeColoring::from_labels(host, &labels)?;
    let within_budget = coloring.num_colors() as f64 <= 5.0 * kn + 1e-9;
    Ok(HardInstance {
        coloring,
        n,
        s,
        palette,
        bad_edges,
        within_budget,
    })
}
