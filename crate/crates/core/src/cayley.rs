//! Cayley graphs and structured random generating sets.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clique::{max_clique_with, CliqueCertificate, DenseGraph, SolverOptions};
use crate::error::{domain, structural, Error, Result};
use crate::groups::{
    dilation_orbits, find_scalar_of_order, gcd, lines_through_origin, multiplicative_order, mul_mod,
    pow_mod, primitive_root, sign_classes, GroupSpec,
};
use crate::rng;

/// An inverse-closed subset of `G \ {0}`, stored as membership flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricSet {
    member: Vec<bool>,
}

impl SymmetricSet {
    pub fn from_flags(g: &GroupSpec, member: Vec<bool>) -> Result<Self> {
        if member.len() != g.order() {
            return structural(format!("{} flags for a group of order {}", member.len(), g.order()));
        }
        if member[0] {
            return structural("a generating set cannot contain 0");
        }
        if let Some(x) = (0..g.order()).find(|&x| member[x] != member[g.neg_idx(x)]) {
            return structural(format!("{} is in the set but its negative is not", g.element(x)));
        }
        Ok(SymmetricSet { member })
    }

    /// The symmetric closure of `elements`.
    pub fn from_elements(g: &GroupSpec, elements: &[usize]) -> Result<Self> {
        let mut member = vec![false; g.order()];
        for &x in elements {
            if x >= g.order() {
                return structural(format!("element index {x} outside {g}"));
            }
            if x == 0 {
                return structural("a generating set cannot contain 0");
            }
            member[x] = true;
            member[g.neg_idx(x)] = true;
        }
        Ok(SymmetricSet { member })
    }

    pub fn empty(g: &GroupSpec) -> Self {
        SymmetricSet {
            member: vec![false; g.order()],
        }
    }

    pub fn full(g: &GroupSpec) -> Self {
        let mut member = vec![true; g.order()];
        member[0] = false;
        SymmetricSet { member }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn flags(&self) -> &[bool] {
        &self.member
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.member.len()).filter(|&x| self.member[x])
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `G \ {0} \ S`.
    pub fn complement(&self) -> SymmetricSet {
        let mut member: Vec<bool> = self.member.iter().map(|m| !m).collect();
        member[0] = false;
        SymmetricSet { member }
    }

    /// `t * S`, for `t` a unit of the exponent.
    pub fn dilate(&self, g: &GroupSpec, t: i64) -> SymmetricSet {
        let mut member = vec![false; self.member.len()];
        for x in self.elements() {
            member[g.mul_idx(t, x)] = true;
        }
        SymmetricSet { member }
    }

    /// One element per line in coordinate form, after a header line.
    pub fn to_text(&self, g: &GroupSpec, header: &str) -> String {
        let mut out = format!("# group {g} {header}\n");
        for x in self.elements() {
            writeln!(out, "{}", g.element(x)).unwrap();
        }
        out
    }

    pub fn parse(g: &GroupSpec, text: &str) -> Result<Self> {
        let elements = crate::additive::parse_element_lines(g, text)?;
        if elements.contains(&0) {
            return structural("a generating set cannot contain 0");
        }
        let mut member = vec![false; g.order()];
        for x in elements {
            member[x] = true;
        }
        Self::from_flags(g, member)
    }
}

/// The Cayley graph on `G`: `x ~ y` iff `x - y ∈ S`.
pub fn build_cayley(g: &GroupSpec, s: &SymmetricSet) -> DenseGraph {
    let mut graph = DenseGraph::new(g.order());
    let gens: Vec<usize> = s.elements().collect();
    for x in 0..g.order() {
        for &d in &gens {
            let y = g.add_idx(x, d);
            if y < x {
                graph.add_edge(x, y);
            }
        }
    }
    graph
}

/// Clique number of the Cayley graph by vertex transitivity: a maximum clique
/// may be translated to contain 0, so it is `{0}` plus a maximum clique of the
/// graph induced on `S`.
pub fn cayley_clique_number(g: &GroupSpec, s: &SymmetricSet, opts: SolverOptions) -> CliqueCertificate {
    let gens: Vec<usize> = s.elements().collect();
    let mut local = DenseGraph::new(gens.len());
    for i in 0..gens.len() {
        for j in 0..i {
            if s.contains(g.sub_idx(gens[i], gens[j])) {
                local.add_edge(i, j);
            }
        }
    }
    let inner = max_clique_with(&local, opts);
    let mut vertices: Vec<usize> = std::iter::once(0).chain(inner.vertices.iter().map(|&i| gens[i])).collect();
    vertices.sort_unstable();
    CliqueCertificate {
        vertices,
        maximum: inner.maximum,
        nodes: inner.nodes,
    }
}

/// Independence number of the Cayley graph: the clique number for the complement set.
pub fn cayley_independence_number(g: &GroupSpec, s: &SymmetricSet, opts: SolverOptions) -> CliqueCertificate {
    cayley_clique_number(g, &s.complement(), opts)
}

/// Include each sign class independently with probability `p`.
pub fn sample_uniform(g: &GroupSpec, p: f64, seed: u64) -> Result<SymmetricSet> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("probability {p} outside [0, 1]"));
    }
    let mut rng = rng::stream(seed, 0, "sample-uniform");
    let mut member = vec![false; g.order()];
    for class in sign_classes(g).classes() {
        if rng.gen_bool(p) {
            for x in class.members() {
                member[x] = true;
            }
        }
    }
    Ok(SymmetricSet { member })
}

/// On each line `{x, 2x, 3x, 4x}` of `Z_5^d`, include either `{x, 4x}` or `{2x, 3x}`.
pub fn sample_z5d(g: &GroupSpec, seed: u64) -> Result<SymmetricSet> {
    if g.field_characteristic() != Some(5) {
        return domain(format!("{g} is not Z_5^d"));
    }
    let mut rng = rng::stream(seed, 0, "sample-z5d");
    let mut member = vec![false; g.order()];
    for line in lines_through_origin(g)? {
        let pair = if rng.gen_bool(0.5) { [0, 3] } else { [1, 2] };
        for k in pair {
            member[line.points[k]] = true;
        }
    }
    Ok(SymmetricSet { member })
}

/// Group each doubling orbit of sign classes into consecutive pairs
/// `{x, 2x}, {4x, 8x}, ...` and include exactly one class of each pair; a
/// leftover class is included with probability 1/2.
pub fn sample_coprime6(g: &GroupSpec, seed: u64) -> Result<SymmetricSet> {
    let n = g.order() as u64;
    if gcd(n, 6) != 1 {
        return domain(format!("|G| = {n} is not coprime to 6"));
    }
    let part = sign_classes(g);
    let mut rng = rng::stream(seed, 0, "sample-coprime6");
    let mut member = vec![false; g.order()];
    for orbit in dilation_orbits(g, 2)? {
        for chunk in orbit.classes.chunks(2) {
            let pick = match chunk {
                [a, b] => Some(if rng.gen_bool(0.5) { *a } else { *b }),
                [a] => rng.gen_bool(0.5).then_some(*a),
                _ => unreachable!(),
            };
            if let Some(c) = pick {
                for x in part.classes()[c].members() {
                    member[x] = true;
                }
            }
        }
    }
    Ok(SymmetricSet { member })
}

/// A nonzero `y` with `{y, 2y, 4y, 8y} ⊆ S`, if one exists.
pub fn find_doubling_quadruple(g: &GroupSpec, s: &SymmetricSet) -> Option<usize> {
    (1..g.order()).find(|&y| (0..4).all(|k| s.contains(g.mul_idx(1 << k, y))))
}

/// The random generating-set models with independent class groups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sampler {
    Uniform(f64),
    Z5d,
    Coprime6,
}

impl Sampler {
    pub fn sample(&self, g: &GroupSpec, seed: u64) -> Result<SymmetricSet> {
        match *self {
            Sampler::Uniform(p) => sample_uniform(g, p, seed),
            Sampler::Z5d => sample_z5d(g, seed),
            Sampler::Coprime6 => sample_coprime6(g, seed),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sampler::Uniform(_) => "uniform",
            Sampler::Z5d => "z5d",
            Sampler::Coprime6 => "coprime6",
        }
    }

    /// Groups of sign classes that are decided jointly (one class chosen per
    /// group of two; singletons independently with probability 1/2).
    fn class_groups(&self, g: &GroupSpec) -> Result<Vec<Vec<usize>>> {
        let part = sign_classes(g);
        Ok(match self {
            Sampler::Uniform(_) => (0..part.len()).map(|c| vec![c]).collect(),
            Sampler::Z5d => lines_through_origin(g)?
                .iter()
                .map(|l| {
                    vec![
                        part.class_of(l.points[0]).unwrap(),
                        part.class_of(l.points[1]).unwrap(),
                    ]
                })
                .collect(),
            Sampler::Coprime6 => dilation_orbits(g, 2)?
                .iter()
                .flat_map(|o| o.classes.chunks(2).map(<[usize]>::to_vec).collect::<Vec<_>>())
                .collect(),
        })
    }

    /// Exact `P(X ⊆ S)`.
    pub fn exact_subset_probability(&self, g: &GroupSpec, x: &[usize]) -> Result<f64> {
        if x.contains(&0) {
            return Ok(0.0);
        }
        let part = sign_classes(g);
        let mut hit = vec![false; part.len()];
        for &e in x {
            hit[part.class_of(e).unwrap()] = true;
        }
        let mut prob = 1.0;
        for group in self.class_groups(g)? {
            let k = group.iter().filter(|&&c| hit[c]).count();
            prob *= match (group.len(), k, self) {
                (_, 0, _) => 1.0,
                (1, 1, Sampler::Uniform(p)) => *p,
                (1, 1, _) | (2, 1, _) => 0.5,
                _ => 0.0,
            };
        }
        Ok(prob)
    }
}

/// Empirical estimate of `P(X ⊆ S)` against the bound `2^{-|X|/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetProbabilityCheck {
    pub trials: usize,
    pub hits: usize,
    pub estimate: f64,
    pub exact: f64,
    pub bound: f64,
    pub sigma: f64,
    pub holds: bool,
}

pub fn monochromatic_subset_probability_bound(
    g: &GroupSpec,
    sampler: Sampler,
    x: &[usize],
    trials: usize,
    seed: u64,
) -> Result<SubsetProbabilityCheck> {
    if matches!(sampler, Sampler::Uniform(_)) {
        return domain("the bound applies to the z5d and coprime6 samplers");
    }
    let mut distinct = x.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut hits = 0;
    for t in 0..trials {
        let s = sampler.sample(g, rng::child_seed(seed, t as u64, "subset-probability"))?;
        if distinct.iter().all(|&e| s.contains(e)) {
            hits += 1;
        }
    }
    let bound = 2f64.powf(-(distinct.len() as f64) / 2.0);
    let estimate = hits as f64 / trials.max(1) as f64;
    let sigma = (bound * (1.0 - bound) / trials.max(1) as f64).sqrt();
    Ok(SubsetProbabilityCheck {
        trials,
        hits,
        estimate,
        exact: sampler.exact_subset_probability(g, &distinct)?,
        bound,
        sigma,
        holds: estimate <= bound + 5.0 * sigma,
    })
}

/// A symmetric coloring of `G \ {0}` into `r` classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyColoring {
    pub r: usize,
    class_of: Vec<u32>,
    /// `(alpha, 2r)` for rotational colorings.
    pub rotation: Option<(u64, u64)>,
    /// For the large-characteristic colorings, the colored intervals (as element lists).
    pub intervals: Vec<Vec<usize>>,
}

const NO_COLOR: u32 = u32::MAX;

impl CayleyColoring {
    pub fn color(&self, x: usize) -> Option<usize> {
        match self.class_of[x] {
            NO_COLOR => None,
            c => Some(c as usize),
        }
    }

    pub fn class(&self, c: usize) -> SymmetricSet {
        SymmetricSet {
            member: self.class_of.iter().map(|&k| k == c as u32).collect(),
        }
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r];
        for &c in &self.class_of[1..] {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Classes partition `G \ {0}` and each is inverse-closed.
    pub fn verify_partition(&self, g: &GroupSpec) -> bool {
        self.class_of.len() == g.order()
            && self.class_of[0] == NO_COLOR
            && (1..g.order()).all(|x| {
                (self.class_of[x] as usize) < self.r && self.class_of[x] == self.class_of[g.neg_idx(x)]
            })
    }

    /// `c(alpha x) = c(x) + 1 mod r` for every nonzero `x`.
    pub fn verify_rotation(&self, g: &GroupSpec) -> bool {
        let Some((alpha, _)) = self.rotation else { return false };
        (1..g.order()).all(|x| {
            let y = g.mul_idx(alpha as i64, x);
            self.class_of[y] as usize == (self.class_of[x] as usize + 1) % self.r
        })
    }

    /// One `element color` line per nonzero element.
    pub fn to_text(&self, g: &GroupSpec) -> String {
        let mut out = format!("# group {g} colors {}\n", self.r);
        for x in 1..g.order() {
            writeln!(out, "{} {}", g.element(x), self.class_of[x]).unwrap();
        }
        out
    }
}

fn vector_space_char(g: &GroupSpec) -> Result<u64> {
    g.field_characteristic()
        .ok_or_else(|| Error::Domain(format!("{g} is not a vector space over a prime field")))
}

/// Block `k` of a random permutation of `m` items cut into `r` near-equal blocks.
fn equipartition<R: Rng>(rng: &mut R, m: usize, r: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut block = vec![0; m];
    let (base, extra) = (m / r, m % r);
    let mut pos = 0;
    for k in 0..r {
        let size = base + usize::from(k < extra);
        for &item in &perm[pos..pos + size] {
            block[item] = k;
        }
        pos += size;
    }
    block
}

/// Per line, equipartition the scalars `1..=(p-1)/2` at random into `r` classes.
pub fn rcoloring_smallp(g: &GroupSpec, r: usize, seed: u64) -> Result<CayleyColoring> {
    let p = vector_space_char(g)?;
    if r < 1 || p <= 2 * r as u64 {
        return domain(format!("need p > 2r, got p = {p}, r = {r}"));
    }
    if r < 32 && p > 1u64 << (2 * r) {
        return domain(format!("need p <= 2^(2r), got p = {p}, r = {r}"));
    }
    let half = ((p - 1) / 2) as usize;
    let mut class_of = vec![NO_COLOR; g.order()];
    for (li, line) in lines_through_origin(g)?.iter().enumerate() {
        let mut rng = rng::stream(seed, li as u64, "rcoloring-smallp");
        let block = equipartition(&mut rng, half, r);
        for (a, &k) in block.iter().enumerate() {
            // points[a] = (a + 1) x and points[p - 2 - a] = -(a + 1) x
            class_of[line.points[a]] = k as u32;
            class_of[line.points[p as usize - 2 - a]] = k as u32;
        }
    }
    Ok(CayleyColoring {
        r,
        class_of,
        rotation: None,
        intervals: Vec::new(),
    })
}

/// Doubling orbits of the sign classes `{±a}` of `F_p^*`, as lists of
/// representatives `a <= (p-1)/2`, each listed `a, 2a, 4a, ...` from its smallest class.
fn scalar_doubling_orbits(p: u64) -> Vec<Vec<u64>> {
    let half = (p - 1) / 2;
    let canon = |a: u64| if a > half { p - a } else { a };
    let mut seen = vec![false; half as usize + 1];
    let mut orbits = Vec::new();
    for a in 1..=half {
        if seen[a as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = a;
        while !seen[x as usize] {
            seen[x as usize] = true;
            orbit.push(x);
            x = canon(mul_mod(2, x, p));
        }
        orbits.push(orbit);
    }
    orbits
}

/// Cut each doubling orbit of sign classes into intervals of `r` consecutive
/// classes; each full interval receives every color once, the shorter leftover
/// a random injection.
pub fn rcoloring_largep(g: &GroupSpec, r: usize, seed: u64) -> Result<CayleyColoring> {
    let p = vector_space_char(g)?;
    if r < 1 || (r < 32 && p <= 1u64 << (2 * r)) {
        return domain(format!("need p > 2^(2r), got p = {p}, r = {r}"));
    }
    let orbits = scalar_doubling_orbits(p);
    let mut class_of = vec![NO_COLOR; g.order()];
    let mut intervals = Vec::new();
    for (li, line) in lines_through_origin(g)?.iter().enumerate() {
        let mut rng = rng::stream(seed, li as u64, "rcoloring-largep");
        for orbit in &orbits {
            for chunk in orbit.chunks(r) {
                let colors: Vec<usize> = rand::seq::index::sample(&mut rng, r, chunk.len()).into_vec();
                for (&a, &k) in chunk.iter().zip(&colors) {
                    class_of[line.points[a as usize - 1]] = k as u32;
                    class_of[line.points[(p - a) as usize - 1]] = k as u32;
                }
                intervals.push(chunk.iter().map(|&a| line.points[a as usize - 1]).collect());
            }
        }
    }
    Ok(CayleyColoring {
        r,
        class_of,
        rotation: None,
        intervals,
    })
}

/// `max(r, 2 ceil(log2 log2 max(N, 16)))`, rounded up to a multiple of `r`.
pub fn default_ell(order: usize, r: usize) -> usize {
    let n = order.max(16) as f64;
    let base = 2 * n.log2().log2().ceil() as usize;
    base.div_ceil(r).max(1) * r
}

/// Which construction `rotational_coloring` used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationalBranch {
    /// `p < 2^{2 r ell}`: seeds `g^j x` per line.
    SmallP,
    /// Otherwise: cosets of `<2, alpha>` cut into intervals.
    LargeP,
}

/// A rotational Cayley `r`-coloring: there is `alpha` of order `2r` with
/// `c(alpha x) = c(x) + 1 mod r`.
pub fn rotational_coloring(
    g: &GroupSpec,
    r: usize,
    ell: Option<usize>,
    seed: u64,
) -> Result<(CayleyColoring, RotationalBranch)> {
    let p = vector_space_char(g)?;
    if r < 1 || (p - 1) % (2 * r as u64) != 0 {
        return domain(format!("p = {p} is not 1 mod 2r = {}", 2 * r));
    }
    let ell = ell.unwrap_or_else(|| default_ell(g.order(), r));
    if ell == 0 || ell % r != 0 {
        return domain(format!("ell = {ell} is not a positive multiple of r = {r}"));
    }
    let alpha = find_scalar_of_order(p, 2 * r as u64)?;
    let small = 2 * r * ell >= 64 || p < 1u64 << (2 * r * ell);
    let lines = lines_through_origin(g)?;
    let mut class_of = vec![NO_COLOR; g.order()];
    let mut intervals = Vec::new();
    // scalar colour offsets: colour of (a x) = seed colour of its base + i
    if small {
        let gen = primitive_root(p)?;
        let m = ((p - 1) / (2 * r as u64)) as usize;
        // decomposition a = ±alpha^i g^j, i < r, j < m
        let mut decomp = vec![(0usize, 0usize); p as usize];
        for j in 0..m {
            let gj = pow_mod(gen, j as u64, p);
            for i in 0..r {
                let v = mul_mod(pow_mod(alpha, i as u64, p), gj, p);
                decomp[v as usize] = (i, j);
                decomp[(p - v) as usize] = (i, j);
            }
        }
        for (li, line) in lines.iter().enumerate() {
            let mut rng = rng::stream(seed, li as u64, "rotational-smallp");
            let base = equipartition(&mut rng, m, r);
            for a in 1..p as usize {
                let (i, j) = decomp[a];
                class_of[line.points[a - 1]] = ((base[j] + i) % r) as u32;
            }
        }
    } else {
        let h = multiplicative_order(2, p);
        let alpha_pows: Vec<u64> = (0..2 * r as u64).map(|i| pow_mod(alpha, i, p)).collect();
        let h_prime = (1..=h).find(|&a| alpha_pows.contains(&pow_mod(2, a, p))).unwrap() as usize;
        if h_prime < ell {
            return domain(format!("h' = {h_prime} is smaller than ell = {ell}"));
        }
        // cosets M = {2^a alpha^i s}: record (coset, a, i) per scalar
        let mut decomp = vec![(usize::MAX, 0usize, 0usize); p as usize];
        let mut reps = Vec::new();
        for s in 1..p {
            if decomp[s as usize].0 != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(s);
            for a in 0..h_prime {
                let two_a = mul_mod(s, pow_mod(2, a as u64, p), p);
                for (i, &ai) in alpha_pows.iter().enumerate() {
                    decomp[mul_mod(two_a, ai, p) as usize] = (id, a, i);
                }
            }
        }
        // intervals of {0..h'}: size ell, the last one absorbing the remainder
        let count = h_prime / ell;
        let bounds: Vec<(usize, usize)> = (0..count)
            .map(|k| (k * ell, if k + 1 == count { h_prime } else { (k + 1) * ell }))
            .collect();
        for (li, line) in lines.iter().enumerate() {
            let mut rng = rng::stream(seed, li as u64, "rotational-largep");
            let mut base = vec![vec![0usize; h_prime]; reps.len()];
            for (ci, &s) in reps.iter().enumerate() {
                for &(lo, hi) in &bounds {
                    let block = equipartition(&mut rng, hi - lo, r);
                    base[ci][lo..hi].copy_from_slice(&block);
                    intervals.push(
                        (lo..hi)
                            .map(|a| line.points[mul_mod(s, pow_mod(2, a as u64, p), p) as usize - 1])
                            .collect(),
                    );
                }
            }
            for a in 1..p as usize {
                let (ci, e, i) = decomp[a];
                class_of[line.points[a - 1]] = ((base[ci][e] + i) % r) as u32;
            }
        }
    }
    let coloring = CayleyColoring {
        r,
        class_of,
        rotation: Some((alpha, 2 * r as u64)),
        intervals,
    };
    let branch = if small { RotationalBranch::SmallP } else { RotationalBranch::LargeP };
    Ok((coloring, branch))
}

/// `x -> alpha x` maps the graph onto its complement.
pub fn verify_self_complementary(graph: &DenseGraph, g: &GroupSpec, alpha: u64) -> bool {
    let n = graph.num_vertices();
    if n != g.order() {
        return false;
    }
    let phi: Vec<usize> = (0..n).map(|x| g.mul_idx(alpha as i64, x)).collect();
    (0..n).all(|x| (0..x).all(|y| graph.has_edge(x, y) != graph.has_edge(phi[x], phi[y])))
}

/// Set-level form for Cayley graphs: `alpha S = G \ {0} \ S`.
pub fn is_self_complementary_set(g: &GroupSpec, s: &SymmetricSet, alpha: u64) -> bool {
    s.dilate(g, alpha as i64) == s.complement()
}

/// For a rotational coloring, multiplication by `alpha` maps every color class
/// onto the next, checked on the Cayley graphs themselves.
pub fn verify_classes_isomorphic(g: &GroupSpec, c: &CayleyColoring) -> bool {
    let Some((alpha, _)) = c.rotation else { return false };
    let graphs: Vec<DenseGraph> = (0..c.r).map(|k| build_cayley(g, &c.class(k))).collect();
    let phi: Vec<usize> = (0..g.order()).map(|x| g.mul_idx(alpha as i64, x)).collect();
    (0..c.r).all(|k| {
        let (a, b) = (&graphs[k], &graphs[(k + 1) % c.r]);
        (0..g.order()).all(|x| (0..x).all(|y| a.has_edge(x, y) == b.has_edge(phi[x], phi[y])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::max_clique;

    fn g(text: &str) -> GroupSpec {
        text.parse().unwrap()
    }

    #[test]
    fn transitive_clique_matches_direct_solver() {
        for (text, seed) in [("Z13", 0u64), ("Z5^2", 1), ("Z3xZ9", 2), ("F2^5", 3)] {
            let grp = g(text);
            for t in 0..4 {
                let s = sample_uniform(&grp, 0.5, seed * 10 + t).unwrap();
                let graph = build_cayley(&grp, &s);
                let direct = max_clique(&graph);
                let fast = cayley_clique_number(&grp, &s, SolverOptions::default());
                assert_eq!(fast.size(), direct.size(), "{text} seed {t}");
                assert!(crate::clique::is_clique(&graph, &fast.vertices));
                let ind = cayley_independence_number(&grp, &s, SolverOptions::default());
                assert_eq!(ind.size(), max_clique(&graph.complement()).size());
            }
        }
        let residues = SymmetricSet::from_elements(&g("Z13"), &[1, 3, 4, 9, 10, 12]).unwrap();
        assert_eq!(cayley_clique_number(&g("Z13"), &residues, SolverOptions::default()).size(), 3);
    }

    #[test]
    fn build_cayley_examples() {
        let z5 = g("Z5");
        assert_eq!(build_cayley(&z5, &SymmetricSet::full(&z5)), DenseGraph::complete(5));
        assert_eq!(build_cayley(&z5, &SymmetricSet::empty(&z5)).num_edges(), 0);
        let c5 = build_cayley(&z5, &SymmetricSet::from_elements(&z5, &[1]).unwrap());
        assert_eq!(c5.num_edges(), 5);
        assert!((0..5).all(|v| c5.degree(v) == 2 && c5.has_edge(v, (v + 1) % 5)));
        let f = g("F3^3");
        let s = sample_uniform(&f, 0.5, 4).unwrap();
        let graph = build_cayley(&f, &s);
        assert!((0..27).all(|v| graph.degree(v) == s.len()));
    }

    #[test]
    fn symmetric_set_validation() {
        let z7 = g("Z7");
        let mut flags = vec![false; 7];
        flags[1] = true;
        assert!(SymmetricSet::from_flags(&z7, flags.clone()).is_err());
        flags[6] = true;
        assert!(SymmetricSet::from_flags(&z7, flags).is_ok());
        assert!(SymmetricSet::from_elements(&z7, &[0]).is_err());
        let s = SymmetricSet::from_elements(&z7, &[2]).unwrap();
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![2, 5]);
        assert_eq!(SymmetricSet::parse(&z7, &s.to_text(&z7, "test")).unwrap(), s);
    }

    #[test]
    fn uniform_examples() {
        let f = g("F2^5");
        assert_eq!(sample_uniform(&f, 1.0, 1).unwrap(), SymmetricSet::full(&f));
        assert!(sample_uniform(&f, 0.0, 1).unwrap().is_empty());
        assert_eq!(sample_uniform(&f, 0.5, 9).unwrap(), sample_uniform(&f, 0.5, 9).unwrap());
    }

    #[test]
    fn uniform_frequency_within_five_sigma() {
        let z = g("Z11");
        let trials = 10_000;
        let mut counts = vec![0usize; 11];
        for t in 0..trials {
            for x in sample_uniform(&z, 0.25, t).unwrap().elements() {
                counts[x] += 1;
            }
        }
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        assert!(counts[1..].iter().all(|&k| (k as f64 - 2500.0).abs() <= 5.0 * sigma));
    }

    #[test]
    fn z5d_examples() {
        let z5 = g("Z5");
        let mut seen = [0; 2];
        for seed in 0..200 {
            let s = sample_z5d(&z5, seed).unwrap();
            let elems: Vec<usize> = s.elements().collect();
            assert!(elems == vec![1, 4] || elems == vec![2, 3]);
            seen[usize::from(elems[0] == 2)] += 1;
        }
        assert!(seen[0] > 60 && seen[1] > 60);
        assert!(sample_z5d(&g("Z7"), 0).is_err());
        assert!(sample_z5d(&g("Z25"), 0).is_err());
        for d in 1..=5 {
            let f = GroupSpec::vector_space(5, d).unwrap();
            let s = sample_z5d(&f, d as u64).unwrap();
            assert_eq!(s.len(), (f.order() - 1) / 2);
            assert!((1..f.order()).all(|x| s.contains(x) != s.contains(f.mul_idx(2, x))));
            assert!(is_self_complementary_set(&f, &s, 2));
        }
    }

    #[test]
    fn coprime6_examples() {
        let z5 = g("Z5");
        for seed in 0..20 {
            let s = sample_coprime6(&z5, seed).unwrap();
            assert_eq!(s.len(), 2);
        }
        for text in ["Z35", "Z5xZ25", "F7^3", "Z11", "Z13"] {
            let grp = g(text);
            for seed in 0..10 {
                let s = sample_coprime6(&grp, seed).unwrap();
                assert_eq!(find_doubling_quadruple(&grp, &s), None, "{text} seed {seed}");
            }
        }
        assert!(sample_coprime6(&g("Z9"), 0).is_err());
        assert!(sample_coprime6(&g("Z2xZ5"), 0).is_err());
        // classes within one pair are never both included
        let z35 = g("Z35");
        let part = sign_classes(&z35);
        let orbit = &dilation_orbits(&z35, 2).unwrap()[0];
        let (a, b) = (part.classes()[orbit.classes[0]].rep, part.classes()[orbit.classes[1]].rep);
        for seed in 0..100 {
            let s = sample_coprime6(&z35, seed).unwrap();
            assert!(!(s.contains(a) && s.contains(b)));
            assert!(s.contains(a) || s.contains(b));
        }
    }

    #[test]
    fn subset_probability_examples() {
        let f = g("Z5^2");
        let one = [1usize, f.neg_idx(1)];
        let check = monochromatic_subset_probability_bound(&f, Sampler::Z5d, &one, 4000, 3).unwrap();
        assert!(check.holds);
        assert_eq!(check.exact, 0.5);
        assert!((check.estimate - 0.5).abs() < 5.0 * check.sigma);
        let pair = [1usize, f.mul_idx(2, 1)];
        let check = monochromatic_subset_probability_bound(&f, Sampler::Z5d, &pair, 500, 3).unwrap();
        assert_eq!((check.hits, check.exact), (0, 0.0));
        // 1 and e_2 lie on different lines
        let apart = [1usize, 5];
        let check = monochromatic_subset_probability_bound(&f, Sampler::Z5d, &apart, 4000, 5).unwrap();
        assert_eq!(check.exact, 0.25);
        assert!(check.holds);
        assert!((check.estimate - 0.25).abs() < 0.05);
        assert!(monochromatic_subset_probability_bound(&f, Sampler::Uniform(0.5), &apart, 10, 0).is_err());
    }

    #[test]
    fn smallp_examples() {
        let f = g("F5^2");
        for seed in 0..10 {
            let c = rcoloring_smallp(&f, 2, seed).unwrap();
            assert!(c.verify_partition(&f));
            for line in lines_through_origin(&f).unwrap() {
                let colors: Vec<usize> = line.points.iter().map(|&x| c.color(x).unwrap()).collect();
                // {x, 4x} and {2x, 3x} get different colors
                assert_eq!(colors[0], colors[3]);
                assert_eq!(colors[1], colors[2]);
                assert_ne!(colors[0], colors[1]);
            }
        }
        let f = g("F13^2");
        let c = rcoloring_smallp(&f, 3, 1).unwrap();
        for line in lines_through_origin(&f).unwrap() {
            let mut hit = vec![false; 3];
            for &x in &line.points {
                hit[c.color(x).unwrap()] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
        assert!(matches!(rcoloring_smallp(&g("F5"), 3, 0), Err(Error::Domain(_))));
        assert!(matches!(rcoloring_smallp(&g("F37"), 2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn largep_examples() {
        let f = g("F37^2");
        let c = rcoloring_largep(&f, 2, 7).unwrap();
        assert!(c.verify_partition(&f));
        assert_eq!(c, rcoloring_largep(&f, 2, 7).unwrap());
        for interval in &c.intervals {
            let colors: Vec<usize> = interval.iter().map(|&x| c.color(x).unwrap()).collect();
            let mut sorted = colors.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), colors.len(), "a color repeats within an interval");
            if interval.len() == 2 {
                assert_eq!(sorted, vec![0, 1]);
            }
        }
        // per orbit: ceil(h'/r) intervals; ord(2) mod 37 = 36, -1 = 2^18, so h' = 18
        let orbits = scalar_doubling_orbits(37);
        assert_eq!(orbits.iter().map(Vec::len).collect::<Vec<_>>(), vec![18]);
        assert_eq!(c.intervals.len(), 38 * 9);
        // no r consecutive doubles aligned with an interval are monochromatic
        for interval in c.intervals.iter().filter(|i| i.len() == 2) {
            assert_ne!(c.color(interval[0]), c.color(interval[1]));
            let double = f.mul_idx(2, interval[0]);
            assert!(interval[1] == double || interval[1] == f.neg_idx(double));
        }
        assert!(matches!(rcoloring_largep(&g("F13"), 2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn rotational_examples() {
        let f = g("F5^2");
        let (c, _) = rotational_coloring(&f, 2, None, 1).unwrap();
        assert_eq!(c.rotation, Some((2, 4)));
        assert!(c.verify_partition(&f) && c.verify_rotation(&f));
        assert!(verify_self_complementary(&build_cayley(&f, &c.class(0)), &f, 2));

        let f = g("F13^2");
        let (c, branch) = rotational_coloring(&f, 2, Some(2), 5).unwrap();
        assert_eq!(branch, RotationalBranch::SmallP);
        assert!(c.verify_rotation(&f));
        assert_eq!(c.class_sizes(), vec![84, 84]);

        let f = g("F7^2");
        let (c, _) = rotational_coloring(&f, 3, None, 2).unwrap();
        assert!(c.verify_partition(&f) && c.verify_rotation(&f));
        assert_eq!(c.class_sizes(), vec![16, 16, 16]);
        assert!(verify_classes_isomorphic(&f, &c));

        assert!(matches!(rotational_coloring(&g("F7"), 2, None, 0), Err(Error::Domain(_))));
        assert!(matches!(rotational_coloring(&g("F13"), 2, Some(3), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn rotational_large_branch() {
        // ord(2) mod 257 = 16, alpha = 16 has order 4 and equals 2^4, so h' = 4
        for text in ["F257", "F257^2"] {
            let f = g(text);
            let (c, branch) = rotational_coloring(&f, 2, Some(2), 3).unwrap();
            assert_eq!(branch, RotationalBranch::LargeP);
            assert_eq!(c.rotation, Some((16, 4)));
            assert!(c.verify_partition(&f) && c.verify_rotation(&f));
            assert_eq!(c.class_sizes(), vec![(f.order() - 1) / 2; 2]);
            assert!(is_self_complementary_set(&f, &c.class(0), 16));
            for interval in &c.intervals {
                assert_eq!(interval.len(), 2);
                assert_ne!(c.color(interval[0]), c.color(interval[1]));
            }
        }
    }

    #[test]
    fn self_complementary_examples() {
        let z5 = g("Z5");
        let c5 = build_cayley(&z5, &SymmetricSet::from_elements(&z5, &[1]).unwrap());
        assert!(verify_self_complementary(&c5, &z5, 2));
        assert!(!verify_self_complementary(&DenseGraph::complete(5), &z5, 2));
        let f = g("Z5^3");
        for seed in 0..5 {
            let s = sample_z5d(&f, seed).unwrap();
            assert!(verify_self_complementary(&build_cayley(&f, &s), &f, 2));
        }
    }

    #[test]
    fn default_ell_values() {
        assert_eq!(default_ell(169, 2), 6);
        assert_eq!(default_ell(49, 3), 6);
        assert_eq!(default_ell(4, 2), 4);
    }
}
