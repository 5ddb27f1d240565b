//! Difference sets, doubling constants, common dilates, exhaustive
//! small-doubling counts and additive-dimension witnesses.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::coloring::{difference_coloring, properize};
use crate::error::{domain, structural, Error, Result};
use crate::fewcolor::greedy_span;
use crate::groups::{gcd, GroupSpec};

/// Parse one element per line in coordinate form; blank lines and `#` lines are skipped.
pub fn parse_element_lines(g: &GroupSpec, text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let e = g.parse_element(line)?;
        out.push(g.index(&e)?);
    }
    Ok(out)
}

/// One element per line in coordinate form.
pub fn format_set(g: &GroupSpec, a: &[usize]) -> String {
    let mut out = String::new();
    for &x in a {
        writeln!(out, "{}", g.element(x)).unwrap();
    }
    out
}

fn normalize(g: &GroupSpec, a: &[usize]) -> Result<Vec<usize>> {
    if a.is_empty() {
        return structural("set is empty");
    }
    if let Some(&x) = a.iter().find(|&&x| x >= g.order()) {
        return structural(format!("element index {x} outside {g}"));
    }
    let mut v = a.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn diff_flags(g: &GroupSpec, a: &[usize]) -> Vec<bool> {
    let mut flags = vec![false; g.order()];
    for &x in a {
        for &y in a {
            flags[g.sub_idx(x, y)] = true;
        }
    }
    flags
}

fn flags_to_vec(flags: &[bool]) -> Vec<usize> {
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
}

/// A set together with its difference set and doubling constant `|A−A|/|A|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SetStats {
    pub elements: Vec<usize>,
    pub diff: Vec<usize>,
    pub k: Ratio<u64>,
}

impl SetStats {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn k_f64(&self) -> f64 {
        *self.k.numer() as f64 / *self.k.denom() as f64
    }
}

pub fn difference_set(g: &GroupSpec, a: &[usize]) -> Result<SetStats> {
    let elements = normalize(g, a)?;
    let diff = flags_to_vec(&diff_flags(g, &elements));
    let k = Ratio::new(diff.len() as u64, elements.len() as u64);
    Ok(SetStats { elements, diff, k })
}

pub fn sumset(g: &GroupSpec, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    let a = normalize(g, a)?;
    let b = normalize(g, b)?;
    let mut flags = vec![false; g.order()];
    for &x in &a {
        for &y in &b {
            flags[g.add_idx(x, y)] = true;
        }
    }
    Ok(flags_to_vec(&flags))
}

/// Whether `|D| ≥ |A|^(1 + 1/(2^q m))`, decided exactly.
pub fn dilate_free_bound(a_len: usize, d_len: usize, q: usize, m: u64) -> bool {
    if a_len <= 1 {
        return d_len >= a_len;
    }
    if d_len <= a_len {
        return false;
    }
    // (|D|/|A|)^E ≥ (1 + 1/a)^E ≥ exp(E/(a+1)), which exceeds a once E ≥ (a+1) ln a.
    let a = a_len as f64;
    let e_float = 2f64.powi(q.min(1000) as i32) * m as f64;
    if e_float > 2.0 * (a + 1.0) * a.ln() + 16.0 {
        return true;
    }
    let e = (1u64 << q) * m;
    let lhs = BigUint::from(d_len).pow(e as u32);
    let rhs = BigUint::from(a_len).pow(e as u32 + 1);
    lhs >= rhs
}

/// The smallest nonzero `y` with `t·y ∈ A−A` for every `t ∈ T`, if any.
///
/// When no such `y` exists the doubling inequality `|A−A| ≥ |A|^(1+1/(2^q m))`
/// with `q = |T|`, `m = max T + 1` is asserted.
pub fn common_dilate(g: &GroupSpec, a: &[usize], t: &[u64]) -> Result<Option<usize>> {
    let a = normalize(g, a)?;
    if t.is_empty() {
        return domain("multiplier set T is empty");
    }
    let n = g.order() as u64;
    for &ti in t {
        if ti == 0 || gcd(ti, n) != 1 {
            return domain(format!("multiplier {ti} is not a positive integer coprime to {n}"));
        }
    }
    let flags = diff_flags(g, &a);
    let found = (1..g.order()).find(|&y| t.iter().all(|&ti| flags[g.mul_idx(ti as i64, y)]));
    if found.is_none() {
        let mut ts = t.to_vec();
        ts.sort_unstable();
        ts.dedup();
        let d = flags.iter().filter(|&&f| f).count();
        let m = ts.last().unwrap() + 1;
        assert!(
            dilate_free_bound(a.len(), d, ts.len(), m),
            "dilate-free set violates |A-A| >= |A|^(1+1/(2^q m)): |A| = {}, |A-A| = {d}",
            a.len()
        );
    }
    Ok(found)
}

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Exact count of `n`-subsets `A` with `|A−A| ≤ m`, and the histogram of `|A−A|`
/// over all `n`-subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct DoublingCount {
    pub n: usize,
    pub m: usize,
    pub count: u128,
    /// `histogram[d]` = number of `n`-subsets with `|A−A| = d`.
    pub histogram: Vec<u128>,
    pub subsets: u128,
}

impl DoublingCount {
    /// Count of subsets with `|A−A| ≤ bound`.
    pub fn at_most(&self, bound: usize) -> u128 {
        self.histogram.iter().take(bound + 1).sum()
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Enumerator<'a> {
    g: &'a GroupSpec,
    n: usize,
    chosen: Vec<usize>,
    mult: Vec<u32>,
    distinct: usize,
    histogram: Vec<u128>,
}

impl Enumerator<'_> {
    fn push(&mut self, x: usize) {
        for i in 0..self.chosen.len() {
            let y = self.chosen[i];
            for d in [self.g.sub_idx(x, y), self.g.sub_idx(y, x)] {
                if self.mult[d] == 0 {
                    self.distinct += 1;
                }
                self.mult[d] += 1;
            }
        }
        self.chosen.push(x);
    }

    fn pop(&mut self) {
        let x = self.chosen.pop().unwrap();
        for i in 0..self.chosen.len() {
            let y = self.chosen[i];
            for d in [self.g.sub_idx(x, y), self.g.sub_idx(y, x)] {
                self.mult[d] -= 1;
                if self.mult[d] == 0 {
                    self.distinct -= 1;
                }
            }
        }
    }

    fn dfs(&mut self, next: usize) {
        if self.chosen.len() == self.n {
            self.histogram[self.distinct + 1] += 1;
            return;
        }
        let need = self.n - self.chosen.len();
        for x in next..=self.g.order() - need {
            self.push(x);
            self.dfs(x + 1);
            self.pop();
        }
    }
}

pub fn count_small_doubling(g: &GroupSpec, n: usize, m: usize, budget: u128) -> Result<DoublingCount> {
    let order = g.order();
    if n == 0 || n > order {
        return domain(format!("subset size {n} must lie in 1..={order}"));
    }
    let subsets = binomial(order as u128, n as u128);
    if subsets > budget {
        return Err(Error::BudgetExceeded {
            what: format!("{n}-subsets of {g}"),
            required: subsets,
            budget,
        });
    }
    let histogram = (0..=order - n)
        .into_par_iter()
        .map(|first| {
            let mut e = Enumerator {
                g,
                n,
                chosen: Vec::with_capacity(n),
                mult: vec![0; order],
                distinct: 0,
                histogram: vec![0; order + 1],
            };
            e.push(first);
            e.dfs(first + 1);
            e.histogram
        })
        .reduce(
            || vec![0; order + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let count = histogram.iter().take(m + 1).sum();
    Ok(DoublingCount {
        n,
        m,
        count,
        histogram,
        subsets,
    })
}

/// `A ⊆ base + {Σ w_i s_i : w_i ∈ {−1, 0, 1}}` for the recorded sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionWitness {
    pub base: usize,
    pub sequence: Vec<usize>,
    pub k: f64,
    /// `18 K max(ln n, 1)`.
    pub bound: f64,
    pub verified: bool,
}

impl DimensionWitness {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn within_bound(&self) -> bool {
        self.sequence.len() as f64 <= self.bound + 1e-9
    }
}

/// Group elements reachable from `base` by adding `−s`, `0` or `s` for each `s`
/// of the sequence in turn.
pub fn signed_span(g: &GroupSpec, base: usize, sequence: &[usize]) -> Vec<bool> {
    let mut reach = vec![false; g.order()];
    reach[base] = true;
    for &s in sequence {
        let current = flags_to_vec(&reach);
        for x in current {
            reach[g.add_idx(x, s)] = true;
            reach[g.sub_idx(x, s)] = true;
        }
    }
    reach
}

pub fn dimension_witness(g: &GroupSpec, a: &[usize]) -> Result<DimensionWitness> {
    let a = normalize(g, a)?;
    if a.len() < 2 {
        return domain("dimension witness needs |A| >= 2");
    }
    let gc = difference_coloring(g, &a)?;
    let proper = properize(&gc.coloring);
    let trace = greedy_span(&proper, 0)?;
    let sequence: Vec<usize> = trace
        .colors
        .iter()
        .map(|&c| gc.color_elements[proper.root_color(c)])
        .collect();
    let reach = signed_span(g, a[0], &sequence);
    let verified = a.iter().all(|&x| reach[x]);
    let d = diff_flags(g, &a).iter().filter(|&&f| f).count();
    let k = d as f64 / a.len() as f64;
    let ln = (a.len() as f64).ln().max(1.0);
    Ok(DimensionWitness {
        base: a[0],
        sequence,
        k,
        bound: 18.0 * k * ln,
        verified,
    })
}

/// Whether `|A−A|^q ≥ |A|^p`, i.e. `|A−A| ≥ |A|^(p/q)`.
pub fn clique_doubling_check(g: &GroupSpec, a: &[usize], p: u32, q: u32) -> Result<bool> {
    let a = normalize(g, a)?;
    if a.len() < 2 {
        return domain("doubling check needs |A| >= 2");
    }
    if q == 0 {
        return domain("exponent denominator is zero");
    }
    let d = diff_flags(g, &a).iter().filter(|&&f| f).count();
    Ok(BigUint::from(d).pow(q) >= BigUint::from(a.len()).pow(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn difference_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        let s = difference_set(&f, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.diff, vec![0, 1, 2, 3]);
        assert_eq!(s.k, Ratio::from_integer(1));

        let s = difference_set(&z(5), &[0, 1]).unwrap();
        assert_eq!(s.diff, vec![0, 1, 4]);
        assert_eq!(s.k, Ratio::new(3, 2));

        let s = difference_set(&z(7), &[0, 1, 3]).unwrap();
        assert_eq!(s.diff.len(), 7);
        assert_eq!(s.k, Ratio::new(7, 3));

        assert_eq!(sumset(&z(7), &[0, 1], &[0, 2]).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn dilate_examples() {
        let g = z(5);
        assert_eq!(common_dilate(&g, &[0, 1, 2, 3, 4], &[1, 2]).unwrap(), Some(1));
        assert_eq!(common_dilate(&g, &[0, 1], &[1, 2]).unwrap(), None);
        assert_eq!(common_dilate(&z(7), &[0, 1, 2], &[1, 2]).unwrap(), Some(1));
        assert!(matches!(common_dilate(&z(6), &[0, 1], &[2]), Err(Error::Domain(_))));
    }

    #[test]
    fn counting_examples() {
        let c = count_small_doubling(&z(5), 2, 3, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(c.count, 10);
        let f = GroupSpec::vector_space(2, 4).unwrap();
        let c = count_small_doubling(&f, 4, 4, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(c.count, 140);
        let c = count_small_doubling(&z(9), 1, 1, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(c.count, 9);
        let big = GroupSpec::cyclic(64).unwrap();
        assert!(matches!(
            count_small_doubling(&big, 10, 5, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn counting_matches_direct_enumeration() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        for n in 1..=4 {
            let c = count_small_doubling(&g, n, 8, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let mut hist = vec![0u128; 9];
            for mask in 0u32..256 {
                if mask.count_ones() as usize != n {
                    continue;
                }
                let a: Vec<usize> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
                hist[difference_set(&g, &a).unwrap().diff.len()] += 1;
            }
            assert_eq!(c.histogram, hist);
            assert_eq!(c.count, binomial(8, n as u128));
        }
    }

    #[test]
    fn witness_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        let w = dimension_witness(&f, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(w.verified);
        assert!(w.len() <= 3);
        let g = z(101);
        let w = dimension_witness(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(w.verified && w.within_bound());
        assert!((w.k - 15.0 / 8.0).abs() < 1e-12);
        let w = dimension_witness(&g, &[3, 40]).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w.verified);
    }

    #[test]
    fn doubling_check_examples() {
        let f = GroupSpec::vector_space(2, 3).unwrap();
        assert!(!clique_doubling_check(&f, &[0, 1, 2, 3], 4, 3).unwrap());
        assert!(clique_doubling_check(&z(5), &[0, 1], 4, 3).unwrap());
    }

    #[test]
    fn dilate_free_bound_matches_floats() {
        for a in 2..40usize {
            for d in a..a * a {
                for (q, m) in [(1usize, 2u64), (2, 3), (3, 5)] {
                    let e = (1u64 << q) as f64 * m as f64;
                    let lhs = e * (d as f64).ln();
                    let rhs = (e + 1.0) * (a as f64).ln();
                    if (lhs - rhs).abs() > 1e-9 {
                        assert_eq!(dilate_free_bound(a, d, q, m), lhs > rhs, "a={a} d={d}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn difference_set_invariants(mask in 1u64..(1 << 20)) {
            let g = GroupSpec::new(vec![4, 5]).unwrap();
            let a: Vec<usize> = (0..20).filter(|i| mask >> i & 1 == 1).collect();
            let s = difference_set(&g, &a).unwrap();
            prop_assert!(s.diff.contains(&0));
            for &d in &s.diff {
                prop_assert!(s.diff.contains(&g.neg_idx(d)));
            }
            let n = a.len();
            prop_assert!(n <= s.diff.len() && s.diff.len() <= (n * n - n + 1).min(20));
        }

        #[test]
        fn witness_always_verifies(mask in 3u64..(1 << 27)) {
            let g = GroupSpec::vector_space(3, 3).unwrap();
            let a: Vec<usize> = (0..27).filter(|i| mask >> i & 1 == 1).collect();
            prop_assume!(a.len() >= 2);
            let w = dimension_witness(&g, &a).unwrap();
            prop_assert!(w.verified);
            prop_assert!(w.within_bound());
        }
    }
}
