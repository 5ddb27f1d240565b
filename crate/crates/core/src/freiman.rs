//! Lexicographic compressions in `F_p^n`, affine spans and the `F⁻(p, K)` bound.
//!
//! Points are flat indices of a vector-space [`GroupSpec`]. Because flat indices
//! are little-endian in the coordinates, the lexicographic order (compare the
//! largest coordinate where two vectors differ) is exactly flat-index order.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::error::{domain, structural, Result};
use crate::groups::GroupSpec;

fn field(g: &GroupSpec) -> Result<u64> {
    match g.field_characteristic() {
        Some(p) => Ok(p),
        None => domain(format!("{g} is not a vector space over a prime field")),
    }
}

fn normalize(g: &GroupSpec, a: &[usize]) -> Result<Vec<usize>> {
    if let Some(&x) = a.iter().find(|&&x| x >= g.order()) {
        return structural(format!("element index {x} outside {g}"));
    }
    let mut v = a.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Lexicographic comparison of two points.
pub fn lex_cmp(a: usize, b: usize) -> Ordering {
    a.cmp(&b)
}

/// Index of the largest nonzero coordinate, if any.
pub fn leading(g: &GroupSpec, v: usize) -> Option<usize> {
    (0..g.rank()).rev().find(|&i| g.coord(v, i) != 0)
}

/// Whether `v` is a direction: nonzero with leading coordinate 1.
pub fn is_direction(g: &GroupSpec, v: usize) -> bool {
    leading(g, v).map_or(false, |l| g.coord(v, l) == 1)
}

/// All directions in lexicographic order.
pub fn directions(g: &GroupSpec) -> Vec<usize> {
    (1..g.order()).filter(|&v| is_direction(g, v)).collect()
}

fn check_direction(g: &GroupSpec, v: usize) -> Result<usize> {
    if v >= g.order() || !is_direction(g, v) {
        return domain(format!("{} is not a direction", g.element(v.min(g.order() - 1))));
    }
    Ok(leading(g, v).unwrap())
}

/// The point of the line `u + F_p v` whose leading coordinate (of `v`) is zero.
fn line_base(g: &GroupSpec, u: usize, v: usize, l: usize) -> usize {
    g.sub_idx(u, g.mul_idx(g.coord(u, l) as i64, v))
}

/// The `k` lexicographically smallest points of the line through `u` in direction `v`.
pub fn initial_segment(g: &GroupSpec, u: usize, v: usize, k: usize) -> Result<Vec<usize>> {
    let p = field(g)? as usize;
    let l = check_direction(g, v)?;
    if k > p {
        return domain(format!("segment length {k} exceeds the line length {p}"));
    }
    let base = line_base(g, u, v, l);
    Ok((0..k).map(|t| g.add_idx(base, g.mul_idx(t as i64, v))).collect())
}

/// `C_v(A)`: each line in direction `v` meets `A` in an initial segment of the
/// same size as before.
pub fn compress(g: &GroupSpec, a: &[usize], v: usize) -> Result<Vec<usize>> {
    field(g)?;
    let l = check_direction(g, v)?;
    let a = normalize(g, a)?;
    let mut count = std::collections::BTreeMap::new();
    for &x in &a {
        *count.entry(line_base(g, x, v, l)).or_insert(0usize) += 1;
    }
    let mut out: Vec<usize> = count
        .into_iter()
        .flat_map(|(base, k)| (0..k).map(move |t| g.add_idx(base, g.mul_idx(t as i64, v))))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Directions `v` with `e_ℓ(v) − v ∈ A`.
pub fn qualifying_directions(g: &GroupSpec, a: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order()];
    for &x in a {
        member[x] = true;
    }
    directions(g)
        .into_iter()
        .filter(|&v| member[g.sub_idx(g.unit(leading(g, v).unwrap()), v)])
        .collect()
}

/// Fixed under every qualifying compression.
pub fn is_star_compressed(g: &GroupSpec, a: &[usize]) -> Result<bool> {
    let a = normalize(g, a)?;
    for v in qualifying_directions(g, &a) {
        if compress(g, &a, v)? != a {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarCompression {
    pub set: Vec<usize>,
    /// Compressions that changed the set.
    pub compressions: usize,
    pub sweeps: usize,
}

/// Apply qualifying compressions in lexicographic order of the direction,
/// sweeping until a full sweep changes nothing.
pub fn star_compress(g: &GroupSpec, a: &[usize]) -> Result<StarCompression> {
    field(g)?;
    let mut cur = normalize(g, a)?;
    for i in 0..g.rank() {
        if cur.binary_search(&g.unit(i)).is_err() {
            return domain(format!("basis vector e_{} is missing", i + 1));
        }
    }
    let rank_sum = |s: &[usize]| s.iter().map(|&x| x as u128).sum::<u128>();
    let mut compressions = 0;
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        for v in directions(g) {
            let l = leading(g, v).unwrap();
            if cur.binary_search(&g.sub_idx(g.unit(l), v)).is_err() {
                continue;
            }
            let next = compress(g, &cur, v)?;
            if next != cur {
                assert!(rank_sum(&next) < rank_sum(&cur), "compression did not decrease the rank sum");
                cur = next;
                compressions += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(StarCompression {
        set: cur,
        compressions,
        sweeps,
    })
}

fn diff_size(g: &GroupSpec, a: &[usize], b: &[usize]) -> usize {
    let mut flags = vec![false; g.order()];
    for &x in a {
        for &y in b {
            flags[g.sub_idx(x, y)] = true;
        }
    }
    flags.iter().filter(|&&f| f).count()
}

fn diff_set(g: &GroupSpec, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut flags = vec![false; g.order()];
    for &x in a {
        for &y in b {
            flags[g.sub_idx(x, y)] = true;
        }
    }
    (0..g.order()).filter(|&x| flags[x]).collect()
}

pub fn difference_size(g: &GroupSpec, a: &[usize]) -> usize {
    diff_size(g, a, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressionInequality {
    /// `|C_v(A) − C_v(B)|`.
    pub lhs: usize,
    /// `|C_v(A − B)|`.
    pub rhs: usize,
    pub holds: bool,
}

/// Both sides of `|C_v(A) − C_v(B)| ≤ |C_v(A − B)|`.
pub fn compression_inequality_check(g: &GroupSpec, a: &[usize], b: &[usize], v: usize) -> Result<CompressionInequality> {
    let a = normalize(g, a)?;
    let b = normalize(g, b)?;
    if a.is_empty() || b.is_empty() {
        return structural("both sets must be nonempty");
    }
    let ca = compress(g, &a, v)?;
    let cb = compress(g, &b, v)?;
    let lhs = diff_size(g, &ca, &cb);
    let rhs = compress(g, &diff_set(g, &a, &b), v)?.len();
    Ok(CompressionInequality {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// The smallest coset containing `A`: `shift + span(basis)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpan {
    pub shift: usize,
    /// Basis of the direction subspace, in reduced row echelon form.
    pub basis: Vec<usize>,
    pub dim: usize,
    pub size: BigUint,
}

pub fn affine_span(g: &GroupSpec, a: &[usize]) -> Result<AffineSpan> {
    let p = field(g)?;
    let a = normalize(g, a)?;
    if a.is_empty() {
        return structural("affine span of the empty set");
    }
    let n = g.rank();
    let shift = a[0];
    let inv = |x: u64| crate::groups::pow_mod(x, p - 2, p);
    // rows kept with pivots in decreasing coordinate order
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    for &x in &a[1..] {
        let mut r = g.coords(g.sub_idx(x, shift));
        for (piv, row) in &rows {
            let f = r[*piv];
            if f != 0 {
                for i in 0..n {
                    r[i] = (r[i] + (p - f) * row[i]) % p;
                }
            }
        }
        if let Some(piv) = (0..n).rev().find(|&i| r[i] != 0) {
            let s = inv(r[piv]);
            r.iter_mut().for_each(|c| *c = *c * s % p);
            for (_, row) in rows.iter_mut() {
                let f = row[piv];
                if f != 0 {
                    for i in 0..n {
                        row[i] = (row[i] + (p - f) * r[i]) % p;
                    }
                }
            }
            rows.push((piv, r));
        }
    }
    rows.sort_by_key(|(piv, _)| *piv);
    let basis: Vec<usize> = rows.iter().map(|(_, r)| g.index_unchecked(r)).collect();
    let dim = basis.len();
    Ok(AffineSpan {
        shift,
        basis,
        dim,
        size: BigUint::from(p).pow(dim as u32),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FminusCheck {
    pub p: u64,
    pub size: usize,
    pub diff: usize,
    /// `K = |A−A| / |A|`.
    pub k: Ratio<u64>,
    pub span_size: BigUint,
    /// Whether `|⟨A⟩| / |A| ≤ p^K / (K + 2)`.
    pub holds: bool,
}

/// Decide `|⟨A⟩|/|A| ≤ p^K/(K+2)` exactly. With `K = a/b` in lowest terms and
/// `|⟨A⟩|(K+2)/|A| = u/w`, this is `u^b ≤ p^a w^b`.
pub fn fminus_bound_check(g: &GroupSpec, a: &[usize]) -> Result<FminusCheck> {
    let p = field(g)?;
    if p < 3 {
        return domain("F-(p, K) bound needs p >= 3");
    }
    let set = normalize(g, a)?;
    if set.is_empty() {
        return structural("set is empty");
    }
    let span = affine_span(g, &set)?;
    let d = difference_size(g, &set);
    let k = Ratio::new(d as u64, set.len() as u64);
    let (ka, kb) = (*k.numer(), *k.denom());
    // (K + 2) |⟨A⟩| / |A| = (ka + 2 kb) |⟨A⟩| / (kb |A|)
    let u = BigUint::from(ka + 2 * kb) * &span.size;
    let w = BigUint::from(kb) * BigUint::from(set.len());
    let holds = u.pow(kb as u32) <= BigUint::from(p).pow(ka as u32) * w.pow(kb as u32);
    Ok(FminusCheck {
        p,
        size: set.len(),
        diff: d,
        k,
        span_size: span.size,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashMap, HashSet};

    fn f(p: u64, n: usize) -> GroupSpec {
        GroupSpec::vector_space(p, n).unwrap()
    }

    fn pt(g: &GroupSpec, c: &[u64]) -> usize {
        g.index(&crate::groups::Element::new(c.to_vec())).unwrap()
    }

    /// Fixed-point oracle: brackets `2^P p^(a/b)` between consecutive integers by
    /// an integer `b`-th root and compares `2^P (K + 2) |⟨A⟩| / |A|` against them.
    fn fminus_oracle(g: &GroupSpec, a: &[usize]) -> bool {
        let p = g.field_characteristic().unwrap();
        let prec = 96usize;
        let d = difference_size(g, a);
        let k = Ratio::new(d as u64, a.len() as u64);
        let (ka, kb) = (*k.numer(), *k.denom());
        let scaled = BigUint::from(p).pow(ka as u32) << (prec * kb as usize);
        let lower = scaled.nth_root(kb as u32);
        let span = affine_span(g, a).unwrap().size;
        let num = (BigUint::from(ka + 2 * kb) * span) << prec;
        let den = BigUint::from(kb) * BigUint::from(a.len());
        if num <= &lower * &den {
            true
        } else if num >= (&lower + 1u32) * &den {
            false
        } else {
            panic!("oracle precision too low")
        }
    }

    #[test]
    fn segment_and_compress_examples() {
        let g = f(3, 1);
        assert!(initial_segment(&g, 0, 1, 0).unwrap().is_empty());
        assert_eq!(initial_segment(&g, 2, 1, 2).unwrap(), vec![0, 1]);
        let mut full = initial_segment(&g, 0, 1, 3).unwrap();
        full.sort_unstable();
        assert_eq!(full, vec![0, 1, 2]);
        assert_eq!(compress(&g, &[1, 2], 1).unwrap(), vec![0, 1]);

        let g = f(3, 2);
        let a = [pt(&g, &[2, 0]), pt(&g, &[1, 1])];
        let want = {
            let mut w = vec![pt(&g, &[0, 0]), pt(&g, &[0, 1])];
            w.sort_unstable();
            w
        };
        assert_eq!(compress(&g, &a, pt(&g, &[1, 0])).unwrap(), want);
        assert!(compress(&g, &a, pt(&g, &[2, 0])).is_err());
    }

    #[test]
    fn star_compressed_examples() {
        let g = f(3, 2);
        assert!(is_star_compressed(&g, &[0, 1, 2, 3]).unwrap());
        let a = [pt(&g, &[2, 0]), pt(&g, &[1, 1])];
        // only v = (1,1) has e_2 - v = (2,0) in A
        assert_eq!(qualifying_directions(&g, &a), vec![pt(&g, &[1, 1])]);
        assert!(!is_star_compressed(&g, &a).unwrap());
        let basis = [0, pt(&g, &[1, 0]), pt(&g, &[0, 1]), pt(&g, &[1, 1])];
        let s = star_compress(&g, &basis).unwrap();
        assert!(is_star_compressed(&g, &s.set).unwrap());
        let whole: Vec<usize> = (0..9).collect();
        assert_eq!(star_compress(&g, &whole).unwrap().set, whole);
        assert!(star_compress(&g, &[0, 1]).is_err());
    }

    #[test]
    fn affine_span_examples() {
        let g = f(5, 2);
        assert_eq!(affine_span(&g, &[7]).unwrap().size, BigUint::from(1u32));
        assert_eq!(affine_span(&g, &[0, 1]).unwrap().size, BigUint::from(5u32));
        assert_eq!(affine_span(&g, &[0, 1, 5]).unwrap().size, BigUint::from(25u32));
        let g = f(3, 3);
        let a = [pt(&g, &[1, 1, 0]), pt(&g, &[2, 2, 0]), pt(&g, &[0, 0, 0])];
        let s = affine_span(&g, &a).unwrap();
        assert_eq!(s.dim, 1);
    }

    #[test]
    fn fminus_examples() {
        let g = f(3, 2);
        let full = fminus_bound_check(&g, &(0..9).collect::<Vec<_>>()).unwrap();
        assert!(full.holds);
        assert_eq!(full.k, Ratio::from_integer(1));
        let a = [0, pt(&g, &[1, 0]), pt(&g, &[0, 1])];
        let chk = fminus_bound_check(&g, &a).unwrap();
        assert_eq!((chk.diff, chk.span_size.clone()), (7, BigUint::from(9u32)));
        assert_eq!(chk.k, Ratio::new(7, 3));
        // 13^3 = 2197 > 3^7 = 2187
        assert!(!chk.holds);
        assert_eq!(chk.holds, fminus_oracle(&g, &a));
    }

    #[test]
    fn fminus_agrees_with_oracle_on_f3_squared() {
        let g = f(3, 2);
        for mask in 1u32..512 {
            let a: Vec<usize> = (0..9).filter(|i| mask >> i & 1 == 1).collect();
            let chk = fminus_bound_check(&g, &a).unwrap();
            assert_eq!(chk.holds, fminus_oracle(&g, &a), "mask {mask}");
        }
    }

    /// Both sides recomputed from coordinates: compress by sorting each line's
    /// points on the leading coordinate of `v`.
    fn compression_sides_oracle(g: &GroupSpec, a: &[usize], b: &[usize], v: usize) -> (usize, usize) {
        let p = g.field_characteristic().unwrap();
        let l = leading(g, v).unwrap();
        let vc = g.coords(v);
        let comp = |s: &[usize]| -> HashSet<Vec<u64>> {
            let mut lines: HashMap<Vec<u64>, usize> = HashMap::new();
            for &x in s {
                let c = g.coords(x);
                let t = c[l];
                let base: Vec<u64> = c.iter().zip(&vc).map(|(&ci, &vi)| (ci + p * p - t * vi % p) % p).collect();
                *lines.entry(base).or_default() += 1;
            }
            let mut out = HashSet::new();
            for (base, k) in lines {
                for t in 0..k as u64 {
                    out.insert(base.iter().zip(&vc).map(|(&bi, &vi)| (bi + t * vi) % p).collect());
                }
            }
            out
        };
        let minus = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).map(|(&a, &b)| (a + p - b) % p).collect() };
        let (ca, cb) = (comp(a), comp(b));
        let lhs: HashSet<Vec<u64>> = ca.iter().flat_map(|x| cb.iter().map(move |y| minus(x, y))).collect();
        let rhs: HashSet<Vec<u64>> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| minus(&g.coords(x), &g.coords(y))))
            .collect();
        (lhs.len(), rhs.len())
    }

    #[test]
    fn compression_inequality_counterexample() {
        // C_v(A) - C_v(B) meets row 2 in {0,1} ∪ {0,2}, while (A - B) meets it in {0,2}
        let g = f(3, 2);
        let a = [pt(&g, &[0, 2]), pt(&g, &[1, 1]), pt(&g, &[1, 2])];
        let b = [pt(&g, &[1, 0]), pt(&g, &[1, 1]), pt(&g, &[1, 2]), pt(&g, &[2, 2])];
        let chk = compression_inequality_check(&g, &a, &b, pt(&g, &[1, 0])).unwrap();
        assert_eq!((chk.lhs, chk.rhs, chk.holds), (8, 7, false));
        let same = compression_inequality_check(&g, &a, &[0], pt(&g, &[1, 0])).unwrap();
        assert!(same.holds && same.lhs == same.rhs);
    }

    fn random_set(order: usize, bits: u64) -> Vec<usize> {
        let v: Vec<usize> = (0..order).filter(|i| bits >> (i % 64) & 1 == 1).collect();
        if v.is_empty() {
            vec![0]
        } else {
            v
        }
    }

    proptest! {
        #[test]
        fn compress_laws(bits in any::<u64>(), vi in 0usize..100) {
            let g = f(5, 2);
            let a = random_set(25, bits);
            let dirs = directions(&g);
            let v = dirs[vi % dirs.len()];
            let c = compress(&g, &a, v).unwrap();
            prop_assert_eq!(c.len(), a.len());
            prop_assert_eq!(compress(&g, &c, v).unwrap(), c);
        }

        #[test]
        fn compression_sides_match_oracle(ab in any::<u64>(), bb in any::<u64>(), vi in 0usize..100) {
            let g = f(3, 2);
            let a = random_set(9, ab);
            let b = random_set(9, bb >> 7);
            let dirs = directions(&g);
            let v = dirs[vi % dirs.len()];
            let chk = compression_inequality_check(&g, &a, &b, v).unwrap();
            let (lhs, rhs) = compression_sides_oracle(&g, &a, &b, v);
            prop_assert_eq!((chk.lhs, chk.rhs), (lhs, rhs));
            prop_assert_eq!(chk.holds, lhs <= rhs);
        }

        #[test]
        fn star_compress_never_grows_differences(bits in any::<u64>()) {
            let g = f(5, 2);
            let mut a = random_set(25, bits);
            a.extend([1, 5]);
            let s = star_compress(&g, &a).unwrap();
            prop_assert!(is_star_compressed(&g, &s.set).unwrap());
            prop_assert!(difference_size(&g, &s.set) <= difference_size(&g, &a));
            prop_assert!(s.set.contains(&1) && s.set.contains(&5));
        }
    }
}
