//! Finite abelian groups `Z_{n1} x ... x Z_{nk}` with flat-index arithmetic.
//!
//! Elements are stored as canonical coordinate vectors, and every element also
//! has a flat index in `0..N` (mixed radix, coordinate 0 least significant).
//! Downstream modules work almost exclusively with flat indices.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, structural, Error, Result};

/// A finite abelian group given by its cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    exponent: u64,
}

/// A group element in canonical coordinates (`0 <= coords[i] < factors[i]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Element { coords }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return structural("a group needs at least one cyclic factor");
        }
        if let Some(bad) = factors.iter().find(|&&f| f < 2) {
            return structural(format!("cyclic factor {bad} is smaller than 2"));
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut order: usize = 1;
        for &f in &factors {
            strides.push(order);
            order = order
                .checked_mul(f as usize)
                .ok_or_else(|| Error::Structural("group order overflows".into()))?;
        }
        let exponent = factors.iter().fold(1u64, |acc, &f| lcm(acc, f));
        Ok(GroupSpec {
            factors,
            strides,
            order,
            exponent,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The vector space `F_p^n`.
    pub fn vector_space(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if n == 0 {
            return structural("dimension must be positive");
        }
        Self::new(vec![p; n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `Some(p)` when the group is `F_p^n`.
    pub fn field_characteristic(&self) -> Option<u64> {
        let p = self.factors[0];
        (self.factors.iter().all(|&f| f == p) && is_prime(p)).then_some(p)
    }

    pub fn element(&self, index: usize) -> Element {
        Element::new(self.coords(index))
    }

    pub fn coords(&self, index: usize) -> Vec<u64> {
        debug_assert!(index < self.order);
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| ((index / s) as u64) % f)
            .collect()
    }

    /// Coordinate `i` of the element with the given flat index.
    #[inline]
    pub fn coord(&self, index: usize, i: usize) -> u64 {
        ((index / self.strides[i]) as u64) % self.factors[i]
    }

    pub fn index(&self, e: &Element) -> Result<usize> {
        self.check(e)?;
        Ok(self.index_unchecked(&e.coords))
    }

    pub(crate) fn index_unchecked(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    /// Flat index of the unit vector `e_i`.
    pub fn unit(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn check(&self, e: &Element) -> Result<()> {
        if e.coords.len() != self.factors.len() {
            return structural(format!(
                "element has {} coordinates, group {} has {}",
                e.coords.len(),
                self,
                self.factors.len()
            ));
        }
        for (c, f) in e.coords.iter().zip(&self.factors) {
            if c >= f {
                return structural(format!("coordinate {c} is not reduced mod {f}"));
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn zero(&self) -> Element {
        Element::new(vec![0; self.factors.len()])
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((x, y), f)| (x + y) % f)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(x, f)| (f - x) % f)
                .collect(),
        ))
    }

    pub fn scalar_mul(&self, t: i64, a: &Element) -> Result<Element> {
        self.check(a)?;
        let t = t.rem_euclid(self.exponent as i64) as u64;
        Ok(Element::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(x, f)| mul_mod(t % f, *x, *f))
                .collect(),
        ))
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            let x = (a / s) % f;
            let y = (b / s) % f;
            let z = x + y;
            out += if z >= f { z - f } else { z } * s;
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            let x = (a / s) % f;
            out += if x == 0 { 0 } else { f - x } * s;
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            let x = (a / s) % f;
            let y = (b / s) % f;
            out += if x >= y { x - y } else { x + f - y } * s;
        }
        out
    }

    #[inline]
    pub fn mul_idx(&self, t: i64, a: usize) -> usize {
        let t = t.rem_euclid(self.exponent as i64) as u64;
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let x = ((a / s) as u64) % f;
            out += mul_mod(t % f, x, f) as usize * s;
        }
        out
    }

    /// Additive order of the element with flat index `a`.
    pub fn element_order(&self, a: usize) -> u64 {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| {
                let x = ((a / s) as u64) % f;
                f / gcd(f, x)
            })
            .fold(1, lcm)
    }

    /// Parse an element written as comma-separated coordinates.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let coords = text
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {c:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let e = Element::new(coords);
        self.check(&e)?;
        Ok(e)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.factors.len() {
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == self.factors[i] {
                j += 1;
            }
            if !first {
                write!(f, "x")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "Z{}", self.factors[i])?;
            } else {
                write!(f, "Z{}^{}", self.factors[i], j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `Z5^4`, `Z35`, `F13^2`, `Z2xZ4` and products of these.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for term in s.trim().split(['x', '*']) {
            let term = term.trim();
            let (kind, rest) = term.split_at(term.chars().next().map_or(0, |c| c.len_utf8()));
            let (base, power) = match rest.split_once('^') {
                Some((b, p)) => (b, p),
                None => (rest, "1"),
            };
            let base: u64 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad group term {term:?}")))?;
            let power: usize = power
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
            match kind {
                "Z" | "z" => {}
                "F" | "f" => {
                    if !is_prime(base) {
                        return Err(Error::Parse(format!("F{base}: {base} is not prime")));
                    }
                }
                _ => return Err(Error::Parse(format!("group term {term:?} must start with Z or F"))),
            }
            if power == 0 {
                return Err(Error::Parse(format!("zero exponent in {term:?}")));
            }
            factors.extend(std::iter::repeat(base).take(power));
        }
        GroupSpec::new(factors)
    }
}

/// The class `{x, -x}` of a nonzero element; `partner` is `None` when `x = -x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignClass {
    pub rep: usize,
    pub partner: Option<usize>,
}

impl SignClass {
    pub fn members(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.rep).chain(self.partner)
    }

    pub fn len(&self) -> usize {
        1 + usize::from(self.partner.is_some())
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Partition of `G \ {0}` into sign classes, ordered by representative.
#[derive(Clone, Debug)]
pub struct SignClassPartition {
    classes: Vec<SignClass>,
    class_of: Vec<u32>,
}

const NO_CLASS: u32 = u32::MAX;

impl SignClassPartition {
    pub fn classes(&self) -> &[SignClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class id of a nonzero element; `None` for zero.
    pub fn class_of(&self, index: usize) -> Option<usize> {
        match self.class_of[index] {
            NO_CLASS => None,
            c => Some(c as usize),
        }
    }
}

pub fn sign_classes(g: &GroupSpec) -> SignClassPartition {
    let n = g.order();
    let mut class_of = vec![NO_CLASS; n];
    let mut classes = Vec::with_capacity(n / 2 + 1);
    for x in 1..n {
        if class_of[x] != NO_CLASS {
            continue;
        }
        let y = g.neg_idx(x);
        let id = classes.len() as u32;
        class_of[x] = id;
        let partner = if y == x {
            None
        } else {
            class_of[y] = id;
            Some(y)
        };
        classes.push(SignClass { rep: x, partner });
    }
    SignClassPartition { classes, class_of }
}

/// A cycle of sign classes under `class -> t * class`, listed from its smallest class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationOrbit {
    pub multiplier: u64,
    pub classes: Vec<usize>,
}

pub fn dilation_orbits(g: &GroupSpec, t: u64) -> Result<Vec<DilationOrbit>> {
    let n = g.order() as u64;
    if gcd(t % n, n) != 1 {
        return domain(format!("multiplier {t} is not coprime to |G| = {n}"));
    }
    let part = sign_classes(g);
    Ok(dilation_orbits_in(g, &part, t))
}

pub(crate) fn dilation_orbits_in(g: &GroupSpec, part: &SignClassPartition, t: u64) -> Vec<DilationOrbit> {
    let mut seen = vec![false; part.len()];
    let mut orbits = Vec::new();
    for start in 0..part.len() {
        if seen[start] {
            continue;
        }
        let mut classes = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            classes.push(c);
            let image = g.mul_idx(t as i64, part.classes[c].rep);
            c = part.class_of(image).expect("dilation by a unit keeps elements nonzero");
        }
        debug_assert_eq!(c, start, "dilation orbits are cycles");
        orbits.push(DilationOrbit {
            multiplier: t,
            classes,
        });
    }
    orbits
}

/// A line through the origin of `F_p^n`: `points[a - 1] = a * rep` for `a = 1..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub rep: usize,
    pub points: Vec<usize>,
}

pub fn lines_through_origin(g: &GroupSpec) -> Result<Vec<Line>> {
    let Some(p) = g.field_characteristic() else {
        return domain(format!("{g} is not a vector space over a prime field"));
    };
    let mut seen = vec![false; g.order()];
    let mut lines = Vec::new();
    for x in 1..g.order() {
        if seen[x] {
            continue;
        }
        let points: Vec<usize> = (1..p).map(|a| g.mul_idx(a as i64, x)).collect();
        for &y in &points {
            seen[y] = true;
        }
        lines.push(Line { rep: x, points });
    }
    Ok(lines)
}

/// Smallest `alpha` in `F_p` whose multiplicative order is exactly `m`.
pub fn find_scalar_of_order(p: u64, m: u64) -> Result<u64> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if m == 0 || (p - 1) % m != 0 {
        return domain(format!("{m} does not divide p - 1 = {}", p - 1));
    }
    (1..p)
        .find(|&a| multiplicative_order(a, p) == m)
        .ok_or_else(|| Error::Domain(format!("no element of order {m} mod {p}")))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Order of `a` in `(Z/p)^*`, or 0 when `a` is not a unit.
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    let a = a % p;
    if a == 0 || gcd(a, p) != 1 {
        return 0;
    }
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, p);
        k += 1;
    }
    k
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: u64) -> Result<u64> {
    find_scalar_of_order(p, p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let g = z(5);
        assert_eq!(g.neg(&Element::new(vec![2])).unwrap(), Element::new(vec![3]));
        let f = GroupSpec::vector_space(2, 3).unwrap();
        assert_eq!(
            f.add(&Element::new(vec![1, 0, 1]), &Element::new(vec![0, 1, 1])).unwrap(),
            Element::new(vec![1, 1, 0])
        );
        let g6 = z(6);
        assert_eq!(g6.scalar_mul(4, &Element::new(vec![5])).unwrap(), Element::new(vec![2]));
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let g = z(5);
        assert!(matches!(
            g.add(&Element::new(vec![1, 0]), &Element::new(vec![1])),
            Err(Error::Structural(_))
        ));
        assert!(matches!(g.neg(&Element::new(vec![5])), Err(Error::Structural(_))));
    }

    #[test]
    fn parses_group_specs() {
        let cases = [
            ("Z5^4", vec![5, 5, 5, 5]),
            ("Z35", vec![35]),
            ("F13^2", vec![13, 13]),
            ("Z2xZ4", vec![2, 4]),
            ("Z5xZ25", vec![5, 25]),
        ];
        for (text, factors) in cases {
            let g: GroupSpec = text.parse().unwrap();
            assert_eq!(g.factors(), &factors[..], "{text}");
        }
        assert!("F6^2".parse::<GroupSpec>().is_err());
        assert!("Q5".parse::<GroupSpec>().is_err());
        assert!("Z1".parse::<GroupSpec>().is_err());
        let g: GroupSpec = "Z2xZ4".parse().unwrap();
        assert_eq!(g.to_string().parse::<GroupSpec>().unwrap(), g);
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.order(), 8);
    }

    #[test]
    fn sign_class_examples() {
        let reps = |g: &GroupSpec| {
            sign_classes(g)
                .classes()
                .iter()
                .map(|c| c.members().collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(reps(&z(5)), vec![vec![1, 4], vec![2, 3]]);
        assert_eq!(reps(&z(7)), vec![vec![1, 6], vec![2, 5], vec![3, 4]]);
        let f = GroupSpec::vector_space(2, 2).unwrap();
        assert_eq!(reps(&f), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn dilation_orbit_examples() {
        let orbits = dilation_orbits(&z(5), 2).unwrap();
        assert_eq!(orbits, vec![DilationOrbit { multiplier: 2, classes: vec![0, 1] }]);
        let orbits = dilation_orbits(&z(7), 2).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].classes.len(), 3);
        let orbits = dilation_orbits(&z(35), 2).unwrap();
        assert_eq!(orbits.iter().map(|o| o.classes.len()).sum::<usize>(), 17);
        assert!(matches!(dilation_orbits(&z(6), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn line_examples() {
        let lines = lines_through_origin(&GroupSpec::vector_space(3, 1).unwrap()).unwrap();
        assert_eq!(lines, vec![Line { rep: 1, points: vec![1, 2] }]);
        let lines = lines_through_origin(&GroupSpec::vector_space(3, 2).unwrap()).unwrap();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.points.len() == 2));
        let lines = lines_through_origin(&GroupSpec::vector_space(5, 2).unwrap()).unwrap();
        assert_eq!(lines.len(), 6);
        assert!(lines.iter().all(|l| l.points.len() == 4));
        assert!(lines_through_origin(&z(6)).is_err());
        assert!(lines_through_origin(&GroupSpec::new(vec![3, 9]).unwrap()).is_err());
    }

    #[test]
    fn scalar_of_order_examples() {
        assert_eq!(find_scalar_of_order(5, 4).unwrap(), 2);
        assert_eq!(find_scalar_of_order(13, 4).unwrap(), 5);
        assert_eq!(find_scalar_of_order(7, 2).unwrap(), 6);
        assert!(matches!(find_scalar_of_order(7, 4), Err(Error::Domain(_))));
        for (p, m) in [(13u64, 4u64), (13, 12), (257, 4), (7, 6)] {
            let a = find_scalar_of_order(p, m).unwrap();
            assert_eq!(pow_mod(a, m, p), 1);
            assert!((1..m).all(|j| pow_mod(a, j, p) != 1));
        }
    }

    fn assert_partition(g: &GroupSpec) {
        let part = sign_classes(g);
        let mut hits = vec![0u32; g.order()];
        for c in part.classes() {
            for m in c.members() {
                hits[m] += 1;
            }
            match c.partner {
                Some(y) => assert_eq!(g.neg_idx(c.rep), y),
                None => assert_eq!(g.add_idx(c.rep, c.rep), 0),
            }
        }
        assert_eq!(hits[0], 0);
        assert!(hits[1..].iter().all(|&h| h == 1));
        if g.order() % 2 == 1 {
            assert!(part.classes().iter().all(|c| c.len() == 2));
        }
        for t in [2u64, 3, 7] {
            let Ok(orbits) = dilation_orbits(g, t) else { continue };
            let mut seen = vec![0u32; part.len()];
            for o in &orbits {
                for (k, &c) in o.classes.iter().enumerate() {
                    seen[c] += 1;
                    let next = o.classes[(k + 1) % o.classes.len()];
                    let image = g.mul_idx(t as i64, part.classes()[c].rep);
                    assert_eq!(part.class_of(image), Some(next));
                }
                assert_eq!(o.classes[0], *o.classes.iter().min().unwrap());
            }
            assert!(seen.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn partitions_are_exact_exhaustively() {
        for text in ["Z5", "Z35", "Z5xZ25", "F7^3", "Z2xZ4", "F2^10", "Z1009", "Z5^4", "F3^5", "Z2^3xZ9", "Z4^8"] {
            assert_partition(&text.parse().unwrap());
        }
    }

    fn group_strategy() -> impl Strategy<Value = GroupSpec> {
        prop::collection::vec(2u64..12, 1..4).prop_map(|f| GroupSpec::new(f).unwrap())
    }

    proptest! {
        #[test]
        fn element_laws(g in group_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), t in -50i64..50) {
            let n = g.order() as u64;
            let (a, b, c) = ((a % n) as usize, (b % n) as usize, (c % n) as usize);
            prop_assert_eq!(g.add_idx(a, g.neg_idx(a)), 0);
            prop_assert_eq!(g.mul_idx(g.exponent() as i64, a), 0);
            prop_assert_eq!(g.add_idx(a, b), g.add_idx(b, a));
            prop_assert_eq!(g.add_idx(g.add_idx(a, b), c), g.add_idx(a, g.add_idx(b, c)));
            prop_assert_eq!(g.sub_idx(a, b), g.add_idx(a, g.neg_idx(b)));
            // scalar multiplication agrees with repeated addition
            let reps = t.rem_euclid(g.exponent() as i64);
            let mut acc = 0;
            for _ in 0..reps { acc = g.add_idx(acc, a); }
            prop_assert_eq!(g.mul_idx(t, a), acc);
            // element and index views agree
            let (ea, eb) = (g.element(a), g.element(b));
            prop_assert_eq!(g.index(&g.add(&ea, &eb).unwrap()).unwrap(), g.add_idx(a, b));
            prop_assert_eq!(g.index(&g.scalar_mul(t, &ea).unwrap()).unwrap(), g.mul_idx(t, a));
        }
    }
}
