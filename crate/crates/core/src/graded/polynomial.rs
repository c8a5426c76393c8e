use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{structural, Result};
use crate::graded::{CoefficientDomain, Degree, GeneratorTable};

/// Exponent vector over a generator table (dense, one slot per generator).
///
/// Ordering is lexicographic on the exponent vector, which together with the
/// table order gives the canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn generator(len: usize, i: usize) -> Self {
        let mut e = vec![0; len];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_exponent(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn degree(&self, table: &GeneratorTable) -> Degree {
        let mut d = 0i64;
        for (i, &e) in self.0.iter().enumerate() {
            d += e as i64 * table.degree(i).0;
        }
        Degree(d)
    }

    /// Weighted exponent sum.
    pub fn weight(&self, weights: &[u64]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum()
    }

    /// True when some odd generator occurs with exponent at least two.
    pub fn has_odd_square(&self, odd: &[bool]) -> bool {
        self.0.iter().zip(odd).any(|(&e, &o)| o && e >= 2)
    }

    /// Product in canonical order together with the Koszul sign of the
    /// reordering (`true` means negative).
    pub fn mul_signed(&self, other: &Monomial, odd: &[bool]) -> (Monomial, bool) {
        debug_assert_eq!(self.0.len(), other.0.len());
        // Each odd factor of `other` moves left past every odd factor of
        // `self` with a larger index.
        let mut suffix = 0u64;
        let mut parity = 0u64;
        for i in (0..self.0.len()).rev() {
            if odd[i] {
                parity += other.0[i] as u64 * suffix;
                suffix += self.0[i] as u64;
            }
        }
        let exps = self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect();
        (Monomial(exps), parity % 2 == 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Split into the first `k` exponents and the rest.
    pub fn split_at(&self, k: usize) -> (Monomial, Monomial) {
        (Monomial(self.0[..k].to_vec()), Monomial(self.0[k..].to_vec()))
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }
}

/// A free Dirac algebra: graded-commutative polynomials over a base domain on a
/// generator table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    domain: CoefficientDomain,
    table: GeneratorTable,
    odd: Vec<bool>,
}

impl PolyRing {
    pub fn new(domain: CoefficientDomain, table: GeneratorTable) -> Arc<Self> {
        let odd = table.iter().map(|g| g.degree.is_odd()).collect();
        Arc::new(PolyRing { domain, table, odd })
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn ngens(&self) -> usize {
        self.table.len()
    }

    pub fn odd_mask(&self) -> &[bool] {
        &self.odd
    }

    /// Canonical coefficient for `c` attached to `mono`.
    ///
    /// Over an odd prime field, monomials with a repeated odd generator vanish.
    /// Over Z such monomials are 2-torsion and their coefficient is kept mod 2.
    pub fn normalize(&self, mono: &Monomial, c: &BigInt) -> BigInt {
        match self.domain {
            CoefficientDomain::PrimeField { p } => {
                if p != 2 && mono.has_odd_square(&self.odd) {
                    BigInt::zero()
                } else {
                    c.mod_floor(&BigInt::from(p))
                }
            }
            CoefficientDomain::Integers => {
                if mono.has_odd_square(&self.odd) {
                    c.mod_floor(&BigInt::from(2))
                } else {
                    c.clone()
                }
            }
        }
    }

    pub(crate) fn vanishes(&self, mono: &Monomial) -> bool {
        self.domain.kills_odd_squares() && mono.has_odd_square(&self.odd)
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Element of a free Dirac algebra, kept in canonical form.
#[derive(Clone, Debug)]
pub struct GradedPolynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl GradedPolynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        GradedPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, BigInt::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: impl Into<BigInt>) -> Self {
        Self::monomial(ring, Monomial::one(ring.ngens()), c)
    }

    pub fn generator(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::generator(ring.ngens(), i), 1)
    }

    /// Generator by name; panics when absent.
    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring
            .table()
            .position(name)
            .unwrap_or_else(|| panic!("no generator named {name}"));
        Self::generator(ring, i)
    }

    pub fn monomial(ring: &Arc<PolyRing>, mono: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(mono, c.into());
        p
    }

    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, BigInt> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Constant term (coefficient of the empty monomial).
    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one(self.ring.ngens()))
    }

    /// Adds `c·mono` in place, keeping canonical form.
    pub fn add_term(&mut self, mono: Monomial, c: BigInt) {
        debug_assert_eq!(mono.exponents().len(), self.ring.ngens());
        if c.is_zero() || self.ring.vanishes(&mono) {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                let n = self.ring.normalize(v.key(), &c);
                if !n.is_zero() {
                    v.insert(n);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                let n = self.ring.normalize(o.key(), &sum);
                if n.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    fn check_ring(&self, other: &GradedPolynomial) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(structural!(
                "polynomials live in different rings ({} vs {})",
                self.ring.domain(),
                other.ring.domain()
            ))
        }
    }

    pub fn try_add(&self, other: &GradedPolynomial) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Graded-commutative product with Koszul signs.
    pub fn multiply(&self, other: &GradedPolynomial) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_filtered(other, |_, _| true))
    }

    /// Product that skips every pair of terms rejected by `keep`.
    pub(crate) fn mul_filtered<F>(&self, other: &GradedPolynomial, keep: F) -> Self
    where
        F: Fn(&Monomial, &Monomial) -> bool,
    {
        let odd = self.ring.odd_mask();
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if !keep(m1, m2) {
                    continue;
                }
                let (m, neg) = m1.mul_signed(m2, odd);
                if self.ring.vanishes(&m) {
                    continue;
                }
                let c = c1 * c2;
                let slot = acc.entry(m).or_default();
                if neg {
                    *slot -= c;
                } else {
                    *slot += c;
                }
            }
        }
        let ring = self.ring.clone();
        let terms = acc
            .into_iter()
            .filter_map(|(m, c)| {
                let n = ring.normalize(&m, &c);
                (!n.is_zero()).then_some((m, n))
            })
            .collect();
        GradedPolynomial { ring, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        GradedPolynomial::from_terms(&self.ring, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = GradedPolynomial::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Degree when homogeneous; `None` for zero. Errors on mixed degrees.
    pub fn homogeneous_degree(&self) -> Result<Option<Degree>> {
        let table = self.ring.table();
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(table);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(structural!("element is not homogeneous (degrees {e} and {d})"))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_ok()
    }

    /// The element with its odd-degree part negated: the effect of moving it
    /// past an odd element.
    pub fn parity_twist(&self) -> Self {
        let table = self.ring.table();
        let mut out = self.clone();
        for (m, c) in out.terms.iter_mut() {
            if m.degree(table).is_odd() {
                *c = self.ring.normalize(m, &(-&*c));
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Image under the algebra map sending generator `i` to `images[i]`.
    ///
    /// The images must be homogeneous of the same parity as their generators
    /// (or zero), which makes the map respect Koszul signs.
    pub fn map_algebra(&self, images: &[GradedPolynomial], target: &Arc<PolyRing>) -> Result<Self> {
        if images.len() != self.ring.ngens() {
            return Err(structural!(
                "algebra map needs {} generator images, got {}",
                self.ring.ngens(),
                images.len()
            ));
        }
        for (i, img) in images.iter().enumerate() {
            if !img.ring.same_as(target) {
                return Err(structural!("image of generator {i} is not in the target ring"));
            }
            if let Some(d) = img.homogeneous_degree()? {
                if d.is_odd() != self.ring.table().degree(i).is_odd() {
                    return Err(structural!(
                        "image of generator {:?} has the wrong parity",
                        self.ring.table().get(i).name
                    ));
                }
            }
        }
        let mut powers: Vec<Vec<GradedPolynomial>> = images
            .iter()
            .map(|img| vec![GradedPolynomial::one(target), img.clone()])
            .collect();
        let mut out = GradedPolynomial::zero(target);
        for (m, c) in &self.terms {
            let mut prod = GradedPolynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
                if prod.is_zero() {
                    break;
                }
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc);
            }
        }
        Ok(out)
    }

    /// Reinterprets this element in a ring whose table extends this one's
    /// (generators appended after the existing ones).
    pub fn embed_prefix(&self, target: &Arc<PolyRing>) -> Self {
        let n = target.ngens();
        GradedPolynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                e.resize(n, 0);
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    }
}

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_add(&-rhs).expect("ring mismatch in subtraction")
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.multiply(rhs).expect("ring mismatch in multiplication")
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let table = self.ring.table();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(table.get(i).name.clone()),
                    _ => factors.push(format!("{}^{}", table.get(i).name, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(domain: CoefficientDomain, gens: &[(&str, i64)]) -> Arc<PolyRing> {
        let table = GeneratorTable::new(gens.iter().map(|&(n, d)| (n, Degree(d)))).unwrap();
        PolyRing::new(domain, table)
    }

    #[test]
    fn odd_square_vanishes_over_f3() {
        let r = ring(CoefficientDomain::prime_field(3).unwrap(), &[("tau", 1)]);
        let t = GradedPolynomial::var(&r, "tau");
        assert!((&t * &t).is_zero());
    }

    #[test]
    fn odd_square_is_two_torsion_over_z() {
        let r = ring(CoefficientDomain::Integers, &[("x", 1)]);
        let x = GradedPolynomial::var(&r, "x");
        let sq = &x * &x;
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coefficient(&Monomial::from_exponents(vec![2])), BigInt::from(1));
        assert!(sq.scale(&BigInt::from(2)).is_zero());
        assert!((&sq + &sq).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let r = ring(CoefficientDomain::prime_field(3).unwrap(), &[("a", 1), ("b", 1)]);
        let a = GradedPolynomial::var(&r, "a");
        let b = GradedPolynomial::var(&r, "b");
        assert_eq!(&b * &a, -&(&a * &b));
        assert_eq!((&b * &a).coefficient(&Monomial::from_exponents(vec![1, 1])), BigInt::from(2));
    }

    #[test]
    fn even_generators_commute() {
        let r = ring(CoefficientDomain::Integers, &[("a", 1), ("u", 2)]);
        let a = GradedPolynomial::var(&r, "a");
        let u = GradedPolynomial::var(&r, "u");
        assert_eq!(&u * &a, &a * &u);
    }

    #[test]
    fn ring_mismatch_is_structural() {
        let r1 = ring(CoefficientDomain::Integers, &[("x", 2)]);
        let r2 = ring(CoefficientDomain::prime_field(3).unwrap(), &[("x", 2)]);
        let x1 = GradedPolynomial::var(&r1, "x");
        let x2 = GradedPolynomial::var(&r2, "x");
        assert!(matches!(x1.multiply(&x2), Err(crate::Error::Structural(_))));
    }

    #[test]
    fn parity_twist_negates_odd_part() {
        let r = ring(CoefficientDomain::Integers, &[("a", 1), ("u", 2)]);
        let a = GradedPolynomial::var(&r, "a");
        let u = GradedPolynomial::var(&r, "u");
        let f = &a + &u;
        assert_eq!(f.parity_twist(), &u - &a);
    }

    #[test]
    fn algebra_map_respects_signs() {
        let r = ring(CoefficientDomain::prime_field(5).unwrap(), &[("a", 1), ("b", 1)]);
        let a = GradedPolynomial::var(&r, "a");
        let b = GradedPolynomial::var(&r, "b");
        // swap a and b
        let ab = &a * &b;
        let swapped = ab.map_algebra(&[b.clone(), a.clone()], &r).unwrap();
        assert_eq!(swapped, &b * &a);
        assert_eq!(swapped, -&ab);
    }
}
