use std::collections::BTreeSet;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{domain, structural, Result};
use crate::graded::{koszul_sign, is_prime, Degree, GradedPolynomial, PolyRing};
use crate::linalg::FpMatrix;

/// Minimal interface of a Dirac ring used by the flatness checks.
pub trait GradedRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Degree of a homogeneous element (`None` for zero); error otherwise.
    fn degree(&self, a: &Self::Elem) -> Result<Option<Degree>>;
}

/// Membership test for a sub-Dirac ring `A ⊂ B`.
pub trait Subring<R: GradedRing> {
    fn contains(&self, ring: &R, a: &R::Elem) -> bool;
}

impl GradedRing for Arc<PolyRing> {
    type Elem = GradedPolynomial;

    fn zero(&self) -> GradedPolynomial {
        GradedPolynomial::zero(self)
    }
    fn add(&self, a: &GradedPolynomial, b: &GradedPolynomial) -> GradedPolynomial {
        a + b
    }
    fn mul(&self, a: &GradedPolynomial, b: &GradedPolynomial) -> GradedPolynomial {
        a * b
    }
    fn is_zero(&self, a: &GradedPolynomial) -> bool {
        a.is_zero()
    }
    fn degree(&self, a: &GradedPolynomial) -> Result<Option<Degree>> {
        a.homogeneous_degree()
    }
}

/// Subring of a free Dirac algebra generated by some of its generators
/// (no generators: the base scalars).
#[derive(Debug, Clone, Default)]
pub struct GeneratorSubring {
    pub generators: BTreeSet<usize>,
}

impl Subring<Arc<PolyRing>> for GeneratorSubring {
    fn contains(&self, _ring: &Arc<PolyRing>, a: &GradedPolynomial) -> bool {
        a.terms().all(|(m, _)| {
            m.exponents()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || self.generators.contains(&i))
        })
    }
}

/// Finite-dimensional graded-commutative F_p-algebra given by structure
/// constants on a homogeneous basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    p: u64,
    names: Vec<String>,
    degrees: Vec<Degree>,
    /// products[i][j] = e_i · e_j as a coordinate vector
    products: Vec<Vec<Vec<u64>>>,
    unit: Vec<u64>,
}

impl FiniteAlgebra {
    /// Explicit structure constants; validated for homogeneity, unit,
    /// associativity and graded commutativity.
    pub fn new(
        p: u64,
        names: Vec<String>,
        degrees: Vec<Degree>,
        products: Vec<Vec<Vec<u64>>>,
        unit: Vec<u64>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(domain!("{p} is not prime"));
        }
        let n = degrees.len();
        if names.len() != n || products.len() != n || unit.len() != n {
            return Err(structural!("structure constants do not match basis size {n}"));
        }
        for row in &products {
            if row.len() != n || row.iter().any(|v| v.len() != n) {
                return Err(structural!("products table must be {n}x{n}x{n}"));
            }
        }
        let alg = FiniteAlgebra {
            p,
            names,
            degrees,
            products: products
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect())
                .collect(),
            unit: unit.into_iter().map(|x| x % p).collect(),
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, vec!["1".into()], vec![Degree(0)], vec![vec![vec![1]]], vec![1])
    }

    /// The split algebra F_p × ... × F_p (n factors) on its idempotents.
    pub fn split(p: u64, n: usize) -> Result<Self> {
        let mut products = vec![vec![vec![0; n]; n]; n];
        for (i, row) in products.iter_mut().enumerate() {
            row[i][i] = 1;
        }
        Self::new(
            p,
            (0..n).map(|i| format!("e{i}")).collect(),
            vec![Degree(0); n],
            products,
            vec![1; n],
        )
    }

    /// F_p[x]/(x^nilpotency) with x of degree `var_degree`.
    pub fn truncated_polynomial(p: u64, var_degree: Degree, nilpotency: usize) -> Result<Self> {
        if nilpotency == 0 {
            return Err(domain!("nilpotency order must be positive"));
        }
        let n = nilpotency;
        let mut products = vec![vec![vec![0; n]; n]; n];
        for (a, row) in products.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                if a + b < n {
                    v[a + b] = 1;
                }
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        Self::new(
            p,
            (0..n).map(|i| format!("x^{i}")).collect(),
            (0..n).map(|i| var_degree * i as i64).collect(),
            products,
            unit,
        )
    }

    /// Tensor product with the Koszul sign `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`.
    pub fn tensor(&self, other: &FiniteAlgebra) -> Result<Self> {
        if self.p != other.p {
            return Err(structural!("cannot tensor algebras over F_{} and F_{}", self.p, other.p));
        }
        let (n, m) = (self.dim(), other.dim());
        let idx = |i: usize, j: usize| i * m + j;
        let mut products = vec![vec![vec![0u64; n * m]; n * m]; n * m];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        let sign = koszul_sign(other.degrees[j1], self.degrees[i2]);
                        let a = &self.products[i1][i2];
                        let b = &other.products[j1][j2];
                        let out = &mut products[idx(i1, j1)][idx(i2, j2)];
                        for (ia, &ca) in a.iter().enumerate() {
                            if ca == 0 {
                                continue;
                            }
                            for (jb, &cb) in b.iter().enumerate() {
                                if cb == 0 {
                                    continue;
                                }
                                let mut v = ca * cb % self.p;
                                if sign < 0 {
                                    v = (self.p - v) % self.p;
                                }
                                let slot = &mut out[idx(ia, jb)];
                                *slot = (*slot + v) % self.p;
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![0; n * m];
        for i in 0..n {
            for j in 0..m {
                unit[idx(i, j)] = self.unit[i] * other.unit[j] % self.p;
            }
        }
        let names = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}⊗{}", self.names[i], other.names[j]))
            .collect();
        let degrees = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| self.degrees[i] + other.degrees[j])
            .collect();
        Self::new(self.p, names, degrees, products, unit)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let prod = &self.products[i][j];
                let target = self.degrees[i] + self.degrees[j];
                if prod.iter().enumerate().any(|(k, &c)| c != 0 && self.degrees[k] != target) {
                    return Err(structural!("product e{i}·e{j} is not homogeneous of degree {target}"));
                }
                let swapped = &self.products[j][i];
                let sign = koszul_sign(self.degrees[i], self.degrees[j]);
                for k in 0..n {
                    let expect = if sign < 0 { (self.p - swapped[k]) % self.p } else { swapped[k] };
                    if prod[k] != expect {
                        return Err(structural!("basis elements {i} and {j} do not Koszul-commute"));
                    }
                }
            }
        }
        if let Some(d) = self.degree(&self.unit)? {
            if d != Degree::ZERO {
                return Err(structural!("unit must have degree 0"));
            }
        }
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(structural!("unit does not act as identity on e{i}"));
            }
            for j in 0..n {
                let ej = self.basis_vector(j);
                let eij = self.mul(&e, &ej);
                for k in 0..n {
                    let ek = self.basis_vector(k);
                    if self.mul(&eij, &ek) != self.mul(&e, &self.mul(&ej, &ek)) {
                        return Err(structural!("multiplication is not associative on ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Structure constants for `e_i · e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[u64] {
        &self.products[i][j]
    }

    pub fn basis_in_degree(&self, d: Degree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| x * (c % self.p) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }
}

impl GradedRing for FiniteAlgebra {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut out = vec![0; self.dim()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = x * y % self.p;
                for (o, &s) in out.iter_mut().zip(&self.products[i][j]) {
                    *o = (*o + c * s) % self.p;
                }
            }
        }
        out
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn degree(&self, a: &Vec<u64>) -> Result<Option<Degree>> {
        if a.len() != self.dim() {
            return Err(structural!("element has {} coordinates, algebra has dimension {}", a.len(), self.dim()));
        }
        let mut deg = None;
        for (i, &x) in a.iter().enumerate() {
            if x % self.p == 0 {
                continue;
            }
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => {
                    return Err(structural!("element is not homogeneous"));
                }
                _ => {}
            }
        }
        Ok(deg)
    }
}

/// Sub-F_p-algebra spanned by homogeneous vectors.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    span: Vec<Vec<u64>>,
}

impl Subalgebra {
    pub fn new(alg: &FiniteAlgebra, span: Vec<Vec<u64>>) -> Result<Self> {
        for v in &span {
            alg.degree(v)?;
        }
        Ok(Subalgebra { span })
    }

    /// Image of the prime field under the unit map.
    pub fn unit_image(alg: &FiniteAlgebra) -> Self {
        Subalgebra { span: vec![alg.unit().to_vec()] }
    }

    /// Independent basis of the degree-`d` piece.
    pub fn basis_in_degree(&self, alg: &FiniteAlgebra, d: Degree) -> Vec<Vec<u64>> {
        let vs: Vec<Vec<u64>> = self
            .span
            .iter()
            .filter(|v| matches!(alg.degree(v), Ok(Some(e)) if e == d))
            .cloned()
            .collect();
        if vs.is_empty() {
            return vs;
        }
        let mut m = FpMatrix::from_columns(alg.p(), alg.dim(), &vs).transpose();
        let pivots = m.rref_in_place();
        (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
    }

    pub fn degrees(&self, alg: &FiniteAlgebra) -> BTreeSet<Degree> {
        self.span.iter().filter_map(|v| alg.degree(v).ok().flatten()).collect()
    }
}

impl Subring<FiniteAlgebra> for Subalgebra {
    fn contains(&self, alg: &FiniteAlgebra, a: &Vec<u64>) -> bool {
        let Ok(deg) = alg.degree(a) else { return false };
        let Some(d) = deg else { return true };
        let basis = self.basis_in_degree(alg, d);
        if basis.is_empty() {
            return false;
        }
        FpMatrix::from_columns(alg.p(), alg.dim(), &basis).solve(a).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_algebra_idempotents() {
        let e = FiniteAlgebra::split(3, 2).unwrap();
        let e0 = e.basis_vector(0);
        assert_eq!(e.mul(&e0, &e0), e0);
        assert!(e.is_zero(&e.mul(&e0, &e.basis_vector(1))));
    }

    #[test]
    fn odd_truncated_polynomial_needs_square_zero() {
        assert!(FiniteAlgebra::truncated_polynomial(3, Degree(1), 2).is_ok());
        // x^2 != 0 for odd x violates graded commutativity over F_3
        assert!(FiniteAlgebra::truncated_polynomial(3, Degree(1), 3).is_err());
    }

    #[test]
    fn tensor_of_exterior_algebras_anticommutes() {
        let a = FiniteAlgebra::truncated_polynomial(5, Degree(1), 2).unwrap();
        let t = a.tensor(&a).unwrap();
        // basis order (1⊗1, 1⊗x, x⊗1, x⊗x)
        let x1 = t.basis_vector(2);
        let x2 = t.basis_vector(1);
        let prod = t.mul(&x1, &x2);
        let back = t.mul(&x2, &x1);
        assert_eq!(prod, vec![0, 0, 0, 1]);
        assert_eq!(back, vec![0, 0, 0, 4]);
    }

    #[test]
    fn unit_image_membership() {
        let e = FiniteAlgebra::split(3, 2).unwrap();
        let base = Subalgebra::unit_image(&e);
        assert!(base.contains(&e, &vec![2, 2]));
        assert!(!base.contains(&e, &vec![1, 0]));
    }
}
