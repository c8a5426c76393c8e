//! Truncated multivariate graded power series over a free Dirac algebra.
//!
//! A series lives in a [`SeriesSpace`]: a coefficient ring, an ordered list of
//! variables and an inclusive truncation bound on the weighted degree
//! `Σ e_i·|deg x_i|`. Internally a series is a polynomial in the free algebra
//! on the coefficient generators followed by the variables, so Koszul signs and
//! the torsion normalization over Z come from [`GradedPolynomial`] directly.
//!
//! Variables must have nonzero degree and all variables of one space share a
//! sign. Negative degrees are the natural choice for coordinates on a formal
//! group whose coefficients sit in positive degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{domain, structural, Error, Result};
use crate::graded::{Degree, GeneratorTable, GradedPolynomial, Monomial, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesVariable {
    pub name: String,
    pub degree: Degree,
}

impl SeriesVariable {
    pub fn new(name: impl Into<String>, degree: Degree) -> Self {
        SeriesVariable { name: name.into(), degree }
    }

    pub fn weight(&self) -> u64 {
        self.degree.0.unsigned_abs()
    }
}

#[derive(Debug)]
pub struct SeriesSpace {
    coeff_ring: Arc<PolyRing>,
    variables: Vec<SeriesVariable>,
    order: u64,
    combined: Arc<PolyRing>,
    weights: Vec<u64>,
}

impl PartialEq for SeriesSpace {
    fn eq(&self, other: &Self) -> bool {
        self.coeff_ring.same_as(&other.coeff_ring) && self.variables == other.variables && self.order == other.order
    }
}

impl SeriesSpace {
    pub fn new(coeff_ring: &Arc<PolyRing>, variables: Vec<SeriesVariable>, order: u64) -> Result<Arc<Self>> {
        if let Some(v) = variables.iter().find(|v| v.degree.0 == 0) {
            return Err(domain!("series variable {:?} has degree 0", v.name));
        }
        if variables.windows(2).any(|w| (w[0].degree.0 > 0) != (w[1].degree.0 > 0)) {
            return Err(domain!("series variables must all have degrees of one sign"));
        }
        let vtable = GeneratorTable::new(variables.iter().map(|v| (v.name.clone(), v.degree)))?;
        let table = coeff_ring.table().concat(&vtable)?;
        let combined = PolyRing::new(coeff_ring.domain(), table);
        let mut weights = vec![0u64; coeff_ring.ngens()];
        weights.extend(variables.iter().map(SeriesVariable::weight));
        Ok(Arc::new(SeriesSpace { coeff_ring: coeff_ring.clone(), variables, order, combined, weights }))
    }

    /// Same coefficients and variables, different truncation.
    pub fn with_order(self: &Arc<Self>, order: u64) -> Arc<Self> {
        if order == self.order {
            return self.clone();
        }
        Arc::new(SeriesSpace {
            coeff_ring: self.coeff_ring.clone(),
            variables: self.variables.clone(),
            order,
            combined: self.combined.clone(),
            weights: self.weights.clone(),
        })
    }

    pub fn coeff_ring(&self) -> &Arc<PolyRing> {
        &self.coeff_ring
    }

    pub fn variables(&self) -> &[SeriesVariable] {
        &self.variables
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn combined_ring(&self) -> &Arc<PolyRing> {
        &self.combined
    }

    fn ncoeff(&self) -> usize {
        self.coeff_ring.ngens()
    }

    fn weight(&self, m: &Monomial) -> u64 {
        m.weight(&self.weights)
    }

    fn compatible(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Element of `R[[x_1, …, x_n]]` truncated above the space's order.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    space: Arc<SeriesSpace>,
    poly: GradedPolynomial,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.space.compatible(&other.space) && self.poly == other.poly
    }
}

impl TruncatedSeries {
    pub fn zero(space: &Arc<SeriesSpace>) -> Self {
        TruncatedSeries { space: space.clone(), poly: GradedPolynomial::zero(&space.combined) }
    }

    /// Constant series with the given coefficient.
    pub fn constant(space: &Arc<SeriesSpace>, c: &GradedPolynomial) -> Result<Self> {
        if !c.ring().same_as(&space.coeff_ring) {
            return Err(structural!("constant does not lie in the coefficient ring"));
        }
        Ok(TruncatedSeries { space: space.clone(), poly: c.embed_prefix(&space.combined) })
    }

    pub fn one(space: &Arc<SeriesSpace>) -> Self {
        Self::constant(space, &GradedPolynomial::one(&space.coeff_ring)).expect("same ring")
    }

    pub fn variable(space: &Arc<SeriesSpace>, i: usize) -> Self {
        let poly = GradedPolynomial::generator(&space.combined, space.ncoeff() + i);
        TruncatedSeries { space: space.clone(), poly }.truncated()
    }

    /// `c · x^exponents`, with the coefficient written to the left.
    pub fn term(space: &Arc<SeriesSpace>, exponents: &[u32], c: &GradedPolynomial) -> Result<Self> {
        if exponents.len() != space.nvars() {
            return Err(structural!("exponent vector has {} entries for {} variables", exponents.len(), space.nvars()));
        }
        let mut e = vec![0u32; space.ncoeff()];
        e.extend_from_slice(exponents);
        let xm = GradedPolynomial::monomial(&space.combined, Monomial::from_exponents(e), 1);
        let c = Self::constant(space, c)?;
        Ok(TruncatedSeries { space: space.clone(), poly: &c.poly * &xm }.truncated())
    }

    /// Builds from an exponent-vector → coefficient table.
    pub fn from_coefficients<I>(space: &Arc<SeriesSpace>, table: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GradedPolynomial)>,
    {
        let mut out = Self::zero(space);
        for (e, c) in table {
            out = &out + &Self::term(space, &e, &c)?;
        }
        Ok(out)
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    /// The underlying polynomial in coefficient generators and variables.
    pub fn as_polynomial(&self) -> &GradedPolynomial {
        &self.poly
    }

    pub fn from_polynomial(space: &Arc<SeriesSpace>, poly: GradedPolynomial) -> Result<Self> {
        if !poly.ring().same_as(&space.combined) {
            return Err(structural!("polynomial does not live in the series ring"));
        }
        Ok(TruncatedSeries { space: space.clone(), poly }.truncated())
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn truncated(mut self) -> Self {
        let space = self.space.clone();
        let order = space.order;
        let needs = self.poly.terms().any(|(m, _)| space.weight(m) > order);
        if needs {
            self.poly = GradedPolynomial::from_terms(
                &space.combined,
                self.poly
                    .terms()
                    .filter(|(m, _)| space.weight(m) <= order)
                    .map(|(m, c)| (m.clone(), c.clone())),
            );
        }
        self
    }

    /// Re-truncate at a (usually smaller) order.
    pub fn truncate_to(&self, order: u64) -> Self {
        TruncatedSeries { space: self.space.with_order(order), poly: self.poly.clone() }.truncated()
    }

    /// Coefficient table: variable exponent vector → coefficient in R.
    pub fn coefficients(&self) -> BTreeMap<Vec<u32>, GradedPolynomial> {
        let k = self.space.ncoeff();
        let mut out: BTreeMap<Vec<u32>, GradedPolynomial> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let (cm, xm) = m.split_at(k);
            out.entry(xm.exponents().to_vec())
                .or_insert_with(|| GradedPolynomial::zero(&self.space.coeff_ring))
                .add_term(cm, c.clone());
        }
        out
    }

    pub fn coefficient(&self, exponents: &[u32]) -> GradedPolynomial {
        self.coefficients()
            .remove(exponents)
            .unwrap_or_else(|| GradedPolynomial::zero(&self.space.coeff_ring))
    }

    pub fn constant_term(&self) -> GradedPolynomial {
        self.coefficient(&vec![0; self.space.nvars()])
    }

    /// Smallest weighted degree among the terms (`None` for zero).
    pub fn min_weight(&self) -> Option<u64> {
        self.poly.terms().map(|(m, _)| self.space.weight(m)).min()
    }

    pub fn homogeneous_degree(&self) -> Result<Option<Degree>> {
        self.poly.homogeneous_degree()
    }

    fn check_space(&self, other: &TruncatedSeries) -> Result<()> {
        if self.space.compatible(&other.space) {
            Ok(())
        } else {
            Err(structural!("series live in different spaces"))
        }
    }

    pub fn series_add(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check_space(other)?;
        Ok(TruncatedSeries { space: self.space.clone(), poly: &self.poly + &other.poly })
    }

    /// Product truncated at the order; pairs of terms beyond it are skipped.
    pub fn series_multiply(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check_space(other)?;
        let space = &self.space;
        let poly = self
            .poly
            .mul_filtered(&other.poly, |a, b| space.weight(a) + space.weight(b) <= space.order);
        Ok(TruncatedSeries { space: space.clone(), poly })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = TruncatedSeries::one(&self.space);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Left multiplication by a coefficient.
    pub fn scale_left(&self, c: &GradedPolynomial) -> Result<Self> {
        Ok(&Self::constant(&self.space, c)? * self)
    }
}

impl std::ops::Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.series_add(rhs).expect("series space mismatch")
    }
}

impl std::ops::Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.series_add(&-rhs).expect("series space mismatch")
    }
}

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { space: self.space.clone(), poly: -&self.poly }
    }
}

impl std::ops::Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.series_multiply(rhs).expect("series space mismatch")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.space.order + 1)
    }
}

/// Ordered family of homogeneous series in a common space.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFamily {
    components: Vec<TruncatedSeries>,
    target_degrees: Vec<Degree>,
    space: Arc<SeriesSpace>,
}

impl SeriesFamily {
    pub fn new(space: &Arc<SeriesSpace>, components: Vec<TruncatedSeries>, target_degrees: Vec<Degree>) -> Result<Self> {
        if components.len() != target_degrees.len() {
            return Err(structural!(
                "{} components but {} target degrees",
                components.len(),
                target_degrees.len()
            ));
        }
        for (s, (c, &t)) in components.iter().zip(&target_degrees).enumerate() {
            if !c.space.compatible(space) {
                return Err(structural!("component {s} lives in a different series space"));
            }
            match c.homogeneous_degree() {
                Ok(None) => {}
                Ok(Some(d)) if d == t => {}
                Ok(Some(d)) => {
                    return Err(domain!("component {s} has degree {d}, expected {t}"));
                }
                Err(_) => return Err(domain!("component {s} is not homogeneous")),
            }
        }
        Ok(SeriesFamily { components, target_degrees, space: space.clone() })
    }

    /// The family `(x_1, …, x_n)` of coordinate functions.
    pub fn identity(space: &Arc<SeriesSpace>) -> Self {
        let comps = (0..space.nvars()).map(|i| TruncatedSeries::variable(space, i)).collect();
        let degs = space.variables.iter().map(|v| v.degree).collect();
        SeriesFamily { components: comps, target_degrees: degs, space: space.clone() }
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn component(&self, s: usize) -> &TruncatedSeries {
        &self.components[s]
    }

    pub fn target_degrees(&self) -> &[Degree] {
        &self.target_degrees
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncatedSeries::is_zero)
    }

    pub fn truncate_to(&self, order: u64) -> Self {
        SeriesFamily {
            components: self.components.iter().map(|c| c.truncate_to(order)).collect(),
            target_degrees: self.target_degrees.clone(),
            space: self.space.with_order(order),
        }
    }

    pub fn sub(&self, other: &SeriesFamily) -> Result<Self> {
        if self.len() != other.len() {
            return Err(structural!("families have different lengths"));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.series_add(&-b))
            .collect::<Result<Vec<_>>>()?;
        SeriesFamily::new(&self.space, comps, self.target_degrees.clone())
    }

    /// Concatenation of two families in the same space.
    pub fn concat(&self, other: &SeriesFamily) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        let mut degs = self.target_degrees.clone();
        degs.extend_from_slice(&other.target_degrees);
        SeriesFamily::new(&self.space, comps, degs)
    }

    /// Moves every component into `space` (same coefficient ring and
    /// variables, possibly another order).
    pub fn reinterpret(&self, space: &Arc<SeriesSpace>) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| TruncatedSeries::from_polynomial(space, c.poly.clone()))
            .collect::<Result<Vec<_>>>()?;
        SeriesFamily::new(space, comps, self.target_degrees.clone())
    }
}

/// `f(args)`: replace the `s`-th variable of `f` by the `s`-th component of
/// `args`.
///
/// Each argument must be homogeneous of its variable's degree with zero
/// constant term. The result is truncated at the largest order at which it
/// is fully determined by the truncated inputs.
pub fn substitute(f: &SeriesFamily, args: &SeriesFamily) -> Result<SeriesFamily> {
    let fspace = &f.space;
    let aspace = &args.space;
    if args.len() != fspace.nvars() {
        return Err(structural!("{} arguments for {} variables", args.len(), fspace.nvars()));
    }
    if !fspace.coeff_ring.same_as(&aspace.coeff_ring) {
        return Err(structural!("series have different coefficient rings"));
    }
    for (s, var) in fspace.variables.iter().enumerate() {
        if args.target_degrees[s] != var.degree {
            return Err(domain!(
                "argument {s} has degree {}, variable {:?} has degree {}",
                args.target_degrees[s],
                var.name,
                var.degree
            ));
        }
        if !args.components[s].constant_term().is_zero() {
            return Err(domain!("argument {s} has a nonzero constant term"));
        }
    }
    // terms of f above its order land at weight >= ceil(ratio·(order+1))
    let mut valid = aspace.order;
    for (s, var) in fspace.variables.iter().enumerate() {
        if let Some(mu) = args.components[s].min_weight() {
            let w = var.weight();
            let reach = (mu * (fspace.order + 1)).div_ceil(w) - 1;
            valid = valid.min(reach);
        }
    }
    let out_space = aspace.with_order(valid);
    let args: Vec<TruncatedSeries> = args
        .components
        .iter()
        .map(|c| TruncatedSeries { space: out_space.clone(), poly: c.poly.clone() }.truncated())
        .collect();

    let outputs = f
        .components
        .iter()
        .map(|comp| substitute_one(comp, &args, &out_space))
        .collect::<Vec<_>>();
    SeriesFamily::new(&out_space, outputs, f.target_degrees.clone())
}

fn substitute_one(comp: &TruncatedSeries, args: &[TruncatedSeries], out: &Arc<SeriesSpace>) -> TruncatedSeries {
    let table: Vec<(Vec<u32>, GradedPolynomial)> = comp.coefficients().into_iter().collect();
    let maxexp: Vec<u32> = (0..args.len())
        .map(|s| table.iter().map(|(e, _)| e[s]).max().unwrap_or(0))
        .collect();
    let powers: Vec<Vec<TruncatedSeries>> = args
        .iter()
        .zip(&maxexp)
        .map(|(a, &m)| {
            let mut v = vec![TruncatedSeries::one(out)];
            for k in 1..=m as usize {
                let next = &v[k - 1] * a;
                v.push(next);
            }
            v
        })
        .collect();
    table
        .par_iter()
        .map(|(e, c)| {
            let mut prod = TruncatedSeries::constant(out, c).expect("shared coefficient ring");
            for (s, &k) in e.iter().enumerate() {
                if k > 0 {
                    prod = &prod * &powers[s][k as usize];
                    if prod.is_zero() {
                        break;
                    }
                }
            }
            prod
        })
        .reduce(|| TruncatedSeries::zero(out), |a, b| &a + &b)
}

/// Solves `f(x, i(x)) = 0` for the family `i`, given `f` in variables
/// `(y_1..y_d, z_1..z_d)` satisfying the unit axiom `f(x, 0) = x = f(0, x)`.
///
/// `x_space` supplies the `d` variables of the answer. The solution is refined
/// by the fixed-point step `i ← i − f(x, i)`, which gains at least the smallest
/// variable weight per step, and then re-substituted as a self-check.
pub fn solve_recursively(f: &SeriesFamily, x_space: &Arc<SeriesSpace>) -> Result<SeriesFamily> {
    let d = f.len();
    let fvars = f.space.variables();
    if fvars.len() != 2 * d || x_space.nvars() != d {
        return Err(structural!("expected {d} components in {} variables and {d} unknowns", 2 * d));
    }
    for s in 0..d {
        if fvars[s].degree != fvars[d + s].degree || fvars[s].degree != x_space.variables[s].degree {
            return Err(structural!("variable degrees of slot {s} do not match"));
        }
        if f.target_degrees[s] != fvars[s].degree {
            return Err(domain!("component {s} must have the degree of its coordinate"));
        }
    }
    let x = SeriesFamily::identity(x_space);
    let zero = SeriesFamily::new(
        x_space,
        (0..d).map(|_| TruncatedSeries::zero(x_space)).collect(),
        x.target_degrees.clone(),
    )?;
    check_unit(f, &x, &zero)?;

    let order = x_space.order.min(f.space.order);
    let x = x.truncate_to(order);
    let x_space = x.space.clone();
    let mut inv = SeriesFamily::new(
        &x_space,
        x.components.iter().map(|c| -c).collect(),
        x.target_degrees.clone(),
    )?;
    let min_w = x_space.variables.iter().map(SeriesVariable::weight).min().unwrap_or(1).max(1);
    let max_iter = order / min_w + 2;
    for _ in 0..max_iter {
        let residual = substitute(f, &x.concat(&inv)?)?.reinterpret(&x_space)?;
        if residual.is_zero() {
            return Ok(inv);
        }
        inv = inv.sub(&residual)?;
    }
    let residual = substitute(f, &x.concat(&inv)?)?;
    if residual.is_zero() {
        Ok(inv)
    } else {
        Err(Error::Internal("recursive solve did not converge".into()))
    }
}

/// Domain error naming the first coefficient where `f(x,0) = x` or
/// `f(0,x) = x` fails.
pub(crate) fn check_unit(f: &SeriesFamily, x: &SeriesFamily, zero: &SeriesFamily) -> Result<()> {
    for (label, args) in [("f(x,0)", x.concat(zero)?), ("f(0,x)", zero.concat(x)?)] {
        let lhs = substitute(f, &args)?;
        let x_t = x.reinterpret(&lhs.space)?;
        if let Some((s, e, c)) = first_difference(&lhs, &x_t) {
            return Err(domain!("unit axiom fails: {label} component {s} at exponents {e:?} has coefficient {c}"));
        }
    }
    Ok(())
}

/// First (component, exponents, difference coefficient) where two families differ.
pub fn first_difference(a: &SeriesFamily, b: &SeriesFamily) -> Option<(usize, Vec<u32>, GradedPolynomial)> {
    let order = a.space.order.min(b.space.order);
    for s in 0..a.len().min(b.len()) {
        let d = &a.components[s].truncate_to(order) - &TruncatedSeries {
            space: a.components[s].space.with_order(order),
            poly: b.components[s].truncate_to(order).poly.clone(),
        };
        if let Some((e, c)) = d.coefficients().into_iter().next() {
            return Some((s, e, c));
        }
    }
    None
}

/// Scalar helper: `c` as a constant coefficient.
pub fn scalar(ring: &Arc<PolyRing>, c: i64) -> GradedPolynomial {
    GradedPolynomial::constant(ring, BigInt::from(c))
}
