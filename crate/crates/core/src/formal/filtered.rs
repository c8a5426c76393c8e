use std::sync::Arc;

use num_traits::One;

use crate::error::{domain, structural, Result};
use crate::graded::{CoefficientDomain, Degree, GradedPolynomial, PolyRing};
use crate::series::{SeriesFamily, SeriesSpace, SeriesVariable, TruncatedSeries};

/// Degree of the odd coordinate `e`.
pub const ODD_COORDINATE_DEGREE: Degree = Degree(-1);
/// Degree of the even coordinate `γ`.
pub const EVEN_COORDINATE_DEGREE: Degree = Degree(-2);

/// A jet of an automorphism of the pair `(e, γ)` of the shape
///
/// `e ↦ e + Σ_{0≤i≤m} a_i γ^{p^i}`, `γ ↦ γ + Σ_{1≤i≤m} b_i γ^{p^i}`
///
/// with `deg a_i = 2p^i − 1` and `deg b_i = 2p^i − 2`. The leading
/// coefficients (1 on `e` and on `γ`) are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredAutomorphism {
    p: u64,
    ring: Arc<PolyRing>,
    odd: Vec<GradedPolynomial>,
    even: Vec<GradedPolynomial>,
}

fn check_degree(c: &GradedPolynomial, want: i64, what: &str) -> Result<()> {
    match c.homogeneous_degree() {
        Ok(None) => Ok(()),
        Ok(Some(d)) if d.0 == want => Ok(()),
        Ok(Some(d)) => Err(domain!("{what} has degree {d}, expected {want}")),
        Err(_) => Err(domain!("{what} is not homogeneous")),
    }
}

impl FilteredAutomorphism {
    /// `odd` holds `a_0..a_m`, `even` holds `b_1..b_m`.
    pub fn new(ring: &Arc<PolyRing>, odd: Vec<GradedPolynomial>, even: Vec<GradedPolynomial>) -> Result<Self> {
        let p = match ring.domain() {
            CoefficientDomain::PrimeField { p } if p != 2 => p,
            other => return Err(domain!("filtered automorphisms need an odd prime field, got {other:?}")),
        };
        if odd.is_empty() || odd.len() != even.len() + 1 {
            return Err(structural!("expected a_0..a_m and b_1..b_m, got {} and {}", odd.len(), even.len()));
        }
        for (i, a) in odd.iter().enumerate() {
            if !a.ring().same_as(ring) {
                return Err(structural!("a_{i} is not in the coefficient ring"));
            }
            check_degree(a, 2 * p.pow(i as u32) as i64 - 1, &format!("a_{i}"))?;
        }
        for (k, b) in even.iter().enumerate() {
            if !b.ring().same_as(ring) {
                return Err(structural!("b_{} is not in the coefficient ring", k + 1));
            }
            check_degree(b, 2 * p.pow(k as u32 + 1) as i64 - 2, &format!("b_{}", k + 1))?;
        }
        Ok(FilteredAutomorphism { p, ring: ring.clone(), odd, even })
    }

    pub fn identity(ring: &Arc<PolyRing>, jet_order: usize) -> Result<Self> {
        let z = GradedPolynomial::zero(ring);
        Self::new(ring, vec![z.clone(); jet_order + 1], vec![z; jet_order])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn jet_order(&self) -> usize {
        self.even.len()
    }

    /// `a_0..a_m`.
    pub fn odd_coefficients(&self) -> &[GradedPolynomial] {
        &self.odd
    }

    /// `b_1..b_m`.
    pub fn even_coefficients(&self) -> &[GradedPolynomial] {
        &self.even
    }

    /// `b_i` with the implicit `b_0 = 1`.
    fn even_at(&self, i: usize) -> GradedPolynomial {
        if i == 0 {
            GradedPolynomial::one(&self.ring)
        } else {
            self.even[i - 1].clone()
        }
    }
}

/// Composite in the order of the group of automorphisms of the formal
/// spectrum: `(f∘g)(e) = g(f(e))`, i.e. the series of `g` with the series of
/// `f` substituted.
///
/// Writing `f = (a, b)` and `g = (c, d)` with `b_0 = d_0 = 1`, Frobenius
/// additivity gives
/// `(f∘g)(e) = e + Σ_n (a_n + Σ_{i+j=n} b_i^{p^j} c_j) γ^{p^n}` and
/// `(f∘g)(γ) = Σ_n (Σ_{i+j=n} b_i^{p^j} d_j) γ^{p^n}`.
pub fn compose_filtered(f: &FilteredAutomorphism, g: &FilteredAutomorphism) -> Result<FilteredAutomorphism> {
    if f.p != g.p {
        return Err(structural!("cannot compose automorphisms at primes {} and {}", f.p, g.p));
    }
    if !f.ring.same_as(&g.ring) {
        return Err(structural!("automorphisms have different coefficient rings"));
    }
    let m = f.jet_order().min(g.jet_order());
    let p = f.p;
    let frob = |x: &GradedPolynomial, j: usize| x.pow(p.pow(j as u32));
    let mut odd = Vec::with_capacity(m + 1);
    let mut even = Vec::with_capacity(m);
    for n in 0..=m {
        let mut a = f.odd[n].clone();
        let mut b = GradedPolynomial::zero(&f.ring);
        for j in 0..=n {
            let bi = frob(&f.even_at(n - j), j);
            a = &a + &(&g.odd[j] * &bi);
            b = &b + &(&g.even_at(j) * &bi);
        }
        odd.push(a);
        if n > 0 {
            even.push(b);
        } else {
            debug_assert!(b.constant_term().is_one() && b.len() == 1);
        }
    }
    FilteredAutomorphism::new(&f.ring, odd, even)
}

/// Space of jets in `(e, γ)` up to `γ^{p^m}`.
pub fn filtered_series_space(ring: &Arc<PolyRing>, p: u64, jet_order: usize) -> Result<Arc<SeriesSpace>> {
    let order = EVEN_COORDINATE_DEGREE.0.unsigned_abs() * p.pow(jet_order as u32);
    SeriesSpace::new(
        ring,
        vec![
            SeriesVariable::new("e", ODD_COORDINATE_DEGREE),
            SeriesVariable::new("gamma", EVEN_COORDINATE_DEGREE),
        ],
        order,
    )
}

/// The pair of series `(f(e), f(γ))`.
pub fn filtered_to_series(f: &FilteredAutomorphism) -> Result<SeriesFamily> {
    let space = filtered_series_space(&f.ring, f.p, f.jet_order())?;
    let mut fe = TruncatedSeries::variable(&space, 0);
    let mut fg = TruncatedSeries::variable(&space, 1);
    for (i, a) in f.odd.iter().enumerate() {
        fe = &fe + &TruncatedSeries::term(&space, &[0, f.p.pow(i as u32) as u32], a)?;
    }
    for (k, b) in f.even.iter().enumerate() {
        fg = &fg + &TruncatedSeries::term(&space, &[0, f.p.pow(k as u32 + 1) as u32], b)?;
    }
    SeriesFamily::new(&space, vec![fe, fg], vec![ODD_COORDINATE_DEGREE, EVEN_COORDINATE_DEGREE])
}

fn power_of(p: u64, n: u32) -> Option<usize> {
    let mut q = 1u64;
    let mut i = 0;
    while q < u64::from(n) {
        q *= p;
        i += 1;
    }
    (q == u64::from(n)).then_some(i)
}

fn monomial_name(e: &[u32]) -> String {
    match (e[0], e[1]) {
        (0, 0) => "1".into(),
        (a, 0) => format!("e^{a}"),
        (0, g) => format!("gamma^{g}"),
        (a, g) => format!("e^{a}*gamma^{g}"),
    }
}

/// Reads a jet in `(e, γ)` back as a filtered automorphism; any monomial
/// outside the permitted shape is a domain error naming it.
pub fn series_to_filtered(s: &SeriesFamily, p: u64) -> Result<FilteredAutomorphism> {
    let space = s.space();
    let vars = space.variables();
    if s.len() != 2
        || vars.len() != 2
        || vars[0].degree != ODD_COORDINATE_DEGREE
        || vars[1].degree != EVEN_COORDINATE_DEGREE
    {
        return Err(structural!("expected a pair of series in (e, gamma) of degrees (-1, -2)"));
    }
    let ring = space.coeff_ring();
    match ring.domain() {
        CoefficientDomain::PrimeField { p: q } if q == p && p != 2 => {}
        other => return Err(domain!("expected coefficients over F_{p} with p odd, got {other:?}")),
    }
    let w = EVEN_COORDINATE_DEGREE.0.unsigned_abs();
    let mut m = 0usize;
    while w * p.pow(m as u32 + 1) <= space.order() {
        m += 1;
    }
    let one = GradedPolynomial::one(ring);
    let mut odd = vec![GradedPolynomial::zero(ring); m + 1];
    let mut even = vec![GradedPolynomial::zero(ring); m];
    for (e, c) in s.component(0).coefficients() {
        match (e[0], power_of(p, e[1])) {
            (1, None) if e[1] == 0 && c == one => {}
            (0, Some(i)) if e[1] > 0 => odd[i] = c,
            _ => return Err(domain!("f(e) has a disallowed term {} * {}", c, monomial_name(&e))),
        }
    }
    for (e, c) in s.component(1).coefficients() {
        match (e[0], power_of(p, e[1])) {
            (0, Some(0)) if c == one => {}
            (0, Some(i)) if i > 0 => even[i - 1] = c,
            _ => return Err(domain!("f(gamma) has a disallowed term {} * {}", c, monomial_name(&e))),
        }
    }
    if s.component(0).coefficient(&[1, 0]) != one || s.component(1).coefficient(&[0, 1]) != one {
        return Err(domain!("linear coefficients of f(e) and f(gamma) must be 1"));
    }
    FilteredAutomorphism::new(ring, odd, even)
}
