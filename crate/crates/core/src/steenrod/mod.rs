//! The dual Steenrod algebra at an odd prime as an explicit Hopf algebra.
//!
//! `C = F_p[τ_0, τ_1, …, ξ_1, ξ_2, …]` with `deg τ_i = 2p^i − 1` and
//! `deg ξ_i = 2p^i − 2`, and comultiplication
//! `ψ(τ_i) = τ_i⊗1 + Σ_j ξ_{i−j}^{p^j}⊗τ_j`, `ψ(ξ_i) = Σ_j ξ_{i−j}^{p^j}⊗ξ_j`
//! (with `ξ_0 = 1`), extended multiplicatively.
//!
//! Tensor products are free graded-commutative algebras on a copy of the
//! generators per factor, factors in order, so `(a⊗b)(c⊗d) =
//! (−1)^{|b||c|} ac⊗bd`.

mod duality;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Result};
use crate::graded::{is_prime, CoefficientDomain, Degree, GeneratorTable, GradedPolynomial, Monomial, PolyRing};

pub use duality::{automorphism_from_character, duality_check, Character, DualityEntry, DualityOrientation, DualityReport};
pub use verify::{verify_hopf, HopfReport};

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(domain!("p = 2 is not supported: the dual Steenrod algebra has a different presentation there"));
    }
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    Ok(())
}

pub fn tau_degree(p: u64, i: u32) -> Degree {
    Degree(2 * p.pow(i) as i64 - 1)
}

pub fn xi_degree(p: u64, i: u32) -> Degree {
    Degree(2 * p.pow(i) as i64 - 2)
}

/// A monomial `τ_{i_1}⋯τ_{i_k} ξ_1^{e_1} ξ_2^{e_2}⋯` of the Milnor basis.
///
/// Stored densely with trailing zeros trimmed, so the derived order is the
/// lexicographic order on exponent sequences (`τ`'s first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MilnorBasisElement {
    p: u64,
    tau: Vec<u32>,
    xi: Vec<u32>,
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl MilnorBasisElement {
    /// `tau` lists the indices present, `xi` maps `i ≥ 1` to the exponent
    /// of `ξ_i`.
    pub fn new(p: u64, tau: &[u32], xi: &BTreeMap<u32, u32>) -> Result<Self> {
        check_odd_prime(p)?;
        let mut t = vec![0u32; tau.iter().max().map_or(0, |&m| m as usize + 1)];
        for &i in tau {
            if t[i as usize] == 1 {
                return Err(domain!("tau{i} appears twice; odd generators square to zero"));
            }
            t[i as usize] = 1;
        }
        let mut x = vec![0u32; xi.keys().max().map_or(0, |&m| m as usize)];
        for (&i, &e) in xi {
            if i == 0 {
                return Err(domain!("xi indices start at 1"));
            }
            x[i as usize - 1] = e;
        }
        Ok(MilnorBasisElement { p, tau: trim(t), xi: trim(x) })
    }

    pub fn one(p: u64) -> Self {
        MilnorBasisElement { p, tau: vec![], xi: vec![] }
    }

    pub fn tau(p: u64, i: u32) -> Self {
        let mut t = vec![0; i as usize + 1];
        t[i as usize] = 1;
        MilnorBasisElement { p, tau: t, xi: vec![] }
    }

    pub fn xi(p: u64, i: u32, e: u32) -> Self {
        assert!(i >= 1, "xi indices start at 1");
        let mut x = vec![0; i as usize];
        x[i as usize - 1] = e;
        MilnorBasisElement { p, tau: vec![], xi: trim(x) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tau_indices(&self) -> Vec<u32> {
        self.tau.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i as u32).collect()
    }

    /// `i ↦ exponent of ξ_i` for the nonzero exponents.
    pub fn xi_exponents(&self) -> BTreeMap<u32, u32> {
        self.xi.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i as u32 + 1, e)).collect()
    }

    pub fn is_one(&self) -> bool {
        self.tau.is_empty() && self.xi.is_empty()
    }

    pub fn degree(&self) -> Degree {
        let t: i64 = self.tau_indices().iter().map(|&i| tau_degree(self.p, i).0).sum();
        let x: i64 = self.xi_exponents().iter().map(|(&i, &e)| i64::from(e) * xi_degree(self.p, i).0).sum();
        Degree(t + x)
    }

    fn tau_len(&self) -> usize {
        self.tau.len()
    }

    fn xi_len(&self) -> usize {
        self.xi.len()
    }
}

pub fn degree_of(m: &MilnorBasisElement) -> Degree {
    m.degree()
}

impl fmt::Display for MilnorBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.tau_indices().iter().map(|i| format!("tau{i}")).collect();
        for (i, e) in self.xi_exponents() {
            parts.push(if e == 1 { format!("xi{i}") } else { format!("xi{i}^{e}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Serialize, Deserialize)]
struct MilnorJson {
    tau: Vec<u32>,
    xi: BTreeMap<u32, u32>,
}

impl Serialize for MilnorBasisElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MilnorJson { tau: self.tau_indices(), xi: self.xi_exponents() }.serialize(s)
    }
}

/// An element of `C`: Milnor basis elements with nonzero coefficients mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodElement {
    p: u64,
    terms: BTreeMap<MilnorBasisElement, u64>,
}

impl SteenrodElement {
    pub fn zero(p: u64) -> Self {
        SteenrodElement { p, terms: BTreeMap::new() }
    }

    pub fn basis(m: MilnorBasisElement) -> Self {
        let p = m.p;
        SteenrodElement { p, terms: BTreeMap::from([(m, 1)]) }
    }

    pub fn from_terms(p: u64, terms: impl IntoIterator<Item = (MilnorBasisElement, i64)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            if m.p != p {
                return Err(structural!("basis element at p = {} in an element at p = {p}", m.p));
            }
            let slot: &mut u64 = out.entry(m).or_default();
            *slot = (*slot + c.rem_euclid(p as i64) as u64) % p;
        }
        out.retain(|_, c| *c != 0);
        Ok(SteenrodElement { p, terms: out })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<MilnorBasisElement, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_indices(&self) -> (usize, usize) {
        self.terms
            .keys()
            .fold((1, 0), |(t, x), m| (t.max(m.tau_len()), x.max(m.xi_len())))
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| if c == 1 { m.to_string() } else { format!("{c}*{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of `C⊗C`, keyed by `(left, right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    p: u64,
    terms: BTreeMap<(MilnorBasisElement, MilnorBasisElement), u64>,
}

impl TensorElement {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<(MilnorBasisElement, MilnorBasisElement), u64> {
        &self.terms
    }

    /// `T(x⊗y) = (−1)^{|x||y|} y⊗x`.
    pub fn swap_factors(&self) -> TensorElement {
        let p = self.p;
        let terms = self
            .terms
            .iter()
            .map(|((l, r), &c)| {
                let odd = l.degree().is_odd() && r.degree().is_odd();
                ((r.clone(), l.clone()), if odd { (p - c) % p } else { c })
            })
            .collect();
        TensorElement { p, terms }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, r), &c)| if c == 1 { format!("{l}⊗{r}") } else { format!("{c}*{l}⊗{r}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TensorTermJson<'a> {
    left: &'a MilnorBasisElement,
    right: &'a MilnorBasisElement,
    coefficient: String,
}

impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|((l, r), c)| TensorTermJson { left: l, right: r, coefficient: c.to_string() }))
    }
}

#[derive(Serialize)]
struct ElementTermJson<'a> {
    basis: &'a MilnorBasisElement,
    coefficient: String,
}

impl Serialize for SteenrodElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| ElementTermJson { basis: m, coefficient: c.to_string() }))
    }
}

/// A finite model of `C` containing `τ_0..τ_{n−1}` and `ξ_1..ξ_m`, with its
/// tensor square and cube and ψ on generators.
#[derive(Debug)]
pub struct DualSteenrod {
    p: u64,
    ntau: usize,
    nxi: usize,
    ring: Arc<PolyRing>,
    tensor: Arc<PolyRing>,
    psi_gens: Vec<GradedPolynomial>,
}

impl DualSteenrod {
    /// All generators of degree at most `max_degree` (and at least `τ_0`).
    pub fn new(p: u64, max_degree: Degree) -> Result<Self> {
        check_odd_prime(p)?;
        let top = max_degree.0.max(1);
        let ntau = (0..).take_while(|&i| tau_degree(p, i).0 <= top).count();
        let nxi = (1..).take_while(|&i| xi_degree(p, i).0 <= top).count();
        Self::with_generators(p, ntau, nxi)
    }

    pub fn with_generators(p: u64, ntau: usize, nxi: usize) -> Result<Self> {
        check_odd_prime(p)?;
        // ψ(τ_i) involves ξ_1..ξ_i
        let nxi = nxi.max(ntau.saturating_sub(1));
        let ring = PolyRing::new(CoefficientDomain::prime_field(p)?, Self::table(p, ntau, nxi, "")?);
        let tensor = PolyRing::new(ring.domain(), Self::table(p, ntau, nxi, "_l")?.concat(&Self::table(p, ntau, nxi, "_r")?)?);
        let mut alg = DualSteenrod { p, ntau, nxi, ring, tensor, psi_gens: Vec::new() };
        alg.psi_gens = alg.psi_on_generators();
        Ok(alg)
    }

    pub(crate) fn table(p: u64, ntau: usize, nxi: usize, suffix: &str) -> Result<GeneratorTable> {
        let taus = (0..ntau as u32).map(|i| (format!("tau{i}{suffix}"), tau_degree(p, i)));
        let xis = (1..=nxi as u32).map(|i| (format!("xi{i}{suffix}"), xi_degree(p, i)));
        GeneratorTable::new(taus.chain(xis))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn tensor_ring(&self) -> &Arc<PolyRing> {
        &self.tensor
    }

    pub fn ngens(&self) -> usize {
        self.ntau + self.nxi
    }

    pub fn tau_count(&self) -> usize {
        self.ntau
    }

    pub fn xi_count(&self) -> usize {
        self.nxi
    }

    pub fn tau_index(&self, i: usize) -> usize {
        i
    }

    pub fn xi_index(&self, i: usize) -> usize {
        self.ntau + i - 1
    }

    /// Generator `g` of `C` placed in tensor factor `slot` of a ring with
    /// `ngens` generators per factor.
    pub(crate) fn in_slot(ring: &Arc<PolyRing>, per: usize, slot: usize, g: usize) -> GradedPolynomial {
        GradedPolynomial::generator(ring, slot * per + g)
    }

    fn xi_power_left(&self, k: usize, pow: u64) -> GradedPolynomial {
        if k == 0 {
            GradedPolynomial::one(&self.tensor)
        } else {
            Self::in_slot(&self.tensor, self.ngens(), 0, self.xi_index(k)).pow(pow)
        }
    }

    fn psi_on_generators(&self) -> Vec<GradedPolynomial> {
        let n = self.ngens();
        let mut out = Vec::with_capacity(n);
        for i in 0..self.ntau {
            let mut v = Self::in_slot(&self.tensor, n, 0, self.tau_index(i));
            for j in 0..=i {
                let left = self.xi_power_left(i - j, self.p.pow(j as u32));
                v = &v + &(&left * &Self::in_slot(&self.tensor, n, 1, self.tau_index(j)));
            }
            out.push(v);
        }
        for i in 1..=self.nxi {
            let mut v = GradedPolynomial::zero(&self.tensor);
            for j in 0..=i {
                let right = if j == 0 {
                    GradedPolynomial::one(&self.tensor)
                } else {
                    Self::in_slot(&self.tensor, n, 1, self.xi_index(j))
                };
                v = &v + &(&self.xi_power_left(i - j, self.p.pow(j as u32)) * &right);
            }
            out.push(v);
        }
        out
    }

    pub fn psi_generators(&self) -> &[GradedPolynomial] {
        &self.psi_gens
    }

    /// ψ as a map of Dirac algebras `C → C⊗C`.
    pub fn psi_poly(&self, x: &GradedPolynomial) -> Result<GradedPolynomial> {
        x.map_algebra(&self.psi_gens, &self.tensor)
    }

    pub fn monomial_of(&self, m: &MilnorBasisElement) -> Result<Monomial> {
        if m.p != self.p {
            return Err(structural!("basis element at p = {} used at p = {}", m.p, self.p));
        }
        if m.tau_len() > self.ntau || m.xi_len() > self.nxi {
            return Err(structural!("{m} needs generators beyond this model of the algebra"));
        }
        let mut e = vec![0u32; self.ngens()];
        e[..m.tau_len()].copy_from_slice(&m.tau);
        e[self.ntau..self.ntau + m.xi_len()].copy_from_slice(&m.xi);
        Ok(Monomial::from_exponents(e))
    }

    pub fn basis_of(&self, m: &Monomial) -> MilnorBasisElement {
        let e = m.exponents();
        MilnorBasisElement { p: self.p, tau: trim(e[..self.ntau].to_vec()), xi: trim(e[self.ntau..].to_vec()) }
    }

    pub fn to_poly(&self, x: &SteenrodElement) -> Result<GradedPolynomial> {
        if x.p != self.p {
            return Err(structural!("element at p = {} used at p = {}", x.p, self.p));
        }
        let mut out = GradedPolynomial::zero(&self.ring);
        for (m, &c) in &x.terms {
            out.add_term(self.monomial_of(m)?, BigInt::from(c));
        }
        Ok(out)
    }

    pub fn from_poly(&self, x: &GradedPolynomial) -> SteenrodElement {
        let terms = x.terms().map(|(m, c)| (self.basis_of(m), to_u64(c))).collect();
        SteenrodElement { p: self.p, terms }
    }

    pub fn tensor_from_poly(&self, x: &GradedPolynomial) -> TensorElement {
        let n = self.ngens();
        let terms = x
            .terms()
            .map(|(m, c)| {
                let (l, r) = m.split_at(n);
                ((self.basis_of(&l), self.basis_of(&r)), to_u64(c))
            })
            .collect();
        TensorElement { p: self.p, terms }
    }

    /// Milnor basis of degree `d`, in increasing order.
    pub fn basis_monomials(&self, d: Degree) -> Result<Vec<Monomial>> {
        self.ring.monomials_in_degree(d)
    }

    pub fn basis_in_degree(&self, d: Degree) -> Result<Vec<MilnorBasisElement>> {
        Ok(self.basis_monomials(d)?.iter().map(|m| self.basis_of(m)).collect())
    }

    /// The antipode, by recursive inversion of the identity under
    /// convolution: `Σ x' S(x'') = ε(x)`.
    pub fn antipode(&self, x: &GradedPolynomial) -> Result<GradedPolynomial> {
        let mut memo = std::collections::HashMap::new();
        let mut out = GradedPolynomial::zero(&self.ring);
        for (m, c) in x.terms() {
            let s = self.antipode_monomial(m, &mut memo)?;
            out = &out + &s.scale(c);
        }
        Ok(out)
    }

    fn antipode_monomial(
        &self,
        m: &Monomial,
        memo: &mut std::collections::HashMap<Monomial, GradedPolynomial>,
    ) -> Result<GradedPolynomial> {
        if m.is_one() {
            return Ok(GradedPolynomial::one(&self.ring));
        }
        if let Some(s) = memo.get(m) {
            return Ok(s.clone());
        }
        let n = self.ngens();
        let psi = self.psi_poly(&GradedPolynomial::monomial(&self.ring, m.clone(), 1))?;
        let mut acc = GradedPolynomial::zero(&self.ring);
        for (tm, c) in psi.terms() {
            let (l, r) = tm.split_at(n);
            if l.is_one() {
                continue;
            }
            let sr = self.antipode_monomial(&r, memo)?;
            let lp = GradedPolynomial::monomial(&self.ring, l, c.clone());
            acc = &acc + &(&lp * &sr);
        }
        let s = -&acc;
        memo.insert(m.clone(), s.clone());
        Ok(s)
    }
}

fn to_u64(c: &BigInt) -> u64 {
    c.to_u64().expect("coefficients are reduced mod p")
}

/// Milnor basis of `C` in degree `d`, in increasing order.
pub fn basis_in_degree(p: u64, d: Degree) -> Result<Vec<MilnorBasisElement>> {
    if d.0 < 0 {
        return Err(domain!("degree {d} is negative"));
    }
    DualSteenrod::new(p, d)?.basis_in_degree(d)
}

fn model_for(p: u64, elems: &[&SteenrodElement]) -> Result<DualSteenrod> {
    for e in elems {
        if e.p != p {
            return Err(structural!("elements at primes {} and {p}", e.p));
        }
    }
    let (t, x) = elems.iter().fold((1, 0), |(t, x), e| {
        let (a, b) = e.max_indices();
        (t.max(a), x.max(b))
    });
    DualSteenrod::with_generators(p, t, x)
}

/// Graded-commutative product in `C`.
pub fn hopf_multiply(a: &SteenrodElement, b: &SteenrodElement) -> Result<SteenrodElement> {
    if a.p != b.p {
        return Err(structural!("cannot multiply elements at primes {} and {}", a.p, b.p));
    }
    let alg = model_for(a.p, &[a, b])?;
    Ok(alg.from_poly(&(&alg.to_poly(a)? * &alg.to_poly(b)?)))
}

pub fn psi(x: &SteenrodElement) -> Result<TensorElement> {
    check_odd_prime(x.p)?;
    let alg = model_for(x.p, &[x])?;
    Ok(alg.tensor_from_poly(&alg.psi_poly(&alg.to_poly(x)?)?))
}

pub fn antipode(x: &SteenrodElement) -> Result<SteenrodElement> {
    check_odd_prime(x.p)?;
    let alg = model_for(x.p, &[x])?;
    Ok(alg.from_poly(&alg.antipode(&alg.to_poly(x)?)?))
}

/// `dim C_d` for `0 ≤ d ≤ max_degree`, computed in parallel over degrees.
pub fn poincare_dims(p: u64, max_degree: Degree) -> Result<Vec<(Degree, usize)>> {
    let alg = DualSteenrod::new(p, max_degree)?;
    (0..=max_degree.0.max(-1))
        .into_par_iter()
        .map(|d| Ok((Degree(d), alg.basis_monomials(Degree(d))?.len())))
        .collect()
}

#[cfg(test)]
mod tests;
