use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{DualSteenrod, MilnorBasisElement};
use crate::error::Result;
use crate::graded::{Degree, GradedPolynomial, Monomial, PolyRing};
use crate::json::decimal_degree;

/// Outcome of checking the Hopf algebra axioms degree by degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport {
    pub p: u64,
    #[serde(with = "decimal_degree")]
    pub max_degree: Degree,
    pub basis_checked: usize,
    pub pairs_checked: usize,
    pub coassociativity_failures: Vec<MilnorBasisElement>,
    pub counit_failures: Vec<MilnorBasisElement>,
    pub algebra_map_failures: Vec<(MilnorBasisElement, MilnorBasisElement)>,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.coassociativity_failures.is_empty() && self.counit_failures.is_empty() && self.algebra_map_failures.is_empty()
    }
}

struct Triple {
    ring: std::sync::Arc<PolyRing>,
    psi_then_id: Vec<GradedPolynomial>,
    id_then_psi: Vec<GradedPolynomial>,
}

fn triple(alg: &DualSteenrod) -> Result<Triple> {
    let (p, t, x) = (alg.p(), alg.tau_count(), alg.xi_count());
    let table = DualSteenrod::table(p, t, x, "_1")?
        .concat(&DualSteenrod::table(p, t, x, "_2")?)?
        .concat(&DualSteenrod::table(p, t, x, "_3")?)?;
    let ring = PolyRing::new(alg.ring().domain(), table);
    let n = alg.ngens();
    let shift = |y: &GradedPolynomial| {
        GradedPolynomial::from_terms(
            &ring,
            y.terms().map(|(m, c)| {
                let mut e = vec![0u32; n];
                e.extend_from_slice(m.exponents());
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    };
    let gen = |slot: usize, g: usize| GradedPolynomial::generator(&ring, slot * n + g);
    let mut psi_then_id = Vec::with_capacity(2 * n);
    let mut id_then_psi = Vec::with_capacity(2 * n);
    for g in 0..n {
        psi_then_id.push(alg.psi_generators()[g].embed_prefix(&ring));
        id_then_psi.push(gen(0, g));
    }
    for g in 0..n {
        psi_then_id.push(gen(2, g));
        id_then_psi.push(shift(&alg.psi_generators()[g]));
    }
    Ok(Triple { ring, psi_then_id, id_then_psi })
}

/// The two counit contractions `(ε⊗1)ψ(b)` and `(1⊗ε)ψ(b)` as elements of C.
fn counits(alg: &DualSteenrod, psi_b: &GradedPolynomial) -> (GradedPolynomial, GradedPolynomial) {
    let n = alg.ngens();
    let mut left = GradedPolynomial::zero(alg.ring());
    let mut right = GradedPolynomial::zero(alg.ring());
    for (m, c) in psi_b.terms() {
        let (l, r) = m.split_at(n);
        if l.is_one() {
            left.add_term(r.clone(), c.clone());
        }
        if r.is_one() {
            right.add_term(l, c.clone());
        }
    }
    (left, right)
}

/// Checks coassociativity, both counit laws and multiplicativity of ψ on
/// every basis element (resp. pair of basis elements) of total degree at
/// most `max_degree`.
pub fn verify_hopf(p: u64, max_degree: Degree) -> Result<HopfReport> {
    let alg = DualSteenrod::new(p, max_degree)?;
    let tri = triple(&alg)?;
    let basis: Vec<(i64, Monomial)> = (0..=max_degree.0)
        .map(|d| alg.basis_monomials(Degree(d)).map(|v| v.into_iter().map(move |m| (d, m))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    struct One {
        psi: GradedPolynomial,
        coassoc_ok: bool,
        counit_ok: bool,
    }
    let checked: Vec<One> = basis
        .par_iter()
        .map(|(_, m)| {
            let b = GradedPolynomial::monomial(alg.ring(), m.clone(), 1);
            let psi_b = alg.psi_poly(&b)?;
            let lhs = psi_b.map_algebra(&tri.psi_then_id, &tri.ring)?;
            let rhs = psi_b.map_algebra(&tri.id_then_psi, &tri.ring)?;
            let (l, r) = counits(&alg, &psi_b);
            Ok(One { psi: psi_b, coassoc_ok: lhs == rhs, counit_ok: l == b && r == b })
        })
        .collect::<Result<Vec<_>>>()?;

    let psi_of: HashMap<&Monomial, &GradedPolynomial> =
        basis.iter().zip(&checked).map(|((_, m), c)| (m, &c.psi)).collect();
    let positive: Vec<&(i64, Monomial)> = basis.iter().filter(|(d, _)| *d > 0).collect();
    let pairs: Vec<(usize, usize)> = (0..positive.len())
        .flat_map(|i| (i..positive.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| positive[i].0 + positive[j].0 <= max_degree.0)
        .collect();
    let pair_failures: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (&positive[i].1, &positive[j].1);
            let prod = &GradedPolynomial::monomial(alg.ring(), a.clone(), 1)
                * &GradedPolynomial::monomial(alg.ring(), b.clone(), 1);
            let lhs = match alg.psi_poly(&prod) {
                Ok(v) => v,
                Err(_) => return Some((i, j)),
            };
            let rhs = psi_of[a] * psi_of[b];
            (lhs != rhs).then_some((i, j))
        })
        .collect();

    let name = |m: &Monomial| alg.basis_of(m);
    Ok(HopfReport {
        p,
        max_degree,
        basis_checked: basis.len(),
        pairs_checked: pairs.len(),
        coassociativity_failures: basis
            .iter()
            .zip(&checked)
            .filter(|(_, c)| !c.coassoc_ok)
            .map(|((_, m), _)| name(m))
            .collect(),
        counit_failures: basis
            .iter()
            .zip(&checked)
            .filter(|(_, c)| !c.counit_ok)
            .map(|((_, m), _)| name(m))
            .collect(),
        algebra_map_failures: pair_failures
            .into_iter()
            .map(|(i, j)| (name(&positive[i].1), name(&positive[j].1)))
            .collect(),
    })
}
