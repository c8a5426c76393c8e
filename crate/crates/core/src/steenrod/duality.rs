//! The composition law of filtered automorphisms agrees with ψ: taking the
//! coefficients of two automorphisms from the two tensor factors of `C⊗C`,
//! their composite has coefficients `ψ(τ_n)` and `ψ(ξ_n)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_odd_prime, tau_degree, DualSteenrod, TensorElement};
use crate::error::{domain, structural, Result};
use crate::formal::{compose_filtered, FilteredAutomorphism};
use crate::graded::{Degree, GradedPolynomial, PolyRing};
use crate::json::decimal_degree;

/// Values of an algebra map `C → R` on `τ_0..τ_m` and `ξ_1..ξ_m`.
#[derive(Debug, Clone)]
pub struct Character {
    pub ring: Arc<PolyRing>,
    pub tau: Vec<GradedPolynomial>,
    pub xi: Vec<GradedPolynomial>,
}

/// The filtered automorphism with `a_i = χ(τ_i)` and `b_i = χ(ξ_i)`.
pub fn automorphism_from_character(ch: &Character) -> Result<FilteredAutomorphism> {
    FilteredAutomorphism::new(&ch.ring, ch.tau.clone(), ch.xi.clone())
}

/// Which tensor factor supplies the first automorphism of the composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityOrientation {
    /// First factor from `C⊗1`; compared against ψ.
    #[default]
    LeftFirst,
    /// First factor from `1⊗C`; compared against `T∘ψ`.
    RightFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityEntry {
    pub generator: String,
    pub expected: TensorElement,
    pub computed: TensorElement,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub p: u64,
    #[serde(with = "decimal_degree")]
    pub jet_degree: Degree,
    pub jet_order: usize,
    pub orientation: DualityOrientation,
    pub entries: Vec<DualityEntry>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }
}

fn factor_character(alg: &DualSteenrod, m: usize, slot: usize) -> Character {
    let ring = alg.tensor_ring();
    let n = alg.ngens();
    Character {
        ring: ring.clone(),
        tau: (0..=m).map(|i| DualSteenrod::in_slot(ring, n, slot, alg.tau_index(i))).collect(),
        xi: (1..=m).map(|i| DualSteenrod::in_slot(ring, n, slot, alg.xi_index(i))).collect(),
    }
}

/// Compares the composite of the two tensor-factor automorphisms with ψ on
/// every generator of degree at most `jet_degree`.
pub fn duality_check(p: u64, jet_degree: Degree, orientation: DualityOrientation) -> Result<DualityReport> {
    check_odd_prime(p)?;
    if jet_degree.0 < 1 {
        return Err(domain!("jet degree must be at least {}", tau_degree(p, 0)));
    }
    let m = (1..).take_while(|&i| tau_degree(p, i).0 <= jet_degree.0).count();
    let alg = DualSteenrod::with_generators(p, m + 1, m)?;
    let (first, second) = match orientation {
        DualityOrientation::LeftFirst => (0, 1),
        DualityOrientation::RightFirst => (1, 0),
    };
    let f = automorphism_from_character(&factor_character(&alg, m, first))?;
    let g = automorphism_from_character(&factor_character(&alg, m, second))?;
    let composite = compose_filtered(&f, &g)?;
    if composite.jet_order() != m {
        return Err(structural!("composite has jet order {}, expected {m}", composite.jet_order()));
    }

    let mut entries = Vec::with_capacity(2 * m + 1);
    let mut push = |name: String, computed: &GradedPolynomial, gen: usize| {
        let psi = alg.tensor_from_poly(&alg.psi_generators()[gen]);
        let expected = match orientation {
            DualityOrientation::LeftFirst => psi,
            DualityOrientation::RightFirst => psi.swap_factors(),
        };
        let computed = alg.tensor_from_poly(computed);
        let ok = computed == expected;
        entries.push(DualityEntry { generator: name, expected, computed, ok });
    };
    for (i, a) in composite.odd_coefficients().iter().enumerate() {
        push(format!("tau{i}"), a, alg.tau_index(i));
    }
    for (k, b) in composite.even_coefficients().iter().enumerate() {
        push(format!("xi{}", k + 1), b, alg.xi_index(k + 1));
    }
    Ok(DualityReport { p, jet_degree, jet_order: m, orientation, entries })
}
