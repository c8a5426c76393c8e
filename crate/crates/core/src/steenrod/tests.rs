use std::collections::BTreeMap;

use super::*;
use crate::error::Error;

fn tau(i: u32) -> MilnorBasisElement {
    MilnorBasisElement::tau(3, i)
}

fn xi(i: u32, e: u32) -> MilnorBasisElement {
    MilnorBasisElement::xi(3, i, e)
}

fn mono(tau: &[u32], xi: &[(u32, u32)]) -> MilnorBasisElement {
    MilnorBasisElement::new(3, tau, &xi.iter().copied().collect()).unwrap()
}

fn elem(terms: &[(MilnorBasisElement, i64)]) -> SteenrodElement {
    SteenrodElement::from_terms(3, terms.iter().cloned()).unwrap()
}

fn tensor(terms: &[(MilnorBasisElement, MilnorBasisElement, u64)]) -> BTreeMap<(MilnorBasisElement, MilnorBasisElement), u64> {
    terms.iter().map(|(l, r, c)| ((l.clone(), r.clone()), *c)).collect()
}

#[test]
fn generator_degrees() {
    assert_eq!(degree_of(&tau(0)), Degree(1));
    assert_eq!(degree_of(&xi(1, 1)), Degree(4));
    assert_eq!(degree_of(&tau(1)), Degree(5));
    assert_eq!(degree_of(&MilnorBasisElement::xi(5, 2, 1)), Degree(48));
}

#[test]
fn repeated_tau_rejected() {
    assert!(matches!(MilnorBasisElement::new(3, &[1, 1], &BTreeMap::new()), Err(Error::Domain(_))));
}

#[test]
fn basis_in_degree_five() {
    assert_eq!(basis_in_degree(3, Degree(5)).unwrap(), vec![tau(1), mono(&[0], &[(1, 1)])]);
    assert_eq!(basis_in_degree(5, Degree(1)).unwrap(), vec![MilnorBasisElement::tau(5, 0)]);
}

#[test]
fn products_with_signs() {
    let t0 = SteenrodElement::basis(tau(0));
    let t1 = SteenrodElement::basis(tau(1));
    let x1 = SteenrodElement::basis(xi(1, 1));
    assert!(hopf_multiply(&t0, &t0).unwrap().is_zero());
    assert_eq!(hopf_multiply(&t0, &t1).unwrap(), elem(&[(mono(&[0, 1], &[]), 1)]));
    assert_eq!(hopf_multiply(&t1, &t0).unwrap(), elem(&[(mono(&[0, 1], &[]), -1)]));
    assert_eq!(hopf_multiply(&x1, &x1).unwrap(), SteenrodElement::basis(xi(1, 2)));
}

#[test]
fn psi_on_generators() {
    let one = MilnorBasisElement::one(3);
    let p = |m: MilnorBasisElement| psi(&SteenrodElement::basis(m)).unwrap().terms().clone();
    assert_eq!(p(tau(0)), tensor(&[(tau(0), one.clone(), 1), (one.clone(), tau(0), 1)]));
    assert_eq!(p(xi(1, 1)), tensor(&[(xi(1, 1), one.clone(), 1), (one.clone(), xi(1, 1), 1)]));
    assert_eq!(
        p(tau(1)),
        tensor(&[(tau(1), one.clone(), 1), (xi(1, 1), tau(0), 1), (one.clone(), tau(1), 1)])
    );
}

#[test]
fn psi_is_multiplicative_with_signs() {
    // ψ(τ0 τ1) = ψ(τ0) ψ(τ1); the τ1⊗1 · 1⊗τ0 cross term picks up a sign
    let t01 = SteenrodElement::basis(mono(&[0, 1], &[]));
    let one = MilnorBasisElement::one(3);
    let expected = tensor(&[
        (mono(&[0, 1], &[]), one.clone(), 1),
        (mono(&[0], &[(1, 1)]), tau(0), 1),
        (tau(0), tau(1), 1),
        (tau(1), tau(0), 2),
        (xi(1, 1), mono(&[0], &[]), 0),
        (one.clone(), mono(&[0, 1], &[]), 1),
    ]);
    let expected: BTreeMap<_, _> = expected.into_iter().filter(|(_, c)| *c != 0).collect();
    assert_eq!(psi(&t01).unwrap().terms(), &expected);
}

/// `(ε⊗1)ψ(x)` and `(1⊗ε)ψ(x)` read off the tensor terms.
fn counit_sides(t: &TensorElement) -> (SteenrodElement, SteenrodElement) {
    let left = t.terms().iter().filter(|((l, _), _)| l.is_one()).map(|((_, r), &c)| (r.clone(), c as i64));
    let right = t.terms().iter().filter(|((_, r), _)| r.is_one()).map(|((l, _), &c)| (l.clone(), c as i64));
    (SteenrodElement::from_terms(3, left).unwrap(), SteenrodElement::from_terms(3, right).unwrap())
}

#[test]
fn counit_on_tau1() {
    let t1 = SteenrodElement::basis(tau(1));
    let (l, r) = counit_sides(&psi(&t1).unwrap());
    assert_eq!(l, t1);
    assert_eq!(r, t1);
}

#[test]
fn coassociativity_on_xi2() {
    // everything involved is even, so no signs appear
    type Triple = BTreeMap<(MilnorBasisElement, MilnorBasisElement, MilnorBasisElement), u64>;
    let psi_of = |m: &MilnorBasisElement| psi(&SteenrodElement::basis(m.clone())).unwrap();
    let x2 = psi_of(&xi(2, 1));
    let mut lhs = Triple::new();
    let mut rhs = Triple::new();
    for ((l, r), &c) in x2.terms() {
        for ((ll, lr), &d) in psi_of(l).terms() {
            *lhs.entry((ll.clone(), lr.clone(), r.clone())).or_default() += c * d % 3;
        }
        for ((rl, rr), &d) in psi_of(r).terms() {
            *rhs.entry((l.clone(), rl.clone(), rr.clone())).or_default() += c * d % 3;
        }
    }
    let one = MilnorBasisElement::one(3);
    let expected: Triple = [
        (xi(2, 1), one.clone(), one.clone()),
        (xi(1, 3), xi(1, 1), one.clone()),
        (one.clone(), xi(2, 1), one.clone()),
        (xi(1, 3), one.clone(), xi(1, 1)),
        (one.clone(), xi(1, 3), xi(1, 1)),
        (one.clone(), one.clone(), xi(2, 1)),
    ]
    .into_iter()
    .map(|k| (k, 1))
    .collect();
    assert_eq!(lhs, expected);
    assert_eq!(rhs, expected);
}

/// Coefficients of `Π (1 + t^{|τ_i|}) Π 1/(1 − t^{|ξ_i|})` through `t^n`.
fn poincare_series(p: u64, n: usize) -> Vec<usize> {
    let mut series = vec![0usize; n + 1];
    series[0] = 1;
    for i in 0.. {
        let d = tau_degree(p, i).0 as usize;
        if d > n {
            break;
        }
        for k in (d..=n).rev() {
            series[k] += series[k - d];
        }
    }
    for i in 1.. {
        let d = xi_degree(p, i).0 as usize;
        if d > n {
            break;
        }
        for k in d..=n {
            series[k] += series[k - d];
        }
    }
    series
}

#[test]
fn poincare_small_degrees() {
    let dims: Vec<usize> = poincare_dims(3, Degree(5)).unwrap().into_iter().map(|(_, n)| n).collect();
    assert_eq!(dims, vec![1, 1, 0, 0, 1, 2]);
}

#[test]
fn poincare_matches_generating_function() {
    for p in [3, 5, 7] {
        let dims: Vec<usize> = poincare_dims(p, Degree(80)).unwrap().into_iter().map(|(_, n)| n).collect();
        assert_eq!(dims, poincare_series(p, 80), "p = {p}");
    }
}

#[test]
fn antipode_values_and_involution() {
    assert_eq!(antipode(&SteenrodElement::basis(tau(0))).unwrap(), elem(&[(tau(0), -1)]));
    assert_eq!(
        antipode(&SteenrodElement::basis(tau(1))).unwrap(),
        elem(&[(tau(1), -1), (mono(&[0], &[(1, 1)]), 1)])
    );
    let alg = DualSteenrod::new(3, Degree(24)).unwrap();
    for d in 1..=24 {
        for m in alg.basis_monomials(Degree(d)).unwrap() {
            let x = GradedPolynomial::monomial(alg.ring(), m, 1);
            let s = alg.antipode(&x).unwrap();
            assert_eq!(alg.antipode(&s).unwrap(), x);
            // the other convolution identity, Σ S(x') x'' = ε(x) = 0
            let mut acc = GradedPolynomial::zero(alg.ring());
            for (tm, c) in alg.psi_poly(&x).unwrap().terms() {
                let (l, r) = tm.split_at(alg.ngens());
                let sl = alg.antipode(&GradedPolynomial::monomial(alg.ring(), l, c.clone())).unwrap();
                acc = &acc + &(&sl * &GradedPolynomial::monomial(alg.ring(), r, 1));
            }
            assert!(acc.is_zero(), "degree {d}");
        }
    }
}

#[test]
fn swap_factors_sign() {
    let t0 = psi(&SteenrodElement::basis(tau(1))).unwrap();
    let swapped = t0.swap_factors();
    // ξ1⊗τ0 has an even factor, so no sign
    assert_eq!(swapped.terms()[&(tau(0), xi(1, 1))], 1);
    let both = psi(&SteenrodElement::basis(mono(&[0, 1], &[]))).unwrap().swap_factors();
    assert_eq!(both.terms()[&(tau(1), tau(0))], 2);
    assert_eq!(both.terms()[&(tau(0), tau(1))], 1);
}

#[test]
fn hopf_axioms_through_degree_thirty() {
    for p in [3, 5] {
        let report = verify_hopf(p, Degree(30)).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.pairs_checked > 0);
    }
}

#[test]
fn duality_reproduces_psi() {
    for orientation in [DualityOrientation::LeftFirst, DualityOrientation::RightFirst] {
        let report = duality_check(3, Degree(18), orientation).unwrap();
        assert_eq!(report.jet_order, 2);
        let names: Vec<&str> = report.entries.iter().map(|e| e.generator.as_str()).collect();
        assert_eq!(names, ["tau0", "tau1", "tau2", "xi1", "xi2"]);
        assert!(report.passed(), "{report:?}");
    }
    assert!(duality_check(5, Degree(50), DualityOrientation::LeftFirst).unwrap().passed());
}

#[test]
fn duality_tau1_entry() {
    let report = duality_check(3, Degree(5), DualityOrientation::LeftFirst).unwrap();
    let one = MilnorBasisElement::one(3);
    let entry = &report.entries[1];
    assert_eq!(entry.generator, "tau1");
    assert_eq!(
        entry.computed.terms(),
        &tensor(&[(tau(1), one.clone(), 1), (xi(1, 1), tau(0), 1), (one, tau(1), 1)])
    );
}

#[test]
fn wrong_orientation_is_detected() {
    // comparing the left-first composite against T∘ψ must fail on τ1
    let left = duality_check(3, Degree(5), DualityOrientation::LeftFirst).unwrap();
    let right = duality_check(3, Degree(5), DualityOrientation::RightFirst).unwrap();
    assert_ne!(left.entries[1].computed, right.entries[1].computed);
    assert_eq!(left.entries[1].computed.swap_factors(), right.entries[1].computed);
}

#[test]
fn character_transcription() {
    let ring = PolyRing::new(
        CoefficientDomain::prime_field(3).unwrap(),
        GeneratorTable::new([("a".to_string(), Degree(1))]).unwrap(),
    );
    let a = GradedPolynomial::var(&ring, "a");
    let ch = Character { ring: ring.clone(), tau: vec![a.clone()], xi: vec![] };
    let f = automorphism_from_character(&ch).unwrap();
    assert_eq!(f.odd_coefficients(), &[a]);
    assert!(f.even_coefficients().is_empty());
}

#[test]
fn prime_two_rejected() {
    assert!(matches!(basis_in_degree(2, Degree(3)), Err(Error::Domain(_))));
    assert!(matches!(verify_hopf(2, Degree(10)), Err(Error::Domain(_))));
    assert!(matches!(duality_check(2, Degree(8), DualityOrientation::LeftFirst), Err(Error::Domain(_))));
    assert!(matches!(basis_in_degree(9, Degree(3)), Err(Error::Domain(_))));
}

#[test]
fn basis_json_shape() {
    let m = mono(&[0, 2], &[(1, 3)]);
    assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"tau":[0,2],"xi":{"1":3}}"#);
}
