use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::graded::{CoefficientDomain, Degree, Monomial, PolyRing};
use crate::linalg::{lattice_cokernel, FpMatrix};

/// A homogeneous relation: one scalar per generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: Degree,
    pub entries: Vec<BigInt>,
}

/// Finitely presented graded module: generators with degrees modulo
/// homogeneous relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModulePresentation {
    domain: CoefficientDomain,
    generators: Vec<Degree>,
    relations: Vec<Relation>,
}

impl GradedModulePresentation {
    pub fn new(domain: CoefficientDomain, generators: Vec<Degree>, relations: Vec<Relation>) -> Result<Self> {
        for (k, rel) in relations.iter().enumerate() {
            if rel.entries.len() != generators.len() {
                return Err(structural!(
                    "relation {k} has {} entries for {} generators",
                    rel.entries.len(),
                    generators.len()
                ));
            }
            for (g, c) in rel.entries.iter().enumerate() {
                if !c.is_zero() && generators[g] != rel.degree {
                    return Err(structural!(
                        "relation {k} of degree {} involves generator {g} of degree {}",
                        rel.degree,
                        generators[g]
                    ));
                }
            }
        }
        Ok(GradedModulePresentation { domain, generators, relations })
    }

    pub fn free(domain: CoefficientDomain, generators: Vec<Degree>) -> Self {
        GradedModulePresentation { domain, generators, relations: Vec::new() }
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn generators(&self) -> &[Degree] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Serre twist: shift every degree by `shift` (double-degree units, so a
    /// shift of 1 is spin ½).
    pub fn twist(&self, shift: i64) -> Self {
        GradedModulePresentation {
            domain: self.domain,
            generators: self.generators.iter().map(|&d| d + Degree(shift)).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation { degree: r.degree + Degree(shift), entries: r.entries.clone() })
                .collect(),
        }
    }

    /// Rank and torsion invariant factors of the degree-`d` piece.
    pub fn graded_piece(&self, d: Degree) -> GradedPiece {
        let gens: Vec<usize> = (0..self.generators.len()).filter(|&g| self.generators[g] == d).collect();
        let rels = self.relations.iter().filter(|r| r.degree == d);
        match self.domain {
            CoefficientDomain::Integers => {
                let columns = rels.map(|r| {
                    gens.iter()
                        .enumerate()
                        .filter(|(_, &g)| !r.entries[g].is_zero())
                        .map(|(i, &g)| (i, r.entries[g].clone()))
                        .collect()
                });
                let (rank, torsion) = lattice_cokernel(gens.len(), columns);
                GradedPiece { rank, torsion }
            }
            CoefficientDomain::PrimeField { p } => {
                let pb = BigInt::from(p);
                let rows: Vec<Vec<i64>> = rels
                    .map(|r| {
                        gens.iter()
                            .map(|&g| {
                                i64::try_from(r.entries[g].mod_floor(&pb)).expect("reduced scalar fits")
                            })
                            .collect()
                    })
                    .collect();
                let rank = if rows.is_empty() { 0 } else { FpMatrix::from_rows(p, &rows).rank() };
                GradedPiece { rank: gens.len() - rank, torsion: Vec::new() }
            }
        }
    }

    /// Sorted list of degrees carrying generators.
    pub fn generator_degrees(&self) -> Vec<Degree> {
        let mut v = self.generators.clone();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// The `d`-th symmetric power of a free graded module in the graded-commutative
/// sense.
///
/// Generators of the result are the monomials of total exponent `d`. A
/// monomial repeating an odd generator is 2-torsion over Z and vanishes over
/// an odd prime field.
pub fn sym_power(m: &GradedModulePresentation, d: i64, domain: CoefficientDomain) -> Result<GradedModulePresentation> {
    if d < 0 {
        return Err(domain!("symmetric power exponent must be nonnegative, got {d}"));
    }
    if !m.is_free() {
        return Err(domain!("symmetric powers are only computed for free modules"));
    }
    if m.domain != domain {
        return Err(structural!("module is over {} but {} was requested", m.domain, domain));
    }
    let mut generators = Vec::new();
    let mut torsion_gens = Vec::new();
    let n = m.generators.len();
    for exps in compositions(d as u32, n) {
        let deg: i64 = exps.iter().zip(&m.generators).map(|(&e, g)| e as i64 * g.0).sum();
        let odd_square = exps.iter().zip(&m.generators).any(|(&e, g)| g.is_odd() && e >= 2);
        if odd_square {
            match domain {
                CoefficientDomain::PrimeField { p } if p != 2 => continue,
                CoefficientDomain::Integers => torsion_gens.push(generators.len()),
                _ => {}
            }
        }
        generators.push(Degree(deg));
    }
    let relations = torsion_gens
        .into_iter()
        .map(|g| {
            let mut entries = vec![BigInt::zero(); generators.len()];
            entries[g] = BigInt::from(2);
            Relation { degree: generators[g], entries }
        })
        .collect();
    GradedModulePresentation::new(domain, generators, relations)
}

/// All exponent vectors of length `n` with entries summing to `total`.
pub(crate) fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = rest;
            out.push(cur.clone());
            return;
        }
        for e in (0..=rest).rev() {
            cur[i] = e;
            rec(rest - e, i + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, 0, &mut vec![0; n], &mut out);
    out
}

impl PolyRing {
    /// Monomials of degree exactly `d`, in canonical order.
    ///
    /// Needs every generator to have positive degree; otherwise a graded piece
    /// may be infinite.
    pub fn monomials_in_degree(&self, d: Degree) -> Result<Vec<Monomial>> {
        if let Some(g) = self.table().iter().find(|g| g.degree.0 <= 0) {
            return Err(Error::Unsupported(format!(
                "generator {:?} has nonpositive degree {}; graded pieces may be infinite",
                g.name, g.degree
            )));
        }
        let degs: Vec<i64> = self.table().iter().map(|g| g.degree.0).collect();
        let odd = self.odd_mask().to_vec();
        let kill = self.domain().kills_odd_squares();
        let mut out = Vec::new();
        let mut cur = vec![0u32; degs.len()];
        fn rec(i: usize, rest: i64, degs: &[i64], odd: &[bool], kill: bool, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == degs.len() {
                if rest == 0 {
                    out.push(Monomial::from_exponents(cur.clone()));
                }
                return;
            }
            let max = rest / degs[i];
            let max = if kill && odd[i] { max.min(1) } else { max };
            for e in 0..=max {
                cur[i] = e as u32;
                rec(i + 1, rest - e * degs[i], degs, odd, kill, cur, out);
            }
            cur[i] = 0;
        }
        if d.0 >= 0 {
            rec(0, d.0, &degs, &odd, kill, &mut cur, &mut out);
        }
        out.sort();
        Ok(out)
    }

    /// Rank and torsion of the degree-`d` piece of the free algebra.
    pub fn graded_piece(&self, d: Degree) -> Result<GradedPiece> {
        let monos = self.monomials_in_degree(d)?;
        let mut rank = 0;
        let mut torsion = Vec::new();
        for m in &monos {
            if self.domain() == CoefficientDomain::Integers && m.has_odd_square(self.odd_mask()) {
                torsion.push(BigInt::from(2));
            } else {
                rank += 1;
            }
        }
        Ok(GradedPiece { rank, torsion })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GeneratorTable;

    fn z() -> CoefficientDomain {
        CoefficientDomain::Integers
    }

    #[test]
    fn sym_of_half_spin_line() {
        let m = GradedModulePresentation::free(z(), vec![Degree(1)]);
        let s1 = sym_power(&m, 1, z()).unwrap();
        assert_eq!(s1.graded_piece(Degree(1)), GradedPiece { rank: 1, torsion: vec![] });
        let s3 = sym_power(&m, 3, z()).unwrap();
        assert_eq!(s3.generators(), &[Degree(3)]);
        assert_eq!(s3.relations().len(), 1);
        assert_eq!(s3.relations()[0].entries, vec![BigInt::from(2)]);
        let s2 = sym_power(&m, 2, z()).unwrap();
        assert_eq!(s2.graded_piece(Degree(2)), GradedPiece { rank: 0, torsion: vec![BigInt::from(2)] });
    }

    #[test]
    fn sym_of_even_line_is_polynomial() {
        let m = GradedModulePresentation::free(z(), vec![Degree(2)]);
        let s = sym_power(&m, 5, z()).unwrap();
        assert_eq!(s.generators(), &[Degree(10)]);
        assert!(s.is_free());
    }

    #[test]
    fn sym_zero_is_base_ring() {
        let m = GradedModulePresentation::free(z(), vec![Degree(1), Degree(4)]);
        let s = sym_power(&m, 0, z()).unwrap();
        assert_eq!(s.generators(), &[Degree(0)]);
    }

    #[test]
    fn negative_sym_power_is_domain_error() {
        let m = GradedModulePresentation::free(z(), vec![Degree(1)]);
        assert!(matches!(sym_power(&m, -1, z()), Err(Error::Domain(_))));
    }

    #[test]
    fn odd_squares_vanish_over_f3() {
        let f3 = CoefficientDomain::prime_field(3).unwrap();
        let m = GradedModulePresentation::free(f3, vec![Degree(1)]);
        assert!(sym_power(&m, 2, f3).unwrap().generators().is_empty());
    }

    #[test]
    fn twist_examples() {
        let m = GradedModulePresentation::free(z(), vec![Degree(0)]);
        assert_eq!(m.twist(0), m);
        assert_eq!(m.twist(1).generators(), &[Degree(1)]);
        let s = sym_power(&GradedModulePresentation::free(z(), vec![Degree(1)]), 2, z()).unwrap();
        assert_eq!(s.twist(3).twist(-3), s);
    }

    #[test]
    fn piece_with_relation() {
        let m = GradedModulePresentation::new(
            z(),
            vec![Degree(0), Degree(0)],
            vec![Relation { degree: Degree(0), entries: vec![BigInt::from(1), BigInt::from(-1)] }],
        )
        .unwrap();
        assert_eq!(m.graded_piece(Degree(0)), GradedPiece { rank: 1, torsion: vec![] });
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let r = GradedModulePresentation::new(
            z(),
            vec![Degree(0), Degree(2)],
            vec![Relation { degree: Degree(0), entries: vec![BigInt::from(1), BigInt::from(1)] }],
        );
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    #[test]
    fn free_algebra_piece_needs_positive_degrees() {
        let t = GeneratorTable::new([("u", Degree(0))]).unwrap();
        let r = PolyRing::new(z(), t);
        assert!(matches!(r.graded_piece(Degree(0)), Err(Error::Unsupported(_))));
        let t = GeneratorTable::new([("x", Degree(1)), ("y", Degree(2))]).unwrap();
        let r = PolyRing::new(z(), t);
        // degree 2: x^2 (2-torsion) and y
        let piece = r.graded_piece(Degree(2)).unwrap();
        assert_eq!(piece.rank, 1);
        assert_eq!(piece.torsion, vec![BigInt::from(2)]);
    }
}
