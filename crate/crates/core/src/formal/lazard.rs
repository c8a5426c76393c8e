use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FormalGroupLaw;
use crate::error::{Error, Result};
use crate::graded::{CoefficientDomain, Degree, GeneratorTable, GradedPolynomial, PolyRing};
use crate::json::{decimal_degree, decimal_usize, DecimalBigInt};
use crate::series::{substitute, SeriesFamily, SeriesSpace, SeriesVariable, TruncatedSeries};

pub const DEFAULT_LAZARD_BOUND: i64 = 16;

const COORDINATE: Degree = Degree(-2);

/// Generators and associativity relations of the Lazard ring through a
/// given degree.
///
/// The universal law is `x + y + Σ_{i≤j} a_ij (x^i y^j + [i≠j] x^j y^i)` with
/// `x` of degree −2 and `a_ij` of degree `2(i+j−1)`. Unit and commutativity
/// hold by construction, so the relations are the coefficients of
/// `F(F(x,y),z) − F(x,F(y,z))`.
#[derive(Debug, Clone)]
pub struct LazardPresentation {
    max_degree: Degree,
    ring: Arc<PolyRing>,
    relations: Vec<GradedPolynomial>,
}

impl LazardPresentation {
    pub fn new(max_degree: Degree) -> Result<Self> {
        let n = (max_degree.0.max(0) / 2) as u32;
        let mut gens = Vec::new();
        for s in 2..=n + 1 {
            for i in 1..=s / 2 {
                gens.push((format!("a{}_{}", i, s - i), Degree(2 * (s as i64 - 1))));
            }
        }
        let ring = PolyRing::new(CoefficientDomain::Integers, GeneratorTable::new(gens)?);
        let order = 2 * (u64::from(n) + 1);
        let law = universal_law(&ring, order)?;
        let mut relations = Vec::new();
        if n > 0 {
            let vars = ["x", "y", "z"].iter().map(|v| SeriesVariable::new(*v, COORDINATE)).collect();
            let s3 = SeriesSpace::new(&ring, vars, order)?;
            let var = |i| SeriesFamily::new(&s3, vec![TruncatedSeries::variable(&s3, i)], vec![COORDINATE]);
            let (x, y, z) = (var(0)?, var(1)?, var(2)?);
            let xy = substitute(law.law(), &x.concat(&y)?)?;
            let yz = substitute(law.law(), &y.concat(&z)?)?;
            let lhs = substitute(law.law(), &xy.concat(&z.reinterpret(xy.space())?)?)?;
            let rhs = substitute(law.law(), &x.reinterpret(yz.space())?.concat(&yz)?)?;
            let diff = lhs.sub(&rhs.reinterpret(lhs.space())?)?;
            relations = diff.component(0).coefficients().into_values().collect();
        }
        Ok(LazardPresentation { max_degree, ring, relations })
    }

    pub fn max_degree(&self) -> Degree {
        self.max_degree
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn relations(&self) -> &[GradedPolynomial] {
        &self.relations
    }

    /// Rank and torsion of the degree-`d` piece.
    pub fn graded_piece(&self, d: Degree) -> Result<LazardRank> {
        let basis = self.ring.monomials_in_degree(d)?;
        let index: HashMap<_, _> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut vectors = Vec::new();
        for rel in &self.relations {
            let rd = match rel.homogeneous_degree()? {
                Some(rd) if rd.0 <= d.0 => rd,
                _ => continue,
            };
            for m in self.ring.monomials_in_degree(Degree(d.0 - rd.0))? {
                let prod = rel * &GradedPolynomial::monomial(&self.ring, m, 1);
                let v: Vec<(usize, BigInt)> = prod.terms().map(|(mm, c)| (index[mm], c.clone())).collect();
                vectors.push(v);
            }
        }
        let (rank, torsion) = crate::linalg::lattice_cokernel(basis.len(), vectors);
        Ok(LazardRank { degree: d, rank, torsion: torsion.into_iter().map(DecimalBigInt).collect() })
    }
}

/// The universal law over the generators of `ring` (named `a{i}_{j}`).
fn universal_law(ring: &Arc<PolyRing>, order: u64) -> Result<FormalGroupLaw> {
    let space = FormalGroupLaw::law_space(ring, &[COORDINATE], order)?;
    let mut f = &TruncatedSeries::variable(&space, 0) + &TruncatedSeries::variable(&space, 1);
    for g in ring.table().iter() {
        let (i, j) = g.name[1..].split_once('_').expect("generator names are a{i}_{j}");
        let (i, j): (u32, u32) = (i.parse().expect("index"), j.parse().expect("index"));
        let a = GradedPolynomial::var(ring, &g.name);
        f = &f + &TruncatedSeries::term(&space, &[i, j], &a)?;
        if i != j {
            f = &f + &TruncatedSeries::term(&space, &[j, i], &a)?;
        }
    }
    FormalGroupLaw::new(SeriesFamily::new(&space, vec![f], vec![COORDINATE])?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LazardRank {
    #[serde(with = "decimal_degree")]
    pub degree: Degree,
    #[serde(with = "decimal_usize")]
    pub rank: usize,
    pub torsion: Vec<DecimalBigInt>,
}

/// Ranks and torsion of the Lazard ring in every even degree `2..=max_degree`.
///
/// Degrees are independent and computed in parallel.
pub fn lazard_graded_ranks(max_degree: Degree, bound: i64) -> Result<Vec<LazardRank>> {
    if max_degree.0 > bound {
        return Err(Error::Resource(format!(
            "requested degree {max_degree} exceeds the configured bound {bound}"
        )));
    }
    let pres = LazardPresentation::new(max_degree)?;
    let degrees: Vec<i64> = (2..=max_degree.0).step_by(2).collect();
    degrees.par_iter().map(|&d| pres.graded_piece(Degree(d))).collect()
}
