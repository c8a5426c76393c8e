//! Formal group laws over free Dirac algebras.
//!
//! Coordinates carry nonzero degrees of one sign. With coefficients in
//! positive degrees the coordinates sit in negative degrees, e.g. `x` of
//! degree −2 for the Lazard ring, whose generators `a_ij` then have degree
//! `2(i+j−1)`.

mod coordinate;
mod filtered;
mod lazard;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::graded::{CoefficientDomain, Degree, GradedPolynomial, PolyRing};
use crate::json::{decimal_degree, decimal_u64, GeneratorJson, RingJson, TermJson};
use crate::series::{first_difference, solve_recursively, substitute, SeriesFamily, SeriesSpace, SeriesVariable, TruncatedSeries};

pub use coordinate::CoordinateChange;
pub use filtered::{compose_filtered, filtered_series_space, filtered_to_series, series_to_filtered, FilteredAutomorphism};
pub use lazard::{lazard_graded_ranks, LazardPresentation, LazardRank, DEFAULT_LAZARD_BOUND};

/// A family `f_s(y, z)` of series in `2d` variables satisfying (or claimed
/// to satisfy) the formal group law axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    law: SeriesFamily,
    coordinate_degrees: Vec<Degree>,
}

/// Variable names used for the two arguments of a `d`-dimensional law.
pub fn law_variable_names(d: usize) -> (Vec<String>, Vec<String>) {
    ((1..=d).map(|i| format!("y{i}")).collect(), (1..=d).map(|i| format!("z{i}")).collect())
}

impl FormalGroupLaw {
    pub fn new(law: SeriesFamily) -> Result<Self> {
        let vars = law.space().variables();
        let d = law.len();
        if vars.len() != 2 * d {
            return Err(structural!("a {d}-dimensional law needs {} variables, found {}", 2 * d, vars.len()));
        }
        for s in 0..d {
            if vars[s].degree != vars[d + s].degree || law.target_degrees()[s] != vars[s].degree {
                return Err(structural!("component {s} does not have the degree of its coordinate"));
            }
            if !law.component(s).constant_term().is_zero() {
                return Err(domain!("component {s} has a nonzero constant term"));
            }
        }
        let coordinate_degrees = law.target_degrees().to_vec();
        Ok(FormalGroupLaw { law, coordinate_degrees })
    }

    /// The space `(y_1..y_d, z_1..z_d)` for coordinates of the given degrees.
    pub fn law_space(ring: &Arc<PolyRing>, coordinate_degrees: &[Degree], order: u64) -> Result<Arc<SeriesSpace>> {
        let (ys, zs) = law_variable_names(coordinate_degrees.len());
        let vars = ys
            .into_iter()
            .chain(zs)
            .zip(coordinate_degrees.iter().chain(coordinate_degrees))
            .map(|(n, &d)| SeriesVariable::new(n, d))
            .collect();
        SeriesSpace::new(ring, vars, order)
    }

    /// Space of `d` coordinates `x_1..x_d`, as used by inverses and
    /// coordinate changes.
    pub fn coordinate_space(ring: &Arc<PolyRing>, coordinate_degrees: &[Degree], order: u64) -> Result<Arc<SeriesSpace>> {
        let vars = coordinate_degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| SeriesVariable::new(format!("x{}", i + 1), d))
            .collect();
        SeriesSpace::new(ring, vars, order)
    }

    /// `f(y, z) = y + z`.
    pub fn additive(ring: &Arc<PolyRing>, coordinate_degrees: &[Degree], order: u64) -> Result<Self> {
        let space = Self::law_space(ring, coordinate_degrees, order)?;
        let d = coordinate_degrees.len();
        let comps = (0..d)
            .map(|s| &TruncatedSeries::variable(&space, s) + &TruncatedSeries::variable(&space, d + s))
            .collect();
        Self::new(SeriesFamily::new(&space, comps, coordinate_degrees.to_vec())?)
    }

    pub fn law(&self) -> &SeriesFamily {
        &self.law
    }

    pub fn coordinate_degrees(&self) -> &[Degree] {
        &self.coordinate_degrees
    }

    pub fn dimension(&self) -> usize {
        self.coordinate_degrees.len()
    }

    pub fn order(&self) -> u64 {
        self.law.space().order()
    }

    pub fn coeff_ring(&self) -> &Arc<PolyRing> {
        self.law.space().coeff_ring()
    }

    fn space_with(&self, names: &[&str]) -> Result<Arc<SeriesSpace>> {
        let vars = names
            .iter()
            .flat_map(|n| {
                self.coordinate_degrees
                    .iter()
                    .enumerate()
                    .map(move |(i, &d)| SeriesVariable::new(format!("{n}{}", i + 1), d))
            })
            .collect();
        SeriesSpace::new(self.coeff_ring(), vars, self.order())
    }

    fn block(space: &Arc<SeriesSpace>, k: usize, d: usize, degs: &[Degree]) -> Result<SeriesFamily> {
        let comps = (0..d).map(|s| TruncatedSeries::variable(space, k * d + s)).collect();
        SeriesFamily::new(space, comps, degs.to_vec())
    }

    /// Checks unit, associativity and commutativity coefficientwise.
    pub fn check_axioms(&self) -> Result<FglReport> {
        let d = self.dimension();
        let degs = &self.coordinate_degrees;
        let mut report = FglReport { unit_ok: true, assoc_ok: true, comm_ok: true, first_failure: None };
        let note = |axiom: Axiom, diff: Option<(usize, Vec<u32>, GradedPolynomial)>, report: &mut FglReport| {
            if let Some((component, exponents, coefficient)) = diff {
                match axiom {
                    Axiom::Unit => report.unit_ok = false,
                    Axiom::Associativity => report.assoc_ok = false,
                    Axiom::Commutativity => report.comm_ok = false,
                }
                if report.first_failure.is_none() {
                    report.first_failure = Some(AxiomFailure { axiom, component, exponents, coefficient });
                }
            }
        };

        let xs = self.space_with(&["x"])?;
        let x = Self::block(&xs, 0, d, degs)?;
        let zero = SeriesFamily::new(&xs, (0..d).map(|_| TruncatedSeries::zero(&xs)).collect(), degs.clone())?;
        let left = substitute(&self.law, &x.concat(&zero)?)?;
        let right = substitute(&self.law, &zero.concat(&x)?)?;
        let unit = first_difference(&left, &x).or_else(|| first_difference(&right, &x));
        note(Axiom::Unit, unit, &mut report);

        let s3 = self.space_with(&["x", "y", "z"])?;
        let (a, b, c) = (Self::block(&s3, 0, d, degs)?, Self::block(&s3, 1, d, degs)?, Self::block(&s3, 2, d, degs)?);
        let ab = substitute(&self.law, &a.concat(&b)?)?;
        let bc = substitute(&self.law, &b.concat(&c)?)?;
        let lhs = substitute(&self.law, &ab.concat(&c.reinterpret(ab.space())?)?)?;
        let rhs = substitute(&self.law, &a.reinterpret(bc.space())?.concat(&bc)?)?;
        note(Axiom::Associativity, first_difference(&lhs, &rhs), &mut report);

        let s2 = self.law.space();
        let (y, z) = (Self::block(s2, 0, d, degs)?, Self::block(s2, 1, d, degs)?);
        let swapped = substitute(&self.law, &z.concat(&y)?)?;
        note(Axiom::Commutativity, first_difference(&swapped, &self.law), &mut report);
        Ok(report)
    }

    /// The unique `i(x)` with `f(x, i(x)) = 0`; fails with a domain error if
    /// the unit axiom does not hold.
    pub fn inverse_series(&self) -> Result<SeriesFamily> {
        let xs = Self::coordinate_space(self.coeff_ring(), &self.coordinate_degrees, self.order())?;
        solve_recursively(&self.law, &xs)
    }

    pub fn to_json(&self) -> FglJson {
        let ring = RingJson::from_ring(self.coeff_ring());
        FglJson {
            domain: ring.domain,
            coefficient_generators: ring.generators,
            coordinate_degrees: self.coordinate_degrees.iter().map(|&d| DegreeJson(d)).collect(),
            order: self.order(),
            law: self
                .law
                .components()
                .iter()
                .map(|c| crate::json::terms_to_json(c.as_polynomial()))
                .collect(),
        }
    }

    pub fn from_json(doc: &FglJson) -> Result<Self> {
        let ring = RingJson { domain: doc.domain, generators: doc.coefficient_generators.clone() }.to_ring()?;
        let degs: Vec<Degree> = doc.coordinate_degrees.iter().map(|d| d.0).collect();
        if doc.law.len() != degs.len() {
            return Err(Error::Parse(format!(
                "law has {} components for {} coordinates",
                doc.law.len(),
                degs.len()
            )));
        }
        let space = Self::law_space(&ring, &degs, doc.order).map_err(|e| Error::Parse(e.to_string()))?;
        let comps = doc
            .law
            .iter()
            .map(|terms| {
                let p = crate::json::terms_from_json(space.combined_ring(), terms)?;
                TruncatedSeries::from_polynomial(&space, p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(SeriesFamily::new(&space, comps, degs)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unit,
    Associativity,
    Commutativity,
}

/// First coefficient at which an axiom fails: the difference of the two
/// sides at the given exponent vector of the given component.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub component: usize,
    pub exponents: Vec<u32>,
    pub coefficient: GradedPolynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FglReport {
    pub unit_ok: bool,
    pub assoc_ok: bool,
    pub comm_ok: bool,
    pub first_failure: Option<AxiomFailure>,
}

impl FglReport {
    pub fn passed(&self) -> bool {
        self.unit_ok && self.assoc_ok && self.comm_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeJson(#[serde(with = "decimal_degree")] pub Degree);

/// File format for a formal group law. Term exponents name coefficient
/// generators and the variables `y1..yd`, `z1..zd`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglJson {
    pub domain: CoefficientDomain,
    pub coefficient_generators: Vec<GeneratorJson>,
    pub coordinate_degrees: Vec<DegreeJson>,
    #[serde(with = "decimal_u64")]
    pub order: u64,
    pub law: Vec<Vec<TermJson>>,
}
