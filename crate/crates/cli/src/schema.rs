use std::collections::BTreeMap;

use dirac_core::graded::flatness::{FlatnessWitness, LinearSystem};
use dirac_core::graded::{FiniteAlgebra, Subalgebra};
use dirac_core::json::SeriesJson;
use dirac_core::steenrod::MilnorBasisElement;
use dirac_core::{Degree, Result};
use serde::Deserialize;

/// A finite graded F_p-algebra, by family or by structure constants.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraJson {
    PrimeField {
        p: u64,
    },
    /// F_p × ... × F_p with `n` factors.
    Split {
        p: u64,
        n: usize,
    },
    /// F_p[x]/(x^nilpotency) with `|x| = degree`.
    Truncated {
        p: u64,
        degree: i64,
        nilpotency: usize,
    },
    Explicit {
        p: u64,
        names: Vec<String>,
        degrees: Vec<i64>,
        /// `products[i][j]` is `e_i e_j` in coordinates.
        products: Vec<Vec<Vec<u64>>>,
        unit: Vec<u64>,
    },
}

impl AlgebraJson {
    pub fn build(&self) -> Result<FiniteAlgebra> {
        match self {
            AlgebraJson::PrimeField { p } => FiniteAlgebra::prime_field(*p),
            AlgebraJson::Split { p, n } => FiniteAlgebra::split(*p, *n),
            AlgebraJson::Truncated { p, degree, nilpotency } => {
                FiniteAlgebra::truncated_polynomial(*p, Degree(*degree), *nilpotency)
            }
            AlgebraJson::Explicit { p, names, degrees, products, unit } => FiniteAlgebra::new(
                *p,
                names.clone(),
                degrees.iter().map(|&d| Degree(d)).collect(),
                products.clone(),
                unit.clone(),
            ),
        }
    }
}

/// Second input of `fgl-act`: one series per coordinate in `x1..xd`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeJson {
    pub map: Vec<SeriesJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MilnorTermJson {
    #[serde(default)]
    pub tau: Vec<u32>,
    #[serde(default)]
    pub xi: BTreeMap<u32, u32>,
    #[serde(default = "one")]
    pub coefficient: i64,
}

fn one() -> i64 {
    1
}

impl MilnorTermJson {
    pub fn basis(&self, p: u64) -> Result<MilnorBasisElement> {
        MilnorBasisElement::new(p, &self.tau, &self.xi)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    /// One row per unknown, one column per equation; entries are vectors.
    pub coefficients: Vec<Vec<Vec<u64>>>,
    #[serde(default)]
    pub rhs: Option<Vec<Vec<u64>>>,
}

impl SystemJson {
    pub fn system(&self) -> LinearSystem<Vec<u64>> {
        LinearSystem { coefficients: self.coefficients.clone(), rhs: self.rhs.clone() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub b: Vec<Vec<u64>>,
    pub z: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FlatnessMode {
    /// Check a given witness for a given solution.
    Check { solution: Vec<Vec<u64>>, witness: WitnessJson },
    /// Search for a solution over the base with degrees in `[lo, hi]`.
    Search { window: [i64; 2] },
}

/// Input of `flatness-witness`. The base subalgebra is spanned by `base`,
/// or is the image of the unit when absent.
#[derive(Debug, Clone, Deserialize)]
pub struct FlatnessDoc {
    pub algebra: AlgebraJson,
    #[serde(default)]
    pub base: Option<Vec<Vec<u64>>>,
    pub system: SystemJson,
    #[serde(flatten)]
    pub mode: FlatnessMode,
}

impl FlatnessDoc {
    pub fn base(&self, alg: &FiniteAlgebra) -> Result<Subalgebra> {
        match &self.base {
            Some(span) => Subalgebra::new(alg, span.clone()),
            None => Ok(Subalgebra::unit_image(alg)),
        }
    }
}

impl WitnessJson {
    pub fn witness(&self) -> FlatnessWitness<Vec<u64>> {
        FlatnessWitness { b: self.b.clone(), z: self.z.clone() }
    }
}
