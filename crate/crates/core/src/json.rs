//! JSON interchange for polynomials, presentations and series.
//!
//! Every integer (degrees, exponents, coefficients, primes) is written as a
//! decimal string so arbitrary-precision values survive the round trip.
//! Readers accept plain JSON numbers too.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::series::{SeriesSpace, TruncatedSeries};
use crate::graded::{
    CoefficientDomain, Degree, GeneratorTable, GradedModulePresentation, GradedPolynomial, Monomial, PolyRing, Relation,
};

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Num(serde_json::Number),
    Str(String),
}

impl NumOrString {
    fn text(self) -> String {
        match self {
            NumOrString::Num(n) => n.to_string(),
            NumOrString::Str(s) => s,
        }
    }
}

macro_rules! decimal_module {
    ($name:ident, $ty:ty) => {
        pub mod $name {
            use serde::{Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&v.to_string())
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                let raw = super::NumOrString::deserialize(d)?.text();
                raw.trim().parse::<$ty>().map_err(|e| serde::de::Error::custom(format!("bad integer {raw:?}: {e}")))
            }
        }
    };
}

decimal_module!(decimal_u64, u64);
decimal_module!(decimal_i64, i64);
decimal_module!(decimal_u32, u32);
decimal_module!(decimal_usize, usize);
decimal_module!(decimal_bigint, num_bigint::BigInt);

pub mod decimal_degree {
    use serde::{Deserializer, Serializer};

    use crate::graded::Degree;

    pub fn serialize<S: Serializer>(v: &Degree, s: S) -> Result<S::Ok, S::Error> {
        super::decimal_i64::serialize(&v.0, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Degree, D::Error> {
        super::decimal_i64::deserialize(d).map(Degree)
    }
}

pub mod decimal_vec_i64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[i64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i64>, D::Error> {
        let raw: Vec<super::NumOrString> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|x| {
                let t = x.text();
                t.trim().parse::<i64>().map_err(|e| serde::de::Error::custom(format!("bad integer {t:?}: {e}")))
            })
            .collect()
    }
}

pub mod decimal_vec_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        let raw: Vec<super::NumOrString> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|x| {
                let t = x.text();
                t.trim().parse::<u64>().map_err(|e| serde::de::Error::custom(format!("bad integer {t:?}: {e}")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    #[serde(with = "decimal_degree")]
    pub degree: Degree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    /// generator name → exponent (zero exponents omitted)
    pub exponents: BTreeMap<String, ExponentJson>,
    #[serde(with = "decimal_bigint")]
    pub coefficient: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentJson(#[serde(with = "decimal_u32")] pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub domain: CoefficientDomain,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub domain: CoefficientDomain,
    pub generators: Vec<GeneratorJson>,
    pub terms: Vec<TermJson>,
}

impl RingJson {
    pub fn from_ring(ring: &PolyRing) -> Self {
        RingJson {
            domain: ring.domain(),
            generators: ring
                .table()
                .iter()
                .map(|g| GeneratorJson { name: g.name.clone(), degree: g.degree })
                .collect(),
        }
    }

    pub fn to_ring(&self) -> Result<Arc<PolyRing>> {
        if let CoefficientDomain::PrimeField { p } = self.domain {
            CoefficientDomain::prime_field(p).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let table = GeneratorTable::new(self.generators.iter().map(|g| (g.name.clone(), g.degree)))
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(PolyRing::new(self.domain, table))
    }
}

pub(crate) fn terms_to_json(p: &GradedPolynomial) -> Vec<TermJson> {
    let table = p.ring().table();
    p.terms()
        .map(|(m, c)| TermJson {
            exponents: m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (table.get(i).name.clone(), ExponentJson(e)))
                .collect(),
            coefficient: c.clone(),
        })
        .collect()
}

pub(crate) fn terms_from_json(ring: &Arc<PolyRing>, terms: &[TermJson]) -> Result<GradedPolynomial> {
    let mut out = GradedPolynomial::zero(ring);
    for t in terms {
        let mut e = vec![0u32; ring.ngens()];
        for (name, exp) in &t.exponents {
            let i = ring
                .table()
                .position(name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            e[i] = exp.0;
        }
        out.add_term(Monomial::from_exponents(e), t.coefficient.clone());
    }
    Ok(out)
}

impl GradedPolynomial {
    pub fn to_json(&self) -> PolynomialJson {
        let ring = RingJson::from_ring(self.ring());
        PolynomialJson { domain: ring.domain, generators: ring.generators, terms: terms_to_json(self) }
    }

    pub fn from_json(doc: &PolynomialJson) -> Result<Self> {
        let ring = RingJson { domain: doc.domain, generators: doc.generators.clone() }.to_ring()?;
        terms_from_json(&ring, &doc.terms)
    }

    /// Parses against an existing ring; the document's ring must match.
    pub fn from_json_in(ring: &Arc<PolyRing>, doc: &PolynomialJson) -> Result<Self> {
        let theirs = RingJson { domain: doc.domain, generators: doc.generators.clone() };
        if theirs != RingJson::from_ring(ring) {
            return Err(structural!("polynomial document does not match the expected ring"));
        }
        terms_from_json(ring, &doc.terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationGeneratorJson {
    #[serde(with = "decimal_degree")]
    pub degree: Degree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    #[serde(with = "decimal_degree")]
    pub degree: Degree,
    pub entries: Vec<DecimalBigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecimalBigInt(#[serde(with = "decimal_bigint")] pub BigInt);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub domain: CoefficientDomain,
    pub generators: Vec<PresentationGeneratorJson>,
    pub relations: Vec<RelationJson>,
}

impl GradedModulePresentation {
    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            domain: self.domain(),
            generators: self.generators().iter().map(|&degree| PresentationGeneratorJson { degree }).collect(),
            relations: self
                .relations()
                .iter()
                .map(|r| RelationJson {
                    degree: r.degree,
                    entries: r.entries.iter().cloned().map(DecimalBigInt).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &PresentationJson) -> Result<Self> {
        GradedModulePresentation::new(
            doc.domain,
            doc.generators.iter().map(|g| g.degree).collect(),
            doc.relations
                .iter()
                .map(|r| Relation { degree: r.degree, entries: r.entries.iter().map(|e| e.0.clone()).collect() })
                .collect(),
        )
    }
}

/// A truncated series: variables, truncation order, and the coefficient of
/// each exponent vector as a polynomial document over the coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub variables: Vec<GeneratorJson>,
    #[serde(with = "decimal_u64")]
    pub order: u64,
    pub coefficients: Vec<SeriesCoefficientJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCoefficientJson {
    pub exponents: Vec<ExponentJson>,
    pub value: PolynomialJson,
}

impl TruncatedSeries {
    pub fn to_json(&self) -> SeriesJson {
        let space = self.space();
        SeriesJson {
            variables: space
                .variables()
                .iter()
                .map(|v| GeneratorJson { name: v.name.clone(), degree: v.degree })
                .collect(),
            order: space.order(),
            coefficients: self
                .coefficients()
                .into_iter()
                .map(|(e, c)| SeriesCoefficientJson { exponents: e.into_iter().map(ExponentJson).collect(), value: c.to_json() })
                .collect(),
        }
    }

    /// Parses a series in `space`; the document's variables and order must
    /// match it.
    pub fn from_json_in(space: &Arc<SeriesSpace>, doc: &SeriesJson) -> Result<Self> {
        let same_vars = doc.variables.len() == space.nvars()
            && doc.variables.iter().zip(space.variables()).all(|(g, v)| g.name == v.name && g.degree == v.degree);
        if !same_vars || doc.order != space.order() {
            return Err(structural!("series document does not match the expected variables and order"));
        }
        let table = doc
            .coefficients
            .iter()
            .map(|c| {
                if c.exponents.len() != space.nvars() {
                    return Err(Error::Parse(format!(
                        "exponent vector has {} entries for {} variables",
                        c.exponents.len(),
                        space.nvars()
                    )));
                }
                let value = GradedPolynomial::from_json_in(space.coeff_ring(), &c.value)?;
                Ok((c.exponents.iter().map(|e| e.0).collect(), value))
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_coefficients(space, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesVariable;

    #[test]
    fn polynomial_document_shape() {
        let table = GeneratorTable::new([("x", Degree(1)), ("u", Degree(2))]).unwrap();
        let r = PolyRing::new(CoefficientDomain::Integers, table);
        let x = GradedPolynomial::var(&r, "x");
        let u = GradedPolynomial::var(&r, "u");
        let f = &(&x * &u).scale(&BigInt::from(-7)) + &u;
        let v = serde_json::to_value(f.to_json()).unwrap();
        assert_eq!(v["domain"]["kind"], "integers");
        assert_eq!(v["generators"][0]["degree"], "1");
        let back = GradedPolynomial::from_json(&serde_json::from_value(v).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn accepts_numeric_fields() {
        let doc = r#"{"domain":{"kind":"prime_field","p":3},"generators":[{"name":"t","degree":1}],
                      "terms":[{"exponents":{"t":1},"coefficient":4}]}"#;
        let p = GradedPolynomial::from_json(&serde_json::from_str(doc).unwrap()).unwrap();
        assert_eq!(p.to_string(), "t");
    }

    #[test]
    fn composite_modulus_is_parse_error() {
        let doc = r#"{"domain":{"kind":"prime_field","p":"4"},"generators":[],"terms":[]}"#;
        assert!(matches!(
            GradedPolynomial::from_json(&serde_json::from_str(doc).unwrap()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn series_round_trip() {
        let table = GeneratorTable::new([("a", Degree(2))]).unwrap();
        let r = PolyRing::new(CoefficientDomain::prime_field(5).unwrap(), table);
        let space = SeriesSpace::new(&r, vec![SeriesVariable::new("x", Degree(-2))], 8).unwrap();
        let a = GradedPolynomial::var(&r, "a");
        let f = &TruncatedSeries::variable(&space, 0) + &TruncatedSeries::term(&space, &[2], &a).unwrap();
        let doc = f.to_json();
        assert_eq!(serde_json::to_value(&doc).unwrap()["coefficients"][0]["exponents"][0], "1");
        assert_eq!(TruncatedSeries::from_json_in(&space, &doc).unwrap(), f);
        let other = SeriesSpace::new(&r, vec![SeriesVariable::new("y", Degree(-2))], 8).unwrap();
        assert!(TruncatedSeries::from_json_in(&other, &doc).is_err());
    }
}
