use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The base ring scalars live in: the integers or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientDomain {
    Integers,
    PrimeField {
        #[serde(with = "crate::json::decimal_u64")]
        p: u64,
    },
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientDomain {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(domain!("{p} is not prime"));
        }
        Ok(CoefficientDomain::PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientDomain::Integers => 0,
            CoefficientDomain::PrimeField { p } => *p,
        }
    }

    /// True when odd-degree elements square to zero (prime fields of odd
    /// characteristic).
    pub fn kills_odd_squares(&self) -> bool {
        matches!(self, CoefficientDomain::PrimeField { p } if *p != 2)
    }

    /// Canonical representative of `c`: least nonnegative residue over F_p,
    /// `c` itself over Z.
    pub fn reduce(&self, c: &BigInt) -> BigInt {
        match self {
            CoefficientDomain::Integers => c.clone(),
            CoefficientDomain::PrimeField { p } => c.mod_floor(&BigInt::from(*p)),
        }
    }

    /// Multiplicative inverse of a scalar, if it is a unit.
    pub fn inverse(&self, c: &BigInt) -> Option<BigInt> {
        match self {
            CoefficientDomain::Integers => {
                if c.abs().is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            CoefficientDomain::PrimeField { p } => {
                let p = BigInt::from(*p);
                let c = c.mod_floor(&p);
                if c.is_zero() {
                    return None;
                }
                let e = c.extended_gcd(&p);
                Some(e.x.mod_floor(&p))
            }
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Integers => write!(f, "Z"),
            CoefficientDomain::PrimeField { p } => write!(f, "F_{p}"),
        }
    }
}
