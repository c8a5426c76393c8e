use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer degree of a homogeneous element, stored as twice the spin.
///
/// A spin ½ generator has `Degree(1)`, a spin 1 generator `Degree(2)`. Only the
/// parity matters for signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub i64);

impl Degree {
    pub const ZERO: Degree = Degree(0);

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 != 0
    }

    /// Spin as a (numerator, denominator) pair in lowest terms.
    pub fn spin(self) -> (i64, i64) {
        if self.0 % 2 == 0 {
            (self.0 / 2, 1)
        } else {
            (self.0, 2)
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree(self.0 + rhs.0)
    }
}

impl AddAssign for Degree {
    fn add_assign(&mut self, rhs: Degree) {
        self.0 += rhs.0;
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        Degree(self.0 - rhs.0)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree(-self.0)
    }
}

impl Mul<i64> for Degree {
    type Output = Degree;
    fn mul(self, rhs: i64) -> Degree {
        Degree(self.0 * rhs)
    }
}

impl From<i64> for Degree {
    fn from(v: i64) -> Self {
        Degree(v)
    }
}

/// The sign `(-1)^(a·b)` picked up when transposing elements of degrees `a` and `b`.
pub fn koszul_sign(a: Degree, b: Degree) -> i64 {
    if a.is_odd() && b.is_odd() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_examples() {
        assert_eq!(koszul_sign(Degree(1), Degree(1)), -1);
        assert_eq!(koszul_sign(Degree(2), Degree(7)), 1);
        assert_eq!(koszul_sign(Degree(3), Degree(5)), -1);
        assert_eq!(koszul_sign(Degree(-1), Degree(3)), -1);
        assert_eq!(koszul_sign(Degree(0), Degree(-3)), 1);
    }

    #[test]
    fn spin_reduces() {
        assert_eq!(Degree(1).spin(), (1, 2));
        assert_eq!(Degree(4).spin(), (2, 1));
        assert_eq!(Degree(-3).spin(), (-3, 2));
    }
}
