//! Exact computer algebra for graded-commutative ("Dirac") rings.
//!
//! Degrees are stored as twice the spin, so a spin ½ class has degree 1 and
//! odd degree means odd Koszul parity. The modules build on each other:
//!
//! * [`graded`]: free Dirac algebras over Z and F_p, module presentations,
//!   symmetric powers, finite algebras and flatness witnesses.
//! * [`linalg`]: Smith normal form over Z and elimination over F_p.
//! * [`series`]: truncated multivariate power series and substitution.
//! * [`formal`]: formal group laws, coordinate changes, filtered
//!   automorphisms of the Milnor formal group and Lazard-ring ranks.
//! * [`steenrod`]: the odd-primary dual Steenrod algebra as a Hopf algebra.
//! * [`descent`]: cosimplicial modules, Amitsur and cobar complexes, E2 pages.

pub mod descent;
pub mod error;
pub mod formal;
pub mod graded;
pub mod json;
pub mod linalg;
pub mod series;
pub mod steenrod;

pub use error::{Error, Result};
pub use graded::{koszul_sign, CoefficientDomain, Degree, GeneratorTable, GradedPolynomial, Monomial, PolyRing};
