//! Dirac-ring bookkeeping: degrees and Koszul signs, free graded-commutative
//! algebras over Z and F_p, graded module presentations, finite algebras and
//! the equational flatness criteria.

mod algebra;
mod degree;
mod domain;
pub mod flatness;
mod module;
mod polynomial;
mod table;

pub use algebra::{FiniteAlgebra, GeneratorSubring, GradedRing, Subalgebra, Subring};
pub use degree::{koszul_sign, Degree};
pub use domain::CoefficientDomain;
pub(crate) use domain::is_prime;

pub use module::{sym_power, GradedModulePresentation, GradedPiece, Relation};
pub use polynomial::{GradedPolynomial, Monomial, PolyRing};
pub use table::{Generator, GeneratorTable};
