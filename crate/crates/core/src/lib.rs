//! Exact analysis of generalized Vandermonde determinants.
//!
//! Given an exponent set Γ ⊂ ℕⁿ, this crate builds the determinant
//! `V(X, Γ) = det(X_i^{γ_ℓ})`, decides whether it is absolutely irreducible
//! over a field of given characteristic, produces constructive certificates
//! for the reducible cases, and cross-checks verdicts through the regular
//! subdivision induced by a perturbed paraboloid lifting of Γ.

pub mod cli;
pub mod error;
pub mod exponents;
pub mod irreducibility;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod tropical;
pub mod vandermonde;

pub use error::{Error, Result};
pub use exponents::{ExponentVector, Support};
pub use poly::{Monomial, Ring, SparsePoly, Var};
