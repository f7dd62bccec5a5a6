//! Exact minimization of energy functions over finite totally ordered label
//! sets.
//!
//! An energy `V(j)` over label tuples is expanded into a multilinear
//! pseudo-Boolean polynomial on ordered level variables ([`encode`]),
//! checked for submodularity ([`submod`]), and minimized exactly either by an
//! s-t minimum cut on a gadget network ([`graphcut`]) or by block-wise
//! coordinate fixing followed by a base solve ([`msfm`]).
//!
//! All coefficients are exact rationals; no floating point is used on the
//! solver path.

pub mod denoise;
pub mod encode;
pub mod error;
pub mod graphcut;
pub mod limits;
pub mod msfm;
pub mod pgm;
pub mod poly;
pub mod rational;
pub mod solve;
pub mod submod;
mod table;

pub use error::{Error, Result};
pub use limits::SolverLimits;
pub use poly::{Assignment, PartialAssignment, Polynomial, PolynomialBuilder, VarId};
pub use rational::Rational;
pub use submod::MinimizerReport;
