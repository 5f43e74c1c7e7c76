//! Construction of quantum algebras from Lie bialgebras by the dual
//! Poisson-Lie group method.
//!
//! Given a Lie bialgebra (g, delta) the library dualizes it, exponentiates a
//! faithful representation of the dual Lie algebra into a symbolic group
//! element, derives the coproduct from the tensorized group law, solves for
//! the unique compatible Poisson-Lie bracket through a quadratic ansatz (or
//! the Sklyanin bracket in the coboundary case), transports everything
//! through coordinate changes, and verifies the commutator quantization
//! order by order.
//!
//! All arithmetic is exact over Q(i)(z, eta, ...): rational functions in the
//! deformation parameters with Gaussian-rational coefficients.

pub mod bialgebra;
pub mod context;
pub mod coproduct;
pub mod error;
pub mod expr;
pub mod grouprep;
pub mod linalg;
pub mod ncquant;
pub mod parse;
pub mod plsolver;
pub mod print;
pub mod scalar;
pub mod series;
pub mod sparse;
pub mod tensor;
pub mod transform;

pub use context::{Context, CoordId, ParamId};
pub use error::{Error, Result};
pub use expr::{Expr, LinForm, Monomial, TermKey};
pub use scalar::{GaussRat, Poly, Scalar};
