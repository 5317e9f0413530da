//! Computations in spaces of Lipschitz maps `Lip₀(X, Y)` and their
//! Lipschitz-free preduals, for `X = ℝⁿ` and `Y = ℝᵐ` with ℓ¹/ℓ²/ℓ∞ norms.
//!
//! Everything that admits exact arithmetic is generic over [`Scalar`]:
//! `f64` for float mode, [`Rational`] for exact mode.

pub mod duality;
pub mod error;
pub mod free_norm;
pub mod funcspec;
pub mod io;
pub mod linear;
pub mod lp;
pub mod mean_projection;
pub mod molecule;
pub mod quotient;
pub mod random;
pub mod real_line;
pub mod scalar;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use free_norm::{
    certify, free_norm, free_norm_dual, free_norm_primal, FlowEdge, NormCertificate,
};
pub use funcspec::{parse_function, Body, FunctionSpec};
pub use linear::LinearMap;
pub use lp::{LpProblem, LpSolution, LpStatus, Relation};
pub use molecule::{eta, eta_inverse, EtaPair, Molecule, Term};
pub use real_line::StepFunction;
pub use scalar::{rational, Rational, Scalar};
pub use space::{NormKind, Point, Space};
