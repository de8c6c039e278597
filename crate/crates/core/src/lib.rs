//! Matrix-valued relativistic phase-space transport.
//!
//! The crate is organized bottom-up:
//!
//! * [`clifford`] gamma matrices, Dirac adjoints and spinor Lorentz transforms;
//! * [`polyfield`] an exact symbol calculus for matrix-valued functions of
//!   `(x^μ, p_μ)` plus sampled grids;
//! * [`brackets`] the matrix Poisson bracket, the symmetrized bracket and the
//!   star product / Moyal bracket, with a claim ledger for their algebraic
//!   properties;
//! * [`hamiltonians`] the matrix super-Hamiltonians `K` and `𝒦`;
//! * [`dynamics`] transport solvers and their residual diagnostics;
//! * [`dirac_oracle`] exact plane-wave spinor solutions and `ψψ̄` checks;
//! * [`stargen`] stargenvalue residuals.
//!
//! All numerics are generic over [`Real`]; the aliases below fix `f64`.

pub mod brackets;
pub mod clifford;
pub mod dirac_oracle;
pub mod dynamics;
mod error;
pub mod hamiltonians;
pub mod polyfield;
mod scalar;
pub mod stargen;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Double-precision 4×4 complex matrix.
pub type Mat4 = clifford::ComplexMat4<f64>;
/// Single-precision 4×4 complex matrix.
pub type Mat4f = clifford::ComplexMat4<f32>;
pub type Gammas = clifford::GammaSet<f64>;
pub type Field64 = polyfield::Field<f64>;
pub type Field32 = polyfield::Field<f32>;
pub type Grid64 = polyfield::GridField<f64>;
pub type Point64 = polyfield::PhasePoint<f64>;
pub type Params64 = hamiltonians::PhysParams<f64>;
pub type Complex64 = num_complex::Complex<f64>;
