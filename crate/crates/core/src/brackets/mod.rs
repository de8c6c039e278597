//! Matrix brackets on exact fields.
//!
//! Three candidates generate the matrix transport equations: the ordered
//! matrix Poisson bracket, its symmetrized (anticommutator) variant, and the
//! Moyal bracket of the matrix star product. [`claims`] turns their algebraic
//! properties into checked reports.

pub mod claims;
pub mod fd;
mod star;

use serde::{Deserialize, Serialize};

pub use claims::{axiom_suite, leading_expansion_check, ClaimReport, Verdict, EXACT_TOL, FD_TOL};
pub use star::{moyal_bracket, star_product, star_series, StarProduct, StarSeries};

use crate::error::{Error, Result};
use crate::polyfield::{Field, Var};
use crate::scalar::Real;

/// Default truncation order for star series.
pub const DEFAULT_MAX_ORDER: usize = 16;

/// `Σ_ν ∂_{p_ν}K ∂_{x^ν}W − ∂_{p_ν}W ∂_{x^ν}K`, operand order as written.
pub fn poisson_bracket<T: Real>(k: &Field<T>, w: &Field<T>) -> Result<Field<T>> {
    let mut out = Field::zero().with_limits(k.limits());
    for nu in 0..4u8 {
        let (x, p) = (Var::X(nu), Var::P(nu));
        let a = k.differentiate(p).mul(&w.differentiate(x))?;
        let b = w.differentiate(p).mul(&k.differentiate(x))?;
        out = out.try_add(&a.sub(&b))?;
    }
    Ok(out)
}

/// `Σ_ν (∂_{p_ν}K ∂_{x^ν}W + ∂_{x^ν}W ∂_{p_ν}K) − (∂_{x^ν}K ∂_{p_ν}W + ∂_{p_ν}W ∂_{x^ν}K)`.
///
/// Reduces to twice the Poisson bracket when all coefficients commute.
pub fn extended_bracket<T: Real>(k: &Field<T>, w: &Field<T>) -> Result<Field<T>> {
    let mut out = Field::zero().with_limits(k.limits());
    for nu in 0..4u8 {
        let (x, p) = (Var::X(nu), Var::P(nu));
        let (pk, xk, pw, xw) = (k.differentiate(p), k.differentiate(x), w.differentiate(p), w.differentiate(x));
        let plus = pk.mul(&xw)?.add(&xw.mul(&pk)?);
        let minus = xk.mul(&pw)?.add(&pw.mul(&xk)?);
        out = out.try_add(&plus.sub(&minus))?;
    }
    Ok(out)
}

/// Which bracket generates the dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BracketKind {
    Poisson,
    Extended,
    Moyal { hbar: f64, max_order: usize },
}

impl BracketKind {
    pub fn moyal(hbar: f64) -> Self {
        BracketKind::Moyal {
            hbar,
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BracketKind::Poisson => "poisson",
            BracketKind::Extended => "extended",
            BracketKind::Moyal { .. } => "moyal",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BracketKind::Moyal { hbar, .. } if !(hbar > 0.0 && hbar.is_finite()) => {
                Err(Error::InvalidInput(format!("moyal bracket needs finite hbar > 0, got {hbar}")))
            }
            _ => Ok(()),
        }
    }

    /// Applies the bracket. A Moyal series cut off before termination is an error
    /// here; use [`moyal_bracket`] directly to accept approximate results.
    pub fn apply<T: Real>(&self, k: &Field<T>, w: &Field<T>) -> Result<Field<T>> {
        match *self {
            BracketKind::Poisson => poisson_bracket(k, w),
            BracketKind::Extended => extended_bracket(k, w),
            BracketKind::Moyal { hbar, max_order } => {
                let r = moyal_bracket(k, w, T::of(hbar), max_order)?;
                if !r.exact {
                    return Err(Error::Resource(format!("star series did not terminate within order {max_order}")));
                }
                Ok(r.field)
            }
        }
    }
}

impl std::fmt::Display for BracketKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BracketKind::Moyal { hbar, .. } => write!(f, "moyal(hbar={hbar})"),
            other => f.write_str(other.name()),
        }
    }
}
