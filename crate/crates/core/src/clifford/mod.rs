//! Clifford-algebra core: gamma-matrix representations, derived matrices,
//! Dirac adjoints and Lorentz spinor transforms.

mod gamma;
pub mod linalg;
mod lorentz;
mod mat4;

pub use gamma::{eta, minkowski_dot, raise, GammaRep, GammaSet, InvariantCheck, METRIC};
pub use lorentz::{boost_generator, rotation_generator, spin_transform, SpinorTransform};
pub use mat4::{anticommutator, commutator, ComplexMat4};

use crate::scalar::Real;

/// `γ^0 M† γ^0`, using the γ^0 of `set`.
pub fn dirac_adjoint<T: Real>(m: &ComplexMat4<T>, set: &GammaSet<T>) -> ComplexMat4<T> {
    set.dirac_adjoint(m)
}
