use num_complex::Complex;

use super::gamma::{eta, GammaSet};
use super::linalg::{expm, expm_series};
use super::mat4::ComplexMat4;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Spinor representative `S(Λ)` of a Lorentz transform together with its vector form.
#[derive(Clone, Debug)]
pub struct SpinorTransform<T: Real> {
    pub s: ComplexMat4<T>,
    pub s_inv: ComplexMat4<T>,
    /// `Λ^μ_ν`, row index μ.
    pub lambda: [[T; 4]; 4],
}

/// Generator `ω_{μν}` of a rotation by `angle` about spatial axis `axis` (1, 2 or 3).
pub fn rotation_generator<T: Real>(axis: usize, angle: T) -> [[T; 4]; 4] {
    let (a, b) = match axis {
        1 => (2, 3),
        2 => (3, 1),
        3 => (1, 2),
        _ => panic!("spatial axis must be 1, 2 or 3"),
    };
    let mut w = [[T::zero(); 4]; 4];
    w[a][b] = angle;
    w[b][a] = -angle;
    w
}

/// Generator `ω_{μν}` of a boost with the given rapidity along spatial axis `axis`.
pub fn boost_generator<T: Real>(axis: usize, rapidity: T) -> [[T; 4]; 4] {
    assert!((1..=3).contains(&axis), "spatial axis must be 1, 2 or 3");
    let mut w = [[T::zero(); 4]; 4];
    w[0][axis] = rapidity;
    w[axis][0] = -rapidity;
    w
}

/// `S = exp(−(i/4) ω_{μν} σ^{μν})` and `Λ = exp(ω^μ_ν)`.
pub fn spin_transform<T: Real>(omega: &[[T; 4]; 4], set: &GammaSet<T>) -> Result<SpinorTransform<T>> {
    let scale = omega
        .iter()
        .flatten()
        .fold(T::one(), |m, x| m.max(x.abs()));
    for mu in 0..4 {
        for nu in 0..4 {
            if (omega[mu][nu] + omega[nu][mu]).abs() > T::epsilon() * scale * T::of(8.0) {
                return Err(Error::InvalidInput(format!(
                    "omega must be antisymmetric (entry {mu}{nu})"
                )));
            }
        }
    }
    let mut gen = ComplexMat4::<T>::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            if omega[mu][nu] != T::zero() {
                gen += set.sigma[mu][nu].scale_real(omega[mu][nu]);
            }
        }
    }
    let gen = gen.scale(Complex::new(T::zero(), -T::of(0.25)));
    let s = expm(&gen);
    let s_inv = expm(&(-gen));

    let vector_gen = ComplexMat4::from_fn(|mu, nu| creal(eta::<T>(mu) * omega[mu][nu]));
    let big = expm_series(&vector_gen);
    let lambda = std::array::from_fn(|mu| std::array::from_fn(|nu| big[(mu, nu)].re));
    Ok(SpinorTransform { s, s_inv, lambda })
}

impl<T: Real> SpinorTransform<T> {
    /// `max_μ ‖S⁻¹ γ^μ S − Λ^μ_ν γ^ν‖`.
    pub fn intertwining_residual(&self, set: &GammaSet<T>) -> T {
        (0..4)
            .map(|mu| {
                let lhs = self.s_inv * set.gamma[mu] * self.s;
                let rhs: ComplexMat4<T> = (0..4)
                    .map(|nu| set.gamma[nu].scale_real(self.lambda[mu][nu]))
                    .sum();
                lhs.dist(&rhs)
            })
            .fold(T::zero(), T::max)
    }

    /// `‖S S⁻¹ − 1₄‖`.
    pub fn inverse_residual(&self) -> T {
        (self.s * self.s_inv).dist(&ComplexMat4::identity())
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn lambda_inverse(&self) -> [[T; 4]; 4] {
        std::array::from_fn(|mu| {
            std::array::from_fn(|nu| eta::<T>(mu) * self.lambda[nu][mu] * eta::<T>(nu))
        })
    }
}
