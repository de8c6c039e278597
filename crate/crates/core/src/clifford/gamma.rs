use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::mat4::{anticommutator, commutator, ComplexMat4};
use crate::scalar::{creal, imag_unit, Real, C};

/// Diagonal of the Minkowski metric, signature (+,−,−,−).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// `η^{μμ}` (equal to `η_{μμ}`).
#[inline]
pub fn eta<T: Real>(mu: usize) -> T {
    T::of(METRIC[mu])
}

/// Raises (or lowers) a four-vector index with the diagonal metric.
pub fn raise<T: Real>(v: &[T; 4]) -> [T; 4] {
    [v[0], -v[1], -v[2], -v[3]]
}

/// `η^{μν} a_μ b_ν` for two covectors.
pub fn minkowski_dot<T: Real>(a: &[T; 4], b: &[T; 4]) -> T {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRep {
    Dirac,
    Chiral,
}

impl std::fmt::Display for GammaRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaRep::Dirac => write!(f, "dirac"),
            GammaRep::Chiral => write!(f, "chiral"),
        }
    }
}

/// A representation's γ^μ together with the derived α^i and σ^{μν}.
#[derive(Clone, Debug)]
pub struct GammaSet<T: Real> {
    pub rep: GammaRep,
    pub gamma: [ComplexMat4<T>; 4],
    pub alpha: [ComplexMat4<T>; 3],
    pub sigma: [[ComplexMat4<T>; 4]; 4],
}

/// Residual of one algebraic identity checked on a [`GammaSet`].
#[derive(Clone, Debug)]
pub struct InvariantCheck {
    pub name: String,
    pub residual: f64,
}

fn pauli<T: Real>(k: usize) -> [[C<T>; 2]; 2] {
    let o = creal(T::zero());
    let one = creal(T::one());
    let i = imag_unit::<T>();
    match k {
        1 => [[o, one], [one, o]],
        2 => [[o, -i], [i, o]],
        3 => [[one, o], [o, -one]],
        _ => [[one, o], [o, one]],
    }
}

/// Assembles a 4×4 matrix from 2×2 blocks.
fn blocks<T: Real>(b: [[[[C<T>; 2]; 2]; 2]; 2]) -> ComplexMat4<T> {
    ComplexMat4::from_fn(|i, j| b[i / 2][j / 2][i % 2][j % 2])
}

fn neg2<T: Real>(m: [[C<T>; 2]; 2]) -> [[C<T>; 2]; 2] {
    [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]]
}

impl<T: Real> GammaSet<T> {
    /// Standard Dirac-basis or chiral-basis gamma matrices.
    pub fn new(rep: GammaRep) -> Self {
        let z = pauli::<T>(4).map(|r| r.map(|_| creal(T::zero())));
        let id = pauli::<T>(0);
        let g0 = match rep {
            GammaRep::Dirac => blocks([[id, z], [z, neg2(id)]]),
            GammaRep::Chiral => blocks([[z, id], [id, z]]),
        };
        let spatial = |k: usize| blocks([[z, pauli::<T>(k)], [neg2(pauli::<T>(k)), z]]);
        Self::from_gammas(rep, [g0, spatial(1), spatial(2), spatial(3)])
    }

    /// Builds the derived matrices from an arbitrary table of γ^μ. No invariant is
    /// enforced here; see [`GammaSet::check_invariants`].
    pub fn from_gammas(rep: GammaRep, gamma: [ComplexMat4<T>; 4]) -> Self {
        let alpha = [1, 2, 3].map(|i| gamma[0] * gamma[i]);
        let half_i = Complex::new(T::zero(), T::of(0.5));
        let sigma = std::array::from_fn(|mu| {
            std::array::from_fn(|nu| commutator(&gamma[mu], &gamma[nu]).scale(half_i))
        });
        Self {
            rep,
            gamma,
            alpha,
            sigma,
        }
    }

    pub fn gamma0(&self) -> &ComplexMat4<T> {
        &self.gamma[0]
    }

    /// `γ^0 M† γ^0`.
    pub fn dirac_adjoint(&self, m: &ComplexMat4<T>) -> ComplexMat4<T> {
        self.gamma[0] * m.adjoint() * self.gamma[0]
    }

    /// `γ^μ v_μ` for a covector `v`.
    pub fn slash(&self, v: &[T; 4]) -> ComplexMat4<T> {
        (0..4).map(|mu| self.gamma[mu].scale_real(v[mu])).sum()
    }

    /// `α^i k_i` for spatial covector components.
    pub fn alpha_dot(&self, k: &[T; 3]) -> ComplexMat4<T> {
        (0..3).map(|i| self.alpha[i].scale_real(k[i])).sum()
    }

    /// Residuals of every defining identity: the Clifford relation,
    /// the α relations and Dirac Hermiticity of each γ^μ.
    pub fn check_invariants(&self) -> Vec<InvariantCheck> {
        let id = ComplexMat4::<T>::identity();
        let mut out = Vec::new();
        for mu in 0..4 {
            for nu in mu..4 {
                let expect = if mu == nu {
                    id.scale_real(T::of(2.0) * eta::<T>(mu))
                } else {
                    ComplexMat4::zero()
                };
                out.push(InvariantCheck {
                    name: format!("clifford[{mu}{nu}]"),
                    residual: anticommutator(&self.gamma[mu], &self.gamma[nu])
                        .dist(&expect)
                        .as_f64(),
                });
            }
        }
        for i in 0..3 {
            out.push(InvariantCheck {
                name: format!("alpha_def[{}]", i + 1),
                residual: self.alpha[i].dist(&(self.gamma[0] * self.gamma[i + 1])).as_f64(),
            });
            for j in i..3 {
                let expect = if i == j {
                    id.scale_real(T::of(2.0))
                } else {
                    ComplexMat4::zero()
                };
                out.push(InvariantCheck {
                    name: format!("alpha_anticomm[{}{}]", i + 1, j + 1),
                    residual: anticommutator(&self.alpha[i], &self.alpha[j])
                        .dist(&expect)
                        .as_f64(),
                });
            }
            out.push(InvariantCheck {
                name: format!("alpha_gamma0[{}]", i + 1),
                residual: anticommutator(&self.alpha[i], &self.gamma[0]).max_abs().as_f64(),
            });
        }
        for mu in 0..4 {
            out.push(InvariantCheck {
                name: format!("dirac_hermitian[{mu}]"),
                residual: self
                    .dirac_adjoint(&self.gamma[mu])
                    .dist(&self.gamma[mu])
                    .as_f64(),
            });
        }
        out
    }
}
