//! Matrix super-Hamiltonians `K` and `𝒦` as exact fields, gauge potentials,
//! the field tensor and on-shell utilities.
//!
//! The energy slot of `𝒦` is the phase-space coordinate `c·p_0` (times `1₄`),
//! not a function of the spatial momenta; no energy branch is selected.

use serde::{Deserialize, Serialize};

use crate::clifford::{eta, ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::polyfield::{Field, Var, NVARS};
use crate::scalar::{creal, Real};

/// Mass, charge, speed of light and Planck constant. Defaults are all one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhysParams<T: Real> {
    pub m: T,
    pub q: T,
    pub c: T,
    pub hbar: T,
}

impl<T: Real> Default for PhysParams<T> {
    fn default() -> Self {
        Self {
            m: T::one(),
            q: T::one(),
            c: T::one(),
            hbar: T::one(),
        }
    }
}

impl<T: Real> PhysParams<T> {
    pub fn validate(&self) -> Result<()> {
        let fin = [self.m, self.q, self.c, self.hbar].iter().all(|v| v.is_finite());
        if !fin || self.m < T::zero() || self.c <= T::zero() || self.hbar <= T::zero() {
            return Err(Error::InvalidInput(format!(
                "physical parameters need m >= 0, c > 0, hbar > 0 (got m={}, c={}, hbar={})",
                self.m, self.c, self.hbar
            )));
        }
        Ok(())
    }

    /// `m c²`.
    pub fn rest_energy(&self) -> T {
        self.m * self.c * self.c
    }
}

/// One monomial of a custom potential: `coeff · Π (x^ν)^exps[ν]` added to `A_mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeTerm {
    pub mu: usize,
    pub exps: [u8; 4],
    pub coeff: f64,
}

/// Config-level selector for a gauge potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GaugeSpec {
    Zero,
    /// `A_2 = B x^1`: uniform field along z.
    Landau { b: f64 },
    Custom { terms: Vec<GaugeTerm> },
}

/// Covariant potential `A_μ(x)`; every component is an identity-coefficient
/// polynomial in the positions only.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePotential<T: Real> {
    pub a: [Field<T>; 4],
    pub label: String,
}

impl<T: Real> GaugePotential<T> {
    pub fn zero() -> Self {
        Self {
            a: std::array::from_fn(|_| Field::zero()),
            label: "zero".into(),
        }
    }

    pub fn landau(b: T) -> Self {
        let mut a: [Field<T>; 4] = std::array::from_fn(|_| Field::zero());
        a[2] = Field::var(Var::X(1), ComplexMat4::identity().scale_real(b));
        Self {
            a,
            label: format!("landau(B={b})"),
        }
    }

    pub fn custom(terms: &[GaugeTerm]) -> Result<Self> {
        let mut a: [Field<T>; 4] = std::array::from_fn(|_| Field::zero());
        for t in terms {
            if t.mu > 3 || !t.coeff.is_finite() {
                return Err(Error::InvalidInput(format!("bad gauge term {t:?}")));
            }
            let mut m = [0u8; NVARS];
            m[..4].copy_from_slice(&t.exps);
            a[t.mu] = a[t.mu].add(&Field::monomial(
                ComplexMat4::identity().scale_real(T::of(t.coeff)),
                m,
                [T::zero(); 4],
            ));
        }
        Ok(Self {
            a,
            label: "custom".into(),
        })
    }

    pub fn from_spec(spec: &GaugeSpec) -> Result<Self> {
        match spec {
            GaugeSpec::Zero => Ok(Self::zero()),
            GaugeSpec::Landau { b } => Ok(Self::landau(T::of(*b))),
            GaugeSpec::Custom { terms } => Self::custom(terms),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Field::is_zero)
    }

    /// Momentum independence and scalar (identity-proportional) coefficients.
    pub fn validate(&self) -> Result<()> {
        for (mu, f) in self.a.iter().enumerate() {
            if !f.is_momentum_free() {
                return Err(Error::InvalidInput(format!("A_{mu} depends on momentum")));
            }
            let scalar = f.coefficients().all(|(_, _, m)| *m == ComplexMat4::identity().scale(m[(0, 0)]));
            if !scalar {
                return Err(Error::InvalidInput(format!("A_{mu} has matrix-valued coefficients")));
            }
        }
        Ok(())
    }

    /// `∂_ν A_μ` as a field, indexed `[nu][mu]`.
    pub fn gradient(&self) -> [[Field<T>; 4]; 4] {
        std::array::from_fn(|nu| std::array::from_fn(|mu| self.a[mu].differentiate(Var::X(nu as u8))))
    }
}

/// `K_free = cγ^μ p_μ − mc² 1₄`.
pub fn k_free<T: Real>(params: &PhysParams<T>, set: &GammaSet<T>) -> Field<T> {
    k_em(params, &GaugePotential::zero(), set)
}

/// `𝒦_free = cγ^0γ^μ p_μ − mc²γ^0`; the `μ = 0` term is `c p_0 1₄`.
pub fn kcal_free<T: Real>(params: &PhysParams<T>, set: &GammaSet<T>) -> Field<T> {
    k_free(params, set).left_mul(set.gamma0())
}

/// `K = γ^μ(c p_μ − q A_μ(x)) − mc² 1₄`.
pub fn k_em<T: Real>(params: &PhysParams<T>, a: &GaugePotential<T>, set: &GammaSet<T>) -> Field<T> {
    let mut k = Field::constant(ComplexMat4::identity().scale_real(-params.rest_energy()));
    for mu in 0..4 {
        k = k.add(&Field::var(Var::P(mu as u8), set.gamma[mu].scale_real(params.c)));
        if !a.a[mu].is_zero() {
            k = k.sub(&a.a[mu].left_mul(&set.gamma[mu].scale_real(params.q)));
        }
    }
    k
}

/// `𝒦 = γ^0 K = 𝒦_free − qγ^0γ^μ A_μ(x)`.
pub fn kcal_em<T: Real>(params: &PhysParams<T>, a: &GaugePotential<T>, set: &GammaSet<T>) -> Field<T> {
    k_em(params, a, set).left_mul(set.gamma0())
}

/// Which super-Hamiltonian: `K` (γ form) or `𝒦 = γ^0 K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianForm {
    Gamma,
    Kcal,
}

impl HamiltonianForm {
    pub fn name(self) -> &'static str {
        match self {
            HamiltonianForm::Gamma => "gamma",
            HamiltonianForm::Kcal => "kcal",
        }
    }

    pub fn build<T: Real>(self, params: &PhysParams<T>, a: &GaugePotential<T>, set: &GammaSet<T>) -> Field<T> {
        match self {
            HamiltonianForm::Gamma => k_em(params, a, set),
            HamiltonianForm::Kcal => kcal_em(params, a, set),
        }
    }
}

/// `F_{μν} = ∂_μ A_ν − ∂_ν A_μ`, indexed `[mu][nu]`.
pub fn field_tensor<T: Real>(a: &GaugePotential<T>) -> [[Field<T>; 4]; 4] {
    let g = a.gradient();
    std::array::from_fn(|mu| std::array::from_fn(|nu| g[mu][nu].sub(&g[nu][mu])))
}

/// `p^μ p_μ − m²c²`.
pub fn mass_shell_check<T: Real>(p: &[T; 4], params: &PhysParams<T>) -> T {
    let pp = (0..4).fold(T::zero(), |acc, mu| acc + eta::<T>(mu) * p[mu] * p[mu]);
    pp - params.m * params.m * params.c * params.c
}

/// On-shell covariant momentum `(E/c, p_1, p_2, p_3)` with positive energy;
/// `p3` holds the covariant spatial components.
pub fn on_shell<T: Real>(p3: [T; 3], params: &PhysParams<T>) -> [T; 4] {
    let mc = params.m * params.c;
    let p0 = (mc * mc + p3.iter().fold(T::zero(), |a, v| a + *v * *v)).sqrt();
    [p0, p3[0], p3[1], p3[2]]
}

/// `Λ± = (mc·1₄ ± γ^μ p_μ)/(2mc)` for an on-shell (relative tolerance `1e-10`) momentum.
pub fn energy_projectors<T: Real>(
    p: &[T; 4],
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<(ComplexMat4<T>, ComplexMat4<T>)> {
    let mc = params.m * params.c;
    if !(mc > T::zero()) {
        return Err(Error::Domain("energy projectors need m > 0".into()));
    }
    let pp = mass_shell_check(p, params) + mc * mc;
    if !(pp > T::zero()) {
        return Err(Error::Domain("energy projectors need a timelike momentum".into()));
    }
    let scale = (0..4).fold(mc * mc, |a, mu| a + p[mu] * p[mu]);
    if (pp - mc * mc).abs() > T::of(1e-10) * scale {
        return Err(Error::Domain(format!(
            "momentum is off shell by {}",
            (pp - mc * mc).as_f64()
        )));
    }
    let slash = set.slash(p);
    let id = ComplexMat4::identity().scale_real(mc);
    let inv = creal(T::one() / (T::of(2.0) * mc));
    Ok(((id + slash) * inv, (id - slash) * inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{linalg, GammaRep};
    use crate::polyfield::{random_point, PhasePoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type F = Field<f64>;
    type M = ComplexMat4<f64>;

    fn params() -> PhysParams<f64> {
        PhysParams {
            m: 1.3,
            q: 0.7,
            c: 1.9,
            hbar: 0.5,
        }
    }

    #[test]
    fn k_free_at_rest() {
        let p = params();
        for rep in [GammaRep::Dirac, GammaRep::Chiral] {
            let g = GammaSet::new(rep);
            let k = k_free(&p, &g);
            let mc = p.m * p.c;
            let v = k.evaluate(&PhasePoint::at_momentum([mc, 0.0, 0.0, 0.0]));
            let expect = (g.gamma[0] - M::identity()).scale_real(p.rest_energy());
            assert!(v.dist(&expect) < 1e-14);
            for nu in 0..4u8 {
                assert!(k.differentiate(Var::X(nu)).is_zero());
            }
        }
        let massless = PhysParams { m: 0.0, ..params() };
        let g = GammaSet::new(GammaRep::Dirac);
        let pt = random_point(3, 1.0);
        assert!(k_free(&massless, &g).evaluate(&pt).dist(&g.slash(&pt.p).scale_real(massless.c)) < 1e-14);
    }

    #[test]
    fn kcal_free_identities() {
        let p = params();
        let g = GammaSet::new(GammaRep::Dirac);
        let kc = kcal_free(&p, &g);
        for nu in 0..4 {
            let d = kc.differentiate(Var::P(nu as u8));
            assert_eq!(d, F::constant((g.gamma[0] * g.gamma[nu]).scale_real(p.c)));
        }
        let direct = F::constant(g.gamma[0]).mul(&k_free(&p, &g)).unwrap();
        assert!(direct.dist(&kc) < 1e-15);
        let at0 = kc.evaluate(&PhasePoint::origin());
        assert!(at0.dist(&g.gamma[0].scale_real(-p.rest_energy())) < 1e-14);
    }

    #[test]
    fn em_hamiltonians() {
        let p = params();
        let g = GammaSet::new(GammaRep::Chiral);
        assert_eq!(k_em(&p, &GaugePotential::zero(), &g), k_free(&p, &g));
        assert_eq!(kcal_em(&p, &GaugePotential::zero(), &g), kcal_free(&p, &g));
        let b = 0.8;
        let landau = GaugePotential::landau(b);
        let expect = k_free(&p, &g).sub(&F::var(Var::X(1), g.gamma[2].scale_real(p.q * b)));
        assert!(k_em(&p, &landau, &g).dist(&expect) < 1e-15);

        let a = GaugePotential::<f64>::custom(&[
            GaugeTerm { mu: 0, exps: [0, 1, 1, 0], coeff: 0.3 },
            GaugeTerm { mu: 3, exps: [2, 0, 0, 1], coeff: -1.1 },
        ])
        .unwrap();
        a.validate().unwrap();
        let k = k_em(&p, &a, &g);
        let grad = a.gradient();
        for nu in 0..4 {
            let lhs = k.differentiate(Var::X(nu as u8));
            let rhs = (0..4).fold(F::zero(), |acc, mu| acc.sub(&grad[nu][mu].left_mul(&g.gamma[mu].scale_real(p.q))));
            assert!(lhs.dist(&rhs) < 1e-14);
            assert_eq!(k.differentiate(Var::P(nu as u8)), F::constant(g.gamma[nu].scale_real(p.c)));
        }
    }

    #[test]
    fn landau_field_tensor() {
        let f = field_tensor(&GaugePotential::<f64>::landau(2.5));
        for mu in 0..4 {
            for nu in 0..4 {
                let expect = match (mu, nu) {
                    (1, 2) => 2.5,
                    (2, 1) => -2.5,
                    _ => 0.0,
                };
                assert_eq!(f[mu][nu], F::constant(M::identity().scale_real(expect)));
            }
        }
        assert!(field_tensor(&GaugePotential::<f64>::custom(&[GaugeTerm { mu: 1, exps: [0; 4], coeff: 4.0 }]).unwrap())
            .iter()
            .flatten()
            .all(F::is_zero));
    }

    #[test]
    fn mass_shell() {
        let p = params();
        let mc = p.m * p.c;
        assert!(mass_shell_check(&[mc, 0.0, 0.0, 0.0], &p).abs() < 1e-14);
        let q = on_shell([0.3, -1.2, 2.0], &p);
        assert!(mass_shell_check(&q, &p).abs() < 1e-12);
        assert!((mass_shell_check(&[0.0; 4], &p) + mc * mc).abs() < 1e-14);
    }

    #[test]
    fn projectors() {
        let p = params();
        let g = GammaSet::new(GammaRep::Dirac);
        let mc = p.m * p.c;
        let (lp, lm) = energy_projectors(&[mc, 0.0, 0.0, 0.0], &p, &g).unwrap();
        assert!(lp.dist(&M::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0; 4], [0.0; 4]])) < 1e-15);
        assert!((lp * lm).max_abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let q = on_shell(std::array::from_fn(|_| rng.gen_range(-3.0..3.0)), &p);
            let (lp, lm) = energy_projectors(&q, &p, &g).unwrap();
            let s = g.slash(&q);
            let tol = 1e-12 * (1.0 + q[0] * q[0]);
            assert!((lp + lm).dist(&M::identity()) < tol);
            assert!((lp * lp).dist(&lp) < tol);
            assert!((lm * lm).dist(&lm) < tol);
            assert!((s * lp).dist(&lp.scale_real(mc)) < tol * mc);
            assert!((s * lm).dist(&lm.scale_real(-mc)) < tol * mc);
        }
        let q = on_shell([1.0, 2.0, -0.5], &p);
        let (lp, _) = energy_projectors(&q, &p, &g).unwrap();
        assert_eq!(linalg::rank(&lp, 1e-10), 2);

        assert!(energy_projectors(&[0.0, 1.0, 0.0, 0.0], &p, &g).is_err());
        assert!(energy_projectors(&[mc * 2.0, 0.0, 0.0, 0.0], &p, &g).is_err());
        assert!(energy_projectors(&[1.0, 0.0, 0.0, 0.0], &PhysParams { m: 0.0, ..p }, &g).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(PhysParams::<f64>::default().validate().is_ok());
        assert!(PhysParams { c: 0.0, ..PhysParams::<f64>::default() }.validate().is_err());
        assert!(PhysParams { m: -1.0, ..PhysParams::<f64>::default() }.validate().is_err());
    }
}
