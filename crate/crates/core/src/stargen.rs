//! Stargenvalue residuals `K ⋆ W − εW` and `W ⋆ K − εW`.
//!
//! Hamiltonians keep the momenta as phase-space variables, so a residual is
//! a field; it is reduced to a number by taking the largest value over a
//! list of phase points (or the coefficient norm when no points are given).
//! The projector family `W = Λ±(p)` solves the equations at momentum `p`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::brackets::{moyal_bracket, star_product, ClaimReport};
use crate::clifford::{ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::{energy_projectors, GaugePotential, HamiltonianForm, PhysParams};
use crate::polyfield::{Field, PhasePoint, Var};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

/// One stargenvalue problem.
#[derive(Clone, Debug)]
pub struct StargenCase<T: Real> {
    pub label: String,
    pub hamiltonian: Field<T>,
    pub w: Field<T>,
    pub epsilon: T,
    pub side: Side,
    /// Where the residual fields are evaluated; empty means coefficient norm.
    pub points: Vec<PhasePoint<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StargenResidual<T: Real> {
    pub left: Option<T>,
    pub right: Option<T>,
    /// False if a star series was truncated before terminating.
    pub exact: bool,
}

impl<T: Real> StargenResidual<T> {
    /// `left + right` over the requested sides.
    pub fn total(&self) -> T {
        self.left.unwrap_or(T::zero()) + self.right.unwrap_or(T::zero())
    }

    pub fn max(&self) -> T {
        self.left.unwrap_or(T::zero()).max(self.right.unwrap_or(T::zero()))
    }
}

/// Largest value of `f` over `points`, or its coefficient norm if `points` is empty.
pub fn field_size<T: Real>(f: &Field<T>, points: &[PhasePoint<T>]) -> T {
    if points.is_empty() {
        f.norm()
    } else {
        points.iter().map(|pt| f.evaluate(pt).max_abs()).fold(T::zero(), T::max)
    }
}

/// Residual fields `K ⋆ W − εW` and `W ⋆ K − εW`.
pub fn stargen_fields<T: Real>(case: &StargenCase<T>, hbar: T, max_order: usize) -> Result<(Field<T>, Field<T>, bool)> {
    let ew = case.w.scale_real(case.epsilon);
    let l = star_product(&case.hamiltonian, &case.w, hbar, max_order)?;
    let r = star_product(&case.w, &case.hamiltonian, hbar, max_order)?;
    Ok((l.field.sub(&ew), r.field.sub(&ew), l.exact && r.exact))
}

pub fn stargen_residual<T: Real>(case: &StargenCase<T>, hbar: T, max_order: usize) -> Result<StargenResidual<T>> {
    if !case.epsilon.is_finite() {
        return Err(Error::InvalidInput("epsilon must be finite".into()));
    }
    let (l, r, exact) = stargen_fields(case, hbar, max_order)?;
    let want_left = matches!(case.side, Side::Left | Side::Both);
    let want_right = matches!(case.side, Side::Right | Side::Both);
    Ok(StargenResidual {
        left: want_left.then(|| field_size(&l, &case.points)),
        right: want_right.then(|| field_size(&r, &case.points)),
        exact,
    })
}

/// `W = Λ±(p)` with `ε = 0` (positive) or `ε = −2mc²` (negative), evaluated at `p`.
pub fn projector_case<T: Real>(
    p: &[T; 4],
    positive: bool,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<StargenCase<T>> {
    let (lp, lm) = energy_projectors(p, params, set)?;
    let k = HamiltonianForm::Gamma.build(params, &GaugePotential::zero(), set);
    let (w, epsilon, label) = if positive {
        (lp, T::zero(), "projector_positive")
    } else {
        (lm, -T::of(2.0) * params.rest_energy(), "projector_negative")
    };
    Ok(StargenCase {
        label: label.into(),
        hamiltonian: k,
        w: Field::constant(w),
        epsilon,
        side: Side::Both,
        points: vec![PhasePoint::at_momentum(*p)],
    })
}

/// Printed and engine residuals of the Landau-gauge left stargenvalue equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandauStargen<T: Real> {
    /// Residual of the printed display.
    pub printed: T,
    /// Residual of `K_em ⋆ W − εW` from the star engine.
    pub general: T,
    /// Size of the printed-minus-general residual field.
    pub difference: T,
}

/// The printed left display for `A_2 = Bx^1`:
/// `[K_A]W + (iħ/2)(−qB M ∂W/∂p_2 − c G^ν ∂W/∂x^ν) − εW`, with `M = γ^2`,
/// `G^ν = γ^ν` (γ form) or `M = α^2`, `G^ν = γ^0γ^ν` (𝒦 form).
pub fn landau_printed_left<T: Real>(
    w: &Field<T>,
    epsilon: T,
    b: T,
    form: HamiltonianForm,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
    hbar: T,
) -> Result<Field<T>> {
    let pre = |m: &ComplexMat4<T>| match form {
        HamiltonianForm::Gamma => *m,
        HamiltonianForm::Kcal => *set.gamma0() * *m,
    };
    let k = form.build(params, &GaugePotential::landau(b), set);
    let half_i = Complex::new(T::zero(), hbar * T::of(0.5));
    let mut deriv = w.differentiate(Var::P(2)).left_mul(&pre(&set.gamma[2]).scale_real(-params.q * b));
    for nu in 0..4 {
        deriv = deriv.sub(&w.differentiate(Var::X(nu as u8)).left_mul(&pre(&set.gamma[nu]).scale_real(params.c)));
    }
    Ok(k.mul(w)?.add(&deriv.scale(half_i)).sub(&w.scale_real(epsilon)))
}

#[allow(clippy::too_many_arguments)]
pub fn landau_stargen_residual<T: Real>(
    w: &Field<T>,
    epsilon: T,
    b: T,
    form: HamiltonianForm,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
    hbar: T,
    points: &[PhasePoint<T>],
) -> Result<LandauStargen<T>> {
    let printed = landau_printed_left(w, epsilon, b, form, params, set, hbar)?;
    let k = form.build(params, &GaugePotential::landau(b), set);
    let general = star_product(&k, w, hbar, 16)?.field.sub(&w.scale_real(epsilon));
    Ok(LandauStargen {
        printed: field_size(&printed, points),
        general: field_size(&general, points),
        difference: field_size(&printed.sub(&general), points),
    })
}

/// "Both stargen residuals small ⇒ Moyal bracket small."
///
/// Asserted (bound `(r_L + r_R)/ħ ≤ 2·tol/ħ`) when the premise holds; otherwise
/// recorded with a note, since the implication says nothing about such `W`.
pub fn moyal_zero_bracket_check<T: Real>(
    k: &Field<T>,
    w: &Field<T>,
    epsilon: T,
    hbar: T,
    tol: f64,
    points: &[PhasePoint<T>],
) -> Result<ClaimReport> {
    let case = StargenCase {
        label: String::new(),
        hamiltonian: k.clone(),
        w: w.clone(),
        epsilon,
        side: Side::Both,
        points: points.to_vec(),
    };
    let res = stargen_residual(&case, hbar, 16)?;
    let bracket = field_size(&moyal_bracket(k, w, hbar, 16)?.field, points).as_f64();
    let (l, r) = (res.left.unwrap_or_default().as_f64(), res.right.unwrap_or_default().as_f64());
    let inputs = format!("epsilon={}, hbar={}", epsilon.as_f64(), hbar.as_f64());
    if l <= tol && r <= tol {
        let bound = 2.0 * tol / hbar.as_f64();
        Ok(ClaimReport::asserted("moyal_zero_bracket", "moyal", bracket, bound)
            .with_inputs(inputs)
            .with_note(format!("premise holds: left={l:e}, right={r:e}")))
    } else {
        Ok(ClaimReport::recorded("moyal_zero_bracket", "moyal", bracket, 2.0 * tol / hbar.as_f64())
            .with_inputs(inputs)
            .with_note(format!(
                "not applicable: W is not a stargensolution (left={l:e}, right={r:e}); bracket norm {bracket:e} — the implication is one-way"
            )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::GammaRep;
    use crate::hamiltonians::{k_free, on_shell};
    use crate::polyfield::random_field;

    fn params() -> PhysParams<f64> {
        PhysParams { m: 1.1, q: 0.6, c: 1.4, hbar: 0.8 }
    }

    #[test]
    fn projector_solutions() {
        let p = params();
        for rep in [GammaRep::Dirac, GammaRep::Chiral] {
            let g = GammaSet::new(rep);
            for i in 0..20 {
                let mom = on_shell([0.1 * i as f64, -0.3, 0.05 * i as f64], &p);
                for positive in [true, false] {
                    let case = projector_case(&mom, positive, &p, &g).unwrap();
                    let r = stargen_residual(&case, p.hbar, 16).unwrap();
                    assert!(r.exact);
                    assert!(r.total() < 1e-12, "{r:?}");
                    let c = moyal_zero_bracket_check(&case.hamiltonian, &case.w, case.epsilon, p.hbar, 1e-12, &case.points).unwrap();
                    assert_eq!(c.verdict, crate::brackets::Verdict::Holds);
                }
            }
        }
    }

    #[test]
    fn wrong_epsilon_is_one_way() {
        let p = params();
        let g = GammaSet::new(GammaRep::Dirac);
        let mom = on_shell([0.2, 0.4, -0.1], &p);
        let case = projector_case(&mom, true, &p, &g).unwrap();
        let c = moyal_zero_bracket_check(&case.hamiltonian, &case.w, 0.7, p.hbar, 1e-12, &case.points).unwrap();
        assert_eq!(c.verdict, crate::brackets::Verdict::Recorded);
        assert!(c.residual < 1e-12);
        let zero = StargenCase { w: Field::zero(), epsilon: 0.0, ..case };
        assert_eq!(stargen_residual(&zero, 1.0, 4).unwrap().total(), 0.0);
    }

    #[test]
    fn closed_display_and_shift() {
        let p = params();
        let g = GammaSet::new(GammaRep::Chiral);
        let k = k_free(&p, &g);
        let w: Field<f64> = random_field(3, 2, 1);
        let case = StargenCase { label: "r".into(), hamiltonian: k.clone(), w: w.clone(), epsilon: 0.4, side: Side::Left, points: vec![] };
        let (l, _, exact) = stargen_fields(&case, p.hbar, 16).unwrap();
        assert!(exact);
        let mut display = k.mul(&w).unwrap().sub(&w.scale_real(0.4));
        for nu in 0..4 {
            let d = w.differentiate(Var::X(nu as u8)).left_mul(&g.gamma[nu].scale_real(p.c));
            display = display.sub(&d.scale(Complex::new(0.0, p.hbar / 2.0)));
        }
        assert!(l.dist(&display) < 1e-12);

        let delta = 0.37;
        let shifted = StargenCase {
            hamiltonian: k.add(&Field::constant(ComplexMat4::identity().scale_real(delta))),
            epsilon: 0.4 + delta,
            ..case.clone()
        };
        let (l2, _, _) = stargen_fields(&shifted, p.hbar, 16).unwrap();
        assert!(l2.dist(&l) < 1e-12);
    }

    #[test]
    fn similarity_with_orthogonal_s() {
        let p = params();
        let g = GammaSet::new(GammaRep::Dirac);
        let k = k_free(&p, &g);
        let w: Field<f64> = random_field(5, 1, 1);
        let pts = [PhasePoint::at_momentum([1.0, 0.2, -0.3, 0.1])];
        let s = crate::clifford::linalg::expm(&ComplexMat4::from_real([
            [0.0, 0.3, 0.0, -0.2],
            [-0.3, 0.0, 0.5, 0.0],
            [0.0, -0.5, 0.0, 0.1],
            [0.2, 0.0, -0.1, 0.0],
        ]));
        let si = s.transpose();
        let conj = |f: &Field<f64>| f.left_mul(&s).right_mul(&si);
        let base = StargenCase { label: "s".into(), hamiltonian: k.clone(), w: w.clone(), epsilon: 0.2, side: Side::Both, points: pts.to_vec() };
        let moved = StargenCase { hamiltonian: conj(&k), w: conj(&w), ..base.clone() };
        let (l0, r0, _) = stargen_fields(&base, p.hbar, 16).unwrap();
        let (l1, r1, _) = stargen_fields(&moved, p.hbar, 16).unwrap();
        assert!(conj(&l0).dist(&l1) < 1e-12 && conj(&r0).dist(&r1) < 1e-12);
        let a = stargen_residual(&base, p.hbar, 16).unwrap();
        let b = stargen_residual(&moved, p.hbar, 16).unwrap();
        // orthogonal similarity preserves the Frobenius norm of each residual matrix
        let fro = |f: &Field<f64>| f.evaluate(&pts[0]).frobenius();
        assert!((fro(&l0) - fro(&l1)).abs() < 1e-12 && (fro(&r0) - fro(&r1)).abs() < 1e-12);
        assert!(a.total().is_finite() && b.total().is_finite());
    }

    #[test]
    fn landau_diff() {
        let p = params();
        let g = GammaSet::new(GammaRep::Dirac);
        let mom = on_shell([0.3, 0.1, 0.0], &p);
        let (lp, _) = energy_projectors(&mom, &p, &g).unwrap();
        let pts = [PhasePoint::at_momentum(mom)];
        for form in [HamiltonianForm::Gamma, HamiltonianForm::Kcal] {
            let w0 = Field::constant(lp);
            let r = landau_stargen_residual(&w0, 0.0, 0.0, form, &p, &g, p.hbar, &pts).unwrap();
            assert!(r.difference < 1e-12);
            let r = landau_stargen_residual(&w0, 0.0, 0.9, form, &p, &g, p.hbar, &pts).unwrap();
            assert!(r.difference < 1e-12);
            let wp = Field::var(Var::P(2), lp);
            let r = landau_stargen_residual(&wp, 0.0, 0.9, form, &p, &g, p.hbar, &pts).unwrap();
            // the printed display differentiates in p_2 where the engine pairs x^1 with p_1
            let m = match form {
                HamiltonianForm::Gamma => g.gamma[2],
                HamiltonianForm::Kcal => g.alpha[1],
            };
            let expect = (m * lp).scale_real(p.q * 0.9 * p.hbar / 2.0).max_abs();
            assert!((r.difference - expect).abs() < 1e-12);
            let zero = landau_stargen_residual(&Field::zero(), 0.0, 0.9, form, &p, &g, p.hbar, &pts).unwrap();
            assert_eq!(zero.printed + zero.general, 0.0);
        }
    }
}
