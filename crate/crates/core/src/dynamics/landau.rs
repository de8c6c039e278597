use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::transport::{reject_time_axis, step_defect};
use super::{maybe_derivative, max_norm, rk4, Discrepancy, EvolutionReport};
use crate::clifford::{anticommutator, commutator, ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::PhysParams;
use crate::polyfield::{DerivativeMode, GridField, Var};
use crate::scalar::Real;

/// What to do when `‖RHS‖·Δt` exceeds `‖W‖`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CflPolicy {
    Warn,
    Abort,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LandauOptions {
    pub cfl: CflPolicy,
    /// Relative size above which the printed-display difference is logged as a discrepancy.
    pub diff_tol: f64,
}

impl Default for LandauOptions {
    fn default() -> Self {
        Self {
            cfl: CflPolicy::Warn,
            diff_tol: 1e-12,
        }
    }
}

/// The general right-hand side and the printed display, side by side.
#[derive(Clone, Debug)]
pub struct LandauRhs<T: Real> {
    pub general: GridField<T>,
    pub printed: GridField<T>,
}

impl<T: Real> LandauRhs<T> {
    pub fn difference(&self) -> T {
        self.general.dist(&self.printed)
    }
}

/// `∂_t W` from the Moyal equation with `𝒦` in the Landau gauge `A_2 = B x^1`,
/// for `W` independent of `x^0`:
///
/// `(1/iħ)(c p_i[α^i,W] − qBx^1[α²,W] − mc²[γ^0,W]) − ½(c ∂_i{α^i,W} + qB ∂_{p_1}{α²,W})`
///
/// The printed variant replaces the last term by `qB α² ∂_{p_2}{α²,W}`.
/// Position derivatives are spectral on periodic axes; momentum derivatives use
/// fourth-order differences. A coordinate without a grid axis is a fixed
/// parameter and `W` is taken as constant along it.
pub fn landau_rhs<T: Real>(w: &GridField<T>, b: T, params: &PhysParams<T>, set: &GammaSet<T>) -> Result<LandauRhs<T>> {
    reject_time_axis(w)?;
    let (c, q, hbar) = (params.c, params.q, params.hbar);
    let inv_ih = Complex::new(T::zero(), -T::one() / hbar);
    let half = T::of(0.5);
    let a2 = set.alpha[1];
    let g0 = *set.gamma0();
    let mc2 = params.rest_energy();

    let mut shared: Vec<ComplexMat4<T>> = (0..w.len())
        .map(|idx| {
            let pt = w.spec.point(idx);
            let m = &w.samples[idx];
            let mut h = ComplexMat4::zero();
            for i in 0..3 {
                if pt.p[i + 1] != T::zero() {
                    h += set.alpha[i].scale_real(c * pt.p[i + 1]);
                }
            }
            h -= a2.scale_real(q * b * pt.x[1]);
            h -= g0.scale_real(mc2);
            commutator(&h, m).scale(inv_ih)
        })
        .collect();
    for i in 1..4u8 {
        if let Some(d) = maybe_derivative(w, Var::X(i), DerivativeMode::Auto)? {
            let al = set.alpha[i as usize - 1];
            for (acc, m) in shared.iter_mut().zip(&d.samples) {
                *acc -= anticommutator(&al, m).scale_real(half * c);
            }
        }
    }
    let coupling = half * q * b;
    let dp1 = maybe_derivative(w, Var::P(1), DerivativeMode::FiniteDifference)?;
    let dp2 = maybe_derivative(w, Var::P(2), DerivativeMode::FiniteDifference)?;
    let general = shared
        .iter()
        .enumerate()
        .map(|(idx, s)| match &dp1 {
            Some(d) => *s - anticommutator(&a2, &d.samples[idx]).scale_real(coupling),
            None => *s,
        })
        .collect();
    let printed = shared
        .iter()
        .enumerate()
        .map(|(idx, s)| match &dp2 {
            Some(d) => *s - (a2 * anticommutator(&a2, &d.samples[idx])).scale_real(coupling),
            None => *s,
        })
        .collect();
    Ok(LandauRhs {
        general: GridField::new(w.spec.clone(), general, w.time)?,
        printed: GridField::new(w.spec.clone(), printed, w.time)?,
    })
}

/// RK4 evolution of the general Landau-gauge Moyal right-hand side.
///
/// Residual series: trapezoidal step defect. Extra series: `printed_vs_general`
/// (largest entry of the difference between the printed display and the general
/// right-hand side at each state) and `cfl_ratio` (`‖RHS‖·Δt/‖W‖`).
#[allow(clippy::too_many_arguments)]
pub fn evolve_landau_moyal<T: Real>(
    w0: &GridField<T>,
    b: T,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
    dt: T,
    steps: usize,
    opts: &LandauOptions,
) -> Result<EvolutionReport<T>> {
    params.validate()?;
    if !(dt > T::zero()) {
        return Err(Error::InvalidInput("time step must be positive".into()));
    }
    let started = std::time::Instant::now();
    let mut report = EvolutionReport::new("landau_moyal", "trapezoid_step_defect", w0);
    if w0.spec.axis_of(Var::P(1)).is_none() {
        report.note("p1 is not a grid axis: W is taken as p1-independent, so the general qB term drops out on this slice");
    }
    if w0.spec.axis_of(Var::P(2)).is_none() {
        report.note("p2 is not a grid axis: the printed display's p2 derivative is zero on this slice");
    }
    let mut w = w0.clone();
    let mut r = landau_rhs(&w, b, params, set)?;
    report.push(&w, T::zero(), set);
    for step in 0..=steps {
        let diff = r.difference().as_f64();
        let scale = max_norm(&w.samples).as_f64();
        let rhs_norm = max_norm(&r.general.samples).as_f64();
        let ratio = rhs_norm * dt.as_f64() / scale.max(f64::MIN_POSITIVE);
        report.push_extra("printed_vs_general", diff);
        report.push_extra("cfl_ratio", ratio);
        if diff > opts.diff_tol * rhs_norm.max(1.0) {
            report.discrepancies.push(Discrepancy {
                step,
                time: w.time.as_f64(),
                quantity: "landau moyal rhs".into(),
                value: diff,
            });
        }
        if ratio > 1.0 {
            match opts.cfl {
                CflPolicy::Abort => return Err(Error::Cfl { step, ratio }),
                CflPolicy::Warn => {
                    log::warn!("CFL ratio {ratio:e} at step {step}");
                    report.note(format!("CFL ratio above one (first at step {step})"));
                }
            }
        }
        if step == steps {
            break;
        }
        let next = rk4(&w, dt, |s| landau_rhs(s, b, params, set).map(|r| r.general))?;
        let rn = landau_rhs(&next, b, params, set)?;
        let defect = step_defect(&w, &next, &r.general, &rn.general, dt);
        report.push(&next, defect, set);
        w = next;
        r = rn;
    }
    report.final_state = w;
    report.wall_clock = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::moyal_bracket;
    use crate::clifford::GammaRep;
    use crate::dynamics::propagate_free;
    use crate::hamiltonians::{kcal_em, GaugePotential};
    use crate::polyfield::{random_matrix, sample_to_grid, Axis, Field, GridSpec, PhasePoint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rm(seed: u64) -> ComplexMat4<f64> {
        random_matrix(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn xp2(n: usize, m: usize) -> GridSpec<f64> {
        GridSpec::new(
            vec![
                Axis::periodic(Var::X(1), 0.0, 2.0 * PI, n),
                Axis::periodic(Var::P(2), -PI, 2.0 * PI, m),
            ],
            PhasePoint::new([0.0; 4], [0.0, 0.4, 0.0, -0.3]),
        )
        .unwrap()
    }

    /// The general right-hand side is the Moyal bracket of `𝒦_em` with `W`.
    #[test]
    fn general_rhs_matches_moyal_engine() {
        let set = GammaSet::new(GammaRep::Dirac);
        let p = PhysParams { m: 0.8, q: 1.1, c: 1.3, hbar: 0.7 };
        let b = 0.9;
        let k = kcal_em(&p, &GaugePotential::landau(b), &set);
        // polynomial of degree ≤ 3 in p1 so fourth-order differences are exact
        let mut mono = [0u8; 8];
        mono[5] = 2;
        let f = Field::plane_wave(rm(1), [0.0, 1.0, 0.0, 0.0])
            .add(&Field::monomial(rm(2), mono, [0.0, -2.0, 0.0, 0.0]))
            .add(&Field::var(Var::P(2), rm(3)));
        let exact = moyal_bracket(&k, &f, p.hbar, 8).unwrap();
        assert!(exact.exact);
        let spec = GridSpec::new(
            vec![
                Axis::periodic(Var::X(1), 0.0, 2.0 * PI, 16),
                Axis::bounded(Var::P(1), -1.0, 2.0, 9),
                Axis::bounded(Var::P(2), -1.0, 2.0, 5),
            ],
            PhasePoint::new([0.0, 0.0, 0.3, -0.2], [0.0, 0.0, 0.0, 0.5]),
        )
        .unwrap();
        let w = sample_to_grid(&f, &spec);
        let r = landau_rhs(&w, b, &p, &set).unwrap();
        let oracle = sample_to_grid(&exact.field, &spec);
        assert!(r.general.dist(&oracle) < 1e-9, "{}", r.general.dist(&oracle));
        assert!(r.difference() > 1e-3);
    }

    #[test]
    fn zero_field_displays_agree() {
        let set = GammaSet::new(GammaRep::Dirac);
        let w = GridField::from_fn(xp2(16, 16), |pt| rm(4).scale_real(pt.x[1].sin() * pt.p[2].cos()));
        let r = evolve_landau_moyal(&w, 0.0, &PhysParams::default(), &set, 0.01, 3, &LandauOptions::default()).unwrap();
        assert!(r.discrepancies.is_empty());
        let r = evolve_landau_moyal(&w, 1.0, &PhysParams::default(), &set, 0.01, 3, &LandauOptions::default()).unwrap();
        assert_eq!(r.discrepancies.len(), 4);
    }

    #[test]
    fn p2_independent_data_has_no_discrepancy() {
        let set = GammaSet::new(GammaRep::Dirac);
        let w = GridField::from_fn(xp2(16, 8), |pt| rm(4).scale_real(pt.x[1].sin()));
        let r = evolve_landau_moyal(&w, 1.0, &PhysParams::default(), &set, 0.01, 3, &LandauOptions::default()).unwrap();
        // c p_2[α², W] makes W depend on p_2 after the first step
        assert!(r.extra["printed_vs_general"][0] < 1e-15);
        assert_eq!(r.discrepancies.iter().map(|d| d.step).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn massless_field_free_limit() {
        let set = GammaSet::new(GammaRep::Dirac);
        let p = PhysParams { m: 0.0, ..Default::default() };
        let spec = GridSpec::new(
            vec![
                Axis::periodic(Var::X(1), 0.0, 2.0 * PI, 16),
                Axis::periodic(Var::P(2), -PI, 2.0 * PI, 8),
            ],
            PhasePoint::origin(),
        )
        .unwrap();
        let w0 = sample_to_grid(&Field::plane_wave(ComplexMat4::identity(), [0.0, 1.0, 0.0, 0.0]), &spec);
        let r = evolve_landau_moyal(&w0, 0.0, &p, &set, 0.01, 100, &LandauOptions::default()).unwrap();
        let free = propagate_free(&w0, 1.0, &p, &set).unwrap();
        // the p2 = 0 row decouples from the others and has no commutator term
        let row = spec.axes[1].n / 2;
        assert!(spec.axes[1].coord(row).abs() < 1e-15);
        let mut err: f64 = 0.0;
        for (i, (a, b)) in r.final_state.samples.iter().zip(&free.samples).enumerate() {
            if spec.unflatten(i)[1] == row {
                err = err.max(a.dist(b));
            }
        }
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn scalar_data_sees_no_commutators() {
        let set = GammaSet::new(GammaRep::Chiral);
        let w = GridField::from_fn(xp2(16, 16), |pt| ComplexMat4::identity().scale_real(1.0 + 0.3 * pt.x[1].cos() * pt.p[2].sin()));
        let p = PhysParams::default();
        let r = landau_rhs(&w, 0.7, &p, &set).unwrap();
        let dx = w.derivative(0, DerivativeMode::Spectral).unwrap();
        let expect = dx.map(|_, m| set.alpha[0] * *m * Complex::new(-p.c, 0.0));
        assert!(r.general.dist(&expect) < 1e-12);
    }

    #[test]
    fn trace_conserved_on_periodic_grid() {
        let set = GammaSet::new(GammaRep::Dirac);
        let w0 = GridField::from_fn(xp2(32, 32), |pt| {
            ComplexMat4::identity().scale_real(1.0 + 0.5 * pt.x[1].cos()) + rm(9).scale_real(0.2 * pt.p[2].sin())
        });
        let r = evolve_landau_moyal(&w0, 1.0, &PhysParams::default(), &set, 0.01, 50, &LandauOptions::default()).unwrap();
        assert_eq!(r.times.len(), 51);
        assert!(r.trace_drift() < 1e-9, "{}", r.trace_drift());
    }

    #[test]
    fn cfl_abort() {
        let set = GammaSet::new(GammaRep::Dirac);
        let w0 = GridField::from_fn(xp2(16, 8), |pt| ComplexMat4::identity().scale_real(pt.x[1].sin()));
        let opts = LandauOptions { cfl: CflPolicy::Abort, ..Default::default() };
        let r = evolve_landau_moyal(&w0, 1.0, &PhysParams::default(), &set, 5.0, 2, &opts);
        assert!(matches!(r, Err(Error::Cfl { step: 0, .. })));
        let warned = evolve_landau_moyal(&w0, 1.0, &PhysParams::default(), &set, 5.0, 1, &LandauOptions::default()).unwrap();
        assert!(warned.notes.iter().any(|n| n.contains("CFL")));
    }
}
