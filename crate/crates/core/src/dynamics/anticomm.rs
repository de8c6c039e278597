use serde::{Deserialize, Serialize};

use super::transport::{momentum_derivatives, reject_time_axis, sampled_gradient};
use super::{maybe_derivative, rk4, Discrepancy, EvolutionReport};
use crate::clifford::{anticommutator, ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::{GaugePotential, HamiltonianForm, PhysParams};
use crate::polyfield::{DerivativeMode, GridField, Var};
use crate::scalar::{creal, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnticommOptions {
    /// Abort once the off-diagonal consistency residual exceeds this value.
    pub abort_threshold: Option<f64>,
    /// Relative size above which the printed-display difference is logged as a discrepancy.
    pub diff_tol: f64,
}

impl Default for AnticommOptions {
    fn default() -> Self {
        Self {
            abort_threshold: None,
            diff_tol: 1e-12,
        }
    }
}

/// Time derivative implied by the symmetrized-bracket constraint, plus diagnostics.
#[derive(Clone, Debug)]
pub struct AnticommRhs<T: Real> {
    pub dw: GridField<T>,
    /// Largest off-diagonal block entry of the constraint's right-hand side
    /// (γ form only; the part `{γ^0, ·}` cannot reach).
    pub consistency: T,
    /// Largest difference between the printed potential term
    /// `−q ∂_νA_μ {γ^ν, W}` and the general one `q ∂_νA_μ {γ^μ, ∂W/∂p_ν}` (γ form only).
    pub printed_diff: Option<T>,
}

fn is_dirac_gamma0<T: Real>(set: &GammaSet<T>) -> bool {
    let d = ComplexMat4::diag([creal(T::one()), creal(T::one()), creal(-T::one()), creal(-T::one())]);
    set.gamma0().dist(&d) <= T::epsilon() * T::of(16.0)
}

/// Splits `R` into the solvable diagonal blocks of `{γ^0, X} = −R` and the
/// largest off-diagonal entry.
fn invert_gamma0_anticomm<T: Real>(r: &ComplexMat4<T>) -> (ComplexMat4<T>, T) {
    let half = T::of(0.5);
    let mut x = ComplexMat4::zero();
    let mut off = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            if (i < 2) == (j < 2) {
                x[(i, j)] = if i < 2 { -r[(i, j)] * half } else { r[(i, j)] * half };
            } else {
                off = off.max(r[(i, j)].norm());
            }
        }
    }
    (x, off)
}

/// Right-hand side of the symmetrized-bracket equation
///
/// `c ∂_ν{Γ^ν, W} + q ∂_νA_μ {Γ^μ, ∂W/∂p_ν} = 0`, with `Γ = γ` or `γ^0γ`,
///
/// solved for `∂_t W`. For `𝒦` the time term is `2∂_tW` and inverts directly.
/// For `K` it is `{γ^0, ∂_tW}`, which reaches only the diagonal 2×2 blocks in
/// the Dirac basis; the off-diagonal time derivative is set to zero.
pub fn anticomm_rhs<T: Real>(
    w: &GridField<T>,
    form: HamiltonianForm,
    a: &GaugePotential<T>,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<AnticommRhs<T>> {
    reject_time_axis(w)?;
    if form == HamiltonianForm::Gamma && !is_dirac_gamma0(set) {
        return Err(Error::InvalidInput(
            "the symmetrized-bracket evolution with K needs the Dirac representation (block-diagonal γ^0)".into(),
        ));
    }
    let g0 = *set.gamma0();
    let big: [ComplexMat4<T>; 4] = match form {
        HamiltonianForm::Gamma => set.gamma,
        HamiltonianForm::Kcal => set.gamma.map(|g| g0 * g),
    };
    let mut r = vec![ComplexMat4::zero(); w.len()];
    for i in 1..4u8 {
        if let Some(d) = maybe_derivative(w, Var::X(i), DerivativeMode::Auto)? {
            let g = big[i as usize].scale_real(params.c);
            for (acc, m) in r.iter_mut().zip(&d.samples) {
                *acc += anticommutator(&g, m);
            }
        }
    }
    let (grad, active) = sampled_gradient(w, a, params);
    let mut printed_diff = None;
    if !grad.is_empty() {
        let dp = momentum_derivatives(w, &active)?;
        let mut worst = T::zero();
        for (idx, acc) in r.iter_mut().enumerate() {
            let mut general = ComplexMat4::zero();
            let mut printed = ComplexMat4::zero();
            for nu in 0..4 {
                for mu in 0..4 {
                    let g = grad[idx][nu][mu];
                    if g == T::zero() {
                        continue;
                    }
                    if let Some(d) = &dp[nu] {
                        general += anticommutator(&big[mu], &d.samples[idx]).scale_real(g);
                    }
                    printed -= anticommutator(&big[nu], &w.samples[idx]).scale_real(g);
                }
            }
            let general = general.scale_real(params.q);
            let printed = printed.scale_real(params.q);
            worst = worst.max(general.dist(&printed));
            *acc += general;
        }
        if form == HamiltonianForm::Gamma {
            printed_diff = Some(worst);
        }
    } else if form == HamiltonianForm::Gamma {
        printed_diff = Some(T::zero());
    }

    let mut consistency = T::zero();
    let dw: Vec<ComplexMat4<T>> = match form {
        HamiltonianForm::Gamma => r
            .iter()
            .map(|m| {
                let (x, off) = invert_gamma0_anticomm(m);
                consistency = consistency.max(off);
                x
            })
            .collect(),
        HamiltonianForm::Kcal => r.iter().map(|m| m.scale_real(-T::of(0.5))).collect(),
    };
    Ok(AnticommRhs {
        dw: GridField::new(w.spec.clone(), dw, w.time)?,
        consistency,
        printed_diff,
    })
}

/// RK4 evolution of [`anticomm_rhs`]. The residual series is the consistency
/// residual at each state; `printed_vs_general` holds the printed-display
/// difference for the γ form.
#[allow(clippy::too_many_arguments)]
pub fn evolve_anticomm<T: Real>(
    w0: &GridField<T>,
    form: HamiltonianForm,
    a: &GaugePotential<T>,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
    dt: T,
    steps: usize,
    opts: &AnticommOptions,
) -> Result<EvolutionReport<T>> {
    params.validate()?;
    a.validate()?;
    let started = std::time::Instant::now();
    let mut report = EvolutionReport::new(format!("anticomm_{}", form.name()), "offdiagonal_consistency", w0);
    if form == HamiltonianForm::Gamma {
        report.note("off-diagonal 2x2 blocks of W are held frozen; the unreachable part of the constraint is the residual");
    }
    let mut w = w0.clone();
    for step in 0..=steps {
        let r = anticomm_rhs(&w, form, a, params, set)?;
        let cons = r.consistency.as_f64();
        if let Some(th) = opts.abort_threshold {
            if cons > th {
                return Err(Error::Consistency {
                    step,
                    residual: cons,
                    threshold: th,
                });
            }
        }
        report.push(&w, r.consistency, set);
        if let Some(d) = r.printed_diff {
            let d = d.as_f64();
            report.push_extra("printed_vs_general", d);
            if d > opts.diff_tol * w.max_abs().as_f64().max(1.0) {
                report.discrepancies.push(Discrepancy {
                    step,
                    time: w.time.as_f64(),
                    quantity: "anticommutator potential term".into(),
                    value: d,
                });
            }
        }
        if step == steps {
            break;
        }
        w = rk4(&w, dt, |s| anticomm_rhs(s, form, a, params, set).map(|r| r.dw))?;
    }
    report.final_state = w;
    report.wall_clock = started.elapsed();
    Ok(report)
}
