//! Transport solvers for the bracket equations and their diagnostics.
//!
//! Every bracket equation is a constraint; the time-stepping forms below are
//! obtained by isolating `∂_t W` (left multiplication by `γ^0/c` for the
//! Poisson form, block inversion of `{γ^0, ·}` for the symmetrized form, and
//! the `x^0`-part of the Moyal bracket with `𝒦`).

mod anticomm;
mod free;
mod landau;
mod transport;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::brackets::BracketKind;
use crate::clifford::{ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::{GaugeSpec, HamiltonianForm};
use crate::polyfield::{DerivativeMode, GridField, Var};
use crate::scalar::{Real, C};

pub use anticomm::{anticomm_rhs, evolve_anticomm, AnticommOptions};
pub use free::{
    covariance_check, covariance_transform, evolve_free, free_mode_solution, free_propagator, propagate_free,
    residual_free_field, residual_free_stencil, time_stencil,
};
pub use landau::{evolve_landau_moyal, landau_rhs, CflPolicy, LandauOptions, LandauRhs};
pub use transport::{em_rhs, em_transport_step, evolve_em};

/// Time integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stepper {
    /// Exact propagation of each Fourier mode (free Hamiltonians only).
    ClosedForm,
    Rk4,
}

/// What to evolve and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSpec {
    pub bracket: BracketKind,
    pub hamiltonian: HamiltonianForm,
    pub gauge: GaugeSpec,
    pub dt: f64,
    pub total_time: f64,
    pub stepper: Stepper,
}

impl EvolutionSpec {
    pub fn validate(&self) -> Result<()> {
        self.bracket.validate()?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidInput(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.total_time >= 0.0) || !self.total_time.is_finite() {
            return Err(Error::InvalidInput(format!("total time must be non-negative, got {}", self.total_time)));
        }
        if self.stepper == Stepper::ClosedForm {
            if self.gauge != GaugeSpec::Zero {
                return Err(Error::InvalidInput("closed-form stepping needs a free Hamiltonian".into()));
            }
            if self.bracket != BracketKind::Poisson {
                return Err(Error::InvalidInput("closed-form stepping exists for the Poisson bracket only".into()));
            }
        }
        Ok(())
    }

    /// Number of steps, with the last one landing on `total_time`.
    pub fn steps(&self) -> usize {
        (self.total_time / self.dt).round().max(0.0) as usize
    }
}

/// One disagreement between two right-hand sides at a given step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub step: usize,
    pub time: f64,
    pub quantity: String,
    /// Largest entry of the difference over the grid.
    pub value: f64,
}

/// Time series produced by an evolution. Every series has `steps + 1` entries.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionReport<T: Real> {
    pub label: String,
    pub times: Vec<f64>,
    /// Per-step residual of the evolved equation (method specific, see `residual_kind`).
    pub residual: Vec<f64>,
    pub residual_kind: String,
    pub trace_re: Vec<f64>,
    pub trace_im: Vec<f64>,
    pub dirac_hermiticity: Vec<f64>,
    /// Additional named series of the same length.
    pub extra: BTreeMap<String, Vec<f64>>,
    /// Steps at which a printed display and the general right-hand side disagree.
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_clock: Duration,
    #[serde(skip)]
    pub final_state: GridField<T>,
}

impl<T: Real> EvolutionReport<T> {
    pub(crate) fn new(label: impl Into<String>, residual_kind: impl Into<String>, initial: &GridField<T>) -> Self {
        Self {
            label: label.into(),
            times: Vec::new(),
            residual: Vec::new(),
            residual_kind: residual_kind.into(),
            trace_re: Vec::new(),
            trace_im: Vec::new(),
            dirac_hermiticity: Vec::new(),
            extra: BTreeMap::new(),
            discrepancies: Vec::new(),
            notes: Vec::new(),
            wall_clock: Duration::ZERO,
            final_state: initial.clone(),
        }
    }

    /// Appends the standard series for state `w`.
    pub(crate) fn push(&mut self, w: &GridField<T>, residual: T, set: &GammaSet<T>) {
        let tr = w.total_trace();
        self.times.push(w.time.as_f64());
        self.residual.push(residual.as_f64());
        self.trace_re.push(tr.re.as_f64());
        self.trace_im.push(tr.im.as_f64());
        self.dirac_hermiticity.push(dirac_deviation(w, set).as_f64());
    }

    pub(crate) fn note(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.notes.contains(&msg) {
            self.notes.push(msg);
        }
    }

    pub(crate) fn push_extra(&mut self, key: &str, value: f64) {
        self.extra.entry(key.to_string()).or_default().push(value);
    }

    pub fn steps(&self) -> usize {
        self.times.len().saturating_sub(1)
    }

    pub fn final_residual(&self) -> f64 {
        self.residual.last().copied().unwrap_or(0.0)
    }

    /// Largest drift of the total trace from its initial value.
    pub fn trace_drift(&self) -> f64 {
        let (r0, i0) = match (self.trace_re.first(), self.trace_im.first()) {
            (Some(r), Some(i)) => (*r, *i),
            _ => return 0.0,
        };
        self.trace_re
            .iter()
            .zip(&self.trace_im)
            .map(|(r, i)| (r - r0).hypot(i - i0))
            .fold(0.0, f64::max)
    }

    pub fn max_dirac_deviation(&self) -> f64 {
        self.dirac_hermiticity.iter().copied().fold(0.0, f64::max)
    }

    /// Every series as CSV, one row per step. Extra series follow in key order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,time,residual,trace_re,trace_im,dirac_hermiticity");
        for k in self.extra.keys() {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{i},{:e},{:e},{:e},{:e},{:e}",
                self.times[i], self.residual[i], self.trace_re[i], self.trace_im[i], self.dirac_hermiticity[i]
            ));
            for v in self.extra.values() {
                match v.get(i) {
                    Some(x) => out.push_str(&format!(",{x:e}")),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Named scalar series, for plotting.
    pub fn series(&self) -> Vec<(String, &[f64])> {
        let mut out: Vec<(String, &[f64])> = vec![
            ("residual".into(), &self.residual),
            ("trace_re".into(), &self.trace_re),
            ("trace_im".into(), &self.trace_im),
            ("dirac_hermiticity".into(), &self.dirac_hermiticity),
        ];
        for (k, v) in &self.extra {
            out.push((k.clone(), v));
        }
        out
    }
}

/// Pointwise and aggregated densities of a sampled `W`.
#[derive(Clone, Debug)]
pub struct Observables<T: Real> {
    pub trace_density: Vec<C<T>>,
    pub gamma0_density: Vec<C<T>>,
    pub dirac_deviation: Vec<T>,
    pub total_trace: C<T>,
    pub total_gamma0: C<T>,
    pub max_dirac_deviation: T,
}

/// `tr W`, `tr(γ^0 W)` and `‖W − γ^0W†γ^0‖` at every sample.
pub fn observables<T: Real>(w: &GridField<T>, set: &GammaSet<T>) -> Observables<T> {
    let g0 = set.gamma0();
    let trace_density: Vec<C<T>> = w.samples.iter().map(|m| m.trace()).collect();
    let gamma0_density: Vec<C<T>> = w.samples.iter().map(|m| (*g0 * *m).trace()).collect();
    let dirac_deviation: Vec<T> = w.samples.iter().map(|m| m.dist(&set.dirac_adjoint(m))).collect();
    let zero = C::new(T::zero(), T::zero());
    Observables {
        total_trace: trace_density.iter().fold(zero, |a, b| a + b),
        total_gamma0: gamma0_density.iter().fold(zero, |a, b| a + b),
        max_dirac_deviation: dirac_deviation.iter().copied().fold(T::zero(), T::max),
        trace_density,
        gamma0_density,
        dirac_deviation,
    }
}

pub(crate) fn dirac_deviation<T: Real>(w: &GridField<T>, set: &GammaSet<T>) -> T {
    w.samples
        .iter()
        .map(|m| m.dist(&set.dirac_adjoint(m)))
        .fold(T::zero(), T::max)
}

/// Derivative of `w` along `v`, or `None` when `v` is not sampled.
pub(crate) fn maybe_derivative<T: Real>(w: &GridField<T>, v: Var, mode: DerivativeMode) -> Result<Option<GridField<T>>> {
    match w.spec.axis_of(v) {
        Some(ax) => w.derivative(ax, mode).map(Some),
        None => Ok(None),
    }
}

/// One classical fourth-order Runge–Kutta step; `rhs` sees the stage time in `GridField::time`.
pub(crate) fn rk4<T: Real>(
    w: &GridField<T>,
    dt: T,
    mut rhs: impl FnMut(&GridField<T>) -> Result<GridField<T>>,
) -> Result<GridField<T>> {
    let half = dt * T::of(0.5);
    let stage = |base: &GridField<T>, s: T, k: &GridField<T>, t: T| {
        let mut out = base.axpy(s, k);
        out.time = t;
        out
    };
    let k1 = rhs(w)?;
    let k2 = rhs(&stage(w, half, &k1, w.time + half))?;
    let k3 = rhs(&stage(w, half, &k2, w.time + half))?;
    let k4 = rhs(&stage(w, dt, &k3, w.time + dt))?;
    let sixth = dt / T::of(6.0);
    let mut out = w.map(|i, m| {
        *m + (k1.samples[i] + (k2.samples[i] + k3.samples[i]).scale_real(T::of(2.0)) + k4.samples[i]).scale_real(sixth)
    });
    out.time = w.time + dt;
    Ok(out)
}

pub(crate) fn max_norm<T: Real>(samples: &[ComplexMat4<T>]) -> T {
    samples.iter().map(|m| m.max_abs()).fold(T::zero(), T::max)
}
