use num_complex::Complex;
use rustfft::FftPlanner;

use super::{max_norm, EvolutionReport};
use crate::brackets::ClaimReport;
use crate::clifford::{spin_transform, ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::PhysParams;
use crate::polyfield::{DerivativeMode, Field, GridField, GridSpec, Var};
use crate::scalar::{creal, Real};

/// `exp(−i c t α·k)`, via `(α·k)² = |k|²`.
pub fn free_propagator<T: Real>(k: [T; 3], t: T, params: &PhysParams<T>, set: &GammaSet<T>) -> ComplexMat4<T> {
    let kn = k.iter().map(|x| *x * *x).sum::<T>().sqrt();
    if kn == T::zero() {
        return ComplexMat4::identity();
    }
    let phase = params.c * kn * t;
    let ak = set.alpha_dot(&k).scale_real(T::one() / kn);
    ComplexMat4::identity().scale_real(phase.cos()) - ak.scale(Complex::new(T::zero(), phase.sin()))
}

/// Exact free solution `Σ± P±M e^{i(∓|k|x^0 + k·x)}` with `P± = (1 ± α·k̂)/2`;
/// at `x^0 = 0` it equals `M e^{ik·x}`.
pub fn free_mode_solution<T: Real>(k: [T; 3], m: &ComplexMat4<T>, set: &GammaSet<T>) -> Field<T> {
    let kn = k.iter().map(|x| *x * *x).sum::<T>().sqrt();
    if kn == T::zero() {
        return Field::constant(*m);
    }
    let ak = set.alpha_dot(&k).scale_real(T::one() / kn);
    let half = T::of(0.5);
    let id = ComplexMat4::identity();
    let plus = (id + ak).scale_real(half) * *m;
    let minus = (id - ak).scale_real(half) * *m;
    Field::plane_wave(plus, [-kn, k[0], k[1], k[2]]).add(&Field::plane_wave(minus, [kn, k[0], k[1], k[2]]))
}

/// `‖γ^ν ∂_ν W‖` for an exact field (largest coefficient).
pub fn residual_free_field<T: Real>(w: &Field<T>, set: &GammaSet<T>) -> T {
    let mut acc = Field::zero().with_limits(w.limits());
    for nu in 0..4u8 {
        let d = w.differentiate(Var::X(nu));
        if !d.is_zero() {
            acc = acc.add(&d.left_mul(&set.gamma[nu as usize]));
        }
    }
    acc.norm()
}

/// Fourth-order central time derivative from samples at `t + jδ`, `j = −2..=2`.
pub fn time_stencil<T: Real>(ws: [&GridField<T>; 5], delta: T) -> GridField<T> {
    let inv = T::one() / (T::of(12.0) * delta);
    ws[2].map(|i, _| {
        (ws[0].samples[i] - ws[1].samples[i].scale_real(T::of(8.0)) + ws[3].samples[i].scale_real(T::of(8.0))
            - ws[4].samples[i])
            .scale_real(inv)
    })
}

/// `max ‖γ^0 (1/c)∂_t W + γ^i ∂_i W‖` over the grid, with the time derivative
/// from five snapshots spaced `delta` apart and spectral spatial derivatives.
/// Spatial directions without a grid axis contribute nothing.
pub fn residual_free_stencil<T: Real>(
    ws: [&GridField<T>; 5],
    delta: T,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<T> {
    let center = ws[2];
    let dt = time_stencil(ws, delta);
    let g0c = set.gamma[0].scale_real(T::one() / params.c);
    let mut r: Vec<ComplexMat4<T>> = dt.samples.iter().map(|m| g0c * *m).collect();
    for i in 1..4u8 {
        if let Some(d) = super::maybe_derivative(center, Var::X(i), DerivativeMode::Auto)? {
            let g = set.gamma[i as usize];
            for (acc, m) in r.iter_mut().zip(&d.samples) {
                *acc += g * *m;
            }
        }
    }
    Ok(max_norm(&r))
}

/// Grid axes that are spatial, with their component index 0..3. Every one of
/// them must be periodic; `x^0` may not be sampled.
fn spatial_axes<T: Real>(spec: &GridSpec<T>) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (ax, a) in spec.axes.iter().enumerate() {
        match a.var {
            Var::X(0) => return Err(Error::Grid("x0 cannot be a grid axis of an evolving field".into())),
            Var::X(i) => {
                if !a.periodic {
                    return Err(Error::Grid(format!("free evolution needs a periodic {} axis", a.var)));
                }
                out.push((ax, i as usize - 1));
            }
            Var::P(_) => {}
        }
    }
    Ok(out)
}

/// In-place DFT of every matrix entry along the listed axes; the inverse is normalized.
fn fft_axes<T: Real>(samples: &mut [ComplexMat4<T>], spec: &GridSpec<T>, axes: &[usize], inverse: bool) {
    let strides = spec.strides();
    let mut planner = FftPlanner::<T>::new();
    for &axis in axes {
        let n = spec.axes[axis].n;
        let stride = strides[axis];
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let norm = if inverse { T::one() / T::of_usize(n) } else { T::one() };
        let mut line = vec![creal(T::zero()); n];
        for start in 0..samples.len() {
            if (start / stride) % n != 0 {
                continue;
            }
            for r in 0..4 {
                for c in 0..4 {
                    for (i, z) in line.iter_mut().enumerate() {
                        *z = samples[start + i * stride][(r, c)];
                    }
                    plan.process(&mut line);
                    for (i, z) in line.iter().enumerate() {
                        samples[start + i * stride][(r, c)] = *z * norm;
                    }
                }
            }
        }
    }
}

/// Spectral coefficients of `w` together with each bin's wavevector.
struct Modes<T: Real> {
    hat: Vec<ComplexMat4<T>>,
    k: Vec<[T; 3]>,
    axes: Vec<usize>,
}

fn modes<T: Real>(w: &GridField<T>) -> Result<Modes<T>> {
    let spatial = spatial_axes(&w.spec)?;
    let axes: Vec<usize> = spatial.iter().map(|(a, _)| *a).collect();
    let mut hat = w.samples.clone();
    fft_axes(&mut hat, &w.spec, &axes, false);
    let k = (0..w.len())
        .map(|flat| {
            let idx = w.spec.unflatten(flat);
            let mut k = [T::zero(); 3];
            for &(ax, comp) in &spatial {
                k[comp] = w.spec.axes[ax].wavenumber(idx[ax]);
            }
            k
        })
        .collect();
    Ok(Modes { hat, k, axes })
}

fn synthesize<T: Real>(m: &Modes<T>, w0: &GridField<T>, t: T, params: &PhysParams<T>, set: &GammaSet<T>) -> GridField<T> {
    let mut s: Vec<ComplexMat4<T>> = m
        .hat
        .iter()
        .zip(&m.k)
        .map(|(h, k)| free_propagator(*k, t, params, set) * *h)
        .collect();
    fft_axes(&mut s, &w0.spec, &m.axes, true);
    GridField {
        spec: w0.spec.clone(),
        samples: s,
        time: w0.time + t,
    }
}

/// `W(t)` from the exact per-mode propagator. Momentum axes are passive.
pub fn propagate_free<T: Real>(w0: &GridField<T>, t: T, params: &PhysParams<T>, set: &GammaSet<T>) -> Result<GridField<T>> {
    let m = modes(w0)?;
    Ok(synthesize(&m, w0, t, params, set))
}

/// Closed-form free evolution up to `total_time`, sampled at `snapshots + 1`
/// equally spaced times. The residual series is [`residual_free_stencil`] at
/// each sample time.
pub fn evolve_free<T: Real>(
    w0: &GridField<T>,
    total_time: T,
    snapshots: usize,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<EvolutionReport<T>> {
    params.validate()?;
    let started = std::time::Instant::now();
    let m = modes(w0)?;
    let kmax = m
        .k
        .iter()
        .map(|k| k.iter().map(|x| *x * *x).sum::<T>().sqrt())
        .fold(T::zero(), T::max);
    let delta = T::of(1e-3) / (params.c * kmax).max(T::one());
    let snapshots = snapshots.max(1);
    let mut report = EvolutionReport::new("free", "free_equation_max_norm", w0);
    for j in 0..=snapshots {
        let t = total_time * T::of_usize(j) / T::of_usize(snapshots);
        let ws: Vec<GridField<T>> = (-2i32..=2)
            .map(|o| synthesize(&m, w0, t + delta * T::of(o as f64), params, set))
            .collect();
        let res = residual_free_stencil([&ws[0], &ws[1], &ws[2], &ws[3], &ws[4]], delta, params, set)?;
        report.push(&ws[2], res, set);
        if j == snapshots {
            report.final_state = ws[2].clone();
        }
    }
    report.wall_clock = started.elapsed();
    Ok(report)
}

/// `W′(x, p) = S W(Λ⁻¹x, Λᵀp) S⁻¹` for the transform generated by `omega`.
pub fn covariance_transform<T: Real>(omega: &[[T; 4]; 4], w: &Field<T>, set: &GammaSet<T>) -> Result<Field<T>> {
    let st = spin_transform(omega, set)?;
    let a = st.lambda_inverse();
    let b: [[T; 4]; 4] = std::array::from_fn(|mu| std::array::from_fn(|nu| st.lambda[nu][mu]));
    Ok(w.substitute_linear(&a, &b)?.left_mul(&st.s).right_mul(&st.s_inv))
}

/// Asserts that the transformed free solution still solves the free equation.
pub fn covariance_check<T: Real>(omega: &[[T; 4]; 4], w: &Field<T>, set: &GammaSet<T>) -> Result<ClaimReport> {
    let before = residual_free_field(w, set).as_f64();
    let moved = covariance_transform(omega, w, set)?;
    let after = residual_free_field(&moved, set).as_f64();
    let om: Vec<String> = omega
        .iter()
        .enumerate()
        .flat_map(|(mu, row)| {
            row.iter()
                .enumerate()
                .filter(move |(nu, v)| mu < *nu && **v != T::zero())
                .map(move |(nu, v)| format!("w{mu}{nu}={v}"))
        })
        .collect();
    Ok(ClaimReport::asserted("lorentz_covariance", "free", after, 1e-8)
        .with_inputs(if om.is_empty() { "identity".to_string() } else { om.join(" ") })
        .with_note(format!("residual before transform {before:e}")))
}
