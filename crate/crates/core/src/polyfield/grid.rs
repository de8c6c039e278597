use num_complex::Complex;
use rustfft::FftPlanner;

use super::{Field, PhasePoint, Var};
use crate::clifford::ComplexMat4;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real, C};

/// One sampled coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis<T: Real> {
    pub var: Var,
    pub min: T,
    pub extent: T,
    pub n: usize,
    /// Periodic axes sample `[min, min + extent)`; others include both endpoints.
    pub periodic: bool,
}

impl<T: Real> Axis<T> {
    pub fn periodic(var: Var, min: T, extent: T, n: usize) -> Self {
        Self {
            var,
            min,
            extent,
            n,
            periodic: true,
        }
    }

    pub fn bounded(var: Var, min: T, extent: T, n: usize) -> Self {
        Self {
            var,
            min,
            extent,
            n,
            periodic: false,
        }
    }

    pub fn spacing(&self) -> T {
        if self.periodic {
            self.extent / T::of_usize(self.n)
        } else {
            self.extent / T::of_usize(self.n.saturating_sub(1).max(1))
        }
    }

    pub fn coord(&self, i: usize) -> T {
        self.min + self.spacing() * T::of_usize(i)
    }

    /// Angular wavenumber of FFT bin `i` (periodic axes only); the Nyquist bin maps to zero.
    pub fn wavenumber(&self, i: usize) -> T {
        let n = self.n;
        let m: i64 = if 2 * i < n {
            i as i64
        } else if 2 * i == n {
            0
        } else {
            i as i64 - n as i64
        };
        T::of(2.0 * std::f64::consts::PI * m as f64) / self.extent
    }
}

/// Grid layout: up to a few axes over phase-spacetime plus the fixed values
/// of every coordinate that is not sampled.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T: Real> {
    pub axes: Vec<Axis<T>>,
    pub base: PhasePoint<T>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(axes: Vec<Axis<T>>, base: PhasePoint<T>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Grid("grid needs at least one axis".into()));
        }
        for (i, a) in axes.iter().enumerate() {
            if a.n < 2 {
                return Err(Error::Grid(format!("axis {} has fewer than 2 points", a.var)));
            }
            if !(a.extent > T::zero()) || !a.extent.is_finite() || !a.min.is_finite() {
                return Err(Error::Grid(format!("axis {} has a non-positive extent", a.var)));
            }
            if axes[..i].iter().any(|b| b.var == a.var) {
                return Err(Error::Grid(format!("axis {} listed twice", a.var)));
            }
        }
        Ok(Self { axes, base })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.axes.len()];
        for d in (0..self.axes.len().saturating_sub(1)).rev() {
            s[d] = s[d + 1] * self.axes[d + 1].n;
        }
        s
    }

    /// Multi-index of a flat sample index (first axis slowest).
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for d in (0..self.axes.len()).rev() {
            idx[d] = flat % self.axes[d].n;
            flat /= self.axes[d].n;
        }
        idx
    }

    pub fn point(&self, flat: usize) -> PhasePoint<T> {
        let idx = self.unflatten(flat);
        let mut pt = self.base;
        for (a, &i) in self.axes.iter().zip(&idx) {
            pt = pt.with(a.var, a.coord(i));
        }
        pt
    }

    pub fn axis_of(&self, v: Var) -> Option<usize> {
        self.axes.iter().position(|a| a.var == v)
    }
}

/// Sampled matrix field.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T: Real> {
    pub spec: GridSpec<T>,
    pub samples: Vec<ComplexMat4<T>>,
    pub time: T,
}

/// How [`grid_derivative`] differentiates along an axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    /// FFT differentiation; requires a periodic axis.
    Spectral,
    /// Fourth-order central differences (one-sided fourth-order stencils at open edges).
    FiniteDifference,
    /// Spectral on periodic axes, finite differences otherwise.
    Auto,
}

impl<T: Real> GridField<T> {
    pub fn new(spec: GridSpec<T>, samples: Vec<ComplexMat4<T>>, time: T) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::Grid(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                spec.len()
            )));
        }
        Ok(Self {
            spec,
            samples,
            time,
        })
    }

    pub fn filled(spec: GridSpec<T>, value: ComplexMat4<T>) -> Self {
        let n = spec.len();
        Self {
            spec,
            samples: vec![value; n],
            time: T::zero(),
        }
    }

    pub fn from_fn(spec: GridSpec<T>, mut f: impl FnMut(&PhasePoint<T>) -> ComplexMat4<T>) -> Self {
        let samples = (0..spec.len()).map(|i| f(&spec.point(i))).collect();
        Self {
            spec,
            samples,
            time: T::zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn map(&self, mut f: impl FnMut(usize, &ComplexMat4<T>) -> ComplexMat4<T>) -> Self {
        Self {
            spec: self.spec.clone(),
            samples: self.samples.iter().enumerate().map(|(i, m)| f(i, m)).collect(),
            time: self.time,
        }
    }

    /// `self + s·other`, samplewise.
    pub fn axpy(&self, s: T, other: &Self) -> Self {
        self.map(|i, m| *m + other.samples[i].scale_real(s))
    }

    /// `Σ tr W` over all samples.
    pub fn total_trace(&self) -> C<T> {
        self.samples
            .iter()
            .fold(creal(T::zero()), |acc, m| acc + m.trace())
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().map(|m| m.max_abs()).fold(T::zero(), T::max)
    }

    pub fn dist(&self, other: &Self) -> T {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.dist(b))
            .fold(T::zero(), T::max)
    }

    pub fn derivative(&self, axis: usize, mode: DerivativeMode) -> Result<Self> {
        grid_derivative(self, axis, mode)
    }
}

/// Samples an exact field on every grid point.
pub fn sample_to_grid<T: Real>(f: &Field<T>, spec: &GridSpec<T>) -> GridField<T> {
    GridField::from_fn(spec.clone(), |pt| f.evaluate(pt))
}

/// Derivative along grid axis `axis`.
pub fn grid_derivative<T: Real>(gf: &GridField<T>, axis: usize, mode: DerivativeMode) -> Result<GridField<T>> {
    let spec = &gf.spec;
    let ax = *spec
        .axes
        .get(axis)
        .ok_or_else(|| Error::Grid(format!("no axis {axis}")))?;
    let spectral = match mode {
        DerivativeMode::Spectral => {
            if !ax.periodic {
                return Err(Error::Grid(format!(
                    "spectral derivative requested on non-periodic axis {}",
                    ax.var
                )));
            }
            true
        }
        DerivativeMode::FiniteDifference => false,
        DerivativeMode::Auto => ax.periodic,
    };
    let stride = spec.strides()[axis];
    let n = ax.n;
    let mut out = vec![ComplexMat4::zero(); gf.samples.len()];

    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let ik: Vec<C<T>> = (0..n).map(|i| Complex::new(T::zero(), ax.wavenumber(i))).collect();
    let norm = T::one() / T::of_usize(n);
    let h = ax.spacing();

    let mut line = vec![creal(T::zero()); n];
    for start in 0..gf.samples.len() {
        // Visit each line once, from the sample whose index along `axis` is 0.
        if (start / stride) % n != 0 {
            continue;
        }
        for r in 0..4 {
            for c in 0..4 {
                for (i, z) in line.iter_mut().enumerate() {
                    *z = gf.samples[start + i * stride][(r, c)];
                }
                let d = if spectral {
                    fwd.process(&mut line);
                    for (z, k) in line.iter_mut().zip(&ik) {
                        *z = *z * k * norm;
                    }
                    inv.process(&mut line);
                    line.clone()
                } else {
                    fd4(&line, h, ax.periodic)
                };
                for (i, z) in d.into_iter().enumerate() {
                    out[start + i * stride][(r, c)] = z;
                }
            }
        }
    }
    GridField::new(spec.clone(), out, gf.time)
}

fn fd4<T: Real>(f: &[C<T>], h: T, periodic: bool) -> Vec<C<T>> {
    let n = f.len();
    let inv12h = creal(T::one() / (T::of(12.0) * h));
    let c = |x: f64| creal(T::of(x));
    let mut out = vec![creal(T::zero()); n];
    if periodic {
        for i in 0..n {
            let at = |o: isize| f[((i as isize + o).rem_euclid(n as isize)) as usize];
            out[i] = (at(-2) - at(-1) * c(8.0) + at(1) * c(8.0) - at(2)) * inv12h;
        }
        return out;
    }
    if n < 5 {
        // Too short for the fourth-order stencils: fall back to second order.
        for i in 0..n {
            out[i] = if i == 0 {
                (f[1] - f[0]) * inv12h * c(12.0)
            } else if i == n - 1 {
                (f[n - 1] - f[n - 2]) * inv12h * c(12.0)
            } else {
                (f[i + 1] - f[i - 1]) * inv12h * c(6.0)
            };
        }
        return out;
    }
    for i in 0..n {
        out[i] = if i == 0 {
            (f[0] * c(-25.0) + f[1] * c(48.0) - f[2] * c(36.0) + f[3] * c(16.0) - f[4] * c(3.0)) * inv12h
        } else if i == 1 {
            (f[0] * c(-3.0) - f[1] * c(10.0) + f[2] * c(18.0) - f[3] * c(6.0) + f[4]) * inv12h
        } else if i == n - 2 {
            (f[n - 1] * c(3.0) + f[n - 2] * c(10.0) - f[n - 3] * c(18.0) + f[n - 4] * c(6.0) - f[n - 5]) * inv12h
        } else if i == n - 1 {
            (f[n - 1] * c(25.0) - f[n - 2] * c(48.0) + f[n - 3] * c(36.0) - f[n - 4] * c(16.0) + f[n - 5] * c(3.0))
                * inv12h
        } else {
            (f[i - 2] - f[i - 1] * c(8.0) + f[i + 1] * c(8.0) - f[i + 2]) * inv12h
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::{random_matrix, Var};
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn spec_1d(n: usize, periodic: bool) -> GridSpec<f64> {
        let ax = if periodic {
            Axis::periodic(Var::X(1), 0.0, 2.0 * PI, n)
        } else {
            Axis::bounded(Var::X(1), -1.0, 2.0, n)
        };
        GridSpec::new(vec![ax], PhasePoint::origin()).unwrap()
    }

    #[test]
    fn spectral_derivative_of_lattice_wave() {
        let m = random_matrix::<f64, _>(&mut rand_chacha::ChaCha8Rng::seed_from_u64(3));
        let spec = GridSpec::new(
            vec![
                Axis::periodic(Var::X(1), 0.0, 2.0 * PI, 16),
                Axis::periodic(Var::X(2), 0.0, 4.0 * PI, 8),
            ],
            PhasePoint::origin(),
        )
        .unwrap();
        let k = [0.0, 3.0, 0.5, 0.0];
        let f = Field::plane_wave(m, k);
        let g = sample_to_grid(&f, &spec);
        let dx = grid_derivative(&g, 0, DerivativeMode::Spectral).unwrap();
        let exact = sample_to_grid(&f.differentiate(Var::X(1)), &spec);
        assert!(dx.dist(&exact) <= 1e-10, "{}", dx.dist(&exact));
        let dy = grid_derivative(&g, 1, DerivativeMode::Spectral).unwrap();
        let exact = sample_to_grid(&f.differentiate(Var::X(2)), &spec);
        assert!(dy.dist(&exact) <= 1e-10);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let g = GridField::filled(spec_1d(12, true), ComplexMat4::<f64>::identity());
        for mode in [DerivativeMode::Spectral, DerivativeMode::FiniteDifference] {
            assert!(grid_derivative(&g, 0, mode).unwrap().max_abs() <= 1e-14);
        }
    }

    #[test]
    fn spectral_needs_periodic_axis() {
        let g = GridField::filled(spec_1d(12, false), ComplexMat4::<f64>::identity());
        assert!(matches!(
            grid_derivative(&g, 0, DerivativeMode::Spectral),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn finite_difference_matches_exact_polynomial() {
        let f: Field<f64> = crate::polyfield::random_field(11, 4, 0);
        let spec = spec_1d(201, false);
        let g = sample_to_grid(&f, &spec);
        let d = grid_derivative(&g, 0, DerivativeMode::FiniteDifference).unwrap();
        let exact = sample_to_grid(&f.differentiate(Var::X(1)), &spec);
        for i in 2..199 {
            let scale = exact.samples[i].max_abs().max(1e-3);
            assert!(d.samples[i].dist(&exact.samples[i]) / scale <= 1e-6);
        }
    }
}
