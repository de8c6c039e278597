use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::scalar::{creal, Real, C};

/// Dense 4×4 complex matrix, the value type of every field, Hamiltonian and bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat4<T: Real> {
    pub entries: [[C<T>; 4]; 4],
}

impl<T: Real> Default for ComplexMat4<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> ComplexMat4<T> {
    pub fn zero() -> Self {
        Self {
            entries: [[Complex::new(T::zero(), T::zero()); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        Self::scalar(creal(T::one()))
    }

    /// `z·1₄`.
    pub fn scalar(z: C<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = z;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: [C<T>; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = d[i];
        }
        m
    }

    /// Builds a matrix from real and imaginary parts given as `f64` rows.
    pub fn from_parts(re: [[f64; 4]; 4], im: [[f64; 4]; 4]) -> Self {
        Self::from_fn(|i, j| Complex::new(T::of(re[i][j]), T::of(im[i][j])))
    }

    pub fn from_real(re: [[f64; 4]; 4]) -> Self {
        Self::from_parts(re, [[0.0; 4]; 4])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..4).fold(creal(T::zero()), |acc, i| acc + self.entries[i][i])
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * z)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(creal(s))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.entries {
            for z in row {
                m = m.max(z.norm());
            }
        }
        m
    }

    pub fn frobenius(&self) -> T {
        let mut s = T::zero();
        for row in &self.entries {
            for z in row {
                s = s + z.norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|z| z.re == T::zero() && z.im == T::zero())
    }

    /// Max-entry distance between two matrices.
    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dist(other) <= tol
    }

    pub fn column(&self, j: usize) -> [C<T>; 4] {
        [
            self.entries[0][j],
            self.entries[1][j],
            self.entries[2][j],
            self.entries[3][j],
        ]
    }

    pub fn mul_vec(&self, v: &[C<T>; 4]) -> [C<T>; 4] {
        let mut out = [creal(T::zero()); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o = *o + self.entries[i][j] * vj;
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.entries;
        let mut inv = Self::identity().entries;
        let scale = self.max_abs().max(T::min_positive_value());
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&r1, &r2| {
                    a[r1][col]
                        .norm()
                        .partial_cmp(&a[r2][col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if a[pivot][col].norm() <= scale * T::epsilon() * T::of(16.0) {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            for j in 0..4 {
                a[col][j] = a[col][j] / p;
                inv[col][j] = inv[col][j] / p;
            }
            for r in 0..4 {
                if r != col {
                    let f = a[r][col];
                    if f.norm() != T::zero() {
                        for j in 0..4 {
                            a[r][j] = a[r][j] - f * a[col][j];
                            inv[r][j] = inv[r][j] - f * inv[col][j];
                        }
                    }
                }
            }
        }
        Some(Self { entries: inv })
    }

    /// Converts between scalar precisions.
    pub fn cast<U: Real>(&self) -> ComplexMat4<U> {
        ComplexMat4::from_fn(|i, j| {
            let z = self.entries[i][j];
            Complex::new(U::of(z.re.as_f64()), U::of(z.im.as_f64()))
        })
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMat4<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.entries[i][j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMat4<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.entries[i][j]
    }
}

impl<T: Real> Add for ComplexMat4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<T: Real> AddAssign for ComplexMat4<T> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..4 {
            for j in 0..4 {
                self.entries[i][j] = self.entries[i][j] + rhs.entries[i][j];
            }
        }
    }
}

impl<T: Real> Sub for ComplexMat4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<T: Real> SubAssign for ComplexMat4<T> {
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..4 {
            for j in 0..4 {
                self.entries[i][j] = self.entries[i][j] - rhs.entries[i][j];
            }
        }
    }
}

impl<T: Real> Neg for ComplexMat4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j])
    }
}

impl<T: Real> Mul for ComplexMat4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.entries[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..4 {
                    out.entries[i][j] = out.entries[i][j] + a * rhs.entries[k][j];
                }
            }
        }
        out
    }
}

impl<T: Real> Mul<C<T>> for ComplexMat4<T> {
    type Output = Self;
    fn mul(self, z: C<T>) -> Self {
        self.scale(z)
    }
}

impl<T: Real> std::iter::Sum for ComplexMat4<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// `AB + BA`.
pub fn anticommutator<T: Real>(a: &ComplexMat4<T>, b: &ComplexMat4<T>) -> ComplexMat4<T> {
    *a * *b + *b * *a
}

/// `AB − BA`.
pub fn commutator<T: Real>(a: &ComplexMat4<T>, b: &ComplexMat4<T>) -> ComplexMat4<T> {
    *a * *b - *b * *a
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMat4<f64>;

    fn sample() -> M {
        M::from_fn(|i, j| Complex::new((i as f64) - 0.5 * j as f64, (i * j) as f64 * 0.25 + 0.1))
    }

    #[test]
    fn identity_anticommutator_doubles() {
        let m = sample();
        assert_eq!(anticommutator(&M::identity(), &m), m.scale_real(2.0));
    }

    #[test]
    fn self_commutator_vanishes() {
        let m = sample();
        assert!(commutator(&m, &m).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = sample() + M::identity().scale_real(3.0);
        let inv = m.inverse().unwrap();
        assert!((m * inv).approx_eq(&M::identity(), 1e-13));
    }

    #[test]
    fn singular_has_no_inverse() {
        let mut m = M::identity();
        m[(2, 2)] = Complex::new(0.0, 0.0);
        assert!(m.inverse().is_none());
    }
}
