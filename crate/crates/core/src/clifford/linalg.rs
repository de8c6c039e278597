//! Small dense linear algebra on 4×4 complex matrices: Hermitian eigensolver,
//! matrix exponential, singular values and null spaces.

use num_complex::Complex;

use super::mat4::ComplexMat4;
use crate::scalar::{creal, Real, C};

/// Eigen-decomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Eigenvalues in ascending order.
    pub values: [T; 4],
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMat4<T>,
}

/// Cyclic complex Jacobi iteration. The input is symmetrized as `(A + A†)/2`.
pub fn hermitian_eigen<T: Real>(a: &ComplexMat4<T>) -> HermitianEigen<T> {
    let half = T::of(0.5);
    let mut m = (*a + a.adjoint()).scale_real(half);
    let mut v = ComplexMat4::<T>::identity();
    let scale = m.max_abs().max(T::min_positive_value());

    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..4 {
            for q in (p + 1)..4 {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= scale * T::epsilon() * T::of(0.25) {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= scale * T::epsilon() * T::of(0.01) {
                    continue;
                }
                let phase = apq / creal(r);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = half * (r + r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // J = diag(1, e^{-iφ}) · R(θ) in the (p, q) plane.
                let mut j = ComplexMat4::<T>::identity();
                j[(p, p)] = creal(c);
                j[(p, q)] = creal(s);
                j[(q, p)] = -phase.conj() * s;
                j[(q, q)] = phase.conj() * c;
                m = j.adjoint() * m * j;
                m[(p, q)] = creal(T::zero());
                m[(q, p)] = creal(T::zero());
                v = v * j;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| m[(x, x)].re.partial_cmp(&m[(y, y)].re).unwrap());
    let values = order.map(|k| m[(k, k)].re);
    let vectors = ComplexMat4::from_fn(|i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

fn is_hermitian<T: Real>(a: &ComplexMat4<T>, tol: T) -> bool {
    a.dist(&a.adjoint()) <= tol
}

/// `exp(A)` by scaling and squaring of the Taylor series. Works for any matrix.
pub fn expm_series<T: Real>(a: &ComplexMat4<T>) -> ComplexMat4<T> {
    let norm1 = (0..4)
        .map(|j| (0..4).map(|i| a[(i, j)].norm()).sum::<T>())
        .fold(T::zero(), T::max);
    let mut squarings = 0u32;
    let mut scaled_norm = norm1;
    while scaled_norm > T::of(0.5) {
        scaled_norm = scaled_norm * T::of(0.5);
        squarings += 1;
    }
    let factor = T::of(0.5).powi(squarings as i32);
    let x = a.scale_real(factor);

    let mut result = ComplexMat4::identity();
    let mut term = ComplexMat4::identity();
    for k in 1..=40 {
        term = (term * x).scale_real(T::one() / T::of_usize(k));
        result += term;
        if term.max_abs() <= T::epsilon() * T::of(1e-2) {
            break;
        }
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// `exp(A)`: eigen-decomposition when `A` is Hermitian or anti-Hermitian,
/// scaling and squaring otherwise.
pub fn expm<T: Real>(a: &ComplexMat4<T>) -> ComplexMat4<T> {
    let tol = a.max_abs().max(T::one()) * T::epsilon() * T::of(64.0);
    if is_hermitian(a, tol) {
        let eig = hermitian_eigen(a);
        let d = ComplexMat4::diag(eig.values.map(|l| creal(l.exp())));
        return eig.vectors * d * eig.vectors.adjoint();
    }
    let ia = a.scale(Complex::new(T::zero(), T::one()));
    if is_hermitian(&ia, tol) {
        // A = −i H with H = iA Hermitian.
        let eig = hermitian_eigen(&ia);
        let d = ComplexMat4::diag(eig.values.map(|l| Complex::new(l.cos(), -l.sin())));
        return eig.vectors * d * eig.vectors.adjoint();
    }
    expm_series(a)
}

/// One-sided (Hestenes) Jacobi: returns `A V` with mutually orthogonal columns
/// and the unitary `V`. Column norms of `A V` are the singular values, accurate
/// relative to `σ_max` (unlike the square roots of the eigenvalues of `A†A`).
fn hestenes<T: Real>(a: &ComplexMat4<T>) -> (ComplexMat4<T>, ComplexMat4<T>) {
    let half = T::of(0.5);
    let mut u = *a;
    let mut v = ComplexMat4::<T>::identity();
    let col_dot = |m: &ComplexMat4<T>, p: usize, q: usize| {
        (0..4).fold(creal(T::zero()), |acc, i| acc + m[(i, p)].conj() * m[(i, q)])
    };
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..4 {
            for q in (p + 1)..4 {
                let alpha = col_dot(&u, p, p).re;
                let beta = col_dot(&u, q, q).re;
                let gamma = col_dot(&u, p, q);
                let r = gamma.norm();
                if r <= T::epsilon() * (alpha * beta).sqrt() || r == T::zero() {
                    continue;
                }
                rotated = true;
                let phase = gamma / creal(r);
                let theta = half * (r + r).atan2(beta - alpha);
                let (s, c) = theta.sin_cos();
                let j = [[creal(c), creal(s)], [-phase.conj() * s, phase.conj() * c]];
                for m in [&mut u, &mut v] {
                    for i in 0..4 {
                        let (x, y) = (m[(i, p)], m[(i, q)]);
                        m[(i, p)] = x * j[0][0] + y * j[1][0];
                        m[(i, q)] = x * j[0][1] + y * j[1][1];
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (u, v)
}

fn column_norms<T: Real>(m: &ComplexMat4<T>) -> [T; 4] {
    std::array::from_fn(|j| (0..4).map(|i| m[(i, j)].norm_sqr()).sum::<T>().sqrt())
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(a: &ComplexMat4<T>) -> [T; 4] {
    let (u, _) = hestenes(a);
    let mut s = column_norms(&u);
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank with threshold `rel_tol · σ_max`.
pub fn rank<T: Real>(a: &ComplexMat4<T>, rel_tol: T) -> usize {
    let s = singular_values(a);
    if s[0] == T::zero() {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * s[0]).count()
}

/// Orthonormal basis of the null space of `a`.
///
/// Directions with singular value below `rel_tol · σ_max` count as null. The
/// basis is made deterministic by projecting the standard basis vectors
/// e₁..e₄ in order onto the null space, Gram-Schmidt orthonormalizing and
/// rotating each vector's phase so its pivot component is real positive.
pub fn null_space<T: Real>(a: &ComplexMat4<T>, rel_tol: T) -> Vec<[C<T>; 4]> {
    let (u, v) = hestenes(a);
    let s = column_norms(&u);
    let smax = s.iter().copied().fold(T::zero(), T::max);
    let zero_all = smax == T::zero();
    let mut projector = ComplexMat4::<T>::zero();
    let mut dim = 0;
    for k in 0..4 {
        if zero_all || s[k] <= rel_tol * smax {
            let col = v.column(k);
            projector += ComplexMat4::from_fn(|i, j| col[i] * col[j].conj());
            dim += 1;
        }
    }

    let mut basis: Vec<[C<T>; 4]> = Vec::with_capacity(dim);
    for pivot in 0..4 {
        if basis.len() == dim {
            break;
        }
        let mut v = projector.column(pivot);
        for b in &basis {
            let overlap: C<T> = (0..4).map(|i| b[i].conj() * v[i]).fold(creal(T::zero()), |a, x| a + x);
            for i in 0..4 {
                v[i] = v[i] - b[i] * overlap;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::of(1e-6) {
            continue;
        }
        let lead = v
            .iter()
            .copied()
            .find(|z| z.norm() > T::of(1e-6) * norm)
            .unwrap_or(creal(T::one()));
        let phase = lead.conj() / creal(lead.norm());
        for z in v.iter_mut() {
            *z = *z * phase / creal(norm);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMat4<f64>;

    fn hermitian_sample() -> M {
        let a = M::from_fn(|i, j| Complex::new((i + 2 * j) as f64 * 0.3 - 1.0, (i as f64 - j as f64) * 0.7));
        a + a.adjoint()
    }

    #[test]
    fn jacobi_reconstructs() {
        let h = hermitian_sample();
        let eig = hermitian_eigen(&h);
        let d = M::diag(eig.values.map(|l| Complex::new(l, 0.0)));
        let rec = eig.vectors * d * eig.vectors.adjoint();
        assert!(rec.approx_eq(&h, 1e-12), "{}", rec.dist(&h));
        assert!((eig.vectors.adjoint() * eig.vectors).approx_eq(&M::identity(), 1e-13));
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn expm_routes_agree() {
        let h = hermitian_sample().scale_real(0.4);
        assert!(expm(&h).approx_eq(&expm_series(&h), 1e-10));
        let ah = h.scale(Complex::new(0.0, 1.0));
        assert!(expm(&ah).approx_eq(&expm_series(&ah), 1e-11));
        let u = expm(&ah);
        assert!((u.adjoint() * u).approx_eq(&M::identity(), 1e-13));
    }

    #[test]
    fn expm_of_nilpotent() {
        let mut n = M::zero();
        n[(0, 1)] = Complex::new(2.0, 0.0);
        let e = expm(&n);
        let mut expect = M::identity();
        expect[(0, 1)] = Complex::new(2.0, 0.0);
        assert!(e.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn null_space_of_projector_complement() {
        let mut a = M::identity();
        a[(0, 0)] = Complex::new(0.0, 0.0);
        a[(2, 2)] = Complex::new(0.0, 0.0);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        assert!((ns[0][0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((ns[1][2] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(rank(&a, 1e-10), 2);
    }
}
