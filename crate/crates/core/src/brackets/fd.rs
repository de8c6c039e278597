//! Independent oracles for the bracket formulas.
//!
//! The `fd_*` functions touch the operands only through [`Field::evaluate`];
//! the `enumerated_*` ones use exact derivatives but expand the star kernel
//! sequence by sequence instead of through the merged table in `star`.

use num_complex::Complex;

use crate::clifford::ComplexMat4;
use crate::polyfield::{Field, Monomial, PhasePoint, Var, NVARS};
use crate::scalar::{Real, C};

/// Default step for the nested five-point stencils.
pub const FD_STEP: f64 = 1e-2;

/// Mixed partial derivative `∂^counts F(pt)` by nested fourth-order central differences.
pub fn fd_derivative<T: Real>(f: &Field<T>, pt: &PhasePoint<T>, counts: &Monomial, h: T) -> ComplexMat4<T> {
    match counts.iter().position(|&c| c > 0) {
        None => f.evaluate(pt),
        Some(i) => {
            let mut rest = *counts;
            rest[i] -= 1;
            let v = Var::from_index(i);
            let at = |o: f64| fd_derivative(f, &pt.shifted(v, h * T::of(o)), &rest, h);
            (at(-2.0) - at(-1.0).scale_real(T::of(8.0)) + at(1.0).scale_real(T::of(8.0)) - at(2.0))
                .scale_real(T::one() / (T::of(12.0) * h))
        }
    }
}

fn single(v: Var) -> Monomial {
    let mut m = [0u8; NVARS];
    m[v.index()] = 1;
    m
}

/// `Σ_ν ∂_{p_ν}K ∂_{x^ν}W − ∂_{p_ν}W ∂_{x^ν}K` from finite differences.
pub fn fd_poisson<T: Real>(k: &Field<T>, w: &Field<T>, pt: &PhasePoint<T>, h: T) -> ComplexMat4<T> {
    let d = |f: &Field<T>, v: Var| fd_derivative(f, pt, &single(v), h);
    (0..4u8)
        .map(|nu| d(k, Var::P(nu)) * d(w, Var::X(nu)) - d(w, Var::P(nu)) * d(k, Var::X(nu)))
        .sum()
}

/// The symmetrized bracket from finite differences.
pub fn fd_extended<T: Real>(k: &Field<T>, w: &Field<T>, pt: &PhasePoint<T>, h: T) -> ComplexMat4<T> {
    let d = |f: &Field<T>, v: Var| fd_derivative(f, pt, &single(v), h);
    (0..4u8)
        .map(|nu| {
            let (pk, xk, pw, xw) = (d(k, Var::P(nu)), d(k, Var::X(nu)), d(w, Var::P(nu)), d(w, Var::X(nu)));
            (pk * xw + xw * pk) - (xk * pw + pw * xk)
        })
        .sum()
}

/// Star product at a point, expanding `Π^n` as an explicit sum over all
/// `8^n` ordered choices of kernel factors.
pub fn fd_star<T: Real>(f: &Field<T>, g: &Field<T>, pt: &PhasePoint<T>, hbar: T, max_order: usize, h: T) -> ComplexMat4<T> {
    let mut out = ComplexMat4::zero();
    let mut factorial = T::one();
    for n in 0..=max_order {
        if n > 0 {
            factorial = factorial * T::of_usize(n);
        }
        let mut acc = ComplexMat4::zero();
        for choice in 0..8usize.pow(n as u32) {
            let mut a = [0u8; NVARS];
            let mut b = [0u8; NVARS];
            let mut sign = T::one();
            let mut c = choice;
            for _ in 0..n {
                let pick = c % 8;
                c /= 8;
                let nu = (pick % 4) as u8;
                if pick < 4 {
                    a[Var::X(nu).index()] += 1;
                    b[Var::P(nu).index()] += 1;
                } else {
                    a[Var::P(nu).index()] += 1;
                    b[Var::X(nu).index()] += 1;
                    sign = -sign;
                }
            }
            acc += (fd_derivative(f, pt, &a, h) * fd_derivative(g, pt, &b, h)).scale_real(sign);
        }
        let pre: C<T> = Complex::new(T::zero(), hbar * T::of(0.5)).powu(n as u32) / Complex::new(factorial, T::zero());
        out += acc.scale(pre);
    }
    out
}

/// Moyal bracket at a point from [`fd_star`].
pub fn fd_moyal<T: Real>(k: &Field<T>, w: &Field<T>, pt: &PhasePoint<T>, hbar: T, max_order: usize, h: T) -> ComplexMat4<T> {
    (fd_star(k, w, pt, hbar, max_order, h) - fd_star(w, k, pt, hbar, max_order, h))
        .scale(Complex::new(T::zero(), -T::one() / hbar))
}

/// `‖a − b‖ / max(‖a‖, ‖b‖)`, or the absolute difference when both are tiny.
pub fn relative_error<T: Real>(a: &ComplexMat4<T>, b: &ComplexMat4<T>) -> T {
    let scale = a.max_abs().max(b.max_abs());
    let diff = a.dist(b);
    if scale <= T::of(1e-12) {
        diff
    } else {
        diff / scale
    }
}

/// Star product at a point from exact derivatives, walking the `8^n` ordered
/// kernel sequences one factor at a time (branches are cut as soon as either
/// derivative vanishes). Shares no code with the merged-table engine.
pub fn enumerated_star<T: Real>(f: &Field<T>, g: &Field<T>, pt: &PhasePoint<T>, hbar: T, max_order: usize) -> ComplexMat4<T> {
    fn walk<T: Real>(
        df: &Field<T>,
        dg: &Field<T>,
        depth: usize,
        sign: T,
        pt: &PhasePoint<T>,
        acc: &mut [ComplexMat4<T>],
    ) {
        if df.is_zero() || dg.is_zero() {
            return;
        }
        acc[depth] += (df.evaluate(pt) * dg.evaluate(pt)).scale_real(sign);
        if depth + 1 == acc.len() {
            return;
        }
        for nu in 0..4u8 {
            let (x, p) = (Var::X(nu), Var::P(nu));
            walk(&df.differentiate(x), &dg.differentiate(p), depth + 1, sign, pt, acc);
            walk(&df.differentiate(p), &dg.differentiate(x), depth + 1, -sign, pt, acc);
        }
    }
    let mut acc = vec![ComplexMat4::zero(); max_order + 1];
    walk(f, g, 0, T::one(), pt, &mut acc);
    let mut out = ComplexMat4::zero();
    let mut pre: C<T> = Complex::new(T::one(), T::zero());
    for (n, term) in acc.into_iter().enumerate() {
        if n > 0 {
            pre = pre * Complex::new(T::zero(), hbar * T::of(0.5)) / Complex::new(T::of_usize(n), T::zero());
        }
        out += term.scale(pre);
    }
    out
}

/// Moyal bracket at a point from [`enumerated_star`].
pub fn enumerated_moyal<T: Real>(k: &Field<T>, w: &Field<T>, pt: &PhasePoint<T>, hbar: T, max_order: usize) -> ComplexMat4<T> {
    (enumerated_star(k, w, pt, hbar, max_order) - enumerated_star(w, k, pt, hbar, max_order))
        .scale(Complex::new(T::zero(), -T::one() / hbar))
}
