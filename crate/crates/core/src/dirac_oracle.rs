//! Exact Dirac/Weyl plane waves, `𝒲 = ψψ̄` fields and the checks around
//! `∂_ν{γ^ν, 𝒲}₊ = 0`.
//!
//! A spinor field is carried as the first column of a 4×4 [`Field`], so the
//! exact engine multiplies `ψ ψ̄` as an ordinary matrix product.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::brackets::claims::normalized_residual;
use crate::brackets::{BracketKind, ClaimReport, EXACT_TOL};
use crate::clifford::{eta, linalg, ComplexMat4, GammaSet};
use crate::error::{Error, Result};
use crate::hamiltonians::{k_free, PhysParams};
use crate::polyfield::{Field, Var};
use crate::scalar::{creal, Real, C};

/// Relative singular-value threshold for spinor null spaces.
pub const NULL_TOL: f64 = 1e-10;

/// Four complex components, normalized to `u†u = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor4<T: Real> {
    pub c: [C<T>; 4],
}

impl<T: Real> Spinor4<T> {
    pub fn norm_sqr(&self) -> T {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// The spinor as the first column of a matrix.
    pub fn as_column(&self) -> ComplexMat4<T> {
        ComplexMat4::from_fn(|i, j| if j == 0 { self.c[i] } else { creal(T::zero()) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `(γ^μ p_μ − mc)u = 0`.
    Positive,
    /// `(γ^μ p_μ + mc)u = 0`.
    Negative,
}

/// `ψ = u e^{−i k_ν x^ν}` with `p = ħk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveSolution<T: Real> {
    /// Covariant wavevector `k_ν`.
    pub k: [T; 4],
    pub u: Spinor4<T>,
    pub branch: Branch,
    pub mass: T,
}

impl<T: Real> PlaneWaveSolution<T> {
    /// `‖(ħγ^μk_μ ∓ mc)u‖` (just `‖γ^μk_μ u‖` when massless).
    pub fn residual(&self, set: &GammaSet<T>, params: &PhysParams<T>) -> T {
        let slash = set.slash(&self.k);
        let op = if self.mass == T::zero() {
            slash
        } else {
            let mc = ComplexMat4::identity().scale_real(self.mass * params.c);
            match self.branch {
                Branch::Positive => slash.scale_real(params.hbar) - mc,
                Branch::Negative => slash.scale_real(params.hbar) + mc,
            }
        };
        let v = op.mul_vec(&self.u.c);
        v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

fn gamma5<T: Real>(set: &GammaSet<T>) -> ComplexMat4<T> {
    (set.gamma[0] * set.gamma[1] * set.gamma[2] * set.gamma[3]).scale(Complex::new(T::zero(), T::one()))
}

/// Orthonormal spinors solving `(γ^μ p_μ ∓ mc)u = 0` for the given branch.
///
/// Massive: the two-dimensional null space. Massless (`m = 0`): the null
/// space of `γ^μ p_μ`, returned as one spinor per chirality (`γ^5 = +1`
/// first); the branch is irrelevant there.
pub fn solve_spinor<T: Real>(p: &[T; 4], branch: Branch, params: &PhysParams<T>, set: &GammaSet<T>) -> Result<Vec<Spinor4<T>>> {
    let mc = params.m * params.c;
    let pp = (0..4).fold(T::zero(), |a, mu| a + eta::<T>(mu) * p[mu] * p[mu]);
    let scale = (0..4).fold(mc * mc, |a, mu| a + p[mu] * p[mu]);
    if scale == T::zero() {
        return Err(Error::Domain("zero momentum".into()));
    }
    if (pp - mc * mc).abs() > T::of(1e-10) * scale {
        return Err(Error::Domain(format!("momentum off shell by {}", (pp - mc * mc).as_f64())));
    }
    let slash = set.slash(p);
    let to_spinors = |v: Vec<[C<T>; 4]>| v.into_iter().map(|c| Spinor4 { c }).collect::<Vec<_>>();
    if mc == T::zero() {
        let g5 = gamma5(set);
        let mut out = Vec::new();
        for chi in [T::one(), -T::one()] {
            let shift = g5 - ComplexMat4::identity().scale_real(chi);
            let m = slash.adjoint() * slash + shift.adjoint() * shift.scale_real(scale);
            out.extend(to_spinors(linalg::null_space(&m, T::of(NULL_TOL))));
        }
        return Ok(out);
    }
    let shift = ComplexMat4::identity().scale_real(mc);
    let op = match branch {
        Branch::Positive => slash - shift,
        Branch::Negative => slash + shift,
    };
    Ok(to_spinors(linalg::null_space(&op, T::of(NULL_TOL))))
}

/// `ψ(x) = Σ a_j u_j e^{−i k_j·x}` as the first column of a matrix field.
pub fn psi_field<T: Real>(terms: &[(PlaneWaveSolution<T>, C<T>)]) -> Field<T> {
    terms.iter().fold(Field::zero(), |acc, (s, a)| {
        acc.add(&Field::plane_wave(s.u.as_column().scale(*a), s.k.map(|v| -v)))
    })
}

/// `ψ̄ = ψ†γ^0` as the first row of a matrix field.
pub fn psibar_field<T: Real>(terms: &[(PlaneWaveSolution<T>, C<T>)], set: &GammaSet<T>) -> Field<T> {
    psi_field(terms).adjoint().right_mul(set.gamma0())
}

/// `𝒲 = ψψ̄`.
pub fn wbar_field<T: Real>(terms: &[(PlaneWaveSolution<T>, C<T>)], set: &GammaSet<T>) -> Result<Field<T>> {
    psi_field(terms).mul(&psibar_field(terms, set))
}

/// `γ^0 F† γ^0` on fields.
pub fn dirac_adjoint_field<T: Real>(f: &Field<T>, set: &GammaSet<T>) -> Field<T> {
    f.adjoint().left_mul(set.gamma0()).right_mul(set.gamma0())
}

/// `Σ_ν ∂_{x^ν}(γ^ν W + W γ^ν)`.
pub fn anticomm_residual<T: Real>(w: &Field<T>, set: &GammaSet<T>) -> Field<T> {
    (0..4).fold(Field::zero(), |acc, nu| {
        let g = &set.gamma[nu];
        acc.add(&w.left_mul(g).add(&w.right_mul(g)).differentiate(Var::X(nu as u8)))
    })
}

/// Random massless plane waves with unit-scale wavevectors and amplitudes.
pub fn random_massless_state<T: Real>(seed: u64, waves: usize, set: &GammaSet<T>, hbar: T) -> Result<Vec<(PlaneWaveSolution<T>, C<T>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = PhysParams {
        m: T::zero(),
        hbar,
        ..PhysParams::default()
    };
    let mut out = Vec::with_capacity(waves);
    for _ in 0..waves {
        let k3: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let kn = k3.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        let k = [T::of(kn), T::of(k3[0]), T::of(k3[1]), T::of(k3[2])];
        let p = k.map(|v| v * hbar);
        let basis = solve_spinor(&p, Branch::Positive, &params, set)?;
        let u = basis[rng.gen_range(0..basis.len())];
        let a = Complex::new(T::of(rng.gen_range(-1.0..1.0)), T::of(rng.gen_range(-1.0..1.0)));
        out.push((
            PlaneWaveSolution {
                k,
                u,
                branch: Branch::Positive,
                mass: T::zero(),
            },
            a,
        ));
    }
    Ok(out)
}

/// Random positive-branch massive plane waves.
pub fn random_massive_state<T: Real>(
    seed: u64,
    waves: usize,
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<Vec<(PlaneWaveSolution<T>, C<T>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(waves);
    for _ in 0..waves {
        let p3 = std::array::from_fn(|_| T::of(rng.gen_range(-1.0..1.0)));
        let p = crate::hamiltonians::on_shell(p3, params);
        let basis = solve_spinor(&p, Branch::Positive, params, set)?;
        let u = basis[rng.gen_range(0..basis.len())];
        let a = Complex::new(T::of(rng.gen_range(-1.0..1.0)), T::of(rng.gen_range(-1.0..1.0)));
        out.push((
            PlaneWaveSolution {
                k: p.map(|v| v / params.hbar),
                u,
                branch: Branch::Positive,
                mass: params.m,
            },
            a,
        ));
    }
    Ok(out)
}

fn state_label<T: Real>(terms: &[(PlaneWaveSolution<T>, C<T>)]) -> String {
    let ks: Vec<String> = terms
        .iter()
        .map(|(s, _)| format!("[{:.6},{:.6},{:.6},{:.6}]", s.k[0].as_f64(), s.k[1].as_f64(), s.k[2].as_f64(), s.k[3].as_f64()))
        .collect();
    format!("k={}", ks.join(";"))
}

/// The Hermiticity lemma chain, item by item.
///
/// (i) `γ^0γ^νγ^0 = η^{νν}γ^ν`, (ii) Dirac Hermiticity of `{γ^ν, 𝒲}₊` and
/// (iii) of `A + B` are asserted; (iv) `A_ν† = η^{νν}B_ν` per ν and (v)
/// `Σ_i (A_i + B_i) = 0` are recorded. Massive input is rejected.
pub fn hermiticity_lemma_checks<T: Real>(terms: &[(PlaneWaveSolution<T>, C<T>)], set: &GammaSet<T>) -> Result<Vec<ClaimReport>> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("empty superposition".into()));
    }
    if terms.iter().any(|(s, _)| s.mass != T::zero()) {
        return Err(Error::Domain("the lemma chain assumes massless (Weyl) solutions".into()));
    }
    let kind = format!("{}", set.rep);
    let inputs = state_label(terms);
    let psi = psi_field(terms);
    let psibar = psibar_field(terms, set);
    let w = psi.mul(&psibar)?;
    let mut out = Vec::new();
    let mk = |r: ClaimReport| r.with_inputs(inputs.clone());

    for nu in 0..4 {
        let lhs = set.gamma[0] * set.gamma[nu] * set.gamma[0];
        let rhs = set.gamma[nu].scale_real(eta::<T>(nu));
        out.push(mk(ClaimReport::asserted(
            format!("lemma_i_gamma0_conjugation[{nu}]"),
            kind.clone(),
            lhs.dist(&rhs).as_f64(),
            EXACT_TOL,
        )));
    }
    for nu in 0..4 {
        let g = &set.gamma[nu];
        let anti = w.left_mul(g).add(&w.right_mul(g));
        out.push(mk(ClaimReport::asserted(
            format!("lemma_ii_anticommutator_dirac_hermitian[{nu}]"),
            kind.clone(),
            normalized_residual(&dirac_adjoint_field(&anti, set), &anti),
            EXACT_TOL,
        )));
    }

    let mut a_sum = Field::zero();
    let mut b_sum = Field::zero();
    let mut spatial = Field::zero();
    let mut per_nu = Vec::new();
    for nu in 0..4 {
        let v = Var::X(nu as u8);
        let a = psi.mul(&psibar.differentiate(v))?.left_mul(&set.gamma[nu]);
        let b = psi.differentiate(v).mul(&psibar)?.right_mul(&set.gamma[nu]);
        if nu > 0 {
            spatial = spatial.add(&a).add(&b);
        }
        a_sum = a_sum.add(&a);
        b_sum = b_sum.add(&b);
        per_nu.push((a, b));
    }
    let ab = a_sum.add(&b_sum);
    out.push(mk(ClaimReport::asserted(
        "lemma_iii_a_plus_b_dirac_hermitian",
        kind.clone(),
        normalized_residual(&dirac_adjoint_field(&ab, set), &ab),
        EXACT_TOL,
    )));
    for (nu, (a, b)) in per_nu.iter().enumerate() {
        let s = a.add(b);
        out.push(mk(ClaimReport::asserted(
            format!("lemma_iii_a_plus_b_dirac_hermitian[{nu}]"),
            kind.clone(),
            normalized_residual(&dirac_adjoint_field(&s, set), &s),
            EXACT_TOL,
        )));
    }
    for (nu, (a, b)) in per_nu.iter().enumerate() {
        out.push(mk(ClaimReport::recorded(
            format!("lemma_iv_adjoint_a_equals_eta_b[{nu}]"),
            kind.clone(),
            normalized_residual(&a.adjoint(), &b.scale_real(eta::<T>(nu))),
            EXACT_TOL,
        )));
    }
    out.push(mk(ClaimReport::recorded(
        "lemma_v_spatial_parts_vanish",
        kind.clone(),
        normalized_residual(&spatial, &Field::zero()),
        EXACT_TOL,
    )));
    // the quantity the chain is meant to establish
    let total = anticomm_residual(&w, set);
    out.push(mk(ClaimReport::recorded(
        "anticomm_divergence_vanishes",
        kind,
        normalized_residual(&total, &Field::zero()),
        EXACT_TOL,
    )));
    Ok(out)
}

/// Free-particle brackets of a massive superposition `𝒲`, recorded per bracket.
pub fn massive_bracket_verdicts<T: Real>(
    terms: &[(PlaneWaveSolution<T>, C<T>)],
    params: &PhysParams<T>,
    set: &GammaSet<T>,
) -> Result<Vec<ClaimReport>> {
    let w = wbar_field(terms, set)?;
    let k = k_free(params, set);
    let inputs = state_label(terms);
    let mut out = Vec::new();
    for kind in [BracketKind::Poisson, BracketKind::Extended, BracketKind::moyal(params.hbar.as_f64())] {
        let b = kind.apply(&k, &w)?;
        out.push(
            ClaimReport::recorded("massive_superposition_bracket_vanishes", kind.name(), normalized_residual(&b, &Field::zero()), EXACT_TOL)
                .with_inputs(inputs.clone()),
        );
    }
    Ok(out)
}

/// CSV of a field's coefficient magnitudes, one row per (wavevector, monomial).
pub fn coefficient_table<T: Real>(f: &Field<T>) -> String {
    let mut s = String::from("k0,k1,k2,k3,exponents,max_abs\n");
    for (k, m, c) in f.coefficients() {
        let exps: Vec<String> = m.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!(
            "{},{},{},{},{},{:e}\n",
            k[0].as_f64(),
            k[1].as_f64(),
            k[2].as_f64(),
            k[3].as_f64(),
            exps.join(" "),
            c.max_abs().as_f64()
        ));
    }
    s
}
