//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use matrix_liouville::brackets::claims::normalized_residual;
use matrix_liouville::brackets::fd::{fd_extended, fd_poisson, relative_error, FD_STEP};
use matrix_liouville::brackets::{
    axiom_suite, extended_bracket, leading_expansion_check, moyal_bracket, poisson_bracket, star_product,
    BracketKind, Verdict,
};
use matrix_liouville::clifford::{
    anticommutator, boost_generator, commutator, rotation_generator, GammaRep, GammaSet,
};
use matrix_liouville::dirac_oracle::{anticomm_residual, hermiticity_lemma_checks, random_massless_state, wbar_field};
use matrix_liouville::dynamics::{
    covariance_check, covariance_transform, evolve_em, evolve_free, evolve_landau_moyal, free_mode_solution,
    free_propagator, residual_free_field, LandauOptions,
};
use matrix_liouville::hamiltonians::{on_shell, GaugePotential, PhysParams};
use matrix_liouville::polyfield::{
    random_field, random_matrix, random_point, sample_to_grid, Axis, Field, GridField, GridSpec, PhasePoint, Var,
};
use matrix_liouville::stargen::{moyal_zero_bracket_check, projector_case, stargen_residual};
use matrix_liouville::{Complex64, Mat4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type F = Field<f64>;
type P = PhysParams<f64>;

/// Collected sub-checks of one criterion.
#[derive(Default)]
struct Check {
    ok: bool,
    parts: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            ok: true,
            parts: Vec::new(),
        }
    }

    fn le(&mut self, label: &str, value: f64, tol: f64) {
        let pass = value <= tol;
        self.ok &= pass;
        let mark = if pass { "" } else { " FAILED" };
        self.parts.push(format!("{label}={value:.2e}<={tol:.0e}{mark}"));
    }

    fn that(&mut self, label: &str, pass: bool, detail: impl std::fmt::Display) {
        self.ok &= pass;
        let mark = if pass { "" } else { " FAILED" };
        self.parts.push(format!("{label}: {detail}{mark}"));
    }

    fn info(&mut self, label: &str, detail: impl std::fmt::Display) {
        self.parts.push(format!("{label}: {detail}"));
    }
}

fn reps() -> [GammaSet<f64>; 2] {
    [GammaSet::new(GammaRep::Dirac), GammaSet::new(GammaRep::Chiral)]
}

fn rm(seed: u64) -> Mat4 {
    random_matrix(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn scalar_poly(seed: u64, degree: u32) -> F {
    random_field::<f64>(seed, degree, 0).map_coeffs(|m| Mat4::identity().scale(m[(0, 0)]))
}

// ---------------------------------------------------------------- 1

fn clifford_suite() -> Check {
    let mut c = Check::new();
    for set in reps() {
        let checks = set.check_invariants();
        let worst = checks.iter().map(|i| i.residual).fold(0.0, f64::max);
        c.le(&format!("{} ({} identities)", set.rep, checks.len()), worst, 1e-14);
        // the α relations written out independently of the library's list
        let mut alpha = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { Mat4::identity().scale_real(2.0) } else { Mat4::zero() };
                alpha = alpha.max(anticommutator(&set.alpha[i], &set.alpha[j]).dist(&expect));
            }
            alpha = alpha.max(anticommutator(&set.alpha[i], &set.gamma[0]).max_abs());
            alpha = alpha.max(set.alpha[i].dist(&set.alpha[i].adjoint()));
        }
        c.le(&format!("{} alpha", set.rep), alpha, 1e-14);
    }
    c
}

// ---------------------------------------------------------------- 2

fn bracket_oracles() -> Check {
    let mut c = Check::new();
    let (mut wp, mut we) = (0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let a: F = random_field(1000 + 2 * seed, 2, 1);
        let b: F = random_field(1001 + 2 * seed, 2, 1);
        let pb = poisson_bracket(&a, &b).unwrap();
        let eb = extended_bracket(&a, &b).unwrap();
        for j in 0..5 {
            let pt = random_point::<f64>(seed * 10 + j, 1.0);
            wp = wp.max(relative_error(&pb.evaluate(&pt), &fd_poisson(&a, &b, &pt, FD_STEP)));
            we = we.max(relative_error(&eb.evaluate(&pt), &fd_extended(&a, &b, &pt, FD_STEP)));
        }
    }
    c.le("poisson vs FD (50 fields x 5 points)", wp, 1e-6);
    c.le("extended vs FD", we, 1e-6);
    c
}

// ---------------------------------------------------------------- 3

/// `c γ^μ p_μ − mc²`, built from the gammas directly.
fn k_display(set: &GammaSet<f64>, p: &P) -> F {
    (0..4).fold(F::constant(Mat4::identity().scale_real(-p.m * p.c * p.c)), |acc, mu| {
        acc.add(&F::var(Var::P(mu as u8), set.gamma[mu].scale_real(p.c)))
    })
}

fn star_fidelity() -> Check {
    let mut c = Check::new();
    let p = P {
        m: 0.9,
        q: 1.0,
        c: 1.3,
        hbar: 0.4,
    };
    let half_i = Complex64::new(0.0, p.hbar / 2.0);
    let (mut left, mut right, mut moyal, mut kcal, mut lead) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut exact = true;
    for set in reps() {
        let k = k_display(&set, &p);
        let kc = k.left_mul(set.gamma0());
        for seed in 0..20u64 {
            let w: F = random_field(500 + seed, 2, 1);
            let grad = |pre: &dyn Fn(usize) -> Mat4, on_left: bool| {
                (0..4u8).fold(F::zero(), |acc, nu| {
                    let g = pre(nu as usize).scale_real(p.c);
                    let d = w.differentiate(Var::X(nu));
                    acc.add(&if on_left { d.left_mul(&g) } else { d.right_mul(&g) })
                })
            };
            let gam = |nu: usize| set.gamma[nu];
            let g0gam = |nu: usize| set.gamma[0] * set.gamma[nu];

            let kw = star_product(&k, &w, p.hbar, 16).unwrap();
            let wk = star_product(&w, &k, p.hbar, 16).unwrap();
            exact &= kw.exact && wk.exact;
            left = left.max(normalized_residual(&kw.field, &k.mul(&w).unwrap().sub(&grad(&gam, true).scale(half_i))));
            right = right.max(normalized_residual(&wk.field, &w.mul(&k).unwrap().add(&grad(&gam, false).scale(half_i))));

            let kcw = star_product(&kc, &w, p.hbar, 16).unwrap().field;
            let wkc = star_product(&w, &kc, p.hbar, 16).unwrap().field;
            let d1 = normalized_residual(&kcw, &kc.mul(&w).unwrap().sub(&grad(&g0gam, true).scale(half_i)));
            let d2 = normalized_residual(&wkc, &w.mul(&kc).unwrap().add(&grad(&g0gam, false).scale(half_i)));
            kcal = kcal.max(d1).max(d2);

            // (c/iħ) p_μ[γ^μ, W] − (c/2) ∂_μ{γ^μ, W}
            let mut disp = F::zero();
            for mu in 0..4u8 {
                let g = set.gamma[mu as usize];
                let pm = F::var(Var::P(mu), Mat4::identity());
                disp = disp.add(&pm.mul(&w.map_coeffs(|m| commutator(&g, m))).unwrap().scale(Complex64::new(0.0, -p.c / p.hbar)));
                disp = disp.sub(&w.map_coeffs(|m| anticommutator(&g, m)).differentiate(Var::X(mu)).scale_real(p.c / 2.0));
            }
            moyal = moyal.max(normalized_residual(&moyal_bracket(&k, &w, p.hbar, 16).unwrap().field, &disp));
            lead = lead.max(leading_expansion_check(&k, &w, p.hbar).unwrap().residual);
            let w2: F = random_field(900 + seed, 2, 1);
            lead = lead.max(leading_expansion_check(&w2, &w, p.hbar).unwrap().residual);
        }
    }
    c.that("series terminated", exact, exact);
    c.le("K*W display (20 W x 2 reps)", left, 1e-12);
    c.le("W*K display", right, 1e-12);
    c.le("free Moyal display", moyal, 1e-12);
    c.le("Kcal displays", kcal, 1e-12);
    c.le("leading_expansion", lead, 1e-12);
    c
}

// ---------------------------------------------------------------- 4

fn classical_limit() -> Check {
    let mut c = Check::new();
    let (mut swapped, mut written) = (0.0f64, 0.0f64);
    for seed in 0..20u64 {
        let a = scalar_poly(2000 + seed, 3);
        let b = scalar_poly(3000 + seed, 3);
        let m = moyal_bracket(&a, &b, 0.7, 32).unwrap();
        c.ok &= m.exact;
        swapped = swapped.max(normalized_residual(&m.field, &poisson_bracket(&b, &a).unwrap()));
        written = written.max(normalized_residual(&m.field, &poisson_bracket(&a, &b).unwrap()));
    }
    c.le("moyal(K,W) vs poisson(W,K)", swapped, 1e-12);
    c.info("moyal(K,W) vs poisson(K,W) as printed", format!("{written:.2e} (kernel sign convention)"));

    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let f = scalar_poly(4000 + seed, 2);
        let g = scalar_poly(5000 + seed, 2);
        let fg = f.mul(&g).unwrap();
        let ratios: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&h| star_product(&f, &g, h, 16).unwrap().field.sub(&fg).norm() / h)
            .collect();
        let r0 = ratios[2];
        for r in &ratios {
            worst = worst.max((r / r0 - 1.0).abs());
        }
    }
    c.le("|F*G - FG|/hbar spread over hbar in {1e-1,1e-2,1e-3}", worst, 0.05);
    c
}

// ---------------------------------------------------------------- 5

fn x_spec(n: usize, base: PhasePoint<f64>) -> GridSpec<f64> {
    GridSpec::new(vec![Axis::periodic(Var::X(1), 0.0, 2.0 * std::f64::consts::PI, n)], base).unwrap()
}

fn free_evolution() -> Check {
    let mut c = Check::new();
    let p = P {
        c: 1.5,
        ..P::default()
    };
    for set in reps() {
        let m = rm(7);
        let w0 = sample_to_grid(&F::plane_wave(m, [0.0, 1.0, 0.0, 0.0]), &x_spec(32, PhasePoint::origin()));
        let r = evolve_free(&w0, 10.0, 10, &p, &set).unwrap();
        c.le(&format!("{} residual_free T=10", set.rep), r.residual.iter().copied().fold(0.0, f64::max), 1e-8);
        let exact = free_mode_solution([1.0, 0.0, 0.0], &m, &set);
        let at = x_spec(32, PhasePoint::origin().with(Var::X(0), p.c * 10.0));
        c.le(&format!("{} final state vs exact mode", set.rep), r.final_state.dist(&sample_to_grid(&exact, &at)), 1e-10);
    }

    let set = GammaSet::new(GammaRep::Dirac);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let (mut unit, mut semi) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let k: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let (t1, t2) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let u = free_propagator(k, t1, &p, &set);
        unit = unit.max((u * u.adjoint()).dist(&Mat4::identity()));
        semi = semi.max((u * free_propagator(k, t2, &p, &set)).dist(&free_propagator(k, t1 + t2, &p, &set)));
    }
    c.le("propagator unitarity", unit, 1e-10);
    c.le("propagator semigroup", semi, 1e-10);

    // RK4 transport at A = 0 against the exact mode
    let p1 = P::default();
    let m = rm(9);
    let exact = free_mode_solution([2.0, 0.0, 0.0], &m, &set);
    let w0 = sample_to_grid(&exact, &x_spec(16, PhasePoint::origin()));
    let at = x_spec(16, PhasePoint::origin().with(Var::X(0), 1.0));
    let target = sample_to_grid(&exact, &at);
    let errs: Vec<f64> = [0.1f64, 0.05, 0.025]
        .iter()
        .map(|&dt| {
            let steps = (1.0 / dt).round() as usize;
            let r = evolve_em(&w0, matrix_liouville::hamiltonians::HamiltonianForm::Gamma, &GaugePotential::zero(), &p1, &set, dt, steps).unwrap();
            r.final_state.dist(&target)
        })
        .collect();
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let min_ratio = ratios[0].min(ratios[1]);
    c.that(
        "RK4 error ratio per halving",
        min_ratio >= 14.0,
        format!("errors {:.2e},{:.2e},{:.2e} ratios {:.1},{:.1} (>=14)", errs[0], errs[1], errs[2], ratios[0], ratios[1]),
    );
    c
}

// ---------------------------------------------------------------- 6

/// Smooth data whose matrix part is Dirac-Hermitian, or Hermitian when `hermitian`.
fn landau_run(b: f64, hermitian: bool) -> matrix_liouville::dynamics::EvolutionReport<f64> {
    let set = GammaSet::new(GammaRep::Dirac);
    let tau = 2.0 * std::f64::consts::PI;
    let spec = GridSpec::new(
        vec![Axis::periodic(Var::X(1), 0.0, tau, 64), Axis::periodic(Var::P(2), -std::f64::consts::PI, tau, 64)],
        PhasePoint::origin(),
    )
    .unwrap();
    let m0 = rm(11);
    let m = if hermitian {
        (m0 + m0.adjoint()).scale_real(0.5)
    } else {
        (m0 + set.dirac_adjoint(&m0)).scale_real(0.5)
    };
    let w0 = GridField::from_fn(spec, |pt| {
        let x = pt.x[1];
        Mat4::identity().scale_real(1.0 + 0.5 * x.cos()) + m.scale_real(0.2 * (x + pt.p[2]).sin())
    });
    evolve_landau_moyal(&w0, b, &P::default(), &set, 0.005, 100, &LandauOptions::default()).unwrap()
}

fn hermitian_deviation(w: &GridField<f64>) -> f64 {
    w.samples.iter().map(|m| m.dist(&m.adjoint())).fold(0.0, f64::max)
}

fn landau_moyal() -> Check {
    let mut c = Check::new();
    let r = landau_run(1.0, false);
    c.le("total trace drift (64x64, 100 RK4 steps)", r.trace_drift(), 1e-6);
    let initial = r.dirac_hermiticity[0];
    c.info("initial Dirac deviation", format!("{initial:.2e}"));
    c.le("Dirac-Hermiticity deviation", r.max_dirac_deviation(), 1e-8);
    let h = landau_run(1.0, true);
    c.info(
        "Hermitian start: final ordinary-Hermiticity deviation",
        format!("{:.2e}", hermitian_deviation(&h.final_state)),
    );
    let with_b = r.discrepancies.len();
    let r0 = landau_run(0.0, false);
    c.that(
        "diff report nonempty iff B != 0",
        with_b > 0 && r0.discrepancies.is_empty(),
        format!("B=1: {with_b} discrepant steps, B=0: {}", r0.discrepancies.len()),
    );
    c
}

// ---------------------------------------------------------------- 7

/// Characteristic polynomial coefficients `[c0, c1, c2, c3]` of a monic quartic
/// (Faddeev–LeVerrier).
fn char_poly(a: &Mat4) -> [Complex64; 4] {
    let mut coeffs = [Complex64::new(0.0, 0.0); 5];
    coeffs[4] = Complex64::new(1.0, 0.0);
    let mut mk = Mat4::zero();
    for k in 1..=4usize {
        mk = *a * mk + Mat4::identity().scale(coeffs[4 - k + 1]);
        coeffs[4 - k] = -(*a * mk).trace() / k as f64;
    }
    [coeffs[0], coeffs[1], coeffs[2], coeffs[3]]
}

/// Roots of the monic quartic by Durand–Kerner iteration.
fn quartic_roots(c: [Complex64; 4]) -> [Complex64; 4] {
    let poly = |z: Complex64| (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
    let seed = Complex64::new(0.4, 0.9);
    let mut r: [Complex64; 4] = std::array::from_fn(|i| seed.powu(i as u32));
    for _ in 0..2000 {
        for i in 0..4 {
            let denom = (0..4).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (r[i] - r[j]));
            r[i] -= poly(r[i]) / denom;
        }
    }
    r
}

fn stargen_projectors() -> Check {
    let mut c = Check::new();
    let p = P {
        m: 0.8,
        c: 1.2,
        hbar: 0.6,
        ..P::default()
    };
    let mc = p.m * p.c;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut eig, mut pos, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    let mut implication = true;
    for set in reps() {
        for _ in 0..5 {
            let mom = on_shell(std::array::from_fn(|_| rng.gen_range(-1.5..1.5)), &p);
            let slash = set.slash(&mom);
            let roots = quartic_roots(char_poly(&slash));
            let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
            re.sort_by(f64::total_cmp);
            let expect = [-mc, -mc, mc, mc];
            for (r, e) in re.iter().zip(expect) {
                eig = eig.max((r - e).abs());
            }
            for z in roots {
                eig = eig.max(z.im.abs());
            }
            // K = c γ·p − mc² then has eigenvalues c(±mc) − mc² = 0, −2mc²
            let plus = projector_case(&mom, true, &p, &set).unwrap();
            let minus = projector_case(&mom, false, &p, &set).unwrap();
            let (e_plus, e_minus) = (p.c * mc - p.m * p.c * p.c, -p.c * mc - p.m * p.c * p.c);
            c.ok &= plus.epsilon == 0.0 && (e_plus).abs() < 1e-15;
            c.ok &= (minus.epsilon - e_minus).abs() < 1e-12;
            pos = pos.max(stargen_residual(&plus, p.hbar, 16).unwrap().total());
            neg = neg.max(stargen_residual(&minus, p.hbar, 16).unwrap().total());
            for case in [&plus, &minus] {
                let r = moyal_zero_bracket_check(&case.hamiltonian, &case.w, case.epsilon, p.hbar, 1e-12, &case.points).unwrap();
                implication &= r.verdict == Verdict::Holds;
            }
        }
    }
    c.le("eigenvalues of gamma.p vs {+-mc} (Faddeev-LeVerrier + Durand-Kerner)", eig, 1e-6);
    c.le("positive projector, eps = 0", pos, 1e-12);
    c.le("negative projector, eps = -2mc^2", neg, 1e-12);
    c.that("moyal_zero_bracket implication", implication, implication);
    c
}

// ---------------------------------------------------------------- 8

fn dirac_oracle(persisted: &Path) -> Check {
    let mut c = Check::new();
    for set in reps() {
        let mut worst = 0.0f64;
        for seed in 0..100u64 {
            let terms = random_massless_state(seed, 1, &set, 1.0).unwrap();
            let w = wbar_field(&terms, &set).unwrap();
            worst = worst.max(normalized_residual(&anticomm_residual(&w, &set), &F::zero()));
        }
        c.le(&format!("{} single-wave residual (100 states)", set.rep), worst, 1e-12);
        let (mut asserted_ok, mut recorded) = (true, 0usize);
        for seed in 0..5u64 {
            let terms = random_massless_state(700 + seed, 2, &set, 1.0).unwrap();
            for r in hermiticity_lemma_checks(&terms, &set).unwrap() {
                if r.claim.starts_with("lemma_i_") || r.claim.starts_with("lemma_ii_") || r.claim.starts_with("lemma_iii_") {
                    asserted_ok &= r.verdict == Verdict::Holds;
                } else {
                    recorded += usize::from(r.verdict == Verdict::Recorded);
                }
            }
        }
        c.that(&format!("{} lemma (i)-(iii) asserted", set.rep), asserted_ok, asserted_ok);
        c.that(&format!("{} lemma (iv)-(v) recorded", set.rep), recorded > 0, recorded);
    }
    let stream = std::fs::read_to_string(persisted.join("oracle.jsonl")).unwrap_or_default();
    let persisted_iv = stream.lines().filter(|l| l.contains("lemma_iv") && l.contains("\"recorded\"")).count();
    let persisted_v = stream.lines().filter(|l| l.contains("lemma_v_") && l.contains("\"recorded\"")).count();
    c.that("verdicts persisted by `mliou oracle`", persisted_iv > 0 && persisted_v > 0, format!("{persisted_iv} (iv), {persisted_v} (v)"));
    c
}

// ---------------------------------------------------------------- 9

fn claims_ledger(persisted: &Path) -> Check {
    let mut c = Check::new();
    let seeds: Vec<u64> = (0..20).collect();
    let mut leibniz_max = 0.0f64;
    for kind in [BracketKind::Poisson, BracketKind::Extended, BracketKind::moyal(0.7)] {
        let reps = axiom_suite::<f64>(&kind, &seeds, 2).unwrap();
        let exact_ok = reps
            .iter()
            .filter(|r| r.claim == "antisymmetry" || r.claim == "bilinearity")
            .all(|r| r.verdict == Verdict::Holds);
        c.that(&format!("{} antisymmetry+bilinearity", kind.name()), exact_ok, exact_ok);
        for name in ["jacobi", "leibniz_second_slot", "leibniz_first_slot", "trace_derivation"] {
            let n = reps.iter().filter(|r| r.claim == name && r.verdict == Verdict::Recorded).count();
            c.ok &= n >= 20;
        }
        leibniz_max = reps
            .iter()
            .filter(|r| r.claim.starts_with("leibniz"))
            .map(|r| r.residual)
            .fold(leibniz_max, f64::max);
    }
    c.that("recorded claims on >= 20 triples", c.ok, "jacobi, leibniz x2, trace");
    c.that("nonzero Leibniz residual exhibited", leibniz_max > 1e-6, format!("max {leibniz_max:.2e}"));
    let stream = std::fs::read_to_string(persisted.join("bracket_claims.jsonl")).unwrap_or_default();
    let n = stream.lines().filter(|l| l.contains("\"recorded\"")).count();
    c.that("verdicts persisted by `mliou bracket-claims`", n >= 20 * 4 * 3, format!("{n} recorded lines"));
    c
}

// ---------------------------------------------------------------- 10

fn covariance() -> Check {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for set in reps() {
        let mut worst = 0.0f64;
        let mut moved = 0.0f64;
        for i in 0..10u64 {
            let mut omega = boost_generator::<f64>(rng.gen_range(1..=3), rng.gen_range(-0.8..0.8));
            let rot = rotation_generator::<f64>(rng.gen_range(1..=3), rng.gen_range(-3.0..3.0));
            for a in 0..4 {
                for b in 0..4 {
                    omega[a][b] += rot[a][b];
                }
            }
            let k: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
            let k2: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
            let w = free_mode_solution(k, &rm(300 + i), &set).add(&free_mode_solution(k2, &rm(400 + i), &set));
            let r = covariance_check(&omega, &w, &set).unwrap();
            worst = worst.max(r.residual);
            c.ok &= r.verdict == Verdict::Holds;
            let wt = covariance_transform(&omega, &w, &set).unwrap();
            worst = worst.max(residual_free_field(&wt, &set));
            moved = moved.max(wt.dist(&w));
        }
        c.le(&format!("{} residual_free after 10 transforms", set.rep), worst, 1e-8);
        c.that(&format!("{} transforms act non-trivially", set.rep), moved > 1e-3, format!("{moved:.2e}"));
    }
    c
}

// ---------------------------------------------------------------- 11

fn mliou(args: &[&str], dir: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mliou"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("mliou runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a).map_err(|e| e.to_string())?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let other = std::fs::read_dir(b).map_err(|e| e.to_string())?.count();
    if other != names.len() {
        return Err(format!("{} vs {other} files", names.len()));
    }
    for n in &names {
        let (x, y) = (std::fs::read(a.join(n)), std::fs::read(b.join(n)));
        if x.map_err(|e| e.to_string())? != y.map_err(|e| e.to_string())? {
            return Err(format!("{} differs", n.to_string_lossy()));
        }
    }
    Ok(names.len())
}

fn reproducibility(tmp: &Path) -> Check {
    let mut c = Check::new();
    let cfg = tmp.join("run.toml");
    std::fs::write(&cfg, mliou_cli::TEMPLATE).unwrap();
    let cfg_s = cfg.to_str().unwrap();
    for cmd in ["algebra-report", "bracket-claims", "oracle", "stargen", "evolve"] {
        let (a, b) = (tmp.join(format!("{cmd}-a")), tmp.join(format!("{cmd}-b")));
        let (ca, _) = mliou(&["--config", cfg_s, "--seed", "5", cmd], &a);
        let (cb, _) = mliou(&["--config", cfg_s, "--seed", "5", cmd], &b);
        match same_tree(&a, &b) {
            Ok(n) => c.that(cmd, ca == 0 && cb == 0, format!("exit {ca}/{cb}, {n} files byte-identical")),
            Err(e) => c.that(cmd, false, e),
        }
    }

    // corrupted custom gamma table: γ^1 replaced by the identity
    let base = GammaSet::<f64>::new(GammaRep::Dirac);
    let part = |im: bool| -> [[[f64; 4]; 4]; 4] {
        std::array::from_fn(|mu| {
            std::array::from_fn(|i| std::array::from_fn(|j| {
                let z = base.gamma[mu][(i, j)];
                if im { z.im } else { z.re }
            }))
        })
    };
    let (mut g, mut im) = (part(false), part(true));
    g[1] = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
    im[1] = [[0.0; 4]; 4];
    let bad = tmp.join("bad_gamma.toml");
    std::fs::write(
        &bad,
        format!("[[algebra.custom]]\nname = \"corrupted\"\nre = {g:?}\nim = {im:?}\n"),
    )
    .unwrap();
    let (code, err) = mliou(&["--config", bad.to_str().unwrap(), "algebra-report"], &tmp.join("bad-gamma"));
    c.that("corrupted gamma table", code == 1 && err.contains("FAILED claim clifford["), format!("exit {code}, names clifford claim"));

    let forced = tmp.join("leibniz.toml");
    std::fs::write(&forced, "[brackets]\nassert_claims = [\"leibniz_second_slot\"]\n").unwrap();
    let (code, err) = mliou(&["--config", forced.to_str().unwrap(), "bracket-claims"], &tmp.join("leibniz"));
    c.that(
        "forced Leibniz assertion",
        code == 1 && err.contains("FAILED claim leibniz_second_slot"),
        format!("exit {code}, names leibniz_second_slot"),
    );

    let huge = tmp.join("huge.toml");
    std::fs::write(
        &huge,
        "[[evolve.grid.axes]]\nvar = \"x1\"\nmin = 0.0\nextent = 1.0\nn = 4096\n[[evolve.grid.axes]]\nvar = \"x2\"\nmin = 0.0\nextent = 1.0\nn = 4096\n",
    )
    .unwrap();
    let (code, _) = mliou(&["--config", huge.to_str().unwrap(), "evolve"], &tmp.join("huge"));
    let no_manifest = !tmp.join("huge").join("manifest.json").exists();
    c.that("grid overflow", code == 3 && no_manifest, format!("exit {code}, no manifest"));
    c
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    // persisted streams for criteria 8 and 9
    let persisted = tmp.path().join("persisted");
    for cmd in ["oracle", "bracket-claims"] {
        let (code, err) = mliou(&[cmd], &persisted);
        if code != 0 {
            eprintln!("mliou {cmd} exited {code}: {err}");
        }
    }

    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Check>)> = vec![
        (1, "clifford suite", Box::new(clifford_suite)),
        (2, "bracket oracle equivalence", Box::new(bracket_oracles)),
        (3, "star-product fidelity", Box::new(star_fidelity)),
        (4, "classical limit", Box::new(classical_limit)),
        (5, "free evolution", Box::new(free_evolution)),
        (6, "landau-gauge moyal evolution", Box::new(landau_moyal)),
        (7, "stargen projectors", Box::new(stargen_projectors)),
        (8, "dirac oracle", Box::new(|| dirac_oracle(&persisted))),
        (9, "claims ledger", Box::new(|| claims_ledger(&persisted))),
        (10, "covariance", Box::new(covariance)),
        (11, "reproducibility", Box::new(|| reproducibility(tmp.path()))),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in &criteria {
        let started = Instant::now();
        let check = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)) {
            Ok(c) => c,
            Err(_) => Check {
                ok: false,
                parts: vec!["panicked".into()],
            },
        };
        let verdict = if check.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {verdict} {name} ({:.1}s): {}",
            started.elapsed().as_secs_f64(),
            check.parts.join("; ")
        );
        if !check.ok {
            failed.push(*id);
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
