//! The batch commands. Each one writes a claim stream plus its artifacts,
//! names failing asserted claims on stderr and writes the manifest last.

use std::path::PathBuf;

use matrix_liouville::brackets::claims::{commuting_limit_residuals, normalized_residual};
use matrix_liouville::brackets::{axiom_suite, leading_expansion_check, BracketKind, ClaimReport, Verdict};
use matrix_liouville::clifford::{boost_generator, rotation_generator, spin_transform, ComplexMat4, GammaRep, GammaSet};
use matrix_liouville::dirac_oracle::{
    anticomm_residual, coefficient_table, hermiticity_lemma_checks, massive_bracket_verdicts, random_massive_state,
    random_massless_state, wbar_field,
};
use matrix_liouville::dynamics::{
    evolve_anticomm, evolve_em, evolve_free, evolve_landau_moyal, AnticommOptions, EvolutionReport, LandauOptions,
    Stepper,
};
use matrix_liouville::hamiltonians::{on_shell, GaugePotential, GaugeSpec, HamiltonianForm};
use matrix_liouville::polyfield::{random_field, random_matrix, write_grid_binary, Field, GridField, PhasePoint};
use matrix_liouville::stargen::{landau_stargen_residual, moyal_zero_bracket_check, projector_case, stargen_residual};
use matrix_liouville::{Complex64, Mat4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{InitialConfig, MatrixChoice, RunConfig};
use crate::output::Output;
use crate::{svg, CliError, Command, EXIT_CLAIM_FAILED, EXIT_OK};

type Res<T> = Result<T, CliError>;

pub fn dispatch(cmd: &Command, cfg: &RunConfig, strict: bool) -> Res<i32> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("mliou-out"));
    let mut out = Output::create(&dir)?;
    let started = std::time::Instant::now();
    let mut claims = match cmd {
        Command::AlgebraReport => algebra_report(cfg, &mut out)?,
        Command::BracketClaims => bracket_claims(cfg)?,
        Command::Oracle => oracle(cfg, &mut out)?,
        Command::Stargen => stargen(cfg, &mut out)?,
        Command::Evolve => evolve(cfg, &mut out)?,
        Command::Init { .. } => unreachable!("init has no output directory"),
    };
    let forced: &[String] = match cmd {
        Command::BracketClaims => &cfg.brackets.assert_claims,
        _ => &[],
    };
    for c in claims.iter_mut() {
        if strict || forced.contains(&c.claim) {
            c.promote();
        }
    }
    let stream = format!("{}.jsonl", cmd.name().replace('-', "_"));
    out.write(&stream, claim_stream(&claims).as_bytes())?;

    let failed: Vec<&ClaimReport> = claims.iter().filter(|c| c.is_failure()).collect();
    for c in &failed {
        eprintln!(
            "FAILED claim {} [{}] residual={:e} tolerance={:e}{}",
            c.claim,
            c.kind,
            c.residual,
            c.tolerance,
            c.seed.map(|s| format!(" seed={s}")).unwrap_or_default()
        );
    }
    let recorded = claims.iter().filter(|c| c.verdict == Verdict::Recorded).count();
    log::info!("{} finished in {:.2?}", cmd.name(), started.elapsed());
    let manifest = out.finish(cmd.name(), cfg.seed)?;
    eprintln!(
        "{}: {} claims, {} failed, {} recorded; manifest {}",
        cmd.name(),
        claims.len(),
        failed.len(),
        recorded,
        manifest.display()
    );
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_CLAIM_FAILED })
}

fn claim_stream(claims: &[ClaimReport]) -> String {
    let mut s = String::new();
    for c in claims {
        s.push_str(&c.to_line());
        s.push('\n');
    }
    s
}

fn sets(cfg: &RunConfig) -> Vec<GammaSet<f64>> {
    cfg.representations.iter().map(|r| GammaSet::new(*r)).collect()
}

fn invariant_claims(set: &GammaSet<f64>, kind: &str, tol: f64) -> Vec<ClaimReport> {
    set.check_invariants()
        .into_iter()
        .map(|c| ClaimReport::asserted(c.name, kind, c.residual, tol))
        .collect()
}

fn algebra_report(cfg: &RunConfig, out: &mut Output) -> Res<Vec<ClaimReport>> {
    let tol = &cfg.tolerances;
    let mut claims = Vec::new();
    for set in sets(cfg) {
        let kind = set.rep.to_string();
        claims.extend(invariant_claims(&set, &kind, tol.clifford));
        let transforms = [
            ("boost_x", boost_generator(1, 0.5)),
            ("boost_z", boost_generator(3, -1.2)),
            ("rotation_y", rotation_generator(2, 0.7)),
        ];
        for (name, omega) in transforms {
            let st = spin_transform(&omega, &set)?;
            claims.push(
                ClaimReport::asserted(format!("spinor_intertwining[{name}]"), kind.clone(), st.intertwining_residual(&set), tol.exact),
            );
            claims.push(ClaimReport::asserted(format!("spinor_inverse[{name}]"), kind.clone(), st.inverse_residual(), tol.exact));
        }
    }
    for custom in &cfg.algebra.custom {
        let im = custom.im.unwrap_or([[[0.0; 4]; 4]; 4]);
        let gammas = std::array::from_fn(|mu| ComplexMat4::from_parts(custom.re[mu], im[mu]));
        let set = GammaSet::from_gammas(GammaRep::Dirac, gammas);
        claims.extend(invariant_claims(&set, &format!("custom:{}", custom.name), tol.clifford));
    }
    let mut lines = String::new();
    for c in &claims {
        lines.push_str(&format!("{},{},{:e},{:e}\n", c.kind, c.claim, c.residual, c.tolerance));
    }
    out.write("algebra_residuals.csv", format!("section,claim,residual,tolerance\n{lines}").as_bytes())?;
    Ok(claims)
}

/// Projects every coefficient onto its scalar part, giving commuting symbols.
fn scalarize(f: &Field<f64>) -> Field<f64> {
    f.map_coeffs(|m| Mat4::identity().scale(m.trace() * 0.25))
}

fn bracket_claims(cfg: &RunConfig) -> Res<Vec<ClaimReport>> {
    let b = &cfg.brackets;
    let seeds: Vec<u64> = (0..b.triples as u64).map(|i| cfg.seed + i).collect();
    let mut claims = Vec::new();
    for kind in &b.kinds {
        claims.extend(axiom_suite::<f64>(kind, &seeds, b.degree)?);
        if let BracketKind::Moyal { hbar, max_order } = *kind {
            for &s in &seeds {
                let k: Field<f64> = random_field(1_000_003 * s + 11, b.degree, 1);
                let w: Field<f64> = random_field(1_000_003 * s + 12, b.degree, 1);
                claims.push(leading_expansion_check(&k, &w, hbar)?.with_seed(s));
                // polynomial symbols, so the series terminates
                let ks = scalarize(&random_field(1_000_003 * s + 13, b.degree, 0));
                let ws = scalarize(&random_field(1_000_003 * s + 14, b.degree, 0));
                let (swapped, as_written) = commuting_limit_residuals(&ks, &ws, hbar, max_order)?;
                let inputs = format!(
                    "scalar parts of random_field(seed={},{}, waves=0)",
                    1_000_003 * s + 13,
                    1_000_003 * s + 14
                );
                claims.push(
                    ClaimReport::asserted("commuting_limit_swapped", "moyal", swapped, cfg.tolerances.exact)
                        .with_seed(s)
                        .with_inputs(inputs.clone())
                        .with_note("moyal(K,W) against poisson(W,K)"),
                );
                claims.push(
                    ClaimReport::recorded("commuting_limit_as_written", "moyal", as_written, cfg.tolerances.exact)
                        .with_seed(s)
                        .with_inputs(inputs)
                        .with_note("moyal(K,W) against poisson(K,W)"),
                );
            }
        }
    }
    Ok(claims)
}

fn oracle(cfg: &RunConfig, out: &mut Output) -> Res<Vec<ClaimReport>> {
    let o = &cfg.oracle;
    let params = cfg.params.phys();
    let mut claims = Vec::new();
    for set in sets(cfg) {
        let kind = set.rep.to_string();
        for i in 0..o.massless_states as u64 {
            let seed = cfg.seed + i;
            let terms = random_massless_state(seed, 1, &set, params.hbar)?;
            let w = wbar_field(&terms, &set)?;
            let r = anticomm_residual(&w, &set);
            let k = terms[0].0.k;
            claims.push(
                ClaimReport::asserted("single_wave_anticomm_residual", kind.clone(), normalized_residual(&r, &Field::zero()), cfg.tolerances.exact)
                    .with_seed(seed)
                    .with_inputs(format!("k=[{:.6},{:.6},{:.6},{:.6}]", k[0], k[1], k[2], k[3])),
            );
        }
        for i in 0..o.superpositions as u64 {
            let seed = cfg.seed + 10_000 + i;
            let terms = random_massless_state(seed, o.superposition_waves, &set, params.hbar)?;
            claims.extend(hermiticity_lemma_checks(&terms, &set)?.into_iter().map(|c| c.with_seed(seed)));
            if i == 0 {
                let w = wbar_field(&terms, &set)?;
                let table = coefficient_table(&anticomm_residual(&w, &set));
                out.write(&format!("coefficients_{kind}.csv"), table.as_bytes())?;
            }
        }
        if params.m > 0.0 {
            for i in 0..o.massive_states as u64 {
                let seed = cfg.seed + 20_000 + i;
                let terms = random_massive_state(seed, o.superposition_waves.max(1), &params, &set)?;
                claims.extend(
                    massive_bracket_verdicts(&terms, &params, &set)?
                        .into_iter()
                        .map(|c| c.with_seed(seed).with_note(kind.clone())),
                );
            }
        }
    }
    Ok(claims)
}

fn stargen(cfg: &RunConfig, out: &mut Output) -> Res<Vec<ClaimReport>> {
    let params = cfg.params.phys();
    let tol = cfg.tolerances.stargen;
    let hbar = params.hbar;
    let mut claims = Vec::new();
    let mut table = String::from("representation,case,p0,p1,p2,p3,epsilon,left,right\n");
    for set in sets(cfg) {
        let kind = set.rep.to_string();
        for p3 in &cfg.stargen.momenta {
            let p = on_shell(*p3, &params);
            let inputs = format!("p=[{:.6},{:.6},{:.6},{:.6}]", p[0], p[1], p[2], p[3]);
            for positive in [true, false] {
                let case = projector_case(&p, positive, &params, &set)?;
                let r = stargen_residual(&case, hbar, 16)?;
                let (l, rr) = (r.left.unwrap_or_default(), r.right.unwrap_or_default());
                table.push_str(&format!(
                    "{kind},{},{},{},{},{},{},{l:e},{rr:e}\n",
                    case.label, p[0], p[1], p[2], p[3], case.epsilon
                ));
                claims.push(
                    ClaimReport::asserted(format!("stargen_{}", case.label), kind.clone(), r.total(), tol)
                        .with_inputs(inputs.clone())
                        .with_note(format!("epsilon={}", case.epsilon)),
                );
                claims.push(
                    moyal_zero_bracket_check(&case.hamiltonian, &case.w, case.epsilon, hbar, tol, &case.points)?
                        .with_inputs(format!("{inputs}, {}", case.label)),
                );
                if cfg.stargen.landau && positive {
                    let pt = [PhasePoint::new([0.0, 0.3, 0.0, 0.0], p)];
                    for form in [HamiltonianForm::Gamma, HamiltonianForm::Kcal] {
                        let l = landau_stargen_residual(&case.w, 0.0, cfg.params.b, form, &params, &set, hbar, &pt)?;
                        let tag = |name: &str, v: f64| {
                            ClaimReport::recorded(format!("landau_{name}"), kind.clone(), v, tol)
                                .with_inputs(format!("{inputs}, x1=0.3, B={}, form={}", cfg.params.b, form.name()))
                        };
                        claims.push(tag("printed_residual", l.printed));
                        claims.push(tag("general_residual", l.general));
                        claims.push(tag("printed_minus_general", l.difference));
                    }
                }
            }
        }
    }
    out.write("stargen_residuals.csv", table.as_bytes())?;
    Ok(claims)
}

fn initial_matrix(choice: MatrixChoice, seed: u64, set: &GammaSet<f64>) -> Mat4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match choice {
        MatrixChoice::Identity => Mat4::identity(),
        MatrixChoice::Random => random_matrix(&mut rng),
        MatrixChoice::DiracHermitian => {
            let m: Mat4 = random_matrix(&mut rng);
            (m + set.dirac_adjoint(&m)).scale_real(0.5)
        }
    }
}

pub fn initial_state(cfg: &RunConfig, set: &GammaSet<f64>) -> Res<GridField<f64>> {
    let spec = cfg.evolve.grid.build()?;
    let w = match cfg.evolve.initial {
        InitialConfig::Mode { k, matrix } => {
            let m = initial_matrix(matrix, cfg.seed, set);
            GridField::from_fn(spec, |pt| {
                let phase = k[0] * pt.x[1] + k[1] * pt.x[2] + k[2] * pt.x[3];
                m.scale(Complex64::from_polar(1.0, phase))
            })
        }
        InitialConfig::Smooth { matrix } => {
            let m = initial_matrix(matrix, cfg.seed, set);
            GridField::from_fn(spec, |pt| {
                let x = pt.x[1];
                Mat4::identity().scale_real(1.0 + 0.5 * x.cos()) + m.scale_real(0.2 * (x + pt.p[2]).sin())
            })
        }
    };
    Ok(w)
}

#[derive(Serialize)]
struct EvolveSummary<'a> {
    representation: String,
    steps: usize,
    evolve: &'a crate::config::EvolveConfig,
    report: &'a EvolutionReport<f64>,
}

fn series_max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn evolve(cfg: &RunConfig, out: &mut Output) -> Res<Vec<ClaimReport>> {
    let e = &cfg.evolve;
    let tol = &cfg.tolerances;
    let params = cfg.params.phys();
    let set = GammaSet::new(cfg.representations[0]);
    let w0 = initial_state(cfg, &set)?;
    let spec = e.spec();
    let steps = spec.steps();
    let a = GaugePotential::from_spec(&e.gauge)?;
    let kind = set.rep.to_string();
    let mut claims = Vec::new();

    let report = match (e.bracket, e.stepper) {
        (BracketKind::Poisson, Stepper::ClosedForm) => {
            let r = evolve_free(&w0, e.total_time, e.snapshots.max(1), &params, &set)?;
            claims.push(ClaimReport::asserted("free_residual", kind.clone(), series_max(&r.residual), tol.free_residual));
            r
        }
        (BracketKind::Poisson, Stepper::Rk4) => {
            let r = evolve_em(&w0, e.hamiltonian, &a, &params, &set, e.dt, steps)?;
            claims.push(ClaimReport::recorded("step_defect", kind.clone(), series_max(&r.residual), tol.fd));
            if let Some(err) = r.extra.get("closed_form_error") {
                claims.push(ClaimReport::recorded("closed_form_agreement", kind.clone(), series_max(err), tol.fd));
            }
            r
        }
        (BracketKind::Extended, _) => {
            let opts = AnticommOptions {
                abort_threshold: e.abort_threshold,
                ..AnticommOptions::default()
            };
            let r = evolve_anticomm(&w0, e.hamiltonian, &a, &params, &set, e.dt, steps, &opts)?;
            claims.push(ClaimReport::recorded("anticomm_consistency", kind.clone(), series_max(&r.residual), tol.exact));
            r
        }
        (BracketKind::Moyal { hbar, .. }, _) => {
            if hbar != params.hbar {
                return Err(CliError::Config(format!(
                    "evolve.bracket hbar ({hbar}) must equal params.hbar ({})",
                    params.hbar
                )));
            }
            if e.hamiltonian != HamiltonianForm::Kcal {
                return Err(CliError::Config("Moyal evolution is implemented for hamiltonian = \"kcal\"".into()));
            }
            let b = match &e.gauge {
                GaugeSpec::Zero => 0.0,
                GaugeSpec::Landau { b } => *b,
                GaugeSpec::Custom { .. } => {
                    return Err(CliError::Config("Moyal evolution supports gauge zero or landau".into()));
                }
            };
            let opts = LandauOptions {
                cfl: e.cfl,
                ..LandauOptions::default()
            };
            let r = evolve_landau_moyal(&w0, b, &params, &set, e.dt, steps, &opts)?;
            claims.push(ClaimReport::asserted("trace_conservation", kind.clone(), r.trace_drift(), tol.trace_drift));
            let diff = r.extra.get("printed_vs_general").map(|v| series_max(v)).unwrap_or(0.0);
            claims.push(
                ClaimReport::recorded("printed_display_agrees", kind.clone(), diff, tol.exact)
                    .with_note(format!("{} steps with a discrepancy", r.discrepancies.len())),
            );
            r
        }
    };
    claims.push(ClaimReport::recorded(
        "dirac_hermiticity_preserved",
        kind.clone(),
        report.max_dirac_deviation(),
        tol.dirac_hermiticity,
    ));
    if !matches!(e.bracket, BracketKind::Moyal { .. }) {
        claims.push(ClaimReport::recorded("trace_conservation", kind.clone(), report.trace_drift(), tol.trace_drift));
    }
    for n in &report.notes {
        log::info!("{n}");
    }

    let summary = EvolveSummary {
        representation: kind,
        steps: report.steps(),
        evolve: e,
        report: &report,
    };
    let mut json = serde_json::to_string_pretty(&summary).map_err(|err| CliError::Io(err.to_string()))?;
    json.push('\n');
    out.write("evolve_report.json", json.as_bytes())?;
    out.write("evolve_series.csv", report.to_csv().as_bytes())?;
    if e.svg {
        let series = report.series();
        let plot = svg::plot(&report.label, &report.times, &series);
        out.write("evolve_series.svg", plot.as_bytes())?;
    }
    if e.write_grid {
        let mut buf = Vec::new();
        write_grid_binary(&report.final_state, &mut buf)?;
        out.write("final_state.bin", &buf)?;
    }
    Ok(claims)
}
