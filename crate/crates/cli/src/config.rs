//! Run configuration and the documented template written by `mliou init`.

use std::path::PathBuf;

use matrix_liouville::brackets::BracketKind;
use matrix_liouville::clifford::GammaRep;
use matrix_liouville::dynamics::{CflPolicy, EvolutionSpec, Stepper};
use matrix_liouville::hamiltonians::{GaugeSpec, HamiltonianForm, PhysParams};
use matrix_liouville::polyfield::{Axis, GridSpec, PhasePoint, Var};
use matrix_liouville::Error;
use serde::{Deserialize, Serialize};

/// Claims produced by `bracket-claims`.
pub const BRACKET_CLAIMS: &[&str] = &[
    "antisymmetry",
    "bilinearity",
    "jacobi",
    "leibniz_second_slot",
    "leibniz_first_slot",
    "trace_derivation",
    "oracle_equivalence",
    "leading_expansion",
    "commuting_limit_swapped",
    "commuting_limit_as_written",
];

/// Largest number of samples an evolution grid may have.
pub const MAX_GRID_POINTS: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub representations: Vec<GammaRep>,
    pub params: ParamsConfig,
    pub tolerances: Tolerances,
    pub algebra: AlgebraConfig,
    pub brackets: BracketConfig,
    pub oracle: OracleConfig,
    pub stargen: StargenConfig,
    pub evolve: EvolveConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            out: None,
            representations: vec![GammaRep::Dirac, GammaRep::Chiral],
            params: ParamsConfig::default(),
            tolerances: Tolerances::default(),
            algebra: AlgebraConfig::default(),
            brackets: BracketConfig::default(),
            oracle: OracleConfig::default(),
            stargen: StargenConfig::default(),
            evolve: EvolveConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub m: f64,
    pub q: f64,
    pub c: f64,
    pub hbar: f64,
    /// Magnetic field for the Landau-gauge stargen cases.
    pub b: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            m: 1.0,
            q: 1.0,
            c: 1.0,
            hbar: 1.0,
            b: 1.0,
        }
    }
}

impl ParamsConfig {
    pub fn phys(&self) -> PhysParams<f64> {
        PhysParams {
            m: self.m,
            q: self.q,
            c: self.c,
            hbar: self.hbar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub clifford: f64,
    pub exact: f64,
    pub fd: f64,
    pub free_residual: f64,
    pub stargen: f64,
    pub trace_drift: f64,
    pub dirac_hermiticity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            clifford: 1e-14,
            exact: 1e-12,
            fd: 1e-6,
            free_residual: 1e-8,
            stargen: 1e-12,
            trace_drift: 1e-6,
            dirac_hermiticity: 1e-8,
        }
    }
}

/// A user-supplied table of γ^μ (real and optional imaginary parts, row-major).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomGammas {
    pub name: String,
    pub re: [[[f64; 4]; 4]; 4],
    #[serde(default)]
    pub im: Option<[[[f64; 4]; 4]; 4]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraConfig {
    pub custom: Vec<CustomGammas>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BracketConfig {
    pub kinds: Vec<BracketKind>,
    /// Number of random triples per bracket (seeds `seed .. seed + triples`).
    pub triples: usize,
    pub degree: u32,
    /// Claim names to treat as asserted even though the suite only records them.
    pub assert_claims: Vec<String>,
}

impl Default for BracketConfig {
    fn default() -> Self {
        Self {
            kinds: vec![BracketKind::Poisson, BracketKind::Extended, BracketKind::moyal(1.0)],
            triples: 20,
            degree: 2,
            assert_claims: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub massless_states: usize,
    pub superpositions: usize,
    pub superposition_waves: usize,
    pub massive_states: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            massless_states: 100,
            superpositions: 5,
            superposition_waves: 2,
            massive_states: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StargenConfig {
    /// Spatial momenta; the energy component is put on shell.
    pub momenta: Vec<[f64; 3]>,
    pub landau: bool,
}

impl Default for StargenConfig {
    fn default() -> Self {
        Self {
            momenta: vec![[0.3, -0.2, 0.5], [1.0, 0.0, 0.0], [-0.7, 1.1, 0.4]],
            landau: true,
        }
    }
}

/// Matrix factor of the initial data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixChoice {
    Identity,
    /// Seeded random complex matrix.
    Random,
    /// Seeded random matrix symmetrized under the Dirac adjoint.
    DiracHermitian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// `M e^{i k·x}`.
    Mode { k: [f64; 3], matrix: MatrixChoice },
    /// `(1 + ½cos x¹)·1₄ + ⅕ sin(x¹ + p₂)·M`.
    Smooth { matrix: MatrixChoice },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub var: String,
    pub min: f64,
    pub extent: f64,
    pub n: usize,
    #[serde(default = "yes")]
    pub periodic: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub axes: Vec<AxisConfig>,
    pub base_x: [f64; 4],
    pub base_p: [f64; 4],
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            axes: vec![AxisConfig {
                var: "x1".into(),
                min: 0.0,
                extent: 2.0 * std::f64::consts::PI,
                n: 32,
                periodic: true,
            }],
            base_x: [0.0; 4],
            base_p: [0.0; 4],
        }
    }
}

impl GridConfig {
    /// Grid overflow is a `Grid` error; malformed axes are `InvalidInput`.
    pub fn build(&self) -> matrix_liouville::Result<GridSpec<f64>> {
        let mut axes = Vec::with_capacity(self.axes.len());
        let mut total: usize = 1;
        for a in &self.axes {
            let var: Var = a.var.parse()?;
            total = total
                .checked_mul(a.n)
                .filter(|t| *t <= MAX_GRID_POINTS)
                .ok_or_else(|| Error::Grid(format!("grid has more than {MAX_GRID_POINTS} points")))?;
            axes.push(Axis {
                var,
                min: a.min,
                extent: a.extent,
                n: a.n,
                periodic: a.periodic,
            });
        }
        GridSpec::new(axes, PhasePoint::new(self.base_x, self.base_p))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub bracket: BracketKind,
    pub hamiltonian: HamiltonianForm,
    pub gauge: GaugeSpec,
    pub stepper: Stepper,
    pub dt: f64,
    pub total_time: f64,
    /// Output samples of a closed-form run.
    pub snapshots: usize,
    pub grid: GridConfig,
    pub initial: InitialConfig,
    pub cfl: CflPolicy,
    pub abort_threshold: Option<f64>,
    pub svg: bool,
    pub write_grid: bool,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            bracket: BracketKind::Poisson,
            hamiltonian: HamiltonianForm::Gamma,
            gauge: GaugeSpec::Zero,
            stepper: Stepper::ClosedForm,
            dt: 0.1,
            total_time: 10.0,
            snapshots: 10,
            grid: GridConfig::default(),
            initial: InitialConfig::Mode {
                k: [1.0, 0.0, 0.0],
                matrix: MatrixChoice::Random,
            },
            cfl: CflPolicy::Warn,
            abort_threshold: None,
            svg: true,
            write_grid: true,
        }
    }
}

impl EvolveConfig {
    pub fn spec(&self) -> EvolutionSpec {
        EvolutionSpec {
            bracket: self.bracket,
            hamiltonian: self.hamiltonian,
            gauge: self.gauge.clone(),
            dt: self.dt,
            total_time: self.total_time,
            stepper: self.stepper,
        }
    }
}

impl RunConfig {
    /// Checks everything that does not need a computation.
    pub fn validate(&self) -> Result<(), String> {
        self.params.phys().validate().map_err(|e| e.to_string())?;
        if !self.params.b.is_finite() {
            return Err("params.b must be finite".into());
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("clifford", t.clifford),
            ("exact", t.exact),
            ("fd", t.fd),
            ("free_residual", t.free_residual),
            ("stargen", t.stargen),
            ("trace_drift", t.trace_drift),
            ("dirac_hermiticity", t.dirac_hermiticity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("tolerance {name} must be positive"));
            }
        }
        for name in &self.brackets.assert_claims {
            if !BRACKET_CLAIMS.contains(&name.as_str()) {
                return Err(format!(
                    "brackets.assert_claims: unknown claim '{name}' (known: {})",
                    BRACKET_CLAIMS.join(", ")
                ));
            }
        }
        if self.brackets.triples == 0 {
            return Err("brackets.triples must be at least 1".into());
        }
        if self.representations.is_empty() {
            return Err("representations must not be empty".into());
        }
        for k in &self.brackets.kinds {
            k.validate().map_err(|e| e.to_string())?;
        }
        self.evolve.spec().validate().map_err(|e| e.to_string())?;
        Ok(())
    }
}

/// Commented template whose values are the built-in defaults.
pub const TEMPLATE: &str = r#"# mliou run configuration. Every value shown is the default.

# Base seed for every random draw; `--seed` overrides it.
seed = 42
# Output directory; `--out` overrides it (fallback: ./mliou-out).
# out = "mliou-out"
# Gamma-matrix representations to run: "dirac", "chiral".
representations = ["dirac", "chiral"]

[params]
m = 1.0      # mass
q = 1.0      # charge
c = 1.0      # speed of light
hbar = 1.0   # Planck constant
b = 1.0      # magnetic field for the Landau-gauge stargen cases

[tolerances]
clifford = 1e-14       # gamma-matrix identities
exact = 1e-12          # identities exact up to rounding
fd = 1e-6              # comparisons against finite differences
free_residual = 1e-8   # free-equation residual of closed-form evolutions
stargen = 1e-12        # stargen residuals
trace_drift = 1e-6     # total-trace conservation in Moyal evolutions
dirac_hermiticity = 1e-8  # Dirac-Hermiticity deviation of evolved states

[algebra]
# Extra gamma tables to check, e.g. as a negative control:
# [[algebra.custom]]
# name = "broken"
# re = [ [[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]], ... four 4x4 matrices ... ]
# im = [ ... optional, same shape ... ]
custom = []

[brackets]
# Brackets to run the claim suite on.
kinds = [{ kind = "poisson" }, { kind = "extended" }, { kind = "moyal", hbar = 1.0, max_order = 16 }]
triples = 20     # random triples per bracket, seeds seed .. seed + triples
degree = 2       # polynomial degree of the random fields
# Recorded claims to assert anyway (e.g. "leibniz_second_slot").
assert_claims = []

[oracle]
massless_states = 100    # single-wave massless states checked exactly
superpositions = 5       # superpositions run through the Hermiticity lemma chain
superposition_waves = 2  # waves per superposition
massive_states = 3       # massive superpositions whose brackets are recorded

[stargen]
# Spatial momenta of the projector cases; p_0 is put on shell.
momenta = [[0.3, -0.2, 0.5], [1.0, 0.0, 0.0], [-0.7, 1.1, 0.4]]
landau = true   # also compare the printed Landau display with the general product

[evolve]
# Bracket generating the dynamics:
#   poisson  + closed_form : exact free propagation (gauge must be zero)
#   poisson  + rk4         : matrix transport with a potential
#   extended + rk4         : symmetrized-bracket constraint evolution
#   moyal    + rk4         : Landau-gauge Moyal equation of motion (gauge zero or landau)
bracket = { kind = "poisson" }
hamiltonian = "gamma"      # "gamma" (K) or "kcal" (gamma^0 K)
gauge = { type = "zero" }  # or { type = "landau", b = 1.0 }
stepper = "closed_form"    # "closed_form" or "rk4"
dt = 0.1
total_time = 10.0
snapshots = 10             # output samples of a closed-form run
cfl = "warn"               # "warn" or "abort" when |rhs| dt > |W|
# abort_threshold = 1e-3   # abort the symmetrized-bracket run above this consistency residual
svg = true                 # plot the time series
write_grid = true          # write the final state in the binary grid layout

[evolve.grid]
base_x = [0.0, 0.0, 0.0, 0.0]   # values of coordinates that are not grid axes
base_p = [0.0, 0.0, 0.0, 0.0]

[[evolve.grid.axes]]
var = "x1"
min = 0.0
extent = 6.283185307179586
n = 32
periodic = true

[evolve.initial]
# { type = "mode", k = [..], matrix = .. } gives M e^{i k.x};
# { type = "smooth", matrix = .. } gives (1 + cos(x1)/2) 1 + sin(x1 + p2) M / 5.
# matrix: "identity", "random" or "dirac_hermitian" (seeded).
type = "mode"
k = [1.0, 0.0, 0.0]
matrix = "random"
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_is_the_default() {
        let parsed: RunConfig = toml::from_str(TEMPLATE).unwrap();
        assert_eq!(parsed, RunConfig::default());
        assert!(parsed.validate().is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("sead = 1").is_err());
        assert!(toml::from_str::<RunConfig>("[evolve]\nstepper = \"euler\"").is_err());
        let cfg: RunConfig = toml::from_str("[brackets]\nassert_claims = [\"leibnitz\"]").unwrap();
        assert!(cfg.validate().unwrap_err().contains("unknown claim"));
    }

    #[test]
    fn grid_overflow_detected() {
        let mut g = GridConfig::default();
        g.axes[0].n = 1 << 12;
        g.axes.push(AxisConfig {
            var: "p2".into(),
            min: 0.0,
            extent: 1.0,
            n: 1 << 12,
            periodic: true,
        });
        assert!(matches!(g.build().unwrap_err(), Error::Grid(_)));
    }
}
