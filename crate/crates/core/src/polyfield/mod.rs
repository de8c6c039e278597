//! Exact calculus on matrix-valued phase-space symbols and their sampled grids.
//!
//! A [`Field`] is a finite sum of matrix-coefficient polynomials in
//! `(x^0..x^3, p_0..p_3)` multiplied by plane-wave factors `e^{i k_ν x^ν}`.
//! The set is closed under addition, non-commutative multiplication and
//! differentiation, so every bracket and star product of such symbols is
//! again an exact symbol.

mod field;
mod grid;
mod io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use field::{sum_fields, Field, Limits, Poly, WaveTerm, DEFAULT_MAX_DEGREE, DEFAULT_MAX_TERMS};
pub use grid::{grid_derivative, sample_to_grid, Axis, DerivativeMode, GridField, GridSpec};
pub use io::{read_grid_binary, write_grid_binary, write_grid_csv, GRID_MAGIC};

use crate::clifford::ComplexMat4;
use crate::scalar::Real;

pub const NVARS: usize = 8;

/// Exponents of `x^0..x^3, p_0..p_3`.
pub type Monomial = [u8; NVARS];

/// One of the eight phase-space coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    /// Contravariant position `x^ν` (`x^0 = ct`).
    X(u8),
    /// Covariant momentum `p_ν`.
    P(u8),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(nu) => nu as usize,
            Var::P(nu) => 4 + nu as usize,
        }
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < NVARS);
        if i < 4 {
            Var::X(i as u8)
        } else {
            Var::P((i - 4) as u8)
        }
    }

    pub fn x_index(self) -> Option<usize> {
        match self {
            Var::X(nu) => Some(nu as usize),
            Var::P(_) => None,
        }
    }

    /// The conjugate partner (`x^ν ↔ p_ν`).
    pub fn conjugate(self) -> Self {
        match self {
            Var::X(nu) => Var::P(nu),
            Var::P(nu) => Var::X(nu),
        }
    }

    pub fn all() -> [Var; NVARS] {
        std::array::from_fn(Var::from_index)
    }
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Var::X(nu) => write!(f, "x{nu}"),
            Var::P(nu) => write!(f, "p{nu}"),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || crate::Error::InvalidInput(format!("unknown variable '{s}'"));
        let (head, tail) = s.split_at(1.min(s.len()));
        let nu: u8 = tail.parse().map_err(|_| bad())?;
        if nu > 3 {
            return Err(bad());
        }
        match head {
            "x" => Ok(Var::X(nu)),
            "p" => Ok(Var::P(nu)),
            _ => Err(bad()),
        }
    }
}

/// A point `(x^μ, p_μ)` of phase-spacetime.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PhasePoint<T: Real> {
    pub x: [T; 4],
    pub p: [T; 4],
}

impl<T: Real> PhasePoint<T> {
    pub fn new(x: [T; 4], p: [T; 4]) -> Self {
        Self { x, p }
    }

    pub fn origin() -> Self {
        Self {
            x: [T::zero(); 4],
            p: [T::zero(); 4],
        }
    }

    pub fn at_momentum(p: [T; 4]) -> Self {
        Self {
            x: [T::zero(); 4],
            p,
        }
    }

    pub fn as_array(&self) -> [T; NVARS] {
        std::array::from_fn(|i| if i < 4 { self.x[i] } else { self.p[i - 4] })
    }

    pub fn get(&self, v: Var) -> T {
        self.as_array()[v.index()]
    }

    pub fn with(&self, v: Var, value: T) -> Self {
        let mut out = *self;
        match v {
            Var::X(nu) => out.x[nu as usize] = value,
            Var::P(nu) => out.p[nu as usize] = value,
        }
        out
    }

    pub fn shifted(&self, v: Var, delta: T) -> Self {
        self.with(v, self.get(v) + delta)
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

/// Deterministic pseudo-random field for property tests.
///
/// The result always has a zero-wavevector term plus `waves` plane-wave terms
/// with wavevector components drawn from `[-1, 1]`. Each term carries one
/// monomial of every total degree `0..=degree` over randomly chosen variables;
/// coefficient entries satisfy `|z| ≤ 1`.
pub fn random_field<T: Real>(seed: u64, degree: u32, waves: usize) -> Field<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Field::zero();
    for w in 0..=waves {
        let wave: [T; 4] = if w == 0 {
            [T::zero(); 4]
        } else {
            std::array::from_fn(|_| T::of(rng.gen_range(-1.0..1.0)))
        };
        for d in 0..=degree {
            let mut m = [0u8; NVARS];
            for _ in 0..d {
                m[rng.gen_range(0..NVARS)] += 1;
            }
            let coeff = random_matrix(&mut rng);
            out = out.add(&Field::monomial(coeff, m, wave));
        }
    }
    out
}

/// Random matrix with entries of modulus at most one.
pub fn random_matrix<T: Real, R: Rng>(rng: &mut R) -> ComplexMat4<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMat4::from_fn(|_, _| {
        num_complex::Complex::new(
            T::of(rng.gen_range(-s..s)),
            T::of(rng.gen_range(-s..s)),
        )
    })
}

/// Deterministic random phase point with coordinates in `[-r, r]`.
pub fn random_point<T: Real>(seed: u64, r: f64) -> PhasePoint<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    PhasePoint {
        x: std::array::from_fn(|_| T::of(rng.gen_range(-r..r))),
        p: std::array::from_fn(|_| T::of(rng.gen_range(-r..r))),
    }
}
