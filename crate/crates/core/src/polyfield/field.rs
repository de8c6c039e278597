use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;

use super::{Monomial, PhasePoint, Var, NVARS};
use crate::clifford::ComplexMat4;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real, C};

/// Default cap on stored coefficients.
pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Default cap on total polynomial degree.
pub const DEFAULT_MAX_DEGREE: u32 = 16;

/// Growth caps checked by every operation that can enlarge a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_terms: DEFAULT_MAX_TERMS,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

pub type Poly<T> = BTreeMap<Monomial, ComplexMat4<T>>;

/// A matrix polynomial in the eight phase-space variables times `e^{i k_ν x^ν}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveTerm<T: Real> {
    pub wave: [T; 4],
    pub poly: Poly<T>,
}

/// Exact matrix-valued symbol on phase-spacetime.
///
/// A finite sum of [`WaveTerm`]s. Terms are kept sorted by wavevector and
/// coefficients that are exactly zero are dropped, so structurally equal
/// fields compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T: Real> {
    terms: Vec<WaveTerm<T>>,
    limits: Limits,
}

fn wave_key<T: Real>(k: &[T; 4]) -> [u64; 4] {
    k.map(|x| (x + T::zero()).as_f64().to_bits())
}

fn clean_wave<T: Real>(k: [T; 4]) -> [T; 4] {
    // −0.0 + 0.0 == +0.0, so equal wavevectors share one key.
    k.map(|x| x + T::zero())
}

fn degree(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

impl<T: Real> Default for Field<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> Field<T> {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            limits: Limits::default(),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// `M·x^α e^{ik·x}` for a single monomial.
    pub fn monomial(coeff: ComplexMat4<T>, exps: Monomial, wave: [T; 4]) -> Self {
        let mut f = Self::zero();
        if !coeff.is_zero() {
            let mut poly = Poly::new();
            poly.insert(exps, coeff);
            f.terms.push(WaveTerm {
                wave: clean_wave(wave),
                poly,
            });
        }
        f
    }

    pub fn constant(m: ComplexMat4<T>) -> Self {
        Self::monomial(m, [0; NVARS], [T::zero(); 4])
    }

    pub fn identity() -> Self {
        Self::constant(ComplexMat4::identity())
    }

    /// `z·1₄`.
    pub fn scalar(z: C<T>) -> Self {
        Self::constant(ComplexMat4::scalar(z))
    }

    /// `M·v` for one phase-space variable.
    pub fn var(v: Var, m: ComplexMat4<T>) -> Self {
        let mut e = [0u8; NVARS];
        e[v.index()] = 1;
        Self::monomial(m, e, [T::zero(); 4])
    }

    /// `M·e^{i k_ν x^ν}`.
    pub fn plane_wave(m: ComplexMat4<T>, wave: [T; 4]) -> Self {
        Self::monomial(m, [0; NVARS], wave)
    }

    pub fn terms(&self) -> &[WaveTerm<T>] {
        &self.terms
    }

    /// Iterates over `(wavevector, monomial, coefficient)` triples.
    pub fn coefficients(&self) -> impl Iterator<Item = (&[T; 4], &Monomial, &ComplexMat4<T>)> {
        self.terms
            .iter()
            .flat_map(|t| t.poly.iter().map(move |(m, c)| (&t.wave, m, c)))
    }

    /// Number of stored coefficients.
    pub fn term_count(&self) -> usize {
        self.terms.iter().map(|t| t.poly.len()).sum()
    }

    /// Highest total polynomial degree.
    pub fn degree(&self) -> u32 {
        self.coefficients().map(|(_, m, _)| degree(m)).max().unwrap_or(0)
    }

    /// Largest degree in one variable.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.coefficients()
            .map(|(_, m, _)| m[v.index()] as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term carries the zero wavevector.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.wave.iter().all(|&k| k == T::zero()))
    }

    /// True when the field has no dependence on any momentum variable.
    pub fn is_momentum_free(&self) -> bool {
        self.coefficients().all(|(_, m, _)| m[4..].iter().all(|&e| e == 0))
    }

    /// Largest coefficient entry modulus; zero iff the field is identically zero.
    pub fn norm(&self) -> T {
        self.coefficients()
            .map(|(_, _, c)| c.max_abs())
            .fold(T::zero(), T::max)
    }

    /// `‖self − other‖` in the coefficient max-norm.
    pub fn dist(&self, other: &Self) -> T {
        self.sub(other).norm()
    }

    /// The wavevectors present.
    pub fn waves(&self) -> Vec<[T; 4]> {
        self.terms.iter().map(|t| t.wave).collect()
    }

    fn from_map(map: HashMap<[u64; 4], WaveTerm<T>>, limits: Limits) -> Self {
        let mut terms: Vec<WaveTerm<T>> = map
            .into_values()
            .map(|mut t| {
                t.poly.retain(|_, c| !c.is_zero());
                t
            })
            .filter(|t| !t.poly.is_empty())
            .collect();
        terms.sort_by(|a, b| {
            for i in 0..4 {
                match a.wave[i].partial_cmp(&b.wave[i]) {
                    Some(std::cmp::Ordering::Equal) | None => continue,
                    Some(o) => return o,
                }
            }
            std::cmp::Ordering::Equal
        });
        Self { terms, limits }
    }

    fn to_map(&self) -> HashMap<[u64; 4], WaveTerm<T>> {
        self.terms
            .iter()
            .map(|t| (wave_key(&t.wave), t.clone()))
            .collect()
    }

    fn check(self) -> Result<Self> {
        let n = self.term_count();
        if n > self.limits.max_terms {
            return Err(Error::Resource(format!(
                "field has {n} coefficients, cap is {}",
                self.limits.max_terms
            )));
        }
        let d = self.degree();
        if d > self.limits.max_degree {
            return Err(Error::Resource(format!(
                "field degree {d} exceeds cap {}",
                self.limits.max_degree
            )));
        }
        Ok(self)
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        let mut map = self.to_map();
        for t in &other.terms {
            let entry = map.entry(wave_key(&t.wave)).or_insert_with(|| WaveTerm {
                wave: t.wave,
                poly: Poly::new(),
            });
            for (m, c) in &t.poly {
                let slot = entry.poly.entry(*m).or_insert_with(ComplexMat4::zero);
                *slot += c.scale_real(sign);
            }
        }
        Self::from_map(map, self.limits)
    }

    /// Exact sum. Adding never raises the degree; only the term cap can trip.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.add(other).check()
    }

    /// Exact sum without the cap check (term count is at most the sum of both operands).
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -T::one())
    }

    pub fn neg(&self) -> Self {
        self.scale(creal(-T::one()))
    }

    pub fn scale(&self, z: C<T>) -> Self {
        self.map_coeffs(|c| c.scale(z))
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(creal(s))
    }

    /// Applies `f` to every coefficient matrix, keeping monomials and waves.
    pub fn map_coeffs(&self, mut f: impl FnMut(&ComplexMat4<T>) -> ComplexMat4<T>) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| WaveTerm {
                wave: t.wave,
                poly: t
                    .poly
                    .iter()
                    .map(|(m, c)| (*m, f(c)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            })
            .filter(|t| !t.poly.is_empty())
            .collect();
        Self {
            terms,
            limits: self.limits,
        }
    }

    /// `M·F`.
    pub fn left_mul(&self, m: &ComplexMat4<T>) -> Self {
        self.map_coeffs(|c| *m * *c)
    }

    /// `F·M`.
    pub fn right_mul(&self, m: &ComplexMat4<T>) -> Self {
        self.map_coeffs(|c| *c * *m)
    }

    /// Exact non-commutative product `self · other`; wavevectors add termwise.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut map: HashMap<[u64; 4], WaveTerm<T>> = HashMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let wave: [T; 4] = clean_wave(std::array::from_fn(|i| a.wave[i] + b.wave[i]));
                let entry = map.entry(wave_key(&wave)).or_insert_with(|| WaveTerm {
                    wave,
                    poly: Poly::new(),
                });
                for (ma, ca) in &a.poly {
                    for (mb, cb) in &b.poly {
                        let mut m = [0u8; NVARS];
                        for i in 0..NVARS {
                            m[i] = ma[i].checked_add(mb[i]).ok_or_else(|| {
                                Error::Resource("monomial exponent overflow".into())
                            })?;
                        }
                        if degree(&m) > self.limits.max_degree {
                            return Err(Error::Resource(format!(
                                "product degree {} exceeds cap {}",
                                degree(&m),
                                self.limits.max_degree
                            )));
                        }
                        let slot = entry.poly.entry(m).or_insert_with(ComplexMat4::zero);
                        *slot += *ca * *cb;
                    }
                }
                if entry.poly.len() > self.limits.max_terms {
                    return Err(Error::Resource("product term count exceeds cap".into()));
                }
            }
        }
        Self::from_map(map, self.limits).check()
    }

    /// Exact partial derivative with the product rule on the wave factor.
    pub fn differentiate(&self, v: Var) -> Self {
        let idx = v.index();
        let mut map: HashMap<[u64; 4], WaveTerm<T>> = HashMap::new();
        for t in &self.terms {
            let mut poly = Poly::new();
            for (m, c) in &t.poly {
                if m[idx] > 0 {
                    let mut dm = *m;
                    dm[idx] -= 1;
                    let slot = poly.entry(dm).or_insert_with(ComplexMat4::zero);
                    *slot += c.scale_real(T::of_usize(m[idx] as usize));
                }
            }
            if let Some(nu) = v.x_index() {
                let ik = Complex::new(T::zero(), t.wave[nu]);
                if t.wave[nu] != T::zero() {
                    for (m, c) in &t.poly {
                        let slot = poly.entry(*m).or_insert_with(ComplexMat4::zero);
                        *slot += c.scale(ik);
                    }
                }
            }
            map.insert(
                wave_key(&t.wave),
                WaveTerm {
                    wave: t.wave,
                    poly,
                },
            );
        }
        Self::from_map(map, self.limits)
    }

    /// Repeated differentiation by a multi-index of derivative counts.
    pub fn differentiate_multi(&self, counts: &Monomial) -> Self {
        let mut f = self.clone();
        for (i, &n) in counts.iter().enumerate() {
            for _ in 0..n {
                if f.is_zero() {
                    return f;
                }
                f = f.differentiate(Var::from_index(i));
            }
        }
        f
    }

    pub fn evaluate(&self, pt: &PhasePoint<T>) -> ComplexMat4<T> {
        let vals = pt.as_array();
        let mut out = ComplexMat4::zero();
        for t in &self.terms {
            let phase: T = (0..4).map(|nu| t.wave[nu] * pt.x[nu]).sum();
            let e = Complex::new(phase.cos(), phase.sin());
            let mut acc = ComplexMat4::zero();
            for (m, c) in &t.poly {
                let mut w = T::one();
                for i in 0..NVARS {
                    if m[i] > 0 {
                        w = w * vals[i].powi(m[i] as i32);
                    }
                }
                acc += c.scale_real(w);
            }
            out += acc.scale(e);
        }
        out
    }

    /// Conjugate transpose as a symbol: coefficients are adjointed and
    /// wavevectors negated (the variables are real).
    pub fn adjoint(&self) -> Self {
        let map = self
            .terms
            .iter()
            .map(|t| {
                let wave = clean_wave(t.wave.map(|k| -k));
                (
                    wave_key(&wave),
                    WaveTerm {
                        wave,
                        poly: t.poly.iter().map(|(m, c)| (*m, c.adjoint())).collect(),
                    },
                )
            })
            .collect();
        Self::from_map(map, self.limits)
    }

    /// Field whose coefficients are `tr(M)·1₄`.
    pub fn trace_scalar(&self) -> Self {
        self.map_coeffs(|c| ComplexMat4::scalar(c.trace()))
    }

    /// Linear change of variables `x^ν → a[ν][ρ] x^ρ`, `p_μ → b[μ][ν] p_ν`.
    pub fn substitute_linear(&self, a: &[[T; 4]; 4], b: &[[T; 4]; 4]) -> Result<Self> {
        let lin: Vec<Self> = (0..NVARS)
            .map(|i| {
                let (row, offset) = if i < 4 { (&a[i], 0) } else { (&b[i - 4], 4) };
                (0..4).fold(Self::zero().with_limits(self.limits), |acc, j| {
                    if row[j] == T::zero() {
                        acc
                    } else {
                        acc.add(
                            &Self::var(Var::from_index(offset + j), ComplexMat4::identity())
                                .scale_real(row[j]),
                        )
                    }
                })
            })
            .collect();
        let mut out = Self::zero().with_limits(self.limits);
        for t in &self.terms {
            let wave: [T; 4] = std::array::from_fn(|rho| (0..4).map(|nu| t.wave[nu] * a[nu][rho]).sum());
            let mut poly_part = Self::zero().with_limits(self.limits);
            for (m, c) in &t.poly {
                let mut prod = Self::constant(*c).with_limits(self.limits);
                for i in 0..NVARS {
                    for _ in 0..m[i] {
                        prod = prod.mul(&lin[i])?;
                    }
                }
                poly_part = poly_part.add(&prod);
            }
            let wave_factor = Self::plane_wave(ComplexMat4::identity(), wave).with_limits(self.limits);
            out = out.add(&poly_part.mul(&wave_factor)?);
        }
        out.check()
    }

    /// Converts between scalar precisions.
    pub fn cast<U: Real>(&self) -> Field<U> {
        let map = self
            .terms
            .iter()
            .map(|t| {
                let wave = t.wave.map(|k| U::of(k.as_f64()));
                (
                    wave_key(&wave),
                    WaveTerm {
                        wave,
                        poly: t.poly.iter().map(|(m, c)| (*m, c.cast())).collect(),
                    },
                )
            })
            .collect();
        Field::from_map(map, self.limits)
    }
}

/// `Σ` of a sequence of fields.
pub fn sum_fields<T: Real>(fields: impl IntoIterator<Item = Field<T>>) -> Field<T> {
    fields.into_iter().fold(Field::zero(), |a, b| a.add(&b))
}
