use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::polyfield::{Field, Monomial, Var, NVARS};
use crate::scalar::{Real, C};

/// Star product together with its truncation status.
#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct<T: Real> {
    pub field: Field<T>,
    /// True when the series terminated on its own at or before the order cap.
    pub exact: bool,
    /// Highest order that contributed.
    pub order: usize,
}

/// The ħ-free coefficients of the star series: `orders[n] = (1/n!)(i/2)^n Π^n(F, G)`.
#[derive(Clone, Debug)]
pub struct StarSeries<T: Real> {
    pub orders: Vec<Field<T>>,
    pub exact: bool,
}

impl<T: Real> StarSeries<T> {
    /// `Σ_n ħ^n orders[n]`.
    pub fn sum(&self, hbar: T) -> Field<T> {
        let mut out = Field::zero();
        let mut pow = T::one();
        for term in &self.orders {
            out = out.add(&term.scale_real(pow));
            pow = pow * hbar;
        }
        out
    }
}

/// Lazily built table of mixed partial derivatives of one operand.
struct DerivativeCache<'a, T: Real> {
    base: &'a Field<T>,
    table: HashMap<Monomial, Field<T>>,
}

impl<'a, T: Real> DerivativeCache<'a, T> {
    fn new(base: &'a Field<T>) -> Self {
        Self {
            base,
            table: HashMap::new(),
        }
    }

    fn get(&mut self, counts: &Monomial) -> Field<T> {
        if let Some(f) = self.table.get(counts) {
            return f.clone();
        }
        let f = match counts.iter().position(|&c| c > 0) {
            None => self.base.clone(),
            Some(i) => {
                let mut parent = *counts;
                parent[i] -= 1;
                let p = self.get(&parent);
                if p.is_zero() {
                    p
                } else {
                    p.differentiate(Var::from_index(i))
                }
            }
        };
        self.table.insert(*counts, f.clone());
        f
    }
}

fn bump(m: &Monomial, v: Var) -> Monomial {
    let mut out = *m;
    out[v.index()] += 1;
    out
}

/// Expands the star series up to `max_order`.
///
/// `Π` is the bidifferential kernel `Σ_ν (←∂_{x^ν} →∂_{p_ν} − ←∂_{p_ν} →∂_{x^ν})`
/// with every derivative of `F` multiplied from the left of the matching
/// derivative of `G`. `Π^n` is kept as a table of `(α, β) → c` meaning
/// `c · ∂^α F · ∂^β G`; entries whose factor already vanishes are dropped,
/// and when none survive the series has terminated.
pub fn star_series<T: Real>(f: &Field<T>, g: &Field<T>, max_order: usize) -> Result<StarSeries<T>> {
    let mut left = DerivativeCache::new(f);
    let mut right = DerivativeCache::new(g);
    let mut kernel: BTreeMap<(Monomial, Monomial), T> = BTreeMap::new();
    kernel.insert(([0; NVARS], [0; NVARS]), T::one());

    let mut orders = Vec::new();
    let mut factorial = T::one();
    let half_i = Complex::new(T::zero(), T::of(0.5));
    let mut prefactor: C<T> = Complex::new(T::one(), T::zero());
    let mut n = 0usize;
    let exact = loop {
        kernel.retain(|(a, b), c| *c != T::zero() && !left.get(a).is_zero() && !right.get(b).is_zero());
        if kernel.is_empty() {
            break true;
        }
        if n > max_order {
            break false;
        }
        let mut term = Field::zero().with_limits(f.limits());
        for ((a, b), c) in &kernel {
            let prod = left.get(a).mul(&right.get(b))?;
            term = term.add(&prod.scale_real(*c));
        }
        let term = term.scale(prefactor / factorial);
        if term.term_count() > f.limits().max_terms {
            return Err(Error::Resource("star series term exceeds cap".into()));
        }
        orders.push(term);

        let mut next: BTreeMap<(Monomial, Monomial), T> = BTreeMap::new();
        for ((a, b), c) in &kernel {
            for nu in 0..4u8 {
                let e = next.entry((bump(a, Var::X(nu)), bump(b, Var::P(nu)))).or_insert(T::zero());
                *e = *e + *c;
                let e = next.entry((bump(a, Var::P(nu)), bump(b, Var::X(nu)))).or_insert(T::zero());
                *e = *e - *c;
            }
        }
        kernel = next;
        n += 1;
        factorial = factorial * T::of_usize(n);
        prefactor = prefactor * half_i;
    };
    Ok(StarSeries { orders, exact })
}

/// `F ⋆ G = Σ_{n ≤ N} (1/n!)(iħ/2)^n Π^n(F, G)`.
pub fn star_product<T: Real>(f: &Field<T>, g: &Field<T>, hbar: T, max_order: usize) -> Result<StarProduct<T>> {
    let s = star_series(f, g, max_order)?;
    Ok(StarProduct {
        field: s.sum(hbar),
        exact: s.exact,
        order: s.orders.len().saturating_sub(1),
    })
}

/// `⟦K, W⟧_M = (K ⋆ W − W ⋆ K)/(iħ)`.
pub fn moyal_bracket<T: Real>(k: &Field<T>, w: &Field<T>, hbar: T, max_order: usize) -> Result<StarProduct<T>> {
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(Error::InvalidInput("Moyal bracket needs finite hbar > 0".into()));
    }
    let kw = star_product(k, w, hbar, max_order)?;
    let wk = star_product(w, k, hbar, max_order)?;
    let inv = Complex::new(T::zero(), -T::one() / hbar);
    Ok(StarProduct {
        field: kw.field.sub(&wk.field).scale(inv),
        exact: kw.exact && wk.exact,
        order: kw.order.max(wk.order),
    })
}
