//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded-lexicographic (total degree first, then lexicographic with the first
//! variable most significant). Iteration is therefore deterministic, and the
//! canonical text rendering lists terms from the largest monomial down.
//!
//! Binary operations accept operands over different variable lists: the
//! operands are first embedded into the union of both lists (left operand's
//! order first), so a bare constant can be combined with anything.

use std::borrow::Cow;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

/// Builds a [`Vars`] list from names.
pub fn var_list<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Number of bits of `|n|`. `bit(0)` is 1 so that the value never vanishes
/// inside a product.
pub fn bit(n: &BigInt) -> u64 {
    if n.is_zero() {
        1
    } else {
        n.bits()
    }
}

/// [`bit`] for machine integers.
pub fn bit_u64(n: u64) -> u64 {
    if n == 0 {
        1
    } else {
        64 - u64::from(n.leading_zeros())
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial {
            degree: exps.iter().sum(),
            exps,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(vars: Vars) -> Self {
        IntPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// Zero polynomial over the same variables as `self`.
    pub fn zero_like(&self) -> Self {
        IntPoly::zero(self.vars.clone())
    }

    pub fn constant(vars: Vars, c: impl Into<BigInt>) -> Self {
        let n = vars.len();
        IntPoly::monomial(vars, vec![0; n], c.into())
    }

    pub fn one(vars: Vars) -> Self {
        IntPoly::constant(vars, 1)
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn variable(vars: Vars, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        Ok(IntPoly::monomial(vars, exps, BigInt::one()))
    }

    /// `c * x^exps`; panics if the exponent vector has the wrong length.
    pub fn monomial(vars: Vars, exps: Vec<u32>, c: BigInt) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(exps), c);
        }
        IntPoly { vars, terms }
    }

    /// Sums the given terms; repeated exponent vectors accumulate.
    pub fn from_terms<I>(vars: Vars, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::ExponentLength {
                    expected: vars.len(),
                    got: exps.len(),
                });
            }
            accumulate(&mut map, Monomial::new(exps), c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(IntPoly { vars, terms: map })
    }

    fn from_map(vars: Vars, mut terms: BTreeMap<Monomial, BigInt>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        IntPoly { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn require_var(&self, name: &str) -> Result<usize> {
        self.var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree == 0)
    }

    /// Coefficient of `x^exps` (zero when absent).
    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Largest monomial under graded-lex and its coefficient.
    pub fn leading_term(&self) -> Option<(&[u32], &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (m.exponents(), c))
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[idx]).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, name: &str) -> u32 {
        self.var_index(name).map_or(0, |i| self.degree_in(i))
    }

    /// Maximum over terms of the summed exponents of the given variables.
    pub fn degree_in_vars(&self, idxs: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| idxs.iter().map(|&i| m.exps[i]).sum())
            .max()
            .unwrap_or(0)
    }

    /// Smallest exponent of variable `idx` over all terms (0 for zero).
    pub fn min_degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[idx]).min().unwrap_or(0)
    }

    /// Maximum `bit` of the coefficients; 0 for the zero polynomial.
    pub fn bitsize(&self) -> u64 {
        self.terms.values().map(bit).max().unwrap_or(0)
    }

    /// Re-expresses the polynomial over another variable list, matching
    /// variables by name. Fails if a variable that actually occurs is missing.
    pub fn with_vars(&self, vars: Vars) -> Result<Self> {
        if Arc::ptr_eq(&self.vars, &vars) || self.vars == vars {
            return Ok(IntPoly {
                vars,
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.iter().enumerate() {
            match vars.iter().position(|v| v == name) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.degree_in(i) > 0 {
                        return Err(Error::VariableInUse(name.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; vars.len()];
                for (i, &e) in m.exps.iter().enumerate() {
                    if let Some(j) = map[i] {
                        exps[j] = e;
                    }
                }
                (Monomial::new(exps), c.clone())
            })
            .collect();
        Ok(IntPoly { vars, terms })
    }

    /// Drops variable `name`, which must not occur.
    pub fn drop_var(&self, name: &str) -> Result<Self> {
        let vars: Vars = self.vars.iter().filter(|v| *v != name).cloned().collect();
        self.with_vars(vars)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        IntPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`, failing unless all divisions are exact.
    pub fn div_exact_scalar(&self, c: &BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::NotDivisible("0".into()));
        }
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return Err(Error::NotDivisible(c.to_string()));
            }
            terms.insert(m.clone(), q);
        }
        Ok(IntPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::NotDivisible("0".into()));
        }
        let (a, b) = aligned(self, d);
        let (lm, lc) = b.terms.last_key_value().expect("nonzero divisor");
        let mut rem = a.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            let fail = || Error::NotDivisible(b.to_string());
            if m.exps.iter().zip(&lm.exps).any(|(x, y)| x < y) {
                return Err(fail());
            }
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return Err(fail());
            }
            let qm = Monomial::new(m.exps.iter().zip(&lm.exps).map(|(x, y)| x - y).collect());
            for (bm, bc) in &b.terms {
                let key = qm.mul(bm);
                let v = rem.entry(key.clone()).or_insert_with(BigInt::zero);
                *v -= &qc * bc;
                if v.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qm, qc);
        }
        Ok(IntPoly {
            vars: a.vars.clone(),
            terms: quot,
        })
    }

    /// Gcd of the coefficients (non-negative; 0 for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = IntPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, idx: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[idx] > 0)
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                let e = exps[idx];
                exps[idx] -= 1;
                (Monomial::new(exps), c * BigInt::from(e))
            })
            .collect();
        IntPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn derivative_in(&self, name: &str) -> Result<Self> {
        Ok(self.partial_derivative(self.require_var(name)?))
    }

    /// Divides by `var^e`; every term must carry at least that power.
    pub fn div_var_power(&self, idx: usize, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps[idx] < e {
                return Err(Error::NotDivisible(format!("{}^{}", self.vars[idx], e)));
            }
            let mut exps = m.exps.clone();
            exps[idx] -= e;
            terms.insert(Monomial::new(exps), c.clone());
        }
        Ok(IntPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Multiplies by `var^e`.
    pub fn mul_var_power(&self, idx: usize, e: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps[idx] += e;
                (Monomial::new(exps), c.clone())
            })
            .collect();
        IntPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Keeps only the terms whose exponent in `idx` is below `prec`
    /// (reduction modulo `var^prec`).
    pub fn truncate_in(&self, idx: usize, prec: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[idx] < prec)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        IntPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Root rescaling in the `t` variable by the parameter `z`:
    /// returns `F(z, t) = z^(-c) chi(z, z t)` where `z^c` is the exact power of
    /// `z` dividing `chi(z, z t)`. For `z != 0`, `t` is a root of `F(z, .)`
    /// iff `z t` is a root of `chi(z, .)`.
    pub fn rescale_roots(&self, t: &str, z: &str) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let ti = self.require_var(t)?;
        let zi = self.require_var(z)?;
        let content = self
            .terms
            .keys()
            .map(|m| m.exps[zi] + m.exps[ti])
            .min()
            .unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps[zi] = exps[zi] + exps[ti] - content;
                (Monomial::new(exps), c.clone())
            })
            .collect();
        Ok(IntPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Substitutes an integer for `var`; the result no longer lists `var`.
    pub fn specialize(&self, var: &str, value: &BigInt) -> Result<Self> {
        let idx = self.require_var(var)?;
        let vars: Vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let mut map = BTreeMap::new();
        let mut powers: Vec<BigInt> = vec![BigInt::one()];
        for (m, c) in &self.terms {
            let e = m.exps[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut exps = m.exps.clone();
            exps.remove(idx);
            accumulate(&mut map, Monomial::new(exps), c * &powers[e]);
        }
        Ok(IntPoly::from_map(vars, map))
    }

    /// Substitutes a rational `p/q` for `var` and clears denominators by
    /// multiplying with `q^deg_var(self)` (a positive factor).
    pub fn specialize_rational(&self, var: &str, value: &Rational) -> Result<Self> {
        let idx = self.require_var(var)?;
        let deg = self.degree_in(idx);
        let num = value.numer();
        let den = value.denom();
        let vars: Vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps[idx];
            let factor = num_traits::pow(num.clone(), e as usize)
                * num_traits::pow(den.clone(), (deg - e) as usize);
            let mut exps = m.exps.clone();
            exps.remove(idx);
            accumulate(&mut map, Monomial::new(exps), c * factor);
        }
        Ok(IntPoly::from_map(vars, map))
    }

    /// Dense coefficient list in variable `idx`: entry `e` is the coefficient
    /// of `var^e`, as a polynomial over the remaining variables.
    pub fn coefficients_in(&self, idx: usize) -> Vec<IntPoly> {
        let vars: Vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let deg = self.degree_in(idx) as usize;
        let mut maps: Vec<BTreeMap<Monomial, BigInt>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exps[idx] as usize;
            let mut exps = m.exps.clone();
            exps.remove(idx);
            maps[e].insert(Monomial::new(exps), c.clone());
        }
        if self.is_zero() {
            return vec![IntPoly::zero(vars)];
        }
        maps.into_iter()
            .map(|terms| IntPoly {
                vars: vars.clone(),
                terms,
            })
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in): `sum coeffs[e] * var^e`,
    /// with `var` appended to the coefficient variables.
    pub fn from_coefficients(coeffs: &[IntPoly], var: &str) -> Result<Self> {
        let mut base: Vec<String> = Vec::new();
        for c in coeffs {
            for v in c.vars.iter() {
                if !base.contains(v) {
                    base.push(v.clone());
                }
            }
        }
        if base.iter().any(|v| v == var) {
            return Err(Error::VariableInUse(var.to_string()));
        }
        let coeff_vars: Vars = base.iter().cloned().collect();
        base.push(var.to_string());
        let vars: Vars = base.into_iter().collect();
        let mut terms = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            let c = c.with_vars(coeff_vars.clone())?;
            for (m, a) in c.terms {
                let mut exps = m.exps;
                exps.push(e as u32);
                terms.insert(Monomial::new(exps), a);
            }
        }
        Ok(IntPoly { vars, terms })
    }

    /// Dense integer coefficients (ascending) of a polynomial in which at most
    /// one variable occurs. Returns the variable name too, if any occurs.
    pub fn to_univariate(&self) -> Result<(Option<String>, Vec<BigInt>)> {
        let used: Vec<usize> = (0..self.nvars()).filter(|&i| self.degree_in(i) > 0).collect();
        match used.as_slice() {
            [] => Ok((None, vec![self.constant_term()])),
            [i] => {
                let deg = self.degree_in(*i) as usize;
                let mut out = vec![BigInt::zero(); deg + 1];
                for (m, c) in &self.terms {
                    out[m.exps[*i] as usize] = c.clone();
                }
                Ok((Some(self.vars[*i].clone()), out))
            }
            _ => Err(Error::NotUnivariate(self.to_string())),
        }
    }

    /// Builds `sum coeffs[e] * var^e` over the single variable `var`.
    pub fn from_univariate(var: &str, coeffs: &[BigInt]) -> Self {
        let vars = var_list(&[var]);
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial::new(vec![e as u32]), c.clone()))
            .collect();
        IntPoly { vars, terms }
    }

    /// Floating-point evaluation (display and grid oracles only).
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(&m.exps) {
                    if e > 0 {
                        v *= x.powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = Rational::from_integer(c.clone());
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    /// Accumulates `c * other` into `self`.
    pub fn add_scaled(&mut self, other: &IntPoly, c: &BigInt) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        if !(Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars) {
            *self = &*self + &other.scale(c);
            return;
        }
        for (m, a) in &other.terms {
            accumulate(&mut self.terms, m.clone(), a * c);
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Parses the canonical text form, e.g. `zeta*X1^3 + 3*X1^2 - 12`.
    pub fn parse<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Self> {
        let vars = var_list(vars);
        parse::parse(text, vars)
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    match map.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
    }
}

fn aligned<'a>(a: &'a IntPoly, b: &'a IntPoly) -> (Cow<'a, IntPoly>, Cow<'a, IntPoly>) {
    if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
        return (Cow::Borrowed(a), Cow::Borrowed(b));
    }
    let mut merged: Vec<String> = a.vars.to_vec();
    for v in b.vars.iter() {
        if !merged.contains(v) {
            merged.push(v.clone());
        }
    }
    let merged: Vars = merged.into();
    // Embedding into a superset cannot fail.
    let a2 = a.with_vars(merged.clone()).expect("superset embedding");
    let b2 = b.with_vars(merged).expect("superset embedding");
    (Cow::Owned(a2), Cow::Owned(b2))
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &'a IntPoly) -> IntPoly {
        let (a, b) = aligned(self, rhs);
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        IntPoly::from_map(a.vars.clone(), terms)
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &'a IntPoly) -> IntPoly {
        let (a, b) = aligned(self, rhs);
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            accumulate(&mut terms, m.clone(), -c);
        }
        IntPoly::from_map(a.vars.clone(), terms)
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &'a IntPoly) -> IntPoly {
        let (a, b) = aligned(self, rhs);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                accumulate(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        IntPoly::from_map(a.vars.clone(), terms)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(mut self) -> IntPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &'a IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<IntPoly> for &'a IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if m.degree == 0 || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in self.vars.iter().zip(&m.exps) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{}]({})", self.vars.join(","), self)
    }
}

mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(BigInt),
        Ident(String),
        Plus,
        Minus,
        Star,
        Caret,
    }

    fn lex(text: &str) -> Result<Vec<Tok>> {
        let mut out = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                _ if c.is_whitespace() => i += 1,
                '+' => {
                    out.push(Tok::Plus);
                    i += 1
                }
                '-' => {
                    out.push(Tok::Minus);
                    i += 1
                }
                '*' => {
                    out.push(Tok::Star);
                    i += 1
                }
                '^' => {
                    out.push(Tok::Caret);
                    i += 1
                }
                _ if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(s.clone()))?));
                }
                _ if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    out.push(Tok::Ident(chars[start..i].iter().collect()));
                }
                _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
            }
        }
        Ok(out)
    }

    pub(super) fn parse(text: &str, vars: Vars) -> Result<IntPoly> {
        let toks = lex(text)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut pos = 0;
        let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
        loop {
            let mut sign = BigInt::one();
            while let Some(t) = toks.get(pos) {
                match t {
                    Tok::Plus => pos += 1,
                    Tok::Minus => {
                        sign = -sign;
                        pos += 1
                    }
                    _ => break,
                }
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; vars.len()];
            loop {
                match toks.get(pos) {
                    Some(Tok::Num(n)) => {
                        coeff *= n;
                        pos += 1;
                    }
                    Some(Tok::Ident(name)) => {
                        let idx = vars
                            .iter()
                            .position(|v| v == name)
                            .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                        pos += 1;
                        let mut e = 1u32;
                        if toks.get(pos) == Some(&Tok::Caret) {
                            pos += 1;
                            match toks.get(pos) {
                                Some(Tok::Num(n)) => {
                                    e = n.to_u32().ok_or_else(|| {
                                        Error::Parse(format!("exponent {n} too large"))
                                    })?;
                                    pos += 1;
                                }
                                _ => return Err(Error::Parse("expected exponent".into())),
                            }
                        }
                        exps[idx] += e;
                    }
                    _ => return Err(Error::Parse(format!("expected factor at token {pos}"))),
                }
                if toks.get(pos) == Some(&Tok::Star) {
                    pos += 1;
                } else {
                    break;
                }
            }
            terms.push((exps, coeff));
            match toks.get(pos) {
                None => break,
                Some(Tok::Plus) | Some(Tok::Minus) => {}
                Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
            }
        }
        IntPoly::from_terms(vars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, vars: &[&str]) -> IntPoly {
        IntPoly::parse(text, vars).unwrap()
    }

    #[test]
    fn bit_values() {
        assert_eq!(bit(&BigInt::from(1)), 1);
        assert_eq!(bit(&BigInt::from(6)), 3);
        assert_eq!(bit(&BigInt::from(73)), 7);
        assert_eq!(bit(&BigInt::from(-73)), 7);
        assert_eq!(bit(&BigInt::from(0)), 1);
        assert_eq!(bit_u64(0), 1);
        assert_eq!(bit_u64(64), 7);
        assert_eq!(bit_u64(63), 6);
    }

    #[test]
    fn bitsize_values() {
        assert_eq!(p("X1^2 - 4", &["X1"]).bitsize(), 3);
        assert_eq!(IntPoly::zero(var_list(&["X1"])).bitsize(), 0);
        assert_eq!(p("12*zeta^2 - 3", &["zeta"]).bitsize(), 4);
    }

    #[test]
    fn partial_derivatives() {
        let q = p("X1^2 - 4", &["X1", "X2"]);
        assert_eq!(q.partial_derivative(0), p("2*X1", &["X1", "X2"]));
        assert!(q.partial_derivative(1).is_zero());
        let vars = ["X1", "zeta"];
        let f = p("3*X1^2 - 12 + zeta*X1^3", &vars);
        assert_eq!(f.partial_derivative(0), p("6*X1 + 3*zeta*X1^2", &vars));
    }

    #[test]
    fn rescale_examples() {
        let vars = ["zeta", "T"];
        let chi = p("T^3 + 3*T^2 - 12*zeta^2", &vars);
        assert_eq!(
            chi.rescale_roots("T", "zeta").unwrap(),
            p("zeta*T^3 + 3*T^2 - 12", &vars)
        );
        let chi = p("T", &vars);
        assert_eq!(chi.rescale_roots("T", "zeta").unwrap(), p("T", &vars));
        let vars = ["Y", "Z", "T"];
        let chi = p("T^2 + Y*T + Z", &vars);
        assert_eq!(
            chi.rescale_roots("T", "Z").unwrap(),
            p("Z*T^2 + Y*T + 1", &vars)
        );
        assert_eq!(
            IntPoly::zero(var_list(&vars)).rescale_roots("T", "Z"),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn specialize_examples() {
        let f = p("zeta*T^3 + 3*T^2 - 12", &["zeta", "T"]);
        assert_eq!(
            f.specialize("zeta", &BigInt::zero()).unwrap(),
            p("3*T^2 - 12", &["T"])
        );
        let f = p("T^2 + Y*T + Z", &["Y", "Z", "T"]);
        assert_eq!(
            f.specialize("Z", &BigInt::zero()).unwrap(),
            p("T^2 + Y*T", &["Y", "T"])
        );
        let f = p("eps*T - 1", &["eps", "T"]);
        assert_eq!(
            f.specialize("eps", &BigInt::one()).unwrap(),
            p("T - 1", &["T"])
        );
        // 2x^2 - 1 at x = 1/2, scaled by 2^2: 2 - 4
        let f = p("2*x^2 - 1", &["x"]);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            f.specialize_rational("x", &half).unwrap().constant_term(),
            BigInt::from(-2)
        );
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let vars = ["X1", "X2", "zeta"];
        let f = p("zeta*X1^3 - X1*X2 + 3*X1^2 - 12 + X2", &vars);
        let text = f.to_string();
        assert_eq!(text, "X1^3*zeta + 3*X1^2 - X1*X2 + X2 - 12");
        assert_eq!(p(&text, &vars), f);
        assert_eq!(IntPoly::zero(var_list(&vars)).to_string(), "0");
        assert_eq!(p("-1", &vars).to_string(), "-1");
    }

    #[test]
    fn mixed_variable_lists_unify() {
        let a = p("X1 + 1", &["X1"]);
        let b = p("zeta", &["zeta"]);
        let s = &a + &b;
        assert_eq!(s.vars().as_ref(), &["X1".to_string(), "zeta".to_string()]);
        assert_eq!(s, p("X1 + zeta + 1", &["X1", "zeta"]));
        let c = IntPoly::constant(var_list::<&str>(&[]), 5);
        assert_eq!(&c * &a, p("5*X1 + 5", &["X1"]));
    }

    #[test]
    fn coefficient_views() {
        let vars = ["eps", "T"];
        let f = p("eps*T^2 - T + eps^2 + 3", &vars);
        let cs = f.coefficients_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], p("eps^2 + 3", &["eps"]));
        assert_eq!(cs[1], p("-1", &["eps"]));
        assert_eq!(cs[2], p("eps", &["eps"]));
        assert_eq!(IntPoly::from_coefficients(&cs, "T").unwrap(), f);
        let (v, dense) = p("T^2 - 2", &["eps", "T"]).to_univariate().unwrap();
        assert_eq!(v.as_deref(), Some("T"));
        assert_eq!(dense, vec![BigInt::from(-2), BigInt::zero(), BigInt::one()]);
        assert!(f.to_univariate().is_err());
    }

    #[test]
    fn graded_lex_monomial_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![0, 2]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -20i64..20), 0..6).prop_map(|ts| {
            IntPoly::from_terms(
                var_list(&["x", "y", "z"]),
                ts.into_iter()
                    .map(|((a, b, c), k)| (vec![a, b, c], BigInt::from(k))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn exact_division(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a.clone());
            let bumped = &(&a * &b) + &IntPoly::constant(a.vars().clone(), 1);
            if let Ok(q) = bumped.div_exact(&b) {
                prop_assert_eq!(&q * &b, bumped);
            }
        }

        #[test]
        fn product_rule(a in small_poly(), b in small_poly(), i in 0usize..3) {
            let lhs = (&a * &b).partial_derivative(i);
            let rhs = &a * &b.partial_derivative(i) + &b * &a.partial_derivative(i);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_bitsize(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let m = a.num_terms().min(b.num_terms()) as u64;
            prop_assert!((&a * &b).bitsize() <= a.bitsize() + b.bitsize() + bit_u64(m));
        }

        #[test]
        fn parse_display_roundtrip(a in small_poly()) {
            prop_assert_eq!(IntPoly::parse(&a.to_string(), &["x", "y", "z"]).unwrap(), a);
        }

        #[test]
        fn rescale_root_correspondence(
            roots in prop::collection::vec(-5i64..5, 1..4),
            z in prop_oneof![-7i64..-1, 1i64..7],
            zd in 1i64..4,
            t in -6i64..6,
        ) {
            // chi = prod (T - zeta r_i); roots of F(z, .) are exactly the r_i.
            let vars = var_list(&["zeta", "T"]);
            let mut chi = IntPoly::one(vars.clone());
            for r in &roots {
                let f = IntPoly::from_terms(vars.clone(), [
                    (vec![0, 1], BigInt::one()),
                    (vec![1, 0], BigInt::from(-r)),
                ]).unwrap();
                chi = &chi * &f;
            }
            let f = chi.rescale_roots("T", "zeta").unwrap();
            let zr = Rational::new(z.into(), zd.into());
            let tr = Rational::from_integer(t.into());
            let chi_val = chi.eval_rational(&[zr.clone(), &zr * &tr]);
            let f_val = f.eval_rational(&[zr, tr]);
            prop_assert_eq!(chi_val.is_zero(), f_val.is_zero());
            prop_assert_eq!(f_val.is_zero(), roots.contains(&t));
        }
    }
}
