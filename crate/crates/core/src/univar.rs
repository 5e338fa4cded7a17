//! Univariate tools: Cauchy bounds, subresultants, real root isolation and
//! lower bounds on positive roots.
//!
//! Dense coefficient vectors are ascending (`a[i]` multiplies `T^i`).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::PolyMatrix;
use crate::poly::{IntPoly, Rational, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: u32,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Largest absolute value over the closed interval.
    pub fn max_abs(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{{{}}}x{}", self.lo, self.multiplicity)
        } else {
            write!(f, "({}, {})x{}", self.lo, self.hi, self.multiplicity)
        }
    }
}

impl Serialize for IsolatingInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IsolatingInterval", 3)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

/// Integer coefficients of a polynomial in at most one variable, without
/// trailing zeros. Zero input is an error.
pub fn dense(f: &IntPoly) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (_, mut c) = f.to_univariate()?;
    trim(&mut c);
    Ok(c)
}

fn trim<T: Zero>(a: &mut Vec<T>) {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

/// `sum |a_i| / |a_p|`; strictly exceeds the modulus of every root of a
/// polynomial with a nonzero constant term.
pub fn cauchy_bound(f: &IntPoly) -> Result<Rational> {
    cauchy_bound_dense(&dense(f)?)
}

pub fn cauchy_bound_dense(a: &[BigInt]) -> Result<Rational> {
    let mut a = a.to_vec();
    trim(&mut a);
    if a.iter().all(Zero::is_zero) {
        return Err(Error::ZeroInput);
    }
    if a.len() == 1 {
        return Err(Error::Precondition("Cauchy bound of a constant".into()));
    }
    let sum: BigInt = a.iter().map(Signed::abs).sum();
    Ok(Rational::new(sum, a.last().unwrap().abs()))
}

/// Number of sign changes in the coefficient sequence, zeros skipped.
pub fn sign_variations(a: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for c in a {
        let s = match c.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => continue,
        };
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Subresultant polynomials `sRes_j(f, g)` in `t` for `j = 0 .. deg g - 1`.
///
/// `sRes_j` is the determinantal polynomial of the matrix whose rows are
/// `T^{q-j-1} f, ..., f, T^{p-j-1} g, ..., g` (columns by decreasing power),
/// so `sRes_0` is the plain Sylvester determinant.
pub fn subresultants(f: &IntPoly, g: &IntPoly, t: &str) -> Result<Vec<IntPoly>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut names: Vec<String> = Vec::new();
    for v in f.vars().iter().chain(g.vars().iter()) {
        if v != t && !names.contains(v) {
            names.push(v.clone());
        }
    }
    names.push(t.to_string());
    let full: Vars = names.into();
    let ti = full.len() - 1;
    let f = f.with_vars(full.clone())?;
    let g = g.with_vars(full.clone())?;
    let fc = f.coefficients_in(ti);
    let gc = g.coefficients_in(ti);
    let p = fc.len() - 1;
    let q = gc.len() - 1;
    if p < q {
        return Err(Error::Precondition(format!("deg f = {p} < deg g = {q}")));
    }
    let coeff_vars: Vars = full[..ti].iter().cloned().collect();
    let zero = IntPoly::zero(coeff_vars);
    let mut out = Vec::with_capacity(q);
    for j in 0..q {
        let m = p + q - 2 * j;
        let top = p + q - j - 1;
        let mut rows: Vec<(usize, &Vec<IntPoly>, &IntPoly)> = Vec::with_capacity(m);
        for r in 0..q - j {
            rows.push((q - j - 1 - r, &fc, &f));
        }
        for r in 0..p - j {
            rows.push((p - j - 1 - r, &gc, &g));
        }
        let mut entries = Vec::with_capacity(m * m);
        for (shift, coeffs, poly) in rows {
            for col in 0..m - 1 {
                let e = top - col;
                let c = if e >= shift && e - shift < coeffs.len() {
                    coeffs[e - shift].clone()
                } else {
                    zero.clone()
                };
                entries.push(c.with_vars(full.clone())?);
            }
            entries.push(poly.mul_var_power(ti, shift as u32));
        }
        let mat = PolyMatrix::with_vars(m, m, full.clone(), entries)?;
        out.push(linalg::determinant(&mat)?);
    }
    Ok(out)
}

/// Principal subresultant coefficients `psc_j(f, g)` in `t`, `j = 0 ..= deg g`,
/// as polynomials in the remaining variables, up to sign. Needs
/// `deg f >= deg g`.
///
/// Uses the subresultant pseudo-remainder sequence, so only exact divisions
/// in the coefficient ring occur; indices skipped by a degree drop get 0.
pub fn principal_subresultant_coefficients(f: &IntPoly, g: &IntPoly, t: &str) -> Result<Vec<IntPoly>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut names: Vec<String> = Vec::new();
    for v in f.vars().iter().chain(g.vars().iter()) {
        if v != t && !names.contains(v) {
            names.push(v.clone());
        }
    }
    names.push(t.to_string());
    let full: Vars = names.into();
    let ti = full.len() - 1;
    let a = f.with_vars(full.clone())?.coefficients_in(ti);
    let b = g.with_vars(full.clone())?.coefficients_in(ti);
    let (p, q) = (a.len() - 1, b.len() - 1);
    if p < q {
        return Err(Error::Precondition(format!("deg f = {p} < deg g = {q}")));
    }
    let zero = a[0].zero_like();
    let mut out = vec![zero.clone(); q + 1];

    // r_{i-1}, r_i; psi is the previous principal coefficient.
    let mut prev = a;
    let mut cur = b;
    let mut psi = -IntPoly::one(zero.vars().clone());
    let mut delta = p - q;
    let mut beta = if delta % 2 == 0 { psi.clone() } else { -psi.clone() };
    loop {
        let lc = cur.last().expect("nonempty").clone();
        // psi_{i+1} = (-lc)^delta / psi^(delta - 1)
        let neg = -&lc;
        let next_psi = if delta == 0 {
            psi.clone()
        } else {
            neg.pow(delta as u32).div_exact(&psi.pow(delta as u32 - 1))?
        };
        let deg = cur.len() - 1;
        out[deg] = next_psi.clone();
        if deg == 0 {
            break;
        }
        let mut r = prem(&prev, &cur);
        if r.iter().all(IntPoly::is_zero) {
            break;
        }
        for c in r.iter_mut() {
            *c = c.div_exact(&beta)?;
        }
        let next_delta = deg - (r.len() - 1);
        beta = &neg * &next_psi.pow(next_delta as u32);
        psi = next_psi;
        delta = next_delta;
        prev = cur;
        cur = r;
    }
    Ok(out)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b` on dense coefficient
/// vectors, trimmed.
fn prem(a: &[IntPoly], b: &[IntPoly]) -> Vec<IntPoly> {
    let q = b.len() - 1;
    let lb = &b[q];
    let mut r = a.to_vec();
    let mut e = a.len() - q;
    while r.len() > q {
        let top = r.len() - 1;
        let lr = r[top].clone();
        let shift = top - q;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&lr * bc);
        }
        r.pop();
        e -= 1;
        while r.len() > 1 && r.last().is_some_and(IntPoly::is_zero) {
            r.pop();
        }
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers (squarefree decomposition).

type RPoly = Vec<Rational>;

fn to_rpoly(a: &[BigInt]) -> RPoly {
    a.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn rtrim(a: &mut RPoly) {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

fn rderiv(a: &RPoly) -> RPoly {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn rdivrem(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let mut r = a.clone();
    rtrim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let lb = &b[db];
    let mut q = vec![Rational::zero(); r.len() - db];
    for shift in (0..r.len() - db).rev() {
        let c = &r[shift + db] / lb;
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[i + shift] -= &c * bc;
            }
        }
        q[shift] = c;
    }
    r.truncate(db.max(1));
    rtrim(&mut r);
    (q, r)
}

fn rmonic(a: &RPoly) -> RPoly {
    let l = a.last().unwrap().clone();
    a.iter().map(|c| c / &l).collect()
}

fn rgcd(a: &RPoly, b: &RPoly) -> RPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    rtrim(&mut x);
    rtrim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = rdivrem(&x, &y);
        x = y;
        y = r;
    }
    rmonic(&x)
}

fn rsub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let mut out: RPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    rtrim(&mut out);
    out
}

/// Primitive integer multiple with positive leading coefficient.
fn primitive(a: &RPoly) -> Vec<BigInt> {
    let den = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut ints: Vec<BigInt> = a.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    trim(&mut ints);
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(Signed::is_negative) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

/// Yun's decomposition of a polynomial with nonzero constant term:
/// returns `(squarefree part, [(factor, multiplicity)])`, all primitive.
fn squarefree_decomposition(a: &[BigInt]) -> (Vec<BigInt>, Vec<(Vec<BigInt>, u32)>) {
    let f = to_rpoly(a);
    let df = rderiv(&f);
    let g = rgcd(&f, &df);
    let mut b = rdivrem(&f, &g).0;
    let c = rdivrem(&df, &g).0;
    let sqf = primitive(&b);
    let mut d = rsub(&c, &rderiv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a_i = rgcd(&b, &d);
        let next_b = rdivrem(&b, &a_i).0;
        let cc = rdivrem(&d, &a_i).0;
        if a_i.len() > 1 {
            out.push((primitive(&a_i), i));
        }
        d = rsub(&cc, &rderiv(&next_b));
        b = next_b;
        i += 1;
    }
    (sqf, out)
}

// ---------------------------------------------------------------------------
// Descartes bisection on (0, 1).

fn taylor_shift_one(p: &[BigInt]) -> Vec<BigInt> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

/// `2^n p(x/2)`.
fn halve(p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    p.iter().enumerate().map(|(i, c)| c << (n - i)).collect()
}

/// Sign variations of `(x+1)^n p(1/(x+1))`: bounds the roots in `(0, 1)`.
fn unit_variations(p: &[BigInt]) -> usize {
    let rev: Vec<BigInt> = p.iter().rev().cloned().collect();
    sign_variations(&taylor_shift_one(&rev))
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Sign of `a` at a rational point.
fn sign_at(a: &[BigInt], x: &Rational) -> i8 {
    let n = a.len() - 1;
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut pp = BigInt::one();
    let mut qpows: Vec<BigInt> = vec![BigInt::one(); n + 1];
    for i in 1..=n {
        qpows[i] = &qpows[i - 1] * q;
    }
    for (i, c) in a.iter().enumerate() {
        acc += c * &pp * &qpows[n - i];
        pp *= p;
    }
    sign_of(&acc)
}

/// A root of the squarefree polynomial located on one side of the origin:
/// either exact or inside `side * 2^e * (c, c+1) / 2^k`, where `p` is the
/// polynomial transported to `(0, 1)`.
#[derive(Clone, Debug)]
enum Piece {
    Exact(Rational),
    Open {
        p: Vec<BigInt>,
        c: BigInt,
        k: u32,
        e: u32,
        negative: bool,
    },
}

impl Piece {
    fn bounds(&self) -> (Rational, Rational) {
        match self {
            Piece::Exact(r) => (r.clone(), r.clone()),
            Piece::Open { c, k, e, negative, .. } => {
                let den = BigInt::one() << *k;
                let scale = BigInt::one() << *e;
                let lo = Rational::new(c * &scale, den.clone());
                let hi = Rational::new((c + 1u32) * &scale, den);
                if *negative {
                    (-hi, -lo)
                } else {
                    (lo, hi)
                }
            }
        }
    }

    fn point(c: &BigInt, k: u32, e: u32, negative: bool) -> Rational {
        let r = Rational::new(c << e, BigInt::one() << k);
        if negative {
            -r
        } else {
            r
        }
    }

    /// One bisection step keeping the half that holds the root.
    fn bisect(&mut self) {
        let Piece::Open { p, c, k, e, negative } = self else {
            return;
        };
        let left = halve(p);
        let right = taylor_shift_one(&left);
        let mid = sign_of(&right[0]);
        if mid == 0 {
            let cc: BigInt = &*c * 2u32 + 1u32;
            *self = Piece::Exact(Piece::point(&cc, *k + 1, *e, *negative));
            return;
        }
        let near_zero = p.iter().map(sign_of).find(|s| *s != 0).unwrap_or(0);
        if near_zero != mid {
            *p = left;
            *c = &*c * 2u32;
        } else {
            *p = right;
            *c = &*c * 2u32 + 1u32;
        }
        *k += 1;
    }

    fn endpoint_is_root(&self) -> bool {
        match self {
            Piece::Exact(_) => false,
            Piece::Open { p, .. } => p[0].is_zero() || p.iter().sum::<BigInt>().is_zero(),
        }
    }

    fn width_log2(&self) -> Option<i64> {
        match self {
            Piece::Exact(_) => None,
            Piece::Open { k, e, .. } => Some(*e as i64 - *k as i64),
        }
    }
}

/// Smallest exponent `e` with `2^e >= r` (`r > 0`).
fn ceil_log2(r: &Rational) -> u32 {
    let c = r.ceil().to_integer();
    let b = c.bits() as u32;
    if (BigInt::one() << (b.saturating_sub(1))) == c {
        b.saturating_sub(1)
    } else {
        b
    }
}

/// Roots of a squarefree `s` with `s(0) != 0` in `(0, inf)`.
fn positive_pieces(s: &[BigInt], negative: bool) -> Vec<Piece> {
    let e = ceil_log2(&cauchy_bound_dense(s).expect("positive degree"));
    let p: Vec<BigInt> = s.iter().enumerate().map(|(i, c)| c << (e as usize * i)).collect();
    let mut out = Vec::new();
    let mut stack = vec![(p, BigInt::zero(), 0u32)];
    while let Some((p, c, k)) = stack.pop() {
        match unit_variations(&p) {
            0 => {}
            1 => out.push(Piece::Open { p, c, k, e, negative }),
            _ => {
                let left = halve(&p);
                let mut right = taylor_shift_one(&left);
                let cr: BigInt = &c * 2u32 + 1u32;
                if right[0].is_zero() {
                    out.push(Piece::Exact(Piece::point(&cr, k + 1, e, negative)));
                    right.remove(0);
                }
                stack.push((right, cr, k + 1));
                stack.push((left, c * 2u32, k + 1));
            }
        }
    }
    out
}

fn pieces_of(s: &[BigInt]) -> Vec<Piece> {
    if s.len() < 2 {
        return Vec::new();
    }
    let mut out = positive_pieces(s, false);
    let reflected: Vec<BigInt> = s
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    out.extend(positive_pieces(&reflected, true));
    out
}

/// Simplest rational (smallest denominator) in the open interval
/// `(lo, hi)`, `0 <= lo`; `hi = None` means infinity.
fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if hi.is_none_or(|h| next < *h) {
        return next;
    }
    let hi = hi.unwrap();
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inv_lo = if lo_f.is_zero() { None } else { Some(lo_f.recip()) };
    let inner = simplest_between(&hi_f.recip(), inv_lo.as_ref());
    fl + inner.recip()
}

/// Removes the root at zero: returns its multiplicity and the quotient.
fn split_zero_root(a: &[BigInt]) -> (u32, Vec<BigInt>) {
    let m = a.iter().take_while(|c| c.is_zero()).count();
    (m as u32, a[m..].to_vec())
}

/// Isolates the real roots of a nonzero univariate integer polynomial.
/// Rational roots are returned as exact points.
pub fn isolate_real_roots(f: &IntPoly) -> Result<Vec<IsolatingInterval>> {
    isolate_real_roots_dense(&dense(f)?)
}

pub fn isolate_real_roots_dense(a: &[BigInt]) -> Result<Vec<IsolatingInterval>> {
    let mut a = a.to_vec();
    trim(&mut a);
    if a.iter().all(Zero::is_zero) {
        return Err(Error::ZeroInput);
    }
    let (m0, rest) = split_zero_root(&a);
    let mut out = Vec::new();
    if m0 > 0 {
        out.push(IsolatingInterval {
            lo: Rational::zero(),
            hi: Rational::zero(),
            multiplicity: m0,
        });
    }
    if rest.len() > 1 {
        let (sqf, factors) = squarefree_decomposition(&rest);
        let lc = sqf.last().unwrap().abs();
        // distinct rationals with denominators dividing lc are 1/lc^2 apart
        let target = -(2 * lc.bits() as i64) - 1;
        for mut piece in pieces_of(&sqf) {
            while piece.endpoint_is_root() || piece.width_log2().is_some_and(|w| w > target) {
                piece.bisect();
            }
            if let Piece::Open { negative, .. } = &piece {
                let (lo, hi) = piece.bounds();
                let cand = if *negative {
                    -simplest_between(&-&hi, Some(&-&lo))
                } else {
                    simplest_between(&lo, Some(&hi))
                };
                if sign_at(&sqf, &cand) == 0 {
                    piece = Piece::Exact(cand);
                }
            }
            let (lo, hi) = piece.bounds();
            let multiplicity = factors
                .iter()
                .find(|(fac, _)| {
                    if lo == hi {
                        sign_at(fac, &lo) == 0
                    } else {
                        sign_at(fac, &lo) != sign_at(fac, &hi)
                    }
                })
                .map(|(_, m)| *m)
                .expect("every root belongs to one squarefree factor");
            out.push(IsolatingInterval { lo, hi, multiplicity });
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Number of distinct real roots.
pub fn count_real_roots(f: &IntPoly) -> Result<usize> {
    count_real_roots_dense(&dense(f)?)
}

pub fn count_real_roots_dense(a: &[BigInt]) -> Result<usize> {
    let mut a = a.to_vec();
    trim(&mut a);
    if a.iter().all(Zero::is_zero) {
        return Err(Error::ZeroInput);
    }
    let (m0, rest) = split_zero_root(&a);
    let mut n = usize::from(m0 > 0);
    if rest.len() > 1 {
        let (sqf, _) = squarefree_decomposition(&rest);
        n += pieces_of(&sqf).len();
    }
    Ok(n)
}

/// A positive rational strictly below every positive root of every nonzero
/// member. Members without positive roots are ignored; if nothing
/// constrains the bound, returns 1.
pub fn positive_root_lower_bound(polys: &[IntPoly]) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    let mut any = false;
    for f in polys {
        if f.is_zero() {
            continue;
        }
        any = true;
        let a = dense(f)?;
        let (_, rest) = split_zero_root(&a);
        if rest.len() < 2 || sign_variations(&rest) == 0 {
            continue;
        }
        let rev: Vec<BigInt> = rest.iter().rev().cloned().collect();
        let r = cauchy_bound_dense(&rev)?.recip();
        best = Some(match best {
            Some(b) if b <= r => b,
            _ => r,
        });
    }
    if !any {
        return Err(Error::ZeroInput);
    }
    Ok(best.unwrap_or_else(|| Rational::from_integer(BigInt::from(2))) / Rational::from_integer(BigInt::from(2)))
}

/// Exact comparison of a squared radius against `r^2`.
pub fn square_le(r: &Rational, radius_sq: &Rational) -> bool {
    (r * r).cmp(radius_sq) != Ordering::Greater
}
