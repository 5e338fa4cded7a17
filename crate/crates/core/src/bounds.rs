//! Closed-form radius bounds for balls containing every bounded component
//! (T1, T3) or meeting every component (T2, T4) of real algebraic and
//! semi-algebraic sets, plus the entry-bitsize estimate for parametrized
//! multiplication matrices.
//!
//! Every radius here has the shape `sqrt(k) * A * 2^E` or `(M * 2^E)^(1/2)`,
//! so the squared radius is an exact integer. It is stored as an odd mantissa
//! times a power of two ([`Pow2Int`]) because the exponents routinely run into
//! the millions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{bit_u64, Rational};

/// Non-negative integer `mantissa * 2^exp2` with `mantissa` odd (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pow2Int {
    mantissa: BigUint,
    exp2: u64,
}

impl Pow2Int {
    pub fn new(mantissa: BigUint, exp2: u64) -> Self {
        if mantissa.is_zero() {
            return Pow2Int {
                mantissa,
                exp2: 0,
            };
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Pow2Int {
            mantissa: mantissa >> tz,
            exp2: exp2 + tz,
        }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exp2(&self) -> u64 {
        self.exp2
    }

    /// Materializes the integer. Only sensible for moderate exponents.
    pub fn to_biguint(&self) -> BigUint {
        &self.mantissa << self.exp2
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.to_biguint()))
    }

    /// `log2` of the value (`-inf` for zero).
    pub fn log2(&self) -> f64 {
        if self.mantissa.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits();
        // Keep the top 64 bits for the fractional part.
        let shift = bits.saturating_sub(64);
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(f64::MAX);
        top.log2() + shift as f64 + self.exp2 as f64
    }

    /// Exact comparison with a non-negative rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if r <= &Rational::zero() {
            return if self.mantissa.is_zero() && r.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            };
        }
        if self.mantissa.is_zero() {
            return Ordering::Less;
        }
        // Compare mantissa * 2^exp2 * den with num.
        let num = r.numer().magnitude().clone();
        let den = r.denom().magnitude().clone();
        let lhs_bits = self.mantissa.bits() + self.exp2 + den.bits();
        let rhs_bits = num.bits();
        // A product of bit-lengths a and b has bit-length a+b-1 or a+b.
        if lhs_bits > rhs_bits + 1 {
            return Ordering::Greater;
        }
        if lhs_bits + 1 < rhs_bits {
            return Ordering::Less;
        }
        ((&self.mantissa * den) << self.exp2).cmp(&num)
    }
}

impl PartialOrd for Pow2Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pow2Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa.is_zero(), other.mantissa.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let a = self.mantissa.bits() + self.exp2;
        let b = other.mantissa.bits() + other.exp2;
        if a != b {
            return a.cmp(&b);
        }
        // Same bit-length: align on the smaller exponent; the shift is bounded
        // by the mantissa lengths.
        let e = self.exp2.min(other.exp2);
        let x = &self.mantissa << (self.exp2 - e);
        let y = &other.mantissa << (other.exp2 - e);
        x.cmp(&y)
    }
}

impl fmt::Display for Pow2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exp2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Ball containing all bounded components of `Zer(Q)`.
    T1,
    /// Ball meeting every component of `Zer(Q)`.
    T2,
    /// Ball containing bounded components of every sign condition realization.
    T3,
    /// Ball meeting every component of every sign condition realization.
    T4,
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::T1 => 1,
            Theorem::T2 => 2,
            Theorem::T3 => 3,
            Theorem::T4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Theorem::T1),
            2 => Ok(Theorem::T2),
            3 => Ok(Theorem::T3),
            4 => Ok(Theorem::T4),
            _ => Err(Error::Parameter(format!("theorem must be 1..4, got {n}"))),
        }
    }
}

/// Quantities appearing in the formulas. `big_d`, `dprime`, `rho`,
/// `rhoprime`, `tauprime` only exist for the meeting bounds (T2, T4); for T4
/// `tauprime` holds the semi-algebraic variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Intermediates {
    pub n: u64,
    pub big_d: Option<u64>,
    pub dprime: Option<u64>,
    pub rho: Option<u64>,
    pub rhoprime: Option<u64>,
    pub tauprime: Option<u64>,
    /// Exponent of 2 in the unsquared (T1, T3) or squared (T2, T4) radius formula.
    pub exponent: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub k: u64,
    pub d: u64,
    pub s: Option<u64>,
    pub tau: u64,
    pub intermediates: Intermediates,
    pub radius_squared: Pow2Int,
    /// `log2` of the radius, display only.
    pub radius_log2: f64,
}

fn overflow() -> Error {
    Error::Parameter("arithmetic overflow in bound formula".into())
}

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or_else(overflow)
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or_else(overflow)
}

fn pow(a: u64, e: u64) -> Result<u64> {
    let e = u32::try_from(e).map_err(|_| overflow())?;
    a.checked_pow(e).ok_or_else(overflow)
}

fn positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        Err(Error::Parameter(format!("{name} must be >= 1")))
    } else {
        Ok(())
    }
}

fn report(
    theorem: Theorem,
    (k, d, s, tau): (u64, u64, Option<u64>, u64),
    intermediates: Intermediates,
    radius_squared: Pow2Int,
) -> BoundReport {
    let radius_log2 = radius_squared.log2() / 2.0;
    BoundReport {
        theorem,
        k,
        d,
        s,
        tau,
        intermediates,
        radius_squared,
        radius_log2,
    }
}

/// `k * (N+1)^2 * 2^(2E)` for the containing-ball shape `sqrt(k) (N+1) 2^E`.
fn containing_radius_sq(k: u64, n: u64, e: u64) -> Result<Pow2Int> {
    let np1 = BigUint::from(n) + 1u32;
    Ok(Pow2Int::new(BigUint::from(k) * &np1 * &np1, mul(2, e)?))
}

/// Ball containing every bounded component of `Zer(Q)` for `deg Q = d`,
/// coefficient bitsize `tau`, in `k` variables.
pub fn thm1_radius(k: u64, d: u64, tau: u64) -> Result<BoundReport> {
    positive("k", k)?;
    positive("d", d)?;
    positive("tau", tau)?;
    let n = mul(d + 1, pow(d, k - 1)?)?;
    let e = mul(
        mul(n, add(mul(k, d)?, 2)?)?,
        add(add(tau, bit_u64(n))?, bit_u64(d + 1))?,
    )?;
    let inter = Intermediates {
        n,
        big_d: None,
        dprime: None,
        rho: None,
        rhoprime: None,
        tauprime: None,
        exponent: e,
    };
    Ok(report(
        Theorem::T1,
        (k, d, None, tau),
        inter,
        containing_radius_sq(k, n, e)?,
    ))
}

/// `d'`, `D`, `N`, `rho`, `rho'` shared by the meeting bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeetingParams {
    pub dprime: u64,
    pub big_d: u64,
    pub n: u64,
    pub rho: u64,
    pub rhoprime: u64,
}

pub fn meeting_params(k: u64, d: u64) -> Result<MeetingParams> {
    positive("k", k)?;
    positive("d", d)?;
    let dprime = (2 * (d + 1)).max(6);
    let big_d = mul(k, dprime)? - 2 * (k - 1);
    let n = mul(dprime, pow(dprime - 1, k - 1)?)?;
    let b2d = bit_u64(add(mul(2, big_d)?, 1)?);
    let inner = add(
        add(
            add(mul(k, bit_u64(d + 1))?, bit_u64(dprime))?,
            add(1, mul(4, b2d)?)?,
        )?,
        bit_u64(n),
    )?;
    let rho = mul(big_d, inner)? - 2 * b2d;
    let rhoprime = add(
        add(mul(2 * k - 2, bit_u64(n))?, mul(k, bit_u64(k))?)?,
        add(mul(2, bit_u64(add(mul(mul(2, big_d)?, n)?, 1)?))?, 1)?,
    )?;
    Ok(MeetingParams {
        dprime,
        big_d,
        n,
        rho,
        rhoprime,
    })
}

/// `(2DN(2N-1)+1) * 2^((2N-1) t + N^2 bit(N+1))` for `t = tau'` or `tau''`.
fn meeting_radius_sq(p: &MeetingParams, t: u64) -> Result<(u64, Pow2Int)> {
    let two_n_minus_1 = mul(2, p.n)? - 1;
    let exponent = add(
        mul(two_n_minus_1, t)?,
        mul(mul(p.n, p.n)?, bit_u64(p.n + 1))?,
    )?;
    let mantissa = add(mul(mul(mul(2, p.big_d)?, p.n)?, two_n_minus_1)?, 1)?;
    Ok((exponent, Pow2Int::new(BigUint::from(mantissa), exponent)))
}

/// `tau' = 2 N D tau + N (rho + rho')`, the bitsize bound for the linear-form
/// characteristic polynomials of the meeting construction.
pub fn meeting_tauprime(p: &MeetingParams, tau: u64) -> Result<u64> {
    add(
        mul(mul(mul(2, p.n)?, p.big_d)?, tau)?,
        mul(p.n, add(p.rho, p.rhoprime)?)?,
    )
}

/// Ball meeting every component of `Zer(Q)`.
pub fn thm2_radius(k: u64, d: u64, tau: u64) -> Result<BoundReport> {
    positive("tau", tau)?;
    let p = meeting_params(k, d)?;
    let tauprime = meeting_tauprime(&p, tau)?;
    let (exponent, r2) = meeting_radius_sq(&p, tauprime)?;
    let inter = Intermediates {
        n: p.n,
        big_d: Some(p.big_d),
        dprime: Some(p.dprime),
        rho: Some(p.rho),
        rhoprime: Some(p.rhoprime),
        tauprime: Some(tauprime),
        exponent,
    };
    Ok(report(Theorem::T2, (k, d, None, tau), inter, r2))
}

/// Ball containing every bounded component of every realizable sign
/// condition on `s` polynomials.
pub fn thm3_radius(k: u64, d: u64, s: u64, tau: u64) -> Result<BoundReport> {
    positive("k", k)?;
    positive("d", d)?;
    positive("s", s)?;
    positive("tau", tau)?;
    let n = mul(2 * d + 1, pow(2 * d, k - 1)?)?;
    let inner = add(
        add(mul(2, tau)?, bit_u64(n))?,
        add(mul(k + 1, bit_u64(d + 1))?, bit_u64(s))?,
    )?;
    let e = mul(mul(n, add(mul(mul(2, k)?, d)?, 2)?)?, inner)?;
    let inter = Intermediates {
        n,
        big_d: None,
        dprime: None,
        rho: None,
        rhoprime: None,
        tauprime: None,
        exponent: e,
    };
    Ok(report(
        Theorem::T3,
        (k, d, Some(s), tau),
        inter,
        containing_radius_sq(k, n, e)?,
    ))
}

/// Bitsize bound for `sum_{P in P'} P^2`: `2 tau + k bit(d+1) + bit(s)`.
pub fn sum_of_squares_bitsize(k: u64, d: u64, s: u64, tau: u64) -> Result<u64> {
    add(add(mul(2, tau)?, mul(k, bit_u64(d + 1))?)?, bit_u64(s))
}

/// `tau'' = 2 N D (2 tau + k bit(d+1) + bit(s)) + N (rho + rho')`.
pub fn meeting_tausecond(p: &MeetingParams, k: u64, d: u64, s: u64, tau: u64) -> Result<u64> {
    meeting_tauprime(p, sum_of_squares_bitsize(k, d, s, tau)?)
}

/// Ball meeting every component of every realizable sign condition.
pub fn thm4_radius(k: u64, d: u64, s: u64, tau: u64) -> Result<BoundReport> {
    positive("s", s)?;
    positive("tau", tau)?;
    let p = meeting_params(k, d)?;
    let tausecond = meeting_tausecond(&p, k, d, s, tau)?;
    let (exponent, r2) = meeting_radius_sq(&p, tausecond)?;
    let inter = Intermediates {
        n: p.n,
        big_d: Some(p.big_d),
        dprime: Some(p.dprime),
        rho: Some(p.rho),
        rhoprime: Some(p.rhoprime),
        tauprime: Some(tausecond),
        exponent,
    };
    Ok(report(Theorem::T4, (k, d, Some(s), tau), inter, r2))
}

/// Dispatches on the theorem; `s` is required for T3/T4 and ignored otherwise.
pub fn radius(theorem: Theorem, k: u64, d: u64, tau: u64, s: Option<u64>) -> Result<BoundReport> {
    let need_s = || s.ok_or_else(|| Error::Parameter("s is required for theorems 3 and 4".into()));
    match theorem {
        Theorem::T1 => thm1_radius(k, d, tau),
        Theorem::T2 => thm2_radius(k, d, tau),
        Theorem::T3 => thm3_radius(k, d, need_s()?, tau),
        Theorem::T4 => thm4_radius(k, d, need_s()?, tau),
    }
}

/// Bitsize estimate for the entries of the multiplication matrices of a
/// parametrized special Groebner basis with degrees `degrees`, `ell`
/// parameters of degree at most `lambda`, and coefficient bitsize `tau_g`:
///
/// `D (tau_g + 2 ell bit(D lambda + 1) + bit(N)) - ell bit(D lambda + 1) - bit(N)`
/// with `D = sum d_i - k + 1` and `N = prod d_i`.
pub fn entry_bitsize_estimate(degrees: &[u64], ell: u64, lambda: u64, tau_g: u64) -> Result<u64> {
    if degrees.is_empty() {
        return Err(Error::Parameter("empty degree list".into()));
    }
    if degrees.windows(2).any(|w| w[0] < w[1]) || degrees.contains(&0) {
        return Err(Error::Parameter(
            "degrees must be non-increasing and >= 1".into(),
        ));
    }
    positive("tau_G", tau_g)?;
    let k = degrees.len() as u64;
    let big_d = degrees.iter().sum::<u64>() - k + 1;
    let n = degrees.iter().try_fold(1u64, |acc, &x| mul(acc, x))?;
    let bl = bit_u64(add(mul(big_d, lambda)?, 1)?);
    let bn = bit_u64(n);
    let total = mul(big_d, add(add(tau_g, mul(mul(2, ell)?, bl)?)?, bn)?)?;
    Ok(total - mul(ell, bl)? - bn)
}

/// Bitsize bound for the characteristic polynomials of the containing-ball
/// construction: `N (kd + 2) (tau + bit(d+1) + bit(N))`, `N = (d+1) d^(k-1)`.
pub fn thm1_charpoly_bitsize(k: u64, d: u64, tau: u64) -> Result<u64> {
    let r = thm1_radius(k, d, tau)?;
    Ok(r.intermediates.exponent)
}

/// Degree bound in the deformation parameter for the same polynomials:
/// `(k(d-1) + 2) N`.
pub fn thm1_charpoly_param_degree(k: u64, d: u64) -> Result<u64> {
    positive("k", k)?;
    positive("d", d)?;
    let n = mul(d + 1, pow(d, k - 1)?)?;
    mul(add(mul(k, d - 1)?, 2)?, n)
}

#[derive(Serialize)]
struct BoundReportJson {
    theorem: u8,
    k: u64,
    d: u64,
    s: Option<u64>,
    tau: u64,
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "D")]
    big_d: Option<u64>,
    dprime: Option<u64>,
    rho: Option<u64>,
    rhoprime: Option<u64>,
    tauprime: Option<u64>,
    radius_sq_mantissa: String,
    radius_sq_exponent2: u64,
    radius_log2: f64,
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let i = &self.intermediates;
        BoundReportJson {
            theorem: self.theorem.number(),
            k: self.k,
            d: self.d,
            s: self.s,
            tau: self.tau,
            n: i.n,
            big_d: i.big_d,
            dprime: i.dprime,
            rho: i.rho,
            rhoprime: i.rhoprime,
            tauprime: i.tauprime,
            radius_sq_mantissa: self.radius_squared.mantissa().to_string(),
            radius_sq_exponent2: self.radius_squared.exp2(),
            radius_log2: self.radius_log2,
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(m: u64, e: u64) -> Pow2Int {
        Pow2Int::new(BigUint::from(m), e)
    }

    #[test]
    fn thm1_examples() {
        let r = thm1_radius(1, 2, 2).unwrap();
        assert_eq!(r.intermediates.n, 3);
        assert_eq!(r.intermediates.exponent, 72);
        assert_eq!(r.radius_squared, p2(1, 148));
        let r = thm1_radius(2, 2, 1).unwrap();
        assert_eq!(r.intermediates.n, 6);
        assert_eq!(r.radius_squared, p2(98, 432));
        let r = thm1_radius(1, 1, 1).unwrap();
        assert_eq!(r.intermediates.n, 2);
        // radius 3 * 2^30
        assert_eq!(r.radius_squared, p2(9, 60));
    }

    #[test]
    fn thm2_examples() {
        let r = thm2_radius(1, 1, 1).unwrap();
        let i = &r.intermediates;
        assert_eq!(i.dprime, Some(6));
        assert_eq!(i.big_d, Some(6));
        assert_eq!(i.n, 6);
        assert_eq!(i.rho, Some(142));
        assert_eq!(i.rhoprime, Some(16));
        assert_eq!(i.tauprime, Some(1020));
        assert_eq!(r.radius_squared, p2(793, 11328));
        assert!((r.radius_log2 - 5668.8).abs() < 0.05);

        let r = thm2_radius(1, 1, 2).unwrap();
        assert_eq!(r.intermediates.tauprime, Some(1092));
        assert_eq!(r.radius_squared, p2(793, 12120));
    }

    #[test]
    fn thm3_examples() {
        assert_eq!(thm3_radius(1, 1, 2, 1).unwrap().radius_squared, p2(1, 244));
        assert_eq!(thm3_radius(2, 1, 3, 1).unwrap().radius_squared, p2(98, 936));
        assert_eq!(thm3_radius(1, 1, 1, 1).unwrap().intermediates.exponent, 108);
    }

    #[test]
    fn thm4_examples() {
        let r = thm4_radius(1, 1, 2, 1).unwrap();
        assert_eq!(r.intermediates.tauprime, Some(1380));
        assert_eq!(r.radius_squared, p2(793, 15288));
        let r = thm4_radius(1, 1, 1, 1).unwrap();
        assert_eq!(r.intermediates.tauprime, Some(1308));
        assert_eq!(r.intermediates.exponent, 14496);
        let a = thm4_radius(2, 2, 4, 3).unwrap();
        let b = thm4_radius(2, 2, 2, 3).unwrap();
        assert!(a.intermediates.tauprime > b.intermediates.tauprime);
    }

    #[test]
    fn entry_estimate_examples() {
        assert_eq!(entry_bitsize_estimate(&[3], 0, 0, 5).unwrap(), 19);
        assert_eq!(entry_bitsize_estimate(&[6], 2, 2, 8).unwrap(), 151);
        assert_eq!(
            entry_bitsize_estimate(&[4, 3], 0, 0, 7).unwrap(),
            entry_bitsize_estimate(&[4, 3], 0, 9, 7).unwrap()
        );
        // Matches the containing-ball display (k(d-1)+2)(tau+bit(d+1)+bit(N)) - bit(N).
        for (k, d, tau) in [(1u64, 2u64, 3u64), (2, 3, 5), (3, 2, 1)] {
            let n = (d + 1) * d.pow(k as u32 - 1);
            let mut degs = vec![d + 1];
            degs.extend(std::iter::repeat_n(d, k as usize - 1));
            let lhs = entry_bitsize_estimate(&degs, 0, 0, tau + bit_u64(d + 1)).unwrap();
            let rhs = (k * (d - 1) + 2) * (tau + bit_u64(d + 1) + bit_u64(n)) - bit_u64(n);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn meeting_entry_estimate_matches_rho_display() {
        // D (2tau + k bit(d+1) + bit(d') + 1 + 4 bit(2D+1) + bit(N)) - 2 bit(2D+1) - bit(N)
        // equals 2 D tau + rho - bit(N).
        for (k, d, tau) in [(1u64, 1u64, 1u64), (2, 1, 3), (2, 3, 2)] {
            let p = meeting_params(k, d).unwrap();
            let mut degs = vec![p.dprime];
            degs.extend(std::iter::repeat_n(p.dprime - 1, k as usize - 1));
            let tau_g = 2 * tau + k * bit_u64(d + 1) + bit_u64(p.dprime) + 1;
            let est = entry_bitsize_estimate(&degs, 2, 2, tau_g).unwrap();
            assert_eq!(est, 2 * p.big_d * tau + p.rho - bit_u64(p.n));
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(thm1_radius(0, 1, 1).is_err());
        assert!(thm2_radius(1, 0, 1).is_err());
        assert!(thm3_radius(1, 1, 0, 1).is_err());
        assert!(thm4_radius(1, 1, 1, 0).is_err());
        assert!(entry_bitsize_estimate(&[2, 3], 0, 0, 1).is_err());
        assert!(radius(Theorem::T3, 1, 1, 1, None).is_err());
    }

    #[test]
    fn pow2_ordering_and_rational_comparison() {
        assert!(p2(98, 432) > p2(1, 438));
        assert!(p2(3, 0) < p2(1, 2));
        assert_eq!(p2(4, 0), p2(1, 2));
        let r = Rational::new(25.into(), 1.into());
        assert_eq!(p2(1, 148).cmp_rational(&r), Ordering::Greater);
        assert_eq!(p2(25, 0).cmp_rational(&r), Ordering::Equal);
        let r = Rational::new(51.into(), 2.into());
        assert_eq!(p2(25, 0).cmp_rational(&r), Ordering::Less);
        assert_eq!(p2(0, 0).cmp_rational(&Rational::zero()), Ordering::Equal);
    }

    #[test]
    fn monotone_and_dominating_on_grid() {
        for k in 1..=4u64 {
            for d in 1..=6u64 {
                for tau in 1..=16u64 {
                    let t1 = thm1_radius(k, d, tau).unwrap();
                    let t2 = thm2_radius(k, d, tau).unwrap();
                    if tau > 1 {
                        assert!(t1.radius_squared >= thm1_radius(k, d, tau - 1).unwrap().radius_squared);
                        assert!(t2.radius_squared >= thm2_radius(k, d, tau - 1).unwrap().radius_squared);
                    }
                    if d > 1 {
                        assert!(t1.radius_squared >= thm1_radius(k, d - 1, tau).unwrap().radius_squared);
                        assert!(t2.radius_squared >= thm2_radius(k, d - 1, tau).unwrap().radius_squared);
                    }
                    let t3 = thm3_radius(k, d, 1, tau).unwrap();
                    assert!(t3.radius_squared >= t1.radius_squared);
                    for s in 1..=8u64 {
                        let t3 = thm3_radius(k, d, s, tau).unwrap();
                        let t4 = thm4_radius(k, d, s, tau).unwrap();
                        if s > 1 {
                            assert!(t3.radius_squared >= thm3_radius(k, d, s - 1, tau).unwrap().radius_squared);
                            assert!(t4.radius_squared >= thm4_radius(k, d, s - 1, tau).unwrap().radius_squared);
                        }
                        if tau > 1 {
                            assert!(t3.radius_squared >= thm3_radius(k, d, s, tau - 1).unwrap().radius_squared);
                            assert!(t4.radius_squared >= thm4_radius(k, d, s, tau - 1).unwrap().radius_squared);
                        }
                        if d > 1 {
                            assert!(t3.radius_squared >= thm3_radius(k, d - 1, s, tau).unwrap().radius_squared);
                            assert!(t4.radius_squared >= thm4_radius(k, d - 1, s, tau).unwrap().radius_squared);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_reports() {
        assert_eq!(thm4_radius(3, 4, 5, 6).unwrap(), thm4_radius(3, 4, 5, 6).unwrap());
    }
}
