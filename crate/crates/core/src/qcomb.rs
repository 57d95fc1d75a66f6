//! Exact integers and rationals, and the Gaussian binomial coefficients.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count. Serializes as a decimal string.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Converts a signed value, failing if it is negative.
    pub fn try_from_bigint(v: BigInt, context: &str) -> Result<Self> {
        match v.sign() {
            Sign::Minus => Err(Error::Mismatch(format!(
                "{context} produced negative value {v}"
            ))),
            _ => Ok(Count(v.magnitude().clone())),
        }
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl FromStr for Count {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BigUint::from_str(s)
            .map(Count)
            .map_err(|_| Error::domain(format!("{s:?} is not a nonnegative decimal integer")))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for &'a Count {
    type Output = Count;
    fn add(self, rhs: &Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Count> for Count {
    fn add_assign(&mut self, rhs: &Count) {
        self.0 += &rhs.0;
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl std::iter::Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Count> for Count {
    fn sum<I: Iterator<Item = &'a Count>>(iter: I) -> Count {
        iter.fold(Count::zero(), |mut a, b| {
            a += b;
            a
        })
    }
}

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("rational with zero denominator"));
        }
        Ok(Ratio(BigRational::new(numer.into(), denom)))
    }

    pub fn integer(v: impl Into<BigInt>) -> Self {
        Ratio(BigRational::from_integer(v.into()))
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Converts to a count, failing loudly unless the value is a
    /// nonnegative integer.
    pub fn into_count(self, context: &str) -> Result<Count> {
        if !self.0.is_integer() {
            return Err(Error::Integrality {
                numerator: self.0.numer().clone(),
                denominator: self.0.denom().clone(),
                context: context.to_string(),
            });
        }
        Count::try_from_bigint(self.0.to_integer(), context)
    }

    /// Checked division; fails on a zero divisor.
    pub fn checked_div(&self, rhs: &Ratio) -> Result<Ratio> {
        if rhs.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(Ratio(&self.0 / &rhs.0))
    }

    /// Decimal rendering with `sig` significant digits, ties rounded away
    /// from zero, trailing zeros removed. For display only.
    pub fn to_decimal(&self, sig: u32) -> String {
        let sig = sig.max(1);
        if self.0.is_zero() {
            return "0".to_string();
        }
        let negative = self.0.is_negative();
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        let ten = BigInt::from(10);

        // exponent e with 10^e <= num/den < 10^(e+1)
        let digits = |v: &BigInt| v.to_string().len() as i64;
        let mut e = digits(&num) - digits(&den);
        let ge_pow = |e: i64| -> bool {
            if e >= 0 {
                num >= &den * ten.pow(e as u32)
            } else {
                &num * ten.pow((-e) as u32) >= den
            }
        };
        while !ge_pow(e) {
            e -= 1;
        }
        while ge_pow(e + 1) {
            e += 1;
        }

        let round = |shift: i64| -> BigInt {
            let (n, d) = if shift >= 0 {
                (&num * ten.pow(shift as u32), den.clone())
            } else {
                (num.clone(), &den * ten.pow((-shift) as u32))
            };
            let (q, r) = n.div_rem(&d);
            let twice = &r * 2u32;
            if twice >= d {
                q + 1
            } else {
                q
            }
        };
        let mut mantissa = round(sig as i64 - 1 - e);
        if mantissa == ten.pow(sig) {
            e += 1;
            mantissa = round(sig as i64 - 1 - e);
        }
        let m = mantissa.to_string();

        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= m.len() {
                out.push_str(&m);
                out.push_str(&"0".repeat(int_len - m.len()));
            } else {
                let frac = m[int_len..].trim_end_matches('0');
                out.push_str(&m[..int_len]);
                if !frac.is_empty() {
                    out.push('.');
                    out.push_str(frac);
                }
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-e - 1) as usize));
            out.push_str(m.trim_end_matches('0'));
        }
        out
    }
}

impl From<&Count> for Ratio {
    fn from(c: &Count) -> Self {
        Ratio::integer(c.to_bigint())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("{s:?} is not a rational number"));
        match s.split_once('/') {
            Some((n, d)) => Ratio::new(
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => Ok(Ratio::integer(
                BigInt::from_str(s.trim()).map_err(|_| bad())?,
            )),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Mul for Ratio {
    type Output = Ratio;
    fn mul(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Ratio> for &'a Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio(&self.0 * &rhs.0)
    }
}

impl Add for Ratio {
    type Output = Ratio;
    fn add(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 + rhs.0)
    }
}

impl Sub for Ratio {
    type Output = Ratio;
    fn sub(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 - rhs.0)
    }
}

/// Panics on a zero divisor; use [`Ratio::checked_div`] when that can happen.
impl Div for Ratio {
    type Output = Ratio;
    fn div(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 / rhs.0)
    }
}

/// q^e.
pub fn q_power(q: u64, e: u64) -> Count {
    Count(num_traits::pow(BigUint::from(q), e as usize))
}

pub(crate) fn ipow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// a / b, failing unless b divides a.
pub fn exact_div(a: &Count, b: &Count) -> Result<Count> {
    if b.is_zero() {
        return Err(Error::domain(format!("exact_div({a}, 0)")));
    }
    let (quot, rem) = a.0.div_rem(&b.0);
    if !rem.is_zero() {
        return Err(Error::Integrality {
            numerator: a.to_bigint(),
            denominator: b.to_bigint(),
            context: "exact division".to_string(),
        });
    }
    Ok(Count(quot))
}

type MemoKey = (u64, u64, u64);

fn memo() -> &'static Mutex<HashMap<MemoKey, Count>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Count>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Gaussian binomial coefficient [n; k]_q, the number of k-dimensional
/// subspaces of an n-dimensional space over GF(q). Zero when k > n.
///
/// # Panics
///
/// If `q < 2`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Count {
    assert!(q >= 2, "gaussian_binomial needs q >= 2, got {q}");
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    if k == 0 {
        return Count::one();
    }
    let key = (n, k, q);
    if let Some(v) = memo().lock().expect("memo lock").get(&key) {
        return v.clone();
    }
    // [n; i+1] = [n; i] (q^(n-i) - 1) / (q^(i+1) - 1), every step an integer
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= q_power(q, n - i).0 - 1u32;
        let d = q_power(q, i + 1).0 - 1u32;
        let (quot, rem) = acc.div_rem(&d);
        debug_assert!(rem.is_zero());
        acc = quot;
    }
    let v = Count(acc);
    memo().lock().expect("memo lock").insert(key, v.clone());
    v
}

/// Checks the symmetry and the three ratio recurrences of the Gaussian
/// binomials at (n, k, q). Requires k <= n - 1.
pub fn gaussian_identity_suite(n: u64, k: u64, q: u64) -> Result<bool> {
    if q < 2 {
        return Err(Error::domain("q must be at least 2"));
    }
    if n == 0 || k > n - 1 {
        return Err(Error::domain(format!(
            "identity suite needs 0 <= k <= n - 1, got n={n}, k={k}"
        )));
    }
    let g = |a, b| gaussian_binomial(a, b, q).to_bigint();
    let m1 = |e: u64| ipow(q, e) - 1;
    let base = g(n, k);
    let symmetric = g(n, n - k) == base;
    let grow_n = g(n + 1, k) * m1(n - k + 1) == m1(n + 1) * &base;
    let grow_k = g(n, k + 1) * m1(k + 1) == m1(n - k) * &base;
    let grow_both = g(n + 1, k + 1) * m1(k + 1) == m1(n + 1) * &base;
    Ok(symmetric && grow_n && grow_k && grow_both)
}
