//! Closed-form counts A(n, k, l, q) of linear codes by hull dimension.
//!
//! Every product formula is evaluated in exact rational arithmetic and turned
//! into a [`Count`] only at the end, so an inexact division surfaces as an
//! [`Error::Integrality`] instead of a silently wrong number.
//!
//! Public counting functions accept any `0 <= l <= k <= n`. Counts with
//! `l > n - k` are zero because the hull of C is also the hull of its dual.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::qcomb::{gaussian_binomial, ipow, Count, Ratio};

/// Which route produced a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Sendrier,
    ProductEven,
    ProductOdd,
    LcdClosed,
    BruteForce,
}

impl Method {
    /// The product formula matching the parity of `q`.
    pub fn product_for(q: u32) -> Method {
        if q.is_multiple_of(2) {
            Method::ProductEven
        } else {
            Method::ProductOdd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Sendrier => "sendrier",
            Method::ProductEven => "product_even",
            Method::ProductOdd => "product_odd",
            Method::LcdClosed => "lcd_closed",
            Method::BruteForce => "brute_force",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The four cases on the parities of n and d = k - l that every product
/// formula and every ratio coefficient branches on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    NEvenDOdd,
    NOddDOdd,
    NOddDEven,
    NEvenDEven,
}

impl ParityCase {
    pub fn of(n: u32, d: u32) -> ParityCase {
        match (n.is_multiple_of(2), d.is_multiple_of(2)) {
            (true, false) => ParityCase::NEvenDOdd,
            (false, false) => ParityCase::NOddDOdd,
            (false, true) => ParityCase::NOddDEven,
            (true, true) => ParityCase::NEvenDEven,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParityCase::NEvenDOdd => "n even, k-l odd",
            ParityCase::NOddDOdd => "n odd, k-l odd",
            ParityCase::NOddDEven => "n odd, k-l even",
            ParityCase::NEvenDEven => "n even, k-l even",
        }
    }
}

/// The sequence (A(n,k,0,q), ..., A(n,k,k,q)) with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullSpectrum {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub counts: Vec<Count>,
    pub method: Method,
}

impl HullSpectrum {
    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }

    /// Checks that the counts partition all [n, k] codes and that the last
    /// entry is the number of self-orthogonal codes.
    pub fn validate(&self) -> Result<()> {
        if self.counts.len() != self.k as usize + 1 {
            return Err(Error::Mismatch(format!(
                "spectrum has {} entries, expected {}",
                self.counts.len(),
                self.k + 1
            )));
        }
        let expected = gaussian_binomial(self.n as u64, self.k as u64, self.q as u64);
        let total = self.total();
        if total != expected {
            return Err(Error::Mismatch(format!(
                "[{},{}]_{} spectrum ({}) sums to {total}, expected {expected}",
                self.n, self.k, self.q, self.method
            )));
        }
        if 2 * self.k <= self.n {
            let s = sigma(self.n, self.k, self.q)?;
            if self.counts[self.k as usize] != s {
                return Err(Error::Mismatch(format!(
                    "[{},{}]_{} spectrum ({}) ends in {}, expected sigma = {s}",
                    self.n, self.k, self.q, self.method, self.counts[self.k as usize]
                )));
            }
        }
        Ok(())
    }
}

/// q odd, n = 2 (mod 4) and -1 a nonsquare in GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStar {
    pub q: u32,
    pub n: u32,
    pub holds: bool,
}

pub fn condition_star(n: u32, q: u32) -> Result<ConditionStar> {
    let f = Field::of_order(q)?;
    let holds = !f.is_even() && n % 4 == 2 && f.eta(f.neg(1)) == -1;
    Ok(ConditionStar { q, n, holds })
}

/// eta((-1)^(n/2)) for even n and odd q.
pub(crate) fn eta_half(f: &Field, n: u32) -> i64 {
    f.eta_minus_one_pow(n / 2) as i64
}

fn field_checked(n: u32, k: u32, l: u32, q: u32) -> Result<&'static Field> {
    let f = Field::of_order(q)?;
    if n == 0 {
        return Err(Error::domain("code length must be at least 1"));
    }
    if k > n {
        return Err(Error::domain(format!(
            "dimension k={k} exceeds length n={n}"
        )));
    }
    if l > k {
        return Err(Error::domain(format!(
            "hull dimension l={l} exceeds code dimension k={k}"
        )));
    }
    Ok(f)
}

// Exact building blocks. Exponents are signed so that halved expressions can
// be checked for evenness before use.

struct Q(u64);

impl Q {
    fn pow(&self, e: i64) -> BigInt {
        assert!(e >= 0, "negative exponent {e}");
        ipow(self.0, e as u64)
    }

    fn r(&self, e: i64) -> Ratio {
        Ratio::integer(self.pow(e))
    }

    /// q^(x/2); x must be even.
    fn half(&self, x: i64) -> Ratio {
        assert!(x % 2 == 0, "odd exponent numerator {x}");
        self.r(x / 2)
    }

    /// q^e - c as a ratio.
    fn minus(&self, e: i64, c: i64) -> Ratio {
        Ratio::integer(self.pow(e) - c)
    }

    /// Gaussian binomial in base q^2; zero when b is out of range.
    fn g2(&self, a: i64, b: i64) -> Ratio {
        if a < 0 || b < 0 || b > a {
            return Ratio::integer(0);
        }
        let v = gaussian_binomial(a as u64, b as u64, self.0 * self.0);
        Ratio::from(&v)
    }

    fn frac(&self, num: BigInt, den: BigInt) -> Ratio {
        Ratio::new(num, den).expect("formula denominators are nonzero on their domain")
    }
}

/// Number of self-orthogonal [n, k]_q codes.
pub fn sigma(n: u32, k: u32, q: u32) -> Result<Count> {
    let f = Field::of_order(q)?;
    let m = n / 2;
    if k > m {
        return Err(Error::domain(format!(
            "self-orthogonal codes need k <= n/2, got n={n}, k={k}"
        )));
    }
    if k == 0 {
        return Ok(Count::one());
    }
    let qq = Q(q as u64);
    let (n, k, m) = (n as i64, k as i64, m as i64);
    let mut pi = Ratio::one();
    for i in 1..=k {
        pi = pi * qq.frac(qq.pow(2 * m - 2 * i + 2) - 1, qq.pow(i) - 1);
    }
    let factor = if n % 2 == 1 {
        Ratio::one()
    } else if f.is_even() {
        qq.frac(qq.pow(n - k) - 1, qq.pow(n) - 1)
    } else if n % 4 == 2 && q % 4 == 3 {
        qq.frac(qq.pow(m - k) - 1, qq.pow(m) - 1)
    } else {
        qq.frac(qq.pow(m - k) + 1, qq.pow(m) + 1)
    };
    (pi * factor).into_count("self-orthogonal count")
}

/// Alternating sum over self-orthogonal counts; valid for every q.
pub fn sendrier_count(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    field_checked(n, k, l, q)?;
    let k = k.min(n - k);
    if l > k {
        return Ok(Count::zero());
    }
    let qb = q as u64;
    let mut total = BigInt::from(0);
    for i in l..=k {
        let s = sigma(n, i, q)?;
        if s.is_zero() {
            continue;
        }
        let j = (i - l) as u64;
        let term = gaussian_binomial((n - 2 * i) as u64, (k - i) as u64, qb).to_bigint()
            * gaussian_binomial(i as u64, l as u64, qb).to_bigint()
            * ipow(qb, j * j.saturating_sub(1) / 2)
            * s.to_bigint();
        if j.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Count::try_from_bigint(total, "alternating hull sum")
}

/// Even q, combined closed form valid for `0 <= l <= k < n - l`.
fn even_combined(qq: &Q, n: i64, k: i64, l: i64) -> Ratio {
    let d = k - l;
    let case = ParityCase::of(n as u32, d as u32);
    // the product's subtrahend is q^(i-1) in the d-odd/n-even and
    // d-even/n-odd cases and q^i in the other two
    let shift = match case {
        ParityCase::NEvenDOdd | ParityCase::NOddDEven => 1,
        ParityCase::NOddDOdd | ParityCase::NEvenDEven => 0,
    };
    let mut prod = Ratio::one();
    for i in 1..=l {
        prod = prod
            * qq.frac(
                qq.pow(n - d - i) - qq.pow(i - shift),
                (qq.pow(i) - 1) * qq.pow(d + i - 1),
            );
    }
    let rest = match case {
        ParityCase::NEvenDOdd => qq.half(n * d - d * d + n - 1) * qq.g2(n / 2 - 1, (d - 1) / 2),
        ParityCase::NOddDOdd => {
            qq.frac(qq.pow(n - d) - 1, qq.pow(l) * (qq.pow(n - k - l) - 1))
                * qq.half((n - d) * (d - 1) + 2 * (n - k))
                * qq.g2((n - 1) / 2, (d - 1) / 2)
        }
        ParityCase::NOddDEven => qq.half(d * (n - d + 1)) * qq.g2((n - 1) / 2, d / 2),
        ParityCase::NEvenDEven => {
            qq.frac(qq.pow(n - l) - 1, qq.pow(l) * (qq.pow(n - k - l) - 1))
                * qq.half(d * (n - d))
                * qq.g2(n / 2 - 1, d / 2)
        }
    };
    prod * rest
}

/// Even q, the separate-case form: products from 1 for `l >= 1`, with its
/// own formula at `l = 0`. Valid for `0 <= l <= k < n - l`.
fn even_separate(qq: &Q, n: i64, k: i64, l: i64) -> Ratio {
    let d = k - l;
    let case = ParityCase::of(n as u32, d as u32);
    if l == 0 {
        return match case {
            ParityCase::NEvenDOdd => qq.half(n * k - k * k + n - 1) * qq.g2(n / 2 - 1, (k - 1) / 2),
            ParityCase::NOddDOdd => {
                qq.half((n - k) * (k - 1) + 2 * (n - k)) * qq.g2((n - 1) / 2, (k - 1) / 2)
            }
            ParityCase::NOddDEven => qq.half(k * (n - k + 1)) * qq.g2((n - 1) / 2, k / 2),
            ParityCase::NEvenDEven => {
                qq.half(k * (n - k))
                    * qq.frac(qq.pow(n) - 1, qq.pow(n - k) - 1)
                    * qq.g2(n / 2 - 1, k / 2)
            }
        };
    }
    let prod = |upto: i64, shift: i64| {
        (1..=upto).fold(Ratio::one(), |acc, i| {
            acc * qq.frac(
                qq.pow(n - d - i) - qq.pow(i - shift),
                (qq.pow(i) - 1) * qq.pow(d + i - 1),
            )
        })
    };
    match case {
        ParityCase::NEvenDOdd => {
            prod(l, 1) * qq.half(n * d - d * d + n - 1) * qq.g2(n / 2 - 1, (d - 1) / 2)
        }
        ParityCase::NOddDOdd => {
            prod(l - 1, 0)
                * qq.half((n - d) * (d - 1) + 2 * (n - k))
                * qq.frac(qq.pow(n - d) - 1, (qq.pow(l) - 1) * qq.pow(k - 1))
                * qq.g2((n - 1) / 2, (d - 1) / 2)
        }
        ParityCase::NOddDEven => prod(l, 1) * qq.half(d * (n - d + 1)) * qq.g2((n - 1) / 2, d / 2),
        ParityCase::NEvenDEven => {
            prod(l - 1, 0)
                * qq.half(d * (n - d))
                * qq.frac(qq.pow(n - l) - 1, (qq.pow(l) - 1) * qq.pow(k - 1))
                * qq.g2(n / 2 - 1, d / 2)
        }
    }
}

fn even_route(
    n: u32,
    k: u32,
    l: u32,
    q: u32,
    formula: fn(&Q, i64, i64, i64) -> Ratio,
    name: &str,
) -> Result<Count> {
    let f = field_checked(n, k, l, q)?;
    if !f.is_even() {
        return Err(Error::domain(format!("{name} needs even q, got q={q}")));
    }
    if l > n - k {
        return Ok(Count::zero());
    }
    if k == n - l {
        // the dual is self-orthogonal of dimension l
        return sigma(n, l, q);
    }
    let case = ParityCase::of(n, k - l);
    formula(&Q(q as u64), n as i64, k as i64, l as i64)
        .into_count(&format!("{name} ({})", case.label()))
}

/// Even q product formula in its combined form.
pub fn product_count_even_q(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    even_route(n, k, l, q, even_combined, "even-q product formula")
}

/// Even q product formula in its separate-case form, kept as an independent
/// route for cross-checking the combined form.
pub fn product_count_even_q_separate(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    even_route(n, k, l, q, even_separate, "even-q separate-case formula")
}

/// Odd q product formula; valid for `0 <= l <= k <= n - l`.
pub fn product_count_odd_q(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    let f = field_checked(n, k, l, q)?;
    if f.is_even() {
        return Err(Error::domain(format!(
            "odd-q product formula needs odd q, got q={q}"
        )));
    }
    if l > n - k {
        return Ok(Count::zero());
    }
    let qq = Q(q as u64);
    let case = ParityCase::of(n, k - l);
    let (n, l, d) = (n as i64, l as i64, (k - l) as i64);
    // the product numerator exponent is n - d - 2i + 1 or + 2
    let shift = match case {
        ParityCase::NEvenDOdd | ParityCase::NOddDEven => 1,
        ParityCase::NOddDOdd | ParityCase::NEvenDEven => 2,
    };
    let mut prod = Ratio::one();
    for i in 1..=l {
        prod = prod
            * qq.frac(
                qq.pow(n - d - 2 * i + shift) - 1,
                qq.pow(d) * (qq.pow(i) - 1),
            );
    }
    let rest = match case {
        ParityCase::NEvenDOdd => {
            let e = eta_half(f, n as u32);
            qq.half(d * (n - d) - 1) * qq.minus(n / 2, e) * qq.g2(n / 2 - 1, (d - 1) / 2)
        }
        ParityCase::NOddDOdd => {
            qq.half((n - d) * (d + 1) - 2 * l) * qq.g2((n - 1) / 2, (d - 1) / 2)
        }
        ParityCase::NOddDEven => qq.half(d * (n - d + 1)) * qq.g2((n - 1) / 2, d / 2),
        ParityCase::NEvenDEven => {
            let e = eta_half(f, n as u32);
            let b2 = qq.frac(qq.pow(n / 2 - l) + e, qq.pow(n / 2) + e);
            qq.half(d * (n - d)) * b2 * qq.g2(n / 2, d / 2)
        }
    };
    (prod * rest).into_count(&format!("odd-q product formula ({})", case.label()))
}

/// Number of LCD [n, k]_q codes for odd q, `0 < k < n`.
pub fn lcd_count_closed(n: u32, k: u32, q: u32) -> Result<Count> {
    let f = field_checked(n, k, 0, q)?;
    if f.is_even() {
        return Err(Error::domain(format!(
            "LCD closed form needs odd q, got q={q}"
        )));
    }
    if k == 0 || k == n {
        return Err(Error::domain(format!(
            "LCD closed form needs 0 < k < n, got n={n}, k={k}"
        )));
    }
    let qq = Q(q as u64);
    let case = ParityCase::of(n, k);
    let (n, k) = (n as i64, k as i64);
    let v = match case {
        ParityCase::NEvenDOdd => {
            let e = eta_half(f, n as u32);
            qq.half(k * (n - k) - 1) * qq.minus(n / 2, e) * qq.g2(n / 2 - 1, (k - 1) / 2)
        }
        ParityCase::NOddDOdd => qq.half((k + 1) * (n - k)) * qq.g2((n - 1) / 2, (k - 1) / 2),
        ParityCase::NOddDEven => qq.half(k * (n - k + 1)) * qq.g2((n - 1) / 2, k / 2),
        ParityCase::NEvenDEven => qq.half(k * (n - k)) * qq.g2(n / 2, k / 2),
    };
    v.into_count(&format!("LCD closed form ({})", case.label()))
}

/// The product formula for the parity of `q`.
pub fn product_count(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    if q.is_multiple_of(2) {
        product_count_even_q(n, k, l, q)
    } else {
        product_count_odd_q(n, k, l, q)
    }
}

/// A(n, k, l, q) by the requested closed-form route.
pub fn count(n: u32, k: u32, l: u32, q: u32, method: Method) -> Result<Count> {
    match method {
        Method::Sendrier => sendrier_count(n, k, l, q),
        Method::ProductEven => product_count_even_q(n, k, l, q),
        Method::ProductOdd => product_count_odd_q(n, k, l, q),
        Method::LcdClosed if l == 0 => lcd_count_closed(n, k, q),
        Method::LcdClosed => Err(Error::domain("the LCD closed form only gives l = 0")),
        Method::BruteForce => Err(Error::domain(
            "brute force produces whole spectra; use spectrum()",
        )),
    }
}

/// The full hull spectrum of [n, k]_q codes.
pub fn spectrum(n: u32, k: u32, q: u32, method: Method) -> Result<HullSpectrum> {
    field_checked(n, k, 0, q)?;
    if method == Method::BruteForce {
        return crate::brute::brute_spectrum(n, k, q);
    }
    if method == Method::LcdClosed {
        return Err(Error::domain(
            "the LCD closed form only gives l = 0, not a spectrum",
        ));
    }
    let counts = (0..=k)
        .map(|l| count(n, k, l, q, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(HullSpectrum {
        q,
        n,
        k,
        counts,
        method,
    })
}
