//! Small finite fields GF(p^e) with q <= 32, backed by full lookup tables.
//!
//! Elements are the integers `0..q`. An element's base-p digits, least
//! significant first, are its coefficients in the polynomial basis
//! `1, x, x^2, ...` modulo a fixed irreducible polynomial.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 32;

/// Irreducible polynomials for the extension fields, as coefficient lists
/// (constant term first, monic leading term included).
///
/// GF(32) uses x^5 + x^2 + 1.
const MODULI: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),    // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),    // x^2 + 1
    (3, 3, &[1, 2, 0, 1]), // x^3 + 2x + 1
    (5, 2, &[2, 0, 1]),    // x^2 + 2
];

/// A finite field of order q = p^e with precomputed arithmetic tables.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    eta: Vec<i8>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    /// Builds GF(p^e) and checks the field axioms exhaustively.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("characteristic {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::domain(format!("field order {p}^{e} exceeds {MAX_ORDER}")))?;

        let modulus: Vec<u8> = if e == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(mp, me, _)| *mp == p && *me == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| Error::Unsupported(format!("no modulus for GF({p}^{e})")))?
        };

        let qs = q as usize;
        let digits = |x: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut x = x as u32;
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u8 { v.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u8 };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            let da = digits(a);
            for b in 0..qs {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&sum);

                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (e as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    let shift = deg - e as usize;
                    for (t, &m) in modulus.iter().enumerate() {
                        prod[shift + t] = (prod[shift + t] + p * p - c * m as u32) % p;
                    }
                }
                mul[a * qs + b] = undigits(&prod[..e as usize]);
            }
        }

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs)
                .find(|&b| add[a * qs + b] == 0)
                .ok_or_else(|| Error::domain("additive inverse missing"))?
                as u8;
            if a != 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).ok_or_else(|| {
                    Error::domain(format!("element {a} of GF({q}) has no inverse"))
                })? as u8;
            }
        }

        let mut eta = vec![-1i8; qs];
        eta[0] = 0;
        for a in 1..qs {
            eta[mul[a * qs + a] as usize] = 1;
        }

        let field = Field {
            p,
            e,
            q,
            add,
            mul,
            neg,
            inv,
            eta,
        };
        field.check_axioms()?;
        Ok(field)
    }

    /// Shared instance of the field of order `q`.
    pub fn of_order(q: u32) -> Result<&'static Field> {
        static CACHE: OnceLock<Vec<Option<Field>>> = OnceLock::new();
        let fields = CACHE.get_or_init(|| {
            (0..=MAX_ORDER)
                .map(|q| prime_power(q).and_then(|(p, e)| Field::new(p, e).ok()))
                .collect()
        });
        fields
            .get(q as usize)
            .and_then(Option::as_ref)
            .ok_or_else(|| {
                Error::domain(format!("q = {q} is not a prime power in 2..={MAX_ORDER}"))
            })
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q as u8;
        let bad = |what: &str| Err(Error::domain(format!("GF({}) fails {what}", self.q)));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return bad("identity");
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return bad("inverse");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("commutativity");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return bad("associativity or distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Quadratic character: +1 on nonzero squares, -1 on nonsquares, 0 at 0.
    #[inline]
    pub fn eta(&self, a: u8) -> i8 {
        self.eta[a as usize]
    }

    /// eta((-1)^m).
    pub fn eta_minus_one_pow(&self, m: u32) -> i8 {
        if m.is_multiple_of(2) {
            1
        } else {
            self.eta(self.neg(1))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_field() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.eta(1), 1);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn ternary_minus_one_is_nonsquare() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.neg(1), 2);
        assert_eq!(f.eta(2), -1);
        assert_eq!(f.eta(1), 1);
    }

    #[test]
    fn gf4_every_nonzero_element_is_square() {
        let f = Field::new(2, 2).unwrap();
        for a in 1..4 {
            assert_eq!(f.eta(a), 1);
        }
        // x * x = x + 1 under x^2 + x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn all_supported_orders_build() {
        for q in 2..=MAX_ORDER {
            match prime_power(q) {
                Some(_) => {
                    let f = Field::of_order(q).unwrap();
                    assert_eq!(f.order(), q);
                    // eta agrees with squaring
                    for a in 1..q as u8 {
                        let is_square = f.elements().any(|x| x != 0 && f.mul(x, x) == a);
                        assert_eq!(f.eta(a) == 1, is_square, "GF({q}) element {a}");
                    }
                    if f.is_even() {
                        assert!((1..q as u8).all(|a| f.eta(a) == 1));
                    }
                }
                None => assert!(Field::of_order(q).is_err()),
            }
        }
    }

    #[test]
    fn minus_one_square_iff_q_is_one_mod_four() {
        for q in [3u32, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31] {
            let f = Field::of_order(q).unwrap();
            assert_eq!(f.eta(f.neg(1)) == 1, q % 4 == 1, "q={q}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 6).is_err());
        assert!(Field::new(7, 2).is_err());
        assert!(Field::new(3, 0).is_err());
    }
}
