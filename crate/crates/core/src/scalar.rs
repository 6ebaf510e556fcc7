//! Exact scalars: arbitrary-precision rationals or residues modulo a prime.
//!
//! Binary operations between a rational and a residue coerce the rational into
//! the prime field. Mixing two different primes is a programming error and
//! panics, as does dividing by zero through the operator traits; use
//! [`Scalar::inv`] for the fallible version.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// GF(p), after checking that `p` is a prime below 2^32.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                prime: p,
            },
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if !(2..1 << 32).contains(&p) {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, prime: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn big_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_i64(v: i64) -> Scalar {
        Field::Rational.from_i64(v)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.field().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.field().one()
    }

    /// Maps the value into `field`. Rationals reduce modulo p when the
    /// denominator is invertible; residues only map to their own field.
    pub fn to_field(&self, field: Field) -> Result<Scalar> {
        match (self, field) {
            (Scalar::Rat(_), Field::Rational) => Ok(self.clone()),
            (Scalar::Rat(r), Field::Prime(p)) => {
                let den = big_mod(r.denom(), p);
                if den == 0 {
                    return Err(Error::NotRepresentable {
                        value: self.to_string(),
                        prime: p,
                    });
                }
                let num = big_mod(r.numer(), p);
                let value = ((num as u128 * mod_pow(den, p - 2, p) as u128) % p as u128) as u64;
                Ok(Scalar::Mod { value, prime: p })
            }
            (Scalar::Mod { prime, .. }, Field::Prime(p)) if *prime == p => Ok(self.clone()),
            (Scalar::Mod { prime, .. }, _) => Err(Error::ShapeMismatch(format!(
                "cannot move a GF({prime}) element into {field}"
            ))),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: mod_pow(*value, prime - 2, *prime),
                prime: *prime,
            },
        })
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.one_like();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// A square root inside the same field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Scalar::Mod { value, prime } => {
                tonelli_shanks(*value, *prime).map(|value| Scalar::Mod { value, prime: *prime })
            }
        }
    }

    /// Numerator and denominator for rationals; `None` for residues.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    fn coerce_pair<'a>(a: &'a Scalar, b: &'a Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Rat(_), Scalar::Mod { prime, .. }) => (
                a.to_field(Field::Prime(*prime))
                    .expect("rational not representable mod p"),
                b.clone(),
            ),
            (Scalar::Mod { prime, .. }, Scalar::Rat(_)) => (
                a.clone(),
                b.to_field(Field::Prime(*prime))
                    .expect("rational not representable mod p"),
            ),
            _ => (a.clone(), b.clone()),
        }
    }
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 || p == 2 {
        return Some(n);
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    if mod_pow(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(n, q, p);
    let mut r = mod_pow(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) => p == q && a == b,
            (Scalar::Rat(_), Scalar::Mod { prime, .. }) => self
                .to_field(Field::Prime(*prime))
                .map(|s| &s == other)
                .unwrap_or(false),
            (Scalar::Mod { .. }, Scalar::Rat(_)) => other == self,
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `"n"` or `"p/q"` as a rational.
    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let parse_int = |t: &str, offset: usize| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(offset, format!("`{t}` is not an integer")));
            }
            t.parse::<BigInt>()
                .map_err(|_| Error::parse(offset, format!("`{t}` is not an integer")))
        };
        match s.split_once('/') {
            None => Ok(Scalar::Rat(BigRational::from_integer(parse_int(s, 0)?))),
            Some((n, d)) => {
                let num = parse_int(n, 0)?;
                let den = parse_int(d, n.len() + 1)?;
                if den.is_zero() {
                    return Err(Error::parse(n.len() + 1, "zero denominator"));
                }
                Ok(Scalar::Rat(BigRational::new(num, den)))
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $modop:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat($rat(x, y)),
                    (Scalar::Mod { value: x, prime }, Scalar::Mod { value: y, prime: q }) => {
                        assert_eq!(prime, q, "mixed prime fields");
                        Scalar::Mod {
                            value: $modop(*x, *y, *prime),
                            prime: *prime,
                        }
                    }
                    _ => {
                        let (a, b) = Scalar::coerce_pair(self, rhs);
                        (&a).$method(&b)
                    }
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |x: &BigRational, y: &BigRational| x + y,
    |x: u64, y: u64, p: u64| ((x as u128 + y as u128) % p as u128) as u64
);
binop!(
    Sub,
    sub,
    |x: &BigRational, y: &BigRational| x - y,
    |x: u64, y: u64, p: u64| ((x as u128 + p as u128 - y as u128) % p as u128) as u64
);
binop!(
    Mul,
    mul,
    |x: &BigRational, y: &BigRational| x * y,
    |x: u64, y: u64, p: u64| ((x as u128 * y as u128) % p as u128) as u64
);
binop!(
    Div,
    div,
    |x: &BigRational, y: &BigRational| {
        assert!(!y.is_zero(), "division by zero");
        x / y
    },
    |x: u64, y: u64, p: u64| {
        assert!(y != 0, "division by zero");
        ((x as u128 * mod_pow(y, p - 2, p) as u128) % p as u128) as u64
    }
);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: (prime - value) % prime,
                prime: *prime,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }
}
