//! Exact scalars: arbitrary-precision rationals and prime-field residues.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::LinAlgError;

/// Largest admissible prime modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// The field a value or matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rationals.
    Rational,
    /// `GF(p)`; the modulus has been checked prime.
    Prime(u32),
}

impl Field {
    /// `GF(p)`, validating that `p` is a prime below 2^31.
    pub fn prime(p: u64) -> Result<Field, LinAlgError> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    /// 0 for the rationals, `p` for `GF(p)`.
    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        match *self {
            Field::Rational => FieldValue::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldValue::Prime {
                value: n.rem_euclid(i64::from(p)) as u32,
                modulus: p,
            },
        }
    }

    /// The image of `num / den` in this field, or `None` when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<FieldValue> {
        match *self {
            Field::Rational => {
                if den.is_zero() {
                    None
                } else {
                    Some(FieldValue::Rational(BigRational::new(num.clone(), den.clone())))
                }
            }
            Field::Prime(p) => {
                let reduce = |n: &BigInt| {
                    let m = BigInt::from(p);
                    let r = ((n % &m) + &m) % &m;
                    r.to_u32().expect("residue fits in u32")
                };
                let n = FieldValue::Prime { value: reduce(num), modulus: p };
                let d = FieldValue::Prime { value: reduce(den), modulus: p };
                d.inv().map(|d| &n * &d)
            }
        }
    }

    /// Parses `a`, `-a` or `a/b` (decimal integers) into this field.
    pub fn parse_value(&self, text: &str) -> Result<FieldValue, LinAlgError> {
        let bad = || LinAlgError::InvalidLiteral(text.into());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n, d),
            None => (text, "1"),
        };
        if den.starts_with(['-', '+']) || num.starts_with('+') {
            return Err(bad());
        }
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        self.from_ratio(&num, &den).ok_or_else(bad)
    }

    pub fn contains(&self, value: &FieldValue) -> bool {
        value.field() == *self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF {p}"),
        }
    }
}

/// Trial division; adequate for moduli below 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator, so derived
/// equality is value equality. Arithmetic between values of different fields
/// is a logic error and panics; matrix-level operations check contexts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    Prime { value: u32, modulus: u32 },
}

impl FieldValue {
    pub fn field(&self) -> Field {
        match self {
            FieldValue::Rational(_) => Field::Rational,
            FieldValue::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_zero(),
            FieldValue::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_one(),
            FieldValue::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<FieldValue> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldValue::Rational(r) => FieldValue::Rational(r.recip()),
            FieldValue::Prime { value, modulus } => FieldValue::Prime {
                value: pow_mod(u64::from(*value), u64::from(*modulus) - 2, u64::from(*modulus)) as u32,
                modulus: *modulus,
            },
        })
    }

    /// The value as an integer, when it is a rational with denominator 1
    /// that fits in an `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            FieldValue::Rational(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_negative(),
            FieldValue::Prime { .. } => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn mismatch(a: &FieldValue, b: &FieldValue) -> ! {
    panic!("field context mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &FieldValue {
    type Output = FieldValue;

    fn add(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::Prime { value: a, modulus: p }, FieldValue::Prime { value: b, modulus: q })
                if p == q =>
            {
                FieldValue::Prime {
                    value: ((u64::from(*a) + u64::from(*b)) % u64::from(*p)) as u32,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;

    fn sub(self, rhs: &FieldValue) -> FieldValue {
        self + &(-rhs)
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;

    fn mul(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::Prime { value: a, modulus: p }, FieldValue::Prime { value: b, modulus: q })
                if p == q =>
            {
                FieldValue::Prime {
                    value: (u64::from(*a) * u64::from(*b) % u64::from(*p)) as u32,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;

    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rational(a) => FieldValue::Rational(-a),
            FieldValue::Prime { value, modulus } => FieldValue::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for FieldValue {
    /// `a`, `-a` or `a/b` in lowest terms; prime-field values as their residue.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(r) => write!(f, "{r}"),
            FieldValue::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}
