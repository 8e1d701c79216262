//! Exact field arithmetic: rationals with arbitrary-precision integers, and
//! prime fields `F_p`.
//!
//! A [`Scalar`] always knows which field it lives in, so mixing elements of
//! different fields is a programming error (it panics) rather than a silent
//! wrong answer. Rationals are kept in lowest terms with a positive
//! denominator; residues lie in `[0, p)`.

use alloc::string::String;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// Which exact field scalars are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field with the given modulus. Primality is checked.
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// A rational `num/den`, reduced. Panics for `F_p` (use `from_i64`).
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar, FieldError> {
        match *self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::PrimeField(p) => {
                let n = Scalar::fp_from_bigint(&num, p);
                let d = Scalar::fp_from_bigint(&den, p);
                if d.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(&n / &d)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element together with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Fp { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn fp_from_bigint(n: &BigInt, p: u64) -> Scalar {
        let m = BigInt::from(p);
        let mut r = n % &m;
        if r.sign() == Sign::Minus {
            r += &m;
        }
        let (_, digits) = r.to_u64_digits();
        Scalar::Fp {
            value: digits.first().copied().unwrap_or(0),
            modulus: p,
        }
    }

    /// The underlying rational. Panics on `F_p` scalars.
    pub fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Fp { .. } => panic!("scalar is not rational"),
        }
    }

    pub fn as_fp(&self) -> u64 {
        match self {
            Scalar::Fp { value, .. } => *value,
            Scalar::Rational(_) => panic!("scalar is not a prime field element"),
        }
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Deterministic total order used for canonical sorting. Elements of
    /// different fields compare by field first; this never panics.
    pub fn sort_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) => {
                p.cmp(q).then(a.cmp(b))
            }
            (Scalar::Rational(_), Scalar::Fp { .. }) => Ordering::Less,
            (Scalar::Fp { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalars from different fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid; p is prime and a != 0 mod p.
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus not coprime with element");
    (t.rem_euclid(p as i128)) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the witness set that covers all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: mulmod(*a, *b, *p),
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}
impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Parse a decimal string into a big integer (used by callers that read
/// serialized rationals).
pub fn parse_bigint(s: &str) -> Option<BigInt> {
    s.parse::<BigInt>().ok()
}

/// Render a rational as `(numerator, denominator)` decimal strings.
pub fn rational_strings(r: &BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(4));
        assert!(!is_prime_u64(91)); // 7 * 13
        assert!(!is_prime_u64(6_700_417u64 * 6_700_417));
        assert!(FieldSpec::prime_field(6).is_err());
        assert!(FieldSpec::prime_field(7).is_ok());
    }

    #[test]
    fn rational_normalization() {
        let q = FieldSpec::Rationals;
        let half = q.from_ratio(BigInt::from(2), BigInt::from(4)).unwrap();
        let (n, d) = rational_strings(half.as_rational());
        assert_eq!((n.as_str(), d.as_str()), ("1", "2"));
        let neg = q.from_ratio(BigInt::from(3), BigInt::from(-6)).unwrap();
        let (n, d) = rational_strings(neg.as_rational());
        assert_eq!((n.as_str(), d.as_str()), ("-1", "2"));
    }

    #[test]
    fn fp_arithmetic() {
        let f5 = FieldSpec::prime_field(5).unwrap();
        let a = f5.from_i64(3);
        let b = f5.from_i64(4);
        assert_eq!((&a + &b).as_fp(), 2);
        assert_eq!((&a - &b).as_fp(), 4);
        assert_eq!((&a * &b).as_fp(), 2);
        assert_eq!((&a / &b).as_fp(), 2); // 4^{-1} = 4, 3*4 = 12 = 2
        assert_eq!(f5.from_i64(-1).as_fp(), 4);
        assert!(f5.from_i64(0).inverse().is_none());
    }

    #[test]
    fn inverse_is_exact() {
        let f97 = FieldSpec::prime_field(97).unwrap();
        for v in 1..97 {
            let s = f97.from_i64(v);
            let inv = s.inverse().unwrap();
            assert!((&s * &inv).is_one());
        }
    }
}
