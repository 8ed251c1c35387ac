use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of every matrix and complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    PrimeField(u64),
    Integers,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::PrimeField(p) => p,
            _ => 0,
        }
    }

    pub fn check_same(self, other: Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(self, other))
        }
    }

    pub fn require_field(self, op: &'static str) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(Error::NotAField { op, ring: self })
        }
    }

    pub fn require_integers(self, op: &'static str) -> Result<()> {
        if self == Ring::Integers {
            Ok(())
        } else {
            Err(Error::NotIntegers { op, ring: self })
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.reduce(BigRational::from_integer(BigInt::from(v)))
    }

    /// Canonical form: lowest terms over Q (automatic), representative in
    /// [0, p) over F_p. Integer entries are required over Z.
    pub fn reduce(self, v: BigRational) -> Scalar {
        match self {
            Ring::Rationals => Scalar(v),
            Ring::Integers => {
                debug_assert!(v.is_integer(), "non-integer entry over Z");
                Scalar(v)
            }
            Ring::PrimeField(p) => {
                let p = BigInt::from(p);
                let num = v.numer().mod_floor(&p);
                let den = v.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by p");
                Scalar(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::PrimeField(_) => self.reduce(&a.0 + &b.0),
            _ => Scalar(&a.0 + &b.0),
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::PrimeField(_) => self.reduce(&a.0 - &b.0),
            _ => Scalar(&a.0 - &b.0),
        }
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::PrimeField(_) => self.reduce(&a.0 * &b.0),
            _ => Scalar(&a.0 * &b.0),
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match self {
            Ring::PrimeField(_) => self.reduce(-&a.0),
            _ => Scalar(-&a.0),
        }
    }

    /// Multiplicative inverse; `None` for zero or for non-units of Z.
    pub fn inv(self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            Ring::Rationals => Some(Scalar(a.0.recip())),
            Ring::PrimeField(_) => Some(self.reduce(a.0.recip())),
            Ring::Integers => {
                if a.0.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
        }
    }

    /// Whether `a` is a legal canonical value for this ring.
    pub fn is_canonical(self, a: &Scalar) -> bool {
        match self {
            Ring::Rationals => true,
            Ring::Integers => a.0.is_integer(),
            Ring::PrimeField(p) => {
                a.0.is_integer() && !a.0.is_negative() && a.0.numer() < &BigInt::from(p)
            }
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(p);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(p))
    } else {
        None
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "q"),
            Ring::Integers => write!(f, "z"),
            Ring::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" | "rationals" => Ok(Ring::Rationals),
            "z" | "integers" => Ok(Ring::Integers),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Parse(format!("unknown ring `{s}` (expected q, z or fp:P)")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime in ring `{s}`")))?;
                Ring::prime_field(p)
            }
        }
    }
}

/// An exact scalar. Arithmetic goes through [`Ring`] so that F_p values stay
/// reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(pub(crate) BigRational);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Scalar {
        Scalar(BigRational::new(num, den))
    }

    pub fn from_integer(v: BigInt) -> Scalar {
        Scalar(BigRational::from_integer(v))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Sign-aware integer view; panics on a non-integer.
    pub fn to_integer(&self) -> BigInt {
        assert!(self.0.is_integer(), "scalar {} is not an integer", self.0);
        self.0.to_integer()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
