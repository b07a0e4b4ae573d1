//! Exact rational arithmetic for time points, durations, and numeric
//! constants.
//!
//! Values are kept in lowest terms with a positive denominator, so structural
//! equality coincides with numeric equality and comparisons are exact. Finite
//! decimal literals round-trip without loss, which is what lets the validator
//! distinguish time points separated by arbitrarily small positive gaps.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

/// Error for a malformed decimal literal, with the byte offset of the
/// offending position inside the literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalError {
    pub offset: usize,
    pub kind: DecimalErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimalErrorKind {
    Empty,
    MissingIntegerDigits,
    MissingFractionDigits,
    UnexpectedCharacter(char),
}

impl fmt::Display for DecimalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DecimalErrorKind::Empty => write!(f, "empty number literal"),
            DecimalErrorKind::MissingIntegerDigits => {
                write!(f, "expected digits before the decimal point")
            }
            DecimalErrorKind::MissingFractionDigits => {
                write!(f, "expected digits after the decimal point")
            }
            DecimalErrorKind::UnexpectedCharacter(c) => {
                write!(f, "unexpected character {c:?} in number literal")
            }
        }
    }
}

impl core::error::Error for DecimalError {}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `numer/denom`, reducing to lowest terms.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        Rational(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `(a + b) / 2`, the default placement for invariant checks between two
    /// consecutive happening time points.
    pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
        Rational((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// Parses a finite decimal literal: an optional sign, digits, and an
    /// optional fraction part. Scientific notation is rejected.
    pub fn from_decimal_str(text: &str) -> Result<Self, DecimalError> {
        let err = |offset, kind| Err(DecimalError { offset, kind });
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return err(0, DecimalErrorKind::Empty);
        }
        let mut pos = 0;
        let negative = match bytes[0] {
            b'-' => {
                pos = 1;
                true
            }
            b'+' => {
                pos = 1;
                false
            }
            _ => false,
        };
        let int_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == int_start {
            return err(pos, DecimalErrorKind::MissingIntegerDigits);
        }
        let int_part: BigInt = text[int_start..pos].parse().expect("digits only");
        let mut numer = int_part;
        let mut denom = BigInt::one();
        if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            let frac_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == frac_start {
                return err(pos, DecimalErrorKind::MissingFractionDigits);
            }
            let frac: BigInt = text[frac_start..pos].parse().expect("digits only");
            let scale = BigInt::from(10u32).pow((pos - frac_start) as u32);
            numer = numer * &scale + frac;
            denom = scale;
        }
        if pos < bytes.len() {
            let ch = text[pos..].chars().next().unwrap();
            return err(pos, DecimalErrorKind::UnexpectedCharacter(ch));
        }
        if negative {
            numer = -numer;
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// True iff the value has a terminating decimal expansion, i.e. the
    /// denominator factors as `2^a * 5^b`.
    pub fn is_terminating_decimal(&self) -> bool {
        self.decimal_exponents().is_some()
    }

    fn decimal_exponents(&self) -> Option<(u32, u32)> {
        let mut rest = self.0.denom().magnitude().clone();
        let two = BigUint::from(2u32);
        let five = BigUint::from(5u32);
        let mut twos = 0u32;
        let mut fives = 0u32;
        while (&rest % &two).is_zero() {
            rest /= &two;
            twos += 1;
        }
        while (&rest % &five).is_zero() {
            rest /= &five;
            fives += 1;
        }
        if rest.is_one() {
            Some((twos, fives))
        } else {
            None
        }
    }
}

/// Renders the exact decimal expansion when one exists (`5/4` prints as
/// `1.25`), and `numer/denom` otherwise.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        match self.decimal_exponents() {
            Some((twos, fives)) => {
                let places = twos.max(fives);
                let scale = BigInt::from(10u32).pow(places);
                let scaled = (self.0.numer() * &scale / self.0.denom()).magnitude().clone();
                let digits = scaled.to_string();
                let digits = if digits.len() <= places as usize {
                    let mut padded = String::new();
                    for _ in 0..(places as usize + 1 - digits.len()) {
                        padded.push('0');
                    }
                    padded + &digits
                } else {
                    digits
                };
                let split = digits.len() - places as usize;
                let frac = digits[split..].trim_end_matches('0');
                let sign = if self.0.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}.{frac}", &digits[..split])
            }
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }

        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}
