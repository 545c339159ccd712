//! Exact edge lengths: positive rationals plus a distinguished infinity.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact length in `(0, ∞]`, or more generally any exact rational
/// (gram entries may be negative) together with `∞`.
///
/// `Finite` sorts before `Infinite`, and `∞ + x = ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(BigRational),
    Infinite,
}

impl Length {
    pub fn integer(n: i64) -> Self {
        Length::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Length::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Self {
        Length::Finite(BigRational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Length::Infinite)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Length::Finite(r) => r.is_positive(),
            Length::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Length::Finite(r) => Some(r),
            Length::Infinite => None,
        }
    }
}

impl From<BigRational> for Length {
    fn from(r: BigRational) -> Self {
        Length::Finite(r)
    }
}

impl Add for Length {
    type Output = Length;

    fn add(self, rhs: Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl<'a> Add<&'a Length> for &'a Length {
    type Output = Length;

    fn add(self, rhs: &'a Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Infinite => write!(f, "inf"),
            Length::Finite(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLengthError(pub String);

impl fmt::Display for ParseLengthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse `{}` as an exact number", self.0)
    }
}

impl std::error::Error for ParseLengthError {}

impl FromStr for Length {
    type Err = ParseLengthError;

    /// Accepts `inf`, `p/q`, integers and decimal literals (with optional
    /// exponent). Decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseLengthError(s.to_string());
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Length::Infinite);
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Length::Finite(BigRational::new(n, d)));
        }
        parse_decimal(t).map(Length::Finite).ok_or_else(err)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}
