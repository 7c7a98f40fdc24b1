//! Exact dyadic rational arithmetic on arbitrary-precision integers.
//!
//! A [`Dyadic`] is a rational number of the form `p / 2^q`. Sums, differences
//! and products of dyadics are dyadic, so all piecewise-linear computations
//! in this crate stay exact; there is no rounding anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// An exact dyadic rational `num / 2^exp`, kept normalized: `num` is odd
/// whenever `exp > 0`, and zero is stored as `0 / 2^0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

/// Error for text that does not read as a dyadic literal.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("bad dyadic literal `{text}`: expected an integer or p/2^q")]
pub struct DyadicParseError {
    pub text: String,
}

impl Dyadic {
    /// Builds `num / 2^exp` and normalizes.
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Dyadic {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Dyadic {
        Dyadic::new(1, 0)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exp)) as u32;
        if shift > 0 {
            self.num = &self.num >> (shift as usize);
            self.exp -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// The power of two in the denominator.
    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Multiplies by `2^e` (exactly, for any sign of `e`).
    pub fn times_pow2(&self, e: i64) -> Dyadic {
        if e >= 0 {
            let e = e as u64;
            let take = e.min(u64::from(self.exp));
            Dyadic::new(
                &self.num << ((e - take) as usize),
                self.exp - take as u32,
            )
        } else {
            let e = e.unsigned_abs();
            Dyadic::new(
                self.num.clone(),
                self.exp + u32::try_from(e).expect("denominator exponent fits u32"),
            )
        }
    }

    /// The midpoint of `a` and `b`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).times_pow2(-1)
    }

    /// Largest integer `n` with `n ≤ self`.
    pub fn floor_int(&self) -> BigInt {
        if self.exp == 0 {
            self.num.clone()
        } else {
            // Arithmetic shift rounds toward negative infinity.
            &self.num >> (self.exp as usize)
        }
    }

    /// If `self = other · 2^e` for some integer `e`, returns `e`.
    /// Both values must be nonzero.
    pub fn ratio_pow2(&self, other: &Dyadic) -> Option<i64> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        // Compare odd parts: integers keep factors of two in the numerator.
        let tz_s = self.num.trailing_zeros().unwrap_or(0) as i64;
        let tz_o = other.num.trailing_zeros().unwrap_or(0) as i64;
        if &self.num >> tz_s as usize != &other.num >> tz_o as usize {
            return None;
        }
        Some((tz_s - i64::from(self.exp)) - (tz_o - i64::from(other.exp)))
    }

    /// Exact decimal expansion (dyadics always terminate), e.g. `0.375`.
    pub fn to_decimal_string(&self) -> String {
        if self.exp == 0 {
            return self.num.to_string();
        }
        let scaled: BigInt = &self.num * BigInt::from(5).pow(self.exp);
        let digits = scaled.abs().to_string();
        let frac_len = self.exp as usize;
        let sign = if self.num.is_negative() { "-" } else { "" };
        if digits.len() <= frac_len {
            format!("{sign}0.{:0>width$}", digits, width = frac_len)
        } else {
            let (int_part, frac_part) = digits.split_at(digits.len() - frac_len);
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Display for Dyadic {
    /// Prints `p` for integers and `p/2^q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl FromStr for Dyadic {
    type Err = DyadicParseError;

    fn from_str(s: &str) -> Result<Dyadic, DyadicParseError> {
        let err = || DyadicParseError {
            text: s.to_string(),
        };
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Dyadic::new(t.parse::<BigInt>().map_err(|_| err())?, 0)),
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| err())?;
                let den = den.trim();
                let exp = den.strip_prefix("2^").ok_or_else(err)?;
                let exp: u32 = exp.parse().map_err(|_| err())?;
                Ok(Dyadic::new(num, exp))
            }
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Dyadic {
        Dyadic::new(v, 0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << ((e - self.exp) as usize);
        let b = &other.num << ((e - other.exp) as usize);
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << ((e - self.exp) as usize);
        let b = &other.num << ((e - other.exp) as usize);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &(-other)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}
