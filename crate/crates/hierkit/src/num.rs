//! Exact rational arithmetic used for all weights, costs and estimates.
//!
//! Every quantity in an instance file is parsed into a [`Rat`] so that
//! comparisons, argmins and reported totals are reproducible: no float
//! ties, no accumulation error. Values serialize back as decimal strings
//! when the denominator allows it and as `p/q` otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number. The backing integer is wide enough for every
/// desk-scale instance this crate is meant to solve.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Ratio<i128>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Rat {
        Rat(Ratio::new(numer, denom))
    }

    pub fn from_int(v: i128) -> Rat {
        Rat(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Largest integer n with n <= self.
    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_div(self, rhs: Rat) -> Option<Rat> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    /// Parses an integer (`42`), a decimal (`-3.25`) or a fraction (`5/3`).
    pub fn parse(text: &str) -> Result<Rat, Error> {
        let s = text.trim();
        let bad = || Error::NumberSyntax(text.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let numer: i128 = n.trim().parse().map_err(|_| bad())?;
            let denom: i128 = d.trim().parse().map_err(|_| bad())?;
            if denom == 0 {
                return Err(bad());
            }
            return Ok(Rat::new(numer, denom));
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1i128, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
        {
            return Err(bad());
        }
        let int_val: i128 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let mut numer = int_val;
        let mut denom = 1i128;
        for c in frac_part.chars() {
            numer = numer
                .checked_mul(10)
                .and_then(|v| v.checked_add((c as u8 - b'0') as i128))
                .ok_or_else(bad)?;
            denom = denom.checked_mul(10).ok_or_else(bad)?;
        }
        Ok(Rat::new(sign * numer, denom))
    }
}

impl fmt::Display for Rat {
    /// Finite decimal when the reduced denominator is of the form
    /// 2^a * 5^b, and `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = self.numer();
        let denom = self.denom();
        if denom == 1 {
            return write!(f, "{numer}");
        }
        let mut d = denom;
        let mut twos = 0u32;
        let mut fives = 0u32;
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return write!(f, "{numer}/{denom}");
        }
        // scale to denominator 10^k with k = max(twos, fives)
        let k = twos.max(fives);
        let mut scaled = numer.unsigned_abs();
        for _ in 0..(k - twos) {
            scaled *= 2;
        }
        for _ in 0..(k - fives) {
            scaled *= 5;
        }
        let pow10 = 10u128.pow(k);
        let int_part = scaled / pow10;
        let frac_part = scaled % pow10;
        let sign = if numer < 0 { "-" } else { "" };
        let frac = format!("{frac_part:0width$}", width = k as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            write!(f, "{sign}{int_part}")
        } else {
            write!(f, "{sign}{int_part}.{frac}")
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rat::parse(s)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_int(v as i128)
    }
}

impl From<u32> for Rat {
    fn from(v: u32) -> Rat {
        Rat::from_int(v as i128)
    }
}

impl From<usize> for Rat {
    fn from(v: usize) -> Rat {
        Rat::from_int(v as i128)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |acc, v| acc + v)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number encoded as a decimal or p/q string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                Rat::parse(v).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from_int(v as i128))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from_int(v as i128))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Total order for f64 keys that are known to be finite; used only for
/// display-level sorting, never for solver decisions.
pub fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Least common multiple of the denominators of a value set, used to map
/// rational instances onto an integer grid before dynamic programming.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rat>) -> i128 {
    values
        .into_iter()
        .fold(1i128, |acc, v| num_integer::lcm(acc, v.denom()))
}
