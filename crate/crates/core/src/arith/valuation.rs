use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A 2-adic valuation, with zero mapped to `Infinity`.
///
/// The derived order puts every finite value below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// Minimum over an iterator; empty input gives `Infinity`.
    pub fn min_of<I: IntoIterator<Item = Valuation>>(iter: I) -> Valuation {
        iter.into_iter().min().unwrap_or(Valuation::Infinity)
    }

    /// Text used in CSV output and parsing.
    pub fn to_field(self) -> String {
        match self {
            Valuation::Finite(v) => v.to_string(),
            Valuation::Infinity => "inf".to_string(),
        }
    }

    pub fn from_field(s: &str) -> Option<Valuation> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Some(Valuation::Infinity),
            t => t.parse().ok().map(Valuation::Finite),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "∞"),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl Sub<i64> for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(-rhs)
    }
}

impl Neg for Valuation {
    type Output = Option<Valuation>;
    /// Negating infinity has no meaning here.
    fn neg(self) -> Option<Valuation> {
        self.finite().map(|v| Valuation::Finite(-v))
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

pub trait TwoAdic {
    fn v2(&self) -> Valuation;
}

impl TwoAdic for BigInt {
    fn v2(&self) -> Valuation {
        match self.trailing_zeros() {
            Some(t) => Valuation::Finite(t as i64),
            None => Valuation::Infinity,
        }
    }
}

impl TwoAdic for BigRational {
    fn v2(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let num = self.numer().v2().finite().unwrap_or(0);
        let den = self.denom().v2().finite().unwrap_or(0);
        Valuation::Finite(num - den)
    }
}

impl TwoAdic for i64 {
    fn v2(&self) -> Valuation {
        if *self == 0 {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.trailing_zeros() as i64)
        }
    }
}

impl TwoAdic for i128 {
    fn v2(&self) -> Valuation {
        if *self == 0 {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.trailing_zeros() as i64)
        }
    }
}

/// Formats a rational as `num/den`, or just `num` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational(12, 5).v2(), 2);
        assert_eq!(rational(3, 8).v2(), -3);
        assert_eq!(rational(0, 1).v2(), Valuation::Infinity);
        assert_eq!(rational(-7, 1).v2(), 0);
    }

    #[test]
    fn infinity_absorbs_and_dominates() {
        assert!(Valuation::Infinity > Valuation::Finite(1_000_000));
        assert_eq!(Valuation::Infinity + 3, Valuation::Infinity);
        assert_eq!(Valuation::Finite(2) - 5, Valuation::Finite(-3));
        assert_eq!(Valuation::min_of([Valuation::Infinity, 4.into(), 2.into()]), 2);
        assert_eq!(Valuation::min_of([]), Valuation::Infinity);
    }

    #[test]
    fn field_round_trip() {
        for v in [Valuation::Infinity, 0.into(), (-3).into(), 17.into()] {
            assert_eq!(Valuation::from_field(&v.to_field()), Some(v));
        }
        let x = rational(-6, 4);
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(x));
        assert_eq!(parse_rational("5"), Some(rational(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
