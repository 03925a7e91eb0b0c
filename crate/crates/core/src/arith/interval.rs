//! Closed intervals with rational endpoints. All arithmetic is exact, so the
//! enclosures are rigorous without any rounding-mode bookkeeping.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        RatInterval { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(RatInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn centered(c: &Rational, radius: &Rational) -> Self {
        RatInterval::new(c - radius, c + radius)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        RatInterval::try_new(lo.clone(), hi.clone())
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> RatInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    /// Tight enclosure of `{x^k : x in self}`.
    pub fn pow(&self, k: u32) -> RatInterval {
        if k == 0 {
            return RatInterval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), k as usize);
        let b = num_traits::pow(self.hi.clone(), k as usize);
        if k % 2 == 1 {
            return RatInterval { lo: a, hi: b };
        }
        if self.lo.is_negative() && self.hi.is_positive() {
            RatInterval { lo: Rational::zero(), hi: if a > b { a } else { b } }
        } else if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    /// Sign of every point in the interval, when it is uniform and nonzero.
    pub fn strict_sign(&self) -> Option<super::Sign> {
        if self.lo.is_positive() {
            Some(super::Sign::Positive)
        } else if self.hi.is_negative() {
            Some(super::Sign::Negative)
        } else {
            None
        }
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalRepr { lo: fmt_rational(&self.lo), hi: fmt_rational(&self.hi) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = IntervalRepr::deserialize(d)?;
        let lo = super::parse_rational(&r.lo).map_err(D::Error::custom)?;
        let hi = super::parse_rational(&r.hi).map_err(D::Error::custom)?;
        RatInterval::try_new(lo, hi).ok_or_else(|| D::Error::custom("lo > hi"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn even_power_straddling_zero() {
        let i = RatInterval::new(int(-2), int(1));
        assert_eq!(i.pow(2), RatInterval::new(int(0), int(4)));
        assert_eq!(i.pow(3), RatInterval::new(int(-8), int(1)));
        let neg = RatInterval::new(int(-3), int(-1));
        assert_eq!(neg.pow(2), RatInterval::new(int(1), int(9)));
    }

    #[test]
    fn product_and_zero_tests() {
        let a = RatInterval::new(int(-1), int(2));
        let b = RatInterval::new(int(3), int(4));
        assert_eq!(a.mul(&b), RatInterval::new(int(-4), int(8)));
        assert!(a.contains_zero());
        assert!(b.excludes_zero());
        assert_eq!(RatInterval::new(rat(1, 2), rat(3, 2)).strict_sign(), Some(crate::arith::Sign::Positive));
        assert!(RatInterval::new(int(0), int(2)).contains_zero());
    }
}
