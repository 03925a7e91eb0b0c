//! Rational functions in canonical reduced form.

use std::fmt;

use super::field::{AlgebraicNumber, FieldRef};
use super::multipoly::MultiPoly;
use super::rational::Sign;
use super::ArithError;

/// `num / den` with `gcd(num, den) = 1` and the denominator's grlex-leading
/// coefficient equal to 1, so equal functions have equal representations.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            let one = MultiPoly::one(den.field(), den.nvars());
            return RationalFunction { num, den: one };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inverse().expect("nonzero");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.field(), p.nvars());
        RationalFunction { num: p, den }
    }

    pub fn constant(c: &AlgebraicNumber, nvars: usize) -> Self {
        Self::from_poly(MultiPoly::constant(c, nvars))
    }

    pub fn var(field: &FieldRef, nvars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(field, nvars, i))
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn field(&self) -> &FieldRef {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical form makes this a syntactic check: a reduced quotient is
    /// constant exactly when both parts are.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<AlgebraicNumber> {
        if !self.is_constant() {
            return None;
        }
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        n.try_div(&d).ok()
    }

    /// Sign of a constant function.
    pub fn constant_sign(&self) -> Option<Sign> {
        self.constant_value().map(|v| v.sign())
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        Self::canonical(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction, ArithError> {
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::canonical(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn eval(&self, point: &[AlgebraicNumber]) -> Result<AlgebraicNumber, ArithError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(ArithError::Pole);
        }
        self.num.eval(point)?.try_div(&d)
    }
}

pub fn rf_eval(f: &RationalFunction, point: &[AlgebraicNumber]) -> Result<AlgebraicNumber, ArithError> {
    f.eval(point)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::arith::{NumberField, UniPoly};

    fn q() -> FieldRef {
        NumberField::rationals()
    }

    fn c(v: i64, n: usize) -> RationalFunction {
        RationalFunction::constant(&AlgebraicNumber::from_i64(v), n)
    }

    #[test]
    fn rf_eval_examples() {
        let y1 = RationalFunction::var(&q(), 1, 0);
        assert_eq!(rf_eval(&y1, &[AlgebraicNumber::from_i64(5)]).unwrap(), AlgebraicNumber::from_i64(5));
        let f = y1.sub(&c(1, 1)).div(&y1.add(&c(1, 1))).unwrap();
        assert_eq!(rf_eval(&f, &[AlgebraicNumber::from_i64(3)]).unwrap(), AlgebraicNumber::rational(rat(1, 2)));
        assert_eq!(rf_eval(&f, &[AlgebraicNumber::from_i64(-1)]), Err(ArithError::Pole));

        let k = NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let a = AlgebraicNumber::generator(&k);
        let a1 = a.try_add(&AlgebraicNumber::from_i64(1)).unwrap();
        let prod = RationalFunction::var(&q(), 2, 0).mul(&RationalFunction::var(&q(), 2, 1));
        let v = rf_eval(&prod, &[a, a1]).unwrap();
        assert_eq!(v.coords(), &[int(2), int(1)]);
    }

    #[test]
    fn canonical_form_is_unique() {
        let y = RationalFunction::var(&q(), 1, 0);
        // (Y^2 - 1)/(2Y - 2) reduces to (Y + 1)/2, i.e. a polynomial
        let f = y.mul(&y).sub(&c(1, 1)).div(&y.scale_int(2).sub(&c(2, 1))).unwrap();
        let g = y.add(&c(1, 1)).div(&c(2, 1)).unwrap();
        assert_eq!(f, g);
        assert!(f.denominator().is_constant());
        assert_eq!(f.to_string(), "1/2*Y + 1/2");
        let h = c(3, 1).div(&y.scale_int(-6)).unwrap();
        assert_eq!(h.to_string(), "(-1/2)/(Y)");
        assert!(y.sub(&y).is_zero());
        assert!(y.div(&y).unwrap().is_constant());
    }

    impl RationalFunction {
        fn scale_int(&self, k: i64) -> RationalFunction {
            self.mul(&RationalFunction::constant(&AlgebraicNumber::from_i64(k), self.nvars()))
        }
    }
}
