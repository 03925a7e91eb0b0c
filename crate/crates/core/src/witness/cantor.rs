use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{floor, fmt_rational, int, rat, Rational};

use super::WitnessError;

/// An eventually periodic ternary expansion `0.prefix(period)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryDigits {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl TernaryDigits {
    /// Exact value: prefix/3^k + period/((3^p - 1)·3^k).
    pub fn value(&self) -> Rational {
        let k = self.prefix.len() as u32;
        let scale = Rational::from_integer(num_traits::pow(3.into(), k as usize));
        let head = digits_int(&self.prefix);
        let tail = if self.period.iter().all(|&d| d == 0) {
            Rational::zero()
        } else {
            let p = self.period.len();
            digits_int(&self.period) / (Rational::from_integer(num_traits::pow(3.into(), p)) - int(1))
        };
        (head + tail) / scale
    }

    fn map(&self, f: impl Fn(u8) -> u8) -> TernaryDigits {
        TernaryDigits {
            prefix: self.prefix.iter().map(|&d| f(d)).collect(),
            period: self.period.iter().map(|&d| f(d)).collect(),
        }
    }

    /// Terminating expansions print without the trailing `(0)`.
    fn terminates(&self) -> bool {
        self.period.iter().all(|&d| d == 0)
    }
}

fn digits_int(ds: &[u8]) -> Rational {
    ds.iter().fold(Rational::zero(), |acc, &d| acc * int(3) + int(i64::from(d)))
}

impl fmt::Display for TernaryDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = |ds: &[u8]| ds.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        if self.terminates() {
            let s = text(&self.prefix);
            return write!(f, "0.{}", if s.is_empty() { "0".into() } else { s });
        }
        write!(f, "0.{}({})", text(&self.prefix), text(&self.period))
    }
}

/// `x = c1 + c2/2` with both parts in the Cantor set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CantorPair {
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c2: Rational,
    pub digits_used: usize,
    pub x_digits: TernaryDigits,
    pub c1_digits: TernaryDigits,
    pub c2_digits: TernaryDigits,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl fmt::Display for CantorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x  = {} = {}", fmt_rational(&self.x), padded(&self.x_digits, &self.x_digits))?;
        writeln!(f, "c1 = {} = {}", fmt_rational(&self.c1), padded(&self.c1_digits, &self.x_digits))?;
        writeln!(f, "c2 = {} = {}", fmt_rational(&self.c2), padded(&self.c2_digits, &self.x_digits))?;
        write!(f, "x = c1 + c2/2 ({} digits)", self.digits_used)
    }
}

/// Prints `d` with as many prefix digits as `like`, so the three rows of a
/// decomposition line up digit by digit.
fn padded(d: &TernaryDigits, like: &TernaryDigits) -> String {
    if like.terminates() && d.terminates() {
        let s: String = d.prefix.iter().map(|x| char::from(b'0' + x)).collect();
        return format!("0.{}", if s.is_empty() { "0".into() } else { s });
    }
    d.to_string()
}

/// Ternary digits of `x ∈ [0, 1]`, using digit 2 forever for 1. Fails
/// when no repetition shows up within `budget` digits.
fn ternary_expansion(x: &Rational, budget: usize) -> Result<TernaryDigits, WitnessError> {
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = x.clone();
    loop {
        if let Some(&start) = seen.get(&r) {
            let period = digits.split_off(start);
            return Ok(TernaryDigits { prefix: digits, period });
        }
        if digits.len() >= budget {
            return Err(WitnessError::DigitBudget(budget));
        }
        seen.insert(r.clone(), digits.len());
        let t = &r * int(3);
        let d = floor(&t).min(2.into());
        let d = u8::try_from(d).expect("digit in 0..=2");
        r = t - int(i64::from(d));
        digits.push(d);
    }
}

/// Splits each ternary digit of `x` as 0 → (0, 0), 2 → (2, 0), 1 → (0, 2),
/// giving `x = c1 + c2/2` with `c1` and `c2` free of the digit 1.
pub fn cantor_decompose(x: &Rational, digit_budget: usize) -> Result<CantorPair, WitnessError> {
    if x.is_negative() || *x > Rational::one() {
        return Err(WitnessError::Precondition(format!("{} is outside [0, 1]", fmt_rational(x))));
    }
    let x_digits = ternary_expansion(x, digit_budget)?;
    let c1_digits = x_digits.map(|d| if d == 2 { 2 } else { 0 });
    let c2_digits = x_digits.map(|d| if d == 1 { 2 } else { 0 });
    let c1 = c1_digits.value();
    let c2 = c2_digits.value();
    debug_assert_eq!(&c1 + &c2 / int(2), *x);
    Ok(CantorPair {
        x: x.clone(),
        c1,
        c2,
        digits_used: x_digits.prefix.len() + x_digits.period.len(),
        x_digits,
        c1_digits,
        c2_digits,
    })
}

/// 1 iff `x ∈ (0, 1)` lies in some `[2^-(2m+1), 2^-2m]`.
pub fn even_zeros_truth(x: &Rational) -> u8 {
    if !x.is_positive() || *x >= Rational::one() {
        return 0;
    }
    let mut hi = int(1);
    loop {
        let lo = &hi * rat(1, 2);
        if *x >= lo {
            return u8::from(*x <= hi);
        }
        hi = &lo * rat(1, 2);
        if *x > hi {
            return 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::cantor_membership;

    #[test]
    fn decomposition_examples() {
        let p = cantor_decompose(&rat(73, 81), 40).unwrap();
        assert_eq!((p.c1.clone(), p.c2.clone()), (rat(8, 9), rat(2, 81)));
        assert_eq!(p.x_digits.to_string(), "0.2201");
        assert!(p.to_string().contains("c1 = 8/9 = 0.2200"));
        assert!(p.to_string().contains("c2 = 2/81 = 0.0002"));
        let z = cantor_decompose(&int(0), 5).unwrap();
        assert_eq!((z.c1, z.c2), (int(0), int(0)));
        let t = cantor_decompose(&rat(1, 3), 5).unwrap();
        assert_eq!((t.c1, t.c2.clone()), (int(0), rat(2, 3)));
        assert_eq!(t.c2_digits.to_string(), "0.2");
    }

    #[test]
    fn periodic_inputs() {
        for x in [rat(1, 2), rat(1, 4), int(1), rat(5, 7), rat(3, 10)] {
            let p = cantor_decompose(&x, 64).unwrap();
            assert_eq!(&p.c1 + &p.c2 / int(2), x);
            assert!(cantor_membership(&p.c1) && cantor_membership(&p.c2), "{x}");
        }
        assert_eq!(cantor_decompose(&rat(1, 2), 10).unwrap().x_digits.to_string(), "0.(1)");
        assert_eq!(cantor_decompose(&int(1), 10).unwrap().x_digits.to_string(), "0.(2)");
        assert!(matches!(cantor_decompose(&rat(1, 1031), 10), Err(WitnessError::DigitBudget(10))));
        assert!(cantor_decompose(&rat(3, 2), 10).is_err());
    }

    #[test]
    fn even_zeros_examples() {
        assert_eq!(even_zeros_truth(&rat(3, 4)), 1);
        assert_eq!(even_zeros_truth(&rat(3, 10)), 0);
        assert_eq!(even_zeros_truth(&rat(1, 8)), 1);
        assert_eq!(even_zeros_truth(&rat(1, 4)), 1);
        assert_eq!(even_zeros_truth(&rat(1, 5)), 1);
        assert_eq!(even_zeros_truth(&rat(1, 9)), 0);
        assert_eq!(even_zeros_truth(&int(1)), 0);
        assert_eq!(even_zeros_truth(&int(0)), 0);
    }
}
