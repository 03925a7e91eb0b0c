//! Dense univariate polynomials over ℚ, Sturm sequences and real root
//! isolation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::RatInterval;
use super::rational::{fmt_rational, parse_rational, Rational, Sign};
use super::ArithError;

/// Coefficients lowest degree first; empty for the zero polynomial, otherwise
/// the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        UniPoly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// `X - r`.
    pub fn linear_root(r: Rational) -> Self {
        UniPoly::new(vec![-r, Rational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone() / &lc;
            if !c.is_zero() {
                let shift = top - dd;
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] -= &c * b;
                }
                quot[shift] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn square_free(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        Sign::of(&self.eval(x))
    }

    /// Horner evaluation over an interval (naive enclosure).
    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RatInterval::point(c.clone()));
        }
        acc
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().expect("root bound of zero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1].iter().map(|c| c.abs() / &lc).fold(Rational::zero(), |m, c| {
            if c > m {
                c
            } else {
                m
            }
        });
        max + Rational::one()
    }

    /// Real roots of `self` as distinct rationals (rational root test on a
    /// square-free, integer-scaled copy).
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.is_zero() {
            return Vec::new();
        }
        let sf = self.square_free();
        let mut roots = Vec::new();
        for iv in sturm_isolate_inner(&sf) {
            // A rational root p/q of the integer polynomial has q | lc and p | c0;
            // rather than enumerating divisors, refine and test the unique
            // candidate with small denominator via exact evaluation.
            if let Some(r) = rational_root_in(&sf, &iv) {
                roots.push(r);
            }
        }
        roots
    }

    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }
}

fn sign_changes_at(seq: &[UniPoly], x: &Rational) -> usize {
    let mut last = Sign::Zero;
    let mut changes = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub fn sturm_count(seq: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    sign_changes_at(seq, lo).saturating_sub(sign_changes_at(seq, hi))
}

/// Disjoint intervals, each holding exactly one real root of `p`, together
/// holding all of them. Endpoints are never roots.
pub fn sturm_isolate(p: &UniPoly) -> Result<Vec<RatInterval>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    Ok(sturm_isolate_inner(&p.square_free()))
}

fn sturm_isolate_inner(sf: &UniPoly) -> Vec<RatInterval> {
    let seq = sf.sturm_sequence();
    let b = sf.root_bound();
    let mut out = Vec::new();
    let mut work = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = work.pop() {
        match sturm_count(&seq, &lo, &hi) {
            0 => {}
            1 => out.push(shrink(sf, &seq, lo, hi)),
            _ => {
                let mid = split_point(sf, &lo, &hi);
                // Push the right half first so the left half is processed first.
                work.push((mid.clone(), hi));
                work.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo().cmp(b.lo()));
    out
}

/// Narrows an isolating interval to width at most 1.
fn shrink(p: &UniPoly, seq: &[UniPoly], mut lo: Rational, mut hi: Rational) -> RatInterval {
    while &hi - &lo > Rational::one() {
        let mid = split_point(p, &lo, &hi);
        if sturm_count(seq, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RatInterval::new(lo, hi)
}

/// A point strictly between `lo` and `hi` that is not a root of `p`.
fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    // At most deg(p) candidates can be roots.
    for k in 2u32.. {
        for j in 1..k {
            if num_integer::Integer::gcd(&j, &k) != 1 {
                continue;
            }
            let t = Rational::new(j.into(), k.into());
            let m = lo + &w * t;
            if !p.eval(&m).is_zero() {
                return m;
            }
        }
    }
    unreachable!()
}

/// The root in `iv` if it is rational.
fn rational_root_in(p: &UniPoly, iv: &RatInterval) -> Option<Rational> {
    // Clear denominators, then any rational root n/d has d | lc, n | c0.
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let lc = ints.last().unwrap().abs();
    let c0 = ints[0].abs();
    if c0.is_zero() {
        return iv.contains(&Rational::zero()).then(Rational::zero);
    }
    for d in divisors(&lc) {
        // candidate numerators n with n/d in iv: n in [lo*d, hi*d]
        let lo_n = (iv.lo() * Rational::from_integer(d.clone())).ceil().to_integer();
        let hi_n = (iv.hi() * Rational::from_integer(d.clone())).floor().to_integer();
        let mut n = lo_n;
        while n <= hi_n {
            if !n.is_zero() && (&c0 % n.abs()).is_zero() {
                let cand = Rational::new(n.clone(), d.clone());
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
            n += 1;
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for UniPoly {
    /// Dense ascending form, e.g. `-2 + 0*X + 1*X^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let cs = fmt_rational(c);
            match i {
                0 => f.write_str(&cs)?,
                1 => write!(f, "{cs}*X")?,
                _ => write!(f, "{cs}*X^{i}")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for UniPoly {
    type Err = ArithError;

    /// Accepts the dense printed form as well as sparse forms like
    /// `X^2 - 2` or `3/2*X - X^3`. The indeterminate may be written `X`,
    /// `x`, `Y` or `y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_unipoly(s)
    }
}

fn parse_unipoly(text: &str) -> Result<UniPoly, ArithError> {
    let bad = |why: &str| ArithError::Parse(format!("bad polynomial {text:?}: {why}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty"));
    }
    // Split into signed terms; a '-' directly after '/' or '^' never occurs in
    // valid input, so splitting on every +/- that is not leading is safe.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() {
            terms.push((negative, std::mem::take(&mut cur)));
            negative = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            if ch == '-' {
                negative = !negative;
            }
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad("dangling sign"));
    }
    terms.push((negative, cur));

    let mut coeffs: Vec<Rational> = Vec::new();
    for (neg, term) in terms {
        let var_pos = term.find(['X', 'x', 'Y', 'y']);
        let (coef, exp) = match var_pos {
            None => (parse_rational(&term)?, 0usize),
            Some(p) => {
                let head = term[..p].trim_end_matches('*');
                let coef = if head.is_empty() { Rational::one() } else { parse_rational(head)? };
                let tail = &term[p + 1..];
                let exp = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| bad("bad exponent"))?
                } else {
                    return Err(bad("unexpected text after indeterminate"));
                };
                (coef, exp)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rational::zero());
        }
        coeffs[exp] += if neg { -coef } else { coef };
    }
    Ok(UniPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    /// Independent root counter: sign changes of p on a fine grid between
    /// two points known to bracket all roots (only valid for simple roots
    /// that are well separated relative to the grid).
    fn grid_sign_changes(p: &UniPoly, lo: i64, hi: i64, steps: i64) -> usize {
        let mut last = None;
        let mut n = 0;
        for k in 0..=steps {
            let x = int(lo) + Rational::new((hi - lo).into(), steps.into()) * int(k);
            let s = p.sign_at(&x);
            if s == Sign::Zero {
                continue;
            }
            if let Some(l) = last {
                if l != s {
                    n += 1;
                }
            }
            last = Some(s);
        }
        n
    }

    #[test]
    fn isolate_no_real_roots() {
        let p = UniPoly::from_i64(&[1, 0, 1]);
        assert!(sturm_isolate(&p).unwrap().is_empty());
    }

    #[test]
    fn isolate_x() {
        let ivs = sturm_isolate(&UniPoly::x()).unwrap();
        assert_eq!(ivs.len(), 1);
        assert!(ivs[0].contains(&Rational::zero()));
        assert!(!ivs[0].lo().is_zero() && !ivs[0].hi().is_zero());
    }

    #[test]
    fn isolate_x2_minus_2() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        // Sturm chain by hand: X^2-2, 2X, 2. Sign vectors:
        //   at -2: (+,-,+) -> 2 changes; at 0: (-,0,+) -> 1; at 2: (+,+,+) -> 0.
        let seq = p.sturm_sequence();
        assert_eq!(seq.len(), 3);
        assert_eq!(sturm_count(&seq, &int(-2), &int(0)), 1);
        assert_eq!(sturm_count(&seq, &int(0), &int(2)), 1);
        let ivs = sturm_isolate(&p).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].lo() >= &int(-2) && ivs[0].hi() <= &int(0));
        assert!(ivs[1].lo() >= &int(0) && ivs[1].hi() <= &int(2));
    }

    #[test]
    fn isolate_zero_rejected() {
        assert_eq!(sturm_isolate(&UniPoly::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn isolate_repeated_roots_and_rational_roots() {
        // (X-1)^2 (X+2) (2X-1)
        let p = UniPoly::from_i64(&[-1, 1]).pow(2).mul(&UniPoly::from_i64(&[2, 1])).mul(&UniPoly::from_i64(&[-1, 2]));
        let ivs = sturm_isolate(&p).unwrap();
        assert_eq!(ivs.len(), 3);
        let mut roots = p.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![int(-2), rat(1, 2), int(1)]);
        for iv in &ivs {
            assert!(!p.eval(iv.lo()).is_zero() && !p.eval(iv.hi()).is_zero());
        }
    }

    #[test]
    fn isolation_matches_grid_count() {
        // (X^2 - 2)(X^2 - 5)(X - 3), all roots simple and >0.5 apart
        let p = UniPoly::from_i64(&[-2, 0, 1]).mul(&UniPoly::from_i64(&[-5, 0, 1])).mul(&UniPoly::from_i64(&[-3, 1]));
        let ivs = sturm_isolate(&p).unwrap();
        assert_eq!(ivs.len(), grid_sign_changes(&p, -10, 10, 2000));
        let seq = p.square_free().sturm_sequence();
        for iv in &ivs {
            assert_eq!(sturm_count(&seq, iv.lo(), iv.hi()), 1);
        }
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_i64(&[-1, 0, 1]);
        let b = UniPoly::from_i64(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UniPoly::from_i64(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UniPoly::from_i64(&[1, 1]).mul(&UniPoly::from_i64(&[3, 0, 1]))), UniPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn print_and_parse() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.to_string(), "-2 + 0*X + 1*X^2");
        assert_eq!(p.to_string().parse::<UniPoly>().unwrap(), p);
        assert_eq!("X^2 - 2".parse::<UniPoly>().unwrap(), p);
        assert_eq!("y^5-2".parse::<UniPoly>().unwrap(), UniPoly::from_i64(&[-2, 0, 0, 0, 0, 1]));
        assert_eq!("-1/2*X + 3".parse::<UniPoly>().unwrap(), UniPoly::new(vec![int(3), rat(-1, 2)]));
        assert!("X^".parse::<UniPoly>().is_err());
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
