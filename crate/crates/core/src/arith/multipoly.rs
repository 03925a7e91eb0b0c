//! Sparse multivariate polynomials over a real number field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{AlgebraicNumber, FieldRef, NumberField};
use super::interval::RatInterval;
use super::rational::{two_pow, Rational};
use super::unipoly::UniPoly;
use super::ArithError;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    field: FieldRef,
    nvars: usize,
    terms: BTreeMap<Monomial, AlgebraicNumber>,
}

impl MultiPoly {
    pub fn zero(field: &FieldRef, nvars: usize) -> Self {
        MultiPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: &AlgebraicNumber, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c.clone());
        }
        p
    }

    pub fn one(field: &FieldRef, nvars: usize) -> Self {
        MultiPoly::constant(&AlgebraicNumber::one_in(field), nvars)
    }

    /// The indeterminate `Y_{i+1}`.
    pub fn var(field: &FieldRef, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for arity {nvars}");
        let mut p = MultiPoly::zero(field, nvars);
        p.terms.insert(Monomial::var(nvars, i), AlgebraicNumber::one_in(field));
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms(
        field: &FieldRef,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, AlgebraicNumber)>,
    ) -> Self {
        let mut p = MultiPoly::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            let c = c.lift_to(field).expect("coefficient outside the polynomial's field");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: AlgebraicNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.try_add(&c).expect("same field");
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &AlgebraicNumber)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<AlgebraicNumber> {
        if self.is_zero() {
            Some(AlgebraicNumber::zero_in(&self.field))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Degree in variable `i`; 0 for the zero polynomial.
    pub fn var_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &AlgebraicNumber)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&AlgebraicNumber> {
        self.leading_term().map(|(_, c)| c)
    }

    /// True when every coefficient is rational.
    pub fn has_rational_coeffs(&self) -> bool {
        self.terms.values().all(AlgebraicNumber::is_rational)
    }

    fn check_arity(&self, other: &MultiPoly) {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
    }

    /// Common coefficient field of two polynomials. Panics on two distinct
    /// nontrivial fields; the machine keeps every run inside one field.
    fn common_field(&self, other: &MultiPoly) -> FieldRef {
        if std::sync::Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field) {
            self.field.clone()
        } else if self.field.is_rational() || self.has_rational_coeffs() {
            other.field.clone()
        } else if other.field.is_rational() || other.has_rational_coeffs() {
            self.field.clone()
        } else {
            panic!("{}", ArithError::FieldMismatch)
        }
    }

    pub fn lift_to(&self, field: &FieldRef) -> MultiPoly {
        if std::sync::Arc::ptr_eq(&self.field, field) {
            return self.clone();
        }
        MultiPoly {
            field: field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.lift_to(field).expect("coefficient outside target field")))
                .collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_arity(other);
        let f = self.common_field(other);
        let mut out = self.lift_to(&f);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.lift_to(&f).unwrap());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_arity(other);
        let f = self.common_field(other);
        let mut out = MultiPoly::zero(&f, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.try_mul(cb).expect("common field"));
            }
        }
        out
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> MultiPoly {
        self.mul(&MultiPoly::constant(c, self.nvars))
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.field, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the grlex-leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.inverse().expect("nonzero");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        self.check_arity(d);
        let (dm, dc) = d.leading_term().expect("division by the zero polynomial");
        let dc_inv = dc.inverse().expect("nonzero");
        let f = self.common_field(d);
        let mut rem = self.lift_to(&f);
        let mut quot = MultiPoly::zero(&f, self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm)?;
            let qc = rc.try_mul(&dc_inv).expect("common field");
            let mut t = MultiPoly::zero(&f, self.nvars);
            t.terms.insert(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Exact value at a point.
    pub fn eval(&self, point: &[AlgebraicNumber]) -> Result<AlgebraicNumber, ArithError> {
        if point.len() != self.nvars {
            return Err(ArithError::Arity { expected: self.nvars, got: point.len() });
        }
        let mut acc = AlgebraicNumber::zero_in(&self.field);
        let mut powers: Vec<Vec<AlgebraicNumber>> =
            point.iter().map(|x| vec![AlgebraicNumber::one_in(x.field()), x.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&point[i])?;
                    powers[i].push(next);
                }
                t = t.try_mul(&powers[i][e as usize])?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Coefficients with respect to variable `v`: `self = Σ coeff[j] · Y_v^j`.
    fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.var_degree(v) as usize;
        let mut out = vec![MultiPoly::zero(&self.field, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let j = m.0[v] as usize;
            let mut e = m.clone();
            e.0[v] = 0;
            out[j].terms.insert(e, c.clone());
        }
        out
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&i| self.var_degree(i) > 0)
    }

    fn var_power(&self, v: usize, k: u32) -> MultiPoly {
        let mut e = Monomial::one(self.nvars);
        e.0[v] = k;
        let mut p = MultiPoly::zero(&self.field, self.nvars);
        p.terms.insert(e, AlgebraicNumber::one_in(&self.field));
        p
    }

    /// Pseudo-remainder of `self` by `b` with respect to variable `v`.
    fn pseudo_rem(&self, b: &MultiPoly, v: usize) -> MultiPoly {
        let n = b.var_degree(v);
        let lb = b.coeffs_in(v).pop().unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.var_degree(v) >= n {
            let k = r.var_degree(v);
            let lr = r.coeffs_in(v).pop().unwrap();
            r = r.mul(&lb).sub(&lr.mul(&self.var_power(v, k - n)).mul(b));
        }
        r
    }

    /// Content with respect to `v`: gcd of the coefficients in `Y_v`.
    fn content_in(&self, v: usize) -> MultiPoly {
        let mut g = MultiPoly::zero(&self.field, self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    /// Greatest common divisor, normalized to grlex-leading coefficient 1.
    /// Zero only when both inputs are zero.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        self.check_arity(other);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let f = self.common_field(other);
        let a = self.lift_to(&f);
        let b = other.lift_to(&f);
        let v = match (a.highest_var(), b.highest_var()) {
            (None, _) | (_, None) => return MultiPoly::one(&f, self.nvars),
            (Some(x), Some(y)) => x.max(y),
        };
        if a.var_degree(v) == 0 {
            return a.gcd(&b.content_in(v));
        }
        if b.var_degree(v) == 0 {
            return b.gcd(&a.content_in(v));
        }
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let g = ca.gcd(&cb);
        let mut r0 = a.div_exact(&ca).expect("content divides");
        let mut r1 = b.div_exact(&cb).expect("content divides");
        if r0.var_degree(v) < r1.var_degree(v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        loop {
            let r = r0.pseudo_rem(&r1, v);
            if r.is_zero() {
                break;
            }
            if r.var_degree(v) == 0 {
                r1 = MultiPoly::one(&f, self.nvars);
                break;
            }
            let cr = r.content_in(v);
            r0 = r1;
            r1 = r.div_exact(&cr).expect("content divides");
        }
        g.mul(&r1).monic()
    }

    /// The polynomial as a univariate one in variable `i`, when it has
    /// rational coefficients and mentions no other variable.
    pub fn to_unipoly(&self, i: usize) -> Option<UniPoly> {
        if !self.has_rational_coeffs() {
            return None;
        }
        let mut coeffs = vec![Rational::from_integer(0.into()); self.var_degree(i) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            coeffs[m.0[i] as usize] = c.as_rational().unwrap().clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Name of variable `i` in printed output.
    pub fn var_name(nvars: usize, i: usize) -> String {
        if nvars == 1 {
            "Y".into()
        } else {
            format!("Y{}", i + 1)
        }
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((ma, ca), (mb, cb))| ma == mb && ca == cb)
    }
}

/// Rigorous enclosure of `p` over a box, by term-wise interval arithmetic
/// with coefficients enclosed to width 2^-64.
pub fn interval_eval(p: &MultiPoly, bx: &[RatInterval]) -> RatInterval {
    interval_eval_with(p, bx, &two_pow(-64))
}

pub fn interval_eval_with(p: &MultiPoly, bx: &[RatInterval], coeff_width: &Rational) -> RatInterval {
    assert_eq!(bx.len(), p.nvars, "box dimension must equal polynomial arity");
    let mut acc = RatInterval::point(Rational::from_integer(0.into()));
    for (m, c) in &p.terms {
        let mut t = c.enclosure(coeff_width);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&bx[i].pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn fmt_coeff(c: &AlgebraicNumber) -> String {
    match c.as_rational() {
        Some(_) => c.to_string(),
        None => format!("({c})"),
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing grlex order, e.g. `Y1^2*Y2 - 3/2*Y1 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.as_rational().is_some_and(|r| r < &Rational::from_integer(0.into()));
            let c_abs = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let name = MultiPoly::var_name(self.nvars, i);
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_coeff(&c_abs))?;
            } else if c_abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&c_abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Default for MultiPoly {
    fn default() -> Self {
        MultiPoly::zero(&NumberField::rationals(), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn q() -> FieldRef {
        NumberField::rationals()
    }

    fn y(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(&q(), n, i)
    }

    fn c(r: Rational, n: usize) -> MultiPoly {
        MultiPoly::constant(&AlgebraicNumber::rational(r), n)
    }

    #[test]
    fn interval_eval_examples() {
        let three = c(int(3), 2);
        let bx = vec![RatInterval::new(int(0), int(1)), RatInterval::new(int(-5), int(7))];
        assert_eq!(interval_eval(&three, &bx), RatInterval::point(int(3)));
        let sum = y(2, 0).add(&y(2, 1));
        let unit = vec![RatInterval::new(int(0), int(1)); 2];
        assert_eq!(interval_eval(&sum, &unit), RatInterval::new(int(0), int(2)));
        let p = y(1, 0).pow(2).sub(&c(int(2), 1));
        let out = interval_eval(&p, &[RatInterval::new(rat(7, 5), rat(3, 2))]);
        assert!(out.contains_interval(&RatInterval::new(rat(-1, 25), rat(1, 4))));
    }

    #[test]
    fn gcd_examples() {
        // (Y1 - Y2)(Y1 + 1) and (Y1 - Y2)(Y2 - 3)
        let d = y(2, 0).sub(&y(2, 1));
        let a = d.mul(&y(2, 0).add(&c(int(1), 2)));
        let b = d.mul(&y(2, 1).sub(&c(int(3), 2)));
        assert_eq!(a.gcd(&b), d);
        let a2 = a.scale(&AlgebraicNumber::rational(rat(-3, 2)));
        assert_eq!(a2.gcd(&a), a.monic());
        assert_eq!(y(2, 0).gcd(&y(2, 1)), MultiPoly::one(&q(), 2));
        let sq = y(1, 0).sub(&c(int(1), 1)).pow(3);
        let other = y(1, 0).pow(2).sub(&c(int(1), 1));
        assert_eq!(sq.gcd(&other), y(1, 0).sub(&c(int(1), 1)));
    }

    #[test]
    fn exact_division() {
        let a = y(2, 0).add(&y(2, 1)).pow(2);
        let b = y(2, 0).add(&y(2, 1));
        assert_eq!(a.div_exact(&b), Some(b.clone()));
        assert_eq!(a.div_exact(&y(2, 0)), None);
    }

    #[test]
    fn display() {
        let p =
            y(2, 0).pow(2).mul(&y(2, 1)).sub(&y(2, 0).scale(&AlgebraicNumber::rational(rat(3, 2)))).add(&c(int(1), 2));
        assert_eq!(p.to_string(), "Y1^2*Y2 - 3/2*Y1 + 1");
        assert_eq!(y(1, 0).sub(&c(int(1), 1)).to_string(), "Y - 1");
        assert_eq!(c(int(-2), 1).to_string(), "-2");
    }

    #[test]
    fn degrees() {
        let p = y(2, 0).mul(&y(2, 1).pow(3)).add(&c(int(1), 2));
        assert_eq!(p.var_degree(1), 3);
        assert_eq!(p.var_degree(0), 1);
        assert_eq!(p.total_degree(), Some(4));
    }
}
