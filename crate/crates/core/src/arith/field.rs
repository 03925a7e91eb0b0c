//! Real number fields ℚ(α) and their elements.
//!
//! A field is given by the monic irreducible minimal polynomial of α and a
//! rational interval isolating the one real root that α denotes. Elements are
//! coordinate vectors in the power basis `1, α, …, α^(d-1)`. Because the
//! minimal polynomial is irreducible, an element is zero exactly when all of
//! its coordinates are zero; every nonzero element's sign is then settled by
//! refining the isolating interval far enough.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use super::interval::RatInterval;
use super::rational::{exact_rational_root, fmt_rational, is_prime, parse_rational, two_pow, Rational, Sign};
use super::unipoly::{sturm_count, UniPoly};
use super::ArithError;

#[derive(Debug)]
pub struct NumberField {
    name: String,
    min_poly: UniPoly,
    interval: RatInterval,
    sturm: Vec<UniPoly>,
    /// Isolating interval pre-refined to width ≤ 2^-64 so that most sign
    /// queries settle without further bisection.
    tight: RatInterval,
}

/// Shared handle; fields are immutable once built.
pub type FieldRef = Arc<NumberField>;

static RATIONALS: OnceLock<FieldRef> = OnceLock::new();

impl NumberField {
    /// The field ℚ itself, as the degree-one field generated by the root of `X`.
    pub fn rationals() -> FieldRef {
        RATIONALS
            .get_or_init(|| {
                let iv = RatInterval::new(-Rational::one(), Rational::one());
                Arc::new(NumberField {
                    name: "Q".into(),
                    min_poly: UniPoly::x(),
                    sturm: UniPoly::x().sturm_sequence(),
                    interval: iv.clone(),
                    tight: iv,
                })
            })
            .clone()
    }

    /// Builds ℚ(α) from a monic polynomial and an interval isolating α.
    ///
    /// The polynomial must be irreducible over ℚ. That is only partially
    /// checked here (square-freeness and absence of rational roots for
    /// degree ≥ 2); callers constructing fields from untrusted input should
    /// stick to polynomials whose irreducibility they know.
    pub fn new(name: impl Into<String>, min_poly: UniPoly, lo: Rational, hi: Rational) -> Result<FieldRef, ArithError> {
        let deg = min_poly.degree().ok_or(ArithError::ZeroPolynomial)?;
        if deg == 0 {
            return Err(ArithError::InvalidField("minimal polynomial must have positive degree".into()));
        }
        if !min_poly.leading().unwrap().is_one() {
            return Err(ArithError::InvalidField(format!("minimal polynomial {min_poly} is not monic")));
        }
        if lo >= hi {
            return Err(ArithError::InvalidField("isolating interval must have lo < hi".into()));
        }
        if deg == 1 {
            // Every degree-one field is ℚ; keep a single canonical representative.
            return Ok(Self::rationals());
        }
        if min_poly.gcd(&min_poly.derivative()).degree() != Some(0) {
            return Err(ArithError::InvalidField(format!("{min_poly} is not square-free")));
        }
        if !min_poly.rational_roots().is_empty() {
            return Err(ArithError::InvalidField(format!("{min_poly} has a rational root, so it is reducible")));
        }
        if min_poly.eval(&lo).is_zero() || min_poly.eval(&hi).is_zero() {
            return Err(ArithError::InvalidField("interval endpoint is a root".into()));
        }
        let sturm = min_poly.sturm_sequence();
        if sturm_count(&sturm, &lo, &hi) != 1 {
            return Err(ArithError::InvalidField(format!(
                "interval [{}, {}] does not isolate exactly one root of {min_poly}",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        }
        let interval = RatInterval::new(lo, hi);
        let tight = refine_root(&min_poly, &interval, &two_pow(-64));
        Ok(Arc::new(NumberField { name: name.into(), min_poly, interval, sturm, tight }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn min_poly(&self) -> &UniPoly {
        &self.min_poly
    }

    pub fn isolating_interval(&self) -> &RatInterval {
        &self.interval
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Number of roots of the minimal polynomial in `(lo, hi]`.
    pub fn root_count(&self, iv: &RatInterval) -> usize {
        sturm_count(&self.sturm, iv.lo(), iv.hi())
    }

    /// An interval of width at most `width` containing α.
    pub fn generator_enclosure(&self, width: &Rational) -> RatInterval {
        if self.is_rational() {
            return RatInterval::point(Rational::zero());
        }
        if self.tight.width() <= *width {
            return self.tight.clone();
        }
        refine_root(&self.min_poly, &self.tight, width)
    }

    /// Same field: identical minimal polynomial and the same root.
    pub fn same_as(self: &FieldRef, other: &FieldRef) -> bool {
        if Arc::ptr_eq(self, other) {
            return true;
        }
        if self.min_poly != other.min_poly {
            return false;
        }
        if self.is_rational() {
            return true;
        }
        match self.interval.intersect(&other.interval) {
            Some(iv) => {
                // Endpoints of the intersection are endpoints of one of the two
                // isolating intervals and hence never roots.
                iv.width().is_positive() && self.root_count(&iv) == 1
            }
            None => false,
        }
    }

    /// Serialized form `(min_poly; lo; hi)`.
    pub fn spec_string(&self) -> String {
        format!("{}; {}; {}", self.min_poly, fmt_rational(self.interval.lo()), fmt_rational(self.interval.hi()))
    }

    /// Parses `minpoly;lo;hi`, optionally prefixed by `name=`.
    pub fn parse(text: &str) -> Result<FieldRef, ArithError> {
        let (name, rest) = match text.split_once('=') {
            Some((n, r)) if !n.contains(';') => (n.trim().to_string(), r),
            _ => ("K".to_string(), text),
        };
        let parts: Vec<&str> = rest.split(';').collect();
        if parts.len() != 3 {
            return Err(ArithError::Parse(format!("field spec must be `minpoly;lo;hi`, got {text:?}")));
        }
        let poly: UniPoly = parts[0].parse()?;
        let lo = parse_rational(parts[1])?;
        let hi = parse_rational(parts[2])?;
        NumberField::new(name, poly.monic(), lo, hi)
    }

    fn reduce(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        let mp = self.min_poly.coeffs();
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            // α^d = -(c_0 + … + c_{d-1} α^{d-1}) since the min poly is monic.
            let shift = coeffs.len() - d;
            for (j, c) in mp[..d].iter().enumerate() {
                coeffs[shift + j] -= &top * c;
            }
        }
        coeffs.resize(d, Rational::zero());
        coeffs
    }
}

/// Bisects `iv` (which isolates a simple root of `p`) until its width is at
/// most `width`. Relies on `p` changing sign across the root; rational
/// midpoints that hit the root exactly collapse the interval to a point.
pub(crate) fn refine_root(p: &UniPoly, iv: &RatInterval, width: &Rational) -> RatInterval {
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    let s_lo = p.sign_at(&lo);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let s = p.sign_at(&mid);
        if s == Sign::Zero {
            return RatInterval::point(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RatInterval::new(lo, hi)
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if self.min_poly != other.min_poly {
            return false;
        }
        if self.is_rational() {
            return true;
        }
        match self.interval.intersect(&other.interval) {
            Some(iv) => iv.width().is_positive() && self.root_count(&iv) == 1,
            None => false,
        }
    }
}

/// An element of a real number field.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    field: FieldRef,
    coords: Vec<Rational>,
}

/// The four field operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn mnemonic(self) -> &'static str {
        match self {
            ArithOp::Add => "ADD",
            ArithOp::Sub => "SUB",
            ArithOp::Mul => "MUL",
            ArithOp::Div => "DIV",
        }
    }
}

impl AlgebraicNumber {
    pub fn new(field: FieldRef, coords: Vec<Rational>) -> Result<Self, ArithError> {
        if coords.len() != field.degree() {
            return Err(ArithError::InvalidField(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        Ok(AlgebraicNumber { field, coords })
    }

    pub fn rational(r: Rational) -> Self {
        AlgebraicNumber { field: NumberField::rationals(), coords: vec![r] }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn zero_in(field: &FieldRef) -> Self {
        AlgebraicNumber { field: field.clone(), coords: vec![Rational::zero(); field.degree()] }
    }

    pub fn one_in(field: &FieldRef) -> Self {
        Self::rational_in(field, Rational::one())
    }

    pub fn rational_in(field: &FieldRef, r: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = r;
        AlgebraicNumber { field: field.clone(), coords }
    }

    /// α itself (for ℚ this is 0, the root of `X`).
    pub fn generator(field: &FieldRef) -> Self {
        if field.is_rational() {
            return Self::zero_in(field);
        }
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[1] = Rational::one();
        AlgebraicNumber { field: field.clone(), coords }
    }

    /// Element `p(α)` for a rational polynomial `p`.
    pub fn from_poly(field: &FieldRef, p: &UniPoly) -> Self {
        if field.is_rational() {
            return Self::rational(p.eval(&Rational::zero()));
        }
        AlgebraicNumber { field: field.clone(), coords: field.reduce(p.coeffs().to_vec()) }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Coordinates as a polynomial in α.
    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(self.coords.clone())
    }

    /// Moves the element into `target`, which must be its own field or an
    /// extension of ℚ receiving a rational.
    pub fn lift_to(&self, target: &FieldRef) -> Result<AlgebraicNumber, ArithError> {
        if self.field.same_as(target) {
            return Ok(AlgebraicNumber { field: target.clone(), coords: self.coords.clone() });
        }
        match self.as_rational() {
            Some(r) => Ok(Self::rational_in(target, r.clone())),
            None => Err(ArithError::FieldMismatch),
        }
    }

    /// The field both operands can be computed in, if there is one.
    pub fn common_field(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<FieldRef, ArithError> {
        if a.field.same_as(&b.field) {
            Ok(a.field.clone())
        } else if a.field.is_rational() {
            Ok(b.field.clone())
        } else if b.field.is_rational() || b.is_rational() {
            Ok(a.field.clone())
        } else if a.is_rational() {
            Ok(b.field.clone())
        } else {
            Err(ArithError::FieldMismatch)
        }
    }

    fn aligned(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<(AlgebraicNumber, AlgebraicNumber), ArithError> {
        if Arc::ptr_eq(&a.field, &b.field) {
            return Ok((a.clone(), b.clone()));
        }
        let f = Self::common_field(a, b)?;
        Ok((a.lift_to(&f)?, b.lift_to(&f)?))
    }

    pub fn try_add(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        let (a, b) = Self::aligned(self, other)?;
        Ok(AlgebraicNumber { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(), field: a.field })
    }

    pub fn try_sub(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        let (a, b) = Self::aligned(self, other)?;
        Ok(AlgebraicNumber { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(), field: a.field })
    }

    pub fn try_mul(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        let (a, b) = Self::aligned(self, other)?;
        if a.field.is_rational() {
            return Ok(AlgebraicNumber { coords: vec![&a.coords[0] * &b.coords[0]], field: a.field });
        }
        let d = a.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coords = a.field.reduce(prod);
        Ok(AlgebraicNumber { coords, field: a.field })
    }

    pub fn try_div(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo the
    /// minimal polynomial.
    pub fn inverse(&self) -> Result<AlgebraicNumber, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.field.is_rational() {
            return Ok(AlgebraicNumber { coords: vec![self.coords[0].recip()], field: self.field.clone() });
        }
        // Invariant: s * self ≡ r (mod m).
        let m = self.field.min_poly().clone();
        let (mut r0, mut r1) = (m, self.to_poly());
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
        while r1.degree().unwrap_or(0) > 0 {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r1.is_zero() {
            // Only possible if the minimal polynomial was reducible.
            return Err(ArithError::InvalidField("element shares a factor with the minimal polynomial".into()));
        }
        let c = r1.coeff(0).recip();
        Ok(AlgebraicNumber::from_poly(&self.field, &s1.scale(&c)))
    }

    pub fn neg(&self) -> AlgebraicNumber {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn pow(&self, k: u32) -> AlgebraicNumber {
        let mut acc = AlgebraicNumber::one_in(&self.field);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> AlgebraicNumber {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Exact sign.
    pub fn sign(&self) -> Sign {
        if let Some(r) = self.as_rational() {
            return Sign::of(r);
        }
        // Nonzero and irrational: refine until the enclosure excludes zero.
        let p = self.to_poly();
        let mut iv = self.field.tight.clone();
        let mut width = iv.width();
        loop {
            if let Some(s) = p.eval_interval(&iv).strict_sign() {
                return s;
            }
            width /= Rational::from_integer(1u64.checked_shl(16).unwrap().into());
            iv = refine_root(self.field.min_poly(), &iv, &width);
            debug_assert_eq!(self.field.root_count(&iv), 1);
        }
    }

    /// Rational interval of width at most `width` containing the value.
    pub fn enclosure(&self, width: &Rational) -> RatInterval {
        if let Some(r) = self.as_rational() {
            return RatInterval::point(r.clone());
        }
        let p = self.to_poly();
        let mut w = width.clone();
        loop {
            let iv = self.field.generator_enclosure(&w);
            let out = p.eval_interval(&iv);
            if out.width() <= *width {
                return out;
            }
            w /= Rational::from_integer(16.into());
        }
    }

    pub fn to_f64(&self) -> f64 {
        super::rational::to_f64(&self.enclosure(&two_pow(-60)).midpoint())
    }

    /// Parses a rational literal or a coordinate literal `name:(c0,c1,…)`.
    pub fn parse_with(text: &str, fields: &[FieldRef]) -> Result<AlgebraicNumber, ArithError> {
        let t = text.trim();
        if let Some((name, rest)) = t.split_once(':') {
            let field = fields
                .iter()
                .find(|f| f.name() == name.trim())
                .ok_or_else(|| ArithError::Parse(format!("unknown field {:?}", name.trim())))?;
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| ArithError::Parse(format!("coordinate literal needs parentheses: {t:?}")))?;
            let mut coords = inner.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
            if coords.len() > field.degree() {
                return Err(ArithError::Parse(format!("too many coordinates for field {}", field.name())));
            }
            coords.resize(field.degree(), Rational::zero());
            return AlgebraicNumber::new(field.clone(), coords);
        }
        Ok(AlgebraicNumber::rational(parse_rational(t)?))
    }
}

/// `a op b` with the checked semantics the machine uses.
pub fn field_arith(a: &AlgebraicNumber, b: &AlgebraicNumber, op: ArithOp) -> Result<AlgebraicNumber, ArithError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

pub fn sign_at(a: &AlgebraicNumber) -> Sign {
    a.sign()
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        match Self::aligned(self, other) {
            Ok((a, b)) => a.coords == b.coords,
            Err(_) => false,
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    /// Rationals print as `p/q`; other elements as `name:(c0,c1,…)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(r));
        }
        let cs: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "{}:({})", self.field.name(), cs.join(","))
    }
}

/// `(field, c)` where `c = r^(1/m)` is the positive real root.
///
/// Perfect powers come back as rationals in ℚ. Otherwise `m` must be prime,
/// in which case `Y^m - r` is irreducible and generates the returned field.
pub fn nth_root_field(r: &Rational, m: u32) -> Result<(FieldRef, AlgebraicNumber), ArithError> {
    if !r.is_positive() {
        return Err(ArithError::Domain(format!("nth_root_field needs a positive radicand, got {}", fmt_rational(r))));
    }
    if m == 0 {
        return Err(ArithError::Domain("root index must be at least 1".into()));
    }
    if let Some(root) = exact_rational_root(r, m) {
        return Ok((NumberField::rationals(), AlgebraicNumber::rational(root)));
    }
    if !is_prime(m as u64) {
        return Err(ArithError::UnsupportedDegree(m));
    }
    let mut coeffs = vec![Rational::zero(); m as usize + 1];
    coeffs[0] = -r.clone();
    coeffs[m as usize] = Rational::one();
    let poly = UniPoly::new(coeffs);
    // Integer bracket k < r^(1/m) < k+1; equality is excluded by the
    // perfect-power check when k ≥ 1, and k = 0 is never a root.
    let mut k = num_bigint::BigInt::zero();
    while Rational::from_integer(num_traits::pow(&k + 1, m as usize)) < *r {
        k += 1;
    }
    let lo = Rational::from_integer(k.clone());
    let hi = Rational::from_integer(k + 1);
    let name = format!("root{m}({})", fmt_rational(r));
    let field = NumberField::new(name, poly, lo, hi)?;
    let g = AlgebraicNumber::generator(&field);
    Ok((field, g))
}
