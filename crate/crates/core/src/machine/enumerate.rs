//! Host-side mirrors of the fixed enumeration orders that the stdlib
//! programs walk through, used to predict their behavior exactly.
//!
//! ℚ is ordered by height `|p| + q` over reduced fractions `p/q`, ties by
//! increasing `|p|`, with 0 first and every positive value followed by its
//! negation: `0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 3, -3, 1/4, …`.
//!
//! Nonzero polynomials `c_0 + c_1 X + … + c_L X^L` are ordered by weight
//! `w = L + r_0 + … + r_L`, where `r_i` is the position of `c_i` in the ℚ
//! order. The map `(r_0 + 1, …, r_{L-1} + 1, r_L)` is a bijection between
//! polynomials of weight `w` and compositions of `w`; within one weight the
//! compositions are taken in lexicographic order, which is the order of a
//! `(w-1)`-bit counter whose most significant bit says whether unit 1 joins
//! unit 2 in the same part. Bivariate polynomials use the same scheme over
//! the graded monomial list `1, Y1, Y2, Y1^2, Y1*Y2, Y2^2, …`.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{AlgebraicNumber, MultiPoly, NumberField, Rational, UniPoly};

/// Successor in the ℚ order.
pub fn next_rational(r: &Rational) -> Rational {
    if r.is_zero() {
        return Rational::from_integer(1.into());
    }
    if r.is_positive() {
        return -r.clone();
    }
    let (mut p, mut q) = ((-r.numer()).clone(), r.denom().clone());
    loop {
        // next fraction of the same height, or the first of the next height
        if q > 1.into() {
            p += 1;
            q -= 1;
        } else {
            let h = &p + &q;
            p = 1.into();
            q = h;
        }
        if p.gcd(&q) == 1.into() {
            return Rational::new(p, q);
        }
    }
}

pub fn rational_at(n: u64) -> Rational {
    let mut r = Rational::zero();
    for _ in 0..n {
        r = next_rational(&r);
    }
    r
}

pub fn rational_index(target: &Rational) -> u64 {
    let mut r = Rational::zero();
    let mut i = 0;
    while &r != target {
        r = next_rational(&r);
        i += 1;
    }
    i
}

/// The `n`-th composition (0-based) in the weight-then-lexicographic order.
pub fn composition_at(n: u64) -> Vec<u64> {
    let mut w = 1u32;
    while n >= (1u64 << w) - 1 {
        w += 1;
    }
    let t = n - ((1u64 << (w - 1)) - 1);
    let mut parts = Vec::new();
    let mut cur = 1u64;
    for j in 1..w {
        let join = (t >> (w - 1 - j)) & 1 == 1;
        if join {
            cur += 1;
        } else {
            parts.push(cur);
            cur = 1;
        }
    }
    parts.push(cur);
    parts
}

pub fn composition_index(parts: &[u64]) -> u64 {
    let w: u64 = parts.iter().sum();
    let mut t = 0u64;
    for (k, &p) in parts.iter().enumerate() {
        for u in 0..p {
            let last = k + 1 == parts.len() && u + 1 == p;
            if !last {
                t = (t << 1) | u64::from(u + 1 < p);
            }
        }
    }
    ((1u64 << (w - 1)) - 1) + t
}

/// Positions in the ℚ order of the coefficients of the `n`-th polynomial.
pub fn coefficient_indices_at(n: u64) -> Vec<u64> {
    let mut parts = composition_at(n);
    let last = parts.len() - 1;
    for p in &mut parts[..last] {
        *p -= 1;
    }
    parts
}

fn composition_of(indices: &[u64]) -> Vec<u64> {
    let last = indices.len() - 1;
    indices.iter().enumerate().map(|(i, &r)| if i < last { r + 1 } else { r }).collect()
}

/// The `n`-th nonzero polynomial in ℚ[X].
pub fn poly_at(n: u64) -> UniPoly {
    UniPoly::new(coefficient_indices_at(n).into_iter().map(rational_at).collect())
}

pub fn poly_index(p: &UniPoly) -> Option<u64> {
    if p.is_zero() {
        return None;
    }
    let idx: Vec<u64> = p.coeffs().iter().map(rational_index).collect();
    Some(composition_index(&composition_of(&idx)))
}

/// Exponents `(a, b)` of the `i`-th monomial `Y1^a Y2^b` in graded order.
pub fn monomial_at(i: u64) -> (u32, u32) {
    let mut d = 0u64;
    let mut start = 0u64;
    while i > start + d {
        start += d + 1;
        d += 1;
    }
    let b = (i - start) as u32;
    (d as u32 - b, b)
}

pub fn monomial_index(a: u32, b: u32) -> u64 {
    let d = (a + b) as u64;
    d * (d + 1) / 2 + b as u64
}

/// The `n`-th nonzero polynomial in ℚ[Y1, Y2].
pub fn bipoly_at(n: u64) -> MultiPoly {
    let q = NumberField::rationals();
    let terms = coefficient_indices_at(n).into_iter().enumerate().map(|(i, r)| {
        let (a, b) = monomial_at(i as u64);
        (vec![a, b], AlgebraicNumber::rational(rational_at(r)))
    });
    MultiPoly::from_terms(&q, 2, terms)
}

pub fn bipoly_index(p: &MultiPoly) -> Option<u64> {
    if p.is_zero() || p.nvars() != 2 || !p.has_rational_coeffs() {
        return None;
    }
    let top = p.terms().map(|(m, _)| monomial_index(m.0[0], m.0[1])).max()?;
    let mut idx = vec![0u64; top as usize + 1];
    for (m, c) in p.terms() {
        idx[monomial_index(m.0[0], m.0[1]) as usize] = rational_index(c.as_rational()?);
    }
    Some(composition_index(&composition_of(&idx)))
}
