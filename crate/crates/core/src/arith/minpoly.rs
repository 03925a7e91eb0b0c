//! Minimal polynomials of field elements over ℚ.

use num_traits::{One, Zero};

use super::field::AlgebraicNumber;
use super::rational::Rational;
use super::unipoly::UniPoly;

/// Monic minimal polynomial of `a` over ℚ.
///
/// Finds the least `k` for which `1, a, …, a^k` are linearly dependent over
/// ℚ; the dependence is then unique up to scaling and, being of least degree,
/// irreducible.
pub fn minimal_polynomial(a: &AlgebraicNumber) -> UniPoly {
    if let Some(r) = a.as_rational() {
        return UniPoly::linear_root(r.clone());
    }
    let d = a.field().degree();
    let mut powers = vec![AlgebraicNumber::one_in(a.field())];
    for k in 1..=d {
        let next = powers[k - 1].try_mul(a).expect("same field");
        powers.push(next);
        if let Some(kernel) = kernel_vector(&powers) {
            let lead = kernel[k].clone();
            return UniPoly::new(kernel.into_iter().map(|c| c / &lead).collect());
        }
    }
    unreachable!("d+1 vectors in a d-dimensional space are dependent")
}

pub fn degree_over_q(a: &AlgebraicNumber) -> usize {
    minimal_polynomial(a).degree().unwrap()
}

/// A nonzero kernel vector of the matrix whose columns are the coordinate
/// vectors of `cols`, with last entry nonzero, if the columns are dependent
/// and the first `cols.len() - 1` of them are not.
fn kernel_vector(cols: &[AlgebraicNumber]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let d = cols[0].coords().len();
    // rows = coordinates, columns = powers
    let mut m: Vec<Vec<Rational>> = (0..d).map(|i| cols.iter().map(|c| c.coords()[i].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..d).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone().recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (x, p) in line.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() == n || pivots.contains(&(n - 1)) {
        return None;
    }
    // last column is free: set it to 1 and back-substitute
    let mut v = vec![Rational::zero(); n];
    v[n - 1] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][n - 1].clone();
    }
    Some(v)
}
