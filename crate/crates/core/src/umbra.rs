//! The umbra `D`: a linear functional on polynomials sending `D^n` to the
//! derangement number `D_n`.
//!
//! Expressions are always fully expanded as polynomials in `D` before the
//! functional is applied. `(D + lambda)^n` evaluates to the derangement
//! polynomial `D_n(lambda)`.

use std::fmt;
use std::ops::Deref;

use num_traits::Zero;

use crate::polynomial::{IntPoly, Rat};
use crate::sequences::{Int, Sequences};

/// A polynomial whose variable is the umbra `D`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UmbralExpr(IntPoly);

impl UmbralExpr {
    pub fn new(poly: IntPoly) -> Self {
        Self(poly)
    }

    pub fn poly(&self) -> &IntPoly {
        &self.0
    }

    pub fn into_poly(self) -> IntPoly {
        self.0
    }
}

impl From<IntPoly> for UmbralExpr {
    fn from(poly: IntPoly) -> Self {
        Self(poly)
    }
}

impl Deref for UmbralExpr {
    type Target = IntPoly;

    fn deref(&self) -> &IntPoly {
        &self.0
    }
}

impl fmt::Display for UmbralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.display_with("D").fmt(f)
    }
}

/// `sum_i c_i * D_i` for the coefficients `c_i` of `expr`.
pub fn umbral_eval(seq: &Sequences, expr: &UmbralExpr) -> Int {
    expr.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * seq.derangement(i))
        .sum()
}

/// `D_n(lambda) = sum_k C(n, k) * D_k * lambda^(n - k)` as a polynomial in
/// `lambda`.
pub fn derangement_poly(seq: &Sequences, n: usize) -> IntPoly {
    let row = seq.binomial_row(n);
    let coeffs = (0..=n)
        .map(|i| {
            let k = n - i;
            &row[k] * seq.derangement(k)
        })
        .collect();
    IntPoly::from_coeffs(coeffs)
}

pub fn derangement_poly_eval(seq: &Sequences, n: usize, x: &Rat) -> Rat {
    derangement_poly(seq, n).eval(x)
}

/// Integer-point shortcut for [`derangement_poly_eval`].
pub fn derangement_poly_eval_int(seq: &Sequences, n: usize, x: &Int) -> Int {
    derangement_poly(seq, n).eval_int(x)
}

/// Substitutes `mu = D + s` into `p(mu)` and expands in `D`.
///
/// Uses Horner's scheme on polynomials, `((a_d (D+s) + a_{d-1}) (D+s) + ...)`,
/// so no binomial expansion of `(D+s)^i` is formed.
pub fn substitute_shift(p: &IntPoly, s: &Int) -> UmbralExpr {
    let mut acc: Vec<Int> = Vec::with_capacity(p.coeffs().len());
    for a in p.coeffs().iter().rev() {
        // acc <- acc * (D + s) + a
        acc.push(Int::zero());
        for i in (0..acc.len()).rev() {
            let lower = if i > 0 { acc[i - 1].clone() } else { Int::zero() };
            let shifted = &acc[i] * s;
            acc[i] = shifted + lower;
        }
        acc[0] += a;
    }
    UmbralExpr(IntPoly::from_coeffs(acc))
}
