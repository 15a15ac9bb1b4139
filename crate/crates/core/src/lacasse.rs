//! Lacasse's `xi(n)` and `xi_2(n)`, exactly.
//!
//! Both are sums of terms `(k/n)^k (j/n)^j ...` whose exponents add up to
//! `n`, so `n^n * xi(n)` and `n^n * xi_2(n)` are integers. Every function
//! here works with those scaled integers; the rational values are derived
//! by a single division at the end. `0^0 = 1` throughout.

use num_traits::Zero;

use crate::error::{require_positive, Result};
use crate::polynomial::Rat;
use crate::sequences::{int_pow, Int, Sequences};
use crate::umbra::derangement_poly_eval_int;

/// `xi(n)` or `xi_2(n)` in both scaled and reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiValue {
    pub n: usize,
    /// `n^n` times the value.
    pub scaled: Int,
    pub value: Rat,
}

impl XiValue {
    fn from_scaled(seq: &Sequences, n: usize, scaled: Int) -> Self {
        let value = Rat::new(scaled.clone(), seq.self_power(n));
        Self { n, scaled, value }
    }

    pub fn xi(seq: &Sequences, n: usize) -> Result<Self> {
        Ok(Self::from_scaled(seq, n, xi_scaled(seq, n)?))
    }

    pub fn xi2(seq: &Sequences, n: usize) -> Result<Self> {
        Ok(Self::from_scaled(seq, n, xi2_scaled(seq, n)?))
    }
}

/// `sum_k C(n,k) k^k (n-k)^(n-k)`.
pub fn xi_scaled(seq: &Sequences, n: usize) -> Result<Int> {
    require_positive("xi_scaled", n)?;
    let row = seq.binomial_row(n);
    Ok((0..=n)
        .map(|k| &row[k] * seq.self_power(k) * seq.self_power(n - k))
        .sum())
}

pub fn xi(seq: &Sequences, n: usize) -> Result<Rat> {
    Ok(XiValue::xi(seq, n)?.value)
}

/// The double sum `sum_{k+j<=n} C(n,k) C(n-k,j) k^k j^j (n-k-j)^(n-k-j)`.
pub fn xi2_scaled(seq: &Sequences, n: usize) -> Result<Int> {
    require_positive("xi2_scaled", n)?;
    let outer = seq.binomial_row(n);
    let mut total = Int::zero();
    for k in 0..=n {
        let rest = n - k;
        let inner_row = seq.binomial_row(rest);
        let inner: Int = (0..=rest)
            .map(|j| &inner_row[j] * seq.self_power(j) * seq.self_power(rest - j))
            .sum();
        total += &outer[k] * seq.self_power(k) * inner;
    }
    Ok(total)
}

pub fn xi2(seq: &Sequences, n: usize) -> Result<Rat> {
    Ok(XiValue::xi2(seq, n)?.value)
}

/// `sum_k C(n,k) k^k D_{n-k}(n-k+1)`.
pub fn xi2_via_derangement_scaled(seq: &Sequences, n: usize) -> Result<Int> {
    require_positive("xi2_via_derangement_scaled", n)?;
    let row = seq.binomial_row(n);
    Ok((0..=n)
        .map(|k| {
            let m = n - k;
            &row[k] * seq.self_power(k) * derangement_poly_eval_int(seq, m, &Int::from(m + 1))
        })
        .sum())
}

/// `sum_k C(n,k) (k+1)! n^(n-k)`.
pub fn xi2_closed_scaled(seq: &Sequences, n: usize) -> Result<Int> {
    require_positive("xi2_closed_scaled", n)?;
    let row = seq.binomial_row(n);
    let base = Int::from(n);
    let mut n_pow = Int::from(1);
    let mut total = Int::zero();
    // k runs downward so n^(n-k) is built one factor at a time
    for k in (0..=n).rev() {
        total += &row[k] * seq.factorial(k + 1) * &n_pow;
        n_pow *= &base;
    }
    Ok(total)
}

/// `n^(n+1)`, the scaled form of the gap `xi_2(n) - xi(n) = n`.
pub fn conjectured_gap_scaled(n: usize) -> Int {
    int_pow(&Int::from(n), n + 1)
}
