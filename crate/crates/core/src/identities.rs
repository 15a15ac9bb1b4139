//! Deterministic checks of the derangement-polynomial identities and of
//! `xi_2(n) = xi(n) + n`.
//!
//! Identities in the free variables `lambda`, `mu` are checked on the product
//! grid `{0..=d} x {0..=d}`, where `d` bounds the degree of both sides in
//! each variable. If the difference of the two sides were a nonzero
//! polynomial of degree at most `d` in each variable, it could not vanish
//! on all `(d+1)^2` grid points. So agreement on the grid proves the
//! identity for that `n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::lacasse::{conjectured_gap_scaled, xi2_scaled, xi2_via_derangement_scaled, xi_scaled};
use crate::polynomial::{binomial_power, IntPoly};
use crate::sequences::{int_pow, Int, Sequences};
use crate::umbra::{derangement_poly, derangement_poly_eval_int, substitute_shift, umbral_eval, UmbralExpr};

/// Failure witnesses kept per report.
pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    /// `D_n(l+m) = sum_k C(n,k) D_k(l) m^(n-k)`
    #[serde(rename = "EQ22")]
    Eq22,
    /// `D_n(l+m) = sum_k C(n,k) (l+k)^k (m-k-1)^(n-k)`
    #[serde(rename = "EQ23")]
    Eq23,
    /// `sum_k C(n,k) D_k(l) D_{n-k}(m+1) = (l+m-1)^(n+1) + (n-l-m+2) D_n(l+m)`
    #[serde(rename = "EQ24")]
    Eq24,
    /// `(D+l)(D+l+n+1)^n = (n+l)^(n+1)` under the umbra
    #[serde(rename = "UMBRAL_PROPERTY")]
    UmbralProperty,
    #[serde(rename = "CONJECTURE")]
    Conjecture,
    #[serde(rename = "XI_REWRITES")]
    XiRewrites,
    #[serde(rename = "PROOF_CHAIN")]
    ProofChain,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::Eq22,
        IdentityId::Eq23,
        IdentityId::Eq24,
        IdentityId::UmbralProperty,
        IdentityId::Conjecture,
        IdentityId::XiRewrites,
        IdentityId::ProofChain,
    ];

    /// Short lowercase name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            IdentityId::Eq22 => "eq22",
            IdentityId::Eq23 => "eq23",
            IdentityId::Eq24 => "eq24",
            IdentityId::UmbralProperty => "umbral",
            IdentityId::Conjecture => "conjecture",
            IdentityId::XiRewrites => "rewrites",
            IdentityId::ProofChain => "chain",
        }
    }

    /// Serialized tag, e.g. `EQ22`.
    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::Eq22 => "EQ22",
            IdentityId::Eq23 => "EQ23",
            IdentityId::Eq24 => "EQ24",
            IdentityId::UmbralProperty => "UMBRAL_PROPERTY",
            IdentityId::Conjecture => "CONJECTURE",
            IdentityId::XiRewrites => "XI_REWRITES",
            IdentityId::ProofChain => "PROOF_CHAIN",
        }
    }

    /// Smallest `n` in the identity's domain.
    pub fn min_n(self) -> usize {
        match self {
            IdentityId::Eq22 | IdentityId::Eq23 | IdentityId::Eq24 | IdentityId::UmbralProperty => 0,
            IdentityId::Conjecture | IdentityId::XiRewrites | IdentityId::ProofChain => 1,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.short_name().eq_ignore_ascii_case(s) || id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Where two sides disagreed: a grid point such as `lambda=1,mu=2`, or a
/// pair of proof lines such as `L2=L3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: String,
    #[serde(with = "decimal")]
    pub lhs: Int,
    #[serde(with = "decimal")]
    pub rhs: Int,
}

/// Outcome of checking one identity at one `n`.
///
/// `passed` is true exactly when `witnesses` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub identity: IdentityId,
    pub n: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

impl VerifyReport {
    /// `{identity, n, passed, witnesses: [{point, lhs, rhs}]}` with integers
    /// as decimal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct Checker {
    identity: IdentityId,
    n: usize,
    witnesses: Vec<Witness>,
    failed: bool,
}

impl Checker {
    fn new(identity: IdentityId, n: usize) -> Self {
        Self {
            identity,
            n,
            witnesses: Vec::new(),
            failed: false,
        }
    }

    fn check(&mut self, point: impl FnOnce() -> String, lhs: Int, rhs: Int) {
        if lhs != rhs {
            self.failed = true;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(Witness { point: point(), lhs, rhs });
            }
        }
    }

    fn finish(self) -> VerifyReport {
        debug_assert_eq!(self.failed, !self.witnesses.is_empty());
        VerifyReport {
            identity: self.identity,
            n: self.n,
            passed: !self.failed,
            witnesses: self.witnesses,
        }
    }
}

/// `D_k(x)` for `k <= max_k`, `x` in `0..=max_x`.
struct DerangementValues {
    values: Vec<Vec<Int>>,
}

impl DerangementValues {
    fn new(seq: &Sequences, max_k: usize, max_x: usize) -> Self {
        let values = (0..=max_k)
            .map(|k| {
                let poly = derangement_poly(seq, k);
                (0..=max_x).map(|x| poly.eval_int(&Int::from(x))).collect()
            })
            .collect();
        Self { values }
    }

    fn get(&self, k: usize, x: usize) -> &Int {
        &self.values[k][x]
    }
}

/// Powers `base^e` for `e` in `0..=max_e`.
fn powers(base: &Int, max_e: usize) -> Vec<Int> {
    let mut out = Vec::with_capacity(max_e + 1);
    let mut acc = Int::from(1);
    for _ in 0..=max_e {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

fn grid_point(lambda: usize, mu: usize) -> String {
    format!("lambda={lambda},mu={mu}")
}

/// `D_n(lambda+mu) = sum_k C(n,k) D_k(lambda) mu^(n-k)` on `{0..=n}^2`.
pub fn verify_basic_property(seq: &Sequences, n: usize) -> VerifyReport {
    let row = seq.binomial_row(n);
    let table = DerangementValues::new(seq, n, 2 * n);
    let mut checker = Checker::new(IdentityId::Eq22, n);
    for mu in 0..=n {
        let mu_pow = powers(&Int::from(mu), n);
        for lambda in 0..=n {
            let lhs = table.get(n, lambda + mu).clone();
            let rhs: Int = (0..=n)
                .map(|k| &row[k] * table.get(k, lambda) * &mu_pow[n - k])
                .sum();
            checker.check(|| grid_point(lambda, mu), lhs, rhs);
        }
    }
    checker.finish()
}

/// `D_n(lambda+mu) = sum_k C(n,k) (lambda+k)^k (mu-k-1)^(n-k)` on `{0..=n}^2`.
pub fn verify_abel(seq: &Sequences, n: usize) -> VerifyReport {
    let row = seq.binomial_row(n);
    let poly = derangement_poly(seq, n);
    let mut checker = Checker::new(IdentityId::Eq23, n);
    for lambda in 0..=n {
        for mu in 0..=n {
            let lhs = poly.eval_int(&Int::from(lambda + mu));
            let rhs: Int = (0..=n)
                .map(|k| {
                    let left = int_pow(&Int::from(lambda + k), k);
                    let right = int_pow(&(Int::from(mu) - k - 1), n - k);
                    &row[k] * left * right
                })
                .sum();
            checker.check(|| grid_point(lambda, mu), lhs, rhs);
        }
    }
    checker.finish()
}

/// `sum_k C(n,k) D_k(lambda) D_{n-k}(mu+1) = (lambda+mu-1)^(n+1) + (n-lambda-mu+2) D_n(lambda+mu)`
/// on `{0..=n+1}^2`.
pub fn verify_recursion(seq: &Sequences, n: usize) -> VerifyReport {
    let row = seq.binomial_row(n);
    let side = n + 1;
    let table = DerangementValues::new(seq, n, 2 * side);
    let mut checker = Checker::new(IdentityId::Eq24, n);
    for lambda in 0..=side {
        for mu in 0..=side {
            let lhs: Int = (0..=n)
                .map(|k| &row[k] * table.get(k, lambda) * table.get(n - k, mu + 1))
                .sum();
            let sum = Int::from(lambda + mu);
            let power = int_pow(&(&sum - 1), n + 1);
            let weight = Int::from(n + 2) - &sum;
            let rhs = power + weight * table.get(n, lambda + mu);
            checker.check(|| grid_point(lambda, mu), lhs, rhs);
        }
    }
    checker.finish()
}

/// `(D+lambda)(D+lambda+n+1)^n` umbrally equals `(n+lambda)^(n+1)`, for
/// `lambda` in `0..=n+1`.
pub fn verify_umbral_property(seq: &Sequences, n: usize) -> VerifyReport {
    let mut checker = Checker::new(IdentityId::UmbralProperty, n);
    for lambda in 0..=n + 1 {
        let shift = Int::from(lambda);
        let expr: UmbralExpr = (&binomial_power(seq, &shift, 1)
            * &binomial_power(seq, &(&shift + n + 1), n))
            .into();
        let lhs = umbral_eval(seq, &expr);
        let rhs = int_pow(&Int::from(n + lambda), n + 1);
        checker.check(|| format!("lambda={lambda}"), lhs, rhs);
    }
    checker.finish()
}

/// `n^n xi_2(n) = n^n xi(n) + n^(n+1)`.
pub fn verify_conjecture(seq: &Sequences, n: usize) -> Result<VerifyReport> {
    require_positive("verify_conjecture", n)?;
    let mut checker = Checker::new(IdentityId::Conjecture, n);
    let lhs = xi2_scaled(seq, n)?;
    let rhs = xi_scaled(seq, n)? + conjectured_gap_scaled(n);
    checker.check(|| "scaled".to_string(), lhs, rhs);
    Ok(checker.finish())
}

/// `n^n xi(n) = D_n(n+1)` and `n^n xi_2(n) = sum_k C(n,k) k^k D_{n-k}(n-k+1)`.
pub fn verify_xi_rewrites(seq: &Sequences, n: usize) -> Result<VerifyReport> {
    require_positive("verify_xi_rewrites", n)?;
    let mut checker = Checker::new(IdentityId::XiRewrites, n);
    checker.check(
        || "xi".to_string(),
        xi_scaled(seq, n)?,
        derangement_poly_eval_int(seq, n, &Int::from(n + 1)),
    );
    checker.check(
        || "xi2".to_string(),
        xi2_scaled(seq, n)?,
        xi2_via_derangement_scaled(seq, n)?,
    );
    Ok(checker.finish())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub label: &'static str,
    pub value: Int,
}

/// The six lines of the umbral derivation, each computed on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub n: usize,
    pub lines: Vec<ProofLine>,
}

pub const PROOF_LABELS: [&str; 6] = [
    "L1: n^(n+1) + D_n(n+1)",
    "L2: sum_k C(n,k) D_k(0) D_{n-k}(n+2)",
    "L3: D_n(mu) at mu = D+n+2",
    "L4: sum_k C(n,k) k^k (mu-k-1)^(n-k) at mu = D+n+2",
    "L5: sum_k C(n,k) k^k D_{n-k}(n-k+1)",
    "L6: n^n xi_2(n)",
];

impl ProofTrace {
    /// Index `i` of the first pair with `lines[i] != lines[i + 1]`.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.lines.windows(2).position(|w| w[0].value != w[1].value)
    }

    pub fn is_consistent(&self) -> bool {
        self.first_mismatch().is_none()
    }

    /// The common value of the lines, if they all agree.
    pub fn value(&self) -> Option<&Int> {
        if self.is_consistent() {
            self.lines.first().map(|l| &l.value)
        } else {
            None
        }
    }

    pub fn to_report(&self) -> VerifyReport {
        let mut checker = Checker::new(IdentityId::ProofChain, self.n);
        if let Some(i) = self.first_mismatch() {
            let (a, b) = (&self.lines[i], &self.lines[i + 1]);
            checker.check(|| format!("L{}=L{}", i + 1, i + 2), a.value.clone(), b.value.clone());
        }
        checker.finish()
    }
}

/// Recomputes every line of the derivation of `xi_2(n) = xi(n) + n`.
pub fn replay_proof(seq: &Sequences, n: usize) -> Result<ProofTrace> {
    require_positive("replay_proof", n)?;
    let row = seq.binomial_row(n);
    let nn = Int::from(n);
    let shift = Int::from(n + 2);

    // (2.4) at lambda = 0, mu = n + 1
    let l1 = int_pow(&nn, n + 1) + derangement_poly_eval_int(seq, n, &Int::from(n + 1));

    let l2: Int = (0..=n)
        .map(|k| {
            &row[k]
                * derangement_poly_eval_int(seq, k, &Int::from(0))
                * derangement_poly_eval_int(seq, n - k, &shift)
        })
        .sum();

    // D_n read as a polynomial in mu, shifted by the umbra
    let l3 = umbral_eval(seq, &substitute_shift(&derangement_poly(seq, n), &shift));

    // Abel expansion at lambda = 0: expand each (mu-k-1)^(n-k) in mu, then shift
    let l4: Int = (0..=n)
        .map(|k| {
            let in_mu: IntPoly = binomial_power(seq, &Int::from(-(k as i64) - 1), n - k);
            let shifted = substitute_shift(&in_mu, &shift);
            &row[k] * seq.self_power(k) * umbral_eval(seq, &shifted)
        })
        .sum();

    let l5: Int = (0..=n)
        .map(|k| {
            let m = n - k;
            &row[k] * seq.self_power(k) * derangement_poly_eval_int(seq, m, &Int::from(m + 1))
        })
        .sum();

    let l6 = xi2_scaled(seq, n)?;

    let lines = PROOF_LABELS
        .iter()
        .zip([l1, l2, l3, l4, l5, l6])
        .map(|(&label, value)| ProofLine { label, value })
        .collect();
    Ok(ProofTrace { n, lines })
}

pub fn verify_proof_chain(seq: &Sequences, n: usize) -> Result<VerifyReport> {
    Ok(replay_proof(seq, n)?.to_report())
}

/// Runs the verifier for `identity` at `n`.
pub fn verify(seq: &Sequences, identity: IdentityId, n: usize) -> Result<VerifyReport> {
    match identity {
        IdentityId::Eq22 => Ok(verify_basic_property(seq, n)),
        IdentityId::Eq23 => Ok(verify_abel(seq, n)),
        IdentityId::Eq24 => Ok(verify_recursion(seq, n)),
        IdentityId::UmbralProperty => Ok(verify_umbral_property(seq, n)),
        IdentityId::Conjecture => verify_conjecture(seq, n),
        IdentityId::XiRewrites => verify_xi_rewrites(seq, n),
        IdentityId::ProofChain => verify_proof_chain(seq, n),
    }
}
