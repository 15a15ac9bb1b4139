//! Memoized exact integer sequences: derangement numbers, factorials,
//! binomial coefficients and the self-powers `m^m`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

/// Arbitrary-precision signed integer used for every count and coefficient.
pub type Int = BigInt;

/// A set of grow-only memo tables.
///
/// Each table is behind its own lock, so one `Sequences` can be shared by
/// many threads. Tables are extended on demand and never shrink.
///
/// A forked instance may carry *faults*: overrides added on top of selected
/// derangement numbers. Faults are applied when values are read and never
/// enter the recurrence, so exactly one `D_k` is wrong.
#[derive(Debug, Default)]
pub struct Sequences {
    derangements: RwLock<Vec<Int>>,
    factorials: RwLock<Vec<Int>>,
    binomial_rows: RwLock<Vec<Arc<[Int]>>>,
    self_powers: RwLock<Vec<Int>>,
    faults: BTreeMap<usize, Int>,
}

static GLOBAL: OnceLock<Sequences> = OnceLock::new();

/// Reads entry `n`, first extending the table with `next(table, i)` for every
/// missing index `i`.
fn memo<T: Clone>(lock: &RwLock<Vec<T>>, n: usize, next: impl Fn(&[T], usize) -> T) -> T {
    if let Some(v) = lock.read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = lock.write().unwrap();
    while table.len() <= n {
        let i = table.len();
        let v = next(&table, i);
        table.push(v);
    }
    table[n].clone()
}

fn snapshot<T: Clone>(lock: &RwLock<Vec<T>>) -> RwLock<Vec<T>> {
    RwLock::new(lock.read().unwrap().clone())
}

impl Sequences {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache.
    pub fn global() -> &'static Sequences {
        GLOBAL.get_or_init(Sequences::new)
    }

    /// An independent copy of every table (and any faults) as they are now.
    pub fn fork(&self) -> Sequences {
        Sequences {
            derangements: snapshot(&self.derangements),
            factorials: snapshot(&self.factorials),
            binomial_rows: snapshot(&self.binomial_rows),
            self_powers: snapshot(&self.self_powers),
            faults: self.faults.clone(),
        }
    }

    /// Adds `delta` to every future read of `D_k` from this instance.
    pub fn inject_derangement_fault(&mut self, k: usize, delta: Int) {
        let entry = self.faults.entry(k).or_insert_with(Int::zero);
        *entry += delta;
        if entry.is_zero() {
            self.faults.remove(&k);
        }
    }

    pub fn is_faulty(&self) -> bool {
        !self.faults.is_empty()
    }

    /// `D_n`, via `D_n = n * D_{n-1} + (-1)^n` with `D_0 = 1`.
    pub fn derangement(&self, n: usize) -> Int {
        let base = memo(&self.derangements, n, |table, i| {
            if i == 0 {
                return Int::one();
            }
            let sign = if i % 2 == 0 { Int::one() } else { -Int::one() };
            &table[i - 1] * i + sign
        });
        match self.faults.get(&n) {
            Some(delta) => base + delta,
            None => base,
        }
    }

    /// `[D_0, ..., D_n]`.
    pub fn derangements_upto(&self, n: usize) -> Vec<Int> {
        (0..=n).map(|i| self.derangement(i)).collect()
    }

    pub fn factorial(&self, n: usize) -> Int {
        memo(&self.factorials, n, |table, i| {
            if i == 0 {
                Int::one()
            } else {
                &table[i - 1] * i
            }
        })
    }

    /// Row `n` of Pascal's triangle, `C(n, 0..=n)`.
    pub fn binomial_row(&self, n: usize) -> Arc<[Int]> {
        memo(&self.binomial_rows, n, |rows, i| {
            if i == 0 {
                return Arc::from(vec![Int::one()]);
            }
            let prev = &rows[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(Int::one());
            for k in 1..i {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(Int::one());
            Arc::from(row)
        })
    }

    /// `C(n, k)`, zero when `k < 0` or `k > n`.
    pub fn binomial(&self, n: usize, k: i64) -> Int {
        match usize::try_from(k) {
            Ok(k) if k <= n => self.binomial_row(n)[k].clone(),
            _ => Int::zero(),
        }
    }

    /// `m^m` with `0^0 = 1`.
    pub fn self_power(&self, m: usize) -> Int {
        memo(&self.self_powers, m, |_, i| {
            let exp = u32::try_from(i).expect("exponent exceeds u32");
            Pow::pow(Int::from(i), exp)
        })
    }
}

/// `D_n` from the global cache.
pub fn derangement(n: usize) -> Int {
    Sequences::global().derangement(n)
}

/// `n!` from the global cache.
pub fn factorial(n: usize) -> Int {
    Sequences::global().factorial(n)
}

/// `C(n, k)` from the global cache.
pub fn binomial(n: usize, k: i64) -> Int {
    Sequences::global().binomial(n, k)
}

/// `base^exp` for a signed base; `0^0 = 1`.
pub fn int_pow(base: &Int, exp: usize) -> Int {
    Pow::pow(base, u32::try_from(exp).expect("exponent exceeds u32"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn brute_force_derangements(n: usize) -> u64 {
        fn count(pos: usize, n: usize, used: &mut Vec<bool>) -> u64 {
            if pos == n {
                return 1;
            }
            let mut total = 0;
            for v in 0..n {
                if !used[v] && v != pos {
                    used[v] = true;
                    total += count(pos + 1, n, used);
                    used[v] = false;
                }
            }
            total
        }
        count(0, n, &mut vec![false; n])
    }

    #[test]
    fn derangement_examples() {
        let s = Sequences::new();
        assert_eq!(s.derangement(0), Int::from(1));
        assert_eq!(s.derangement(4), Int::from(9));
        assert_eq!(s.derangement(6), Int::from(265));
    }

    #[test]
    fn derangement_matches_brute_force() {
        let s = Sequences::new();
        for n in 0..=8 {
            assert_eq!(s.derangement(n), Int::from(brute_force_derangements(n)), "n = {n}");
        }
    }

    #[test]
    fn derangement_recurrence_and_alternating_sum() {
        let s = Sequences::new();
        for n in 1..=300usize {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.derangement(n), s.derangement(n - 1) * n + sign);

            let sum: BigRational = (0..=n)
                .map(|i| {
                    let term = BigRational::new(Int::one(), s.factorial(i));
                    if i % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            let exact = sum * BigRational::from_integer(s.factorial(n));
            assert_eq!(exact, BigRational::from_integer(s.derangement(n)), "n = {n}");
        }
    }

    #[test]
    fn memo_reads_after_larger_request() {
        let s = Sequences::new();
        let big = s.derangement(50);
        assert_eq!(s.derangements.read().unwrap().len(), 51);
        assert_eq!(s.derangement(10), Int::from(1334961));
        assert_eq!(s.derangement(50), big);
        assert_eq!(s.derangements.read().unwrap().len(), 51);
    }

    #[test]
    fn factorial_examples() {
        let s = Sequences::new();
        assert_eq!(s.factorial(0), Int::from(1));
        assert_eq!(s.factorial(5), Int::from(120));
        let oracle: u64 = (1..=10u64).product();
        assert_eq!(s.factorial(10), Int::from(oracle));
        assert_eq!(oracle, 3628800);
    }

    #[test]
    fn binomial_examples() {
        let s = Sequences::new();
        assert_eq!(s.binomial(5, 2), Int::from(10));
        assert_eq!(s.binomial(5, 7), Int::zero());
        assert_eq!(s.binomial(5, -1), Int::zero());
        assert_eq!(s.binomial(0, 0), Int::one());
        assert_eq!(s.binomial(30, 15), Int::from(155117520u64));
    }

    #[test]
    fn pascal_and_symmetry() {
        let s = Sequences::new();
        for n in 1..=100usize {
            for k in 0..=n as i64 {
                assert_eq!(s.binomial(n, k), s.binomial(n - 1, k - 1) + s.binomial(n - 1, k));
                assert_eq!(s.binomial(n, k), s.binomial(n, n as i64 - k));
            }
        }
    }

    #[test]
    fn binomial_agrees_with_factorial_quotient() {
        let s = Sequences::new();
        for n in 0..=40usize {
            for k in 0..=n {
                let q = s.factorial(n) / (s.factorial(k) * s.factorial(n - k));
                assert_eq!(s.binomial(n, k as i64), q);
            }
        }
    }

    #[test]
    fn self_power_convention() {
        let s = Sequences::new();
        assert_eq!(s.self_power(0), Int::one());
        assert_eq!(s.self_power(1), Int::one());
        assert_eq!(s.self_power(3), Int::from(27));
        assert_eq!(int_pow(&Int::from(-2), 3), Int::from(-8));
        assert_eq!(int_pow(&Int::zero(), 0), Int::one());
    }

    #[test]
    fn fault_only_touches_one_value() {
        let base = Sequences::new();
        base.derangement(3);
        let mut forked = base.fork();
        forked.inject_derangement_fault(4, Int::one());
        assert!(forked.is_faulty());
        assert_eq!(forked.derangement(4), Int::from(10));
        assert_eq!(forked.derangement(5), Int::from(44));
        assert_eq!(forked.derangement(3), Int::from(2));
        assert_eq!(base.derangement(4), Int::from(9));
        assert!(!base.is_faulty());

        forked.inject_derangement_fault(4, -Int::one());
        assert!(!forked.is_faulty());
    }

    #[test]
    fn concurrent_readers_agree() {
        let s = Sequences::new();
        let results: Vec<Int> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..8)
                .map(|t| {
                    let s = &s;
                    scope.spawn(move || s.derangement(100 + t) - s.derangement(100 + t - 1) * (100 + t))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (t, r) in results.iter().enumerate() {
            let expect = if (100 + t) % 2 == 0 { 1 } else { -1 };
            assert_eq!(*r, Int::from(expect));
        }
    }
}
