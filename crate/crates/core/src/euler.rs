//! Numerical evaluation of the prime product prod_p Q(1/p) with a rigorous
//! tail bound.
//!
//! The product is evaluated in the log domain: per-prime log Q(1/p) values
//! are accumulated with compensated (Kahan) summation over fixed blocks of
//! the ascending prime list, and the block sums are merged in block order.
//! The block structure is identical in the serial and the rayon-parallel
//! path, so the result is bit-identical regardless of thread count.
//!
//! Tail bound derivation, for the omitted primes p > P: write
//! M = sum_{m>=2} |a_m| P^{-(m-2)}, so |Q(1/p) - 1| <= M/p^2 for p > P, and
//! |log(1+u)| <= |u| / (1 - |u|) with |u| <= M/P^2 (required <= 1/2). By
//! partial summation with pi(x) < 1.25506 x / ln x,
//!   sum_{p>P} 1/p^2  <=  2*1.25506/(P ln P) - pi(P)/P^2,
//! and pi(P) is known exactly from the sieve. The bound on |log tail| is
//! propagated to an absolute value error as value * (e^tail - 1).

use serde_json::json;

use crate::error::{Error, Result};
use crate::local_factor::UniLocalFactor;
use crate::report::decimal20;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest supported sieve limit.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Primes per summation block; fixed so that parallel and serial runs merge
/// identically.
const BLOCK: usize = 1 << 16;

/// Value of a truncated Euler product together with its rigorous error
/// accounting.
#[derive(Clone, Debug)]
pub struct EulerProductValue {
    /// prod_{p <= P} Q(1/p).
    pub value: f64,
    /// Rigorous bound on |log of the omitted tail|.
    pub tail_bound: f64,
    /// Standard-model estimate of accumulated rounding error (absolute).
    pub rounding_slack: f64,
    /// The prime cutoff P.
    pub prime_limit: u64,
}

impl EulerProductValue {
    /// Total reported absolute error: value*(e^tail - 1) + rounding slack.
    pub fn total_error(&self) -> f64 {
        self.value * self.tail_bound.exp_m1() + self.rounding_slack
    }

    /// Result JSON: value and error as 20-significant-digit decimal strings.
    pub fn to_json(&self, polynomial: &UniLocalFactor) -> serde_json::Value {
        json!({
            "value": decimal20(self.value),
            "error_bound": decimal20(self.total_error()),
            "prime_limit": self.prime_limit,
            "polynomial": polynomial.to_json(),
        })
    }
}

/// All primes <= limit, ascending. Plain sieve of Eratosthenes over a bit
/// vector; 10^8 takes well under a second.
pub fn sieve_primes(limit: u64) -> Result<Vec<u32>> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::SieveLimitOutOfRange(limit));
    }
    let n = limit as usize;
    let mut composite = vec![0u64; n / 64 + 1];
    let is_set = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let mut p = 2usize;
    while p * p <= n {
        if !is_set(&composite, p) {
            let mut q = p * p;
            while q <= n {
                composite[q / 64] |= 1 << (q % 64);
                q += p;
            }
        }
        p += 1;
    }
    let mut primes = Vec::new();
    for i in 2..=n {
        if !is_set(&composite, i) {
            primes.push(i as u32);
        }
    }
    Ok(primes)
}

/// Kahan-compensated accumulator.
#[derive(Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Per-block compensated log-sum; errors on a non-positive factor value.
fn block_log_sum(q: &UniLocalFactor, primes: &[u32]) -> Result<KahanSum> {
    let mut acc = KahanSum::default();
    for &p in primes {
        let x = 1.0 / p as f64;
        let v = q.eval(x);
        if v <= 0.0 {
            return Err(Error::NonPositiveFactor {
                prime: p as u64,
                value: v,
            });
        }
        acc.add(v.ln());
    }
    Ok(acc)
}

fn merge_blocks(blocks: Vec<KahanSum>) -> f64 {
    let mut acc = KahanSum::default();
    for b in &blocks {
        acc.add(b.sum);
    }
    for b in &blocks {
        acc.add(-b.c);
    }
    acc.sum - acc.c
}

fn finish(q: &UniLocalFactor, primes: &[u32], prime_limit: u64, log_sum: f64) -> EulerProductValue {
    let value = log_sum.exp();
    let p = prime_limit as f64;
    let m: f64 = q
        .coeffs()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(deg, &a)| (a as f64).abs() * p.powi(-(deg as i32 - 2)))
        .sum();
    let tail_sum = (2.0 * 1.25506 / (p * p.ln()) - primes.len() as f64 / (p * p)).max(0.0);
    let tail_bound = m * tail_sum / (1.0 - m / (p * p));
    let rounding_slack = value * (primes.len() as f64 + 2.0) * 4.0 * f64::EPSILON;
    EulerProductValue {
        value,
        tail_bound,
        rounding_slack,
        prime_limit,
    }
}

fn check_preconditions(q: &UniLocalFactor, prime_limit: u64) -> Result<()> {
    if prime_limit < 100 {
        return Err(Error::PrimeLimitTooSmall(prime_limit));
    }
    let p = prime_limit as f64;
    let m: f64 = q
        .coeffs()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(deg, &a)| (a as f64).abs() * p.powi(-(deg as i32 - 2)))
        .sum();
    if m / (p * p) > 0.5 {
        return Err(Error::TailBoundPrecondition {
            limit: prime_limit,
            m,
        });
    }
    Ok(())
}

/// Evaluates prod_{p <= prime_limit} Q(1/p) with a pre-sieved prime list
/// (which must contain exactly the primes up to `prime_limit`).
pub fn evaluate_with_primes(
    q: &UniLocalFactor,
    primes: &[u32],
    prime_limit: u64,
) -> Result<EulerProductValue> {
    check_preconditions(q, prime_limit)?;
    if q.is_one() {
        // Constant polynomial: exactly 1 with zero error.
        return Ok(EulerProductValue {
            value: 1.0,
            tail_bound: 0.0,
            rounding_slack: 0.0,
            prime_limit,
        });
    }
    let blocks = log_sum_blocks(q, primes)?;
    Ok(finish(q, primes, prime_limit, merge_blocks(blocks)))
}

#[cfg(feature = "parallel")]
fn log_sum_blocks(q: &UniLocalFactor, primes: &[u32]) -> Result<Vec<KahanSum>> {
    primes
        .par_chunks(BLOCK)
        .map(|chunk| block_log_sum(q, chunk))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn log_sum_blocks(q: &UniLocalFactor, primes: &[u32]) -> Result<Vec<KahanSum>> {
    primes
        .chunks(BLOCK)
        .map(|chunk| block_log_sum(q, chunk))
        .collect()
}

/// Strictly sequential reference path; bit-identical to `evaluate`.
pub fn evaluate_serial_with_primes(
    q: &UniLocalFactor,
    primes: &[u32],
    prime_limit: u64,
) -> Result<EulerProductValue> {
    check_preconditions(q, prime_limit)?;
    if q.is_one() {
        return Ok(EulerProductValue {
            value: 1.0,
            tail_bound: 0.0,
            rounding_slack: 0.0,
            prime_limit,
        });
    }
    let blocks: Vec<KahanSum> = primes
        .chunks(BLOCK)
        .map(|chunk| block_log_sum(q, chunk))
        .collect::<Result<_>>()?;
    Ok(finish(q, primes, prime_limit, merge_blocks(blocks)))
}

/// Sieves and evaluates in one call.
pub fn evaluate(q: &UniLocalFactor, prime_limit: u64) -> Result<EulerProductValue> {
    let primes = sieve_primes(prime_limit)?;
    evaluate_with_primes(q, &primes, prime_limit)
}

/// Sequential reference version of `evaluate`.
pub fn evaluate_serial(q: &UniLocalFactor, prime_limit: u64) -> Result<EulerProductValue> {
    let primes = sieve_primes(prime_limit)?;
    evaluate_serial_with_primes(q, &primes, prime_limit)
}

/// 1/zeta(k) as the truncated product of 1 - 1/p^k.
pub fn zeta_inverse(k: usize, prime_limit: u64) -> Result<EulerProductValue> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if k > 60 {
        return Err(Error::KTooLarge {
            k,
            limit: 60,
            what: "zeta inverse exponent",
        });
    }
    let mut coeffs = vec![0i64; k + 1];
    coeffs[0] = 1;
    coeffs[k] = -1;
    evaluate(&UniLocalFactor::new(coeffs)?, prime_limit)
}

/// A reusable sieve + evaluation context.
pub struct Evaluator {
    primes: Vec<u32>,
    prime_limit: u64,
}

impl Evaluator {
    pub fn new(prime_limit: u64) -> Result<Self> {
        Ok(Evaluator {
            primes: sieve_primes(prime_limit)?,
            prime_limit,
        })
    }

    pub fn prime_limit(&self) -> u64 {
        self.prime_limit
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    pub fn eval(&self, q: &UniLocalFactor) -> Result<EulerProductValue> {
        evaluate_with_primes(q, &self.primes, self.prime_limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_fixtures() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert_eq!(sieve_primes(100).unwrap().len(), 25);
        assert!(sieve_primes(1).is_err());
        assert!(sieve_primes(MAX_SIEVE_LIMIT + 1).is_err());
    }

    #[test]
    fn zeta2_against_pi() {
        let v = zeta_inverse(2, 10_000_000).unwrap();
        let exact = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!(
            (v.value - exact).abs() <= v.total_error(),
            "off by {}",
            (v.value - exact).abs()
        );
        assert!(v.total_error() <= 1e-6);
    }

    #[test]
    fn zeta3_against_direct_sum() {
        // Independent oracle: zeta(3) by direct summation plus integral tail.
        let n = 1_000_000u64;
        let mut acc = 0.0f64;
        for i in (1..=n).rev() {
            acc += 1.0 / (i as f64).powi(3);
        }
        let tail = 1.0 / (2.0 * (n as f64).powi(2)); // int_n^inf t^-3 dt
        let zeta3 = acc + tail;
        let v = zeta_inverse(3, 1_000_000).unwrap();
        assert!((v.value - 1.0 / zeta3).abs() <= v.total_error() + 1e-11);
        assert!((v.value - 0.8319073725807077).abs() < 1e-9);
    }

    #[test]
    fn zeta_large_k_near_one() {
        let v = zeta_inverse(30, 1000).unwrap();
        assert!((v.value - 1.0).abs() < 2.0f64.powi(-29));
    }

    #[test]
    fn constant_polynomial_is_exact() {
        let q = UniLocalFactor::one(4);
        let v = evaluate(&q, 1000).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.tail_bound, 0.0);
        assert_eq!(v.total_error(), 0.0);
    }

    #[test]
    fn self_consistency_across_limits() {
        let q = UniLocalFactor::new(vec![1, 0, -4, 4, -1]).unwrap();
        let lo = evaluate(&q, 100_000).unwrap();
        let hi = evaluate(&q, 1_000_000).unwrap();
        assert!((hi.value - lo.value).abs() <= lo.total_error());
        assert!(hi.total_error() < lo.total_error());
    }

    #[test]
    fn serial_and_default_paths_bit_identical() {
        let q = UniLocalFactor::new(vec![1, 0, -6, 8, -3]).unwrap();
        let a = evaluate(&q, 2_000_000).unwrap();
        let b = evaluate_serial(&q, 2_000_000).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = evaluate(&q, 2_000_000).unwrap();
        assert_eq!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn preconditions() {
        let q = UniLocalFactor::new(vec![1, 0, -1]).unwrap();
        assert!(evaluate(&q, 99).is_err());
        // A malformed caller polynomial that dips negative gets caught.
        let bad = UniLocalFactor::new(vec![1, 0, -9]).unwrap();
        assert!(matches!(
            evaluate(&bad, 1000),
            Err(Error::NonPositiveFactor { prime: 2, .. })
        ));
    }

    #[test]
    fn disjoint_union_multiplicativity() {
        // Edges {1,2} and {3,4}: product of two single-edge factors.
        let q_union = UniLocalFactor::new(vec![1, 0, -2, 0, 1]).unwrap();
        let q_single = UniLocalFactor::new(vec![1, 0, -1]).unwrap();
        let u = evaluate(&q_union, 1_000_000).unwrap();
        let s = evaluate(&q_single, 1_000_000).unwrap();
        let combined_err = u.total_error() + 2.0 * s.total_error() + 1e-12;
        assert!((u.value - s.value * s.value).abs() <= combined_err);
    }

    #[test]
    fn json_shape() {
        let q = UniLocalFactor::new(vec![1, 0, -1]).unwrap();
        let v = evaluate(&q, 1000).unwrap();
        let j = v.to_json(&q);
        assert!(j["value"].as_str().unwrap().starts_with("0.60"));
        assert_eq!(j["prime_limit"], 1000);
        assert_eq!(j["polynomial"], serde_json::json!([1, 0, -1]));
    }
}
