//! How the cyclic count `psi(n)` compares to the total count `sigma(n)`.
//!
//! `rho(n) = psi(n) / sigma(n)` lies in `[1/zeta(2), 1]`, equals 1 exactly
//! on square-free `n`, and approaches `1/zeta(2)` along
//! `n_k = (p_1 ... p_k)^k`. The partial sums of `psi` and `sigma` have
//! ratio tending to `1/zeta(4)`.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, ArithError, MultiplicativeTables, PrimeFactorization};

/// Largest `k` accepted by [`extremal_sequence_rho`].
pub const MAX_EXTREMAL_K: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error("prime {0} appears more than once")]
    DuplicatePrime(u64),
    #[error("factor ({0}, {1}) needs a prime >= 2 and an exponent >= 1")]
    InvalidFactor(u64, u32),
    #[error("k = {0} is outside 1..={MAX_EXTREMAL_K}")]
    Range(u32),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, AsymptoticsError>;

/// `zeta(2)`, `zeta(4)` and the derived constants, from `pi^2/6` and `pi^4/90`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaConstants {
    pub zeta2: f64,
    pub zeta4: f64,
    pub inv_zeta2: f64,
    pub inv_zeta4: f64,
    pub ratio_z2_z4: f64,
}

impl ZetaConstants {
    pub fn new() -> Self {
        let zeta2 = PI * PI / 6.0;
        let zeta4 = PI.powi(4) / 90.0;
        ZetaConstants {
            zeta2,
            zeta4,
            inv_zeta2: 1.0 / zeta2,
            inv_zeta4: 1.0 / zeta4,
            ratio_z2_z4: zeta2 / zeta4,
        }
    }
}

impl Default for ZetaConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// A truncated series value together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// `zeta(s)` from the first `terms` terms plus an Euler-Maclaurin tail.
///
/// The tail `sum_{k > N} k^-s` is replaced by
/// `N^(1-s)/(s-1) - N^-s/2 + s N^(-s-1)/12 - s(s+1)(s+2) N^(-s-3)/720`;
/// for `k^-s` the remainder is bounded by the next term,
/// `s(s+1)(s+2)(s+3)(s+4) N^(-s-5)/30240`.
pub fn zeta_series(s: u32, terms: u32) -> SeriesEstimate {
    assert!(s >= 2 && terms >= 1, "zeta_series needs s >= 2 and at least one term");
    let sf = s as f64;
    let nf = terms as f64;
    // smallest terms first
    let head: f64 = (1..=terms).rev().map(|k| (k as f64).powi(-(s as i32))).sum();
    let tail = nf.powf(1.0 - sf) / (sf - 1.0) - nf.powf(-sf) / 2.0 + sf * nf.powf(-sf - 1.0) / 12.0
        - sf * (sf + 1.0) * (sf + 2.0) * nf.powf(-sf - 3.0) / 720.0;
    let error_bound =
        sf * (sf + 1.0) * (sf + 2.0) * (sf + 3.0) * (sf + 4.0) * nf.powf(-sf - 5.0) / 30240.0;
    SeriesEstimate {
        value: head + tail,
        error_bound,
    }
}

/// `psi(n) / sigma(n)` with both integers kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioValue {
    pub psi: u64,
    pub sigma: u64,
    pub value: f64,
}

impl RatioValue {
    /// Exactly 1, compared as integers.
    pub fn is_one(&self) -> bool {
        self.psi == self.sigma
    }
}

/// `rho(n)` from exact `psi` and `sigma`.
pub fn rho(f: &PrimeFactorization) -> Result<RatioValue> {
    let psi = arith::dedekind_psi(f)?;
    let sigma = arith::sigma(f)?;
    Ok(RatioValue {
        psi,
        sigma,
        value: psi as f64 / sigma as f64,
    })
}

/// `rho` from the factorization alone, without forming `n`:
/// `prod (1 - q^-2) / (1 - q^-(a+1))`.
///
/// When `q^(a+1) > 2^63` the denominator is taken as 1, an error below
/// `2^-63` per factor.
pub fn rho_factored(factors: &[(u64, u32)]) -> Result<f64> {
    let mut seen = std::collections::HashSet::new();
    let mut value = 1.0f64;
    for &(q, a) in factors {
        if q < 2 || a == 0 {
            return Err(AsymptoticsError::InvalidFactor(q, a));
        }
        if !seen.insert(q) {
            return Err(AsymptoticsError::DuplicatePrime(q));
        }
        let qf = q as f64;
        let numerator = 1.0 - 1.0 / (qf * qf);
        let log2_power = (a as f64 + 1.0) * qf.log2();
        let denominator = if log2_power > 63.0 {
            1.0
        } else {
            1.0 - qf.powi(-(a as i32 + 1))
        };
        value *= numerator / denominator;
    }
    Ok(value)
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// `rho(n_k)` for `n_k = (p_1 ... p_k)^k`, evaluated in factored form.
pub fn extremal_sequence_rho(k: u32) -> Result<f64> {
    if k == 0 || k > MAX_EXTREMAL_K {
        return Err(AsymptoticsError::Range(k));
    }
    let factors: Vec<(u64, u32)> = first_primes(k as usize).into_iter().map(|p| (p, k)).collect();
    rho_factored(&factors)
}

/// One row of a census: values at `n` and the running sums up to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: u64,
    pub psi: u64,
    pub sigma: u64,
    pub rho: f64,
    pub cum_psi: u128,
    pub cum_sigma: u128,
    pub cum_ratio: f64,
}

/// Stream of [`SweepRecord`]s for `n = 1..=N` over sieved tables.
#[derive(Debug, Clone)]
pub struct SweepRecords<'a> {
    tables: &'a MultiplicativeTables,
    n: usize,
    cum_psi: u128,
    cum_sigma: u128,
}

impl Iterator for SweepRecords<'_> {
    type Item = SweepRecord;

    fn next(&mut self) -> Option<SweepRecord> {
        if self.n > self.tables.len() {
            return None;
        }
        let n = self.n;
        let psi = self.tables.psi(n);
        let sigma = self.tables.sigma(n);
        self.cum_psi += psi as u128;
        self.cum_sigma += sigma as u128;
        self.n += 1;
        Some(SweepRecord {
            n: n as u64,
            psi,
            sigma,
            rho: psi as f64 / sigma as f64,
            cum_psi: self.cum_psi,
            cum_sigma: self.cum_sigma,
            cum_ratio: self.cum_psi as f64 / self.cum_sigma as f64,
        })
    }
}

pub fn sweep_records(tables: &MultiplicativeTables) -> SweepRecords<'_> {
    SweepRecords {
        tables,
        n: 1,
        cum_psi: 0,
        cum_sigma: 0,
    }
}

/// The record at `N`: exact cumulative sums of `psi` and `sigma`.
pub fn partial_sums(limit: u64, max_sieve: u64) -> Result<SweepRecord> {
    let tables = arith::sieve_multiplicative(limit, max_sieve)?;
    Ok(sweep_records(&tables).last().expect("limit >= 1"))
}

/// `sum_{d <= N} q(d) / d^2` over square-free `d`; tends to `zeta(2)/zeta(4)`.
pub fn qd2_partial_sum(limit: u64, max_sieve: u64) -> Result<f64> {
    let tables = arith::sieve_multiplicative(limit, max_sieve)?;
    Ok(qd2_from_tables(&tables))
}

pub fn qd2_from_tables(tables: &MultiplicativeTables) -> f64 {
    (1..=tables.len())
        .rev()
        .filter(|&d| tables.squarefree(d) == 1)
        .map(|d| {
            let d = d as f64;
            1.0 / (d * d)
        })
        .sum()
}
