//! Exact multiplicative arithmetic functions on `u64`.
//!
//! Everything here works on a [`PrimeFactorization`]: Euler's totient,
//! the Dedekind psi function, the sum-of-divisors function and the
//! square-free indicator. Two alternate routes to psi (the cylinder sum
//! over `w * h = n` and the square-free divisor sum) are kept separate
//! from the closed form so they can be checked against each other, and a
//! linear sieve produces all four functions for `1..=N` in one pass.
//!
//! All arithmetic is checked. Overflow is reported, never wrapped.

use thiserror::Error;

/// Largest integer accepted by [`factorize`].
pub const MAX_N: u64 = i64::MAX as u64;

/// Default cap on the sieve length, in entries.
pub const DEFAULT_MAX_SIEVE: u64 = 10_000_000;

/// Hard ceiling on the sieve length; the smallest-prime-factor table is `u32`.
pub const SIEVE_CEILING: u64 = u32::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is outside the supported range 1..={MAX_N}")]
    Domain(u64),
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("sieve length {requested} exceeds the budget of {budget} entries")]
    Budget { requested: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// `gcd(a, 0) = a`, `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The prime factorization of a positive integer `n`.
///
/// Primes are strictly increasing and every exponent is at least one, so
/// `factorize(1)` has an empty factor list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, a)| a == 1)
    }
}

/// Factor `n` by trial division up to `sqrt(n)`.
///
/// Fails with [`ArithError::Domain`] for `n = 0` or `n > MAX_N`.
pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n == 0 || n > MAX_N {
        return Err(ArithError::Domain(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut take = |p: u64, rest: &mut u64| {
        if *rest % p == 0 {
            let mut a = 0;
            while *rest % p == 0 {
                *rest /= p;
                a += 1;
            }
            factors.push((p, a));
        }
    };
    take(2, &mut rest);
    take(3, &mut rest);
    // 6k - 1, 6k + 1 wheel
    let mut p = 5u64;
    while p <= rest / p {
        take(p, &mut rest);
        take(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimeFactorization { n, factors })
}

/// Euler's totient, `n * prod (1 - 1/p)`, evaluated exactly.
pub fn euler_phi(f: &PrimeFactorization) -> u64 {
    f.primes().fold(f.n, |acc, p| acc / p * (p - 1))
}

/// Dedekind psi, `n * prod (1 + 1/p)`: the number of cyclic square-tiled
/// tori with `n` squares.
///
/// Evaluated one prime at a time as `acc * (p + 1) / p`, which stays
/// integral because `acc` keeps every prime power of `n`.
pub fn dedekind_psi(f: &PrimeFactorization) -> Result<u64> {
    f.primes().try_fold(f.n, |acc, p| {
        let next = acc as u128 * (p as u128 + 1) / p as u128;
        u64::try_from(next).map_err(|_| ArithError::Overflow("dedekind_psi"))
    })
}

/// Sum of divisors, as `prod (1 + p + ... + p^a)`.
pub fn sigma(f: &PrimeFactorization) -> Result<u64> {
    let overflow = || ArithError::Overflow("sigma");
    f.factors.iter().try_fold(1u64, |acc, &(p, a)| {
        let mut local = 1u64;
        for _ in 0..a {
            local = local
                .checked_mul(p)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(overflow)?;
        }
        acc.checked_mul(local).ok_or_else(overflow)
    })
}

/// 1 if `n` is square-free, 0 otherwise.
pub fn squarefree_indicator(f: &PrimeFactorization) -> u8 {
    u8::from(f.is_squarefree())
}

/// All divisors of `n`, ascending.
pub fn divisors(f: &PrimeFactorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, a) in &f.factors {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..a {
            // p^k divides n, so this never overflows
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Psi as the sum over horizontal cylinders `w * h = n` of
/// `w / gcd(w, h) * phi(gcd(w, h))`.
pub fn psi_via_cylinders(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    divisors(&f).into_iter().try_fold(0u64, |acc, w| {
        let h = n / w;
        let g = gcd(w, h);
        let term = (w / g)
            .checked_mul(euler_phi(&factorize(g)?))
            .ok_or(ArithError::Overflow("psi_via_cylinders"))?;
        acc.checked_add(term)
            .ok_or(ArithError::Overflow("psi_via_cylinders"))
    })
}

/// Psi as `sum_{d | n, d square-free} n / d`.
pub fn psi_prime(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    // a prime above 2^32 has a square no divisor of n can reach
    let squares: Vec<u64> = f.primes().filter_map(|p| p.checked_mul(p)).collect();
    divisors(&f)
        .into_iter()
        .filter(|d| squares.iter().all(|sq| d % sq != 0))
        .try_fold(0u64, |acc, d| {
            acc.checked_add(n / d)
                .ok_or(ArithError::Overflow("psi_prime"))
        })
}

/// Tables of psi, sigma, phi and the square-free indicator for `1..=N`.
///
/// Built by a linear smallest-prime-factor sieve: each composite is
/// visited once, split as `p^a * m` with `p` its least prime, and its
/// values are products of the already-known values at `p^a` and `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeTables {
    psi: Vec<u64>,
    sigma: Vec<u64>,
    phi: Vec<u64>,
    squarefree: Vec<u8>,
}

impl MultiplicativeTables {
    /// Largest tabulated `n`.
    pub fn len(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn psi(&self, n: usize) -> u64 {
        self.psi[n]
    }
    pub fn sigma(&self, n: usize) -> u64 {
        self.sigma[n]
    }
    pub fn phi(&self, n: usize) -> u64 {
        self.phi[n]
    }
    pub fn squarefree(&self, n: usize) -> u8 {
        self.squarefree[n]
    }

    /// `psi(1), ..., psi(N)`.
    pub fn psi_values(&self) -> &[u64] {
        &self.psi[1..]
    }
    pub fn sigma_values(&self) -> &[u64] {
        &self.sigma[1..]
    }
    pub fn phi_values(&self) -> &[u64] {
        &self.phi[1..]
    }
    pub fn squarefree_values(&self) -> &[u8] {
        &self.squarefree[1..]
    }
}

/// Sieve psi, sigma, phi and the square-free indicator up to `limit`.
///
/// `budget` caps `limit`; anything above [`SIEVE_CEILING`] is refused
/// regardless.
pub fn sieve_multiplicative(limit: u64, budget: u64) -> Result<MultiplicativeTables> {
    if limit == 0 {
        return Err(ArithError::Domain(0));
    }
    let budget = budget.min(SIEVE_CEILING);
    if limit > budget {
        return Err(ArithError::Budget {
            requested: limit,
            budget,
        });
    }
    let len = limit as usize + 1;

    let mut spf = vec![0u32; len];
    // largest power of spf[i] dividing i
    let mut spf_power = vec![0u32; len];
    let mut primes: Vec<u32> = Vec::new();

    let mut psi = vec![0u64; len];
    let mut sigma = vec![0u64; len];
    let mut phi = vec![0u64; len];
    let mut squarefree = vec![0u8; len];
    psi[1] = 1;
    sigma[1] = 1;
    phi[1] = 1;
    squarefree[1] = 1;

    for i in 2..len {
        if spf[i] == 0 {
            spf[i] = i as u32;
            spf_power[i] = i as u32;
            primes.push(i as u32);
        }
        let p = spf[i];
        for &q in &primes {
            let m = i * q as usize;
            if q > p || m >= len {
                break;
            }
            spf[m] = q;
            spf_power[m] = if q == p { spf_power[i] * q } else { q };
        }

        let pk = spf_power[i] as usize;
        if pk == i {
            let p = p as u64;
            let n = i as u64;
            psi[i] = n + n / p;
            sigma[i] = sigma[i / p as usize] * p + 1;
            phi[i] = n - n / p;
            squarefree[i] = u8::from(n == p);
        } else {
            let rest = i / pk;
            psi[i] = psi[pk] * psi[rest];
            sigma[i] = sigma[pk] * sigma[rest];
            phi[i] = phi[pk] * phi[rest];
            squarefree[i] = squarefree[pk] & squarefree[rest];
        }
    }

    Ok(MultiplicativeTables {
        psi,
        sigma,
        phi,
        squarefree,
    })
}
