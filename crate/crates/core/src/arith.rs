//! Exact integer arithmetic: primality, factorization, divisors and the
//! modular square-root machinery used by the discriminant conditions.
//!
//! Every routine accepts values in `[1, 2^63)` and never wraps: products
//! that could leave `u64` are carried out in `u128`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exclusive upper bound on accepted inputs.
pub const MAX_INPUT: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid input {0}: expected a positive integer")]
    NonPositive(i128),
    #[error("input {0} is outside the accepted range [1, 2^63)")]
    OutOfRange(u64),
}

pub type Result<T> = std::result::Result<T, ArithError>;

pub(crate) fn check_range(n: u64) -> Result<u64> {
    if n == 0 {
        Err(ArithError::NonPositive(0))
    } else if n >= MAX_INPUT {
        Err(ArithError::OutOfRange(n))
    } else {
        Ok(n)
    }
}

/// A prime power `prime^exponent` inside a [`PrimeFactorization`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

/// The unique factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactorization {
    pub value: u64,
    pub factors: Vec<PrimePower>,
}

impl PrimeFactorization {
    /// Multiplies the factors back together, `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, pp| {
            (0..pp.exponent).try_fold(acc, |a, _| a.checked_mul(pp.prime))
        })
    }

    /// Checks every structural invariant: product, ordering, primality.
    pub fn is_valid(&self) -> bool {
        let ordered = self.factors.windows(2).all(|w| w[0].prime < w[1].prime);
        let primes = self
            .factors
            .iter()
            .all(|pp| pp.exponent >= 1 && is_prime(pp.prime));
        ordered && primes && self.product() == Some(self.value)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|pp| pp.prime)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|pp| pp.prime == p)
            .map_or(0, |pp| pp.exponent)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// These witnesses make Miller-Rabin deterministic far beyond 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 0u64;
        while d == 1 {
            if power == lam {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

const TRIAL_LIMIT: u64 = 1 << 12;

/// Factorizes `n` into ascending prime powers.
pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    check_range(n)?;
    let mut rest = n;
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && p * p <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest < TRIAL_LIMIT * TRIAL_LIMIT {
            // trial division already ruled out every factor below sqrt(rest)
            primes.push(rest);
        } else {
            collect_prime_factors(rest, &mut primes);
        }
    }
    primes.sort_unstable();

    let mut factors: Vec<PrimePower> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some(last) if last.prime == q => last.exponent += 1,
            _ => factors.push(PrimePower {
                prime: q,
                exponent: 1,
            }),
        }
    }
    Ok(PrimeFactorization { value: n, factors })
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(divisors_of(&factorize(n)?))
}

pub(crate) fn divisors_of(fac: &PrimeFactorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for pp in &fac.factors {
        let len = out.len();
        let mut power = 1u64;
        for _ in 0..pp.exponent {
            power *= pp.prime;
            for i in 0..len {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Floor square root on `u128`.
pub fn isqrt(n: u128) -> u128 {
    num_integer::Roots::sqrt(&n)
}

/// `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if any.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Modular inverse via the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Roots of `n^2 + n + 1 ≡ 0 (mod p^e)`, sorted.
///
/// Only `p = 3, e = 1` and primes `p ≡ 1 (mod 3)` have roots; every other
/// prime power returns an empty list.
pub(crate) fn norm_form_roots_prime_power(p: u64, e: u32) -> Vec<u64> {
    if p == 3 {
        return if e == 1 { vec![1] } else { Vec::new() };
    }
    if p == 2 || p % 3 != 1 {
        return Vec::new();
    }
    let Some(s) = sqrt_mod_prime(p - 3, p) else {
        return Vec::new();
    };
    let half = (p + 1) / 2;
    let mut roots: Vec<u64> = [s, p - s]
        .into_iter()
        .map(|t| mul_mod((t + p - 1) % p, half, p))
        .collect();

    let mut modulus = p;
    for _ in 1..e {
        modulus *= p;
        for r in roots.iter_mut() {
            // Newton step: r <- r - f(r) / f'(r)
            let m = modulus as u128;
            let x = *r as u128;
            let f = ((x * x + x + 1) % m) as u64;
            let df = ((2 * x + 1) % m) as u64;
            let inv = inv_mod(df, modulus).expect("f' is a unit for simple roots");
            let step = mul_mod(f, inv, modulus);
            *r = (*r + modulus - step) % modulus;
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Smallest `n ≥ 0` with `h | n^2 + n + 1`, computed by CRT over the prime
/// power roots. `None` when no root exists.
pub(crate) fn smallest_norm_form_root(h: &PrimeFactorization) -> Option<u64> {
    let mut residues: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for pp in &h.factors {
        let roots = norm_form_roots_prime_power(pp.prime, pp.exponent);
        if roots.is_empty() {
            return None;
        }
        let q = pp.prime.pow(pp.exponent);
        let m_inv_q = inv_mod(modulus % q, q).expect("coprime moduli");
        let combined = modulus * q;
        let mut next = Vec::with_capacity(residues.len() * roots.len());
        for &a in &residues {
            for &b in &roots {
                // x = a + modulus * ((b - a) * modulus^-1 mod q)
                let diff = (b + q - a % q) % q;
                let k = mul_mod(diff, m_inv_q, q);
                next.push(a + modulus * k);
            }
        }
        residues = next;
        modulus = combined;
    }
    residues.into_iter().min()
}
