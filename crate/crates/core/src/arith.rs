//! Exact integer and multiplicative-function kernel.
//!
//! Everything here is exact. Floating point only shows up later, in
//! [`crate::density`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors, `omega(n)`.
    pub fn omega(&self) -> usize {
        self.0.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factors back together.
    pub fn value(&self) -> u128 {
        self.0
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

/// Trial division. Adequate for everything this crate factors (well below
/// 10^12 in practice).
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument("factorize"));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5;
    while p * p <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(Factorization(out))
}

/// Sorted, deduplicated primes dividing at least one of `ns`. Avoids forming
/// the product, which may not fit in 64 bits.
pub fn prime_support(ns: &[u64]) -> Result<Vec<u64>> {
    let mut ps = Vec::new();
    for &n in ns {
        ps.extend(factorize(n)?.primes());
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

pub fn moebius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.omega() % 2 == 0 { 1 } else { -1 })
}

fn product_over_primes(ps: &[u64], sign: i64) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &p in ps {
        num *= BigInt::from(p as i64 + sign);
        den *= BigInt::from(p);
    }
    Rational::new(num, den)
}

/// `prod_{p | n} (1 - 1/p)`.
pub fn phi_star(n: u64) -> Result<Rational> {
    Ok(phi_star_primes(&prime_support(&[n])?))
}

/// `prod_{p in ps} (1 - 1/p)` for a set of distinct primes.
pub fn phi_star_primes(ps: &[u64]) -> Rational {
    product_over_primes(ps, -1)
}

/// `prod_{p | n} (1 + 1/p)`.
pub fn phi_dagger(n: u64) -> Result<Rational> {
    Ok(product_over_primes(&prime_support(&[n])?, 1))
}

/// All squarefree divisors of `n`, ascending. There are `2^omega(n)` of them.
pub fn squarefree_divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut divs = vec![1u64];
    for p in f.primes() {
        let extra: Vec<u64> = divs.iter().map(|d| d * p).collect();
        divs.extend(extra);
    }
    divs.sort_unstable();
    Ok(divs)
}

/// `gcd(|a|, |b|)` with `gcd(0, n) = |n|`.
pub fn gcd(a: i128, b: i128) -> u128 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

/// `gcd(|a|, |b|) == 1`. In particular `coprime(0, n)` holds only for `|n| = 1`.
pub fn coprime(a: i128, b: i128) -> bool {
    gcd(a, b) == 1
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` to an exact rational, robust to numerators and
/// denominators far outside the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // scale so the quotient carries ~64 significant bits
    let k = 64 - shift;
    let q = if k >= 0 {
        (num << (k as usize)) / den
    } else {
        num / (den << ((-k) as usize))
    };
    let qf: f64 = num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN);
    qf * 2f64.powi(-k as i32)
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.pairs() == [(n, 1)]).unwrap_or(false)
}
