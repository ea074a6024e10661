//! Arithmetic densities `θ`, the Dirichlet coefficients `Δ_k(n)`, their
//! partial sums `M_k`, the Euler factors `F_{k,p}(s)` and the predicted
//! main term.
//!
//! Every density is a rational multiple of a power of `1/ζ(2)`. The power
//! is tracked symbolically by [`ZetaMultiple`] so all identities between
//! densities can be checked exactly; `ζ(2) = π²/6` only enters in
//! [`ZetaMultiple::to_f64`].

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{
    factorize, moebius, phi_star_primes, prime_support, rational, rational_to_f64, squarefree_divisors,
    Rational,
};
use crate::density::euler_factor;
use crate::{Error, Result};

pub use crate::torsor::EtaTuple;

/// Exponent vector of `Δ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentVector(pub [u32; 4]);

impl ExponentVector {
    pub const LOWER: ExponentVector = ExponentVector([2, 2, 3, 2]);
    pub const UPPER: ExponentVector = ExponentVector([3, 3, 4, 2]);
}

/// `coeff · ζ(2)^(-power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaMultiple {
    pub coeff: Rational,
    pub power: u32,
}

impl ZetaMultiple {
    pub fn zero(power: u32) -> Self {
        Self {
            coeff: Rational::zero(),
            power,
        }
    }

    pub fn new(coeff: Rational, power: u32) -> Self {
        Self { coeff, power }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            coeff: &self.coeff * r,
            power: self.power,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let inv_zeta2 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        rational_to_f64(&self.coeff) * inv_zeta2.powi(self.power as i32)
    }

    fn same_power(&self, other: &Self) -> u32 {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => other.power,
            (_, true) => self.power,
            _ => {
                assert_eq!(self.power, other.power, "adding different powers of 1/ζ(2)");
                self.power
            }
        }
    }
}

impl Add for ZetaMultiple {
    type Output = ZetaMultiple;
    fn add(self, rhs: Self) -> Self {
        let power = self.same_power(&rhs);
        Self {
            coeff: self.coeff + rhs.coeff,
            power,
        }
    }
}

impl Sub for ZetaMultiple {
    type Output = ZetaMultiple;
    fn sub(self, rhs: Self) -> Self {
        let power = self.same_power(&rhs);
        Self {
            coeff: self.coeff - rhs.coeff,
            power,
        }
    }
}

impl fmt::Display for ZetaMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})/ζ(2)", self.coeff),
            k => write!(f, "({})/ζ(2)^{k}", self.coeff),
        }
    }
}

/// Prime supports of `η1..η4`.
struct EtaPrimes([Vec<u64>; 4]);

impl EtaPrimes {
    fn new(eta: &EtaTuple) -> Self {
        Self(eta.0.map(|e| factorize(e).expect("η positive").primes().collect()))
    }

    /// Primes dividing the product of the selected components.
    fn union(&self, which: &[usize]) -> Vec<u64> {
        let mut ps: Vec<u64> = which.iter().flat_map(|&i| self.0[i].iter().copied()).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn phi_star(&self, which: &[usize]) -> Rational {
        phi_star_primes(&self.union(which))
    }

    /// `∏_{p | η1η2η3η4} (1 - 1/p^2)^(-1)`.
    fn inverse_zeta_factors(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for p in self.union(&[0, 1, 2, 3]) {
            let p = BigInt::from(p);
            num *= &p * &p;
            den *= &p * &p - 1;
        }
        Rational::new(num, den)
    }
}

fn coprime_u(a: u64, b: u64) -> bool {
    num_integer::gcd(a, b) == 1
}

/// `∑_{k | η3, (k, η1η4) = 1} μ(k) / (k φ*(gcd(η3, k η2)))`.
fn k23_sum(eta: &EtaTuple, primes: &EtaPrimes) -> Rational {
    let [e1, e2, e3, e4] = eta.0;
    let mut sum = Rational::zero();
    for k in squarefree_divisors(e3).expect("η3 positive") {
        if !coprime_u(k, e1) || !coprime_u(k, e4) {
            continue;
        }
        // primes of gcd(η3, k η2): those of k, plus those shared by η3 and η2
        let mut g: Vec<u64> = prime_support(&[k]).unwrap();
        g.extend(primes.0[2].iter().filter(|p| e2 % **p == 0));
        g.sort_unstable();
        g.dedup();
        let mu = moebius(k).unwrap() as i64;
        sum += rational(mu, k as i64) / phi_star_primes(&g);
    }
    sum
}

/// `θ0(η) = ∑_{k23 | η3, (k23, η1η4) = 1} μ(k23) φ*(η3η4) / (k23 φ*(gcd(η3, k23 η2)))`.
pub fn theta0(eta: &EtaTuple) -> Rational {
    let primes = EtaPrimes::new(eta);
    primes.phi_star(&[2, 3]) * k23_sum(eta, &primes)
}

/// `θ1^a = θ0 φ*(η1η2η3) ∏_{p | η1η2η3η4} (1 - 1/p^2)^(-1) / ζ(2)`.
pub fn theta1a(eta: &EtaTuple) -> ZetaMultiple {
    let primes = EtaPrimes::new(eta);
    let c = theta0(eta) * primes.phi_star(&[0, 1, 2]) * primes.inverse_zeta_factors();
    ZetaMultiple::new(c, 1)
}

/// `θ2^a = θ1^a φ*(η1η2η3η4)`.
pub fn theta2a(eta: &EtaTuple) -> ZetaMultiple {
    let primes = EtaPrimes::new(eta);
    theta1a(eta).scale(&primes.phi_star(&[0, 1, 2, 3]))
}

/// `θ1^b = θ0 φ*(η1η2η3η4)`.
pub fn theta1b(eta: &EtaTuple) -> Rational {
    let primes = EtaPrimes::new(eta);
    theta0(eta) * primes.phi_star(&[0, 1, 2, 3])
}

/// `θ2^b = θ1^b φ*(η1η2η3) ∏_{p | η1η2η3η4} (1 - 1/p^2)^(-1) / ζ(2)`.
pub fn theta2b(eta: &EtaTuple) -> ZetaMultiple {
    let primes = EtaPrimes::new(eta);
    let c = theta1b(eta) * primes.phi_star(&[0, 1, 2]) * primes.inverse_zeta_factors();
    ZetaMultiple::new(c, 1)
}

/// The final density `θ(η)`; zero unless `η1, η2, η4` are pairwise coprime.
pub fn theta(eta: &EtaTuple) -> ZetaMultiple {
    if !eta.pairwise_coprime() {
        return ZetaMultiple::zero(1);
    }
    let primes = EtaPrimes::new(eta);
    let c = primes.phi_star(&[2, 3])
        * primes.phi_star(&[0, 1, 2])
        * primes.phi_star(&[0, 1, 2, 3])
        * primes.inverse_zeta_factors()
        * k23_sum(eta, &primes);
    ZetaMultiple::new(c, 1)
}

fn eta_weight(eta: &EtaTuple) -> Rational {
    let w: u128 = eta.0.iter().map(|&e| e as u128).product();
    Rational::new(BigInt::one(), BigInt::from(w))
}

/// `θ(η) / (η1 η2 η3 η4)`.
pub fn weighted_theta(eta: &EtaTuple) -> ZetaMultiple {
    theta(eta).scale(&eta_weight(eta))
}

fn int_root(n: u64, k: u32) -> Option<u64> {
    let r = (n as f64).powf(1.0 / k as f64).round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&x| x > 0 && (x as u128).checked_pow(k) == Some(n as u128))
}

/// All `η` with `η^k = n`.
pub fn exact_level(k: ExponentVector, n: u64) -> Vec<EtaTuple> {
    let [k1, k2, k3, k4] = k.0;
    let mut out = Vec::new();
    let pow = |e: u64, k: u32| (e as u128).checked_pow(k).unwrap_or(u128::MAX);
    let mut e1 = 1;
    while pow(e1, k1) <= n as u128 {
        if (n as u128).is_multiple_of(pow(e1, k1)) {
            let n1 = n / pow(e1, k1) as u64;
            let mut e2 = 1;
            while pow(e2, k2) <= n1 as u128 {
                if (n1 as u128).is_multiple_of(pow(e2, k2)) {
                    let n2 = n1 / pow(e2, k2) as u64;
                    let mut e3 = 1;
                    while pow(e3, k3) <= n2 as u128 {
                        if (n2 as u128).is_multiple_of(pow(e3, k3)) {
                            let n3 = n2 / pow(e3, k3) as u64;
                            if let Some(e4) = int_root(n3, k4) {
                                out.push(EtaTuple([e1, e2, e3, e4]));
                            }
                        }
                        e3 += 1;
                    }
                }
                e2 += 1;
            }
        }
        e1 += 1;
    }
    out
}

/// All `η` with `η^k <= t`, lexicographic.
pub fn sublevel(k: ExponentVector, t: u64) -> Vec<EtaTuple> {
    let [k1, k2, k3, k4] = k.0;
    let t = t as u128;
    let pow = |e: u64, k: u32| (e as u128).pow(k);
    let mut out = Vec::new();
    let mut e1 = 1u64;
    while pow(e1, k1) <= t {
        let p1 = pow(e1, k1);
        let mut e2 = 1u64;
        while p1 * pow(e2, k2) <= t {
            let p2 = p1 * pow(e2, k2);
            let mut e3 = 1u64;
            while p2 * pow(e3, k3) <= t {
                let p3 = p2 * pow(e3, k3);
                let mut e4 = 1u64;
                while p3 * pow(e4, k4) <= t {
                    out.push(EtaTuple([e1, e2, e3, e4]));
                    e4 += 1;
                }
                e3 += 1;
            }
            e2 += 1;
        }
        e1 += 1;
    }
    out
}

fn sum_weighted(etas: impl IntoIterator<Item = EtaTuple>) -> ZetaMultiple {
    etas.into_iter()
        .filter(|e| e.pairwise_coprime())
        .fold(ZetaMultiple::zero(1), |acc, e| acc + weighted_theta(&e))
}

/// `Δ_k(n) = ∑_{η^k = n} θ(η) / (η1 η2 η3 η4)`.
pub fn delta_k(k: ExponentVector, n: u64) -> Result<ZetaMultiple> {
    if n == 0 {
        return Err(Error::ZeroArgument("delta_k"));
    }
    Ok(sum_weighted(exact_level(k, n)))
}

/// `M_k(t) = ∑_{n <= t} Δ_k(n)`, summed over `η` with `η^k <= t`.
pub fn summatory_m(k: ExponentVector, t: u64) -> Result<ZetaMultiple> {
    if t == 0 {
        return Err(Error::ZeroArgument("summatory_m"));
    }
    Ok(sum_weighted(sublevel(k, t)))
}

/// `M_k(t)` summed over `n` instead.
pub fn summatory_m_by_n(k: ExponentVector, t: u64) -> Result<ZetaMultiple> {
    let mut acc = ZetaMultiple::zero(1);
    for n in 1..=t {
        acc = acc + delta_k(k, n)?;
    }
    Ok(acc)
}

fn check_s(k: ExponentVector, p: u64, s: f64) -> Result<()> {
    for kj in k.0 {
        let x = kj as f64 * s + 1.0;
        if x <= 0.0 {
            return Err(Error::Pole { p, s });
        }
    }
    Ok(())
}

/// The closed-form Euler factor `F_{k,p}(s)`, for `s > -1/max k_j`.
pub fn local_factor(k: ExponentVector, p: u64, s: f64) -> Result<f64> {
    check_s(k, p, s)?;
    let pf = p as f64;
    let x = 1.0 / pf;
    let one = 1.0 - x;
    let term = |kj: u32| one / (pf.powf(kj as f64 * s + 1.0) - 1.0);
    let [k1, k2, k3, k4] = k.0;
    let side = term(k1) + term(k2) + term(k4);
    Ok(one * ((1.0 + x) + side + term(k3) * ((1.0 - 2.0 * x) + side)))
}

/// `F_{k,p}(0)`, exactly: every `p^(k_j s + 1) - 1` becomes `p - 1`.
pub fn local_factor_at_zero_exact(p: u64) -> Rational {
    let p = p as i64;
    let one = rational(p - 1, p);
    let term = &one / Rational::from_integer(BigInt::from(p - 1));
    let side = &term * Rational::from_integer(BigInt::from(3));
    let inner = rational(p - 2, p) + &side;
    &one * (rational(p + 1, p) + &side + &term * inner)
}

/// Per-prime factor of `G_k(0) = ∏_p (1 - 1/p)^5 (1 + 5/p + 1/p^2)`.
pub fn gk_zero_factor(p: u64) -> f64 {
    euler_factor(p)
}

/// The same factor computed as `F_{k,p}(0) (1 - 1/p)^4`, the local factor
/// of `E_k` at `s = 0` being `(1 - 1/p)^-4`.
pub fn gk_zero_factor_via_local(k: ExponentVector, p: u64) -> Result<f64> {
    let x = 1.0 / p as f64;
    Ok(local_factor(k, p, 0.0)? * (1.0 - x).powi(4))
}

/// `∑_{a,b,c,d <= depth} θ(p^a, p^b, p^c, p^d) ζ(2) (1 - 1/p^2) / p^{(k1 s+1) a + ...}`,
/// the truncated local Dirichlet sum, together with a bound on the omitted
/// terms.
pub fn local_sum_truncated(k: ExponentVector, p: u64, s: f64, depth: u32) -> Result<(f64, f64)> {
    check_s(k, p, s)?;
    let pf = p as f64;
    let ratio = k.0.map(|kj| pf.powf(-(kj as f64 * s + 1.0)));
    let euler = 1.0 - 1.0 / (pf * pf);
    let mut sum = 0.0;
    for a in 0..=depth {
        for b in 0..=depth {
            for c in 0..=depth {
                for d in 0..=depth {
                    let eta = EtaTuple([a, b, c, d].map(|e| p.pow(e)));
                    let th = theta(&eta);
                    if th.is_zero() {
                        continue;
                    }
                    let w = ratio[0].powi(a as i32)
                        * ratio[1].powi(b as i32)
                        * ratio[2].powi(c as i32)
                        * ratio[3].powi(d as i32);
                    sum += rational_to_f64(&th.coeff) * euler * w;
                }
            }
        }
    }
    // |θ ζ(2) (1 - 1/p^2)| <= 4 on prime powers
    let full: f64 = ratio.iter().map(|r| 1.0 / (1.0 - r)).product();
    let tail: f64 = ratio
        .iter()
        .map(|r| r.powi(depth as i32 + 1) / (1.0 - r) * full * (1.0 - r))
        .sum::<f64>()
        * 4.0;
    Ok((sum, tail))
}

/// `η` with `η^(2,2,3,2) <= B < η^(3,3,4,2)`.
pub fn main_term_region(b: u64) -> Vec<EtaTuple> {
    sublevel(ExponentVector::LOWER, b)
        .into_iter()
        .filter(|e| e.weighted(ExponentVector::UPPER.0).unwrap() > b as u128)
        .collect()
}

/// The predicted main term `ω B ∑_{η in E*(B)} θ(η) / (η1 η2 η3 η4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTerm {
    pub b: u64,
    /// The exact `η`-sum over `E*(B)`.
    pub eta_sum: ZetaMultiple,
    pub omega: f64,
    pub value: f64,
}

pub fn predicted_main_term(b: u64, omega: f64) -> Result<MainTerm> {
    if b == 0 {
        return Err(Error::ZeroArgument("predicted_main_term"));
    }
    let eta_sum = sum_weighted(main_term_region(b));
    let difference = summatory_m(ExponentVector::LOWER, b)? - summatory_m(ExponentVector::UPPER, b)?;
    if difference != eta_sum {
        return Err(Error::Verification(format!(
            "E*(B) sum {eta_sum} differs from M-difference {difference} at B = {b}"
        )));
    }
    Ok(MainTerm {
        b,
        value: omega * b as f64 * eta_sum.to_f64(),
        eta_sum,
        omega,
    })
}

/// `∑_{n <= B} (Δ_(2,2,3,2)(n) - Δ_(3,3,4,2)(n))`, summed over `n`.
pub fn delta_difference_sum(b: u64) -> Result<ZetaMultiple> {
    let mut acc = ZetaMultiple::zero(1);
    for n in 1..=b {
        acc = acc + delta_k(ExponentVector::LOWER, n)? - delta_k(ExponentVector::UPPER, n)?;
    }
    Ok(acc)
}

/// `M_k(t) / (log t)^4` at each `t`, for inspecting the growth rate.
pub fn growth_diagnostic(k: ExponentVector, ts: &[u64]) -> Result<Vec<(u64, f64)>> {
    ts.iter()
        .map(|&t| Ok((t, summatory_m(k, t)?.to_f64() / (t as f64).ln().powi(4))))
        .collect()
}

/// `n <= n_max` with `Δ_k(n) < 0`. Nothing forces the sign, so this is a
/// monitored quantity rather than an invariant.
pub fn negative_deltas(k: ExponentVector, n_max: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        if delta_k(k, n)?.coeff < Rational::zero() {
            out.push(n);
        }
    }
    Ok(out)
}
