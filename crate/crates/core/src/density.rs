//! The archimedean side: the height function `h`, the `g` family of
//! integrals, `G2`, `ω_∞`, the Euler product and the leading constant
//! `c = α · ω_∞ · ∏_p (1 - 1/p)^5 (1 + 5/p + 1/p^2)`.
//!
//! For fixed `(t0, t5, t6)` every constraint of `h <= 1` is linear in `t1`
//! except one, which is quadratic. The `t1`-measure [`g0`] is therefore
//! computed in closed form, and only the outer two integrations are
//! numerical.
//!
//! Two changes of variables keep the outer integrands bounded near
//! `t5 -> 0`, where the region stretches out in `t6`
//! (it is bounded by `t5^3 t6^2 <= 2`):
//!
//! * `t5 = v^4`, `t6 = u v^-6` (so `u = t5^{3/2} t6`, `|u| <= √2`), used
//!   for `ω_∞`;
//! * `t5 = v^4`, `t6 = ±w^2 v^-6` (`0 <= w <= 2^{1/4}`), used for `G2` and
//!   the `g` family. The Jacobian `8 w / v^3` then cancels the decay
//!   `g0 ≪ 1 / (t0 |t6|^{1/2})`.

use serde::Serialize;

use crate::arith::{primes_up_to, rational, Rational};
use crate::quadrature::{integrate, integrate_2d, QuadratureResult, Tolerance};
use crate::torsor::ScalingContext;
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

/// Largest admissible relative error before a quadrature counts as failed,
/// unless a looser tolerance was asked for.
pub const NONCONVERGENCE_LIMIT: f64 = 1e-3;

const W_MAX: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// `h(t0, t1, t5, t6)`: the maximum of the six rescaled coordinate sizes.
pub fn h_max(t0: f64, t1: f64, t5: f64, t6: f64) -> f64 {
    let t02 = t0 * t0;
    let t04 = t02 * t02;
    [
        t04 * t5,
        t04 * t1,
        t1 * t5 * t5 * t6 * t6 + t02 * t1 * t1 * t6,
        t02 * t1 * t5 * t6,
        t02 * t5 * t5 * t6 + t04 * t1,
        t5 * t5 * t5 * t6 * t6 + t02 * t1 * t5 * t6,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max)
}

/// Bounding box of `{h <= 1, t5 > 0}` for fixed `t0`:
/// `|t1| <= t0^-4`, `0 < t5 <= t0^-4`, `t5^3 t6^2 <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionBounds {
    pub t0: f64,
    pub t1_max: f64,
    pub t5_max: f64,
}

impl RegionBounds {
    pub fn new(t0: f64) -> Self {
        let r = 1.0 / t0.powi(4);
        Self { t0, t1_max: r, t5_max: r }
    }

    /// `|t6|` bound at a given `t5`.
    pub fn t6_max(&self, t5: f64) -> f64 {
        (2.0 / (t5 * t5 * t5)).sqrt()
    }

    pub fn contains(&self, t1: f64, t5: f64, t6: f64) -> bool {
        t1.abs() <= self.t1_max && t5 > 0.0 && t5 <= self.t5_max && t5 * t5 * t5 * t6 * t6 <= 2.0
    }
}

/// `{t : |c t + d| <= 1}` as a closed interval (possibly empty or all of R).
fn linear_band(c: f64, d: f64) -> (f64, f64) {
    if c == 0.0 {
        return if d.abs() <= 1.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (1.0, -1.0)
        };
    }
    let x = (-1.0 - d) / c;
    let y = (1.0 - d) / c;
    (x.min(y), x.max(y))
}

/// Roots of `a t^2 + b t + c` with `a != 0`, ascending, if real.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * disc.sqrt());
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    Some((r1.min(r2), r1.max(r2)))
}

fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    (hi.min(b) - lo.max(a)).max(0.0)
}

/// Length of `{t in [lo, hi] : |a t^2 + b t| <= 1}`.
fn quadratic_band_measure(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if a == 0.0 {
        let (x, y) = linear_band(b, 0.0);
        return overlap(lo, hi, x, y);
    }
    let (a, b) = if a < 0.0 { (-a, -b) } else { (a, b) };
    // a t^2 + b t <= 1 between the roots (always real)
    let (r1, r2) = quadratic_roots(a, b, -1.0).unwrap();
    // a t^2 + b t < -1 strictly between these, if any
    let dip = quadratic_roots(a, b, 1.0).map_or(0.0, |(s1, s2)| overlap(lo, hi, s1, s2));
    (overlap(lo, hi, r1, r2) - dip).max(0.0)
}

/// Measure of `t1` subject to `|lin_i(t1)| <= 1` for every linear
/// constraint `(c, d)` and `|a t1^2 + b t1| <= 1`.
fn t1_measure(linear: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for &(c, d) in linear {
        let (x, y) = linear_band(c, d);
        lo = lo.max(x);
        hi = hi.min(y);
        if hi <= lo {
            return 0.0;
        }
    }
    quadratic_band_measure(a, b, lo, hi)
}

/// `g0(t0, t5, t6)`: the length of `{t1 : h(t0, t1, t5, t6) <= 1}`.
pub fn g0(t0: f64, t5: f64, t6: f64) -> f64 {
    let t02 = t0 * t0;
    let t04 = t02 * t02;
    if (t04 * t5).abs() > 1.0 {
        return 0.0;
    }
    let linear = [
        (t04, 0.0),
        (t02 * t5 * t6, 0.0),
        (t04, t02 * t5 * t5 * t6),
        (t02 * t5 * t6, t5 * t5 * t5 * t6 * t6),
    ];
    t1_measure(&linear, t02 * t6, t5 * t5 * t6 * t6)
}

/// The `t1`-section of the region defining `ω_∞`, transcribed from its own
/// list of constraints (`t0 = 1`).
fn omega_section(t5: f64, t6: f64) -> f64 {
    if t5.abs() > 1.0 {
        return 0.0;
    }
    let linear = [
        (1.0, 0.0),                    // |t1|
        (t5 * t6, 0.0),                // |t1 t5 t6|
        (1.0, t5 * t5 * t6),           // |t5^2 t6 + t1|
        (t5 * t6, t5 * t5 * t5 * t6 * t6), // |t5^3 t6^2 + t1 t5 t6|
    ];
    // |t1 t5^2 t6^2 + t1^2 t6|
    t1_measure(&linear, t6, t5 * t5 * t6 * t6)
}

/// Rejects results whose relative error exceeds both the requested
/// tolerance and [`NONCONVERGENCE_LIMIT`].
fn check(what: &str, r: QuadratureResult, rel_tol: f64) -> Result<QuadratureResult> {
    if !r.value.is_finite() || r.relative_error() > NONCONVERGENCE_LIMIT.max(rel_tol) {
        return Err(Error::NonConvergence {
            what: what.to_string(),
            value: r.value,
            error: r.error_estimate,
        });
    }
    Ok(r)
}

fn tolerance(rel: f64) -> Result<Tolerance> {
    if !(rel > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {rel}")));
    }
    Ok(Tolerance::relative(rel).with_abs(rel * 1e-6))
}

/// `∫∫ g0(t0, v^4, w^2 v^-6) 8 w v^-3 dw dv` over `w >= w_lo(v)`, doubled
/// for the negative half of `t6` (`g0` is even in `t6`).
fn vw_integral(t0: f64, w_lo: impl Fn(f64) -> f64, tol: Tolerance) -> QuadratureResult {
    integrate_2d(
        |v, w| {
            let v3 = v * v * v;
            8.0 * w / v3 * g0(t0, v * v * v * v, w * w / (v3 * v3))
        },
        (0.0, 1.0 / t0),
        |v| (w_lo(v).min(W_MAX), W_MAX),
        tol,
    )
    .scaled(2.0)
}

/// `G2(t0) = ∫_{h <= 1, t5 > 0} dt1 dt5 dt6`.
pub fn g2_total(t0: f64, rel_tol: f64) -> Result<QuadratureResult> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidArgument(format!("t0 must be positive, got {t0}")));
    }
    check("G2", vw_integral(t0, |_| 0.0, tolerance(rel_tol)?), rel_tol)
}

/// `ω_∞`, integrated in the coordinates `t5 = v^4`, `u = t5^{3/2} t6`.
pub fn omega_infty(rel_tol: f64) -> Result<QuadratureResult> {
    let tol = tolerance(rel_tol)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let half = |lo: f64, hi: f64| {
        integrate_2d(
            |v, u| {
                let v3 = v * v * v;
                4.0 / v3 * omega_section(v * v * v * v, u / (v3 * v3))
            },
            (0.0, 1.0),
            |_| (lo, hi),
            tol,
        )
    };
    check("omega_infty", half(-sqrt2, 0.0).plus(&half(0.0, sqrt2)), rel_tol)
}

/// `g1^a(t0, t6) = ∫_{Y5 t5 >= |Y6 t6|, t5 > 0} g0 dt5`.
pub fn g1a(t0: f64, t6: f64, ctx: &ScalingContext, tol: Tolerance) -> QuadratureResult {
    let lo = (ctx.y6 * t6).abs() / ctx.y5;
    let hi = RegionBounds::new(t0).t5_max.min((2.0 / (t6 * t6)).cbrt());
    integrate(|t5| g0(t0, t5, t6), lo, hi, tol)
}

/// `g1^b(t0, t5) = ∫_{|Y6 t6| > max(Y5 t5, 1)} g0 dt6`, in the variable
/// `w = (t5^{3/2} |t6|)^{1/2}`.
pub fn g1b(t0: f64, t5: f64, ctx: &ScalingContext, tol: Tolerance) -> QuadratureResult {
    let t6_lo = (ctx.y5 * t5).max(1.0) / ctx.y6;
    let s = t5.powf(1.5);
    let w_lo = (t6_lo * s).sqrt().min(W_MAX);
    integrate(|w| 2.0 * w / s * g0(t0, t5, w * w / s), w_lo, W_MAX, tol).scaled(2.0)
}

/// The `g` family at one `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GFamily {
    pub g2a: QuadratureResult,
    pub g2b: QuadratureResult,
    /// `g2` as the direct triple integral over `h <= 1, |Y6 t6| > 1, t5 > 0`.
    pub g2_direct: QuadratureResult,
}

impl GFamily {
    /// `g2a + g2b`.
    pub fn g2_sum(&self) -> QuadratureResult {
        self.g2a.plus(&self.g2b)
    }

    /// `|g2a + g2b - g2| <= combined error estimates`.
    pub fn decomposition_holds(&self) -> bool {
        let s = self.g2_sum();
        (s.value - self.g2_direct.value).abs() <= s.error_estimate + self.g2_direct.error_estimate
    }
}

pub fn g_family(t0: f64, ctx: &ScalingContext, rel_tol: f64) -> Result<GFamily> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidArgument(format!("t0 must be positive, got {t0}")));
    }
    let tol = tolerance(rel_tol)?;
    let inner = Tolerance { rel: tol.rel / 4.0, ..tol };
    let bounds = RegionBounds::new(t0);

    // g2a: t6 outer over 1/Y6 < t6 <= the largest t6 admitting Y5 t5 >= Y6 t6
    let t6_lo = 1.0 / ctx.y6;
    let t6_hi = (ctx.y5 * bounds.t5_max / ctx.y6).min((2.0 * (ctx.y5 / ctx.y6).powi(3)).powf(0.2));
    let mut inner_evals = 0;
    let g2a = crate::quadrature::integrate_with_error(
        |t6| {
            let r = g1a(t0, t6, ctx, inner);
            inner_evals += r.evaluations;
            (r.value, r.error_estimate)
        },
        t6_lo,
        t6_hi.max(t6_lo),
        tol,
    )
    .scaled(2.0);
    let g2a = QuadratureResult { evaluations: g2a.evaluations + inner_evals, ..g2a };

    // g2b: t5 = v^4 outer
    let mut inner_evals = 0;
    let g2b = crate::quadrature::integrate_with_error(
        |v| {
            let r = g1b(t0, v * v * v * v, ctx, inner).scaled(4.0 * v * v * v);
            inner_evals += r.evaluations;
            (r.value, r.error_estimate)
        },
        0.0,
        1.0 / t0,
        tol,
    );
    let g2b = QuadratureResult { evaluations: g2b.evaluations + inner_evals, ..g2b };

    let sqrt_y6 = ctx.y6.sqrt();
    let g2_direct = vw_integral(t0, |v| v * v * v / sqrt_y6, tol);

    let small = |r: QuadratureResult| r.error_estimate <= 1e-12;
    let ok = |what: &str, r: QuadratureResult| if small(r) { Ok(r) } else { check(what, r, rel_tol) };
    Ok(GFamily {
        g2a: ok("g2a", g2a)?,
        g2b: ok("g2b", g2b)?,
        g2_direct: ok("g2", g2_direct)?,
    })
}

/// Empirical suprema of the bounds `g0 ≪ 1/(t0 |t6|^{1/2})`,
/// `∫ g0 dt5 ≪ min(1/(t0^{1/2} |t6|^{5/4}), 1/t0^8)` and
/// `∫ g0 dt6 ≪ 1/(t0 t5^{3/4})` over a sample grid. The implied constants
/// are not known, so these are reported, never asserted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayDiagnostics {
    pub g0_ratio: f64,
    pub g1a_ratio: f64,
    pub g1b_ratio: f64,
}

pub fn decay_diagnostics(t0_grid: &[f64]) -> DecayDiagnostics {
    let tol = Tolerance::relative(1e-4).with_abs(1e-12);
    let grid: Vec<f64> = (-12..=12).map(|k| 2f64.powi(k)).collect();
    let mut d = DecayDiagnostics { g0_ratio: 0.0, g1a_ratio: 0.0, g1b_ratio: 0.0 };
    for &t0 in t0_grid {
        let t5_max = RegionBounds::new(t0).t5_max;
        for &t6 in &grid {
            for &t5 in &grid {
                d.g0_ratio = d.g0_ratio.max(g0(t0, t5, t6) * t0 * t6.sqrt());
            }
            let full = integrate(|t5| g0(t0, t5, t6), 0.0, t5_max, tol).value;
            let bound = (1.0 / (t0.sqrt() * t6.powf(1.25))).min(t0.powi(-8));
            d.g1a_ratio = d.g1a_ratio.max(full / bound);
        }
        for &t5 in grid.iter().filter(|&&t5| t5 <= t5_max) {
            let s = t5.powf(1.5);
            let full = 2.0 * integrate(|w| 2.0 * w / s * g0(t0, t5, w * w / s), 0.0, W_MAX, tol).value;
            d.g1b_ratio = d.g1b_ratio.max(full * t0 * t5.powf(0.75));
        }
    }
    d
}

/// `(1 - 1/p)^5 (1 + 5/p + 1/p^2)`.
pub fn euler_factor(p: u64) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 - x).powi(5) * (1.0 + 5.0 * x + x * x)
}

pub fn euler_factor_exact(p: u64) -> Rational {
    let p = p as i64;
    let one_minus = rational(p - 1, p);
    let tail = rational(p * p + 5 * p + 1, p * p);
    let mut r = tail;
    for _ in 0..5 {
        r *= &one_minus;
    }
    r
}

/// Partial Euler product with a bound on the missing tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerProduct {
    pub p_max: u64,
    pub value: f64,
    /// The full product lies in `[value - tail_bound, value]`.
    pub tail_bound: f64,
}

/// `∏_{p <= p_max} (1 - 1/p)^5 (1 + 5/p + 1/p^2)`.
///
/// Each factor is `1 - 14/p^2 + 35/p^3 - 35/p^4 + 14/p^5 - 1/p^7`, which
/// lies in `[1 - 14/p^2, 1)`. Hence the tail over `p > P >= 5` lies in
/// `[exp(-14 / (P (1 - 14/P^2))), 1]`.
pub fn euler_product(p_max: u64) -> Result<EulerProduct> {
    if p_max < 2 {
        return Err(Error::InvalidArgument(format!("prime cutoff must be >= 2, got {p_max}")));
    }
    let mut log_sum = 0.0f64;
    for p in primes_up_to(p_max) {
        log_sum += euler_factor(p).ln();
    }
    let value = log_sum.exp();
    let tail_bound = if p_max >= 5 {
        let pm = p_max as f64;
        value * -(-14.0 / (pm * (1.0 - 14.0 / (pm * pm)))).exp_m1()
    } else {
        value
    };
    Ok(EulerProduct { p_max, value, tail_bound })
}

/// `α = (1/4!) (1/(2^3 3) - 1/(2 3^2 4))`, computed exactly; equals `1/864`.
pub fn alpha_constant() -> Rational {
    let bracket = rational(1, 2 * 2 * 2 * 3) - rational(1, 2 * 3 * 3 * 4);
    let alpha = rational(1, 24) * bracket;
    debug_assert_eq!(alpha, rational(1, 864));
    alpha
}

/// The leading constant with its propagated error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeyreConstant {
    pub alpha: String,
    pub euler: EulerProduct,
    pub omega: QuadratureResult,
    pub value: f64,
    pub error: f64,
}

pub fn peyre_constant(rel_tol: f64, p_max: u64) -> Result<PeyreConstant> {
    let alpha = alpha_constant();
    let a = crate::arith::rational_to_f64(&alpha);
    let euler = euler_product(p_max)?;
    let omega = omega_infty(rel_tol)?;
    let value = a * euler.value * omega.value;
    let rel = omega.relative_error() + euler.tail_bound / euler.value;
    Ok(PeyreConstant {
        alpha: alpha.to_string(),
        euler,
        omega,
        value,
        error: value * rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsor::{scaling_context, EtaTuple};
    use rand::{Rng, SeedableRng};

    /// Independent `t1`-measure: locate sign changes of `h - 1` on a fine
    /// grid and bisect each boundary.
    fn g0_by_subdivision(t0: f64, t5: f64, t6: f64) -> f64 {
        let r = 1.0 / t0.powi(4);
        let inside = |t1: f64| h_max(t0, t1, t5, t6) <= 1.0;
        let n = 20_000;
        let step = 2.0 * r / n as f64;
        let mut total = 0.0;
        let boundary = |mut a: f64, mut b: f64| {
            // inside(a) != inside(b); returns the crossing
            let ia = inside(a);
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                if inside(m) == ia {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let mut start = if inside(-r) { Some(-r) } else { None };
        for i in 0..n {
            let a = -r + i as f64 * step;
            let b = a + step;
            match (inside(a), inside(b)) {
                (true, false) => {
                    total += boundary(a, b) - start.take().unwrap();
                }
                (false, true) => start = Some(boundary(a, b)),
                _ => {}
            }
        }
        if let Some(s) = start {
            total += r - s;
        }
        total
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_max(1.0, 1.0, 1.0, 1.0), 2.0);
        assert_eq!(h_max(1.0, 0.0, 0.5, 0.0), 0.5);
    }

    #[test]
    fn h_scaling_law() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let t: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let lam: f64 = rng.gen_range(0.2..5.0);
            let a = h_max(t[0], t[1], t[2], t[3]);
            let b = h_max(lam * t[0], t[1] / lam.powi(4), t[2] / lam.powi(4), t[3] * lam.powi(6));
            assert!((a - b).abs() <= 1e-12 * (1.0 + a), "{t:?} λ={lam}");
        }
    }

    #[test]
    fn g0_examples() {
        assert!((g0(1.0, 0.5, 0.0) - 2.0).abs() < 1e-15);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let t5 = rng.gen_range(0.0..1.0);
            let t6 = rng.gen_range(-50.0..50.0);
            let v = g0(2.0, t5, t6);
            assert!((0.0..=2.0 / 16.0 + 1e-15).contains(&v));
        }
    }

    #[test]
    fn g0_matches_subdivision_oracle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..150 {
            let t0: f64 = rng.gen_range(0.6..1.6);
            let t5: f64 = rng.gen_range(0.0..1.0) / t0.powi(4);
            let t6 = rng.gen_range(-1.0..1.0) * (2.0 / t5.powi(3)).sqrt();
            let exact = g0(t0, t5, t6);
            let oracle = g0_by_subdivision(t0, t5, t6);
            assert!((exact - oracle).abs() < 1e-8, "t0={t0} t5={t5} t6={t6}: {exact} vs {oracle}");
        }
    }

    #[test]
    fn g0_even_in_t6() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..1000 {
            let t0 = rng.gen_range(0.3..3.0);
            let t5 = rng.gen_range(0.0..2.0);
            let t6 = rng.gen_range(-100.0..100.0);
            assert!((g0(t0, t5, t6) - g0(t0, t5, -t6)).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_section_is_g0_at_one() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..1000 {
            let t5 = rng.gen_range(0.0..1.2);
            let t6 = rng.gen_range(-30.0..30.0);
            assert!((omega_section(t5, t6) - g0(1.0, t5, t6)).abs() < 1e-12);
        }
    }

    #[test]
    fn region_box_soundness() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        for _ in 0..100_000 {
            let t0 = rng.gen_range(0.5..2.0);
            let t1 = rng.gen_range(-20.0..20.0);
            let t5 = rng.gen_range(0.0..20.0);
            let t6 = rng.gen_range(-20.0..20.0);
            if h_max(t0, t1, t5, t6) <= 1.0 {
                assert!(RegionBounds::new(t0).contains(t1, t5, t6));
            }
        }
    }

    #[test]
    fn euler_factor_values() {
        assert_eq!(euler_factor_exact(2), rational(15, 128));
        assert_eq!(euler_factor(2), 0.1171875);
        assert!((euler_factor(1_000_000_007) - 1.0).abs() < 1e-15);
        for p in primes_up_to(10_000) {
            assert!(euler_factor(p) < 1.0);
            let x = 1.0 / p as f64;
            assert!(euler_factor(p) >= 1.0 - 14.0 * x * x);
        }
    }

    #[test]
    fn euler_truncations() {
        let a = euler_product(100_000).unwrap();
        let b = euler_product(1_000_000).unwrap();
        assert!(b.value < a.value);
        assert!(a.value - b.value < 1e-6);
        assert!(a.value - b.value <= a.tail_bound);
        assert!(b.tail_bound < a.tail_bound);
    }

    #[test]
    fn alpha_is_1_over_864() {
        assert_eq!(rational(1, 2 * 2 * 2 * 3) - rational(1, 2 * 3 * 3 * 4), rational(1, 36));
        assert_eq!(rational(1, 24) * rational(1, 36), rational(1, 864));
        assert_eq!(alpha_constant(), rational(1, 864));
    }

    #[test]
    fn omega_positive_and_equal_to_g2_at_one() {
        let tol = 1e-4;
        let w = omega_infty(tol).unwrap();
        let g = g2_total(1.0, tol).unwrap();
        assert!(w.value > 0.0);
        // the box |t1|, |t5|, |t6| <= 1/4 lies inside the region
        assert!(w.value > 0.5 * 0.25 * 0.5);
        assert!((w.value - g.value).abs() <= w.error_estimate + g.error_estimate, "{w:?} {g:?}");
        assert!((w.value - g.value).abs() <= 2.0 * tol * w.value);
    }

    /// `ω∞` from a run at relative tolerance `1e-6` (error estimate `1.8e-5`).
    const OMEGA_FIXTURE: f64 = 27.330_614_8;

    #[test]
    fn omega_regression_fixture() {
        for tol in [1e-2, 1e-3, 1e-4] {
            let w = omega_infty(tol).unwrap();
            assert!((w.value - OMEGA_FIXTURE).abs() <= w.error_estimate + 2e-5, "tol={tol}: {w:?}");
        }
    }

    #[test]
    fn looser_tolerance_is_not_nonconvergence() {
        let coarse = omega_infty(1e-2).unwrap();
        let fine = omega_infty(1e-3).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error_estimate + fine.error_estimate);
    }

    #[test]
    fn g2_scaling() {
        let w = g2_total(1.0, 1e-4).unwrap().value;
        for t0 in [1.25, 1.5, 2.0] {
            let g = g2_total(t0, 1e-4).unwrap().value;
            assert!((t0 * t0 * g - w).abs() < 1e-3 * w, "t0={t0}");
        }
    }

    #[test]
    fn g_family_decomposition() {
        let ctx = scaling_context(EtaTuple::new(1, 1, 1, 1).unwrap(), 1e4).unwrap();
        for t0 in [0.5, 1.0, 2.0] {
            let f = g_family(t0, &ctx, 1e-4).unwrap();
            assert!(f.g2a.value >= 0.0 && f.g2b.value >= 0.0 && f.g2_direct.value >= 0.0);
            assert!(f.decomposition_holds(), "t0={t0}: {f:?}");
        }
    }

    #[test]
    fn g2a_vanishes_when_region_excludes_it() {
        // tiny Y6 forces |t6| > 1/Y6 beyond the reach of the region
        let mut ctx = scaling_context(EtaTuple::new(1, 1, 1, 1).unwrap(), 1e4).unwrap();
        ctx.y6 = 1e-9;
        let f = g_family(1.0, &ctx, 1e-3).unwrap();
        assert_eq!(f.g2a.value, 0.0);
    }

    #[test]
    fn bad_arguments() {
        assert!(g2_total(0.0, 1e-3).is_err());
        assert!(omega_infty(0.0).is_err());
        assert!(euler_product(1).is_err());
    }

    #[test]
    fn decay_diagnostics_are_finite() {
        let d = decay_diagnostics(&[0.5, 1.0, 2.0]);
        assert!(d.g0_ratio.is_finite() && d.g1a_ratio.is_finite() && d.g1b_ratio.is_finite());
        assert!(d.g0_ratio > 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn g0_is_even_in_t6(t0 in 0.2f64..1.18, t5 in 0.0f64..2.0, t6 in 0.0f64..3.0) {
                let (a, b) = (g0(t0, t5, t6), g0(t0, t5, -t6));
                prop_assert!(a >= 0.0);
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            }

            #[test]
            fn g0_vanishes_outside_region(t0 in 0.2f64..1.18, t5 in 0.01f64..2.0, t6 in 0.0f64..5.0) {
                let r = RegionBounds::new(t0);
                if t5 > 1.0 / t0.powi(4) || t6.abs() > r.t6_max(t5) {
                    prop_assert_eq!(g0(t0, t5, t6), 0.0);
                }
            }

            #[test]
            fn h_is_even_in_t0(t0 in 0.1f64..2.0, t1 in -3.0f64..3.0, t5 in -3.0f64..3.0, t6 in -3.0f64..3.0) {
                // t0 enters only through even powers
                let a = h_max(t0, t1, t5, t6);
                prop_assert!((a - h_max(-t0, t1, t5, t6)).abs() <= 1e-12 * (1.0 + a));
                prop_assert!(a >= 0.0);
            }
        }
    }
}
