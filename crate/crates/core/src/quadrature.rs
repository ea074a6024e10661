//! Globally adaptive Gauss-Kronrod (7/15) quadrature, with a nested form for
//! two-dimensional integrals whose inner limits depend on the outer
//! variable.
//!
//! The error estimate of a panel is `|K15 - G7|`, which is pessimistic for
//! smooth integrands but stays honest on the piecewise-smooth integrands
//! produced by semialgebraic regions. The panel with the largest estimate is
//! always split first (ties broken by position), so results are
//! deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.error_estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.error_estimate / self.value.abs()
        }
    }

    /// `self + other`, errors added.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            value: self.value * k,
            error_estimate: self.error_estimate * k.abs(),
            ..*self
        }
    }
}

/// Stop once the estimate is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            abs: 1e-15,
            max_panels: 2000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_max_panels(mut self, n: usize) -> Self {
        self.max_panels = n;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Applies the 15-point rule to an integrand that returns `(value, error)`;
/// the integrand's own error is integrated with the Kronrod weights and
/// added to the panel's estimate.
fn gk15(f: &mut impl FnMut(f64) -> (f64, f64), a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (fc, ec) = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut inner = WGK[7] * ec;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let (f1, e1) = f(c - h * x);
        let (f2, e2) = f(c + h * x);
        k += w * (f1 + f2);
        inner += w * (e1 + e2);
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs() + inner * h.abs())
}

/// Integrates an integrand that also reports its own absolute error.
pub fn integrate_with_error(
    mut f: impl FnMut(f64) -> (f64, f64),
    a: f64,
    b: f64,
    tol: Tolerance,
) -> QuadratureResult {
    if !(b > a) {
        return QuadratureResult::zero();
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    heap.push(Panel { a, b, value: v, error: e });
    let mut value = v;
    let mut error = e;
    let mut evals = 15;
    while error > tol.target(value) && heap.len() < tol.max_panels {
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval exhausted at machine precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evals += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // resum to shed accumulated rounding from the running updates
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    QuadratureResult {
        value,
        error_estimate: error,
        evaluations: evals,
        converged: error <= tol.target(value),
    }
}

pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> QuadratureResult {
    integrate_with_error(|x| (f(x), 0.0), a, b, tol)
}

/// `∫_{xa}^{xb} ∫_{lo(x)}^{hi(x)} f(x, y) dy dx`.
///
/// Inner integrals run to a quarter of the outer tolerance; their error
/// estimates are integrated along with their values.
pub fn integrate_2d(
    mut f: impl FnMut(f64, f64) -> f64,
    (xa, xb): (f64, f64),
    mut limits: impl FnMut(f64) -> (f64, f64),
    tol: Tolerance,
) -> QuadratureResult {
    let inner_tol = Tolerance {
        rel: tol.rel / 4.0,
        abs: tol.abs / (4.0 * (xb - xa).abs().max(1e-300)),
        max_panels: tol.max_panels,
    };
    let mut inner_evals = 0usize;
    let mut inner_ok = true;
    let mut r = integrate_with_error(
        |x| {
            let (lo, hi) = limits(x);
            let inner = integrate(|y| f(x, y), lo, hi, inner_tol);
            inner_evals += inner.evaluations;
            inner_ok &= inner.converged;
            (inner.value, inner.error_estimate)
        },
        xa,
        xb,
        tol,
    );
    r.evaluations += inner_evals;
    r.converged &= inner_ok || r.error_estimate <= tol.target(r.value);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x + 1.0, -1.0, 2.0, Tolerance::relative(1e-12));
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0) + 3.0;
        assert!((r.value - exact).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn kinked_integrand() {
        let r = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, Tolerance::relative(1e-10));
        assert!((r.value - 0.29).abs() < 1e-10);
        assert!(r.error_estimate >= (r.value - 0.29).abs());
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::relative(1e-8));
        assert!((r.value - 2.0).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn indicator_integrand() {
        let r = integrate(|x: f64| if x < 0.7 { 1.0 } else { 0.0 }, 0.0, 1.0, Tolerance::relative(1e-9));
        assert!((r.value - 0.7).abs() < 1e-9);
    }

    #[test]
    fn disk_area() {
        let r = integrate_2d(
            |_, _| 1.0,
            (-1.0, 1.0),
            |x: f64| {
                let y = (1.0 - x * x).max(0.0).sqrt();
                (-y, y)
            },
            Tolerance::relative(1e-8),
        );
        assert!((r.value - std::f64::consts::PI).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|_| 1.0, 1.0, 1.0, Tolerance::relative(1e-3));
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cubics_are_exact(c in prop::array::uniform4(-5.0f64..5.0), a in -3.0f64..3.0, w in 0.01f64..4.0) {
                let b = a + w;
                let f = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
                let prim = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)));
                let exact = prim(b) - prim(a);
                let r = integrate(f, a, b, Tolerance::relative(1e-10).with_abs(1e-12));
                prop_assert!(r.converged);
                prop_assert!((r.value - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
            }

            #[test]
            fn additive_over_subintervals(a in -3.0f64..3.0, w in 0.01f64..4.0, s in 0.05f64..0.95) {
                let tol = Tolerance::relative(1e-11).with_abs(1e-13);
                let m = a + s * w;
                let whole = integrate(f64::cos, a, a + w, tol).value;
                let parts = integrate(f64::cos, a, m, tol).value + integrate(f64::cos, m, a + w, tol).value;
                prop_assert!((whole - parts).abs() <= 1e-9);
                prop_assert_eq!(integrate(f64::cos, a + w, a, tol).value, 0.0);
            }
        }
    }
}
