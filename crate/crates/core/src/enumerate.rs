//! Exact counting of `N_{U,H}(B)`, two independent ways.
//!
//! * [`count_naive`] walks the affine chart `x0 > 0` of the surface and
//!   solves for the remaining coordinates.
//! * [`count_torsor`] walks the universal torsor. For fixed `η1..η6` the
//!   torsor equation makes `α2` affine in `α1`, so only `α1` is searched,
//!   along an arithmetic progression cut down to the exact set where every
//!   height inequality holds.
//!
//! Work is split into strata `(η1, η2, η3, η4)` that are counted
//! independently and reduced by summation in a fixed order, so results do
//! not depend on the number of worker threads.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{coprime, gcd};
use crate::surface::{boundary_points, chart_points, in_u, ProjectivePoint};
use crate::torsor::{psi_monomials, satisfies_height_bounds, EtaTuple, TorsorPoint};
use crate::{Error, Result};

/// Largest `B` accepted by the naive engine.
pub const NAIVE_MAX_B: u64 = 500;

/// Default cap on the number of retained image points.
pub const DEFAULT_RETENTION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct EnumOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
    /// Keep image points, up to this many; `None` keeps nothing.
    pub retain: Option<usize>,
}


impl EnumOptions {
    pub fn retaining(cap: usize) -> Self {
        Self {
            workers: 0,
            retain: Some(cap),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Runs `job` on a pool of `workers` threads, or on the global pool when
/// `workers` is 0.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    run_parallel(workers, job)
}

fn run_parallel<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return job();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(job)
}

/// Result of one counting run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Count {
    pub b: u64,
    pub count: u64,
    /// Sorted image points, if retention was on and the cap not exceeded.
    pub points: Option<Vec<ProjectivePoint>>,
}

fn merge_points(parts: Vec<Option<Vec<ProjectivePoint>>>, cap: Option<usize>) -> Option<Vec<ProjectivePoint>> {
    let cap = cap?;
    let mut all = Vec::new();
    for part in parts {
        let part = part?;
        if all.len() + part.len() > cap {
            return None;
        }
        all.extend(part);
    }
    all.sort_unstable();
    Some(all)
}

// ---------------------------------------------------------------------------
// naive engine

/// Counts points of `U` with height at most `b` directly on the quadrics.
///
/// Points with `x0 = 0` all lie on the lines; this is re-verified on every
/// call and reported as an error if it ever fails.
pub fn count_naive(b: u64, opts: EnumOptions) -> Result<Count> {
    if b == 0 {
        return Err(Error::ZeroArgument("count_naive"));
    }
    if b > NAIVE_MAX_B {
        return Err(Error::NaiveBoundExceeded { b, max: NAIVE_MAX_B });
    }
    if let Some(p) = boundary_points(b).into_iter().find(in_u) {
        return Err(Error::Verification(format!("{p} has x0 = 0 but lies on no line")));
    }
    let keep = opts.retain.is_some();
    let parts: Vec<(u64, Option<Vec<ProjectivePoint>>)> = run_parallel(opts.workers, || {
        (1..=b as i64)
            .into_par_iter()
            .map(|x0| {
                let mut n = 0;
                let mut pts = keep.then(Vec::new);
                chart_points(x0, b, |p| {
                    if in_u(&p) {
                        n += 1;
                        if let Some(v) = pts.as_mut() {
                            v.push(p);
                        }
                    }
                });
                (n, pts)
            })
            .collect()
    });
    let count = parts.iter().map(|(n, _)| n).sum();
    let points = merge_points(parts.into_iter().map(|(_, p)| p).collect(), opts.retain);
    Ok(Count { b, count, points })
}

// ---------------------------------------------------------------------------
// torsor engine

/// All `(η1, η2, η3, η4)` with `η1^2 η2^2 η3^3 η4^2 <= b` and pairwise
/// coprime `η1, η2, η4`, in lexicographic order.
pub fn strata(b: u64) -> Vec<EtaTuple> {
    let b = b as u128;
    let mut out = Vec::new();
    let mut e1 = 1u128;
    while e1 * e1 <= b {
        let mut e2 = 1u128;
        while e1 * e1 * e2 * e2 <= b {
            if gcd(e1 as i128, e2 as i128) == 1 {
                let p12 = e1 * e1 * e2 * e2;
                let mut e3 = 1u128;
                while p12 * e3 * e3 * e3 <= b {
                    let p123 = p12 * e3 * e3 * e3;
                    let mut e4 = 1u128;
                    while p123 * e4 * e4 <= b {
                        if gcd(e1 as i128, e4 as i128) == 1 && gcd(e2 as i128, e4 as i128) == 1 {
                            out.push(EtaTuple([e1, e2, e3, e4].map(|e| e as u64)));
                        }
                        e4 += 1;
                    }
                    e3 += 1;
                }
            }
            e2 += 1;
        }
        e1 += 1;
    }
    out
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Integers `x` with `a x^2 + b x + c <= 0`, for `a > 0`, as an inclusive
/// range.
fn convex_sublevel(a: i128, b: i128, c: i128) -> Option<(i128, i128)> {
    let g = |x: i128| a * x * x + b * x + c;
    let disc = (b as f64) * (b as f64) - 4.0 * (a as f64) * (c as f64);
    if disc < 0.0 {
        // the float discriminant can be off at the boundary; the vertex
        // decides exactly
        let v = div_floor(-b, 2 * a);
        return [v, v + 1].into_iter().find(|&x| g(x) <= 0).map(|x| (x, x));
    }
    let sq = disc.sqrt();
    let mid = -(b as f64) / (2.0 * a as f64);
    let half = sq / (2.0 * a as f64);
    let vertex = div_floor(-b, 2 * a);
    let vertex = if g(vertex + 1) < g(vertex) { vertex + 1 } else { vertex };
    if g(vertex) > 0 {
        return None;
    }
    let mut lo = ((mid - half).ceil() as i128).min(vertex);
    while g(lo) > 0 {
        lo += 1;
    }
    while g(lo - 1) <= 0 {
        lo -= 1;
    }
    let mut hi = ((mid + half).floor() as i128).max(vertex);
    while g(hi) > 0 {
        hi -= 1;
    }
    while g(hi + 1) <= 0 {
        hi += 1;
    }
    Some((lo, hi))
}

/// Integers `x` in `[lo, hi]` with `|a x^2 + b x| <= m`, as at most two
/// inclusive ranges.
fn quadratic_band(a: i128, b: i128, m: i128, lo: i128, hi: i128) -> [Option<(i128, i128)>; 2] {
    let clip = |r: Option<(i128, i128)>| r.map(|(l, h)| (l.max(lo), h.min(hi))).filter(|(l, h)| l <= h);
    let Some((l1, h1)) = convex_sublevel(a, b, -m) else {
        return [None, None];
    };
    // remove the strictly-below-(-m) part
    match convex_sublevel(a, b, m + 1) {
        None => [clip(Some((l1, h1))), None],
        Some((l2, h2)) => [clip(Some((l1, l2 - 1))), clip(Some((h2 + 1, h1)))],
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    // extended Euclid; a and m coprime
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// Calls `visit` for every torsor point over the stratum `eta` whose image
/// has height at most `b`.
pub fn enumerate_stratum(b: u64, eta: EtaTuple, visit: impl FnMut(&TorsorPoint)) {
    stratum_points(b, eta, true, visit)
}

/// `prune` restricts `η6` by the two necessary height bounds; without it
/// `|η6| <= B` is scanned, which is always enough since `x3` or `x5` is a
/// nonzero multiple of `η6`.
fn stratum_points(b: u64, eta: EtaTuple, prune: bool, mut visit: impl FnMut(&TorsorPoint)) {
    let [e1, e2, e3, e4] = eta.0.map(|e| e as i128);
    let bb = b as i128;
    let p = e1 * e1 * e2 * e2 * e3 * e3 * e3 * e4 * e4;
    if p > bb {
        return;
    }
    let c1 = e1 * e1 * e2 * e3 * e3 * e4;
    let c4 = e1 * e2 * e2 * e3 * e3 * e4;
    let e1e2e3 = e1 * e2 * e3;
    let e34 = e3 * e4;
    let inv1 = mod_inverse(e1, e2);
    for e5 in 1..=bb / p {
        if !coprime(e5, e1e2e3) {
            continue;
        }
        let m_lin = 2 * bb / (e1 * e2 * e3 * e3 * e4 * e4 * e5 * e5);
        let m_quad = isqrt((2 * bb / (e3 * e4 * e4 * e5 * e5 * e5)) as u128) as i128;
        let m6 = if prune { m_lin.min(m_quad) } else { bb };
        let e35 = e3 * e5;
        for e6 in (-m6..=m6).filter(|&e| e != 0) {
            if !coprime(e6, e1e2e3 * e4) {
                continue;
            }
            let k = e4 * e5 * e5 * e6;
            let c3 = e1 * e3 * e4 * e5 * e6.abs();
            let c5 = e2 * e3 * e4 * e5 * e6.abs();
            let a1max = bb / c1.max(c3);
            let a2max = bb / c4.max(c5);
            let lo = (-a1max).max(div_ceil(-e2 * a2max - k, e1));
            let hi = a1max.min(div_floor(e2 * a2max - k, e1));
            if lo > hi {
                continue;
            }
            // |α1 α2| <= B/|η6|  <=>  |η1 α1^2 + k α1| <= B η2 / |η6|
            let m = bb * e2 / e6.abs();
            let residue = (-k * inv1).rem_euclid(e2);
            for (l, h) in quadratic_band(e1, k, m, lo, hi).into_iter().flatten() {
                let mut a1 = l + (residue - l).rem_euclid(e2);
                while a1 <= h {
                    let a2 = -(k + e1 * a1) / e2;
                    if coprime(a1, e34) && coprime(a2, e35) {
                        let t = TorsorPoint::new(
                            [e1, e2, e3, e4, e5, e6].map(|e| e as i64),
                            [a1 as i64, a2 as i64],
                        );
                        debug_assert!(crate::torsor::height_equivalent(&t, b));
                        visit(&t);
                    }
                    a1 += e2;
                }
            }
        }
    }
}

/// Visits every counted torsor point, sequentially and in a fixed order.
pub fn for_each_torsor_point(b: u64, mut visit: impl FnMut(&TorsorPoint)) {
    for eta in strata(b) {
        enumerate_stratum(b, eta, &mut visit);
    }
}

/// Re-enumerates every stratum without the `η6` pruning, checks that the
/// same torsor points come out and that each of them satisfies both
/// necessary height bounds. Returns the number of points checked.
pub fn check_height_bounds(b: u64, opts: EnumOptions) -> Result<u64> {
    if b == 0 {
        return Err(Error::ZeroArgument("check_height_bounds"));
    }
    let parts: Vec<Result<u64>> = run_parallel(opts.workers, || {
        strata(b)
            .into_par_iter()
            .map(|eta| {
                let mut pruned = Vec::new();
                stratum_points(b, eta, true, |t| pruned.push(*t));
                let mut full = Vec::new();
                stratum_points(b, eta, false, |t| full.push(*t));
                if let Some(t) = full.iter().find(|t| !satisfies_height_bounds(t, b)) {
                    return Err(Error::Verification(format!("{t:?} has height <= {b} but breaks the bounds")));
                }
                pruned.sort_unstable();
                full.sort_unstable();
                if pruned != full {
                    return Err(Error::Verification(format!("pruning changes the solutions over {eta:?}")));
                }
                Ok(full.len() as u64)
            })
            .collect()
    });
    parts.into_iter().sum()
}

fn image(t: &TorsorPoint) -> ProjectivePoint {
    ProjectivePoint::from_primitive(psi_monomials(t).map(|x| x as i64))
}

/// Counts `N_{U,H}(b)` on the universal torsor.
pub fn count_torsor(b: u64, opts: EnumOptions) -> Result<Count> {
    if b == 0 {
        return Err(Error::ZeroArgument("count_torsor"));
    }
    let keep = opts.retain.is_some();
    let cap = opts.retain.unwrap_or(0);
    let parts: Vec<(u64, Option<Vec<ProjectivePoint>>)> = run_parallel(opts.workers, || {
        strata(b)
            .into_par_iter()
            .map(|eta| {
                let mut n = 0u64;
                let mut pts = keep.then(Vec::new);
                enumerate_stratum(b, eta, |t| {
                    n += 1;
                    if let Some(v) = pts.as_mut() {
                        if v.len() < cap + 1 {
                            v.push(image(t));
                        }
                    }
                });
                (n, pts)
            })
            .collect()
    });
    let count = parts.iter().map(|(n, _)| n).sum();
    let points = merge_points(parts.into_iter().map(|(_, p)| p).collect(), opts.retain);
    Ok(Count { b, count, points })
}

/// The three-way split of the torsor count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitCounts {
    pub a_param: f64,
    /// `η5 >= |η6|`
    pub na: u64,
    /// `η5 < |η6|` and `η1^2 η2^2 η3^3 η4^2 <= B / (log B)^A`
    pub nb1: u64,
    /// the rest
    pub nb2: u64,
}

impl SplitCounts {
    pub fn total(&self) -> u64 {
        self.na + self.nb1 + self.nb2
    }
}

pub fn count_split(b: u64, a: f64, opts: EnumOptions) -> Result<SplitCounts> {
    if b < 3 {
        return Err(Error::InvalidArgument(format!("split needs B >= 3, got {b}")));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("split needs A > 0, got {a}")));
    }
    let threshold = b as f64 / (b as f64).ln().powf(a);
    let parts: Vec<[u64; 3]> = run_parallel(opts.workers, || {
        strata(b)
            .into_par_iter()
            .map(|eta| {
                let small = eta.weighted([2, 2, 3, 2]).unwrap() as f64 <= threshold;
                let mut c = [0u64; 3];
                enumerate_stratum(b, eta, |t| {
                    let i = if t.eta[4] >= t.eta[5].abs() {
                        0
                    } else if small {
                        1
                    } else {
                        2
                    };
                    c[i] += 1;
                });
                c
            })
            .collect()
    });
    let sum = parts.iter().fold([0u64; 3], |acc, c| [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]]);
    Ok(SplitCounts {
        a_param: a,
        na: sum[0],
        nb1: sum[1],
        nb2: sum[2],
    })
}

/// Checks that the torsor images are duplicate-free and coincide with the
/// points found by the naive engine. On mismatch the error names the first
/// offending point.
pub fn verify_bijection(b: u64, opts: EnumOptions) -> Result<u64> {
    let cap = opts.retain.unwrap_or(DEFAULT_RETENTION_CAP);
    let opts = EnumOptions { retain: Some(cap), ..opts };
    let naive = count_naive(b, opts)?;
    let torsor = count_torsor(b, opts)?;
    let (Some(np), Some(tp)) = (naive.points, torsor.points) else {
        return Err(Error::Verification(format!("retention cap {cap} too small for B = {b}")));
    };
    if let Some(w) = tp.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Verification(format!("{} has two torsor preimages", w[0])));
    }
    if let Some((x, y)) = np.iter().zip(&tp).find(|(x, y)| x != y) {
        let (missing, side) = if x < y { (x, "torsor") } else { (y, "naive") };
        return Err(Error::Verification(format!("{missing} missing from the {side} point set")));
    }
    if np.len() != tp.len() {
        let (longer, side) = if np.len() > tp.len() { (&np, "torsor") } else { (&tp, "naive") };
        let extra = longer[np.len().min(tp.len())];
        return Err(Error::Verification(format!("{extra} missing from the {side} point set")));
    }
    Ok(np.len() as u64)
}

/// Which engine produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Torsor,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Torsor => "torsor",
        }
    }
}

/// One count per engine for a given `B`, plus the optional split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub b: u64,
    pub n_naive: Option<u64>,
    pub n_torsor: Option<u64>,
    pub split: Option<SplitCounts>,
    pub seconds_naive: Option<f64>,
    pub seconds_torsor: Option<f64>,
}

impl CountReport {
    /// Runs the requested engines. `split_a` also classifies the torsor
    /// solutions (needs `B >= 3`).
    pub fn run(b: u64, naive: bool, torsor: bool, split_a: Option<f64>, opts: EnumOptions) -> Result<Self> {
        let mut report = CountReport {
            b,
            n_naive: None,
            n_torsor: None,
            split: None,
            seconds_naive: None,
            seconds_torsor: None,
        };
        if naive {
            let t = Instant::now();
            report.n_naive = Some(count_naive(b, opts)?.count);
            report.seconds_naive = Some(t.elapsed().as_secs_f64());
        }
        if torsor {
            let t = Instant::now();
            report.n_torsor = Some(count_torsor(b, opts)?.count);
            report.seconds_torsor = Some(t.elapsed().as_secs_f64());
        }
        if let Some(a) = split_a.filter(|_| b >= 3) {
            report.split = Some(count_split(b, a, opts)?);
        }
        Ok(report)
    }

    /// Both engines ran and agree, and the split (if any) sums to the total.
    pub fn consistent(&self) -> bool {
        let engines = match (self.n_naive, self.n_torsor) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        let split = match (self.split, self.n_torsor) {
            (Some(s), Some(n)) => s.total() == n,
            _ => true,
        };
        engines && split
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsor::{coprimality_reduced, height_equivalent};

    #[test]
    fn convex_sublevel_brute_force() {
        for a in 1..4i128 {
            for b in -20..=20i128 {
                for c in -30..=30i128 {
                    let brute: Vec<i128> = (-60..=60).filter(|&x| a * x * x + b * x + c <= 0).collect();
                    let got = convex_sublevel(a, b, c);
                    match got {
                        None => assert!(brute.is_empty(), "a={a} b={b} c={c}"),
                        Some((l, h)) => assert_eq!(brute, (l..=h).collect::<Vec<_>>(), "a={a} b={b} c={c}"),
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_band_brute_force() {
        for a in 1..4i128 {
            for b in -15..=15i128 {
                for m in 0..=25i128 {
                    let brute: Vec<i128> = (-20..=20).filter(|&x| (a * x * x + b * x).abs() <= m).collect();
                    let got: Vec<i128> = quadratic_band(a, b, m, -20, 20)
                        .into_iter()
                        .flatten()
                        .flat_map(|(l, h)| l..=h)
                        .collect();
                    assert_eq!(brute, got, "a={a} b={b} m={m}");
                }
            }
        }
    }

    #[test]
    fn b1_points() {
        let c = count_naive(1, EnumOptions::retaining(100)).unwrap();
        assert_eq!(c.count, 4);
        let mut want: Vec<ProjectivePoint> = [
            [1, 0, 0, 0, -1, -1],
            [1, -1, 0, -1, 0, 0],
            [1, 0, 0, 0, 1, -1],
            [1, 1, 0, -1, 0, 0],
        ]
        .into_iter()
        .map(|c| ProjectivePoint::normalize(c).unwrap())
        .collect();
        want.sort();
        assert_eq!(c.points.unwrap(), want);
        assert_eq!(count_torsor(1, EnumOptions::default()).unwrap().count, 4);
    }

    #[test]
    fn zero_and_oversized_b_rejected() {
        assert!(count_naive(0, EnumOptions::default()).is_err());
        assert!(count_torsor(0, EnumOptions::default()).is_err());
        assert_eq!(
            count_naive(1000, EnumOptions::default()),
            Err(Error::NaiveBoundExceeded { b: 1000, max: NAIVE_MAX_B })
        );
    }

    #[test]
    fn small_b_engines_agree() {
        for b in [2, 3, 5, 10, 25] {
            let n = count_naive(b, EnumOptions::default()).unwrap().count;
            let t = count_torsor(b, EnumOptions::default()).unwrap().count;
            assert_eq!(n, t, "B = {b}");
            assert_eq!(verify_bijection(b, EnumOptions::default()).unwrap(), n);
        }
    }

    /// Brute force over a box of torsor tuples, independent of the pruning
    /// in `enumerate_stratum`.
    #[test]
    fn stratum_enumeration_matches_box_search() {
        let b = 30u64;
        let mut expected = Vec::new();
        for e1 in 1..=6i64 {
            for e2 in 1..=6 {
                for e3 in 1..=4 {
                    for e4 in 1..=6 {
                        for e5 in 1..=30 {
                            for e6 in -12..=12i64 {
                                if e6 == 0 {
                                    continue;
                                }
                                for a1 in -30..=30 {
                                    let num = -(e4 * e5 * e5 * e6 + e1 * a1);
                                    if num % e2 != 0 {
                                        continue;
                                    }
                                    let t = TorsorPoint::new([e1, e2, e3, e4, e5, e6], [a1, num / e2]);
                                    if coprimality_reduced(&t) && height_equivalent(&t, b) {
                                        expected.push(t);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        expected.sort();
        let mut got = Vec::new();
        for_each_torsor_point(b, |t| got.push(*t));
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn split_sums_to_total() {
        let b = 100;
        let total = count_torsor(b, EnumOptions::default()).unwrap().count;
        for a in [0.5, 1.0, 2.0, 28.0] {
            assert_eq!(count_split(b, a, EnumOptions::default()).unwrap().total(), total);
        }
        let s = count_split(b, 50.0, EnumOptions::default()).unwrap();
        assert_eq!(s.nb1, 0);
        assert!(count_split(2, 1.0, EnumOptions::default()).is_err());
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let base = count_torsor(2000, EnumOptions::default()).unwrap().count;
        for w in [1, 2, 3] {
            assert_eq!(count_torsor(2000, EnumOptions::default().with_workers(w)).unwrap().count, base);
        }
        let s1 = count_split(2000, 1.0, EnumOptions::default().with_workers(1)).unwrap();
        let s3 = count_split(2000, 1.0, EnumOptions::default().with_workers(3)).unwrap();
        assert_eq!(s1, s3);
    }

    #[test]
    fn retention_cap_drops_points() {
        let c = count_torsor(50, EnumOptions::retaining(3)).unwrap();
        assert!(c.count > 3);
        assert!(c.points.is_none());
        let c = count_torsor(50, EnumOptions::retaining(100_000)).unwrap();
        assert_eq!(c.points.unwrap().len() as u64, c.count);
    }

    #[test]
    fn counts_are_monotone() {
        let mut prev = 0;
        for b in 1..=300 {
            let n = count_torsor(b, EnumOptions::default()).unwrap().count;
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn pruning_keeps_every_solution() {
        for b in [1, 10, 137, 500] {
            let n = check_height_bounds(b, EnumOptions::default()).unwrap();
            assert_eq!(n, count_torsor(b, EnumOptions::default()).unwrap().count);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn counts_are_monotone_and_split_sums(b in 1u64..400, d in 0u64..200, a in 1.0f64..60.0) {
                let opts = EnumOptions::default();
                let lo = count_torsor(b, opts).unwrap().count;
                let hi = count_torsor(b + d, opts).unwrap().count;
                prop_assert!(lo <= hi);
                prop_assert_eq!(count_split(b, a, opts).unwrap().total(), lo);
            }
        }
    }
}
