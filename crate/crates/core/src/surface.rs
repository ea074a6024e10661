//! The surface `S ⊂ P^5`: membership, height, normalization, the four lines
//! and the singular locus.
//!
//! `S` is cut out by five quadrics
//!
//! ```text
//! x0 x2 - x1 x5,  x0 x2 - x3 x4,  x0 x3 + x1^2 + x1 x4,
//! x0 x5 + x1 x4 + x4^2,  x3 x5 + x1 x2 + x2 x4.
//! ```
//!
//! All arithmetic is exact; quadrics are evaluated in `i128` so any
//! coordinate that fits in `i64` is safe.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::Rational;
use crate::{Error, Result};

/// A rational point of `P^5` in primitive integral coordinates, sign fixed
/// so that the first nonzero coordinate is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProjectivePoint([i64; 6]);

impl ProjectivePoint {
    /// Divides out the content and fixes the sign.
    pub fn normalize(raw: [i64; 6]) -> Result<Self> {
        let g = raw.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()));
        if g == 0 {
            return Err(Error::InvalidArgument("all-zero coordinates".into()));
        }
        let lead = raw.iter().copied().find(|&x| x != 0).unwrap();
        let sign = lead.signum();
        let g = g as i64;
        Ok(Self(raw.map(|x| sign * (x / g))))
    }

    /// Wraps coordinates already known to be primitive with positive
    /// leading entry.
    pub(crate) fn from_primitive(coords: [i64; 6]) -> Self {
        debug_assert_eq!(Self::normalize(coords).ok(), Some(Self(coords)));
        Self(coords)
    }

    pub fn coords(&self) -> [i64; 6] {
        self.0
    }

    pub fn height(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).max().unwrap()
    }

    fn wide(&self) -> [i128; 6] {
        self.0.map(i128::from)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "({},{},{},{},{},{})", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

pub fn normalize(raw: [i64; 6]) -> Result<ProjectivePoint> {
    ProjectivePoint::normalize(raw)
}

pub fn height(p: &ProjectivePoint) -> u64 {
    p.height()
}

/// Values of the five defining quadrics.
pub fn quadrics(x: &[i128; 6]) -> [i128; 5] {
    [
        x[0] * x[2] - x[1] * x[5],
        x[0] * x[2] - x[3] * x[4],
        x[0] * x[3] + x[1] * x[1] + x[1] * x[4],
        x[0] * x[5] + x[1] * x[4] + x[4] * x[4],
        x[3] * x[5] + x[1] * x[2] + x[2] * x[4],
    ]
}

pub fn is_on_surface(p: &ProjectivePoint) -> bool {
    quadrics(&p.wide()).iter().all(|&q| q == 0)
}

/// The 5x6 Jacobian matrix of the quadrics at `x`.
pub fn jacobian(x: &[i128; 6]) -> [[i128; 6]; 5] {
    [
        [x[2], -x[5], x[0], 0, 0, -x[1]],
        [x[2], 0, x[0], -x[4], -x[3], 0],
        [x[3], 2 * x[1] + x[4], 0, x[0], x[1], 0],
        [x[5], x[4], 0, 0, x[1] + 2 * x[4], x[0]],
        [0, x[2], x[1] + x[4], x[5], x[2], x[3]],
    ]
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn integer_rank<const C: usize>(rows: &[[i128; C]]) -> usize {
    let mut m: Vec<[i128; C]> = rows.to_vec();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..C {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            for c in col + 1..C {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn jacobian_rank(p: &ProjectivePoint) -> usize {
    integer_rank(&jacobian(&p.wide()))
}

/// Points of `S` with `x0 = 0` and height at most `bound`.
///
/// On that hyperplane the quadrics force `x1 (x1 + x4) = x4 (x1 + x4) = 0`,
/// `x1 x5 = x3 x4 = 0` and `x3 x5 + x2 (x1 + x4) = 0`, which leaves a
/// quadratic number of candidates.
pub fn boundary_points(bound: u64) -> Vec<ProjectivePoint> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut push = |raw: [i64; 6]| {
        if raw.iter().any(|&x| x != 0) {
            let p = ProjectivePoint::normalize(raw).unwrap();
            if p.0 == raw && is_on_surface(&p) {
                out.push(p);
            }
        }
    };
    // x1 = -x4 = t != 0 forces x3 = x5 = 0
    for t in -b..=b {
        if t == 0 {
            continue;
        }
        for x2 in -b..=b {
            push([0, t, x2, 0, -t, 0]);
        }
    }
    // x1 = x4 = 0 leaves x3 x5 = 0
    for x2 in -b..=b {
        for v in -b..=b {
            push([0, 0, x2, v, 0, 0]);
            if v != 0 {
                push([0, 0, x2, 0, 0, v]);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Points of `S` with `x0 = x0_fixed > 0` and height at most `bound`,
/// in primitive coordinates. Every such point is determined by
/// `(x0, x1, x4)`.
pub fn chart_points(x0: i64, bound: u64, mut visit: impl FnMut(ProjectivePoint)) {
    let b = bound as i64;
    for x1 in -b..=b {
        for x4 in -b..=b {
            let s = x1 as i128 + x4 as i128;
            let n3 = -(x1 as i128) * s;
            let n5 = -(x4 as i128) * s;
            let d = x0 as i128;
            if n3 % d != 0 || n5 % d != 0 {
                continue;
            }
            let x3 = n3 / d;
            let x5 = n5 / d;
            let n2 = x1 as i128 * x5;
            if n2 % d != 0 {
                continue;
            }
            let x2 = n2 / d;
            if x2.unsigned_abs() > bound as u128
                || x3.unsigned_abs() > bound as u128
                || x5.unsigned_abs() > bound as u128
            {
                continue;
            }
            let coords = [x0, x1, x2 as i64, x3 as i64, x4, x5 as i64];
            let g = coords.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()));
            if g != 1 {
                continue;
            }
            let p = ProjectivePoint::from_primitive(coords);
            if is_on_surface(&p) {
                visit(p);
            }
        }
    }
}

/// Every point of `S` (on or off the lines) of height at most `bound`.
pub fn surface_points(bound: u64) -> Vec<ProjectivePoint> {
    let mut out = boundary_points(bound);
    for x0 in 1..=bound as i64 {
        chart_points(x0, bound, |p| out.push(p));
    }
    out.sort_unstable();
    out
}

pub fn find_singular_points(search_height: u64) -> Vec<ProjectivePoint> {
    surface_points(search_height)
        .into_iter()
        .filter(|p| jacobian_rank(p) < 3)
        .collect()
}

/// A line of `P^5` lying on `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    span: [ProjectivePoint; 2],
    /// Four independent integral linear forms cutting out the line.
    forms: Vec<[i64; 6]>,
    /// Reduced row echelon basis; equal lines have equal keys.
    key: [[i64; 6]; 2],
}

impl Line {
    /// The line through two distinct points, if it lies on `S`.
    pub fn through(a: ProjectivePoint, b: ProjectivePoint) -> Option<Self> {
        if a == b || !spans_line_on_surface(&a, &b) {
            return None;
        }
        let (key, forms) = echelon_and_forms(&a, &b);
        Some(Self {
            span: [a, b],
            forms,
            key,
        })
    }

    pub fn span(&self) -> &[ProjectivePoint; 2] {
        &self.span
    }

    pub fn forms(&self) -> &[[i64; 6]] {
        &self.forms
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        let x = p.wide();
        self.forms
            .iter()
            .all(|f| (0..6).map(|i| f[i] as i128 * x[i]).sum::<i128>() == 0)
    }

    /// The point `s a + t b` of the line, as raw (unnormalized) coordinates.
    pub fn point_at(&self, s: i64, t: i64) -> [i64; 6] {
        let a = self.span[0].coords();
        let b = self.span[1].coords();
        std::array::from_fn(|i| s * a[i] + t * b[i])
    }

    /// Quadrics restricted to the span vanish as binary quadratic forms.
    pub fn verify_on_surface(&self) -> bool {
        spans_line_on_surface(&self.span[0], &self.span[1])
    }
}

/// `Q(s a + t b) = Q(a) s^2 + (Q(a+b) - Q(a) - Q(b)) s t + Q(b) t^2`, so the
/// restriction vanishes identically iff `Q(a) = Q(b) = Q(a+b) = 0`.
fn spans_line_on_surface(a: &ProjectivePoint, b: &ProjectivePoint) -> bool {
    let x = a.wide();
    let y = b.wide();
    let sum: [i128; 6] = std::array::from_fn(|i| x[i] + y[i]);
    let zero = |v: [i128; 5]| v.iter().all(|&q| q == 0);
    zero(quadrics(&x)) && zero(quadrics(&y)) && zero(quadrics(&sum))
}

fn echelon_and_forms(a: &ProjectivePoint, b: &ProjectivePoint) -> ([[i64; 6]; 2], Vec<[i64; 6]>) {
    let mut m: Vec<Vec<Rational>> = [a, b]
        .iter()
        .map(|p| p.coords().iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..6 {
        if row == 2 {
            break;
        }
        let Some(piv) = (row..2).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = m[row][col].recip();
        for c in 0..6 {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..2 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..6 {
                    let d = &f * &m[row][c];
                    m[r][c] = &m[r][c] - d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    debug_assert_eq!(pivots.len(), 2);
    let integral = |v: &[Rational]| -> [i64; 6] {
        let l = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        std::array::from_fn(|i| {
            let x: BigInt = &ints[i] / &g;
            i64::try_from(x).expect("line coefficient fits i64")
        })
    };
    let key = [integral(&m[0]), integral(&m[1])];
    let forms = (0..6)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); 6];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            let mut f = integral(&v);
            if f.iter().find(|&&x| x != 0).is_some_and(|x| x.is_negative()) {
                f = f.map(|x| -x);
            }
            f
        })
        .collect();
    (key, forms)
}

/// Lines on `S` found from the points of height at most `search_height`:
/// every pair of sample points whose span lies on `S` proposes a line, and a
/// line is kept once it carries at least three sample points.
pub fn find_lines(search_height: u64) -> Result<Vec<Line>> {
    if search_height < 3 {
        return Err(Error::InvalidArgument(format!(
            "line search needs height >= 3, got {search_height}"
        )));
    }
    let pts = surface_points(search_height);
    let mut found: BTreeMap<[[i64; 6]; 2], Line> = BTreeMap::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if found.values().any(|l| l.contains(a) && l.contains(b)) {
                continue;
            }
            if let Some(line) = Line::through(*a, *b) {
                found.entry(line.key).or_insert(line);
            }
        }
    }
    let lines: Vec<Line> = found
        .into_values()
        .filter(|l| pts.iter().filter(|p| l.contains(p)).count() >= 3)
        .collect();
    if search_height >= 5 && lines.len() != 4 {
        return Err(Error::LineCount(lines.len()));
    }
    Ok(lines)
}

/// The four lines of `S`, computed once at search height 5.
pub fn lines() -> &'static [Line] {
    static LINES: OnceLock<Vec<Line>> = OnceLock::new();
    LINES.get_or_init(|| find_lines(5).expect("line search at height 5"))
}

/// Whether `p` avoids all four lines. Assumes `p` lies on `S`.
pub fn in_u(p: &ProjectivePoint) -> bool {
    !lines().iter().any(|l| l.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [i64; 6]) -> ProjectivePoint {
        ProjectivePoint::normalize(c).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(is_on_surface(&pt([1, 0, 0, 0, 0, 0])));
        assert!(is_on_surface(&pt([1, 1, -2, 1, -2, -2])));
        assert!(!is_on_surface(&pt([1, 1, 1, 1, 1, 1])));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pt([2, 0, 0, 0, -2, -2]).coords(), [1, 0, 0, 0, -1, -1]);
        assert_eq!(pt([-1, 1, 0, 1, 0, 0]).coords(), [1, -1, 0, -1, 0, 0]);
        assert_eq!(pt([3, 6, 9, 0, 0, 0]).coords(), [1, 2, 3, 0, 0, 0]);
        assert!(ProjectivePoint::normalize([0; 6]).is_err());
    }

    #[test]
    fn height_examples() {
        assert_eq!(pt([1, 0, 0, 0, -1, -1]).height(), 1);
        assert_eq!(pt([1, 1, -2, 1, -2, -2]).height(), 2);
        assert_eq!(pt([1, 0, 0, 0, 0, 0]).height(), 1);
    }

    #[test]
    fn jacobian_ranks() {
        assert_eq!(jacobian_rank(&pt([1, 0, 0, 0, 0, 0])), 3);
        assert_eq!(jacobian_rank(&pt([0, 0, 1, 0, 0, 0])), 2);
    }

    #[test]
    fn bareiss_rank_small_cases() {
        assert_eq!(integer_rank(&[[0i128; 3]; 2]), 0);
        assert_eq!(integer_rank(&[[1, 2, 3], [2, 4, 6]]), 1);
        assert_eq!(integer_rank(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]), 2);
        assert_eq!(integer_rank(&[[2, 0, 1], [0, 3, 1], [1, 1, 5]]), 3);
    }

    #[test]
    fn unique_singular_point() {
        let origin = pt([0, 0, 1, 0, 0, 0]);
        assert_eq!(find_singular_points(1), vec![origin]);
        assert_eq!(find_singular_points(5), vec![origin]);
    }

    #[test]
    fn exactly_four_lines() {
        assert_eq!(find_lines(5).unwrap().len(), 4);
        assert_eq!(lines().len(), 4);
        for l in lines() {
            assert!(l.verify_on_surface());
            assert_eq!(l.forms().len(), 4);
            for s in -4..=4 {
                for t in -4..=4 {
                    if s == 0 && t == 0 {
                        continue;
                    }
                    let p = pt(l.point_at(s, t));
                    assert!(is_on_surface(&p));
                    assert!(l.contains(&p));
                }
            }
        }
    }

    /// The lines as derived by hand; kept as a regression fixture.
    #[test]
    fn lines_match_derived_fixture() {
        let fixture = [
            ([0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]),
            ([0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0]),
            ([1, 0, 0, 0, 0, 0], [0, 1, 0, 0, -1, 0]),
            ([0, 1, 0, 0, -1, 0], [0, 0, 1, 0, 0, 0]),
        ];
        for (a, b) in fixture {
            let line = Line::through(pt(a), pt(b)).expect("span lies on S");
            assert!(
                lines().iter().any(|l| l.key == line.key),
                "missing line through {a:?}, {b:?}"
            );
        }
    }

    #[test]
    fn u_membership_examples() {
        assert!(!in_u(&pt([1, 0, 0, 0, 0, 0])));
        assert!(in_u(&pt([1, 1, -2, 1, -2, -2])));
        assert!(!in_u(&pt([0, 0, 1, 0, 0, 0])));
    }

    #[test]
    fn boundary_points_lie_on_lines() {
        for p in boundary_points(100) {
            assert!(!in_u(&p), "{p} has x0 = 0 but avoids the lines");
        }
    }

    #[test]
    fn normalize_idempotent_and_scale_invariant() {
        for c in [[1, 1, -2, 1, -2, -2], [0, 3, -6, 0, 9, 12], [-5, 0, 10, 0, 0, 0]] {
            let p = pt(c);
            assert_eq!(pt(p.coords()), p);
            for k in [-7, -1, 2, 13] {
                let scaled = c.map(|x| k * x);
                assert_eq!(pt(scaled), p);
                assert_eq!(pt(scaled).height(), p.height());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonzero() -> impl Strategy<Value = [i64; 6]> {
            prop::array::uniform6(-1000i64..=1000).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        }

        proptest! {
            #[test]
            fn normalize_is_idempotent(c in nonzero()) {
                let p = ProjectivePoint::normalize(c).unwrap();
                prop_assert_eq!(ProjectivePoint::normalize(p.coords()).unwrap(), p);
                let lead = p.coords().into_iter().find(|&x| x != 0).unwrap();
                prop_assert!(lead > 0);
            }

            #[test]
            fn normalize_ignores_scaling(c in nonzero(), k in prop_oneof![-50i64..=-1, 1i64..=50]) {
                let p = ProjectivePoint::normalize(c).unwrap();
                prop_assert_eq!(ProjectivePoint::normalize(c.map(|x| k * x)).unwrap(), p);
                prop_assert!(p.height() >= 1 && p.height() <= c.iter().map(|x| x.unsigned_abs()).max().unwrap());
            }

            #[test]
            fn line_points_lie_on_surface(i in 0usize..4, s in -30i64..=30, t in -30i64..=30) {
                prop_assume!(s != 0 || t != 0);
                let l = &lines()[i];
                let p = ProjectivePoint::normalize(l.point_at(s, t)).unwrap();
                prop_assert!(is_on_surface(&p));
                prop_assert!(l.contains(&p));
                prop_assert!(!in_u(&p));
            }
        }
    }
}
