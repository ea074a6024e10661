//! Universal torsor parametrization of `U(Q)`.
//!
//! Integral points `(η1..η6, α1, α2)` with
//! `η4 η5^2 η6 + η1 α1 + η2 α2 = 0`, `η1..η5 > 0`, `η6 ≠ 0` and the
//! coprimality conditions read off the configuration graph correspond
//! one-to-one to rational points of `U`, via [`psi`].

use serde::Serialize;

use crate::arith::coprime;
use crate::density::h_max;
use crate::surface::{is_on_surface, ProjectivePoint};
use crate::{Error, Result};

/// `(η1, η2, η3, η4)`, the argument of the arithmetic densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EtaTuple(pub [u64; 4]);

impl EtaTuple {
    pub fn new(e1: u64, e2: u64, e3: u64, e4: u64) -> Result<Self> {
        if [e1, e2, e3, e4].contains(&0) {
            return Err(Error::ZeroArgument("EtaTuple"));
        }
        Ok(Self([e1, e2, e3, e4]))
    }

    /// `η1^k1 η2^k2 η3^k3 η4^k4`, or `None` on overflow.
    pub fn weighted(&self, k: [u32; 4]) -> Option<u128> {
        self.0.iter().zip(k).try_fold(1u128, |acc, (&e, k)| {
            acc.checked_mul((e as u128).checked_pow(k)?)
        })
    }

    /// The pairwise conditions `(η1,η2) = (η1,η4) = (η2,η4) = 1`.
    pub fn pairwise_coprime(&self) -> bool {
        let [e1, e2, _, e4] = self.0.map(|e| e as i128);
        coprime(e1, e2) && coprime(e1, e4) && coprime(e2, e4)
    }
}

/// A candidate torsor tuple. [`TorsorPoint::validate`] checks that it really
/// is a point of the torsor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TorsorPoint {
    /// `η1..η6`
    pub eta: [i64; 6],
    /// `α1, α2`
    pub alpha: [i64; 2],
}

impl TorsorPoint {
    pub fn new(eta: [i64; 6], alpha: [i64; 2]) -> Self {
        Self { eta, alpha }
    }

    pub fn eta_tuple(&self) -> EtaTuple {
        EtaTuple([0, 1, 2, 3].map(|i| self.eta[i] as u64))
    }

    pub fn has_valid_signs(&self) -> bool {
        self.eta[..5].iter().all(|&e| e > 0) && self.eta[5] != 0
    }

    pub fn torsor_equation(&self) -> i128 {
        let [e1, e2, _, e4, e5, e6] = self.eta.map(i128::from);
        let [a1, a2] = self.alpha.map(i128::from);
        e4 * e5 * e5 * e6 + e1 * a1 + e2 * a2
    }

    pub fn validate(&self) -> Result<()> {
        if !self.has_valid_signs() {
            return Err(Error::InvalidArgument(format!("sign conditions fail for {self:?}")));
        }
        if self.torsor_equation() != 0 {
            return Err(Error::InvalidArgument(format!("torsor equation fails for {self:?}")));
        }
        if !coprimality_reduced(self) {
            return Err(Error::InvalidArgument(format!("coprimality fails for {self:?}")));
        }
        Ok(())
    }

    fn value(&self, v: Var) -> i128 {
        match v as usize {
            i @ 0..=5 => self.eta[i] as i128,
            i => self.alpha[i - 6] as i128,
        }
    }
}

/// Vertices of the configuration graph: the curves `E1..E6` and `A1, A2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    A1,
    A2,
}

impl Var {
    pub const ALL: [Var; 8] = [
        Var::E1,
        Var::E2,
        Var::E3,
        Var::E4,
        Var::E5,
        Var::E6,
        Var::A1,
        Var::A2,
    ];
}

/// Two torsor variables must be coprime unless their curves meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimalityGraph {
    adjacent: [[bool; 8]; 8],
}

impl CoprimalityGraph {
    pub const EDGES: [(Var, Var); 10] = [
        (Var::A1, Var::E1),
        (Var::A1, Var::E6),
        (Var::A1, Var::A2),
        (Var::E6, Var::E5),
        (Var::E5, Var::E4),
        (Var::E4, Var::E3),
        (Var::E1, Var::E3),
        (Var::A2, Var::E2),
        (Var::A2, Var::E6),
        (Var::E2, Var::E3),
    ];

    pub fn from_edges(edges: &[(Var, Var)]) -> Self {
        let mut adjacent = [[false; 8]; 8];
        for &(u, v) in edges {
            assert_ne!(u, v, "loop in coprimality graph");
            adjacent[u as usize][v as usize] = true;
            adjacent[v as usize][u as usize] = true;
        }
        Self { adjacent }
    }

    pub fn standard() -> Self {
        Self::from_edges(&Self::EDGES)
    }

    /// The standard graph with one edge deleted, for fault injection.
    pub fn without_edge(u: Var, v: Var) -> Self {
        let edges: Vec<_> = Self::EDGES
            .iter()
            .copied()
            .filter(|&(a, b)| !((a, b) == (u, v) || (a, b) == (v, u)))
            .collect();
        Self::from_edges(&edges)
    }

    pub fn is_adjacent(&self, u: Var, v: Var) -> bool {
        self.adjacent[u as usize][v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacent.iter().flatten().filter(|&&a| a).count() / 2
    }

    pub fn non_edges(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        Var::ALL.into_iter().enumerate().flat_map(move |(i, u)| {
            Var::ALL[i + 1..]
                .iter()
                .copied()
                .filter(move |&v| !self.is_adjacent(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn check(&self, t: &TorsorPoint) -> bool {
        self.non_edges().all(|(u, v)| coprime(t.value(u), t.value(v)))
    }
}

/// All non-adjacent pairs of the configuration graph are coprime.
pub fn coprimality_full(t: &TorsorPoint) -> bool {
    CoprimalityGraph::standard().check(t)
}

/// The equivalent reduced conditions that hold on solutions of the torsor
/// equation:
/// `(α2, η3η5) = (α1, η3η4) = (η6, η1η2η3η4) = (η5, η1η2η3) = 1` and
/// `(η1,η2) = (η1,η4) = (η2,η4) = 1`.
pub fn coprimality_reduced(t: &TorsorPoint) -> bool {
    let [e1, e2, e3, e4, e5, e6] = t.eta.map(i128::from);
    let [a1, a2] = t.alpha.map(i128::from);
    coprime(e1, e2)
        && coprime(e1, e4)
        && coprime(e2, e4)
        && coprime(e5, e1 * e2 * e3)
        && coprime(e6, e1 * e2 * e3 * e4)
        && coprime(a1, e3 * e4)
        && coprime(a2, e3 * e5)
}

/// Solutions of the torsor equation with `η1..η5` in `1..=n`, `η6` in
/// `±(1..=n)` and `|α1|, |α2| <= n`, handed to `visit` for each `η1` in
/// parallel.
fn box_solutions_for(e1: i64, n: i64, mut visit: impl FnMut(&TorsorPoint) -> bool) -> bool {
    for e2 in 1..=n {
        for e3 in 1..=n {
            for e4 in 1..=n {
                for e5 in 1..=n {
                    for e6 in (-n..=n).filter(|&e| e != 0) {
                        let k = e4 * e5 * e5 * e6;
                        for a1 in -n..=n {
                            let r = k + e1 * a1;
                            if r % e2 != 0 || (r / e2).abs() > n {
                                continue;
                            }
                            let t = TorsorPoint::new([e1, e2, e3, e4, e5, e6], [a1, -r / e2]);
                            if !visit(&t) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Outcome of [`coprimality_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub exhaustive_box: i64,
    pub exhaustive_solutions: u64,
    pub sample_box: i64,
    pub sampled_solutions: u64,
    /// Solutions on which the conditions hold (in both parts).
    pub coprime_solutions: u64,
}

/// Checks that `graph` and the reduced conditions agree on torsor-equation
/// solutions: every solution in the box of radius `exhaustive_n`, and
/// `samples` random solutions in the box of radius `sample_n`. Fails with
/// the first disagreeing solution.
pub fn coprimality_equivalence(
    graph: &CoprimalityGraph,
    exhaustive_n: i64,
    sample_n: i64,
    samples: u64,
    seed: u64,
) -> Result<EquivalenceReport> {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;

    let mismatch = |t: &TorsorPoint| {
        Error::Verification(format!(
            "coprimality conditions disagree on {t:?} (graph {}, reduced {})",
            graph.check(t),
            coprimality_reduced(t)
        ))
    };
    let parts: Vec<std::result::Result<(u64, u64), TorsorPoint>> = (1..=exhaustive_n)
        .into_par_iter()
        .map(|e1| {
            let (mut n, mut c) = (0u64, 0u64);
            let mut bad = None;
            box_solutions_for(e1, exhaustive_n, |t| {
                n += 1;
                let reduced = coprimality_reduced(t);
                if graph.check(t) != reduced {
                    bad = Some(*t);
                    return false;
                }
                c += reduced as u64;
                true
            });
            bad.map_or(Ok((n, c)), Err)
        })
        .collect();
    let mut report = EquivalenceReport {
        exhaustive_box: exhaustive_n,
        exhaustive_solutions: 0,
        sample_box: sample_n,
        sampled_solutions: 0,
        coprime_solutions: 0,
    };
    for part in parts {
        let (n, c) = part.map_err(|t| mismatch(&t))?;
        report.exhaustive_solutions += n;
        report.coprime_solutions += c;
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    while report.sampled_solutions < samples {
        let mut eta = [0i64; 6];
        for e in &mut eta {
            *e = rng.gen_range(1..=sample_n);
        }
        if rng.gen_bool(0.5) {
            eta[5] = -eta[5];
        }
        let [e1, e2, _, e4, e5, e6] = eta;
        let k = e4 * e5 * e5 * e6;
        // α1 uniformly from the residue class that makes α2 integral
        let g = num_integer::gcd(e1, e2);
        if k % g != 0 {
            continue;
        }
        let m = e2 / g;
        let Some(base) = (0..m).find(|a| (k + e1 * a) % e2 == 0) else {
            continue;
        };
        let a1 = base + m * rng.gen_range(-(sample_n + base) / m..=(sample_n - base) / m);
        let r = k + e1 * a1;
        if a1.abs() > sample_n || (r / e2).abs() > sample_n {
            continue;
        }
        let t = TorsorPoint::new(eta, [a1, -r / e2]);
        debug_assert_eq!(t.torsor_equation(), 0);
        let reduced = coprimality_reduced(&t);
        if graph.check(&t) != reduced {
            return Err(mismatch(&t));
        }
        report.sampled_solutions += 1;
        report.coprime_solutions += reduced as u64;
    }
    Ok(report)
}

/// The six monomials of the parametrization, without any checks.
pub fn psi_monomials(t: &TorsorPoint) -> [i128; 6] {
    let [e1, e2, e3, e4, e5, e6] = t.eta.map(i128::from);
    let [a1, a2] = t.alpha.map(i128::from);
    let e34 = e3 * e4;
    [
        e1 * e1 * e2 * e2 * e3 * e3 * e34 * e4 * e5,
        e1 * e1 * e2 * e3 * e34 * a1,
        e6 * a1 * a2,
        e1 * e34 * e5 * e6 * a1,
        e1 * e2 * e2 * e3 * e34 * a2,
        e2 * e34 * e5 * e6 * a2,
    ]
}

/// The map from the torsor to `U(Q)`. The image is already primitive with
/// `x0 > 0`; anything else means the input was not a torsor point or there
/// is a bug upstream, and is reported as an error.
pub fn psi(t: &TorsorPoint) -> Result<ProjectivePoint> {
    t.validate()?;
    let x = psi_monomials(t);
    let mut coords = [0i64; 6];
    for (c, &v) in coords.iter_mut().zip(&x) {
        *c = i64::try_from(v).map_err(|_| Error::PsiInvariant(format!("{t:?} overflows i64")))?;
    }
    let p = ProjectivePoint::normalize(coords)?;
    if p.coords() != coords {
        return Err(Error::PsiInvariant(format!("image of {t:?} is not primitive")));
    }
    if coords[0] <= 0 {
        return Err(Error::PsiInvariant(format!("image of {t:?} has x0 <= 0")));
    }
    if !is_on_surface(&p) {
        return Err(Error::PsiInvariant(format!("image of {t:?} is off the surface")));
    }
    Ok(p)
}

/// Both necessary height bounds implied by `H(psi(t)) <= B`:
/// `η1 η2 η3^2 η4^2 η5^2 |η6| <= 2B` and `η3 η4^2 η5^3 η6^2 <= 2B`.
pub fn satisfies_height_bounds(t: &TorsorPoint, b: u64) -> bool {
    let [e1, e2, e3, e4, e5, e6] = t.eta.map(|e| e.unsigned_abs() as u128);
    let two_b = 2 * b as u128;
    e1 * e2 * e3 * e3 * e4 * e4 * e5 * e5 * e6 <= two_b && e3 * e4 * e4 * e5 * e5 * e5 * e6 * e6 <= two_b
}

/// The real rescaling frame attached to `η` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingContext {
    pub b: f64,
    pub eta: EtaTuple,
    pub y0: f64,
    pub y1: f64,
    pub y5: f64,
    pub y6: f64,
}

fn log_monomial(eta: &EtaTuple, k: [f64; 4]) -> f64 {
    eta.0.iter().zip(k).map(|(&e, k)| k * (e as f64).ln()).sum()
}

pub fn scaling_context(eta: EtaTuple, b: f64) -> Result<ScalingContext> {
    if !(b >= 1.0) || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("B must be >= 1, got {b}")));
    }
    let lb = b.ln();
    let y0 = ((log_monomial(&eta, [2.0, 2.0, 3.0, 2.0]) - lb) / 5.0).exp();
    let y1 = ((lb - log_monomial(&eta, [2.0, -3.0, -2.0, -3.0])) / 5.0).exp();
    let y6 = ((lb - log_monomial(&eta, [-3.0, -3.0, -2.0, 2.0])) / 5.0).exp();
    Ok(ScalingContext {
        b,
        eta,
        y0,
        y1,
        y5: 1.0 / y0,
        y6,
    })
}

impl ScalingContext {
    /// `h(Y0, α1/Y1, η5/Y5, η6/Y6)`, which equals `H(psi(t)) / B`.
    pub fn rescaled_height(&self, t: &TorsorPoint) -> f64 {
        h_max(
            self.y0,
            t.alpha[0] as f64 / self.y1,
            t.eta[4] as f64 / self.y5,
            t.eta[5] as f64 / self.y6,
        )
    }
}

/// `H(psi(t)) <= B`, decided by exact integer comparison. The rescaled
/// floating form is available as [`ScalingContext::rescaled_height`] and is
/// only used for cross-checks.
pub fn height_equivalent(t: &TorsorPoint, b: u64) -> bool {
    psi_monomials(t).iter().all(|x| x.unsigned_abs() <= b as u128)
}
