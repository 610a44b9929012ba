//! q-smallness certificates, q(H), and spread.
//!
//! Every entry point minimizes its input first; the upward closure, and so
//! every quantity computed here, is unchanged by that.

mod cover;
mod spread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::compensated_sum;
use crate::{Hypergraph, VertexSet};

pub use cover::{Budget, CoverProblem, Solution};
pub use spread::{spread_of, spread_of_with, SpreadWitness};

/// Tolerance used when a float weight is compared against 1/2 without an
/// exact rational check.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Default tolerance of [`q_of`].
pub const DEFAULT_Q_TOL: f64 = 1e-9;

/// A proposed undercover `G` of some `H`, with `Σ_{R ∈ G} q^|R|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    pub g: Hypergraph,
    pub q: f64,
    pub weight: f64,
}

impl Cover {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            q: self.q,
            weight: self.weight,
            ground_size: self.g.ground_size(),
            edges: self.g.edges().to_vec(),
        }
    }
}

/// Serialized form of a [`Cover`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub q: f64,
    pub weight: f64,
    pub ground_size: usize,
    pub edges: Vec<VertexSet>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Outcome of re-checking a certificate against a hypergraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub undercovers: bool,
    pub recomputed_weight: f64,
    pub weight_matches: bool,
    pub small: bool,
}

impl CertificateCheck {
    pub fn valid(&self) -> bool {
        self.undercovers && self.weight_matches && self.small
    }
}

pub fn verify_certificate(h: &Hypergraph, cert: &Certificate) -> Result<CertificateCheck> {
    if cert.ground_size != h.ground_size() {
        return Err(Error::InvalidParameter(format!(
            "certificate ground size {} differs from hypergraph ground size {}",
            cert.ground_size,
            h.ground_size()
        )));
    }
    let g = Hypergraph::new(cert.ground_size, cert.edges.clone())?;
    let recomputed_weight = cover_weight(&g, cert.q);
    Ok(CertificateCheck {
        undercovers: g.undercovers(h),
        recomputed_weight,
        weight_matches: (recomputed_weight - cert.weight).abs() <= WEIGHT_TOL,
        small: at_most_half(g.edges(), cert.q, recomputed_weight),
    })
}

pub(crate) fn weight_of<'a>(edges: impl Iterator<Item = &'a VertexSet>, q: f64) -> f64 {
    compensated_sum(edges.map(|e| q.powi(e.len() as i32)))
}

/// `Σ_{R ∈ G} q^|R|`; the empty edge contributes 1.
pub fn cover_weight(g: &Hypergraph, q: f64) -> f64 {
    weight_of(g.edges().iter(), q)
}

/// Weight `<= 1/2`, decided in exact rationals when the float is close.
fn at_most_half(edges: &[VertexSet], q: f64, weight: f64) -> bool {
    if (weight - 0.5).abs() > 1e-9 {
        weight < 0.5
    } else {
        cover::weight_at_most_half_exact(edges.iter(), q)
    }
}

/// Minimum cover weight over all undercovers of `h`, with an attaining cover.
pub fn min_cover_weight(h: &Hypergraph, q: f64) -> Result<(f64, Cover)> {
    min_cover_weight_with(h, q, Budget::default())
}

pub fn min_cover_weight_with(h: &Hypergraph, q: f64, budget: Budget) -> Result<(f64, Cover)> {
    let problem = CoverProblem::new(h, budget)?;
    solve_cover(&problem, h, q)
}

fn solve_cover(problem: &CoverProblem, h: &Hypergraph, q: f64) -> Result<(f64, Cover)> {
    let sol = problem.solve(q)?;
    let g = Hypergraph::new(h.ground_size(), sol.edges)?;
    Ok((
        sol.weight,
        Cover {
            g,
            q,
            weight: sol.weight,
        },
    ))
}

/// Whether `h` is q-small, with the optimal cover as certificate when it is.
pub fn is_q_small(h: &Hypergraph, q: f64) -> Result<(bool, Option<Cover>)> {
    is_q_small_with(h, q, Budget::default())
}

pub fn is_q_small_with(h: &Hypergraph, q: f64, budget: Budget) -> Result<(bool, Option<Cover>)> {
    let problem = CoverProblem::new(h, budget)?;
    small_at(&problem, h, q)
}

fn small_at(problem: &CoverProblem, h: &Hypergraph, q: f64) -> Result<(bool, Option<Cover>)> {
    let (weight, cover) = solve_cover(problem, h, q)?;
    let small = at_most_half(cover.g.edges(), q, weight);
    Ok((small, small.then_some(cover)))
}

/// q(H): the largest q at which `h` is q-small, to within `tol` from below.
///
/// The minimum cover weight is a minimum of finitely many polynomials in q,
/// each nondecreasing, so smallness is downward closed and bisection on
/// `[0, 1)` converges. The returned value is itself a q at which `h` is small.
/// A hypergraph with the empty edge is never small ([`Error::Trivial`]).
pub fn q_of(h: &Hypergraph, tol: f64) -> Result<f64> {
    q_of_with(h, tol, Budget::default())
}

pub fn q_of_with(h: &Hypergraph, tol: f64, budget: Budget) -> Result<f64> {
    if h.is_empty() {
        return Err(Error::NoEdges);
    }
    if h.has_empty_edge() {
        return Err(Error::Trivial);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let problem = CoverProblem::new(h, budget)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if small_at(&problem, h, mid)?.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Cross-check that a κ-spread hypergraph is not (1/κ)-small.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub kappa: f64,
    pub q: f64,
    pub min_weight: f64,
    pub small: bool,
    /// `Σ_{R ∈ G} κ^{-|R|} >= 1` on the optimal cover.
    pub weight_at_least_one: bool,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        !self.small && self.weight_at_least_one
    }
}

/// With κ the spread of `h`, checks that `h` is not (1/κ)-small and that the
/// optimal cover at `q = 1/κ` weighs at least 1. For κ <= 1 the check runs at
/// `q = 1`, where any cover weighs at least 1.
pub fn check_spread_small_lemma(h: &Hypergraph) -> Result<LemmaCheck> {
    check_spread_small_lemma_with(h, Budget::default())
}

pub fn check_spread_small_lemma_with(h: &Hypergraph, budget: Budget) -> Result<LemmaCheck> {
    let witness = spread_of_with(h, budget)?;
    let q = (1.0 / witness.kappa).min(1.0);
    let problem = CoverProblem::new(h, budget)?;
    let (min_weight, cover) = solve_cover(&problem, h, q)?;
    let small = at_most_half(cover.g.edges(), q, min_weight);
    Ok(LemmaCheck {
        kappa: witness.kappa,
        q,
        min_weight,
        small,
        weight_at_least_one: min_weight >= 1.0 - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_edges(n, edges.iter().map(|e| e.iter().copied()))
    }

    #[test]
    fn cover_weight_examples() {
        assert_eq!(cover_weight(&hg(3, &[&[0], &[1, 2]]), 0.25), 0.3125);
        assert_eq!(cover_weight(&hg(3, &[&[]]), 0.37), 1.0);
        assert_eq!(cover_weight(&hg(3, &[]), 0.37), 0.0);
    }

    #[test]
    fn min_cover_of_two_singletons() {
        let (w, cover) = min_cover_weight(&families::singletons(2), 0.2).unwrap();
        assert!((w - 0.4).abs() < 1e-15);
        assert_eq!(cover.g.edges(), &[VertexSet::from([0]), VertexSet::from([1])]);
        assert!(cover.g.undercovers(&families::singletons(2)));
    }

    #[test]
    fn min_cover_of_one_singleton() {
        let (w, cover) = min_cover_weight(&hg(1, &[&[0]]), 0.3).unwrap();
        assert_eq!(w, 0.3);
        assert_eq!(cover.g.edges(), &[VertexSet::from([0])]);
    }

    #[test]
    fn q_small_examples() {
        let two = families::singletons(2);
        let (small, cert) = is_q_small(&two, 0.2).unwrap();
        assert!(small);
        assert!(cert.unwrap().weight <= 0.5);
        assert_eq!(is_q_small(&two, 0.3).unwrap(), (false, None));
        // Boundary: weight exactly 1/2.
        assert!(is_q_small(&hg(1, &[&[0]]), 0.5).unwrap().0);
    }

    #[test]
    fn q_of_analytic_values() {
        assert!((q_of(&hg(1, &[&[0]]), 1e-10).unwrap() - 0.5).abs() <= 1e-10);
        for k in 1..=6 {
            let q = q_of(&families::singletons(k), 1e-10).unwrap();
            assert!((q - 1.0 / (2.0 * k as f64)).abs() <= 1e-10, "k={k}: {q}");
        }
    }

    #[test]
    fn q_of_errors() {
        assert_eq!(q_of(&hg(2, &[&[0], &[]]), 1e-9), Err(Error::Trivial));
        assert_eq!(q_of(&hg(2, &[]), 1e-9), Err(Error::NoEdges));
    }

    #[test]
    fn over_budget_is_a_resource_error() {
        let h = families::triangles(5);
        let err = min_cover_weight_with(&h, 0.1, Budget::with_subsets(10)).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn q_of_is_invariant_under_minimize_and_pad() {
        let h = hg(5, &[&[0, 1], &[0, 1, 2], &[2, 3], &[2, 3]]);
        let q = q_of(&h, 1e-9).unwrap();
        assert_eq!(q, q_of(&h.minimize(), 1e-9).unwrap());
        assert_eq!(q, q_of(&h.pad(4), 1e-9).unwrap());
    }

    #[test]
    fn certificate_round_trip_and_verification() {
        let h = families::singletons(2);
        let (_, cover) = is_q_small(&h, 0.2).unwrap();
        let cert = cover.unwrap().certificate();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&h, &back).unwrap().valid());

        let mut forged = back.clone();
        forged.edges.pop();
        assert!(!verify_certificate(&h, &forged).unwrap().undercovers);
        let mut heavy = back;
        heavy.q = 0.3;
        let check = verify_certificate(&h, &heavy).unwrap();
        assert!(!check.weight_matches && !check.small);
    }

    #[test]
    fn lemma_on_singletons_and_single_pair() {
        let check = check_spread_small_lemma(&families::singletons(3)).unwrap();
        assert!((check.kappa - 3.0).abs() < 1e-12);
        assert!(check.holds());
        let pair = check_spread_small_lemma(&hg(2, &[&[0, 1]])).unwrap();
        assert_eq!(pair.kappa, 1.0);
        assert_eq!(pair.q, 1.0);
        assert!(pair.holds());
    }
}
