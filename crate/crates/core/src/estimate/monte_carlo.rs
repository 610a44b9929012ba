use serde::{Deserialize, Serialize};

use super::{Method, ThresholdEstimate, Z95};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rng::{derive_seed, sample_bernoulli_from, substream};
use crate::Hypergraph;

/// Trials drawn from one random substream. Chunk `c` of a run with seed `s`
/// uses substream `(s, c)`, so estimates do not depend on the thread count.
pub const CHUNK: usize = 1024;

/// Bisection steps allowed in each phase of [`pc_monte_carlo`].
const MAX_STEPS: usize = 40;

/// A Monte Carlo probability with its 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbEstimate {
    pub p: f64,
    pub value: f64,
    pub hits: usize,
    pub trials: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl ProbEstimate {
    /// Standard error of the frequency.
    pub fn standard_error(&self) -> f64 {
        (self.value * (1.0 - self.value) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for `hits` successes in `n` trials.
pub fn wilson(hits: usize, n: usize, z: f64) -> (f64, f64) {
    assert!(n > 0 && hits <= n);
    let n = n as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if hits == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if hits as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Frequency of `X_p` containing an edge of `h` over `trials` draws.
/// Only vertices of some edge are sampled; the rest cannot matter.
pub fn mc_prob_contains(
    h: &Hypergraph,
    p: f64,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<ProbEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let support: Vec<usize> = h.support().iter().collect();
    let chunks = trials.div_ceil(CHUNK);
    let hits: usize = exec
        .map(chunks, |c| {
            let mut rng = substream(seed, c as u64);
            let n = CHUNK.min(trials - c * CHUNK);
            (0..n)
                .filter(|_| {
                    let w = sample_bernoulli_from(support.iter().copied(), p, &mut rng);
                    h.contains_edge(&w)
                })
                .count()
        })
        .into_iter()
        .sum();
    let (ci_low, ci_high) = wilson(hits, trials, Z95);
    Ok(ProbEstimate {
        p,
        value: hits as f64 / trials as f64,
        hits,
        trials,
        ci_low,
        ci_high,
        seed,
    })
}

/// `p_c(h)` by Monte Carlo bisection.
///
/// Each step estimates `P(contains)` at the midpoint with `trials` fresh
/// draws (step `j` uses seed `derive_seed(seed, j)`) and moves the bracket
/// only when the Wilson interval excludes 1/2. At the first undecided
/// midpoint the search splits: one bisection looks for the largest point
/// confidently below 1/2, another for the smallest point confidently above.
/// Those two points are the reported interval and its midpoint the value.
pub fn pc_monte_carlo(
    h: &Hypergraph,
    trials: usize,
    tol: f64,
    seed: u64,
    exec: Exec,
) -> Result<ThresholdEstimate> {
    if h.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut estimate = ThresholdEstimate {
        value: 0.0,
        method: Method::MonteCarlo,
        trials,
        evaluations: 0,
        ci_low: 0.0,
        ci_high: 0.0,
        seed: Some(seed),
    };
    if h.has_empty_edge() {
        return Ok(estimate);
    }
    let mut step = 0u64;
    let mut eval = |p: f64| -> Result<ProbEstimate> {
        step += 1;
        mc_prob_contains(h, p, trials, derive_seed(seed, step), exec)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut undecided = None;
    for _ in 0..MAX_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let e = eval(mid)?;
        if e.ci_low > 0.5 {
            hi = mid;
        } else if e.ci_high < 0.5 {
            lo = mid;
        } else {
            undecided = Some(mid);
            break;
        }
    }
    if let Some(mid) = undecided {
        let (mut a, mut b) = (lo, mid);
        for _ in 0..MAX_STEPS {
            if b - a <= tol {
                break;
            }
            let m = 0.5 * (a + b);
            if eval(m)?.ci_high < 0.5 {
                a = m;
                lo = m;
            } else {
                b = m;
            }
        }
        let (mut a, mut b) = (mid, hi);
        for _ in 0..MAX_STEPS {
            if b - a <= tol {
                break;
            }
            let m = 0.5 * (a + b);
            if eval(m)?.ci_low > 0.5 {
                b = m;
                hi = m;
            } else {
                a = m;
            }
        }
    }
    estimate.evaluations = step as usize;
    estimate.ci_low = lo;
    estimate.ci_high = hi;
    estimate.value = 0.5 * (lo + hi);
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::exact_prob_contains;
    use crate::{families, Hypergraph};

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        let (lo, hi) = wilson(100, 100, Z95);
        assert!(lo > 0.96 && hi == 1.0);
    }

    #[test]
    fn extremes() {
        let h = families::triangles(4);
        let zero = mc_prob_contains(&h, 0.0, 500, 1, Exec::default()).unwrap();
        assert_eq!(zero.value, 0.0);
        assert_eq!(zero.ci_low, 0.0);
        assert!(zero.ci_high > 0.0);
        let one = mc_prob_contains(&h, 1.0, 500, 1, Exec::default()).unwrap();
        assert_eq!(one.value, 1.0);
    }

    #[test]
    fn thread_independent() {
        let h = families::hamilton(5);
        let a = mc_prob_contains(&h, 0.4, 5000, 9, Exec::Sequential).unwrap();
        let b = mc_prob_contains(&h, 0.4, 5000, 9, Exec::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn agrees_with_exact() {
        let h = families::triangles(5);
        let exact = exact_prob_contains(&h, 0.3).unwrap();
        let mc = mc_prob_contains(&h, 0.3, 40_000, 3, Exec::default()).unwrap();
        assert!((mc.value - exact).abs() < 4.0 * mc.standard_error());
    }

    #[test]
    fn pc_single_vertex() {
        let h = Hypergraph::from_edges(3, [[0]]);
        let est = pc_monte_carlo(&h, 20_000, 1e-4, 5, Exec::default()).unwrap();
        assert!(est.ci_low <= est.value && est.value <= est.ci_high);
        assert!(est.ci_low < 0.5 && est.ci_high > 0.5, "{est:?}");
        assert!(est.ci_high - est.ci_low < 0.05);
    }
}
