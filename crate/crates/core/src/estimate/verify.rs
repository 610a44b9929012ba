use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{pc_exact_with, ContainmentPolynomial};
use super::monte_carlo::{mc_prob_contains, pc_monte_carlo};
use super::{Method, ThresholdEstimate, DEFAULT_DELTA, DETERMINISTIC_TOL, SIGMAS};
use crate::certify::{self, Budget};
use crate::error::{Error, Result};
use crate::exec::{mean_and_sd, Exec};
use crate::process::{all_fragments, prop21_bound};
use crate::rng::{sample_uniform_from, substream};
use crate::{Hypergraph, VertexSet};

/// Shared knobs for the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Standard errors allowed in statistical comparisons.
    pub sigmas: f64,
    /// Slack for deterministic comparisons.
    pub tol: f64,
    /// Bisection tolerance for `q(H)`.
    pub q_tol: f64,
    /// `q = q(H)(1 + delta)` where a theorem needs `H` not q-small.
    pub delta: f64,
    /// Monte Carlo draws per probability, and trials for sampled checks.
    pub trials: usize,
    /// Bracket width for Monte Carlo `p_c`.
    pub mc_pc_tol: f64,
    pub seed: u64,
    #[serde(skip)]
    pub budget: Budget,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sigmas: SIGMAS,
            tol: DETERMINISTIC_TOL,
            q_tol: 1e-10,
            delta: DEFAULT_DELTA,
            trials: 20_000,
            mc_pc_tol: 1e-4,
            seed: 0,
            budget: Budget::default(),
            exec: Exec::default(),
        }
    }
}

/// One checked inequality `lhs relation rhs`, with both sides recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub instance: String,
    pub check: String,
    pub lhs: f64,
    pub relation: String,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// The theorem's probability exceeded 1 and was clamped.
    pub vacuous: bool,
    pub method: Option<Method>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub detail: String,
}

impl VerificationRecord {
    pub const CSV_HEADER: [&'static str; 12] = [
        "instance", "check", "lhs", "relation", "rhs", "tolerance", "pass", "vacuous", "method",
        "seed", "trials", "detail",
    ];

    pub fn new(instance: &str, check: &str, lhs: f64, relation: &str, rhs: f64, tolerance: f64) -> Self {
        VerificationRecord {
            instance: instance.to_string(),
            check: check.to_string(),
            lhs,
            relation: relation.to_string(),
            rhs,
            tolerance,
            pass: false,
            vacuous: false,
            method: None,
            seed: None,
            trials: None,
            detail: String::new(),
        }
    }

    pub(crate) fn csv_row(&self) -> [String; 12] {
        [
            self.instance.clone(),
            self.check.clone(),
            self.lhs.to_string(),
            self.relation.clone(),
            self.rhs.to_string(),
            self.tolerance.to_string(),
            self.pass.to_string(),
            self.vacuous.to_string(),
            self.method.map(|m| m.name().to_string()).unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.trials.map(|t| t.to_string()).unwrap_or_default(),
            self.detail.clone(),
        ]
    }
}

pub fn records_to_csv(records: &[VerificationRecord]) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(VerificationRecord::CSV_HEADER).map_err(err)?;
    for r in records {
        out.write_record(r.csv_row()).map_err(err)?;
    }
    let bytes = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `p_c`, exactly when the enumeration budget allows and by Monte Carlo
/// otherwise.
pub fn pc_auto(h: &Hypergraph, opts: &VerifyOptions) -> Result<ThresholdEstimate> {
    match ContainmentPolynomial::new(h) {
        Ok(poly) => pc_exact_with(&poly, h),
        Err(e) if e.is_resource() => pc_monte_carlo(h, opts.trials, opts.mc_pc_tol, opts.seed, opts.exec),
        Err(e) => Err(e),
    }
}

/// A containment probability and its interval (degenerate when exact).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbValue {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: Method,
}

pub fn prob_auto(h: &Hypergraph, p: f64, opts: &VerifyOptions) -> Result<ProbValue> {
    match ContainmentPolynomial::new(h) {
        Ok(poly) => {
            let v = poly.eval(p);
            Ok(ProbValue {
                value: v,
                ci_low: v,
                ci_high: v,
                method: Method::Exact,
            })
        }
        Err(e) if e.is_resource() => {
            let est = mc_prob_contains(h, p, opts.trials, opts.seed, opts.exec)?;
            Ok(ProbValue {
                value: est.value,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                method: Method::MonteCarlo,
            })
        }
        Err(e) => Err(e),
    }
}

/// Both sides of `p_c <= 8 q log2(2ℓ)` and of `q <= p_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkppReport {
    pub q: f64,
    pub ell: usize,
    pub p_c: ThresholdEstimate,
    /// `8 q log2(2ℓ)` before clamping.
    pub bound: f64,
    pub kkpp: VerificationRecord,
    pub first_moment: VerificationRecord,
}

/// `q(H)`, with the empty-edge case reported as 0.
fn q_or_zero(h: &Hypergraph, opts: &VerifyOptions) -> Result<(f64, bool)> {
    match certify::q_of_with(h, opts.q_tol, opts.budget) {
        Ok(q) => Ok((q, false)),
        Err(Error::Trivial) => Ok((0.0, true)),
        Err(e) => Err(e),
    }
}

pub fn verify_kkpp(instance: &str, h: &Hypergraph, opts: &VerifyOptions) -> Result<KkppReport> {
    let ell = h.max_edge_size().ok_or(Error::NoEdges)?;
    let (q, trivial) = q_or_zero(h, opts)?;
    let p_c = pc_auto(h, opts)?;
    let bound = if ell == 0 {
        0.0
    } else {
        8.0 * q * (2.0 * ell as f64).log2()
    };
    let rhs = bound.min(1.0);
    let exact = p_c.method == Method::Exact;
    let seed = (!exact).then_some(opts.seed);
    let trials = (!exact).then_some(opts.trials);
    let note = if trivial { "; empty edge, q reported as 0" } else { "" };

    let mut kkpp = VerificationRecord::new(instance, "kkpp", p_c.value, "<=", rhs, opts.tol);
    let lhs_low = if exact { p_c.value } else { p_c.ci_low };
    kkpp.pass = lhs_low <= rhs + opts.tol;
    kkpp.vacuous = bound >= 1.0;
    kkpp.method = Some(p_c.method);
    kkpp.seed = seed;
    kkpp.trials = trials;
    kkpp.detail = format!("q={q} ell={ell} unclamped={bound}{note}");

    let mut fm = VerificationRecord::new(instance, "firstmoment", q, "<=", p_c.value, opts.tol);
    let rhs_high = if exact { p_c.value } else { p_c.ci_high };
    fm.pass = q <= rhs_high + opts.tol;
    fm.method = Some(p_c.method);
    fm.seed = seed;
    fm.trials = trials;
    fm.detail = format!("p_c in [{}, {}]{note}", p_c.ci_low, p_c.ci_high);
    Ok(KkppReport {
        q,
        ell,
        p_c,
        bound,
        kkpp,
        first_moment: fm,
    })
}

/// A `q` slightly above `q(H)` at which `H` is certified not q-small:
/// `q(H)(1 + δ)`, raised by further factors of `1 + δ` until the exact cover
/// search confirms it.
pub fn not_small_q(h: &Hypergraph, opts: &VerifyOptions) -> Result<f64> {
    let q0 = certify::q_of_with(h, opts.q_tol, opts.budget)?;
    let mut q = q0 * (1.0 + opts.delta);
    for _ in 0..64 {
        if q >= 1.0 {
            break;
        }
        if !certify::is_q_small_with(h, q, opts.budget)?.0 {
            return Ok(q);
        }
        q *= 1.0 + opts.delta;
    }
    Err(Error::InvalidParameter(format!(
        "no certified not-small q found above {q0}"
    )))
}

/// `1/2 ℓ^{1-c}`: the failure probability that turns the `ε`-bound into a
/// `1 - ℓ^{-c}` guarantee at `p = 48 c q log2(2ℓ)`.
pub fn corollary_eps(ell: usize, c: f64) -> f64 {
    0.5 * (ell as f64).powf(1.0 - c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainReport {
    pub q: f64,
    pub eps: f64,
    pub ell: usize,
    /// `48 q log2(ℓ/ε)` before clamping.
    pub p_raw: f64,
    pub prob: ProbValue,
    pub record: VerificationRecord,
}

/// `P(X_p contains an edge) > 1 - ε` at `p = min(1, 48 q log2(ℓ/ε))` with
/// `q` from [`not_small_q`].
pub fn verify_main(instance: &str, h: &Hypergraph, eps: f64, opts: &VerifyOptions) -> Result<MainReport> {
    let q = not_small_q(h, opts)?;
    verify_main_at(instance, h, q, eps, opts)
}

/// [`verify_main`] at a caller-certified `q`.
pub fn verify_main_at(
    instance: &str,
    h: &Hypergraph,
    q: f64,
    eps: f64,
    opts: &VerifyOptions,
) -> Result<MainReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1)")));
    }
    let ell = h.max_edge_size().ok_or(Error::NoEdges)?;
    let p_raw = 48.0 * q * (ell as f64 / eps).log2();
    let vacuous = p_raw >= 1.0;
    let p = p_raw.clamp(0.0, 1.0);
    let prob = prob_auto(h, p, opts)?;
    let mut r = VerificationRecord::new(instance, "main", prob.value, ">", 1.0 - eps, opts.tol);
    r.pass = prob.ci_high > 1.0 - eps - opts.tol;
    r.vacuous = vacuous;
    r.method = Some(prob.method);
    if prob.method == Method::MonteCarlo {
        r.seed = Some(opts.seed);
        r.trials = Some(opts.trials);
    }
    r.detail = format!("q={q} eps={eps} ell={ell} p={p} unclamped={p_raw}");
    Ok(MainReport {
        q,
        eps,
        ell,
        p_raw,
        prob,
        record: r,
    })
}

/// Sample means of `Σ_{U ∈ U_t(H, W)} q^t` over uniform `W` of size
/// `⌈L q |X|⌉` (capped at `|X|`), against `L^{-t} binom(ℓ, t)`. Checks the
/// single size `t` if given, else every `1 <= t <= ℓ`. Trial `i` draws `W`
/// from substream `(seed, i)`.
pub fn verify_prop21(
    instance: &str,
    h: &Hypergraph,
    q: f64,
    l: f64,
    t: Option<usize>,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationRecord>> {
    if !(l > 1.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("L = {l} must exceed 1")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} outside (0, 1]")));
    }
    if opts.trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    let ell = h.max_edge_size().ok_or(Error::NoEdges)?;
    let sizes: Vec<usize> = match t {
        Some(t) if t == 0 || t > ell => {
            return Err(Error::InvalidParameter(format!("t = {t} outside 1..={ell}")))
        }
        Some(t) => vec![t],
        None => (1..=ell).collect(),
    };
    let active = h.active_vertices();
    let raw = l * q * active.len() as f64;
    let m = (raw.ceil() as usize).min(active.len());
    let samples: Vec<Vec<f64>> = opts.exec.map(opts.trials, |i| {
        let mut rng = substream(opts.seed, i as u64);
        let w = sample_uniform_from(&active, m, &mut rng).expect("m <= |X|");
        let distinct: BTreeSet<VertexSet> = all_fragments(h, &w).into_iter().collect();
        let mut counts = vec![0usize; ell + 1];
        for u in &distinct {
            counts[u.len()] += 1;
        }
        sizes
            .iter()
            .map(|&t| counts[t] as f64 * q.powi(t as i32))
            .collect()
    });
    let n = opts.trials as f64;
    Ok(sizes
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let column: Vec<f64> = samples.iter().map(|s| s[j]).collect();
            let (mean, sd) = mean_and_sd(&column);
            let se = sd / n.sqrt();
            let bound = prop21_bound(l, ell, t);
            let mut r = VerificationRecord::new(instance, "prop21", mean, "<", bound, opts.sigmas * se);
            r.pass = mean <= bound + opts.sigmas * se;
            r.vacuous = raw >= active.len() as f64;
            r.method = Some(Method::MonteCarlo);
            r.seed = Some(opts.seed);
            r.trials = Some(opts.trials);
            r.detail = format!("t={t} q={q} L={l} |W|={m} |X|={} se={se}", active.len());
            r
        })
        .collect())
}

/// The constant computation behind the `1/4` and `1/2` cover-weight bounds,
/// in exact rationals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    /// `Σ_{t=1}^{4} 8^{-t} binom(2t-1, t)`.
    pub head: String,
    /// `Σ_{t>=5} 8^{-t} 2^{2t-1}`, summed as a geometric series.
    pub tail: String,
    pub total: String,
    pub head_is_819_4096: bool,
    pub tail_is_1_32: bool,
    /// `binom(2t-1, t) <= 2^{2t-1}` and the constant ratio of the tail terms, for `5 <= t <= 15`.
    pub tail_dominates: bool,
    pub total_below_quarter: bool,
    /// Twice the total, the ceiling on the retry process's cover weight.
    pub doubled_below_half: bool,
}

impl ConstantReport {
    pub fn pass(&self) -> bool {
        self.head_is_819_4096
            && self.tail_is_1_32
            && self.tail_dominates
            && self.total_below_quarter
            && self.doubled_below_half
    }

    pub fn records(&self) -> Vec<VerificationRecord> {
        let value = |s: &str| {
            let r: Rational64 = s.parse().expect("formatted rational");
            *r.numer() as f64 / *r.denom() as f64
        };
        let mut head = VerificationRecord::new("-", "constants.head", value(&self.head), "==", 819.0 / 4096.0, 0.0);
        head.pass = self.head_is_819_4096;
        head.detail = self.head.clone();
        let mut tail = VerificationRecord::new("-", "constants.tail", value(&self.tail), "==", 1.0 / 32.0, 0.0);
        tail.pass = self.tail_is_1_32 && self.tail_dominates;
        tail.detail = self.tail.clone();
        let mut total = VerificationRecord::new("-", "constants.total", value(&self.total), "<", 0.25, 0.0);
        total.pass = self.total_below_quarter && self.doubled_below_half;
        total.detail = self.total.clone();
        vec![head, tail, total]
    }
}

fn binom_int(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1))
}

pub fn constant_check() -> ConstantReport {
    let eighth = Rational64::new(1, 8);
    let term = |t: i64| eighth.pow(t as i32) * Rational64::from_integer(binom_int(2 * t - 1, t));
    let head: Rational64 = (1..=4).map(term).fold(Rational64::zero(), |a, b| a + b);
    let tail_term = |t: i64| eighth.pow(t as i32) * Rational64::from_integer(1i64 << (2 * t - 1));
    let first = tail_term(5);
    let ratio = tail_term(6) / first;
    let tail = first / (Rational64::one() - ratio);
    let tail_dominates = (5..=15).all(|t| binom_int(2 * t - 1, t) <= 1i64 << (2 * t - 1))
        && (5..=15).all(|t| tail_term(t + 1) / tail_term(t) == ratio);
    let total = head + tail;
    let quarter = Rational64::new(1, 4);
    ConstantReport {
        head: head.to_string(),
        tail: tail.to_string(),
        total: total.to_string(),
        head_is_819_4096: head == Rational64::new(819, 4096),
        tail_is_1_32: tail == Rational64::new(1, 32),
        tail_dominates,
        total_below_quarter: total < quarter,
        doubled_below_half: total * Rational64::from_integer(2) < Rational64::new(1, 2),
    }
}

/// The spread lemma as a record: `lhs` is the optimal cover weight at
/// `q = 1/κ`, which must reach 1 (so `h` is not `1/κ`-small).
pub fn lemma44_record(instance: &str, h: &Hypergraph, opts: &VerifyOptions) -> Result<VerificationRecord> {
    let check = certify::check_spread_small_lemma_with(h, opts.budget)?;
    let mut r = VerificationRecord::new(instance, "lemma44", check.min_weight, ">=", 1.0, opts.tol);
    r.pass = check.holds();
    r.method = Some(Method::Exact);
    r.detail = format!("kappa={} q={} small={}", check.kappa, check.q, check.small);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn constants() {
        let c = constant_check();
        assert_eq!(c.head, "819/4096");
        assert_eq!(c.tail, "1/32");
        assert_eq!(c.total, "947/4096");
        assert!(c.pass());
        assert!(c.records().iter().all(|r| r.pass));
    }

    #[test]
    fn kkpp_examples() {
        let opts = VerifyOptions::default();
        let x = Hypergraph::from_edges(1, [[0]]);
        let r = verify_kkpp("x", &x, &opts).unwrap();
        assert!((r.p_c.value - 0.5).abs() < 1e-9);
        assert!((r.bound - 4.0).abs() < 1e-8);
        assert!(r.kkpp.pass && r.kkpp.vacuous && r.first_moment.pass);
        for k in 5..=8 {
            let r = verify_kkpp("s", &families::singletons(k), &opts).unwrap();
            assert!(r.kkpp.pass && !r.kkpp.vacuous, "k={k}");
            assert!((r.kkpp.rhs - 4.0 / k as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn main_examples() {
        let opts = VerifyOptions::default();
        let r = verify_main("s4", &families::singletons(4), 0.1, &opts).unwrap();
        assert!(r.record.vacuous && r.record.pass);
        let r = verify_main("s30", &families::singletons(30), 0.5, &opts).unwrap();
        assert!(!r.record.vacuous && r.record.pass, "{r:?}");
        assert!((corollary_eps(4, 2.0) - 0.125).abs() < 1e-15);
        assert_eq!(corollary_eps(7, 1.0), 0.5);
    }

    #[test]
    fn prop21_rejects_bad_t() {
        let opts = VerifyOptions::default();
        let h = families::triangles(5);
        assert!(verify_prop21("t", &h, 0.05, 8.0, Some(4), &opts).is_err());
        assert!(verify_prop21("t", &h, 0.05, 1.0, Some(1), &opts).is_err());
        let opts = VerifyOptions {
            trials: 2000,
            ..opts
        };
        let rs = verify_prop21("t", &h, 0.05, 8.0, None, &opts).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(rs.iter().all(|r| r.pass));
        assert!((rs[1].rhs - 3.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let text = records_to_csv(&constant_check().records()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), VerificationRecord::CSV_HEADER.join(","));
        assert_eq!(lines.count(), 3);
    }
}
