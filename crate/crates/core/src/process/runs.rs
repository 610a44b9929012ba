use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::round::{check_q, round_bound, round_with_ell};
use super::trace::{Outcome, ProcessTrace, RoundRecord, Variant};
use crate::error::{Error, Result};
use crate::exec::{compensated_sum, mean_and_sd, Exec};
use crate::rng::{sample_bernoulli_from, substream};
use crate::{Hypergraph, VertexSet};

/// `L` used by every fixed-size process.
const L: f64 = 8.0;

/// What a failed `run_main` round keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureRule {
    /// `{T(S, W_i) : S ∈ H_i}`.
    #[default]
    Fragments,
    /// `{S \ W_i : S ∈ H_i}`.
    Residual,
}

fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1)")))
    }
}

/// `⌈log2(1/ε)⌉`, at least 1.
pub fn restart_attempts(eps: f64) -> usize {
    ((1.0 / eps).log2().ceil() as usize).max(1)
}

/// `I = 6⌊log2(ℓ/ε)⌋` (0 when `ℓ/ε < 1`).
pub fn main_round_count(ell: usize, eps: f64) -> usize {
    let x = (ell as f64 / eps).log2().floor();
    if x <= 0.0 {
        0
    } else {
        6 * x as usize
    }
}

fn distinct_edges(base: &Hypergraph, edges: impl IntoIterator<Item = VertexSet>, removed: VertexSet) -> Hypergraph {
    Hypergraph::from_distinct(base, edges.into_iter().collect(), removed)
}

fn exhausted_record(index: usize, cur: &Hypergraph) -> RoundRecord {
    RoundRecord {
        index,
        ell: 0,
        active_size: cur.active_size(),
        w: VertexSet::new(),
        l: None,
        p: None,
        size_weights: Vec::new(),
        c_weight: 0.0,
        threshold: 0.0,
        outcome: Outcome::Exhausted,
    }
}

struct Progress {
    rounds: Vec<RoundRecord>,
    total_w: VertexSet,
    u: BTreeSet<VertexSet>,
    u_bound: f64,
    successes: usize,
}

impl Progress {
    fn new() -> Self {
        Progress {
            rounds: Vec::new(),
            total_w: VertexSet::new(),
            u: BTreeSet::new(),
            u_bound: 0.0,
            successes: 0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        self,
        h: &Hypergraph,
        variant: Variant,
        q: f64,
        eps: Option<f64>,
        planned_rounds: usize,
        last: &Hypergraph,
        final_ell: usize,
    ) -> ProcessTrace {
        let found_edge = h.least_edge_within(&self.total_w).cloned();
        let u_edges: Vec<VertexSet> = self.u.into_iter().collect();
        let u_weight = compensated_sum(u_edges.iter().map(|u| q.powi(u.len() as i32)));
        let u_undercovers = (variant != Variant::Restart).then(|| {
            Hypergraph::new(h.ground_size(), u_edges.clone())
                .expect("fragments stay in the ground set")
                .undercovers(h)
        });
        ProcessTrace {
            variant,
            q,
            eps,
            ell: h.max_edge_size().unwrap_or(0),
            planned_rounds,
            rounds: self.rounds,
            found: found_edge.is_some(),
            found_edge,
            resolved: last.has_empty_edge(),
            total_w: self.total_w,
            u_edges,
            u_weight,
            u_bound: self.u_bound,
            u_undercovers,
            successes: self.successes,
            final_ell,
        }
    }
}

fn check_input(h: &Hypergraph, q: f64) -> Result<usize> {
    check_q(q)?;
    h.max_edge_size().ok_or(Error::NoEdges)
}

/// The halving process with `L = 8`: rounds with `ℓ_{i+1} = ⌊ℓ_i/2⌋` until
/// the bound drops below 1. Stops early once the working hypergraph is empty
/// or contains `∅`, since later rounds cannot change the outcome.
///
/// Panics if the trace contradicts the process's structure: reaching `{∅}`
/// without a contained edge, or ending with no contained edge while the
/// accumulated cover fails to undercover `h`.
pub fn run_pp<R: Rng + ?Sized>(h: &Hypergraph, q: f64, rng: &mut R) -> Result<ProcessTrace> {
    let ell0 = check_input(h, q)?;
    let planned = if ell0 == 0 { 0 } else { floor_log2(ell0) + 1 };
    let mut cur = h.clone();
    let mut ell = ell0;
    let mut progress = Progress::new();
    while ell >= 1 && !cur.is_empty() && !cur.has_empty_edge() {
        let mut out = round_with_ell(&cur, ell, q, L, rng)?;
        out.record.index = progress.rounds.len();
        progress.total_w.union_with(&out.record.w);
        progress.u.extend(out.cover);
        progress.u_bound += round_bound(L, ell);
        if out.record.outcome == Outcome::Success {
            progress.successes += 1;
        }
        progress.rounds.push(out.record);
        cur = out.next;
        ell /= 2;
    }
    assert!(progress.rounds.len() <= planned);
    let trace = progress.finish(h, Variant::Pp, q, None, planned, &cur, ell);
    assert!(!trace.resolved || trace.found, "reached {{∅}} without containment");
    assert!(
        trace.found || trace.u_undercovers == Some(true),
        "no containment and the cover does not undercover H"
    );
    Ok(trace)
}

/// Independent attempts `W_i = (X_i)_p` with `p = min(1, 8 q log2(2ℓ))` on the
/// residual hypergraph, `⌈log2(1/ε)⌉` of them, stopping at the first attempt
/// that contains an edge.
pub fn run_restart<R: Rng + ?Sized>(
    h: &Hypergraph,
    q: f64,
    eps: f64,
    rng: &mut R,
) -> Result<ProcessTrace> {
    let ell = check_input(h, q)?;
    check_eps(eps)?;
    let attempts = restart_attempts(eps);
    let p = if ell == 0 {
        1.0
    } else {
        (8.0 * q * (2.0 * ell as f64).log2()).min(1.0)
    };
    let mut cur = h.clone();
    let mut progress = Progress::new();
    while progress.rounds.len() < attempts && !cur.has_empty_edge() {
        let w = sample_bernoulli_from(cur.active_vertices(), p, rng);
        let hit = cur.contains_edge(&w);
        progress.total_w.union_with(&w);
        let next = distinct_edges(&cur, cur.restrict(&w).edges().iter().cloned(), cur.removed().union(&w));
        progress.rounds.push(RoundRecord {
            index: progress.rounds.len(),
            ell,
            active_size: cur.active_size(),
            w,
            l: None,
            p: Some(p),
            size_weights: Vec::new(),
            c_weight: 0.0,
            threshold: 0.0,
            outcome: if hit { Outcome::Success } else { Outcome::Failure },
        });
        if hit {
            progress.successes += 1;
        }
        cur = next;
    }
    let trace = progress.finish(h, Variant::Restart, q, Some(eps), attempts, &cur, ell);
    assert_eq!(trace.found, trace.resolved, "residual and cumulative containment disagree");
    Ok(trace)
}

/// [`run_main_with`] using the fragment rule on failed rounds.
pub fn run_main<R: Rng + ?Sized>(h: &Hypergraph, q: f64, eps: f64, rng: &mut R) -> Result<ProcessTrace> {
    run_main_with(h, q, eps, FailureRule::Fragments, rng)
}

/// The retry process: exactly `I = 6⌊log2(ℓ/ε)⌋` rounds. A round fails when
/// its cover weight exceeds twice the expected-weight bound; failed rounds
/// keep `ℓ_i` and discard `C_i`, successful rounds add `C_i` to `𝒰` and halve
/// `ℓ_i`. Once the working hypergraph contains `∅` (or is empty) the
/// remaining rounds are no-ops, recorded as `exhausted` and counted as
/// successes.
///
/// Panics if the accumulated cover weight exceeds the sum of the success
/// thresholds, if that sum reaches 1/2, or if `⌊log2 ℓ⌋ + 1` successes did
/// not bring the size bound to 0.
pub fn run_main_with<R: Rng + ?Sized>(
    h: &Hypergraph,
    q: f64,
    eps: f64,
    rule: FailureRule,
    rng: &mut R,
) -> Result<ProcessTrace> {
    let ell0 = check_input(h, q)?;
    check_eps(eps)?;
    let planned = main_round_count(ell0, eps);
    let mut cur = h.clone();
    let mut ell = ell0;
    let mut progress = Progress::new();
    for i in 0..planned {
        if ell == 0 || cur.is_empty() || cur.has_empty_edge() {
            ell = 0;
            progress.rounds.push(exhausted_record(i, &cur));
            progress.successes += 1;
            continue;
        }
        let mut out = round_with_ell(&cur, ell, q, L, rng)?;
        out.record.index = i;
        progress.total_w.union_with(&out.record.w);
        let w = out.record.w.clone();
        match out.record.outcome {
            Outcome::Success => {
                progress.u.extend(out.cover);
                progress.u_bound += out.record.threshold;
                progress.successes += 1;
                cur = out.next;
                ell /= 2;
            }
            _ => {
                let removed = cur.removed().union(&w);
                cur = match rule {
                    FailureRule::Fragments => distinct_edges(&cur, out.fragments, removed),
                    FailureRule::Residual => {
                        distinct_edges(&cur, cur.edges().iter().map(|s| s.difference(&w)), removed)
                    }
                };
            }
        }
        progress.rounds.push(out.record);
    }
    let trace = progress.finish(h, Variant::Main, q, Some(eps), planned, &cur, ell);
    assert!(
        trace.u_weight <= trace.u_bound * (1.0 + 1e-12),
        "cover weight {} above the success thresholds {}",
        trace.u_weight,
        trace.u_bound
    );
    assert!(trace.u_bound < 0.5, "success thresholds sum to {}", trace.u_bound);
    if ell0 >= 1 && trace.successes > floor_log2(ell0) {
        assert_eq!(trace.final_ell, 0, "enough successes but ℓ did not reach 0");
    }
    assert!(!trace.resolved || trace.found, "reached {{∅}} without containment");
    Ok(trace)
}

/// Which process a batch runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum RunSpec {
    Pp,
    Restart { eps: f64 },
    Main { eps: f64, rule: FailureRule },
}

impl RunSpec {
    pub fn variant(&self) -> Variant {
        match self {
            RunSpec::Pp => Variant::Pp,
            RunSpec::Restart { .. } => Variant::Restart,
            RunSpec::Main { .. } => Variant::Main,
        }
    }

    pub fn eps(&self) -> Option<f64> {
        match *self {
            RunSpec::Pp => None,
            RunSpec::Restart { eps } | RunSpec::Main { eps, .. } => Some(eps),
        }
    }

    pub fn run<R: Rng + ?Sized>(&self, h: &Hypergraph, q: f64, rng: &mut R) -> Result<ProcessTrace> {
        match *self {
            RunSpec::Pp => run_pp(h, q, rng),
            RunSpec::Restart { eps } => run_restart(h, q, eps, rng),
            RunSpec::Main { eps, rule } => run_main_with(h, q, eps, rule, rng),
        }
    }
}

/// The parts of a trace a batch aggregates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub found: bool,
    pub resolved: bool,
    pub u_weight: f64,
    pub u_undercovers: Option<bool>,
    pub successes: usize,
    pub rounds: usize,
    /// Rounds that ran the success test (not exhausted).
    pub tested_rounds: usize,
    pub failure_rounds: usize,
}

impl From<&ProcessTrace> for TraceSummary {
    fn from(t: &ProcessTrace) -> Self {
        TraceSummary {
            found: t.found,
            resolved: t.resolved,
            u_weight: t.u_weight,
            u_undercovers: t.u_undercovers,
            successes: t.successes,
            rounds: t.rounds.len(),
            tested_rounds: t
                .rounds
                .iter()
                .filter(|r| r.outcome != Outcome::Exhausted)
                .count(),
            failure_rounds: t.failure_rounds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub spec: RunSpec,
    pub q: f64,
    pub seed: u64,
    pub trials: usize,
    pub found: usize,
    /// Traces where exactly one of "found" and "𝒰 undercovers H" holds.
    pub dichotomy_holds: usize,
    /// Traces with both found and an undercovering `𝒰`.
    pub both: usize,
    pub u_weight_mean: f64,
    pub u_weight_sd: f64,
    pub u_weight_max: f64,
    pub tested_rounds: usize,
    pub failure_rounds: usize,
}

impl BatchSummary {
    pub fn found_rate(&self) -> f64 {
        self.found as f64 / self.trials as f64
    }

    pub fn failure_rate(&self) -> f64 {
        1.0 - self.found_rate()
    }

    /// Fraction of success tests that failed.
    pub fn round_failure_rate(&self) -> f64 {
        if self.tested_rounds == 0 {
            0.0
        } else {
            self.failure_rounds as f64 / self.tested_rounds as f64
        }
    }
}

/// Runs `trials` independent traces, trial `i` on substream `(seed, i)`.
pub fn run_batch(
    h: &Hypergraph,
    q: f64,
    spec: RunSpec,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<BatchSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let summaries = exec
        .map(trials, |i| {
            let mut rng = substream(seed, i as u64);
            spec.run(h, q, &mut rng).map(|t| TraceSummary::from(&t))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = summaries.iter().map(|s| s.u_weight).collect();
    let (u_weight_mean, u_weight_sd) = mean_and_sd(&weights);
    Ok(BatchSummary {
        spec,
        q,
        seed,
        trials,
        found: summaries.iter().filter(|s| s.found).count(),
        dichotomy_holds: summaries
            .iter()
            .filter(|s| s.u_undercovers.is_some_and(|u| u != s.found))
            .count(),
        both: summaries
            .iter()
            .filter(|s| s.found && s.u_undercovers == Some(true))
            .count(),
        u_weight_mean,
        u_weight_sd,
        u_weight_max: weights.iter().copied().fold(0.0, f64::max),
        tested_rounds: summaries.iter().map(|s| s.tested_rounds).sum(),
        failure_rounds: summaries.iter().map(|s| s.failure_rounds).sum(),
    })
}
