use std::collections::BTreeSet;

use rand::Rng;

use super::all_fragments;
use super::trace::{Outcome, RoundRecord, SizeWeight};
use crate::error::{Error, Result};
use crate::rng::sample_uniform_from;
use crate::{Hypergraph, VertexSet};

/// One fragmentation round and what it produced.
#[derive(Clone, Debug)]
pub struct RoundOutput {
    pub record: RoundRecord,
    /// `T(S, W)` for every edge of the input, in edge order.
    pub fragments: Vec<VertexSet>,
    /// `C_i`: the distinct fragments of size above `⌊ℓ_i/2⌋`, sorted.
    pub cover: Vec<VertexSet>,
    /// Distinct fragments of size at most `ℓ_i/2`, on `X_i \ W_i`.
    pub next: Hypergraph,
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `L^{-t} binom(ℓ, t)`, the bound on `E Σ_{U ∈ U_t} q^t`.
pub fn prop21_bound(l: f64, ell: usize, t: usize) -> f64 {
    l.powi(-(t as i32)) * binomial(ell, t)
}

/// `Σ_{t=⌊ℓ/2⌋+1}^{ℓ} L^{-t} binom(ℓ, t)`, the bound on the expected weight of
/// a round's cover.
pub fn round_bound(l: f64, ell: usize) -> f64 {
    (ell / 2 + 1..=ell).map(|t| prop21_bound(l, ell, t)).sum()
}

/// `⌈L q n⌉`, capped at `n`.
pub(crate) fn w_size(l: f64, q: f64, n: usize) -> usize {
    ((l * q * n as f64).ceil() as usize).min(n)
}

/// Per-size weights `Σ_{U ∈ U_t} q^t` of the distinct sets in `fragments`,
/// for `t` in `sizes`.
pub(crate) fn size_weights<'a>(
    distinct: impl IntoIterator<Item = &'a VertexSet>,
    q: f64,
    sizes: std::ops::RangeInclusive<usize>,
) -> Vec<SizeWeight> {
    let mut counts = vec![0usize; sizes.end() + 1];
    for u in distinct {
        if sizes.contains(&u.len()) {
            counts[u.len()] += 1;
        }
    }
    sizes
        .map(|t| SizeWeight {
            t,
            count: counts[t],
            weight: counts[t] as f64 * q.powi(t as i32),
        })
        .collect()
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} outside (0, 1]")))
    }
}

/// A round with `ℓ_i = ℓ(h)`.
pub fn round<R: Rng + ?Sized>(h: &Hypergraph, q: f64, l: f64, rng: &mut R) -> Result<RoundOutput> {
    let ell = h.max_edge_size().ok_or(Error::NoEdges)?;
    round_with_ell(h, ell, q, l, rng)
}

/// A round with an explicit size bound `ell >= ℓ(h)`: samples `W_i` of size
/// `⌈L q |X_i|⌉` (at most `|X_i|`) uniformly from the active vertices,
/// fragments every edge, and splits the fragments at `ℓ_i/2`.
pub fn round_with_ell<R: Rng + ?Sized>(
    h: &Hypergraph,
    ell: usize,
    q: f64,
    l: f64,
    rng: &mut R,
) -> Result<RoundOutput> {
    if !(l > 1.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("L = {l} must exceed 1")));
    }
    check_q(q)?;
    let actual = h.max_edge_size().ok_or(Error::NoEdges)?;
    if ell == 0 || actual > ell {
        return Err(Error::InvalidParameter(format!(
            "size bound {ell} invalid for edges of size {actual}"
        )));
    }
    let active = h.active_vertices();
    let w = sample_uniform_from(&active, w_size(l, q, active.len()), rng)?;
    let fragments = all_fragments(h, &w);
    let distinct: BTreeSet<VertexSet> = fragments.iter().cloned().collect();
    let half = ell / 2;
    let size_weights = size_weights(&distinct, q, half + 1..=ell);
    let c_weight = size_weights.iter().map(|s| s.weight).sum::<f64>();
    let threshold = 2.0 * round_bound(l, ell);
    let (cover, kept): (Vec<VertexSet>, BTreeSet<VertexSet>) = {
        let (big, small): (Vec<_>, Vec<_>) = distinct.into_iter().partition(|t| t.len() > half);
        (big, small.into_iter().collect())
    };
    let outcome = if c_weight > threshold {
        Outcome::Failure
    } else {
        Outcome::Success
    };
    let record = RoundRecord {
        index: 0,
        ell,
        active_size: active.len(),
        w: w.clone(),
        l: Some(l),
        p: None,
        size_weights,
        c_weight,
        threshold,
        outcome,
    };
    let next = Hypergraph::from_distinct(h, kept, h.removed().union(&w));
    Ok(RoundOutput {
        record,
        fragments,
        cover,
        next,
    })
}
