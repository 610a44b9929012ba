//! Brute-force reference computations.
//!
//! Nothing here shares code paths with the optimized implementations it is
//! compared against: covers are enumerated over every subset of every edge
//! (no closure reduction, no bounding), probabilities come from
//! inclusion-exclusion instead of subset enumeration, spread enumerates all
//! of `2^X`, and fragment sizes are found by growing subsets of `S`.
//! All of these are exponential and meant for small instances only.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::{Hypergraph, VertexSet};

/// Largest `|H|` the dynamic-programming cover oracle accepts.
pub const MAX_DP_EDGES: usize = 128;
/// Memoized states the cover oracle may visit before giving up.
pub const MAX_DP_STATES: usize = 4_000_000;

fn raw_pool(h: &Hypergraph) -> BTreeSet<VertexSet> {
    h.edges().iter().flat_map(|e| e.subsets()).collect()
}

/// Number of distinct subsets of edges of `h`.
pub fn raw_pool_size(h: &Hypergraph) -> usize {
    raw_pool(h).len()
}

/// Minimum undercover weight by exhaustive search over all subfamilies of
/// the raw candidate pool. Requires a pool of at most 20 sets.
pub fn min_cover_weight_exhaustive(h: &Hypergraph, q: f64) -> Result<f64> {
    let pool: Vec<VertexSet> = raw_pool(h).into_iter().collect();
    if pool.len() > 20 {
        return Err(Error::Resource {
            what: "exhaustive cover pool",
            needed: pool.len() as u64,
            budget: 20,
        });
    }
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << pool.len() {
        let chosen: Vec<&VertexSet> = (0..pool.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &pool[i])
            .collect();
        let covers = h
            .edges()
            .iter()
            .all(|s| chosen.iter().any(|r| r.is_subset(s)));
        if covers {
            let w: f64 = chosen.iter().map(|r| q.powi(r.len() as i32)).sum();
            best = best.min(w);
        }
    }
    Ok(best)
}

/// Minimum undercover weight by memoized recursion over the set of still
/// uncovered edges: the lowest uncovered edge must be covered by one of its
/// own subsets. Only reachable sets of uncovered edges are stored, up to
/// [`MAX_DP_STATES`].
pub fn min_cover_weight_dp(h: &Hypergraph, q: f64) -> Result<f64> {
    let edges = h.edges();
    let m = edges.len();
    if m > MAX_DP_EDGES {
        return Err(Error::Resource {
            what: "cover DP edges",
            needed: m as u64,
            budget: MAX_DP_EDGES as u64,
        });
    }
    let mut options: Vec<Vec<(f64, u128)>> = Vec::with_capacity(m);
    for e in edges {
        let mut by_cover: HashMap<u128, f64> = HashMap::new();
        for r in e.subsets() {
            let covers = edges
                .iter()
                .enumerate()
                .filter(|(_, s)| r.is_subset(s))
                .fold(0u128, |acc, (i, _)| acc | 1 << i);
            let w = q.powi(r.len() as i32);
            let slot = by_cover.entry(covers).or_insert(f64::INFINITY);
            *slot = slot.min(w);
        }
        let mut opts: Vec<(f64, u128)> = by_cover.into_iter().map(|(c, w)| (w, c)).collect();
        opts.sort_by_key(|a| a.1);
        options.push(opts);
    }
    let full = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    let mut memo = HashMap::new();
    dp(full, &options, &mut memo).ok_or(Error::Resource {
        what: "cover DP states",
        needed: memo.len() as u64,
        budget: MAX_DP_STATES as u64,
    })
}

fn dp(uncovered: u128, options: &[Vec<(f64, u128)>], memo: &mut HashMap<u128, f64>) -> Option<f64> {
    if uncovered == 0 {
        return Some(0.0);
    }
    if let Some(&cached) = memo.get(&uncovered) {
        return Some(cached);
    }
    if memo.len() >= MAX_DP_STATES {
        return None;
    }
    let e = uncovered.trailing_zeros() as usize;
    let mut best = f64::INFINITY;
    for &(w, covers) in &options[e] {
        best = best.min(w + dp(uncovered & !covers, options, memo)?);
    }
    memo.insert(uncovered, best);
    Some(best)
}

/// `P(∃ S ∈ H : S ⊆ X_p)` by inclusion-exclusion over nonempty subfamilies.
pub fn prob_contains_inclusion_exclusion(h: &Hypergraph, p: f64) -> Result<f64> {
    let m = h.len();
    if m > 22 {
        return Err(Error::Resource {
            what: "inclusion-exclusion terms",
            needed: m as u64,
            budget: 22,
        });
    }
    let mut total = 0.0;
    for mask in 1u32..1 << m {
        let mut union = VertexSet::new();
        for (i, e) in h.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                union.union_with(e);
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * p.powi(union.len() as i32);
    }
    Ok(total)
}

/// Spread by enumerating every nonempty `Y ⊆ X` with at least one edge
/// containing it. Ground sets up to 20 vertices.
pub fn spread_exhaustive(h: &Hypergraph) -> Result<f64> {
    let n = h.ground_size();
    if n > 20 {
        return Err(Error::Resource {
            what: "spread ground set",
            needed: n as u64,
            budget: 20,
        });
    }
    let total = h.len() as f64;
    let mut best = f64::INFINITY;
    for mask in 1u32..1 << n {
        let y: VertexSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let count = h.edges().iter().filter(|s| y.is_subset(s)).count();
        if count > 0 {
            best = best.min((total / count as f64).powf(1.0 / y.len() as f64));
        }
    }
    Ok(best)
}

/// Size of the smallest `T ⊆ S` with `W ∪ T` in the upward closure of `h`.
pub fn min_fragment_size(h: &Hypergraph, w: &VertexSet, s: &VertexSet) -> usize {
    let mut subsets: Vec<VertexSet> = s.subsets().collect();
    subsets.sort_by_key(VertexSet::len);
    subsets
        .into_iter()
        .find(|t| h.contains_edge(&w.union(t)))
        .map(|t| t.len())
        .expect("T = S always works")
}
