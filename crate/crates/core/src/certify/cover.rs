//! Exact minimum-weight undercover search.
//!
//! Candidate edges are restricted to *closed* subsets of edges of `H`: sets
//! of the form `∩{S ∈ H : R ⊆ S}` for some `R` contained in an edge. This
//! loses nothing. A set that lies in no edge of `H` covers nothing and can be
//! dropped. Any other `R` covers exactly the edges containing it, and the
//! intersection of those edges covers the same edges while being a superset
//! of `R`, so its weight `q^|·|` is no larger.
//!
//! The search itself is a weighted set-cover branch-and-bound over the edges
//! of `H`: pick the uncovered edge with the fewest available candidates and
//! branch on which candidate covers it, excluding earlier siblings from later
//! subtrees. The incumbent starts from the greedy cover. The lower bound
//! charges every uncovered edge its cheapest per-edge share
//! `q^|R| / |cover(R) ∩ uncovered|` over its available candidates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{Hypergraph, VertexSet};

/// Work limits for exact cover and spread computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Bound on `Σ_{S ∈ H} 2^|S|`, the number of edge subsets enumerated.
    pub subsets: u64,
    /// Bound on branch-and-bound nodes per solve.
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            subsets: 1 << 18,
            nodes: 20_000_000,
        }
    }
}

impl Budget {
    pub fn with_subsets(subsets: u64) -> Self {
        Self {
            subsets,
            ..Self::default()
        }
    }

    pub(crate) fn check_subsets(&self, h: &Hypergraph) -> Result<()> {
        let needed = h
            .edges()
            .iter()
            .map(|e| 1u64.checked_shl(e.len() as u32).unwrap_or(u64::MAX))
            .fold(0u64, u64::saturating_add);
        if needed > self.subsets {
            return Err(Error::Resource {
                what: "edge-subset enumeration",
                needed,
                budget: self.subsets,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    set: VertexSet,
    /// Indices of the edges of `H` containing `set`.
    covers: VertexSet,
}

/// Candidate pool for one hypergraph, reusable across values of `q`.
#[derive(Clone, Debug)]
pub struct CoverProblem {
    h: Hypergraph,
    candidates: Vec<Candidate>,
    by_edge: Vec<Vec<usize>>,
    budget: Budget,
}

/// Result of one exact solve.
#[derive(Clone, Debug)]
pub struct Solution {
    pub weight: f64,
    /// Cover edges in lexicographic order.
    pub edges: Vec<VertexSet>,
    pub nodes: u64,
}

impl CoverProblem {
    /// `h` must be nonempty; it is minimized first.
    pub fn new(h: &Hypergraph, budget: Budget) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::NoEdges);
        }
        let h = h.minimize();
        budget.check_subsets(&h)?;
        let edges = h.edges();
        let mut closures: HashMap<VertexSet, VertexSet> = HashMap::new();
        let mut seen: std::collections::HashSet<VertexSet> = Default::default();
        for e in edges {
            for r in e.subsets() {
                if !seen.insert(r.clone()) {
                    continue;
                }
                let covers: VertexSet = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| r.is_subset(s))
                    .map(|(i, _)| i)
                    .collect();
                let mut closure = edges[covers.iter().next().expect("r lies in e")].clone();
                for i in covers.iter().skip(1) {
                    closure = closure.intersection(&edges[i]);
                }
                closures.entry(closure).or_insert(covers);
            }
        }
        let mut candidates: Vec<Candidate> = closures
            .into_iter()
            .map(|(set, covers)| Candidate { set, covers })
            .collect();
        candidates.sort_by(|a, b| a.set.cmp(&b.set));
        let mut by_edge = vec![Vec::new(); edges.len()];
        for (c, cand) in candidates.iter().enumerate() {
            for e in &cand.covers {
                by_edge[e].push(c);
            }
        }
        Ok(Self {
            h,
            candidates,
            by_edge,
            budget,
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.h
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> impl Iterator<Item = &VertexSet> {
        self.candidates.iter().map(|c| &c.set)
    }

    /// Minimum of `Σ_{R ∈ G} q^|R|` over undercovers `G`, for `0 < q <= 1`.
    pub fn solve(&self, q: f64) -> Result<Solution> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!("q = {q} outside (0, 1]")));
        }
        let cost: Vec<f64> = self
            .candidates
            .iter()
            .map(|c| q.powi(c.set.len() as i32))
            .collect();
        let all = VertexSet::full(self.h.len());
        let (greedy_weight, greedy) = self.greedy(&cost, &all);
        let mut search = Search {
            problem: self,
            cost: &cost,
            forbidden: vec![false; self.candidates.len()],
            chosen: Vec::new(),
            best_weight: greedy_weight,
            best: greedy,
            nodes: 0,
            ratio: vec![f64::INFINITY; self.candidates.len()],
        };
        search.descend(&all, 0.0)?;
        let nodes = search.nodes;
        let mut edges: Vec<VertexSet> = search
            .best
            .iter()
            .map(|&c| self.candidates[c].set.clone())
            .collect();
        edges.sort();
        let weight = super::weight_of(edges.iter(), q);
        Ok(Solution {
            weight,
            edges,
            nodes,
        })
    }

    fn greedy(&self, cost: &[f64], all: &VertexSet) -> (f64, Vec<usize>) {
        let mut uncovered = all.clone();
        let mut chosen = Vec::new();
        let mut total = 0.0;
        while !uncovered.is_empty() {
            let mut best = None;
            let mut best_ratio = f64::INFINITY;
            for (c, cand) in self.candidates.iter().enumerate() {
                let k = cand.covers.intersection_len(&uncovered);
                if k == 0 {
                    continue;
                }
                let ratio = cost[c] / k as f64;
                if ratio < best_ratio {
                    best_ratio = ratio;
                    best = Some(c);
                }
            }
            let c = best.expect("every edge covers itself");
            uncovered = uncovered.difference(&self.candidates[c].covers);
            total += cost[c];
            chosen.push(c);
        }
        (total, chosen)
    }
}

struct Search<'a> {
    problem: &'a CoverProblem,
    cost: &'a [f64],
    forbidden: Vec<bool>,
    chosen: Vec<usize>,
    best_weight: f64,
    best: Vec<usize>,
    nodes: u64,
    ratio: Vec<f64>,
}

impl Search<'_> {
    fn improves(&self, w: f64) -> bool {
        w < self.best_weight - 1e-12 * self.best_weight.max(1e-300)
    }

    fn descend(&mut self, uncovered: &VertexSet, cost_so_far: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.problem.budget.nodes {
            return Err(Error::Resource {
                what: "cover search nodes",
                needed: self.nodes,
                budget: self.problem.budget.nodes,
            });
        }
        if uncovered.is_empty() {
            if self.improves(cost_so_far) {
                self.best_weight = cost_so_far;
                self.best = self.chosen.clone();
            }
            return Ok(());
        }

        let cands = &self.problem.candidates;
        for (c, cand) in cands.iter().enumerate() {
            self.ratio[c] = if self.forbidden[c] {
                f64::INFINITY
            } else {
                match cand.covers.intersection_len(uncovered) {
                    0 => f64::INFINITY,
                    k => self.cost[c] / k as f64,
                }
            };
        }

        let mut bound = cost_so_far;
        let mut branch_edge = None;
        let mut fewest = usize::MAX;
        for e in uncovered {
            let options = &self.problem.by_edge[e];
            let mut cheapest = f64::INFINITY;
            let mut available = 0;
            for &c in options {
                if !self.forbidden[c] {
                    available += 1;
                    cheapest = cheapest.min(self.ratio[c]);
                }
            }
            if available == 0 {
                return Ok(());
            }
            bound += cheapest;
            if available < fewest {
                fewest = available;
                branch_edge = Some(e);
            }
        }
        if !self.improves(bound) {
            return Ok(());
        }

        let e = branch_edge.expect("uncovered is nonempty");
        let mut options: Vec<usize> = self.problem.by_edge[e]
            .iter()
            .copied()
            .filter(|&c| !self.forbidden[c])
            .collect();
        options.sort_by(|&a, &b| self.ratio[a].total_cmp(&self.ratio[b]).then(a.cmp(&b)));

        let mut result = Ok(());
        for &c in &options {
            let next_cost = cost_so_far + self.cost[c];
            if self.improves(next_cost) {
                let rest = uncovered.difference(&cands[c].covers);
                self.chosen.push(c);
                result = self.descend(&rest, next_cost);
                self.chosen.pop();
                if result.is_err() {
                    break;
                }
            }
            self.forbidden[c] = true;
        }
        for &c in &options {
            self.forbidden[c] = false;
        }
        result
    }
}

/// Exact `Σ_{R ∈ G} q^|R| <= 1/2` in rational arithmetic, with `q` taken as
/// the exact binary value of the float.
pub(crate) fn weight_at_most_half_exact<'a>(
    edges: impl Iterator<Item = &'a VertexSet>,
    q: f64,
) -> bool {
    let Some(q) = BigRational::from_float(q) else {
        return false;
    };
    let mut total = BigRational::zero();
    for e in edges {
        let mut term = BigRational::one();
        for _ in 0..e.len() {
            term *= &q;
        }
        total += term;
    }
    total <= BigRational::new(BigInt::one(), BigInt::from(2))
}
