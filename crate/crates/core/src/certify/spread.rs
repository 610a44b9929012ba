use std::collections::HashSet;

use serde::Serialize;

use super::Budget;
use crate::error::{Error, Result};
use crate::{Hypergraph, VertexSet};

/// The largest κ for which `H` is κ-spread, with a minimizing set `Y`.
///
/// Containment is counted as `count(Y) = |{S ∈ H : Y ⊆ S}|`, and
/// `κ = min_Y (|H| / count(Y))^{1/|Y|}` over nonempty `Y` lying in some edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpreadWitness {
    pub kappa: f64,
    pub witness_y: VertexSet,
    pub count: usize,
}

pub fn spread_of(h: &Hypergraph) -> Result<SpreadWitness> {
    spread_of_with(h, Budget::default())
}

pub fn spread_of_with(h: &Hypergraph, budget: Budget) -> Result<SpreadWitness> {
    if h.is_empty() {
        return Err(Error::NoEdges);
    }
    if h.has_empty_edge() {
        return Err(Error::Trivial);
    }
    let h = h.minimize();
    budget.check_subsets(&h)?;
    let total = h.len() as f64;
    let mut seen = HashSet::new();
    let mut best: Option<SpreadWitness> = None;
    for e in h.edges() {
        for y in e.subsets() {
            if y.is_empty() || !seen.insert(y.clone()) {
                continue;
            }
            let count = h.edges().iter().filter(|s| y.is_subset(s)).count();
            let kappa = (total / count as f64).powf(1.0 / y.len() as f64);
            let better = match &best {
                None => true,
                Some(b) => {
                    let tie = (kappa - b.kappa).abs() <= 1e-12 * b.kappa;
                    (!tie && kappa < b.kappa) || (tie && y < b.witness_y)
                }
            };
            if better {
                best = Some(SpreadWitness {
                    kappa,
                    witness_y: y,
                    count,
                });
            }
        }
    }
    Ok(best.expect("nonempty edges have nonempty subsets"))
}
