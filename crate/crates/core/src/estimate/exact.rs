use serde::{Deserialize, Serialize};

use super::{Method, ThresholdEstimate, PC_TOL};
use crate::error::{Error, Result};
use crate::Hypergraph;

/// Largest connected component the exact enumerator will expand (`2^24`
/// subsets).
pub const MAX_COMPONENT: usize = 24;

/// For one connected component on `size` vertices, `missing[k]` counts the
/// `k`-subsets that contain no edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Component {
    size: usize,
    missing: Vec<f64>,
}

impl Component {
    fn miss_probability(&self, p: f64) -> f64 {
        let r = 1.0 - p;
        self.missing
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(k, &m)| m * p.powi(k as i32) * r.powi((self.size - k) as i32))
            .sum()
    }
}

/// `P(X_p contains an edge)` as an explicit polynomial in `p`.
///
/// Vertices outside every edge do not affect the event, and components of the
/// edge-incidence graph are independent, so the probability factors as
/// `1 - Π_c P(component c contains no edge)`. Each factor comes from the full
/// list of subsets of the component, marked by an upward-closure sweep and
/// counted by size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentPolynomial {
    components: Vec<Component>,
    trivial: bool,
}

impl ContainmentPolynomial {
    pub fn new(h: &Hypergraph) -> Result<Self> {
        Self::with_budget(h, MAX_COMPONENT)
    }

    pub fn with_budget(h: &Hypergraph, max_component: usize) -> Result<Self> {
        if h.has_empty_edge() {
            return Ok(Self {
                components: Vec::new(),
                trivial: true,
            });
        }
        let h = h.minimize();
        let groups = components(&h);
        if let Some(big) = groups.iter().map(|(v, _)| v.len()).max() {
            if big > max_component.min(MAX_COMPONENT) {
                return Err(Error::Resource {
                    what: "exact enumeration component size",
                    needed: big as u64,
                    budget: max_component.min(MAX_COMPONENT) as u64,
                });
            }
        }
        let components = groups
            .into_iter()
            .map(|(vertices, edges)| enumerate(&vertices, &edges))
            .collect();
        Ok(Self {
            components,
            trivial: false,
        })
    }

    pub fn eval(&self, p: f64) -> f64 {
        assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
        if self.trivial {
            return 1.0;
        }
        let miss: f64 = self.components.iter().map(|c| c.miss_probability(p)).product();
        1.0 - miss
    }

    /// Number of vertices the polynomial depends on.
    pub fn support_size(&self) -> usize {
        self.components.iter().map(|c| c.size).sum()
    }
}

/// Groups the edges of a hypergraph without the empty edge into connected
/// components: (sorted vertices, edges as local bit masks).
fn components(h: &Hypergraph) -> Vec<(Vec<usize>, Vec<u32>)> {
    let n = h.ground_size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in h.edges() {
        let mut it = e.iter();
        let first = it.next().expect("no empty edges here");
        for v in it {
            let (a, b) = (find(&mut parent, first), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
    }
    let support = h.support();
    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in support.iter() {
        let r = find(&mut parent, v);
        match roots.iter().position(|&x| x == r) {
            Some(i) => members[i].push(v),
            None => {
                roots.push(r);
                members.push(vec![v]);
            }
        }
    }
    let mut grouped: Vec<Vec<u32>> = vec![Vec::new(); roots.len()];
    for e in h.edges() {
        let r = find(&mut parent, e.iter().next().expect("nonempty"));
        let i = roots.iter().position(|&x| x == r).expect("edge vertex in support");
        let local = &members[i];
        let mask = e
            .iter()
            .map(|v| 1u32 << local.binary_search(&v).expect("member"))
            .fold(0, |a, b| a | b);
        grouped[i].push(mask);
    }
    members.into_iter().zip(grouped).collect()
}

fn enumerate(vertices: &[usize], edges: &[u32]) -> Component {
    let n = vertices.len();
    let mut up = vec![false; 1 << n];
    for &e in edges {
        up[e as usize] = true;
    }
    for b in 0..n {
        let bit = 1usize << b;
        for m in 0..1usize << n {
            if m & bit != 0 && up[m ^ bit] {
                up[m] = true;
            }
        }
    }
    let mut missing = vec![0.0f64; n + 1];
    for (m, &hit) in up.iter().enumerate() {
        if !hit {
            missing[m.count_ones() as usize] += 1.0;
        }
    }
    Component { size: n, missing }
}

/// `P(∃ S ∈ H : S ⊆ X_p)` by exhaustive enumeration.
pub fn exact_prob_contains(h: &Hypergraph, p: f64) -> Result<f64> {
    Ok(ContainmentPolynomial::new(h)?.eval(p))
}

/// `p_c(h)` by bisection on the exact polynomial, to width [`PC_TOL`].
pub fn pc_exact(h: &Hypergraph) -> Result<ThresholdEstimate> {
    pc_exact_with(&ContainmentPolynomial::new(h)?, h)
}

pub(crate) fn pc_exact_with(poly: &ContainmentPolynomial, h: &Hypergraph) -> Result<ThresholdEstimate> {
    if h.is_empty() {
        return Err(Error::NoEdges);
    }
    let exact = |value, lo, hi| ThresholdEstimate {
        value,
        method: Method::Exact,
        trials: 0,
        evaluations: 0,
        ci_low: lo,
        ci_high: hi,
        seed: None,
    };
    if h.has_empty_edge() {
        return Ok(exact(0.0, 0.0, 0.0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut evaluations = 0;
    while hi - lo > PC_TOL {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if poly.eval(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdEstimate {
        evaluations,
        ..exact(0.5 * (lo + hi), lo, hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{families, oracle};

    #[test]
    fn small_examples() {
        let h = Hypergraph::from_edges(3, [[1, 2]]);
        assert!((exact_prob_contains(&h, 0.5).unwrap() - 0.25).abs() < 1e-15);
        let h = families::singletons(2);
        assert!((exact_prob_contains(&h, 0.5).unwrap() - 0.75).abs() < 1e-15);
        let empty = Hypergraph::from_edges(3, [Vec::<usize>::new()]);
        assert_eq!(exact_prob_contains(&empty, 0.0).unwrap(), 1.0);
        let none = Hypergraph::new(3, vec![]).unwrap();
        assert_eq!(exact_prob_contains(&none, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn matches_inclusion_exclusion() {
        for h in [
            families::triangles(4),
            families::triangles(5),
            families::hamilton(5),
            families::matchings(6),
            families::sunflower(1, 3, 2),
        ] {
            let poly = ContainmentPolynomial::new(&h).unwrap();
            for p in [0.05, 0.2, 0.5, 0.77, 0.95] {
                let ie = oracle::prob_contains_inclusion_exclusion(&h, p).unwrap();
                assert!((poly.eval(p) - ie).abs() < 1e-12, "{p}: {} vs {ie}", poly.eval(p));
            }
        }
    }

    #[test]
    fn components_factor() {
        // 30 one-vertex components: far past a single 2^24 enumeration.
        let h = families::singletons(30);
        let poly = ContainmentPolynomial::new(&h).unwrap();
        assert_eq!(poly.support_size(), 30);
        let p: f64 = 0.03;
        assert!((poly.eval(p) - (1.0 - (1.0 - p).powi(30))).abs() < 1e-14);
    }

    #[test]
    fn budget_enforced() {
        let h = families::matchings(8);
        let err = ContainmentPolynomial::new(&h).unwrap_err();
        assert!(err.is_resource());
        assert!(ContainmentPolynomial::with_budget(&families::triangles(4), 5).is_err());
    }

    #[test]
    fn pc_analytic() {
        let x = Hypergraph::from_edges(4, [[2]]);
        assert!((pc_exact(&x).unwrap().value - 0.5).abs() < 1e-12);
        for k in 1..=8 {
            let est = pc_exact(&families::singletons(k)).unwrap();
            let expected = 1.0 - 2f64.powf(-1.0 / k as f64);
            assert!((est.value - expected).abs() < 1e-11, "k={k}");
            assert!(est.ci_low <= est.value && est.value <= est.ci_high);
        }
    }
}
