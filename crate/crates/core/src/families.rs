//! Deterministic generators for standard instances.
//!
//! Graph-based families use the edges of the complete graph `K_n` as the
//! ground set, indexed in lexicographic pair order `(0,1), (0,2), ..,
//! (0,n-1), (1,2), ..` (see [`pair_index`]).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::{Hypergraph, VertexSet};

/// Index of the graph edge `{i, j}` of `K_n` in lexicographic pair order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn graph_edges(n: usize, vertices: &[usize]) -> VertexSet {
    let mut out = VertexSet::new();
    for (a, &i) in vertices.iter().enumerate() {
        for &j in &vertices[a + 1..] {
            out.insert(pair_index(n, i, j));
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `k` disjoint one-vertex edges on `k` vertices.
pub fn singletons(k: usize) -> Hypergraph {
    Hypergraph::from_edges(k, (0..k).map(|v| [v]))
}

/// One edge per triangle of `K_n`, on the `n(n-1)/2` edges of `K_n`.
pub fn triangles(n: usize) -> Hypergraph {
    cliques(n, 3)
}

/// One edge per `K_k` in `K_n`, each of size `k(k-1)/2`.
pub fn cliques(n: usize, k: usize) -> Hypergraph {
    let edges = combinations(n, k)
        .iter()
        .map(|vs| graph_edges(n, vs))
        .collect();
    Hypergraph::new(pairs(n), edges).expect("pair indices are in range")
}

/// One edge per Hamiltonian cycle of `K_n`; `(n-1)!/2` edges of size `n`.
pub fn hamilton(n: usize) -> Hypergraph {
    assert!(n >= 3);
    let mut edges = Vec::new();
    let mut rest: Vec<usize> = (1..n).collect();
    permute(&mut rest, 0, &mut |perm| {
        // Fix vertex 0 first and take each direction once.
        if perm[0] < perm[perm.len() - 1] {
            let mut cycle = VertexSet::new();
            let mut prev = 0;
            for &v in perm.iter() {
                cycle.insert(pair_index(n, prev, v));
                prev = v;
            }
            cycle.insert(pair_index(n, prev, 0));
            edges.push(cycle);
        }
    });
    edges.sort();
    Hypergraph::new(pairs(n), edges).expect("pair indices are in range")
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Perfect matchings of `K_n`, `n` even; `(n-1)!!` edges of size `n/2`.
pub fn matchings(n: usize) -> Hypergraph {
    fn rec(n: usize, free: &mut Vec<usize>, cur: &mut VertexSet, out: &mut Vec<VertexSet>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for idx in 0..free.len() {
            let partner = free.remove(idx);
            let e = pair_index(n, first, partner);
            cur.insert(e);
            rec(n, free, cur, out);
            cur.remove(e);
            free.insert(idx, partner);
        }
        free.insert(0, first);
    }
    assert!(n.is_multiple_of(2), "matchings need an even vertex count");
    let mut out = Vec::new();
    rec(n, &mut (0..n).collect(), &mut VertexSet::new(), &mut out);
    out.sort();
    Hypergraph::new(pairs(n), out).expect("pair indices are in range")
}

/// `petals` edges sharing the core `{0, .., core-1}`, each with its own
/// `petal_size` further vertices.
pub fn sunflower(core: usize, petals: usize, petal_size: usize) -> Hypergraph {
    let n = core + petals * petal_size;
    let edges = (0..petals).map(|p| {
        (0..core).chain(core + p * petal_size..core + (p + 1) * petal_size)
    });
    Hypergraph::from_edges(n, edges)
}

/// `m` distinct uniformly random `k`-subsets of `n` vertices, sorted
/// lexicographically. Reproducible from `seed`.
pub fn random_uniform(n: usize, k: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if k > n || (m as u64) > binomial(n as u64, k as u64) {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {m} distinct {k}-subsets of {n} vertices"
        )));
    }
    let mut rng = seeded(seed);
    let mut edges = BTreeSet::new();
    while edges.len() < m {
        let mut e = VertexSet::new();
        while e.len() < k {
            e.insert(rng.random_range(0..n));
        }
        edges.insert(e);
    }
    Hypergraph::new(n, edges.into_iter().collect())
}

/// A named family with its parameters, e.g. `triangles:5` or
/// `random_uniform:12,3,20,7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Singletons(usize),
    Triangles(usize),
    Hamilton(usize),
    Matchings(usize),
    Cliques(usize, usize),
    Sunflower(usize, usize, usize),
    RandomUniform {
        n: usize,
        k: usize,
        m: usize,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("{self}: {msg}")));
        match *self {
            FamilySpec::Singletons(k) if k < 1 => bad("k must be at least 1"),
            FamilySpec::Triangles(n) if !(3..=12).contains(&n) => bad("n must be in 3..=12"),
            FamilySpec::Hamilton(n) if !(3..=7).contains(&n) => bad("n must be in 3..=7"),
            FamilySpec::Matchings(n) if n < 2 || n % 2 == 1 || n > 10 => {
                bad("n must be even, 2..=10")
            }
            FamilySpec::Cliques(n, k) if k < 2 || k > n || n > 12 => bad("need 2 <= k <= n <= 12"),
            FamilySpec::Sunflower(core, petals, size) if petals < 1 || core + size < 1 => {
                bad("need at least one petal and nonempty edges")
            }
            FamilySpec::RandomUniform { n, k, m, .. }
                if k > n || (m as u64) > binomial(n as u64, k as u64) =>
            {
                bad("too many edges requested")
            }
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<Hypergraph> {
        self.validate()?;
        Ok(match *self {
            FamilySpec::Singletons(k) => singletons(k),
            FamilySpec::Triangles(n) => triangles(n),
            FamilySpec::Hamilton(n) => hamilton(n),
            FamilySpec::Matchings(n) => matchings(n),
            FamilySpec::Cliques(n, k) => cliques(n, k),
            FamilySpec::Sunflower(c, p, s) => sunflower(c, p, s),
            FamilySpec::RandomUniform { n, k, m, seed } => random_uniform(n, k, m, seed)?,
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Singletons(k) => write!(f, "singletons:{k}"),
            FamilySpec::Triangles(n) => write!(f, "triangles:{n}"),
            FamilySpec::Hamilton(n) => write!(f, "hamilton:{n}"),
            FamilySpec::Matchings(n) => write!(f, "matchings:{n}"),
            FamilySpec::Cliques(n, k) => write!(f, "cliques:{n},{k}"),
            FamilySpec::Sunflower(c, p, s) => write!(f, "sunflower:{c},{p},{s}"),
            FamilySpec::RandomUniform { n, k, m, seed } => {
                write!(f, "random_uniform:{n},{k},{m},{seed}")
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognized family spec {s:?}"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = args
            .split(',')
            .map(|a| a.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let u = |i: usize| nums[i] as usize;
        let spec = match (name.trim(), nums.len()) {
            ("singletons", 1) => FamilySpec::Singletons(u(0)),
            ("triangles", 1) => FamilySpec::Triangles(u(0)),
            ("hamilton", 1) => FamilySpec::Hamilton(u(0)),
            ("matchings", 1) => FamilySpec::Matchings(u(0)),
            ("cliques", 2) => FamilySpec::Cliques(u(0), u(1)),
            ("sunflower", 3) => FamilySpec::Sunflower(u(0), u(1), u(2)),
            ("random_uniform", 4) => FamilySpec::RandomUniform {
                n: u(0),
                k: u(1),
                m: u(2),
                seed: nums[3],
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_hypergraph, write_hypergraph};

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    fn double_factorial(n: u64) -> u64 {
        (1..=n).rev().step_by(2).product()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        let mut expected = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), expected);
                assert_eq!(pair_index(n, j, i), expected);
                expected += 1;
            }
        }
    }

    #[test]
    fn singletons_shape() {
        assert_eq!(singletons(1), Hypergraph::from_edges(1, [[0]]));
        assert_eq!(singletons(3).len(), 3);
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangles(3).len(), 1);
        let t4 = triangles(4);
        assert_eq!((t4.len(), t4.ground_size()), (4, 6));
        for n in 3..=8 {
            let t = triangles(n);
            assert_eq!(t.len() as u64, binomial(n as u64, 3));
            assert_eq!(t.max_edge_size(), Some(3));
            assert!(t.edges().iter().all(|e| e.len() == 3));
        }
    }

    #[test]
    fn hamilton_counts() {
        assert_eq!(hamilton(3).len(), 1);
        assert_eq!(hamilton(4).len(), 3);
        assert_eq!(hamilton(5).len(), 12);
        for n in 3..=7 {
            let h = hamilton(n);
            assert_eq!(h.len() as u64, factorial(n as u64 - 1) / 2, "n={n}");
            assert!(h.edges().iter().all(|e| e.len() == n));
            assert!(h.is_minimal());
        }
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(4).len(), 3);
        for n in [2, 4, 6, 8] {
            let m = matchings(n);
            assert_eq!(m.len() as u64, double_factorial(n as u64 - 1));
            assert!(m.edges().iter().all(|e| e.len() == n / 2));
        }
    }

    #[test]
    fn sunflower_shape() {
        let s = sunflower(1, 3, 2);
        assert_eq!(s.len(), 3);
        let core = s.edges()[0].intersection(&s.edges()[1]);
        assert_eq!(core, VertexSet::from([0]));
        assert!(s.edges().iter().all(|e| e.contains(0) && e.len() == 3));
    }

    #[test]
    fn random_uniform_is_reproducible() {
        let a = random_uniform(12, 3, 20, 5).unwrap();
        let b = random_uniform(12, 3, 20, 5).unwrap();
        assert_eq!(write_hypergraph(&a), write_hypergraph(&b));
        assert_eq!(a.len(), 20);
        assert!(a.edges().iter().all(|e| e.len() == 3));
        assert_ne!(a, random_uniform(12, 3, 20, 6).unwrap());
        assert!(random_uniform(4, 2, 7, 0).is_err());
    }

    #[test]
    fn specs_parse_and_round_trip() {
        let specs = [
            "singletons:4",
            "triangles:5",
            "hamilton:5",
            "matchings:6",
            "cliques:5,4",
            "sunflower:1,3,2",
            "random_uniform:12,3,20,7",
        ];
        for text in specs {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            let h = spec.generate().unwrap();
            let file = write_hypergraph(&h);
            assert_eq!(parse_hypergraph(&file).unwrap(), h);
        }
        for bad in ["triangles", "triangles:2", "hamilton:9", "matchings:5", "nope:1"] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }
}
