use proptest::prelude::*;

use threshlab::certify::{
    self, check_spread_small_lemma, cover_weight, is_q_small, min_cover_weight, q_of, spread_of,
    verify_certificate,
};
use threshlab::families::{self, random_uniform};
use threshlab::oracle;
use threshlab::Hypergraph;

fn small_instances() -> Vec<(&'static str, Hypergraph)> {
    vec![
        ("singletons:4", families::singletons(4)),
        ("triangles:4", families::triangles(4)),
        ("triangles:5", families::triangles(5)),
        ("hamilton:4", families::hamilton(4)),
        ("hamilton:5", families::hamilton(5)),
        ("matchings:4", families::matchings(4)),
        ("matchings:6", families::matchings(6)),
        ("cliques:5,4", families::cliques(5, 4)),
        ("sunflower:1,3,2", families::sunflower(1, 3, 2)),
        ("sunflower:2,4,2", families::sunflower(2, 4, 2)),
        ("random_uniform:12,3,20,7", random_uniform(12, 3, 20, 7).unwrap()),
    ]
}

#[test]
fn branch_and_bound_matches_dp_oracle() {
    for (name, h) in small_instances() {
        for q in [0.05, 0.2, 0.37, 0.5, 0.8] {
            let (bnb, _) = min_cover_weight(&h, q).unwrap();
            let dp = oracle::min_cover_weight_dp(&h, q).unwrap();
            assert!((bnb - dp).abs() <= 1e-9 * dp.max(1.0), "{name} q={q}: {bnb} vs {dp}");
        }
    }
}

#[test]
fn branch_and_bound_matches_subfamily_enumeration() {
    let tiny = [
        families::singletons(3),
        families::matchings(4),
        families::triangles(3),
        Hypergraph::from_edges(4, [vec![0, 1], vec![1, 2], vec![3]]),
    ];
    for h in tiny {
        for q in [0.1, 0.3, 0.6] {
            let (bnb, _) = min_cover_weight(&h, q).unwrap();
            let brute = oracle::min_cover_weight_exhaustive(&h, q).unwrap();
            assert!((bnb - brute).abs() < 1e-12, "{h:?} q={q}");
        }
    }
}

#[test]
fn covers_are_sound_certificates() {
    for (name, h) in small_instances() {
        for q in [0.05, 0.2, 0.4] {
            let (weight, cover) = min_cover_weight(&h, q).unwrap();
            assert!(cover.g.undercovers(&h), "{name}");
            assert!((weight - cover_weight(&cover.g, q)).abs() <= 1e-12, "{name}");
            if let (true, Some(c)) = is_q_small(&h, q).unwrap() {
                assert!(verify_certificate(&h, &c.certificate()).unwrap().valid(), "{name}");
            }
        }
    }
}

#[test]
fn weight_is_monotone_and_smallness_downward_closed() {
    for (name, h) in small_instances() {
        let grid: Vec<f64> = (1..40).map(|i| i as f64 / 40.0).collect();
        let weights: Vec<f64> = grid.iter().map(|&q| min_cover_weight(&h, q).unwrap().0).collect();
        assert!(weights.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{name}");
        let small: Vec<bool> = grid.iter().map(|&q| is_q_small(&h, q).unwrap().0).collect();
        let first_not = small.iter().position(|s| !s).unwrap_or(small.len());
        assert!(small[first_not..].iter().all(|s| !s), "{name}");
    }
}

#[test]
fn q_of_brackets_the_switch() {
    for (name, h) in small_instances() {
        let q = q_of(&h, 1e-9).unwrap();
        assert!(is_q_small(&h, q).unwrap().0, "{name}");
        assert!(!is_q_small(&h, q + 2e-9).unwrap().0, "{name}");
    }
}

#[test]
fn spread_matches_exhaustive_and_lemma_holds() {
    for (name, h) in small_instances() {
        let kappa = spread_of(&h).unwrap().kappa;
        let brute = oracle::spread_exhaustive(&h).unwrap();
        assert!((kappa - brute).abs() < 1e-9, "{name}: {kappa} vs {brute}");
        assert!(check_spread_small_lemma(&h).unwrap().holds(), "{name}");
    }
}

#[test]
fn trivial_and_empty_inputs() {
    let trivial = Hypergraph::from_edges(3, [Vec::<usize>::new(), vec![1]]);
    assert!(matches!(q_of(&trivial, 1e-9), Err(threshlab::Error::Trivial)));
    let none = Hypergraph::new(3, vec![]).unwrap();
    assert!(matches!(q_of(&none, 1e-9), Err(threshlab::Error::NoEdges)));
    assert!(certify::min_cover_weight(&none, 0.3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_instances_agree_with_oracle(
        n in 4usize..9,
        k in 1usize..4,
        m in 1usize..9,
        seed in any::<u64>(),
        q in 0.02f64..0.95,
    ) {
        let k = k.min(n);
        let max = (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1));
        let h = random_uniform(n, k, m.min(max), seed).unwrap();
        let (bnb, _) = min_cover_weight(&h, q).unwrap();
        let dp = oracle::min_cover_weight_dp(&h, q).unwrap();
        prop_assert!((bnb - dp).abs() <= 1e-9 * dp.max(1.0));
    }

    #[test]
    fn q_of_invariant_under_pad_and_duplicates(
        n in 4usize..8,
        m in 1usize..6,
        seed in any::<u64>(),
        extra in 1usize..5,
    ) {
        let h = random_uniform(n, 2, m, seed).unwrap();
        let base = q_of(&h, 1e-10).unwrap();
        let padded = q_of(&h.pad(extra), 1e-10).unwrap();
        prop_assert!((base - padded).abs() < 1e-9);
        let mut edges = h.edges().to_vec();
        edges.push(h.edges()[0].union(&h.edges()[m - 1]));
        edges.push(h.edges()[0].clone());
        let bloated = Hypergraph::new(n, edges).unwrap();
        prop_assert!((base - q_of(&bloated, 1e-10).unwrap()).abs() < 1e-9);
    }
}
