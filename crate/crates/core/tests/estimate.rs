use threshlab::certify::q_of;
use threshlab::estimate::{
    exact_prob_contains, mc_prob_contains, pc_exact, pc_monte_carlo, verify_kkpp, VerifyOptions,
};
use threshlab::exec::Exec;
use threshlab::families::{self, random_uniform};
use threshlab::rng::derive_seed;
use threshlab::Hypergraph;

fn instances() -> Vec<(&'static str, Hypergraph)> {
    vec![
        ("singletons:5", families::singletons(5)),
        ("triangles:5", families::triangles(5)),
        ("triangles:6", families::triangles(6)),
        ("hamilton:5", families::hamilton(5)),
        ("matchings:6", families::matchings(6)),
        ("cliques:5,4", families::cliques(5, 4)),
        ("sunflower:1,3,2", families::sunflower(1, 3, 2)),
        ("random_uniform:12,3,20,7", random_uniform(12, 3, 20, 7).unwrap()),
    ]
}

#[test]
fn monte_carlo_covers_exact_on_most_pairs() {
    let mut inside = 0;
    let mut total = 0;
    for (i, (_, h)) in instances().iter().enumerate() {
        for (j, p) in [0.1, 0.25, 0.4, 0.55, 0.7, 0.85].into_iter().enumerate() {
            let exact = exact_prob_contains(h, p).unwrap();
            for s in 0..15u64 {
                let seed = derive_seed(i as u64 * 100 + j as u64, s);
                let mc = mc_prob_contains(h, p, 4000, seed, Exec::default()).unwrap();
                total += 1;
                if mc.ci_low <= exact && exact <= mc.ci_high {
                    inside += 1;
                }
            }
        }
    }
    // Nominal coverage is exactly 95%, so the observed share is judged
    // against 95% with the usual three binomial standard errors.
    let share = inside as f64 / total as f64;
    let sigma = (0.95 * 0.05 / total as f64).sqrt();
    assert!(share >= 0.95 - 3.0 * sigma, "{inside}/{total}");
}

#[test]
fn containment_is_monotone_in_p() {
    for (name, h) in instances() {
        let values: Vec<f64> = (0..=100)
            .map(|i| exact_prob_contains(&h, i as f64 / 100.0).unwrap())
            .collect();
        assert_eq!(values[0], 0.0, "{name}");
        assert!((values[100] - 1.0).abs() < 1e-12, "{name}");
        assert!(values.windows(2).all(|w| w[0] <= w[1] + 1e-15), "{name}");
    }
}

#[test]
fn bracket_straddles_half() {
    for (name, h) in instances() {
        let est = pc_exact(&h).unwrap();
        assert!(exact_prob_contains(&h, est.ci_low).unwrap() < 0.5, "{name}");
        assert!(exact_prob_contains(&h, est.ci_high).unwrap() >= 0.5, "{name}");
        assert!(est.ci_high - est.ci_low <= 1e-12, "{name}");
    }
}

#[test]
fn pc_invariant_under_minimize_and_pad() {
    for (name, h) in instances() {
        let base = pc_exact(&h).unwrap().value;
        assert!((pc_exact(&h.minimize()).unwrap().value - base).abs() < 1e-12, "{name}");
        assert!((pc_exact(&h.pad(7)).unwrap().value - base).abs() < 1e-12, "{name}");
        let mut edges = h.edges().to_vec();
        edges.push(h.edges()[0].union(&h.edges()[h.len() - 1]));
        let bloated = Hypergraph::new(h.ground_size(), edges).unwrap();
        assert!((pc_exact(&bloated).unwrap().value - base).abs() < 1e-12, "{name}");
    }
}

#[test]
fn monte_carlo_pc_brackets_exact() {
    for (name, h) in [("triangles:5", families::triangles(5)), ("matchings:6", families::matchings(6))] {
        let exact = pc_exact(&h).unwrap().value;
        let mc = pc_monte_carlo(&h, 20_000, 1e-4, 17, Exec::default()).unwrap();
        assert!(mc.ci_low - 0.01 <= exact && exact <= mc.ci_high + 0.01, "{name}: {exact} vs {mc:?}");
        assert!((mc.value - exact).abs() < 0.02, "{name}");
    }
}

#[test]
fn first_moment_and_upper_bound_hold() {
    let opts = VerifyOptions::default();
    for (name, h) in instances() {
        let report = verify_kkpp(name, &h, &opts).unwrap();
        assert!(report.kkpp.pass, "{name}: {:?}", report.kkpp);
        assert!(report.first_moment.pass, "{name}: {:?}", report.first_moment);
        assert!((report.q - q_of(&h, opts.q_tol).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn empty_edge_reports_q_zero() {
    let h = Hypergraph::from_edges(3, [Vec::<usize>::new(), vec![0, 1]]);
    let report = verify_kkpp("trivial", &h, &VerifyOptions::default()).unwrap();
    assert_eq!(report.q, 0.0);
    assert_eq!(report.p_c.value, 0.0);
    assert!(report.kkpp.pass && report.first_moment.pass);
    assert!(report.first_moment.detail.contains("empty edge"));
}
