use girg_core::distance::*;
use girg_core::model::kappa;
use girg_core::rng::uniform;
use girg_core::samplers::{Pairing, Space};
use girg_core::{Exec, GirgError, ModelParams, Norm, SeededStream, WeightSequence};
use proptest::prelude::*;

fn normalized(raw: Vec<f64>) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

fn dist8() -> impl Strategy<Value = GraphDistribution> {
    prop::collection::vec(0.001f64..1.0, 8).prop_map(|v| GraphDistribution::new(3, normalized(v)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tv_is_a_metric(p in dist8(), q in dist8(), r in dist8()) {
        let pq = tv_distance(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        prop_assert!((pq - tv_distance(&q, &p).unwrap()).abs() < 1e-15);
        prop_assert!(tv_distance(&p, &r).unwrap() <= pq + tv_distance(&q, &r).unwrap() + 1e-12);
    }

    #[test]
    fn exact_irg_has_independent_edges(ws in prop::collection::vec(1.0f64..3.0, 5), lambda in 0.1f64..2.0) {
        let params = ModelParams::new(5, 2.5, 1.0, lambda, 1, Norm::Infinity).unwrap();
        let w = WeightSequence::new(ws, 1.0).unwrap();
        let e = exact_irg_distribution(&w, &params).unwrap();
        prop_assert!((e.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for u in 0..5 {
            for v in u + 1..5 {
                let p = kappa(w.get(u), w.get(v), &params) / 5.0;
                prop_assert!((e.edge_marginal(u, v) - p).abs() < 1e-9);
            }
        }
        let (a, b) = (pair_index(5, 0, 1), pair_index(5, 2, 4));
        let both: f64 = e.probs().iter().enumerate()
            .filter(|(m, _)| m >> a & 1 == 1 && m >> b & 1 == 1).map(|(_, p)| p).sum();
        prop_assert!((both - e.edge_marginal(0, 1) * e.edge_marginal(2, 4)).abs() < 1e-12);
    }
}

#[test]
fn pair_index_is_a_bijection() {
    for n in 2..=MAX_ENUMERABLE_N {
        let mut seen = vec![false; n * (n - 1) / 2];
        for u in 0..n {
            for v in u + 1..n {
                let i = pair_index(n, u, v);
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(i, pair_index(n, v, u));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}

#[test]
fn empirical_irg_sampler_is_within_bias_of_exact() {
    let params = ModelParams::new(4, 2.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    let w = WeightSequence::new(vec![1.2, 1.5, 1.8, 1.4], 1.0).unwrap();
    let exact = exact_irg_distribution(&w, &params).unwrap();
    let p: Vec<f64> = (0..4)
        .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
        .map(|(u, v)| kappa(w.get(u), w.get(v), &params) / 4.0)
        .collect();
    let emp = empirical_graph_distribution(4, 1_000_000, &SeededStream::from_seed(1), Exec::default(), |rng| {
        p.iter()
            .enumerate()
            .fold(0u32, |m, (b, &pb)| if uniform(rng) < pb { m | 1 << b } else { m })
    })
    .unwrap();
    let tv = tv_distance(&emp.distribution, &exact).unwrap();
    assert!(
        tv > 0.0 && tv <= 1.5 * emp.bias_bound,
        "tv {tv} bias {}",
        emp.bias_bound
    );
}

#[test]
fn point_mass_sampler_has_no_bias() {
    let emp = empirical_graph_distribution(3, 10_000, &SeededStream::from_seed(2), Exec::Sequential, |_| 5).unwrap();
    assert_eq!(emp.distribution.probs()[5], 1.0);
    assert_eq!(emp.bias_bound, 0.0);
}

#[test]
fn single_pair_girg_is_exactly_irg() {
    let params = ModelParams::new(2, 2.5, 1.0, 1.0, 3, Norm::P(2.0)).unwrap();
    let w = WeightSequence::new(vec![1.0, 1.3], 1.0).unwrap();
    let exact = exact_irg_distribution(&w, &params).unwrap();
    let emp = empirical_girg_distribution(&params, &w, 400_000, &SeededStream::from_seed(3), Exec::default()).unwrap();
    assert!(tv_distance(&emp.distribution, &exact).unwrap() <= 4.0 * emp.bias_bound);
}

#[test]
fn tv_curve_drops_with_dimension_and_is_reproducible() {
    let params = ModelParams::new(4, 2.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    let w = WeightSequence::new(vec![1.2, 1.5, 1.8, 1.4], 1.0).unwrap();
    let s = SeededStream::from_seed(4);
    let curve = tv_convergence_curve(&params, &w, &[1, 256], 200_000, &s).unwrap();
    assert!(
        curve[1].tv < curve[0].tv - curve[0].bias_bound - curve[1].bias_bound,
        "{curve:?}"
    );
    assert!(curve[0].tv > 10.0 * curve[0].bias_bound);
    assert_eq!(
        curve,
        tv_convergence_curve_with(&params, &w, &[1, 256], 200_000, &s, Exec::Sequential).unwrap()
    );
    assert_eq!(curve[0].seed, 4);

    let big = ModelParams::new(7, 2.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    let w7 = WeightSequence::constant(7, 1.0);
    assert!(matches!(
        tv_convergence_curve(&big, &w7, &[1], 10, &s),
        Err(GirgError::TooLarge { .. })
    ));
    assert_eq!(default_tv_dims().first(), Some(&1));
    assert_eq!(default_tv_dims().last(), Some(&4096));
}

#[test]
fn normalized_threshold_approaches_gaussian_quantile() {
    // kappa/n = 1/2 targets 0; kappa/n = Phi(-1) targets -1
    let n = 1000;
    for (w, target) in [
        (500f64.sqrt(), 0.0),
        ((0.158_655_253_931_457_05f64 * 1000.0).sqrt(), -1.0),
    ] {
        for p in [1.0, 2.0] {
            let params = ModelParams::new(n, 2.5, 1.0, 1.0, 1, Norm::P(p)).unwrap();
            let pts = gaussian_threshold_limit(w, w, &params, &[16, 256, 4096]).unwrap();
            assert!(pts.iter().all(|pt| (pt.target - target).abs() < 1e-8));
            let gaps: Vec<f64> = pts.iter().map(|pt| (pt.normalized - pt.target).abs()).collect();
            assert!(gaps[2] < 0.02, "p={p} target={target}: {pts:?}");
            assert!(
                gaps[2] <= gaps[0] + pts[2].accuracy + 1e-9,
                "p={p} target={target}: {gaps:?}"
            );
        }
    }
    let inf = ModelParams::new(n, 2.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    assert!(gaussian_threshold_limit(1.0, 1.0, &inf, &[4]).is_err());
}

#[test]
fn distance_covariances() {
    let s = SeededStream::from_seed(5);
    let t = 2_000_000;
    // on the torus Delta_us is independent of u, so sharing u adds nothing
    let (c, se) = pair_distance_covariance(Space::Torus, t, &s).unwrap();
    assert!(c.abs() < 4.0 * se, "{c} +- {se}");
    // on [0,1] Cov = Var(E[|u - v| | u]) = Var(u^2 - u) = 1/180
    let (c, se) = pair_distance_covariance(Space::Hypercube, t, &s).unwrap();
    assert!((c - 1.0 / 180.0).abs() < 4.0 * se && c > 10.0 * se, "{c} +- {se}");
    for space in [Space::Torus, Space::Hypercube] {
        let (c, se) = pair_distance_covariance_with(space, Pairing::Disjoint, t, &s, Exec::default()).unwrap();
        assert!(c.abs() < 4.0 * se, "{space:?}: {c} +- {se}");
    }
    assert!(pair_distance_covariance(Space::Torus, 9_999, &s).is_err());
    assert_eq!(
        pair_distance_covariance_with(Space::Torus, Pairing::SharedEndpoint, 50_000, &s, Exec::Sequential).unwrap(),
        pair_distance_covariance_with(Space::Torus, Pairing::SharedEndpoint, 50_000, &s, Exec::Parallel).unwrap()
    );
}
