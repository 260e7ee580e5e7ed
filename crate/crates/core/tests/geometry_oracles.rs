use approx::assert_relative_eq;
use girg_core::cliques::count_triangles;
use girg_core::model::{irg_edge_probability, kappa, pareto_cdf, sample_weights};
use girg_core::samplers::{sample_girg, sample_girg_grid, sample_irg, GridConfig};
use girg_core::stats::{ks_statistic, ks_two_sample, mean_and_stderr, EstimateWithError};
use girg_core::theory::triangle_cond_prob_from_kappa;
use girg_core::torus::{
    clt_constants, quantile_threshold_for_probability, threshold_quantile_lp_mc, SumPowerDistribution,
};
use girg_core::{ModelParams, Norm, SeededStream, WeightSequence};

#[test]
fn clt_constants_match_quadrature() {
    for p in [1.0, 1.5, 2.0, 3.0] {
        let c = clt_constants(Norm::P(p)).unwrap();
        // circle distance is uniform on [0, 1/2] with density 2
        let m1 = quadrature::integrate(|x: f64| 2.0 * x.powf(p), 0.0, 0.5, 1e-14).integral;
        let m2 = quadrature::integrate(|x: f64| 2.0 * x.powf(2.0 * p), 0.0, 0.5, 1e-14).integral;
        assert!((c.mu - m1).abs() < 1e-10, "p={p}");
        assert!((c.sigma2 - (m2 - m1 * m1)).abs() < 1e-10, "p={p}");
    }
    let c1 = clt_constants(Norm::P(1.0)).unwrap();
    assert!((c1.mu - 0.25).abs() < 1e-15 && (c1.sigma2 - 1.0 / 48.0).abs() < 1e-15);
    let c2 = clt_constants(Norm::P(2.0)).unwrap();
    assert!((c2.mu - 1.0 / 12.0).abs() < 1e-15 && (c2.sigma2 - 1.0 / 180.0).abs() < 1e-15);
}

#[test]
fn lattice_quantile_agrees_with_monte_carlo() {
    for (d, p) in [(2usize, 1.0), (8, 2.0), (64, 1.0), (256, 1.5)] {
        for q in [0.1, 0.5, 0.85] {
            let lattice = quantile_threshold_for_probability(q, d, p, 1e-3).unwrap();
            let mc = threshold_quantile_lp_mc(q, d, p, 400_000, &SeededStream::new(3, d as u64)).unwrap();
            let tol = 3.0 * mc.achieved_accuracy + lattice.achieved_accuracy;
            assert!(
                (lattice.t - mc.t).abs() <= tol,
                "d={d} p={p} q={q}: {lattice:?} vs {mc:?}"
            );
        }
    }
}

#[test]
fn lattice_cdf_matches_sampled_sums() {
    let (d, p) = (3usize, 1.5);
    let dist = SumPowerDistribution::new(d, p).unwrap();
    let mut rng = SeededStream::from_seed(8).rng();
    let mut sums: Vec<f64> = (0..100_000)
        .map(|_| (0..d).map(|_| (0.5 * girg_core::rng::uniform(&mut rng)).powf(p)).sum())
        .collect();
    let ks = ks_statistic(&mut sums, |s| dist.cdf(s));
    assert!(ks < 1.63 / (100_000f64).sqrt(), "ks = {ks}");
}

#[test]
fn weights_follow_pareto_law() {
    let params = ModelParams::new(100_000, 2.7, 1.5, 1.0, 1, Norm::Infinity).unwrap();
    let w = sample_weights(&params, &SeededStream::from_seed(21)).unwrap();
    let mut xs = w.as_slice().to_vec();
    let ks = ks_statistic(&mut xs, |x| pareto_cdf(x, 2.7, 1.5).unwrap());
    assert!(ks < 1.63 / (xs.len() as f64).sqrt(), "ks = {ks}");
}

#[test]
fn irg_mean_degree_matches_weights() {
    let params = ModelParams::new(10_000, 3.5, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    let s = SeededStream::from_seed(4);
    let w = sample_weights(&params, &s).unwrap();
    let g = sample_irg(&params, &w, &s).unwrap();
    let n = params.n;
    let (mut mean, mut var) = (0.0, 0.0);
    for u in 0..n {
        for v in u + 1..n {
            let p = irg_edge_probability(kappa(w.get(u), w.get(v), &params), n);
            mean += p;
            var += p * (1.0 - p);
        }
    }
    let expected_deg = 2.0 * mean / n as f64;
    let sd = 2.0 * var.sqrt() / n as f64;
    let observed = 2.0 * g.edge_count() as f64 / n as f64;
    assert!(
        (observed - expected_deg).abs() < 4.0 * sd,
        "{observed} vs {expected_deg} +- {sd}"
    );
}

#[test]
fn girg_marginals_match_irg_for_every_pair() {
    let n = 20;
    let params = ModelParams::new(n, 2.5, 1.0, 2.0, 2, Norm::Infinity).unwrap();
    let w = sample_weights(&params, &SeededStream::from_seed(1)).unwrap();
    let graphs = 100_000u64;
    let mut counts = vec![0u64; n * n];
    for t in 0..graphs {
        let g = sample_girg(&params, &w, &SeededStream::new(99, t)).unwrap();
        for (u, v) in g.edges() {
            counts[u * n + v] += 1;
        }
    }
    let (mut chi2, mut df, mut worst) = (0.0, 0, 0.0f64);
    for u in 0..n {
        for v in u + 1..n {
            let p = kappa(w.get(u), w.get(v), &params) / n as f64;
            if p >= 1.0 {
                assert_eq!(counts[u * n + v], graphs);
                continue;
            }
            let e = graphs as f64 * p;
            let z = (counts[u * n + v] as f64 - e) / (e * (1.0 - p)).sqrt();
            chi2 += z * z;
            worst = worst.max(z.abs());
            df += 1;
        }
    }
    // each term has mean 1 whatever the dependence between pairs
    assert!(chi2 / (df as f64) < 1.4, "chi2/df = {}", chi2 / df as f64);
    assert!(worst < 5.0, "max |z| = {worst}");
}

#[test]
fn geometry_raises_clustering() {
    let params = ModelParams::new(1000, 2.7, 1.0, 1.0, 1, Norm::Infinity).unwrap();
    let (mut girg, mut irg) = (Vec::new(), Vec::new());
    for t in 0..10 {
        let s = SeededStream::new(5, t);
        let w = sample_weights(&params, &s).unwrap();
        girg.push(sample_girg(&params, &w, &s).unwrap().average_clustering());
        irg.push(sample_irg(&params, &w, &s).unwrap().average_clustering());
    }
    let (mg, sg) = mean_and_stderr(&girg);
    let (mi, si) = mean_and_stderr(&irg);
    assert!(mg - mi > 10.0 * (sg * sg + si * si).sqrt(), "{mg}+-{sg} vs {mi}+-{si}");
}

#[test]
fn grid_and_naive_agree_in_distribution() {
    let params = ModelParams::new(500, 2.5, 1.0, 1.0, 2, Norm::Infinity).unwrap();
    let stats = |grid: bool, base: u64| -> (Vec<f64>, Vec<f64>) {
        (0..200u64)
            .map(|t| {
                let s = SeededStream::new(base, t);
                let w = sample_weights(&params, &s).unwrap();
                let g = if grid {
                    sample_girg_grid(&params, &w, &s, &GridConfig::default()).unwrap().0
                } else {
                    sample_girg(&params, &w, &s).unwrap()
                };
                (g.edge_count() as f64, count_triangles(&g) as f64)
            })
            .unzip()
    };
    let (mut e1, mut t1) = stats(false, 1);
    let (mut e2, mut t2) = stats(true, 2);
    let crit = 1.628 * (2.0 / 200.0f64).sqrt();
    assert!(ks_two_sample(&mut e1, &mut e2) < crit);
    assert!(ks_two_sample(&mut t1, &mut t2) < crit);
    let (m1, s1) = mean_and_stderr(&e1);
    let (m2, s2) = mean_and_stderr(&e2);
    assert!((m1 - m2).abs() < 4.0 * (s1 * s1 + s2 * s2).sqrt());
}

#[test]
fn triangle_excess_over_independence_shrinks_with_d() {
    // constant weights, kappa/n = p: Pr[triangle] = p^2 * wedge(d)
    let p: f64 = 0.7;
    let excess: Vec<f64> = [1usize, 2, 4, 8, 16, 32]
        .iter()
        .map(|&d| p * p * triangle_cond_prob_from_kappa(p, 1.0, d).unwrap() - p.powi(3))
        .collect();
    assert!(excess.windows(2).all(|w| w[1] < w[0]), "{excess:?}");
    assert!(excess[5] > 0.0);

    // the simulated triangle frequency at d = 1 exceeds the product by > 10 sigma
    let params = ModelParams::new(3, 2.5, 1.0, 2.1, 1, Norm::Infinity).unwrap();
    let w = WeightSequence::constant(3, 1.0);
    let trials = 400_000u64;
    let hits = (0..trials)
        .filter(|&t| sample_girg(&params, &w, &SeededStream::new(6, t)).unwrap().edge_count() == 3)
        .count() as u64;
    let est = EstimateWithError::bernoulli(hits, trials);
    assert!(est.z_score(p.powi(3)) > 10.0, "{est:?}");
    let exact = p * p * triangle_cond_prob_from_kappa(p, 1.0, 1).unwrap();
    assert!(est.within(exact, 4.0), "{est:?} vs {exact}");
}

#[test]
fn capped_pairs_are_always_adjacent() {
    let params = ModelParams::new(50, 2.5, 1.0, 1.0, 3, Norm::P(2.0)).unwrap();
    let w = WeightSequence::constant(50, 8.0);
    let g = sample_girg(&params, &w, &SeededStream::from_seed(3)).unwrap();
    assert_eq!(g.edge_count(), 50 * 49 / 2);
    assert_relative_eq!(kappa(8.0, 8.0, &params), 50.0);
}
