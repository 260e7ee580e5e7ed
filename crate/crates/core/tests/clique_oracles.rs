use girg_core::cliques::{
    clique_number, count_k_cliques, count_k_cliques_with, count_triangles, k_clique_vertex_incidence,
};
use girg_core::samplers::{sample_girg, GraphSample};
use girg_core::{Exec, ModelParams, Norm, SeededStream, WeightSequence};
use proptest::prelude::*;

fn brute_force_count(g: &GraphSample, k: usize) -> u64 {
    let n = g.n();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|&m| is_clique(g, m))
        .count() as u64
}

fn is_clique(g: &GraphSample, mask: u32) -> bool {
    let vs: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

fn brute_force_omega(g: &GraphSample) -> usize {
    (0u32..1 << g.n())
        .filter(|&m| is_clique(g, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn petersen() -> GraphSample {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    GraphSample::from_edges(10, &e).unwrap()
}

fn graph_strategy() -> impl Strategy<Value = GraphSample> {
    (0usize..=12, 0.0f64..1.0, any::<u64>()).prop_map(|(n, density, bits)| {
        let mut state = bits;
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                if ((state >> 11) as f64 / (1u64 << 53) as f64) < density {
                    e.push((u, v));
                }
            }
        }
        GraphSample::from_edges(n, &e).unwrap()
    })
}

#[test]
fn petersen_has_no_triangles() {
    let g = petersen();
    assert_eq!(g.edge_count(), 15);
    assert_eq!(count_triangles(&g), brute_force_count(&g, 3));
    assert_eq!(count_triangles(&g), 0);
    assert_eq!(clique_number(&g), 2);
    assert_eq!(brute_force_omega(&g), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn counts_match_enumeration(g in graph_strategy()) {
        for k in 1..=5 {
            prop_assert_eq!(count_k_cliques(&g, k), brute_force_count(&g, k), "k = {}", k);
        }
        prop_assert_eq!(clique_number(&g), brute_force_omega(&g));
    }

    #[test]
    fn clique_number_is_largest_nonzero_count(g in graph_strategy()) {
        let omega = clique_number(&g);
        if g.n() > 0 {
            prop_assert!(count_k_cliques(&g, omega) > 0);
        }
        prop_assert_eq!(count_k_cliques(&g, omega + 1), 0);
    }

    #[test]
    fn incidence_sums_to_k_times_count(g in graph_strategy(), k in 1usize..5) {
        let inc: u64 = k_clique_vertex_incidence(&g, k).iter().sum();
        prop_assert_eq!(inc, k as u64 * count_k_cliques(&g, k));
    }
}

#[test]
fn larger_graphs_agree_across_exec_modes() {
    let p = ModelParams::new(3000, 2.5, 1.0, 2.0, 2, Norm::Infinity).unwrap();
    let s = SeededStream::from_seed(12);
    let w = girg_core::model::sample_weights(&p, &s).unwrap();
    let g = sample_girg(&p, &w, &s).unwrap();
    for k in 3..=6 {
        assert_eq!(
            count_k_cliques_with(&g, k, Exec::Sequential),
            count_k_cliques_with(&g, k, Exec::Parallel)
        );
    }
    let omega = clique_number(&g);
    assert!(count_k_cliques(&g, omega) > 0 && count_k_cliques(&g, omega + 1) == 0);
}

#[test]
fn complete_graph_counts_are_binomials() {
    let g = GraphSample::complete(20);
    let w = WeightSequence::constant(20, 1.0);
    assert_eq!(w.len(), 20);
    let mut binom = 1u64;
    for k in 1..=8 {
        binom = binom * (20 - k as u64 + 1) / k as u64;
        assert_eq!(count_k_cliques(&g, k), binom);
    }
    assert_eq!(clique_number(&g), 20);
}
