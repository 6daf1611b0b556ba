use std::collections::HashSet;
use std::ops::ControlFlow;

use hypercensus_core::constructions::{
    chain_neighborhoods, clique_plus_isolated_family, complete_r_partite,
    count_triangle_and_matching_free, greedy_linear_transversal, greedy_partial_steiner,
    has_even_edge_count, is_linear, is_triangle_and_matching_free, link_bijection_013,
    link_bijection_13, max_codegree, qn_member, three_coloring_witness, turan_cn, turan_cn_with,
    Strategy, Tripartition,
};
use hypercensus_core::enumerator::{enumerate_free, SearchOptions};
use hypercensus_core::freeness::{is_lk_free, ForbiddenList};
use hypercensus_core::graph::SimpleGraph;
use hypercensus_core::subset::ColexSubsets;
use hypercensus_core::Hypergraph;
use proptest::prelude::*;

fn list(members: &[usize]) -> ForbiddenList {
    ForbiddenList::new(4, 3, members.iter().copied()).unwrap()
}

fn census_set(n: usize, l: &ForbiddenList) -> HashSet<u64> {
    let mut out = HashSet::new();
    enumerate_free(n, 3, 4, l, &SearchOptions::default(), |h| {
        out.insert(h.to_bits().unwrap());
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

#[test]
fn turan_construction_four_set_counts() {
    let l = list(&[1, 4]);
    for n in 4..=30 {
        let g = turan_cn(n).unwrap();
        assert!(is_lk_free(&g, &l).unwrap().free, "n={n}");
        for s in ColexSubsets::new(n, 4) {
            let c = g.induced_edge_count(&s).unwrap();
            assert!(matches!(c, 0 | 2 | 3), "n={n} {s:?} spans {c}");
        }
    }
}

#[test]
fn turan_construction_ignores_class_order() {
    let part = Tripartition::from_classes(6, [&[0, 1], &[2, 3], &[4, 5]]).unwrap();
    let g = turan_cn_with(&part).unwrap();
    assert!(is_lk_free(&g, &list(&[1, 4])).unwrap().free);
    assert!(g.is_isomorphic(&turan_cn(6).unwrap()).unwrap());
    assert!(Tripartition::from_classes(6, [&[0, 1, 2], &[3], &[4, 5]]).is_err());
    assert!(Tripartition::from_classes(6, [&[0, 1], &[1, 3], &[4, 5]]).is_err());
}

#[test]
fn seeded_qn_members_are_free() {
    let l = list(&[1, 4]);
    for n in 4..=15 {
        for seed in 0..10 {
            let (family, trace) =
                greedy_linear_transversal(n, Strategy::SeededRandom(seed)).unwrap();
            assert!(is_linear(&family));
            assert!(trace.replay().unwrap());
            let g = qn_member(n, &family).unwrap();
            assert_eq!(
                g.edge_count(),
                turan_cn(n).unwrap().edge_count() - family.len()
            );
            assert!(is_lk_free(&g, &l).unwrap().free, "n={n} seed={seed}");
        }
    }
}

#[test]
fn qn_rejects_bad_families() {
    // 0 and 3 share a class
    assert!(qn_member(6, &[[0, 1, 3]]).is_err());
    assert!(qn_member(6, &[[0, 1, 5], [0, 1, 2]]).is_err());
    assert!(qn_member(6, &[[0, 1, 2], [3, 4, 5]]).is_ok());
    assert!(qn_member(9, &[[0, 1, 2], [0, 4, 2]]).is_err());
}

#[test]
fn greedy_steiner_outputs_are_maximal_packings() {
    for (n, r) in [(20, 3), (15, 4), (12, 5)] {
        for strategy in [Strategy::ColexFirst, Strategy::SeededRandom(3)] {
            let (g, trace) = greedy_partial_steiner(n, r, strategy).unwrap();
            assert!(max_codegree(&g) <= 1, "n={n} r={r}");
            assert_eq!(trace.steps(), g.edge_count());
            assert!(trace.replay().unwrap());
            for e in ColexSubsets::new(n, r).filter(|e| !g.contains(e)) {
                let mut h = g.clone();
                h.insert(&e).unwrap();
                assert!(max_codegree(&h) > 1, "{e:?} could be added");
            }
        }
    }
}

#[test]
fn complete_tripartite_is_free() {
    let l = list(&[3, 4]);
    for n in 4..=12 {
        let g = complete_r_partite(n, 3).unwrap();
        assert!(is_lk_free(&g, &l).unwrap().free, "n={n}");
    }
}

#[test]
fn parity_family_size() {
    let even = (0u64..1 << 10)
        .filter(|&m| has_even_edge_count(&Hypergraph::from_bits(5, 3, m).unwrap()))
        .count();
    assert_eq!(even, 512);
}

#[test]
fn bijection_13_is_onto_the_census() {
    let l = list(&[1, 3]);
    for n in 4..=6 {
        let image: HashSet<u64> = SimpleGraph::all(n - 1)
            .unwrap()
            .map(|h| link_bijection_13(&h).unwrap().to_bits().unwrap())
            .collect();
        assert_eq!(image.len(), 1 << ((n - 1) * (n - 2) / 2));
        assert_eq!(image, census_set(n, &l), "n={n}");
    }
}

#[test]
fn bijection_013_domain_and_image_match_the_census() {
    let l = list(&[0, 1, 3]);
    for n in 5..=7 {
        let domain: Vec<SimpleGraph> = SimpleGraph::all(n - 1)
            .unwrap()
            .filter(|a| is_triangle_and_matching_free(&a.complement()))
            .collect();
        assert_eq!(
            domain.len() as u64,
            count_triangle_and_matching_free(n - 1).unwrap()
        );
        let image: HashSet<u64> = domain
            .iter()
            .map(|a| link_bijection_013(a).unwrap().to_bits().unwrap())
            .collect();
        assert_eq!(image.len(), domain.len());
        assert_eq!(image, census_set(n, &l), "n={n}");
    }
}

#[test]
fn bijection_013_rejects_links_outside_the_domain() {
    // complement of the empty graph is complete, so it has a triangle
    assert!(link_bijection_013(&SimpleGraph::empty(4).unwrap()).is_err());
}

#[test]
fn admissible_links_on_four_vertices() {
    let shapes: [&[(usize, usize)]; 6] = [
        &[(0, 1), (2, 3)],
        &[(0, 1), (0, 2), (1, 2)],
        &[(0, 1), (1, 2), (2, 3)],
        &[(0, 1), (0, 2), (1, 2), (2, 3)],
        &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    ];
    let expected: HashSet<Hypergraph> = shapes
        .iter()
        .map(|e| {
            SimpleGraph::from_edges(4, e.iter().copied())
                .unwrap()
                .hypergraph()
                .canonical_form()
                .unwrap()
        })
        .collect();
    assert_eq!(expected.len(), 6);
    let found: HashSet<Hypergraph> = SimpleGraph::all(4)
        .unwrap()
        .filter(|a| is_triangle_and_matching_free(&a.complement()))
        .map(|a| a.hypergraph().canonical_form().unwrap())
        .collect();
    assert_eq!(found, expected);
}

#[test]
fn chain_condition_matches_matching_freeness() {
    let p = [0, 1, 2, 3];
    let q = [4, 5, 6, 7];
    let mut chains = 0;
    for bits in 0u32..1 << 16 {
        let edges = (0..16)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| (p[i / 4], q[i % 4]));
        let b = SimpleGraph::from_edges(8, edges).unwrap();
        let chain = chain_neighborhoods(&b, &p, &q).unwrap();
        assert_eq!(chain, b.find_induced_matching().is_none(), "{bits:#06x}");
        // rows as nibbles: nested when sorted by size
        let mut rows: Vec<u32> = (0..4).map(|i| bits >> (4 * i) & 0xf).collect();
        rows.sort_by_key(|x| x.count_ones());
        assert_eq!(chain, rows.windows(2).all(|w| w[0] & !w[1] == 0));
        chains += u32::from(chain);
    }
    // sum_j (j!)^2 S(5, j+1)^2 over the shared levels
    assert_eq!(chains, 1 + 225 + 2500 + 3600 + 576);
}

#[test]
fn admissible_graphs_are_three_colourable() {
    for m in 2..=7 {
        for h in SimpleGraph::all(m)
            .unwrap()
            .filter(is_triangle_and_matching_free)
        {
            let classes = three_coloring_witness(&h).unwrap();
            let mut seen: Vec<usize> = classes.concat();
            seen.sort_unstable();
            assert_eq!(seen, (0..m).collect::<Vec<_>>());
            for class in &classes {
                for (i, &x) in class.iter().enumerate() {
                    assert!(class[..i].iter().all(|&y| !h.adjacent(x, y)));
                }
            }
        }
    }
}

#[test]
fn clique_family_is_the_whole_census() {
    let l = list(&[0, 2, 3]);
    for n in 5..=7 {
        let family: HashSet<u64> = clique_plus_isolated_family(n)
            .unwrap()
            .iter()
            .map(|g| g.to_bits().unwrap())
            .collect();
        assert_eq!(family.len(), n + 1);
        assert_eq!(family, census_set(n, &l), "n={n}");
    }
}

#[test]
fn greedy_trace_json_is_one_based() {
    let (_, trace) = greedy_partial_steiner(7, 3, Strategy::SeededRandom(5)).unwrap();
    let v = trace.to_json();
    assert_eq!(v["construction"], "partial_steiner");
    assert_eq!(v["strategy"], "seeded_random");
    assert_eq!(v["seed"], 5);
    assert_eq!(v["steps"], trace.steps());
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), trace.steps());
    for (e, orig) in edges.iter().zip(&trace.edges) {
        let e: Vec<usize> = e
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap() as usize)
            .collect();
        assert_eq!(e, orig.iter().map(|v| v + 1).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_families_keep_qn_free(n in 4usize..=12, seed in any::<u64>()) {
        let (family, _) = greedy_linear_transversal(n, Strategy::SeededRandom(seed)).unwrap();
        let g = qn_member(n, &family).unwrap();
        prop_assert!(is_lk_free(&g, &list(&[1, 4])).unwrap().free);
    }

    #[test]
    fn steiner_is_reproducible(n in 4usize..=14, r in 2usize..=4, seed in any::<u64>()) {
        prop_assume!(n >= r);
        let a = greedy_partial_steiner(n, r, Strategy::SeededRandom(seed)).unwrap();
        let b = greedy_partial_steiner(n, r, Strategy::SeededRandom(seed)).unwrap();
        prop_assert_eq!(&a.0, &b.0);
        prop_assert!(max_codegree(&a.0) <= 1);
    }
}
