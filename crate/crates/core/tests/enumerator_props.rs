use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use hypercensus_core::bounds::linkgraph_bound;
use hypercensus_core::enumerator::{
    count_iso_classes, count_labeled, enumerate_free, extension_set, max_d, DMode, Method,
    SearchOptions,
};
use hypercensus_core::freeness::{is_lk_free, ForbiddenList};
use hypercensus_core::subset::{binomial, colex_rank, ColexSubsets};
use hypercensus_core::Hypergraph;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Plain 2^slots scan: for each 4-set, the ranks of its 3-subsets.
struct Oracle {
    n: usize,
    slots: usize,
    quads: Vec<[u64; 4]>,
    list: ForbiddenList,
}

impl Oracle {
    fn new(n: usize, list: &ForbiddenList) -> Self {
        let quads = ColexSubsets::new(n, 4)
            .map(|s| {
                let mut q = [0; 4];
                for (i, t) in ColexSubsets::new(4, 3).enumerate() {
                    q[i] = colex_rank(&[s[t[0]], s[t[1]], s[t[2]]]);
                }
                q
            })
            .collect();
        Oracle {
            n,
            slots: binomial(n, 3) as usize,
            quads,
            list: list.clone(),
        }
    }

    fn free(&self, m: u64) -> bool {
        self.quads.iter().all(|q| {
            let c = q.iter().filter(|&&x| m >> x & 1 == 1).count();
            !self.list.contains(c)
        })
    }

    fn census(&self) -> u64 {
        (0u64..1 << self.slots).filter(|&m| self.free(m)).count() as u64
    }

    /// Largest class of free masks that agree off the triples containing
    /// `0..a`.
    fn d(&self, a: usize) -> u64 {
        let inside: u64 = ColexSubsets::new(self.n, 3)
            .filter(|s| (0..a).all(|v| s.contains(&v)))
            .fold(0, |acc, s| acc | 1 << colex_rank(&s));
        let mut groups: HashMap<u64, u64> = HashMap::new();
        for m in 0u64..1 << self.slots {
            if self.free(m) {
                *groups.entry(m & !inside).or_default() += 1;
            }
        }
        groups.into_values().max().unwrap_or(0)
    }
}

fn list14() -> ForbiddenList {
    ForbiddenList::new(4, 3, [1, 4]).unwrap()
}

fn labeled(n: usize, list: &ForbiddenList, opts: &SearchOptions) -> BigUint {
    count_labeled(n, 3, 4, list, opts).unwrap().labeled_count
}

fn d_exact(a: usize, n: usize, list: &ForbiddenList) -> u64 {
    max_d(a, n, list, DMode::Exhaustive, &SearchOptions::default())
        .unwrap()
        .value
}

// Values produced by the brute-force oracle above and frozen here.
const D_2_5: u64 = 4;
const D_1_5: u64 = 17;
const D_1_6: u64 = 52;
const D_2_6: u64 = 5;

#[test]
fn backtracking_matches_exhaustive_for_every_list() {
    let exhaustive = SearchOptions {
        method: Method::Exhaustive,
        ..SearchOptions::default()
    };
    for list in ForbiddenList::all(4, 3).unwrap() {
        let a = labeled(5, &list, &SearchOptions::default());
        let b = labeled(5, &list, &exhaustive);
        let c = Oracle::new(5, &list).census();
        assert_eq!(a, b, "{list}");
        assert_eq!(a, BigUint::from(c), "{list}");
    }
}

#[test]
fn complement_lists_have_equal_counts() {
    let opts = SearchOptions::default();
    for n in 4..=6 {
        for list in ForbiddenList::all(4, 3).unwrap() {
            assert_eq!(
                labeled(n, &list, &opts),
                labeled(n, &list.complement(), &opts),
                "n={n} {list}"
            );
        }
    }
}

#[test]
fn larger_lists_allow_fewer_graphs() {
    let opts = SearchOptions::default();
    let all = ForbiddenList::all(4, 3).unwrap();
    let counts: Vec<BigUint> = all.iter().map(|l| labeled(5, l, &opts)).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            if a.is_subset_of(b) {
                assert!(counts[i] >= counts[j], "{a} vs {b}");
            }
        }
    }
}

#[test]
fn enumeration_agrees_with_count() {
    let opts = SearchOptions::default();
    for members in [&[1, 4][..], &[0, 1, 3], &[2], &[3, 4]] {
        let list = ForbiddenList::new(4, 3, members.iter().copied()).unwrap();
        let mut seen = HashSet::new();
        let mut visits = 0u64;
        let total = enumerate_free(6, 3, 4, &list, &opts, |h| {
            // spot-check roughly one graph in a hundred
            if visits.is_multiple_of(97) {
                assert!(is_lk_free(h, &list).unwrap().free);
            }
            visits += 1;
            seen.insert(h.to_bits().unwrap());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(total, visits);
        assert_eq!(seen.len() as u64, total);
        assert_eq!(BigUint::from(total), labeled(6, &list, &opts), "{list}");
    }
}

#[test]
fn iso_counts_are_consistent_with_labeled_counts() {
    let opts = SearchOptions::default();
    for list in ForbiddenList::all(4, 3).unwrap() {
        let report = count_iso_classes(5, 3, 4, &list, &opts).unwrap();
        let iso = BigUint::from(report.iso_count.unwrap());
        assert!(report.labeled_count >= iso, "{list}");
        assert!(report.labeled_count <= iso * 120u32, "{list}");
    }
}

#[test]
fn iso_counts_match_orbit_oracle() {
    // orbits of free masks under all relabelings of [5]
    let perms: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut p: Vec<usize> = (0..5).collect();
        permute(&mut p, 0, &mut out);
        out
    };
    for members in [&[1, 4][..], &[2], &[0, 3], &[]] {
        let list = ForbiddenList::new(4, 3, members.iter().copied()).unwrap();
        let oracle = Oracle::new(5, &list);
        let mut orbits = HashSet::new();
        for m in (0u64..1 << oracle.slots).filter(|&m| oracle.free(m)) {
            let g = Hypergraph::from_bits(5, 3, m).unwrap();
            let rep = perms
                .iter()
                .map(|p| g.relabel(p).unwrap().to_bits().unwrap())
                .min()
                .unwrap();
            orbits.insert(rep);
        }
        let report = count_iso_classes(5, 3, 4, &list, &SearchOptions::default()).unwrap();
        assert_eq!(report.iso_count, Some(orbits.len() as u64), "{list}");
    }
}

fn permute(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == p.len() {
        out.push(p.clone());
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, out);
        p.swap(i, j);
    }
}

#[test]
fn d_values_match_oracle() {
    let list = list14();
    assert_eq!(Oracle::new(5, &list).d(2), D_2_5);
    assert_eq!(Oracle::new(5, &list).d(1), D_1_5);
    assert_eq!(Oracle::new(6, &list).d(1), D_1_6);
    assert_eq!(Oracle::new(6, &list).d(2), D_2_6);
    assert_eq!(d_exact(2, 5, &list), D_2_5);
    let link = linkgraph_bound(5, 4).unwrap();
    assert!(link.admits((D_2_5 as f64).log2()));
    assert_eq!(d_exact(1, 5, &list), D_1_5);
    assert_eq!(d_exact(1, 6, &list), D_1_6);
    assert_eq!(d_exact(2, 6, &list), D_2_6);
}

#[test]
fn d_matches_oracle_for_other_lists() {
    for members in [&[2][..], &[0, 2, 3], &[1, 3], &[3, 4], &[]] {
        let list = ForbiddenList::new(4, 3, members.iter().copied()).unwrap();
        let oracle = Oracle::new(5, &list);
        for a in [1, 2] {
            assert_eq!(d_exact(a, 5, &list), oracle.d(a), "{list} a={a}");
        }
    }
}

#[test]
fn d_telescopes() {
    let list = list14();
    for n in [5, 6] {
        let product: u64 = (3..=n).map(|v| d_exact(2, v, &list)).product();
        assert!(d_exact(1, n, &list) <= product, "n={n}");
    }
}

#[test]
fn census_grows_by_at_most_d() {
    let list = list14();
    let opts = SearchOptions::default();
    for n in [5, 6] {
        let step = BigUint::from(d_exact(1, n, &list)) * labeled(n - 1, &list, &opts);
        assert!(labeled(n, &list, &opts) <= step, "n={n}");
    }
}

#[test]
fn extension_members_are_free_and_agree_off_positions() {
    let list = list14();
    let mut anchors = Vec::new();
    enumerate_free(6, 3, 4, &list, &SearchOptions::default(), |h| {
        anchors.push(h.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    for h in anchors.iter().step_by(7) {
        let ext = extension_set(&[0], h, &list).unwrap();
        assert!(!ext.is_empty());
        for i in 0..ext.len() {
            let g = ext.member(i);
            assert!(is_lk_free(&g, &list).unwrap().free);
            for e in ColexSubsets::new(6, 3).filter(|s| s[0] != 0) {
                assert_eq!(g.contains(&e), h.contains(&e));
            }
        }
    }
}

#[test]
fn sampled_d_is_a_deterministic_lower_bound() {
    let list = list14();
    let exact = d_exact(1, 6, &list);
    let mode = DMode::Sample {
        seed: 11,
        samples: 40,
    };
    let a = max_d(1, 6, &list, mode, &SearchOptions::default()).unwrap();
    let b = max_d(1, 6, &list, mode, &SearchOptions::default()).unwrap();
    assert!(!a.exact);
    assert!(a.value <= exact);
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_results() {
    for members in [&[1, 4][..], &[0, 1, 3], &[]] {
        let list = ForbiddenList::new(4, 3, members.iter().copied()).unwrap();
        let one = labeled(6, &list, &SearchOptions::default());
        let many = SearchOptions {
            threads: 4,
            ..SearchOptions::default()
        };
        assert_eq!(one, labeled(6, &list, &many), "{list}");
        let iso1 = count_iso_classes(6, 3, 4, &list, &SearchOptions::default()).unwrap();
        let iso4 = count_iso_classes(6, 3, 4, &list, &many).unwrap();
        assert_eq!(iso1.iso_count, iso4.iso_count);
        let d1 = max_d(1, 6, &list, DMode::Exhaustive, &SearchOptions::default()).unwrap();
        let d4 = max_d(1, 6, &list, DMode::Exhaustive, &many).unwrap();
        assert_eq!(d1.value, d4.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_lists_match_oracle(mask in 0u32..32, n in 4usize..=5) {
        let list = ForbiddenList::new(4, 3, (0..5).filter(|i| mask >> i & 1 == 1)).unwrap();
        let got = labeled(n, &list, &SearchOptions::default());
        prop_assert_eq!(got, BigUint::from(Oracle::new(n, &list).census()));
    }

    #[test]
    fn graph_level_duality(bits in 0u64..1 << 10, mask in 0u32..32) {
        let list = ForbiddenList::new(4, 3, (0..5).filter(|i| mask >> i & 1 == 1)).unwrap();
        let g = Hypergraph::from_bits(5, 3, bits).unwrap();
        prop_assert_eq!(
            is_lk_free(&g, &list).unwrap().free,
            is_lk_free(&g.complement(), &list.complement()).unwrap().free
        );
    }
}
