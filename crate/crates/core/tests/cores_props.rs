mod common;

use common::{graphs, sparse_graphs};
use graphcanon::cores::{core_categories, decompose, kcore};
use graphcanon::graph::{components, gnp};
use graphcanon::refinement::stable_colouring;
use graphcanon::{Graph, RngSeed};
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Repeatedly deletes vertices of degree below `k`.
fn naive_core(g: &Graph, k: usize) -> Vec<usize> {
    let mut alive = vec![true; g.n()];
    loop {
        let drop: Vec<usize> = (0..g.n())
            .filter(|&v| alive[v] && g.neighbors(v).filter(|&w| alive[w]).count() < k)
            .collect();
        if drop.is_empty() {
            return (0..g.n()).filter(|&v| alive[v]).collect();
        }
        for v in drop {
            alive[v] = false;
        }
    }
}

fn brute_safe(g: &Graph, v23: &[usize], v: usize) -> bool {
    let n = g.n();
    let branch: BTreeSet<usize> = v23.iter().copied().collect();
    for x in 0..n {
        for y in x..n {
            if x == v || y == v {
                continue;
            }
            let mut removed = vec![false; n];
            removed[x] = true;
            removed[y] = true;
            let h = g.isolate_vertices(&removed);
            let comp = components(&h).into_iter().find(|c| c.contains(&v)).unwrap();
            if comp.iter().filter(|w| branch.contains(w)).count() < 3 {
                return false;
            }
        }
    }
    true
}

fn edge_set(edges: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = edges.map(|(a, b)| (a.min(b), a.max(b))).collect();
    e.sort_unstable();
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn peeling_matches_naive_deletion(g in graphs(0, 80), k in 1usize..6) {
        let core = kcore(&g, k);
        prop_assert_eq!(&core, &naive_core(&g, k));
        let inside: BTreeSet<usize> = core.iter().copied().collect();
        for &v in &core {
            prop_assert!(g.neighbors(v).filter(|w| inside.contains(w)).count() >= k);
        }
    }

    #[test]
    fn cores_grow_with_edges(g in graphs(1, 60), seed in any::<u64>(), k in 1usize..5) {
        let extra = gnp(g.n(), 0.05, RngSeed::new(seed, 1)).unwrap();
        let mut all = edge_set(g.edges().chain(extra.edges()));
        all.dedup();
        let union = Graph::from_edges(g.n(), all).unwrap();
        let big: BTreeSet<usize> = kcore(&union, k).into_iter().collect();
        prop_assert!(kcore(&g, k).iter().all(|v| big.contains(v)));
    }

    #[test]
    fn colour_classes_respect_core_categories(g in sparse_graphs(1, 128)) {
        let c = stable_colouring(&g);
        let cat = core_categories(&g);
        for class in c.classes() {
            prop_assert!(class.iter().all(|&v| cat[v] == cat[class[0]]));
        }
    }

    #[test]
    fn bare_paths_rebuild_the_two_core(g in sparse_graphs(1, 120)) {
        let dec = decompose(&g);
        let core: BTreeSet<usize> = dec.v2.iter().copied().collect();
        let core_edges = edge_set(g.edges().filter(|(a, b)| core.contains(a) && core.contains(b)));
        let mut rebuilt = Vec::new();
        for p in &dec.bare_paths {
            for w in p.windows(2) {
                rebuilt.push((w[0], w[1]));
            }
            let inner = &p[1..p.len() - 1];
            prop_assert!(inner.iter().all(|v| dec.v23.binary_search(v).is_err()));
            prop_assert!(dec.v23.binary_search(&p[0]).is_ok());
            prop_assert!(dec.v23.binary_search(p.last().unwrap()).is_ok());
        }
        for c in &dec.cycles {
            for i in 0..c.len() {
                rebuilt.push((c[i], c[(i + 1) % c.len()]));
            }
        }
        let rebuilt_len = rebuilt.len();
        let rebuilt = edge_set(rebuilt.into_iter());
        prop_assert_eq!(rebuilt_len, rebuilt.len(), "an edge is used twice");
        prop_assert_eq!(&rebuilt, &core_edges);
        prop_assert_eq!(dec.kernel.n, dec.v23.len());
        prop_assert_eq!(dec.kernel.edges.len(), dec.bare_paths.len());
        for (e, p) in dec.kernel.edges.iter().zip(&dec.bare_paths) {
            let ends = (dec.v23[e.0], dec.v23[e.1]);
            let (a, b) = (p[0], *p.last().unwrap());
            prop_assert_eq!(ends, (a.min(b), a.max(b)));
        }
        for (i, &v) in dec.v23.iter().enumerate() {
            let core_deg = g.neighbors(v).filter(|w| core.contains(w)).count();
            prop_assert_eq!(dec.kernel.degree(i), core_deg);
            prop_assert!(core_deg >= 3);
        }
    }

    #[test]
    fn safe_set_matches_deletion_test(g in sparse_graphs(4, 16)) {
        let dec = decompose(&g);
        let brute: Vec<usize> = dec.v23.iter().copied().filter(|&v| brute_safe(&g, &dec.v23, v)).collect();
        prop_assert_eq!(&dec.v23_safe, &brute);
    }
}

#[test]
fn safe_set_on_denser_graphs() {
    for seed in 0..40 {
        let g = gnp(12, 0.35, RngSeed::new(seed, 9)).unwrap();
        let dec = decompose(&g);
        let brute: Vec<usize> = dec.v23.iter().copied().filter(|&v| brute_safe(&g, &dec.v23, v)).collect();
        assert_eq!(dec.v23_safe, brute, "seed {seed}");
    }
}
