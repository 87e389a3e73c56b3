mod common;

use common::{graphs, relabel};
use graphcanon::disparity::{generalised_disparity, MajoritySpec};
use graphcanon::graph::bfs_distances;
use graphcanon::refinement::{is_equitable, is_refinement, stable};
use graphcanon::wl2::{init_pair_colouring, vertex_projection, wl2_stable, wl2_vertex_colouring, PairColouring};
use graphcanon::{Colouring, RngSeed};
use proptest::prelude::*;
use rand::Rng;

fn random_colouring(n: usize, seed: u64) -> Colouring {
    let mut rng = RngSeed::new(seed, 21).rng();
    let k = rng.gen_range(1..=3u32);
    let ids: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Colouring::from_ids(&ids)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn projection_refines_colour_refinement(g in graphs(1, 48), seed in any::<u64>()) {
        let c = random_colouring(g.n(), seed);
        let proj = wl2_vertex_colouring(&g, &c).unwrap();
        let (s, _) = stable(&g, &c).unwrap();
        prop_assert!(is_refinement(&proj, &s).unwrap());
        prop_assert!(is_equitable(&g, &proj));
    }

    #[test]
    fn stable_pair_colouring_is_a_fixed_point(g in graphs(1, 24)) {
        let f = wl2_stable(&g, &init_pair_colouring(&g, &Colouring::trivial(g.n())).unwrap()).unwrap();
        let again = wl2_stable(&g, &f).unwrap();
        prop_assert!(again.same_partition(&f));
    }

    #[test]
    fn coarsenings_restabilise_coarser(g in graphs(1, 24), seed in any::<u64>()) {
        let f = wl2_stable(&g, &init_pair_colouring(&g, &Colouring::trivial(g.n())).unwrap()).unwrap();
        let mut rng = RngSeed::new(seed, 22).rng();
        let buckets = rng.gen_range(1..=f.k()) as u64;
        let to: Vec<u64> = (0..f.k()).map(|_| rng.gen_range(0..buckets)).collect();
        let table: Vec<u64> = f.table().iter().map(|&x| to[x as usize]).collect();
        let coarse = PairColouring::from_table(g.n(), &table).unwrap();
        let restab = wl2_stable(&g, &coarse).unwrap();
        prop_assert!(f.refines(&restab));
        prop_assert!(restab.refines(&coarse));
    }

    #[test]
    fn same_colour_same_distance_profile(g in graphs(1, 48), seed in any::<u64>()) {
        let c = random_colouring(g.n(), seed);
        let proj = wl2_vertex_colouring(&g, &c).unwrap();
        let mut rng = RngSeed::new(seed, 23).rng();
        let bias: f64 = rng.gen();
        let l = MajoritySpec::from_fn(proj.k(), |_, _| rng.gen_bool(bias));
        let d = generalised_disparity(&g, &proj, &l).unwrap();
        let profile = |v: usize| {
            let mut p: Vec<(usize, u32)> = bfs_distances(&d, v)
                .unwrap()
                .iter()
                .enumerate()
                .filter_map(|(w, dist)| dist.map(|x| (x, proj.colour(w))))
                .collect();
            p.sort_unstable();
            p
        };
        let profiles: Vec<_> = (0..g.n()).map(profile).collect();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if proj.colour(u) == proj.colour(v) {
                    prop_assert_eq!(&profiles[u], &profiles[v]);
                }
            }
        }
    }

    #[test]
    fn pair_ids_survive_relabelling(g in graphs(1, 32), seed in any::<u64>()) {
        let (perm, h) = relabel(&g, seed);
        let run = |x| wl2_stable(x, &init_pair_colouring(x, &Colouring::trivial(g.n())).unwrap()).unwrap();
        let (a, b) = (run(&g), run(&h));
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(a.get(u, v), b.get(perm[u], perm[v]));
            }
        }
        prop_assert_eq!(vertex_projection(&a).ids().len(), g.n());
    }
}
