#![allow(dead_code)]

use graphcanon::graph::{apply_permutation, gnp};
use graphcanon::{Graph, RngSeed};
use proptest::prelude::*;
use rand::seq::SliceRandom;

/// Random graphs with `lo..=hi` vertices and an edge probability drawn from
/// the whole unit interval, skewed towards sparse graphs.
pub fn graphs(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, x)| {
        let p = x * x;
        gnp(n, p, RngSeed::new(seed, 0)).unwrap()
    })
}

/// Sparse random graphs around the giant-component threshold.
pub fn sparse_graphs(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, any::<u64>(), 0.3f64..3.0).prop_map(|(n, seed, c)| {
        let p = (c / n as f64).min(1.0);
        gnp(n, p, RngSeed::new(seed, 0)).unwrap()
    })
}

pub fn random_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut RngSeed::new(seed, 7).rng());
    perm
}

pub fn relabel(g: &Graph, seed: u64) -> (Vec<usize>, Graph) {
    let perm = random_perm(g.n(), seed);
    let h = apply_permutation(g, &perm).unwrap();
    (perm, h)
}

/// Tries every bijection; only for tiny graphs.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.m() != h.m() {
        return false;
    }
    let n = g.n();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(g: &Graph, h: &Graph, v: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        if v == g.n() {
            return true;
        }
        for x in 0..g.n() {
            if used[x] || g.degree(v) != h.degree(x) {
                continue;
            }
            if (0..v).any(|u| g.has_edge(u, v) != h.has_edge(image[u], x)) {
                continue;
            }
            image[v] = x;
            used[x] = true;
            if go(g, h, v + 1, image, used) {
                return true;
            }
            used[x] = false;
        }
        false
    }
    go(g, h, 0, &mut image, &mut used)
}
