//! Brute-force isomorphism and a catalogue of all small graphs up to
//! isomorphism, independent of the labelling schemes under test.

use std::collections::HashMap;

use graphcanon::Graph;

/// Backtracking search for an isomorphism, vertex by vertex in id order,
/// pruned by degree and adjacency to already mapped vertices.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.m() != h.m() {
        return None;
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
    go(g, h, 0, &mut image, &mut used).then_some(image)
}

/// Cheap isomorphism invariant used to bucket candidates: sorted
/// (degree, sorted neighbour degrees, triangles through the vertex).
fn invariant(g: &Graph) -> Vec<(usize, Vec<usize>, usize)> {
    let mut out: Vec<_> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            let tri = g
                .neighbors(v)
                .map(|a| g.neighbors(v).filter(|&b| b > a && g.has_edge(a, b)).count())
                .sum();
            (g.degree(v), nd, tri)
        })
        .collect();
    out.sort_unstable();
    out
}

/// One representative of every isomorphism class of graphs on `n`
/// vertices, built by adding a vertex with every possible neighbourhood to
/// each class on `n - 1` vertices.
pub fn catalogue(n: usize) -> Vec<Graph> {
    let mut classes = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut buckets: HashMap<Vec<(usize, Vec<usize>, usize)>, Vec<Graph>> = HashMap::new();
        for base in &classes {
            let old: Vec<(usize, usize)> = base.edges().collect();
            for mask in 0u64..(1 << (k - 1)) {
                let mut edges = old.clone();
                edges.extend((0..k - 1).filter(|&i| mask >> i & 1 == 1).map(|i| (i, k - 1)));
                let g = Graph::from_edges(k, edges).expect("valid edges");
                let bucket = buckets.entry(invariant(&g)).or_default();
                if !bucket.iter().any(|r| find_isomorphism(r, &g).is_some()) {
                    bucket.push(g);
                }
            }
        }
        classes = buckets.into_values().flatten().collect();
        classes.sort_by_key(|g| (g.m(), g.edges().collect::<Vec<_>>()));
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalogue_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| catalogue(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn finds_mappings() {
        let g = Graph::cycle(5);
        let h = Graph::from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        let f = find_isomorphism(&g, &h).unwrap();
        assert!(g.edges().all(|(u, v)| h.has_edge(f[u], f[v])));
        assert!(find_isomorphism(&Graph::cycle(6), &Graph::disjoint_copies(&Graph::cycle(3), 2)).is_none());
    }
}
