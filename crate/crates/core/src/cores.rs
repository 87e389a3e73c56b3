//! k-cores, the structure of the 2-core, and the vertex classes derived
//! from it.

use std::collections::VecDeque;

use crate::graph::{Graph, Multigraph};

/// Largest `k` with `v` in the k-core, per vertex. Bucket peeling, O(n + m).
pub fn coreness(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; maxd + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 0..=maxd {
        bin[d + 1] += bin[d];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    {
        let mut fill = bin.clone();
        for v in 0..n {
            pos[v] = fill[deg[v]];
            vert[pos[v]] = v;
            fill[deg[v]] += 1;
        }
    }
    // bin[d] is now the first position of degree-d vertices.
    for i in 0..n {
        let v = vert[i];
        for u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg
}

/// Vertices of the k-core, ascending.
pub fn kcore(g: &Graph, k: usize) -> Vec<usize> {
    coreness(g)
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c >= k)
        .map(|(v, _)| v)
        .collect()
}

/// Where a vertex sits relative to the 2-core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreCategory {
    OutsideCore,
    CoreDegreeTwo,
    /// In the 2-core with at least three neighbours there.
    Branch,
}

/// Category of every vertex.
pub fn core_categories(g: &Graph) -> Vec<CoreCategory> {
    let cn = coreness(g);
    (0..g.n())
        .map(|v| {
            if cn[v] < 2 {
                CoreCategory::OutsideCore
            } else if g.neighbors(v).filter(|&w| cn[w] >= 2).count() >= 3 {
                CoreCategory::Branch
            } else {
                CoreCategory::CoreDegreeTwo
            }
        })
        .collect()
}

pub fn core_category(g: &Graph, v: usize) -> CoreCategory {
    core_categories(g)[v]
}

/// The 2-core taken apart.
///
/// `bare_paths[i]` runs between two branch vertices (possibly the same one)
/// through core vertices of degree two, and is the preimage of kernel edge
/// `i`. Components of the 2-core without branch vertices are cycles and are
/// listed in `cycles` instead of as kernel loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub coreness: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    /// Branch vertices, ascending.
    pub v23: Vec<usize>,
    pub v23_safe: Vec<usize>,
    pub bare_paths: Vec<Vec<usize>>,
    /// Each cycle starts at its smallest vertex and continues towards the
    /// smaller of that vertex's two neighbours.
    pub cycles: Vec<Vec<usize>>,
    /// Vertex `i` is `v23[i]`.
    pub kernel: Multigraph,
}

impl CoreDecomposition {
    pub fn in_core(&self, v: usize) -> bool {
        self.coreness[v] >= 2
    }
}

pub fn decompose(g: &Graph) -> CoreDecomposition {
    let n = g.n();
    let coreness = coreness(g);
    let in_core = |v: usize| coreness[v] >= 2;
    let core_deg: Vec<usize> = (0..n)
        .map(|v| {
            if in_core(v) {
                g.neighbors(v).filter(|&w| in_core(w)).count()
            } else {
                0
            }
        })
        .collect();
    let v2: Vec<usize> = (0..n).filter(|&v| in_core(v)).collect();
    let v3: Vec<usize> = (0..n).filter(|&v| coreness[v] >= 3).collect();
    let v23: Vec<usize> = v2.iter().copied().filter(|&v| core_deg[v] >= 3).collect();
    let mut branch_index = vec![usize::MAX; n];
    for (i, &v) in v23.iter().enumerate() {
        branch_index[v] = i;
    }

    let mut kernel = Multigraph::new(v23.len());
    let mut bare_paths = Vec::new();
    let mut used = vec![false; n];
    for &a in &v23 {
        for b in g.neighbors(a).filter(|&w| in_core(w)) {
            if branch_index[b] != usize::MAX {
                if a < b {
                    bare_paths.push(vec![a, b]);
                    kernel.add_edge(branch_index[a], branch_index[b]);
                }
                continue;
            }
            if used[b] {
                continue;
            }
            let mut path = vec![a, b];
            used[b] = true;
            let (mut prev, mut cur) = (a, b);
            loop {
                let next = g
                    .neighbors(cur)
                    .find(|&w| in_core(w) && w != prev)
                    .expect("degree-two core vertex has a second core neighbour");
                path.push(next);
                if branch_index[next] != usize::MAX {
                    break;
                }
                used[next] = true;
                prev = cur;
                cur = next;
            }
            let end = *path.last().unwrap();
            kernel.add_edge(branch_index[a], branch_index[end]);
            bare_paths.push(path);
        }
    }

    let mut cycles = Vec::new();
    for &s in &v2 {
        if used[s] || branch_index[s] != usize::MAX {
            continue;
        }
        let mut cyc = vec![s];
        used[s] = true;
        let mut prev = s;
        let mut cur = g.neighbors(s).find(|&w| in_core(w)).unwrap();
        while cur != s {
            cyc.push(cur);
            used[cur] = true;
            let next = g.neighbors(cur).find(|&w| in_core(w) && w != prev).unwrap();
            prev = cur;
            cur = next;
        }
        cycles.push(cyc);
    }

    let is_branch: Vec<bool> = (0..n).map(|v| branch_index[v] != usize::MAX).collect();
    let v23_safe = v23
        .iter()
        .copied()
        .filter(|&v| is_safe(g, &coreness, &is_branch, v))
        .collect();

    CoreDecomposition {
        coreness,
        v2,
        v3,
        v23,
        v23_safe,
        bare_paths,
        cycles,
        kernel,
    }
}

/// Breadth-first search from `v` inside the 2-core avoiding `deleted`,
/// stopping as soon as three branch vertices (counting `v`) have been seen.
/// Returns whether it got there, and every vertex it saw.
fn reaches_three(
    g: &Graph,
    coreness: &[usize],
    is_branch: &[bool],
    v: usize,
    deleted: &[usize],
    seen: &mut Vec<usize>,
    mark: &mut [bool],
) -> bool {
    seen.clear();
    seen.push(v);
    mark[v] = true;
    let mut found = 1;
    let mut queue = VecDeque::from([v]);
    let mut ok = false;
    'outer: while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if mark[y] || coreness[y] < 2 || deleted.contains(&y) {
                continue;
            }
            mark[y] = true;
            seen.push(y);
            if is_branch[y] {
                found += 1;
                if found >= 3 {
                    ok = true;
                    break 'outer;
                }
            }
            queue.push_back(y);
        }
    }
    for &x in seen.iter() {
        mark[x] = false;
    }
    ok
}

/// Whether every deletion of two vertices other than `v` leaves at least
/// three branch vertices in the component of `v`.
///
/// A deleted vertex the search never saw cannot change the search, so it is
/// enough to try deleting a vertex seen by the unrestricted search and then a
/// vertex seen by the search with that one deleted. Components are measured
/// in the 2-core: a simple path between two 2-core vertices never leaves it.
fn is_safe(g: &Graph, coreness: &[usize], is_branch: &[bool], v: usize) -> bool {
    let mut mark = vec![false; g.n()];
    let mut seen0 = Vec::new();
    let mut seen1 = Vec::new();
    let mut seen2 = Vec::new();
    if !reaches_three(g, coreness, is_branch, v, &[], &mut seen0, &mut mark) {
        return false;
    }
    for &a in seen0.iter().filter(|&&a| a != v) {
        if !reaches_three(g, coreness, is_branch, v, &[a], &mut seen1, &mut mark) {
            return false;
        }
        for &b in seen1.iter().filter(|&&b| b != v) {
            if !reaches_three(g, coreness, is_branch, v, &[a, b], &mut seen2, &mut mark) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{components, gnp, RngSeed};

    fn seven_vertex() -> Graph {
        Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (4, 6)]).unwrap()
    }

    /// Definition-level check: delete every pair, count branch vertices in
    /// the component of `v` in the whole graph.
    fn brute_safe(g: &Graph, v23: &[usize], v: usize) -> bool {
        let n = g.n();
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
                if comp.iter().filter(|w| v23.contains(w)).count() < 3 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn kcore_examples() {
        assert!(kcore(&Graph::path(5), 2).is_empty());
        assert_eq!(kcore(&Graph::complete(4), 3), vec![0, 1, 2, 3]);
        assert_eq!(kcore(&seven_vertex(), 2), vec![0, 1, 2, 3]);
        assert_eq!(coreness(&Graph::petersen()), vec![3; 10]);
    }

    #[test]
    fn categories() {
        let g = seven_vertex();
        assert_eq!(core_category(&g, 5), CoreCategory::OutsideCore);
        assert_eq!(core_category(&g, 1), CoreCategory::CoreDegreeTwo);
        assert_eq!(core_category(&Graph::complete(4), 2), CoreCategory::Branch);
    }

    #[test]
    fn seven_vertex_decomposition() {
        let d = decompose(&seven_vertex());
        assert!(d.v23.is_empty());
        assert_eq!(d.cycles, vec![vec![0, 1, 2, 3]]);
        assert!(d.bare_paths.is_empty());
    }

    #[test]
    fn safe_sets_of_complete_graphs() {
        assert!(decompose(&Graph::complete(4)).v23_safe.is_empty());
        assert_eq!(decompose(&Graph::complete(5)).v23_safe, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn theta_graph_paths() {
        // Two branch vertices joined by three paths of lengths 1, 2, 3.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1)]).unwrap();
        let d = decompose(&g);
        assert_eq!(d.v23, vec![0, 1]);
        assert_eq!(d.bare_paths.len(), 3);
        assert_eq!(d.kernel.multiplicity(0, 1), 3);
        let mut lens: Vec<usize> = d.bare_paths.iter().map(Vec::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 3, 4]);
    }

    #[test]
    fn closed_path_is_a_loop() {
        // K4 with a pendant triangle hanging off vertex 0 through 4-5.
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 5), (5, 0)]).unwrap();
        let d = decompose(&g);
        assert_eq!(d.v23, vec![0, 1, 2, 3]);
        assert_eq!(d.kernel.loop_count(), 1);
        assert!(d.bare_paths.contains(&vec![0, 4, 5, 0]));
        assert_eq!(d.bare_paths.len(), 7);
    }

    #[test]
    fn safe_matches_brute_force() {
        for t in 0..60u64 {
            let n = 8 + (t as usize % 30);
            let c = [1.5, 2.5, 3.5][t as usize % 3];
            let g = gnp(n, c / n as f64, RngSeed::new(t, 77)).unwrap();
            let d = decompose(&g);
            for &v in &d.v23 {
                assert_eq!(d.v23_safe.contains(&v), brute_safe(&g, &d.v23, v), "seed {t} v {v}");
            }
        }
    }
}
