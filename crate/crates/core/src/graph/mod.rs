//! Simple undirected graphs on dense vertex ids, plus the multigraph used for
//! kernels of 2-cores.
//!
//! Adjacency is stored in compressed sparse row form with `u32` neighbour ids,
//! each row strictly increasing. Every constructor goes through
//! [`Graph::from_sorted_rows`], which checks the invariants in debug builds.

mod gen;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

pub use gen::{gnp, RngSeed};

use crate::error::GraphError;

/// A simple undirected graph with vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(GraphError::TooLarge { n });
        }
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            rows[u].push(v as u32);
            rows[v].push(u as u32);
        }
        for (u, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        Ok(Self::from_sorted_rows(rows))
    }

    /// Builds a graph from per-vertex neighbour lists that are already
    /// strictly sorted and symmetric.
    pub(crate) fn from_sorted_rows(rows: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total: usize = rows.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for row in rows {
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        let g = Graph { offsets, targets };
        debug_assert!(g.check_invariants().is_ok(), "{:?}", g.check_invariants());
        g
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let rows = (0..n)
            .map(|v| (0..n as u32).filter(|&w| w as usize != v).collect())
            .collect();
        Self::from_sorted_rows(rows)
    }

    /// The path on `n` vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::from_edges(a + b, edges).expect("bipartite edges are valid")
    }

    /// The Petersen graph.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, edges).expect("petersen edges are valid")
    }

    /// Disjoint union of `copies` copies of `g`, copy `i` occupying ids
    /// `i*n..(i+1)*n`.
    pub fn disjoint_copies(g: &Graph, copies: usize) -> Self {
        let parts = vec![g.clone(); copies];
        Self::disjoint_union(&parts)
    }

    /// Disjoint union, vertices of `parts[i]` shifted past all earlier parts.
    pub fn disjoint_union(parts: &[Graph]) -> Self {
        let mut rows = Vec::with_capacity(parts.iter().map(Graph::n).sum());
        let mut shift = 0u32;
        for part in parts {
            for v in 0..part.n() {
                rows.push(part.adj(v).iter().map(|&w| w + shift).collect());
            }
            shift += part.n() as u32;
        }
        Self::from_sorted_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbour ids of `v`.
    #[inline]
    pub fn adj(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj(v).iter().map(|&w| w as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adj(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// Verifies the representation invariants: sorted rows, no loops,
    /// symmetry, and in-range ids.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n();
        if self.targets.len() % 2 != 0 {
            return Err("odd number of adjacency entries".into());
        }
        // Visiting v in increasing order, the smaller neighbours of each w
        // must turn up in exactly the order of w's sorted row prefix.
        let mut cursor = vec![0usize; n];
        for v in 0..n {
            let row = self.adj(v);
            for w in row.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("row {v} not strictly sorted"));
                }
            }
            for &w in row {
                let w = w as usize;
                if w >= n {
                    return Err(format!("neighbour {w} of {v} out of range"));
                }
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if w > v {
                    if self.adj(w).get(cursor[w]) != Some(&(v as u32)) {
                        return Err(format!("edge {v}-{w} not symmetric"));
                    }
                    cursor[w] += 1;
                }
            }
        }
        for w in 0..n {
            if self.adj(w).get(cursor[w]).is_some_and(|&x| (x as usize) < w) {
                return Err(format!("edge {}-{w} not symmetric", self.adj(w)[cursor[w]]));
            }
        }
        Ok(())
    }

    /// The complement graph.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let rows = (0..n)
            .map(|v| {
                let row = self.adj(v);
                let mut j = 0;
                let mut out = Vec::with_capacity(n - 1 - row.len());
                for w in 0..n as u32 {
                    if j < row.len() && row[j] == w {
                        j += 1;
                    } else if w as usize != v {
                        out.push(w);
                    }
                }
                out
            })
            .collect();
        Graph::from_sorted_rows(rows)
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let rows = vertices
            .iter()
            .map(|&v| {
                let mut row: Vec<u32> = self
                    .adj(v)
                    .iter()
                    .map(|&w| index[w as usize])
                    .filter(|&i| i != u32::MAX)
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Graph::from_sorted_rows(rows)
    }

    /// Copy of the graph with every edge incident to a vertex in `removed`
    /// deleted (the vertices themselves stay, isolated).
    pub fn isolate_vertices(&self, removed: &[bool]) -> Graph {
        let rows = (0..self.n())
            .map(|v| {
                if removed[v] {
                    Vec::new()
                } else {
                    self.adj(v)
                        .iter()
                        .copied()
                        .filter(|&w| !removed[w as usize])
                        .collect()
                }
            })
            .collect();
        Graph::from_sorted_rows(rows)
    }
}

/// Graph whose edge set is the symmetric difference of the two inputs.
pub fn sym_diff(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    if g.n() != h.n() {
        return Err(GraphError::VertexCountMismatch {
            left: g.n(),
            right: h.n(),
        });
    }
    let rows = (0..g.n())
        .map(|v| {
            let (a, b) = (g.adj(v), h.adj(v));
            let (mut i, mut j) = (0, 0);
            let mut out = Vec::with_capacity(a.len() + b.len());
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => {
                        out.push(a[i]);
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        out.push(b[j]);
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                }
            }
            out.extend_from_slice(&a[i..]);
            out.extend_from_slice(&b[j..]);
            out
        })
        .collect();
    Ok(Graph::from_sorted_rows(rows))
}

/// Connected components, each sorted ascending; components ordered by their
/// smallest vertex.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Component index per vertex, numbered as in [`components`].
pub fn component_ids(g: &Graph) -> Vec<usize> {
    let mut id = vec![0; g.n()];
    for (i, comp) in components(g).iter().enumerate() {
        for &v in comp {
            id[v] = i;
        }
    }
    id
}

/// Hop distances from `src`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, src: usize) -> Result<Vec<Option<usize>>, GraphError> {
    if src >= g.n() {
        return Err(GraphError::VertexOutOfRange { v: src, n: g.n() });
    }
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap() + 1;
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Checks that `perm` is a bijection on `0..n`.
pub fn check_permutation(perm: &[usize], n: usize) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::NotAPermutation(format!(
            "length {} for {n} vertices",
            perm.len()
        )));
    }
    let mut hit = vec![false; n];
    for &p in perm {
        if p >= n || hit[p] {
            return Err(GraphError::NotAPermutation(format!("image {p} repeated or out of range")));
        }
        hit[p] = true;
    }
    Ok(())
}

/// Inverse of a permutation given as an image array.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    inv
}

/// The graph with vertex `v` renamed to `perm[v]`.
pub fn apply_permutation(g: &Graph, perm: &[usize]) -> Result<Graph, GraphError> {
    check_permutation(perm, g.n())?;
    let inv = invert_permutation(perm);
    let rows = (0..g.n())
        .map(|new_v| {
            let mut row: Vec<u32> = g.adj(inv[new_v]).iter().map(|&w| perm[w as usize] as u32).collect();
            row.sort_unstable();
            row
        })
        .collect();
    Ok(Graph::from_sorted_rows(rows))
}

/// Multigraph allowing loops and repeated edges, stored as an edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.edges.push((u.min(v), u.max(v)));
    }

    /// Number of copies of the edge `{u, v}`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.iter().filter(|&&e| e == key).count()
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }
}
