//! Majority and disparity graphs with respect to a vertex colouring, their
//! component statistics, and two small constructive utilities on sparse
//! graphs.

use std::collections::{BTreeSet, HashMap};

use crate::error::AlgoError;
use crate::graph::{bfs_distances, components, Graph};
use crate::refinement::Colouring;

/// A symmetric 0/1 choice per pair of colour classes: 1 means "all edges",
/// 0 means "no edges". Stored as a default bit plus the pairs that differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajoritySpec {
    k: usize,
    default: bool,
    /// Pairs `(a, b)`, `a <= b`, whose bit is the opposite of `default`.
    flipped: BTreeSet<(u32, u32)>,
}

impl MajoritySpec {
    pub fn constant(k: usize, bit: bool) -> Self {
        MajoritySpec {
            k,
            default: bit,
            flipped: BTreeSet::new(),
        }
    }

    /// Builds the matrix from a function; only `f(a, b)` with `a <= b` is
    /// consulted.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut spec = Self::constant(k, false);
        for a in 0..k {
            for b in a..k {
                if f(a, b) {
                    spec.flipped.insert((a as u32, b as u32));
                }
            }
        }
        spec
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b) as u32, a.max(b) as u32);
        self.default != self.flipped.contains(&key)
    }

    pub fn set(&mut self, a: usize, b: usize, bit: bool) {
        let key = (a.min(b) as u32, a.max(b) as u32);
        if bit == self.default {
            self.flipped.remove(&key);
        } else {
            self.flipped.insert(key);
        }
    }
}

/// Edge counts between every pair of classes that has at least one edge.
fn class_edge_counts(g: &Graph, c: &Colouring) -> HashMap<(u32, u32), usize> {
    let mut counts = HashMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (c.colour(u), c.colour(v));
        *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    counts
}

/// Majority bits: 1 when at least half of the possible edges between the two
/// classes are present. Within a class the possible edges are the pairs of
/// distinct members, so a singleton class always gets 0.
pub fn majority(g: &Graph, c: &Colouring) -> Result<MajoritySpec, AlgoError> {
    check(g, c)?;
    let sizes = c.class_sizes();
    let mut spec = MajoritySpec::constant(c.k(), false);
    for ((a, b), present) in class_edge_counts(g, c) {
        let (sa, sb) = (sizes[a as usize], sizes[b as usize]);
        let possible = if a == b { sa * (sa - 1) / 2 } else { sa * sb };
        if 2 * present >= possible {
            spec.flipped.insert((a, b));
        }
    }
    Ok(spec)
}

fn check(g: &Graph, c: &Colouring) -> Result<(), AlgoError> {
    if g.n() != c.n() {
        return Err(AlgoError::SizeMismatch {
            expected: g.n(),
            got: c.n(),
        });
    }
    Ok(())
}

/// The graph that disagrees with `G` exactly where the chosen bit says so:
/// for class pairs with bit 1 its edges are the non-edges of `G`, for bit 0
/// the edges of `G`.
pub fn generalised_disparity(g: &Graph, c: &Colouring, l: &MajoritySpec) -> Result<Graph, AlgoError> {
    check(g, c)?;
    if l.k != c.k() {
        return Err(AlgoError::SizeMismatch {
            expected: c.k(),
            got: l.k,
        });
    }
    let n = g.n();
    let classes = c.classes();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
    if l.default {
        for v in 0..n {
            let a = c.colour(v) as usize;
            for w in 0..n {
                if w != v && g.has_edge(v, w) != l.get(a, c.colour(w) as usize) {
                    rows[v].push(w as u32);
                }
            }
        }
        return Ok(Graph::from_sorted_rows(rows));
    }
    let mut ones: Vec<Vec<usize>> = vec![Vec::new(); c.k()];
    for &(a, b) in &l.flipped {
        ones[a as usize].push(b as usize);
        if a != b {
            ones[b as usize].push(a as usize);
        }
    }
    for v in 0..n {
        let a = c.colour(v) as usize;
        let row = &mut rows[v];
        for w in g.neighbors(v) {
            if !l.get(a, c.colour(w) as usize) {
                row.push(w as u32);
            }
        }
        for &b in &ones[a] {
            for &w in &classes[b] {
                if w != v && !g.has_edge(v, w) {
                    row.push(w as u32);
                }
            }
        }
        row.sort_unstable();
    }
    Ok(Graph::from_sorted_rows(rows))
}

/// The disparity graph: the symmetric difference of `G` with its majority
/// graph.
pub fn disparity(g: &Graph, c: &Colouring) -> Result<Graph, AlgoError> {
    generalised_disparity(g, c, &majority(g, c)?)
}

/// Per-class figures used by the degree-boundedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStats {
    pub class: usize,
    /// Largest intersection of the class with one component.
    pub max_intersection: usize,
    /// Largest number of neighbours any vertex has inside the class.
    pub max_neighbours: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisparityStats {
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
    pub max_degree: usize,
    /// Largest intersection of a colour class with a component.
    pub s_bound: usize,
    pub classes: Vec<ClassStats>,
}

impl DisparityStats {
    pub fn largest_component(&self) -> usize {
        self.component_sizes.first().copied().unwrap_or(0)
    }

    pub fn is_s_bounded(&self, s: usize) -> bool {
        self.s_bound <= s
    }

    /// Every class meeting some component in at least `r` vertices receives
    /// at most `d` edges from any single vertex.
    pub fn is_degree_bounded(&self, r: usize, d: usize) -> bool {
        self.classes
            .iter()
            .all(|cs| cs.max_intersection < r || cs.max_neighbours <= d)
    }
}

pub fn stats(d: &Graph, c: &Colouring) -> Result<DisparityStats, AlgoError> {
    check(d, c)?;
    let comps = components(d);
    let mut component_sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let k = c.k();
    let mut max_intersection = vec![0usize; k];
    let mut tally = vec![0usize; k];
    for comp in &comps {
        for &v in comp {
            tally[c.colour(v) as usize] += 1;
        }
        for &v in comp {
            let a = c.colour(v) as usize;
            max_intersection[a] = max_intersection[a].max(tally[a]);
        }
        for &v in comp {
            tally[c.colour(v) as usize] = 0;
        }
    }
    let mut max_neighbours = vec![0usize; k];
    for y in 0..d.n() {
        for w in d.neighbors(y) {
            tally[c.colour(w) as usize] += 1;
        }
        for w in d.neighbors(y) {
            let a = c.colour(w) as usize;
            max_neighbours[a] = max_neighbours[a].max(tally[a]);
        }
        for w in d.neighbors(y) {
            tally[c.colour(w) as usize] = 0;
        }
    }
    Ok(DisparityStats {
        component_sizes,
        max_degree: d.max_degree(),
        s_bound: max_intersection.iter().copied().max().unwrap_or(0),
        classes: (0..k)
            .map(|a| ClassStats {
                class: a,
                max_intersection: max_intersection[a],
                max_neighbours: max_neighbours[a],
            })
            .collect(),
    })
}

/// A vertex and a set of distances from it that catch between `a` and
/// `a * delta` (exclusive) vertices of the target set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceWitness {
    pub vertex: usize,
    pub distances: Vec<usize>,
    pub count: usize,
    /// The degree bound used for the upper end of the interval.
    pub delta: usize,
}

/// Finds a vertex that sees a controlled number of target vertices at a
/// chosen set of distances, in a connected graph of maximum degree at most
/// `delta = max(2, Δ(H))`.
///
/// Starting from the smallest target vertex `z`: if some distance from `z`
/// holds at least `a` targets, walk back from `z` towards that layer one
/// step at a time, always moving to the neighbour that keeps the most
/// targets at the remaining distance (lowest id on ties), and stop at the
/// first step where the count drops below `a * delta`. Otherwise grow the
/// distance set `{0, 1, ..., i-1}` around `z` until it holds `a` targets.
pub fn distance_witness(h: &Graph, targets: &[usize], a: usize) -> Result<DistanceWitness, AlgoError> {
    let n = h.n();
    if n == 0 || components(h).len() != 1 {
        return Err(AlgoError::InvalidArgument("graph must be connected and non-empty".into()));
    }
    let mut in_target = vec![false; n];
    for &t in targets {
        if t >= n {
            return Err(AlgoError::InvalidArgument(format!("target {t} out of range")));
        }
        in_target[t] = true;
    }
    let size = in_target.iter().filter(|&&b| b).count();
    if a == 0 || a > size {
        return Err(AlgoError::InvalidArgument(format!(
            "a = {a} must lie in 1..={size}"
        )));
    }
    let delta = h.max_degree().max(2);
    let dist_from = |y: usize| -> Vec<usize> {
        bfs_distances(h, y)
            .expect("vertex in range")
            .into_iter()
            .map(|d| d.expect("graph is connected"))
            .collect()
    };
    let layer_counts = |dist: &[usize]| -> Vec<usize> {
        let mut counts = vec![0usize; n];
        for v in 0..n {
            if in_target[v] {
                counts[dist[v]] += 1;
            }
        }
        counts
    };
    let z = (0..n).find(|&v| in_target[v]).unwrap();
    let from_z = layer_counts(&dist_from(z));

    if let Some(d) = (0..n).find(|&d| from_z[d] >= a) {
        let mut y = z;
        let mut q = from_z[d];
        let mut i = d;
        while q >= a * delta {
            // Some neighbour of y keeps at least q / delta targets at
            // distance i - 1.
            let mut best = (0usize, usize::MAX);
            for w in h.neighbors(y) {
                let qw = layer_counts(&dist_from(w))[i - 1];
                if qw > best.0 || (qw == best.0 && w < best.1) {
                    best = (qw, w);
                }
            }
            y = best.1;
            q = best.0;
            i -= 1;
        }
        debug_assert!(q >= a);
        return Ok(DistanceWitness {
            vertex: y,
            distances: vec![i],
            count: q,
            delta,
        });
    }

    let mut total = 0;
    for i in 0..n {
        total += from_z[i];
        if total >= a {
            return Ok(DistanceWitness {
                vertex: z,
                distances: (0..=i).collect(),
                count: total,
                delta,
            });
        }
    }
    unreachable!("every target lies within distance n - 1 of z")
}

/// Greedy choice of vertices on one side of a biregular bipartite graph
/// whose joint neighbourhood covers a quarter of the other side.
///
/// Each step takes the `side_b` vertex with the most not-yet-covered
/// neighbours in `side_c` (lowest id on ties), stopping once a quarter of
/// `side_c` is covered. The greedy argument guarantees this happens within
/// `ceil(|C| / (2 d_B))` steps.
pub fn fingerprint_set(f: &Graph, side_c: &[usize], side_b: &[usize]) -> Result<Vec<usize>, AlgoError> {
    let n = f.n();
    let mut side = vec![0u8; n];
    for &v in side_c {
        if v >= n || side[v] != 0 {
            return Err(AlgoError::InvalidArgument(format!("bad side assignment at {v}")));
        }
        side[v] = 1;
    }
    for &v in side_b {
        if v >= n || side[v] != 0 {
            return Err(AlgoError::InvalidArgument(format!("bad side assignment at {v}")));
        }
        side[v] = 2;
    }
    if f.m() == 0 {
        return Err(AlgoError::InvalidArgument("graph has no edges".into()));
    }
    for (u, v) in f.edges() {
        if side[u] == 0 || side[v] == 0 || side[u] == side[v] {
            return Err(AlgoError::InvalidArgument(format!("edge {u}-{v} is not between the sides")));
        }
    }
    let regular = |vs: &[usize]| vs.windows(2).all(|w| f.degree(w[0]) == f.degree(w[1]));
    if !regular(side_c) || !regular(side_b) {
        return Err(AlgoError::InvalidArgument("graph is not biregular".into()));
    }
    let mut covered = vec![false; n];
    let mut n_covered = 0;
    let mut chosen = Vec::new();
    let mut available: Vec<usize> = side_b.to_vec();
    available.sort_unstable();
    while 4 * n_covered < side_c.len() {
        let (pos, _) = available
            .iter()
            .enumerate()
            .map(|(i, &b)| (i, f.neighbors(b).filter(|&w| !covered[w]).count()))
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
            .expect("coverage is reached before the side runs out");
        let b = available.remove(pos);
        for w in f.neighbors(b) {
            if !covered[w] {
                covered[w] = true;
                n_covered += 1;
            }
        }
        chosen.push(b);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp, RngSeed};
    use crate::refinement::stable_colouring;

    #[test]
    fn majority_examples() {
        let k4 = Graph::complete(4);
        let s = stable_colouring(&k4);
        assert!(majority(&k4, &s).unwrap().get(0, 0));
        assert_eq!(disparity(&k4, &s).unwrap().m(), 0);

        let e = Graph::empty(4);
        assert!(!majority(&e, &Colouring::trivial(4)).unwrap().get(0, 0));

        let c5 = Graph::cycle(5);
        let s = stable_colouring(&c5);
        assert!(majority(&c5, &s).unwrap().get(0, 0));
        assert_eq!(disparity(&c5, &s).unwrap(), c5.complement());
    }

    #[test]
    fn discrete_colouring_gives_empty_disparity() {
        for t in 0..20 {
            let g = gnp(15, 0.4, RngSeed::new(t, 5)).unwrap();
            assert_eq!(disparity(&g, &Colouring::discrete(15)).unwrap().m(), 0);
        }
    }

    #[test]
    fn constant_specs() {
        let g = gnp(12, 0.3, RngSeed::new(8, 8)).unwrap();
        let c = Colouring::from_ids(&[0, 0, 1, 1, 2, 2, 0, 1, 2, 0, 1, 2]);
        let zero = MajoritySpec::constant(3, false);
        assert_eq!(generalised_disparity(&g, &c, &zero).unwrap(), g);
        let one = MajoritySpec::constant(3, true);
        assert_eq!(generalised_disparity(&g, &c, &one).unwrap(), g.complement());
        let dense_ones = MajoritySpec::from_fn(3, |_, _| true);
        assert_eq!(generalised_disparity(&g, &c, &dense_ones).unwrap(), g.complement());
        assert!(generalised_disparity(&g, &c, &MajoritySpec::constant(2, true)).is_err());
    }

    #[test]
    fn stats_examples() {
        let e = Graph::empty(4);
        let st = stats(&e, &Colouring::trivial(4)).unwrap();
        assert_eq!(st.component_sizes, vec![1; 4]);
        assert_eq!(st.s_bound, 1);

        let c5 = Graph::cycle(5);
        let st = stats(&c5, &Colouring::trivial(5)).unwrap();
        assert_eq!((st.s_bound, st.max_degree), (5, 2));

        let k33 = Graph::complete_bipartite(3, 3);
        let st = stats(&k33, &Colouring::from_ids(&[0, 0, 0, 1, 1, 1])).unwrap();
        assert_eq!(st.s_bound, 3);
        assert_eq!(st.classes[0].max_neighbours, 3);
        assert!(st.is_degree_bounded(3, 3));
        assert!(!st.is_degree_bounded(3, 2));
        assert!(st.is_degree_bounded(4, 0));
    }

    #[test]
    fn witness_examples() {
        let p3 = Graph::path(3);
        let w = distance_witness(&p3, &[0, 2], 1).unwrap();
        assert!(w.count >= 1 && w.count < 2);
        let w = distance_witness(&Graph::cycle(6), &[3], 1).unwrap();
        assert_eq!((w.vertex, w.distances.clone(), w.count), (3, vec![0], 1));
        let all: Vec<usize> = (0..6).collect();
        let w = distance_witness(&Graph::cycle(6), &all, 2).unwrap();
        assert!(w.count >= 2 && w.count < 4);
        assert!(distance_witness(&Graph::empty(2), &[0], 1).is_err());
        assert!(distance_witness(&p3, &[0], 2).is_err());
    }

    #[test]
    fn fingerprint_examples() {
        let k22 = Graph::complete_bipartite(2, 2);
        let s = fingerprint_set(&k22, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(s, vec![2]);

        let matching = Graph::from_edges(8, (0..4).map(|i| (i, i + 4))).unwrap();
        let s = fingerprint_set(&matching, &[0, 1, 2, 3], &[4, 5, 6, 7]).unwrap();
        assert_eq!(s, vec![4]);

        let star = Graph::complete_bipartite(1, 5);
        let s = fingerprint_set(&star, &[0], &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(s, vec![1]);

        let path = Graph::path(3);
        assert!(fingerprint_set(&path, &[0, 2], &[1]).is_ok());
        let uneven = Graph::from_edges(4, [(0, 2), (0, 3), (1, 3)]).unwrap();
        assert!(fingerprint_set(&uneven, &[0, 1], &[2, 3]).is_err());
    }
}
