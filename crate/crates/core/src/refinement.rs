//! Colour refinement with canonical colour ids.
//!
//! A round replaces each vertex's colour by the pair (old colour, sorted list
//! of neighbour colours) and renumbers the distinct pairs in lexicographic
//! order. Because the old colour leads the pair, classes split in place and
//! the relative order of surviving colours never changes.

use crate::error::AlgoError;
use crate::graph::Graph;

/// Vertex colouring with dense ids `0..k`, every id used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Colouring {
    colour: Vec<u32>,
    class_sizes: Vec<usize>,
}

impl Colouring {
    /// Every vertex gets colour 0.
    pub fn trivial(n: usize) -> Self {
        Colouring {
            colour: vec![0; n],
            class_sizes: if n == 0 { Vec::new() } else { vec![n] },
        }
    }

    /// Vertex `v` gets colour `v`.
    pub fn discrete(n: usize) -> Self {
        Colouring {
            colour: (0..n as u32).collect(),
            class_sizes: vec![1; n],
        }
    }

    /// Compresses arbitrary ids to `0..k`, keeping their relative order.
    pub fn from_ids<T: Ord + Copy>(ids: &[T]) -> Self {
        let mut distinct: Vec<T> = ids.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let colour = ids
            .iter()
            .map(|x| distinct.binary_search(x).unwrap() as u32)
            .collect();
        Self::from_dense(colour, distinct.len())
    }

    fn from_dense(colour: Vec<u32>, k: usize) -> Self {
        let mut class_sizes = vec![0; k];
        for &c in &colour {
            class_sizes[c as usize] += 1;
        }
        debug_assert!(class_sizes.iter().all(|&s| s > 0));
        Colouring {
            colour,
            class_sizes,
        }
    }

    pub fn n(&self) -> usize {
        self.colour.len()
    }

    pub fn k(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn colour(&self, v: usize) -> u32 {
        self.colour[v]
    }

    pub fn ids(&self) -> &[u32] {
        &self.colour
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn is_discrete(&self) -> bool {
        self.k() == self.n()
    }

    /// Members of each class, indexed by colour id, each sorted ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.class_sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &c) in self.colour.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    /// True if both colourings induce the same vertex partition, whatever
    /// the ids.
    pub fn same_partition(&self, other: &Colouring) -> bool {
        self.n() == other.n()
            && self.k() == other.k()
            && is_refinement(self, other).unwrap_or(false)
    }

    /// Gives `v` a colour of its own, ordered just before the rest of its
    /// old class.
    pub fn individualise(&self, v: usize) -> Colouring {
        let keys: Vec<(u32, bool)> = self
            .colour
            .iter()
            .enumerate()
            .map(|(w, &c)| (c, w != v))
            .collect();
        Colouring::from_ids(&keys)
    }
}

/// Class counts of every colouring in a refinement run, the input first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTrace {
    /// Rounds that changed the partition.
    pub rounds: usize,
    pub class_counts: Vec<usize>,
}

fn check_size(g: &Graph, c: &Colouring) -> Result<(), AlgoError> {
    if g.n() != c.n() {
        return Err(AlgoError::SizeMismatch {
            expected: g.n(),
            got: c.n(),
        });
    }
    Ok(())
}

/// One refinement round with canonical renumbering.
pub fn refine_step(g: &Graph, c: &Colouring) -> Result<Colouring, AlgoError> {
    check_size(g, c)?;
    let sigs: Vec<Vec<u32>> = (0..g.n())
        .map(|v| {
            let mut s: Vec<u32> = g.adj(v).iter().map(|&w| c.colour[w as usize]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| (c.colour[a], &sigs[a]).cmp(&(c.colour[b], &sigs[b])));
    let mut colour = vec![0u32; g.n()];
    let mut next = 0u32;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 {
            let u = order[i - 1];
            if (c.colour[u], &sigs[u]) != (c.colour[v], &sigs[v]) {
                next += 1;
            }
        }
        colour[v] = next;
    }
    let k = if g.n() == 0 { 0 } else { next as usize + 1 };
    Ok(Colouring::from_dense(colour, k))
}

/// The stable colouring reached from `c`, identical (ids included) to
/// iterating [`refine_step`] until the class count stops growing.
///
/// Internally a colour is the start offset of its class in a vertex array
/// sorted by colour. That numbering is order-preserving with respect to the
/// dense one, so lexicographic signature order is unaffected, and a split
/// leaves every other class id alone. Only classes with a neighbour in a
/// class that split in the previous round are re-examined, and of each split
/// class the largest part is skipped when marking: the old class was uniform
/// for everyone, so counts into the largest part follow from the others.
pub fn stable(g: &Graph, c: &Colouring) -> Result<(Colouring, RefinementTrace), AlgoError> {
    check_size(g, c)?;
    let n = g.n();
    let mut trace = RefinementTrace {
        rounds: 0,
        class_counts: vec![c.k()],
    };
    if n == 0 {
        return Ok((c.clone(), trace));
    }

    // order[start..end] holds the class whose id is `start`.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| c.colour[v as usize]);
    let mut class_end = vec![0u32; n];
    let mut colour = vec![0u32; n];
    {
        let mut start = 0;
        while start < n {
            let col = c.colour[order[start] as usize];
            let mut end = start;
            while end < n && c.colour[order[end] as usize] == col {
                end += 1;
            }
            for &v in &order[start..end] {
                colour[v as usize] = start as u32;
            }
            class_end[start] = end as u32;
            start = end;
        }
    }
    let mut k = c.k();

    let mut affected: Vec<u32> = Vec::new();
    let mut is_affected = vec![false; n];
    let mut start = 0;
    while start < n {
        if class_end[start] as usize - start > 1 {
            affected.push(start as u32);
            is_affected[start] = true;
        }
        start = class_end[start] as usize;
    }

    let mut sig_buf: Vec<u32> = Vec::new();
    let mut sig_off: Vec<usize> = Vec::new();
    let mut idx: Vec<usize> = Vec::new();
    // Class offsets within the old class [start, end) where a new part begins,
    // plus the members in their new order.
    struct Split {
        start: usize,
        end: usize,
        members: Vec<u32>,
        bounds: Vec<usize>,
    }
    let mut splits: Vec<Split> = Vec::new();

    while !affected.is_empty() {
        affected.sort_unstable();
        splits.clear();
        for &s in &affected {
            let s = s as usize;
            is_affected[s] = false;
            let e = class_end[s] as usize;
            let members = &order[s..e];
            sig_buf.clear();
            sig_off.clear();
            sig_off.push(0);
            for &v in members {
                let from = sig_buf.len();
                sig_buf.extend(g.adj(v as usize).iter().map(|&w| colour[w as usize]));
                sig_buf[from..].sort_unstable();
                sig_off.push(sig_buf.len());
            }
            let sig = |i: usize| &sig_buf[sig_off[i]..sig_off[i + 1]];
            idx.clear();
            idx.extend(0..members.len());
            idx.sort_by(|&a, &b| sig(a).cmp(sig(b)));
            let mut bounds = vec![0];
            for i in 1..idx.len() {
                if sig(idx[i - 1]) != sig(idx[i]) {
                    bounds.push(i);
                }
            }
            if bounds.len() > 1 {
                bounds.push(e - s);
                splits.push(Split {
                    start: s,
                    end: e,
                    members: idx.iter().map(|&i| members[i]).collect(),
                    bounds,
                });
            }
        }
        affected.clear();
        if splits.is_empty() {
            break;
        }

        for sp in &splits {
            order[sp.start..sp.end].copy_from_slice(&sp.members);
            for w in sp.bounds.windows(2) {
                let (a, b) = (sp.start + w[0], sp.start + w[1]);
                class_end[a] = b as u32;
                for &v in &order[a..b] {
                    colour[v as usize] = a as u32;
                }
            }
            k += sp.bounds.len() - 2;
        }
        for sp in &splits {
            let largest = sp
                .bounds
                .windows(2)
                .enumerate()
                .max_by_key(|(i, w)| (w[1] - w[0], std::cmp::Reverse(*i)))
                .map(|(i, _)| i)
                .unwrap();
            for (i, w) in sp.bounds.windows(2).enumerate() {
                if i == largest {
                    continue;
                }
                for &v in &order[sp.start + w[0]..sp.start + w[1]] {
                    for &x in g.adj(v as usize) {
                        let cx = colour[x as usize] as usize;
                        if !is_affected[cx] && class_end[cx] as usize - cx > 1 {
                            is_affected[cx] = true;
                            affected.push(cx as u32);
                        }
                    }
                }
            }
        }
        trace.rounds += 1;
        trace.class_counts.push(k);
    }

    Ok((Colouring::from_ids(&colour), trace))
}

/// Stable colouring from the trivial colouring.
pub fn stable_colouring(g: &Graph) -> Colouring {
    stable(g, &Colouring::trivial(g.n()))
        .expect("trivial colouring matches the graph")
        .0
}

/// True when every vertex of a class has the same number of neighbours in
/// each class.
pub fn is_equitable(g: &Graph, c: &Colouring) -> bool {
    if g.n() != c.n() {
        return false;
    }
    let mut rep: Vec<Option<Vec<u32>>> = vec![None; c.k()];
    for v in 0..g.n() {
        let mut s: Vec<u32> = g.adj(v).iter().map(|&w| c.colour[w as usize]).collect();
        s.sort_unstable();
        match &rep[c.colour[v] as usize] {
            None => rep[c.colour[v] as usize] = Some(s),
            Some(r) if *r != s => return false,
            Some(_) => {}
        }
    }
    true
}

/// True when each class of `fine` lies inside a class of `coarse`.
pub fn is_refinement(fine: &Colouring, coarse: &Colouring) -> Result<bool, AlgoError> {
    if fine.n() != coarse.n() {
        return Err(AlgoError::SizeMismatch {
            expected: fine.n(),
            got: coarse.n(),
        });
    }
    let mut image: Vec<Option<u32>> = vec![None; fine.k()];
    for v in 0..fine.n() {
        let slot = &mut image[fine.colour[v] as usize];
        match *slot {
            None => *slot = Some(coarse.colour[v]),
            Some(c) if c != coarse.colour[v] => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_permutation, gnp, RngSeed};

    fn naive_stable(g: &Graph, c: &Colouring) -> (Colouring, RefinementTrace) {
        let mut cur = c.clone();
        let mut trace = RefinementTrace {
            rounds: 0,
            class_counts: vec![c.k()],
        };
        loop {
            let next = refine_step(g, &cur).unwrap();
            if next.k() == cur.k() {
                return (cur, trace);
            }
            trace.rounds += 1;
            trace.class_counts.push(next.k());
            cur = next;
        }
    }

    #[test]
    fn path_on_five_vertices() {
        let p5 = Graph::path(5);
        let one = refine_step(&p5, &Colouring::trivial(5)).unwrap();
        assert_eq!(one.ids(), &[0, 1, 1, 1, 0]);
        let (st, trace) = stable(&p5, &Colouring::trivial(5)).unwrap();
        assert_eq!(st.ids(), &[0, 1, 2, 1, 0]);
        assert_eq!(trace.rounds, 2);
        assert_eq!(trace.class_counts, vec![1, 2, 3]);
    }

    #[test]
    fn regular_and_discrete_fixed_points() {
        let c6 = Graph::cycle(6);
        assert_eq!(stable_colouring(&c6).k(), 1);
        let p = Graph::petersen();
        assert_eq!(refine_step(&p, &Colouring::trivial(10)).unwrap().k(), 1);
        let d = Colouring::discrete(10);
        assert!(refine_step(&p, &d).unwrap().same_partition(&d));
    }

    #[test]
    fn equitability() {
        let c4 = Graph::cycle(4);
        let c = Colouring::from_ids(&[0, 1, 1, 1]);
        assert!(!is_equitable(&c4, &c));
        assert!(is_equitable(&c4, &Colouring::discrete(4)));
        let g = gnp(60, 0.08, RngSeed::new(5, 1)).unwrap();
        assert!(is_equitable(&g, &stable_colouring(&g)));
    }

    #[test]
    fn refinement_relation() {
        let c = Colouring::from_ids(&[2, 2, 7, 7]);
        assert!(is_refinement(&c, &c).unwrap());
        assert!(is_refinement(&Colouring::discrete(4), &Colouring::trivial(4)).unwrap());
        assert!(!is_refinement(&Colouring::trivial(4), &Colouring::discrete(4)).unwrap());
        assert!(is_refinement(&c, &Colouring::trivial(3)).is_err());
    }

    #[test]
    fn matches_naive_iteration() {
        for t in 0..200u64 {
            let n = 5 + (t as usize % 60);
            let p = [0.03, 0.08, 0.2, 0.5][t as usize % 4];
            let g = gnp(n, p, RngSeed::new(t, 2)).unwrap();
            let ids: Vec<u32> = (0..n as u32).map(|v| (v * 7 + t as u32) % 3).collect();
            for c in [Colouring::trivial(n), Colouring::from_ids(&ids)] {
                let fast = stable(&g, &c).unwrap();
                let slow = naive_stable(&g, &c);
                assert_eq!(fast, slow, "seed {t}");
            }
        }
    }

    #[test]
    fn ids_are_canonical() {
        let g = gnp(40, 0.1, RngSeed::new(3, 3)).unwrap();
        let perm: Vec<usize> = (0..40).map(|v| (v * 17 + 5) % 40).collect();
        let h = apply_permutation(&g, &perm).unwrap();
        let a = stable_colouring(&g);
        let b = stable_colouring(&h);
        for v in 0..40 {
            assert_eq!(a.colour(v), b.colour(perm[v]));
        }
    }

    #[test]
    fn individualisation_orders_before_class() {
        let c = Colouring::from_ids(&[0, 1, 1, 2]);
        let d = c.individualise(2);
        assert_eq!(d.ids(), &[0, 2, 1, 3]);
    }
}
