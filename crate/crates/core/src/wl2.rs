//! Folklore 2-dimensional Weisfeiler–Leman refinement on ordered pairs.

use crate::error::AlgoError;
use crate::graph::Graph;
use crate::refinement::Colouring;

/// Largest vertex count accepted; the table holds n² colour ids.
pub const MAX_WL2_VERTICES: usize = 4096;

/// Colour per ordered pair, stored row-major as an n×n table with dense ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColouring {
    n: usize,
    k: usize,
    colour: Vec<u32>,
}

impl PairColouring {
    /// Compresses an arbitrary n×n id table to dense ids, keeping id order.
    pub fn from_table(n: usize, table: &[u64]) -> Result<Self, AlgoError> {
        if table.len() != n * n {
            return Err(AlgoError::SizeMismatch {
                expected: n * n,
                got: table.len(),
            });
        }
        let mut distinct = table.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let colour = table
            .iter()
            .map(|x| distinct.binary_search(x).unwrap() as u32)
            .collect();
        Ok(PairColouring {
            n,
            k: distinct.len(),
            colour,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.colour[u * self.n + v]
    }

    pub fn table(&self) -> &[u32] {
        &self.colour
    }

    /// Number of pairs in each colour class.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.colour {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// True if both colourings induce the same partition of pairs.
    pub fn same_partition(&self, other: &PairColouring) -> bool {
        self.n == other.n && self.k == other.k && self.refines(other)
    }

    /// True if every class of `self` lies inside a class of `coarse`.
    pub fn refines(&self, coarse: &PairColouring) -> bool {
        if self.n != coarse.n {
            return false;
        }
        let mut image: Vec<Option<u32>> = vec![None; self.k];
        for (&a, &b) in self.colour.iter().zip(&coarse.colour) {
            match image[a as usize] {
                None => image[a as usize] = Some(b),
                Some(x) if x != b => return false,
                Some(_) => {}
            }
        }
        true
    }
}

fn check_cap(n: usize) -> Result<(), AlgoError> {
    if n > MAX_WL2_VERTICES {
        return Err(AlgoError::CapExceeded {
            n,
            cap: MAX_WL2_VERTICES,
        });
    }
    Ok(())
}

/// Initial pair colouring: one tag for edges, one for non-edges, and a tag
/// per vertex colour on the diagonal. Diagonal tags come first, in vertex
/// colour order, then non-edges, then edges.
pub fn init_pair_colouring(g: &Graph, c: &Colouring) -> Result<PairColouring, AlgoError> {
    let n = g.n();
    check_cap(n)?;
    if c.n() != n {
        return Err(AlgoError::SizeMismatch {
            expected: n,
            got: c.n(),
        });
    }
    let k = c.k() as u64;
    let mut table = vec![k; n * n];
    for u in 0..n {
        table[u * n + u] = c.colour(u) as u64;
        for w in g.neighbors(u) {
            table[u * n + w] = k + 1;
        }
    }
    PairColouring::from_table(n, &table)
}

/// Runs 2-dimensional refinement to its fixed point.
///
/// A pair's signature is its old colour followed by the run-length encoded
/// sorted multiset of `(f(u,w), f(w,v))` over all `w`. New ids follow the
/// order of (old colour, signature), so classes split in place.
pub fn wl2_stable(g: &Graph, f: &PairColouring) -> Result<PairColouring, AlgoError> {
    let n = g.n();
    check_cap(n)?;
    if f.n != n {
        return Err(AlgoError::SizeMismatch {
            expected: n,
            got: f.n,
        });
    }
    let mut cur = f.clone();
    loop {
        let next = refine_pairs(&cur);
        if next.k == cur.k {
            return Ok(cur);
        }
        cur = next;
    }
}

fn refine_pairs(f: &PairColouring) -> PairColouring {
    let n = f.n;
    let k = f.k as u64;
    let mut transposed = vec![0u32; n * n];
    for u in 0..n {
        for v in 0..n {
            transposed[v * n + u] = f.colour[u * n + v];
        }
    }

    // Pairs grouped by old colour.
    let mut start = vec![0usize; f.k + 1];
    for &c in &f.colour {
        start[c as usize + 1] += 1;
    }
    for i in 0..f.k {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut by_class = vec![0u32; n * n];
    for (p, &c) in f.colour.iter().enumerate() {
        by_class[fill[c as usize]] = p as u32;
        fill[c as usize] += 1;
    }

    let use_counts = k * k <= 4 * n as u64;
    let mut counts = if use_counts { vec![0u32; (k * k) as usize] } else { Vec::new() };
    let mut keys: Vec<u64> = Vec::with_capacity(n);
    let mut sig: Vec<(u64, u32)> = Vec::new();
    let mut sig_off: Vec<usize> = Vec::new();
    let mut idx: Vec<usize> = Vec::new();

    let mut new_colour = vec![0u32; n * n];
    let mut next_id = 0u32;
    for c in 0..f.k {
        let members = &by_class[start[c]..start[c + 1]];
        if members.len() == 1 {
            new_colour[members[0] as usize] = next_id;
            next_id += 1;
            continue;
        }
        sig.clear();
        sig_off.clear();
        sig_off.push(0);
        for &p in members {
            let (u, v) = (p as usize / n, p as usize % n);
            let row = &f.colour[u * n..(u + 1) * n];
            let col = &transposed[v * n..(v + 1) * n];
            if use_counts {
                for (&a, &b) in row.iter().zip(col) {
                    counts[(a as u64 * k + b as u64) as usize] += 1;
                }
                for (key, cnt) in counts.iter_mut().enumerate() {
                    if *cnt > 0 {
                        sig.push((key as u64, *cnt));
                        *cnt = 0;
                    }
                }
            } else {
                keys.clear();
                keys.extend(row.iter().zip(col).map(|(&a, &b)| a as u64 * k + b as u64));
                keys.sort_unstable();
                let mut i = 0;
                while i < keys.len() {
                    let mut j = i + 1;
                    while j < keys.len() && keys[j] == keys[i] {
                        j += 1;
                    }
                    sig.push((keys[i], (j - i) as u32));
                    i = j;
                }
            }
            sig_off.push(sig.len());
        }
        let s = |i: usize| &sig[sig_off[i]..sig_off[i + 1]];
        idx.clear();
        idx.extend(0..members.len());
        idx.sort_by(|&a, &b| s(a).cmp(s(b)));
        for (pos, &i) in idx.iter().enumerate() {
            if pos > 0 && s(idx[pos - 1]) != s(i) {
                next_id += 1;
            }
            new_colour[members[i] as usize] = next_id;
        }
        next_id += 1;
    }
    PairColouring {
        n,
        k: next_id as usize,
        colour: new_colour,
    }
}

/// Colours each vertex by the colour of its diagonal pair.
pub fn vertex_projection(f: &PairColouring) -> Colouring {
    let diag: Vec<u32> = (0..f.n).map(|v| f.get(v, v)).collect();
    Colouring::from_ids(&diag)
}

/// Vertex projection of the stable 2-dimensional refinement of the initial
/// pair colouring built from `c`.
pub fn wl2_vertex_colouring(g: &Graph, c: &Colouring) -> Result<Colouring, AlgoError> {
    let f = init_pair_colouring(g, c)?;
    Ok(vertex_projection(&wl2_stable(g, &f)?))
}
