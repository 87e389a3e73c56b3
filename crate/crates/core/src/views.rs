//! Truncated walk trees ("views") and the per-depth multisets that record
//! where two views differ.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::AlgoError;
use crate::graph::Graph;

pub const DEFAULT_WALK_BUDGET: u64 = 10_000_000;

/// Canonical code of the depth-`depth` walk tree rooted at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewHash {
    pub depth: usize,
    pub digest: [u8; 32],
}

/// Merkle-style hashing of walk trees, memoised per depth.
///
/// The code of a tree is the SHA-256 of the sorted codes of its subtrees.
/// Every digest ever produced is recorded together with the child list it
/// came from, and a second child list hashing to the same digest is reported
/// as an error, so equal codes always mean isomorphic trees.
pub struct ViewHasher<'g> {
    g: &'g Graph,
    budget: u64,
    levels: Vec<Vec<[u8; 32]>>,
    seen: HashMap<[u8; 32], Vec<[u8; 32]>>,
}

impl<'g> ViewHasher<'g> {
    pub fn new(g: &'g Graph) -> Self {
        ViewHasher {
            g,
            budget: DEFAULT_WALK_BUDGET,
            levels: Vec::new(),
            seen: HashMap::new(),
        }
    }

    /// Caps the number of tree nodes (walks) a requested view may have.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Number of walks of length at most `depth` from each vertex, saturating.
    pub fn tree_sizes(&self, depth: usize) -> Vec<u64> {
        let n = self.g.n();
        let mut walks = vec![1u64; n];
        let mut total = vec![1u64; n];
        for _ in 0..depth {
            walks = (0..n)
                .map(|v| {
                    self.g
                        .neighbors(v)
                        .fold(0u64, |acc, w| acc.saturating_add(walks[w]))
                })
                .collect();
            for v in 0..n {
                total[v] = total[v].saturating_add(walks[v]);
            }
        }
        total
    }

    fn digest_of(&mut self, children: Vec<[u8; 32]>) -> Result<[u8; 32], AlgoError> {
        let mut h = Sha256::new();
        h.update((children.len() as u64).to_be_bytes());
        for c in &children {
            h.update(c);
        }
        let d: [u8; 32] = h.finalize().into();
        match self.seen.get(&d) {
            Some(prev) if *prev != children => Err(AlgoError::InvalidArgument(
                "digest collision between distinct views".into(),
            )),
            Some(_) => Ok(d),
            None => {
                self.seen.insert(d, children);
                Ok(d)
            }
        }
    }

    fn ensure_depth(&mut self, depth: usize) -> Result<(), AlgoError> {
        let n = self.g.n();
        while self.levels.len() <= depth {
            let next = if let Some(prev) = self.levels.last().cloned() {
                let mut level = Vec::with_capacity(n);
                for v in 0..n {
                    let mut kids: Vec<[u8; 32]> = self.g.neighbors(v).map(|w| prev[w]).collect();
                    kids.sort_unstable();
                    level.push(self.digest_of(kids)?);
                }
                level
            } else {
                let leaf = self.digest_of(Vec::new())?;
                vec![leaf; n]
            };
            self.levels.push(next);
        }
        Ok(())
    }

    pub fn hash(&mut self, v: usize, depth: usize) -> Result<ViewHash, AlgoError> {
        if v >= self.g.n() {
            return Err(AlgoError::InvalidArgument(format!("vertex {v} out of range")));
        }
        let size = self.tree_sizes(depth)[v];
        if size > self.budget {
            return Err(AlgoError::BudgetExceeded { budget: self.budget });
        }
        self.ensure_depth(depth)?;
        Ok(ViewHash {
            depth,
            digest: self.levels[depth][v],
        })
    }

    /// Codes of every vertex at one depth.
    pub fn hash_all(&mut self, depth: usize) -> Result<Vec<ViewHash>, AlgoError> {
        if self.tree_sizes(depth).iter().any(|&s| s > self.budget) {
            return Err(AlgoError::BudgetExceeded { budget: self.budget });
        }
        self.ensure_depth(depth)?;
        Ok(self.levels[depth]
            .iter()
            .map(|&digest| ViewHash { depth, digest })
            .collect())
    }
}

pub fn view_hash(g: &Graph, v: usize, depth: usize) -> Result<ViewHash, AlgoError> {
    ViewHasher::new(g).hash(v, depth)
}

/// One depth of a [`ViewDiff`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffLevel {
    /// Surplus of copies in the view of `u` over the view of `v`.
    pub forward: BTreeMap<usize, BigUint>,
    /// Surplus in the view of `v` over the view of `u`.
    pub backward: BTreeMap<usize, BigUint>,
    /// Vertices in the support at this depth that never appeared before.
    pub new_vertices: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewDiff {
    pub u: usize,
    pub v: usize,
    pub levels: Vec<DiffLevel>,
    /// Union of the supports over all computed depths.
    pub seen: BTreeSet<usize>,
}

impl ViewDiff {
    /// First depth at which no new vertex enters the support.
    pub fn first_empty(&self) -> Option<usize> {
        self.levels.iter().position(|l| l.new_vertices.is_empty())
    }

    /// Union of supports up to and including depth `i`.
    pub fn seen_up_to(&self, i: usize) -> BTreeSet<usize> {
        self.levels[..=i]
            .iter()
            .flat_map(|l| l.new_vertices.iter().copied())
            .collect()
    }
}

/// Depth-by-depth difference between the views of `u` and `v` up to depth
/// `max_depth`.
///
/// The surplus of `w` at depth `i` is the number of neighbours of `w` in the
/// previous surplus of `u` minus those in the previous surplus of `v`, so
/// both sides together are the positive and negative parts of the signed
/// vector `A^i (e_u - e_v)`.
pub fn view_diff(g: &Graph, u: usize, v: usize, max_depth: usize) -> Result<ViewDiff, AlgoError> {
    let n = g.n();
    if u >= n || v >= n {
        return Err(AlgoError::InvalidArgument("vertex out of range".into()));
    }
    if u == v {
        return Err(AlgoError::InvalidArgument("the two vertices must differ".into()));
    }
    let mut signed = vec![BigInt::zero(); n];
    signed[u] = BigInt::from(1);
    signed[v] = BigInt::from(-1);
    let mut seen = BTreeSet::new();
    let mut levels = Vec::with_capacity(max_depth + 1);
    for depth in 0..=max_depth {
        if depth > 0 {
            signed = (0..n)
                .map(|w| g.neighbors(w).map(|x| &signed[x]).sum())
                .collect();
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        let mut new_vertices = BTreeSet::new();
        for (w, x) in signed.iter().enumerate() {
            let side = match x.sign() {
                Sign::Plus => &mut forward,
                Sign::Minus => &mut backward,
                Sign::NoSign => continue,
            };
            side.insert(w, x.magnitude().clone());
            if seen.insert(w) {
                new_vertices.insert(w);
            }
        }
        levels.push(DiffLevel {
            forward,
            backward,
            new_vertices,
        });
    }
    Ok(ViewDiff { u, v, levels, seen })
}

/// First depth `i` and degree `d` at which the two surpluses hold different
/// numbers of degree-`d` copies, scanning depth 0 upwards and degrees
/// ascending.
pub fn degree_discrepancy(g: &Graph, diff: &ViewDiff) -> Option<(usize, usize)> {
    for (i, level) in diff.levels.iter().enumerate() {
        let mut by_degree: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (&w, m) in &level.forward {
            *by_degree.entry(g.degree(w)).or_default() += BigInt::from(m.clone());
        }
        for (&w, m) in &level.backward {
            *by_degree.entry(g.degree(w)).or_default() -= BigInt::from(m.clone());
        }
        if let Some((&d, _)) = by_degree.iter().find(|(_, x)| !x.is_zero()) {
            return Some((i, d));
        }
    }
    None
}
