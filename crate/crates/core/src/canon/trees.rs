//! Canonical labelling of forests and of graphs whose components have at most
//! one cycle, via per-graph canonical ids of rooted subtrees.

use std::collections::VecDeque;

use super::{per_component, CanonicalLabelling, Scheme};
use crate::error::AlgoError;
use crate::graph::Graph;

/// Rooted trees hanging from a set of roots, with canonical ids for every
/// rooted subtree: two vertices get the same id exactly when their subtrees
/// are isomorphic, and ids are ordered by height and then by the sorted
/// tuple of child ids, so they do not depend on vertex numbering.
pub(crate) struct RootedForest {
    pub children: Vec<Vec<usize>>,
    pub id: Vec<u32>,
}

impl RootedForest {
    /// Grows a tree from each root without entering `blocked` vertices (a
    /// root may itself be blocked).
    pub fn build(g: &Graph, roots: &[usize], blocked: &[bool]) -> Self {
        let n = g.n();
        let mut visited = vec![false; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::new();
        for &r in roots {
            visited[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for w in g.neighbors(v) {
                    if !visited[w] && !blocked[w] {
                        visited[w] = true;
                        children[v].push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut height = vec![0usize; n];
        for &v in order.iter().rev() {
            height[v] = children[v].iter().map(|&w| height[w] + 1).max().unwrap_or(0);
        }
        let max_h = order.iter().map(|&v| height[v]).max().unwrap_or(0);
        let mut by_height: Vec<Vec<usize>> = vec![Vec::new(); max_h + 1];
        for &v in &order {
            by_height[height[v]].push(v);
        }
        let mut id = vec![u32::MAX; n];
        let mut next = 0u32;
        for layer in by_height {
            let tuples: Vec<(Vec<u32>, usize)> = layer
                .iter()
                .map(|&v| {
                    let mut t: Vec<u32> = children[v].iter().map(|&w| id[w]).collect();
                    t.sort_unstable();
                    (t, v)
                })
                .collect();
            let mut distinct: Vec<&Vec<u32>> = tuples.iter().map(|(t, _)| t).collect();
            distinct.sort();
            distinct.dedup();
            for (t, v) in &tuples {
                id[*v] = next + distinct.binary_search(&t).unwrap() as u32;
            }
            next += distinct.len() as u32;
        }
        for list in children.iter_mut() {
            list.sort_by_key(|&w| (id[w], w));
        }
        RootedForest { children, id }
    }

    /// Preorder of the subtree at `v`, children in id order.
    pub fn preorder(&self, v: usize, out: &mut Vec<usize>) {
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
    }
}

fn perm_from_order(order: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    perm
}

/// The one or two centres of a tree.
fn centres(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for w in g.neighbors(v) {
                if deg[w] > 1 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn label_tree(g: &Graph) -> CanonicalLabelling {
    let none = vec![false; g.n()];
    centres(g)
        .into_iter()
        .map(|c| {
            let forest = RootedForest::build(g, &[c], &none);
            let mut order = Vec::with_capacity(g.n());
            forest.preorder(c, &mut order);
            CanonicalLabelling::new(g, perm_from_order(&order), Scheme::TreeUnicyclic)
        })
        .min_by(|a, b| a.certificate.cmp(&b.certificate))
        .expect("a non-empty tree has a centre")
}

/// Vertices of the unique cycle of a connected unicyclic graph, in cyclic
/// order.
pub(crate) fn unique_cycle(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut on_cycle = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = stack.pop() {
        on_cycle[v] = false;
        for w in g.neighbors(v) {
            if on_cycle[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let start = (0..n).find(|&v| on_cycle[v]).expect("unicyclic graph has a cycle");
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = g.neighbors(start).find(|&w| on_cycle[w]).unwrap();
    while cur != start {
        cycle.push(cur);
        let next = g.neighbors(cur).find(|&w| on_cycle[w] && w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    cycle
}

fn label_unicyclic(g: &Graph) -> CanonicalLabelling {
    let cycle = unique_cycle(g);
    let len = cycle.len();
    let mut blocked = vec![false; g.n()];
    for &v in &cycle {
        blocked[v] = true;
    }
    let forest = RootedForest::build(g, &cycle, &blocked);
    let seq: Vec<u32> = cycle.iter().map(|&v| forest.id[v]).collect();
    let walk = |start: usize, forward: bool| -> Vec<usize> {
        (0..len)
            .map(|j| if forward { (start + j) % len } else { (start + len - j) % len })
            .collect()
    };
    let (mut best_idx, mut best_seq): (Vec<usize>, Vec<u32>) = (Vec::new(), Vec::new());
    for start in 0..len {
        for forward in [true, false] {
            let idx = walk(start, forward);
            let s: Vec<u32> = idx.iter().map(|&i| seq[i]).collect();
            if best_idx.is_empty() || s < best_seq {
                best_idx = idx;
                best_seq = s;
            }
        }
    }
    let mut order = Vec::with_capacity(g.n());
    for i in best_idx {
        forest.preorder(cycle[i], &mut order);
    }
    CanonicalLabelling::new(g, perm_from_order(&order), Scheme::TreeUnicyclic)
}

/// Canonical labelling for graphs whose components each contain at most one
/// cycle. Trees are rooted at their centre (the smaller certificate wins when
/// there are two); unicyclic components read the cycle from the rotation and
/// direction whose sequence of hanging-tree ids is lexicographically least.
pub fn label_tree_unicyclic(g: &Graph) -> Result<CanonicalLabelling, AlgoError> {
    per_component(g, Scheme::TreeUnicyclic, |h| {
        if h.m() < h.n() {
            Ok(label_tree(h))
        } else if h.m() == h.n() {
            Ok(label_unicyclic(h))
        } else {
            Err(AlgoError::NotApplicable(
                "component has more than one cycle".into(),
            ))
        }
    })
}
