//! Automorphism enumeration for small graphs, the check that automorphisms
//! act on the 2-core only through the known exception types, and explicit
//! construction of such exceptional automorphisms in large graphs.

use std::collections::{BTreeMap, BTreeSet};

use super::RootedForest;
use crate::cores::{decompose, CoreDecomposition};
use crate::error::AlgoError;
use crate::graph::Graph;
use crate::refinement::stable_colouring;

/// Largest vertex count `brute_aut` accepts.
pub const DEFAULT_AUT_CAP: usize = 14;
const MAX_AUTOMORPHISMS: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutMode {
    /// Every automorphism.
    All,
    /// One witness automorphism per distinct action on the 2-core.
    CoreActions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub mode: AutMode,
    /// Image arrays, each checked against the edge set.
    pub automorphisms: Vec<Vec<usize>>,
}

pub fn is_automorphism(g: &Graph, map: &[usize]) -> bool {
    if map.len() != g.n() {
        return false;
    }
    let mut hit = vec![false; g.n()];
    for &x in map {
        if x >= g.n() || hit[x] {
            return false;
        }
        hit[x] = true;
    }
    g.edges().all(|(u, v)| g.has_edge(map[u], map[v]))
}

/// Enumerates automorphisms by backtracking within stable colour classes.
pub fn brute_aut(g: &Graph, mode: AutMode) -> Result<AutomorphismReport, AlgoError> {
    let n = g.n();
    if n > DEFAULT_AUT_CAP {
        return Err(AlgoError::CapExceeded {
            n,
            cap: DEFAULT_AUT_CAP,
        });
    }
    let c = stable_colouring(g);
    let dec = decompose(g);
    let mut order: Vec<usize> = dec.v2.clone();
    let split = order.len();
    order.extend((0..n).filter(|&v| !dec.in_core(v)));
    let mut bt = Backtrack {
        g,
        colour: c.ids(),
        order: &order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
    };
    match mode {
        AutMode::All => bt.all(0)?,
        AutMode::CoreActions => bt.core_actions(0, split)?,
    }
    let automorphisms = bt.found;
    debug_assert!(automorphisms.iter().all(|a| is_automorphism(g, a)));
    Ok(AutomorphismReport {
        mode,
        automorphisms,
    })
}

struct Backtrack<'a> {
    g: &'a Graph,
    colour: &'a [u32],
    order: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl Backtrack<'_> {
    fn candidates(&self, depth: usize) -> Vec<usize> {
        let v = self.order[depth];
        (0..self.g.n())
            .filter(|&x| !self.used[x] && self.colour[x] == self.colour[v])
            .filter(|&x| {
                self.order[..depth].iter().all(|&u| {
                    self.g.has_edge(v, u) == self.g.has_edge(x, self.image[u])
                })
            })
            .collect()
    }

    fn all(&mut self, depth: usize) -> Result<(), AlgoError> {
        if depth == self.order.len() {
            if self.found.len() >= MAX_AUTOMORPHISMS {
                return Err(AlgoError::CapExceeded {
                    n: self.found.len(),
                    cap: MAX_AUTOMORPHISMS,
                });
            }
            self.found.push(self.image.clone());
            return Ok(());
        }
        let v = self.order[depth];
        for x in self.candidates(depth) {
            self.image[v] = x;
            self.used[x] = true;
            self.all(depth + 1)?;
            self.used[x] = false;
        }
        self.image[v] = usize::MAX;
        Ok(())
    }

    /// Finds one completion of the current partial map.
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for x in self.candidates(depth) {
            self.image[v] = x;
            self.used[x] = true;
            let ok = self.extend(depth + 1);
            self.used[x] = false;
            if ok {
                return true;
            }
        }
        self.image[v] = usize::MAX;
        false
    }

    fn core_actions(&mut self, depth: usize, split: usize) -> Result<(), AlgoError> {
        if depth == split {
            let saved = self.image.clone();
            let saved_used = self.used.clone();
            if self.extend(depth) {
                if self.found.len() >= MAX_AUTOMORPHISMS {
                    return Err(AlgoError::CapExceeded {
                        n: self.found.len(),
                        cap: MAX_AUTOMORPHISMS,
                    });
                }
                self.found.push(self.image.clone());
            }
            self.image = saved;
            self.used = saved_used;
            return Ok(());
        }
        let v = self.order[depth];
        for x in self.candidates(depth) {
            self.image[v] = x;
            self.used[x] = true;
            self.core_actions(depth + 1, split)?;
            self.used[x] = false;
        }
        self.image[v] = usize::MAX;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExceptionKind {
    /// A symmetry of one cycle component of the 2-core.
    CycleSymmetry,
    /// An exchange of two cycle components of equal length.
    CycleSwap,
    /// An exchange of bare paths with the same end vertices (a closed path
    /// counts as having both ends at its base vertex).
    ParallelPaths,
    /// A reversal of a closed bare path.
    ClosedPathFlip,
}

/// Exception configurations present in a graph, whether or not any
/// automorphism realises them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configurations {
    pub cycle_components: usize,
    pub equal_length_cycle_pairs: usize,
    pub parallel_path_groups: usize,
    pub closed_paths: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characterisation {
    pub holds: bool,
    pub violations: Vec<String>,
    pub exceptions_used: BTreeSet<ExceptionKind>,
    pub configurations: Configurations,
}

fn configurations(dec: &CoreDecomposition) -> Configurations {
    let mut lens: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &dec.cycles {
        *lens.entry(c.len()).or_default() += 1;
    }
    let mut groups: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for p in &dec.bare_paths {
        let (a, b) = (p[0], *p.last().unwrap());
        *groups.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    Configurations {
        cycle_components: dec.cycles.len(),
        equal_length_cycle_pairs: lens.values().map(|&k| k * (k - 1) / 2).sum(),
        parallel_path_groups: groups.values().filter(|&&k| k > 1).count(),
        closed_paths: dec.bare_paths.iter().filter(|p| p[0] == *p.last().unwrap()).count(),
    }
}

/// Checks that every listed automorphism fixes each branch vertex of the
/// 2-core and moves other 2-core vertices only by cycle-component
/// symmetries or swaps, exchanges of parallel bare paths, or flips of closed
/// bare paths.
pub fn check_aut_characterisation(g: &Graph, report: &AutomorphismReport) -> Characterisation {
    let dec = decompose(g);
    let mut violations = Vec::new();
    let mut used = BTreeSet::new();

    let mut cycle_of = vec![usize::MAX; g.n()];
    for (i, c) in dec.cycles.iter().enumerate() {
        for &v in c {
            cycle_of[v] = i;
        }
    }
    let mut path_of = vec![usize::MAX; g.n()];
    for (i, p) in dec.bare_paths.iter().enumerate() {
        for &v in &p[1..p.len() - 1] {
            path_of[v] = i;
        }
    }

    for (k, sigma) in report.automorphisms.iter().enumerate() {
        if !is_automorphism(g, sigma) {
            violations.push(format!("map {k} is not an automorphism"));
            continue;
        }
        for &v in &dec.v23 {
            if sigma[v] != v {
                violations.push(format!("map {k} moves branch vertex {v} to {}", sigma[v]));
            }
        }
        for (i, cyc) in dec.cycles.iter().enumerate() {
            if cyc.iter().all(|&v| sigma[v] == v) {
                continue;
            }
            let j = cycle_of[sigma[cyc[0]]];
            if j == usize::MAX {
                violations.push(format!("map {k} sends cycle {i} outside the cycle components"));
            } else if j == i {
                used.insert(ExceptionKind::CycleSymmetry);
            } else {
                used.insert(ExceptionKind::CycleSwap);
            }
        }
        for (i, path) in dec.bare_paths.iter().enumerate() {
            let inner = &path[1..path.len() - 1];
            if inner.iter().all(|&v| sigma[v] == v) {
                continue;
            }
            let j = path_of[sigma[inner[0]]];
            if j == usize::MAX {
                violations.push(format!("map {k} sends bare path {i} off the bare paths"));
                continue;
            }
            let image: Vec<usize> = path.iter().map(|&v| sigma[v]).collect();
            let target = &dec.bare_paths[j];
            let reversed: Vec<usize> = target.iter().rev().copied().collect();
            let closed = path[0] == *path.last().unwrap();
            if image != *target && image != reversed {
                violations.push(format!("map {k} does not carry bare path {i} onto a bare path"));
            } else if j != i {
                used.insert(ExceptionKind::ParallelPaths);
            } else if closed {
                used.insert(ExceptionKind::ClosedPathFlip);
            } else {
                violations.push(format!("map {k} reverses open bare path {i}"));
            }
        }
    }
    Characterisation {
        holds: violations.is_empty(),
        violations,
        exceptions_used: used,
        configurations: configurations(&dec),
    }
}

/// An automorphism built to realise one exception configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionMap {
    pub kind: ExceptionKind,
    pub map: Vec<usize>,
    pub verified: bool,
}

/// Looks for exception configurations whose hanging trees line up and builds
/// the corresponding automorphisms, mapping hanging trees onto each other by
/// rooted-tree isomorphism. Every returned map is checked against the edge
/// set; `verified` records the outcome.
pub fn construct_exception_automorphisms(g: &Graph) -> Vec<ExceptionMap> {
    let dec = decompose(g);
    let in_core: Vec<bool> = (0..g.n()).map(|v| dec.in_core(v)).collect();
    let forest = RootedForest::build(g, &dec.v2, &in_core);
    let tree_id = |v: usize| forest.id[v];
    let mut out = Vec::new();

    // Extends `map` by sending the hanging tree of `a` onto that of `b`.
    let map_tree = |map: &mut Vec<usize>, a: usize, b: usize| {
        let (mut pa, mut pb) = (Vec::new(), Vec::new());
        forest.preorder(a, &mut pa);
        forest.preorder(b, &mut pb);
        for (x, y) in pa.into_iter().zip(pb) {
            map[x] = y;
        }
    };
    let identity: Vec<usize> = (0..g.n()).collect();
    let mut push = |kind: ExceptionKind, map: Vec<usize>| {
        let verified = is_automorphism(g, &map);
        out.push(ExceptionMap {
            kind,
            map,
            verified,
        });
    };

    // Positions of one cyclic sequence that reproduce another under a
    // rotation or reflection (other than the identity when `skip_identity`).
    let align = |a: &[usize], b: &[usize], skip_identity: bool| -> Option<Vec<usize>> {
        let len = a.len();
        if len != b.len() {
            return None;
        }
        for start in 0..len {
            for forward in [true, false] {
                if skip_identity && start == 0 && forward {
                    continue;
                }
                let idx = |i: usize| if forward { (start + i) % len } else { (start + len - i) % len };
                if (0..len).all(|i| tree_id(a[i]) == tree_id(b[idx(i)])) {
                    return Some((0..len).map(|i| b[idx(i)]).collect());
                }
            }
        }
        None
    };

    for cyc in &dec.cycles {
        if let Some(target) = align(cyc, cyc, true) {
            let mut map = identity.clone();
            for (i, &v) in cyc.iter().enumerate() {
                map_tree(&mut map, v, target[i]);
            }
            push(ExceptionKind::CycleSymmetry, map);
        }
    }
    for i in 0..dec.cycles.len() {
        for j in i + 1..dec.cycles.len() {
            let (a, b) = (&dec.cycles[i], &dec.cycles[j]);
            if let Some(target) = align(a, b, false) {
                let mut map = identity.clone();
                for (k, &v) in a.iter().enumerate() {
                    map_tree(&mut map, v, target[k]);
                    map_tree(&mut map, target[k], v);
                }
                push(ExceptionKind::CycleSwap, map);
            }
        }
    }

    let inner = |p: &Vec<usize>| p[1..p.len() - 1].to_vec();
    let same_trees = |x: &[usize], y: &[usize]| {
        x.len() == y.len() && x.iter().zip(y).all(|(&a, &b)| tree_id(a) == tree_id(b))
    };
    let paths = &dec.bare_paths;
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let (p, q) = (&paths[i], &paths[j]);
            let (pi, mut qi) = (inner(p), inner(q));
            if pi.is_empty() || pi.len() != qi.len() {
                continue;
            }
            let (pa, pb) = (p[0], *p.last().unwrap());
            let (qa, qb) = (q[0], *q.last().unwrap());
            if (pa, pb) == (qb, qa) && pa != pb {
                qi.reverse();
            } else if (pa, pb) != (qa, qb) {
                continue;
            }
            if !same_trees(&pi, &qi) {
                if pa == pb {
                    qi.reverse();
                }
                if !same_trees(&pi, &qi) {
                    continue;
                }
            }
            let mut map = identity.clone();
            for (&x, &y) in pi.iter().zip(&qi) {
                map_tree(&mut map, x, y);
                map_tree(&mut map, y, x);
            }
            push(ExceptionKind::ParallelPaths, map);
        }
    }
    for p in paths {
        if p[0] != *p.last().unwrap() {
            continue;
        }
        let pi = inner(p);
        let rev: Vec<usize> = pi.iter().rev().copied().collect();
        if same_trees(&pi, &rev) {
            let mut map = identity.clone();
            for (&x, &y) in pi.iter().zip(&rev) {
                map_tree(&mut map, x, y);
            }
            push(ExceptionKind::ClosedPathFlip, map);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: &Graph) -> usize {
        brute_aut(g, AutMode::All).unwrap().automorphisms.len()
    }

    #[test]
    fn small_groups() {
        assert_eq!(count(&Graph::cycle(4)), 8);
        assert_eq!(count(&Graph::path(3)), 2);
        assert_eq!(count(&Graph::petersen()), 120);
        // Legs of lengths 1, 2 and 3 from vertex 0.
        let asym = Graph::from_edges(7, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)]).unwrap();
        assert_eq!(count(&asym), 1);
        assert!(brute_aut(&Graph::empty(15), AutMode::All).is_err());
    }

    #[test]
    fn characterisation_examples() {
        let forest = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let r = brute_aut(&forest, AutMode::All).unwrap();
        assert!(check_aut_characterisation(&forest, &r).holds);

        let two_c5 = Graph::disjoint_copies(&Graph::cycle(5), 2);
        let r = brute_aut(&two_c5, AutMode::All).unwrap();
        assert_eq!(r.automorphisms.len(), 200);
        let ch = check_aut_characterisation(&two_c5, &r);
        assert!(ch.holds);
        assert!(ch.exceptions_used.contains(&ExceptionKind::CycleSwap));
        assert!(ch.exceptions_used.contains(&ExceptionKind::CycleSymmetry));

        // K4 moves its branch vertices.
        let k4 = Graph::complete(4);
        let r = brute_aut(&k4, AutMode::CoreActions).unwrap();
        assert!(!check_aut_characterisation(&k4, &r).holds);
    }

    #[test]
    fn closed_path_flip() {
        // Branch vertices 0 and 1 joined by paths of lengths 1, 2 and 3, so
        // they are fixed once a closed path 0-5-6-7-0 hangs off 0. A pendant
        // vertex on 6, its middle, keeps the flip available.
        let g = Graph::from_edges(
            9,
            [(0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 7), (7, 0), (6, 8)],
        )
        .unwrap();
        let r = brute_aut(&g, AutMode::All).unwrap();
        assert_eq!(r.automorphisms.len(), 2);
        let ch = check_aut_characterisation(&g, &r);
        assert!(ch.holds, "{:?}", ch.violations);
        assert!(ch.exceptions_used.contains(&ExceptionKind::ClosedPathFlip));
        let built = construct_exception_automorphisms(&g);
        assert!(built.iter().any(|e| e.kind == ExceptionKind::ClosedPathFlip && e.verified));
    }

    #[test]
    fn parallel_paths_and_cycles_constructed() {
        // Branch vertices 0 and 1 with paths of lengths 2, 2 and 3, plus a
        // separate 5-cycle. A leaf on 0 stops 0 and 1 swapping.
        let g = Graph::from_edges(
            12,
            [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1), (6, 7), (7, 8), (8, 9), (9, 10), (10, 6), (0, 11)],
        )
        .unwrap();
        let built = construct_exception_automorphisms(&g);
        assert!(built.iter().all(|e| e.verified));
        assert!(built.iter().any(|e| e.kind == ExceptionKind::ParallelPaths));
        assert!(built.iter().any(|e| e.kind == ExceptionKind::CycleSymmetry));
        let r = brute_aut(&g, AutMode::CoreActions).unwrap();
        // 10 dihedral symmetries of the cycle times the path swap.
        assert_eq!(r.automorphisms.len(), 20);
        assert!(check_aut_characterisation(&g, &r).holds);
    }
}
