//! Exact canonical labelling by an individualisation-refinement search tree
//! with automorphism pruning. Exponential in the worst case, so inputs are
//! capped.

use super::{certificate, CanonicalLabelling, Scheme};
use crate::error::AlgoError;
use crate::graph::{invert_permutation, Graph};
use crate::refinement::{stable, Colouring};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;
/// No cap passed to the search may exceed this.
pub const HARD_EXHAUSTIVE_CAP: usize = 64;

/// Canonical labelling by exhaustive search; `cap` bounds the vertex count.
pub fn label_small_exhaustive(g: &Graph, cap: usize) -> Result<CanonicalLabelling, AlgoError> {
    label_small_exhaustive_coloured(g, &Colouring::trivial(g.n()), None, cap)
}

/// Exhaustive search for a graph with a vertex colouring that labellings
/// must respect. `cert_colours`, when given, is written into the
/// certificate so coloured graphs with different colours compare unequal.
pub fn label_small_exhaustive_coloured(
    g: &Graph,
    initial: &Colouring,
    cert_colours: Option<&[u32]>,
    cap: usize,
) -> Result<CanonicalLabelling, AlgoError> {
    let cap = cap.min(HARD_EXHAUSTIVE_CAP);
    if g.n() > cap {
        return Err(AlgoError::CapExceeded { n: g.n(), cap });
    }
    let root = stable(g, initial)?.0;
    let mut s = Search {
        g,
        cert_colours,
        first: None,
        best: None,
        generators: Vec::new(),
        prefix: Vec::new(),
    };
    s.explore(root)?;
    let (certificate, perm) = s.best.expect("the search reaches at least one leaf");
    Ok(CanonicalLabelling {
        perm,
        certificate,
        scheme: Scheme::Exhaustive,
    })
}

struct Search<'a> {
    g: &'a Graph,
    cert_colours: Option<&'a [u32]>,
    first: Option<(Vec<u8>, Vec<usize>)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    /// Automorphisms found so far, as image arrays.
    generators: Vec<Vec<usize>>,
    prefix: Vec<usize>,
}

impl Search<'_> {
    fn explore(&mut self, c: Colouring) -> Result<(), AlgoError> {
        if c.is_discrete() {
            self.leaf(c.ids().iter().map(|&x| x as usize).collect());
            return Ok(());
        }
        let cell = c.class_sizes().iter().position(|&s| s > 1).unwrap() as u32;
        let members: Vec<usize> = (0..self.g.n()).filter(|&v| c.colour(v) == cell).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &members {
            if !explored.is_empty() {
                let orbit = self.orbit_ids();
                if explored.iter().any(|&x| orbit[x] == orbit[w]) {
                    continue;
                }
            }
            self.prefix.push(w);
            let child = stable(self.g, &c.individualise(w))?.0;
            self.explore(child)?;
            self.prefix.pop();
            explored.push(w);
        }
        Ok(())
    }

    fn leaf(&mut self, perm: Vec<usize>) {
        let code = certificate(self.g, &perm, self.cert_colours);
        let reference = [&self.first, &self.best]
            .into_iter()
            .flatten()
            .find(|(c, _)| *c == code)
            .map(|(_, p)| p.clone());
        if let Some(ref_perm) = reference {
            // Both leaves give the same relabelled graph, so going through
            // one and back through the other is an automorphism.
            let inv = invert_permutation(&ref_perm);
            let aut: Vec<usize> = perm.iter().map(|&p| inv[p]).collect();
            if aut.iter().enumerate().any(|(v, &x)| v != x) {
                self.generators.push(aut);
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), perm.clone()));
        }
        match &self.best {
            Some((b, _)) if *b <= code => {}
            _ => self.best = Some((code, perm)),
        }
    }

    /// Orbit representative per vertex under the known automorphisms that
    /// fix the current prefix pointwise.
    fn orbit_ids(&self) -> Vec<usize> {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gen in &self.generators {
            if self.prefix.iter().any(|&v| gen[v] != v) {
                continue;
            }
            for v in 0..n {
                let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_permutation, RngSeed};
    use rand::seq::SliceRandom;

    #[test]
    fn petersen_relabellings() {
        let p = Graph::petersen();
        let base = label_small_exhaustive(&p, 24).unwrap().certificate;
        for t in 0..50 {
            let mut perm: Vec<usize> = (0..10).collect();
            perm.shuffle(&mut RngSeed::new(t, 0).rng());
            let h = apply_permutation(&p, &perm).unwrap();
            assert_eq!(label_small_exhaustive(&h, 24).unwrap().certificate, base);
        }
    }

    #[test]
    fn complete_graph_identity() {
        let k4 = Graph::complete(4);
        let lab = label_small_exhaustive(&k4, 24).unwrap();
        assert_eq!(lab.certificate, certificate(&k4, &[0, 1, 2, 3], None));
    }

    #[test]
    fn cubic_graphs_on_eight_vertices() {
        // The cube and the Wagner graph are both 3-regular on 8 vertices.
        let cube = Graph::from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]).unwrap();
        let wagner = Graph::from_edges(8, (0..8).map(|i| (i, (i + 1) % 8)).chain((0..4).map(|i| (i, i + 4)))).unwrap();
        let a = label_small_exhaustive(&cube, 24).unwrap();
        let b = label_small_exhaustive(&wagner, 24).unwrap();
        assert_ne!(a.certificate, b.certificate);
    }

    #[test]
    fn cap() {
        assert!(matches!(
            label_small_exhaustive(&Graph::empty(25), 24),
            Err(AlgoError::CapExceeded { .. })
        ));
    }

    #[test]
    fn certificate_is_a_relabelling_of_the_input() {
        for t in 0..30 {
            let g = crate::graph::gnp(7, 0.4, RngSeed::new(t, 31)).unwrap();
            let lab = label_small_exhaustive(&g, 24).unwrap();
            assert_eq!(certificate(&g, &lab.perm, None), lab.certificate);
            let mut perm: Vec<usize> = (0..7).collect();
            perm.shuffle(&mut RngSeed::new(t, 32).rng());
            let h = apply_permutation(&g, &perm).unwrap();
            assert_eq!(label_small_exhaustive(&h, 24).unwrap().certificate, lab.certificate);
        }
    }
}
