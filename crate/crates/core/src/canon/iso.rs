use super::{
    label_discrete_cr, label_small_exhaustive, label_via_disparity, label_via_v23,
    CanonicalLabelling, DisparityMode, Scheme, DEFAULT_EXHAUSTIVE_CAP,
};
use crate::error::AlgoError;
use crate::graph::{invert_permutation, Graph};
use crate::refinement::stable_colouring;
use crate::wl2::MAX_WL2_VERTICES;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `mapping[v]` is the image in the second graph of vertex `v` of the
    /// first; it has been checked edge by edge.
    Isomorphic { mapping: Vec<usize>, scheme: Scheme },
    NonIsomorphic { reason: String },
    Inconclusive,
}

fn non_iso(reason: impl Into<String>) -> IsoVerdict {
    IsoVerdict::NonIsomorphic {
        reason: reason.into(),
    }
}

/// Whether `mapping` sends the edges of `g` exactly onto the edges of `h`.
pub(crate) fn verify_mapping(g: &Graph, h: &Graph, mapping: &[usize]) -> bool {
    g.n() == h.n() && g.m() == h.m() && g.edges().all(|(u, v)| h.has_edge(mapping[u], mapping[v]))
}

/// Decides isomorphism using invariants and, in order, the discrete
/// refinement, branch-vertex, 2-WL disparity and exhaustive schemes.
///
/// A scheme settles the question only when it applies to both graphs (its
/// applicability is itself an invariant, so differing verdicts prove
/// non-isomorphism). Equal certificates give a bijection that is checked
/// before it is returned.
pub fn isomorphic(g: &Graph, h: &Graph) -> IsoVerdict {
    if g.n() != h.n() {
        return non_iso("vertex counts differ");
    }
    if g.m() != h.m() {
        return non_iso("edge counts differ");
    }
    let mut dg = g.degree_sequence();
    let mut dh = h.degree_sequence();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return non_iso("degree sequences differ");
    }
    let n = g.n();
    let union = Graph::disjoint_union(&[g.clone(), h.clone()]);
    let c = stable_colouring(&union);
    let mut cg: Vec<u32> = c.ids()[..n].to_vec();
    let mut ch: Vec<u32> = c.ids()[n..].to_vec();
    cg.sort_unstable();
    ch.sort_unstable();
    if cg != ch {
        return non_iso("stable colour multisets differ");
    }

    type Labeller = fn(&Graph) -> Result<CanonicalLabelling, AlgoError>;
    let mut schemes: Vec<(Scheme, Labeller)> = vec![
        (Scheme::DiscreteCr, label_discrete_cr),
        (Scheme::V23, label_via_v23),
    ];
    if n <= MAX_WL2_VERTICES {
        schemes.push((Scheme::DisparityWl2, |x| label_via_disparity(x, DisparityMode::Wl2, None)));
    }
    if n <= DEFAULT_EXHAUSTIVE_CAP {
        schemes.push((Scheme::Exhaustive, |x| label_small_exhaustive(x, DEFAULT_EXHAUSTIVE_CAP)));
    }
    for (scheme, label) in schemes {
        match (label(g), label(h)) {
            (Ok(a), Ok(b)) => {
                if a.certificate != b.certificate {
                    return non_iso(format!("{scheme} certificates differ"));
                }
                let inv_h = invert_permutation(&b.perm);
                let mapping: Vec<usize> = a.perm.iter().map(|&p| inv_h[p]).collect();
                if verify_mapping(g, h, &mapping) {
                    return IsoVerdict::Isomorphic { mapping, scheme };
                }
                // Equal certificates always yield a valid bijection; reaching
                // here would be a bug, so refuse to answer.
                return IsoVerdict::Inconclusive;
            }
            (Err(AlgoError::NotApplicable(_)), Err(AlgoError::NotApplicable(_))) => continue,
            (Err(AlgoError::NotApplicable(_)), Ok(_)) | (Ok(_), Err(AlgoError::NotApplicable(_))) => {
                return non_iso(format!("{scheme} applies to only one graph"));
            }
            _ => continue,
        }
    }
    IsoVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_permutation, gnp, RngSeed};

    #[test]
    fn relabelled_copy() {
        let g = gnp(30, 0.2, RngSeed::new(1, 1)).unwrap();
        let perm: Vec<usize> = (0..30).map(|v| (v * 7 + 2) % 30).collect();
        let h = apply_permutation(&g, &perm).unwrap();
        match isomorphic(&g, &h) {
            IsoVerdict::Isomorphic { mapping, .. } => assert!(verify_mapping(&g, &h, &mapping)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cycles() {
        let c6 = Graph::cycle(6);
        let two_c3 = Graph::disjoint_copies(&Graph::cycle(3), 2);
        assert!(matches!(isomorphic(&c6, &two_c3), IsoVerdict::NonIsomorphic { .. }));
        assert!(matches!(isomorphic(&c6, &Graph::cycle(6)), IsoVerdict::Isomorphic { .. }));
    }
}
