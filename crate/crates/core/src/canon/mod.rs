//! Canonical labelling schemes, an isomorphism tester built on them, and
//! automorphism tooling.
//!
//! A labelling is a permutation `perm` (vertex `v` gets label `perm[v]`)
//! together with the certificate of the relabelled graph. Within the family
//! of inputs a scheme accepts, isomorphic graphs get byte-identical
//! certificates.

mod aut;
mod iso;
mod search;
mod trees;

use std::fmt;

pub use aut::{
    brute_aut, check_aut_characterisation, construct_exception_automorphisms, is_automorphism,
    AutMode, AutomorphismReport, Characterisation, ExceptionKind, ExceptionMap, DEFAULT_AUT_CAP,
};
pub use iso::{isomorphic, IsoVerdict};
pub use search::{label_small_exhaustive, label_small_exhaustive_coloured, DEFAULT_EXHAUSTIVE_CAP, HARD_EXHAUSTIVE_CAP};
pub use trees::label_tree_unicyclic;
pub(crate) use trees::RootedForest;

use crate::cores::decompose;
use crate::disparity::disparity;
use crate::error::AlgoError;
use crate::graph::{components, invert_permutation, Graph};
use crate::refinement::{stable, stable_colouring, Colouring};
use crate::wl2::{wl2_vertex_colouring, MAX_WL2_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    DiscreteCr,
    Ir,
    TreeUnicyclic,
    Exhaustive,
    DisparityCr,
    DisparityWl2,
    V23,
    Assembled,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::DiscreteCr => "discrete-cr",
            Scheme::Ir => "ir",
            Scheme::TreeUnicyclic => "tree-unicyclic",
            Scheme::Exhaustive => "exhaustive",
            Scheme::DisparityCr => "disparity-cr",
            Scheme::DisparityWl2 => "disparity-wl2",
            Scheme::V23 => "v23",
            Scheme::Assembled => "assembled",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalLabelling {
    pub perm: Vec<usize>,
    pub certificate: Vec<u8>,
    pub scheme: Scheme,
}

impl CanonicalLabelling {
    /// Builds the labelling and its certificate from a permutation.
    pub fn new(g: &Graph, perm: Vec<usize>, scheme: Scheme) -> Self {
        let certificate = certificate(g, &perm, None);
        CanonicalLabelling {
            perm,
            certificate,
            scheme,
        }
    }

    pub fn certificate_hex(&self) -> String {
        self.certificate.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Byte encoding of the graph relabelled by `perm`: the vertex count as a
/// big-endian u64, then either a zero byte or a one byte followed by the
/// colour of each label position as big-endian u32, then the upper triangle
/// of the adjacency matrix row by row, most significant bit first.
pub fn certificate(g: &Graph, perm: &[usize], colours: Option<&[u32]>) -> Vec<u8> {
    let n = g.n();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(9 + 4 * n + pairs.div_ceil(8));
    out.extend_from_slice(&(n as u64).to_be_bytes());
    match colours {
        None => out.push(0),
        Some(cols) => {
            out.push(1);
            let inv = invert_permutation(perm);
            for &v in &inv {
                out.extend_from_slice(&cols[v].to_be_bytes());
            }
        }
    }
    let base = out.len();
    out.resize(base + pairs.div_ceil(8), 0);
    for (u, v) in g.edges() {
        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        let bit = pair_index(n, a, b);
        out[base + bit / 8] |= 0x80 >> (bit % 8);
    }
    out
}

fn not_applicable(msg: impl Into<String>) -> AlgoError {
    AlgoError::NotApplicable(msg.into())
}

fn colouring_perm(c: &Colouring) -> Vec<usize> {
    c.ids().iter().map(|&x| x as usize).collect()
}

/// Orders vertices by their stable colour; needs a discrete stable colouring.
pub fn label_discrete_cr(g: &Graph) -> Result<CanonicalLabelling, AlgoError> {
    let c = stable_colouring(g);
    if !c.is_discrete() {
        return Err(not_applicable("stable colouring not discrete"));
    }
    Ok(CanonicalLabelling::new(g, colouring_perm(&c), Scheme::DiscreteCr))
}

/// Refines, then repeatedly singles out the lowest-id vertex of the
/// lowest-coloured non-singleton class and refines again until discrete.
///
/// Canonical on graphs that colour refinement identifies up to isomorphism;
/// on other inputs the certificate may depend on vertex ids.
pub fn label_ir(g: &Graph) -> CanonicalLabelling {
    label_ir_coloured(g, &Colouring::trivial(g.n())).expect("trivial colouring fits")
}

/// [`label_ir`] starting from a given colouring.
pub fn label_ir_coloured(g: &Graph, initial: &Colouring) -> Result<CanonicalLabelling, AlgoError> {
    let mut c = stable(g, initial)?.0;
    while !c.is_discrete() {
        let cell = c.class_sizes().iter().position(|&s| s > 1).unwrap() as u32;
        let v = (0..g.n()).find(|&v| c.colour(v) == cell).unwrap();
        c = stable(g, &c.individualise(v))?.0;
    }
    Ok(CanonicalLabelling::new(g, colouring_perm(&c), Scheme::Ir))
}

/// Combines labellings of vertex-disjoint pieces covering `g`. Pieces are
/// ordered by certificate; equal certificates mean isomorphic pieces, so
/// their relative order does not affect the result.
pub fn assemble_components(
    g: &Graph,
    mut parts: Vec<(Vec<usize>, CanonicalLabelling)>,
) -> CanonicalLabelling {
    parts.sort_by(|a, b| a.1.certificate.cmp(&b.1.certificate));
    let mut perm = vec![usize::MAX; g.n()];
    let mut offset = 0;
    for (vertices, lab) in &parts {
        for (i, &v) in vertices.iter().enumerate() {
            perm[v] = offset + lab.perm[i];
        }
        offset += vertices.len();
    }
    debug_assert!(perm.iter().all(|&p| p != usize::MAX));
    CanonicalLabelling::new(g, perm, Scheme::Assembled)
}

/// Disjoint union of labelled graphs, labelled by assembling the parts.
pub fn assemble_disjoint(parts: &[(Graph, CanonicalLabelling)]) -> (Graph, CanonicalLabelling) {
    let union = Graph::disjoint_union(&parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
    let mut offset = 0;
    let mut pieces = Vec::with_capacity(parts.len());
    for (h, lab) in parts {
        pieces.push(((offset..offset + h.n()).collect(), lab.clone()));
        offset += h.n();
    }
    let lab = assemble_components(&union, pieces);
    (union, lab)
}

/// Labels each connected component with `f` and assembles the results.
fn per_component(
    g: &Graph,
    scheme: Scheme,
    mut f: impl FnMut(&Graph) -> Result<CanonicalLabelling, AlgoError>,
) -> Result<CanonicalLabelling, AlgoError> {
    let comps = components(g);
    let mut parts = Vec::with_capacity(comps.len());
    for comp in comps {
        let h = g.induced_subgraph(&comp);
        let lab = f(&h)?;
        parts.push((comp, lab));
    }
    let mut lab = assemble_components(g, parts);
    lab.scheme = scheme;
    Ok(lab)
}

/// Which vertex colouring the disparity scheme is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisparityMode {
    Cr,
    Wl2,
}

/// Default largest disparity component handed to the exhaustive labeller.
pub fn default_disparity_cap(n: usize) -> usize {
    let log = if n <= 1 { 0.0 } else { (n as f64).log2() };
    ((3.0 * log).ceil() as usize)
        .max(DEFAULT_EXHAUSTIVE_CAP)
        .min(HARD_EXHAUSTIVE_CAP)
}

/// The colouring the disparity scheme uses.
pub fn scheme_colouring(g: &Graph, mode: DisparityMode) -> Result<Colouring, AlgoError> {
    match mode {
        DisparityMode::Cr => Ok(stable_colouring(g)),
        DisparityMode::Wl2 => wl2_vertex_colouring(g, &Colouring::trivial(g.n())),
    }
}

/// Labels the disparity graph component by component as a coloured graph,
/// then orders the vertices by (colour, disparity label).
///
/// `cap` bounds the component size (default [`default_disparity_cap`]).
pub fn label_via_disparity(
    g: &Graph,
    mode: DisparityMode,
    cap: Option<usize>,
) -> Result<CanonicalLabelling, AlgoError> {
    let n = g.n();
    let cap = cap.unwrap_or_else(|| default_disparity_cap(n)).min(HARD_EXHAUSTIVE_CAP);
    let c = scheme_colouring(g, mode)?;
    let d = disparity(g, &c)?;
    let comps = components(&d);
    if let Some(big) = comps.iter().find(|x| x.len() > cap) {
        return Err(not_applicable(format!(
            "disparity component of size {} exceeds cap {cap}",
            big.len()
        )));
    }
    let mut parts = Vec::with_capacity(comps.len());
    for comp in comps {
        let h = d.induced_subgraph(&comp);
        let cols: Vec<u32> = comp.iter().map(|&v| c.colour(v)).collect();
        let lab = label_small_exhaustive_coloured(&h, &Colouring::from_ids(&cols), Some(&cols), cap)?;
        parts.push((comp, lab));
    }
    let d_lab = assemble_components(&d, parts);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (c.colour(v), d_lab.perm[v]));
    let mut perm = vec![0; n];
    for (rank, &v) in order.iter().enumerate() {
        perm[v] = rank;
    }
    let scheme = match mode {
        DisparityMode::Cr => Scheme::DisparityCr,
        DisparityMode::Wl2 => Scheme::DisparityWl2,
    };
    Ok(CanonicalLabelling::new(g, perm, scheme))
}

/// Components with branch vertices go through [`label_ir`], which requires
/// their branch vertices to have distinct stable colours; trees and
/// unicyclic components go through [`label_tree_unicyclic`].
pub fn label_via_v23(g: &Graph) -> Result<CanonicalLabelling, AlgoError> {
    per_component(g, Scheme::V23, |h| {
        let dec = decompose(h);
        if dec.v23.is_empty() {
            return label_tree_unicyclic(h);
        }
        let c = stable_colouring(h);
        let mut cols: Vec<u32> = dec.v23.iter().map(|&v| c.colour(v)).collect();
        cols.sort_unstable();
        if cols.windows(2).any(|w| w[0] == w[1]) {
            return Err(not_applicable("V23 colours not distinct"));
        }
        Ok(label_ir(h))
    })
}

/// Applicability of each scheme, with the reason when it does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeReport {
    pub entries: Vec<(Scheme, Result<(), String>)>,
}

impl SchemeReport {
    pub fn applicable(&self, scheme: Scheme) -> Option<bool> {
        self.entries
            .iter()
            .find(|(s, _)| *s == scheme)
            .map(|(_, r)| r.is_ok())
    }
}

/// Runs every scheme that fits within its size limits and records whether
/// it applies. Individualisation-refinement is left out: it always returns a
/// labelling, and whether that labelling is canonical is not decidable from
/// its own output.
pub fn scheme_report(g: &Graph) -> SchemeReport {
    let verdict = |r: Result<CanonicalLabelling, AlgoError>| r.map(|_| ()).map_err(|e| e.to_string());
    let mut entries = vec![
        (Scheme::DiscreteCr, verdict(label_discrete_cr(g))),
        (Scheme::V23, verdict(label_via_v23(g))),
        (Scheme::TreeUnicyclic, verdict(label_tree_unicyclic(g))),
        (Scheme::DisparityCr, verdict(label_via_disparity(g, DisparityMode::Cr, None))),
    ];
    if g.n() <= MAX_WL2_VERTICES {
        entries.push((
            Scheme::DisparityWl2,
            verdict(label_via_disparity(g, DisparityMode::Wl2, None)),
        ));
    }
    entries.push((
        Scheme::Exhaustive,
        verdict(label_small_exhaustive(g, DEFAULT_EXHAUSTIVE_CAP)),
    ));
    SchemeReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_permutation, gnp, RngSeed};
    use rand::seq::SliceRandom;

    fn random_perm(n: usize, seed: u64) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut RngSeed::new(seed, 1000).rng());
        p
    }

    #[test]
    fn certificate_layout() {
        let k3 = Graph::complete(3);
        let c = certificate(&k3, &[0, 1, 2], None);
        assert_eq!(c, vec![0, 0, 0, 0, 0, 0, 0, 3, 0, 0b1110_0000]);
        let p3 = Graph::path(3);
        // Edges 01 and 12; pair order is 01, 02, 12.
        assert_eq!(certificate(&p3, &[0, 1, 2], None)[9], 0b1010_0000);
        assert_eq!(certificate(&p3, &[1, 0, 2], None)[9], 0b1100_0000);
        let col = certificate(&p3, &[0, 1, 2], Some(&[5, 6, 7]));
        assert_eq!(&col[8..13], &[1, 0, 0, 0, 5]);
    }

    #[test]
    fn discrete_cr() {
        assert!(matches!(
            label_discrete_cr(&Graph::cycle(6)),
            Err(AlgoError::NotApplicable(_))
        ));
        assert_eq!(label_discrete_cr(&Graph::empty(1)).unwrap().perm, vec![0]);
        let g = gnp(128, 0.5, RngSeed::new(1, 0)).unwrap();
        let a = label_discrete_cr(&g).unwrap();
        let h = apply_permutation(&g, &random_perm(128, 3)).unwrap();
        assert_eq!(a.certificate, label_discrete_cr(&h).unwrap().certificate);
    }

    #[test]
    fn ir_on_paths() {
        let p4 = Graph::path(4);
        let base = label_ir(&p4).certificate;
        for t in 0..24 {
            let h = apply_permutation(&p4, &random_perm(4, t)).unwrap();
            assert_eq!(label_ir(&h).certificate, base);
        }
    }

    #[test]
    fn assembly_orders_by_certificate() {
        let c3 = Graph::cycle(3);
        let c4 = Graph::cycle(4);
        let l3 = label_ir(&c3);
        let l4 = label_ir(&c4);
        let (u1, a) = assemble_disjoint(&[(c4.clone(), l4.clone()), (c3.clone(), l3.clone())]);
        let (u2, b) = assemble_disjoint(&[(c3.clone(), l3.clone()), (c4, l4)]);
        assert_eq!(a.certificate, b.certificate);
        // The triangle has the smaller certificate, so it takes labels 0..3.
        assert!(a.perm[4..].iter().all(|&p| p < 3));
        assert!(u1 != u2);
        let (_, same) = assemble_disjoint(&[(c3.clone(), l3.clone()), (c3.clone(), l3.clone())]);
        assert_eq!(same.perm.len(), 6);
        let (_, single) = assemble_disjoint(&[(c3.clone(), l3.clone())]);
        assert_eq!(single.certificate, l3.certificate);
    }

    #[test]
    fn disparity_scheme() {
        let c5 = Graph::cycle(5);
        let base = label_via_disparity(&c5, DisparityMode::Cr, None).unwrap().certificate;
        for t in 0..20 {
            let h = apply_permutation(&c5, &random_perm(5, t)).unwrap();
            assert_eq!(label_via_disparity(&h, DisparityMode::Cr, None).unwrap().certificate, base);
        }
        let g = gnp(40, 0.5, RngSeed::new(2, 2)).unwrap();
        let disc = label_discrete_cr(&g).unwrap();
        let via = label_via_disparity(&g, DisparityMode::Cr, None).unwrap();
        assert_eq!(disc.perm, via.perm);
        assert!(matches!(
            label_via_disparity(&c5, DisparityMode::Cr, Some(4)),
            Err(AlgoError::NotApplicable(_))
        ));
    }

    #[test]
    fn v23_scheme() {
        let theta = Graph::from_edges(8, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 6), (6, 7), (7, 1)]).unwrap();
        assert!(matches!(label_via_v23(&theta), Err(AlgoError::NotApplicable(_))));
        let forest = Graph::from_edges(7, [(0, 1), (1, 2), (3, 4), (4, 5), (4, 6)]).unwrap();
        assert!(label_via_v23(&forest).is_ok());
        let g = gnp(300, 2.0 / 300.0, RngSeed::new(5, 5)).unwrap();
        if let Ok(a) = label_via_v23(&g) {
            let h = apply_permutation(&g, &random_perm(300, 9)).unwrap();
            assert_eq!(label_via_v23(&h).unwrap().certificate, a.certificate);
        }
    }

    #[test]
    fn report_lists_schemes() {
        let r = scheme_report(&Graph::cycle(6));
        assert_eq!(r.applicable(Scheme::DiscreteCr), Some(false));
        assert_eq!(r.applicable(Scheme::TreeUnicyclic), Some(true));
        assert_eq!(r.applicable(Scheme::Exhaustive), Some(true));
    }
}
