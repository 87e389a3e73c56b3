//! Seeded trials for each experiment kind.
//!
//! Trial `t` draws everything from `RngSeed::new(spec.seed, t)` and its
//! children, so records do not depend on the order trials run in.

use std::time::Instant;

use graphcanon::canon::{
    brute_aut, check_aut_characterisation, construct_exception_automorphisms, label_discrete_cr,
    label_small_exhaustive, label_tree_unicyclic, label_via_disparity, label_via_v23, AutMode,
    CanonicalLabelling, DisparityMode, DEFAULT_EXHAUSTIVE_CAP,
};
use graphcanon::cores::{decompose, kcore};
use graphcanon::disparity::{disparity, stats};
use graphcanon::graph::{apply_permutation, components, gnp, sym_diff};
use graphcanon::refinement::{stable, stable_colouring};
use graphcanon::wl2::{wl2_vertex_colouring, MAX_WL2_VERTICES};
use graphcanon::{AlgoError, Colouring, Graph, RngSeed};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::spec::{ExperimentKind, ExperimentSpec, SprinkleMode, Threshold};

/// Measurements of one trial. Fields a kind does not measure stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub stream: u64,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub success: bool,
    /// The kind's headline quantity (class count, component size, degree,
    /// violation count, ...).
    pub metric: f64,
    pub bound: Option<f64>,
    pub discrete: Option<bool>,
    pub classes: Option<usize>,
    pub rounds: Option<usize>,
    pub max_component: Option<usize>,
    pub v23_size: Option<usize>,
    pub v23_collisions: Option<usize>,
    pub v23_applicable: Option<bool>,
    pub v23_invariant: Option<bool>,
    pub schemes_applicable: Option<String>,
    pub canon_mismatches: Option<usize>,
    pub aut_count: Option<usize>,
    pub aut_violations: Option<usize>,
    pub exceptions_built: Option<usize>,
    pub exceptions_verified: Option<usize>,
    pub max_degree: Option<usize>,
    pub unique_count: Option<usize>,
    pub note: Option<String>,
    pub wall_ms: f64,
}

/// Column order of the CSV output; matches the field order above.
pub const RECORD_FIELDS: &[&str] = &[
    "trial",
    "seed",
    "stream",
    "n",
    "m",
    "p",
    "success",
    "metric",
    "bound",
    "discrete",
    "classes",
    "rounds",
    "max_component",
    "v23_size",
    "v23_collisions",
    "v23_applicable",
    "v23_invariant",
    "schemes_applicable",
    "canon_mismatches",
    "aut_count",
    "aut_violations",
    "exceptions_built",
    "exceptions_verified",
    "max_degree",
    "unique_count",
    "note",
    "wall_ms",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
    pub threshold: Threshold,
    pub passed: bool,
    pub metric_min: f64,
    pub metric_max: f64,
    pub metric_mean: f64,
    pub wall_ms: f64,
}

impl Summary {
    pub fn from_records(spec: &ExperimentSpec, records: &[TrialRecord]) -> Summary {
        let successes = records.iter().filter(|r| r.success).count();
        let trials = records.len();
        let fraction = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let metrics = records.iter().map(|r| r.metric);
        let threshold = spec.threshold();
        Summary {
            kind: spec.kind,
            trials,
            successes,
            fraction,
            threshold,
            passed: trials > 0 && threshold.met(fraction),
            metric_min: metrics.clone().fold(f64::INFINITY, f64::min),
            metric_max: metrics.clone().fold(f64::NEG_INFINITY, f64::max),
            metric_mean: metrics.sum::<f64>() / trials.max(1) as f64,
            wall_ms: records.iter().map(|r| r.wall_ms).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub spec: ExperimentSpec,
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

/// Runs every trial of `spec` in parallel and returns records ordered by
/// trial index.
pub fn run(spec: &ExperimentSpec) -> Result<Outcome, HarnessError> {
    spec.validate()?;
    let g0 = spec.g0.build(spec.n)?;
    let mut records = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(spec, &g0, t))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by_key(|r| r.trial);
    let summary = Summary::from_records(spec, &records);
    Ok(Outcome {
        spec: spec.clone(),
        summary,
        records,
    })
}

/// One point of a parameter sweep over edge probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p_expr: String,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
}

/// Reruns `spec` once per expression and tabulates the success fraction.
pub fn sweep(spec: &ExperimentSpec, ps: &[crate::pexpr::PExpr]) -> Result<Vec<SweepPoint>, HarnessError> {
    ps.iter()
        .map(|p| {
            let mut s = spec.clone();
            s.p = p.clone();
            let out = run(&s)?;
            Ok(SweepPoint {
                p_expr: p.source().to_string(),
                p: s.probability()?,
                trials: out.summary.trials,
                successes: out.summary.successes,
                fraction: out.summary.fraction,
            })
        })
        .collect()
}

fn trial_seed(spec: &ExperimentSpec, trial: u64) -> RngSeed {
    RngSeed::new(spec.seed, trial)
}

fn perturbed(g0: &Graph, p: f64, seed: RngSeed) -> Result<Graph, HarnessError> {
    let r = gnp(g0.n(), p, seed)?;
    Ok(sym_diff(g0, &r)?)
}

/// A circulant graph whose connection set holds `half` random offsets from
/// `1..n/2` (so every vertex has degree `2 * half`, or one less when the
/// offset `n/2` is drawn for even `n`).
fn random_circulant(n: usize, half: usize, seed: RngSeed) -> Graph {
    let mut rng = seed.rng();
    let max_off = n / 2;
    let offsets = (1..=max_off).choose_multiple(&mut rng, half.min(max_off));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        for &d in &offsets {
            let w = (v + d) % n;
            edges.push((v.min(w), v.max(w)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, edges).expect("circulant edges are valid")
}

/// The graph a trial measures, rebuilt from the spec and trial index.
pub fn trial_graph(spec: &ExperimentSpec, trial: u64) -> Result<Graph, HarnessError> {
    let seed = trial_seed(spec, trial);
    let p = spec.probability()?;
    let g0 = spec.g0.build(spec.n)?;
    Ok(match spec.kind {
        ExperimentKind::SprinkleDegree if spec.params.sprinkle_mode == SprinkleMode::Literal => {
            let half = ((p * spec.n as f64) / 2.0).round() as usize;
            random_circulant(spec.n, half, seed.child(0))
        }
        ExperimentKind::SprinkleDegree => {
            let parts = sprinkle_parts(spec.n, p, seed)?;
            end_to_end_graph(&g0, &parts)?
        }
        ExperimentKind::Percolation => percolation_base(spec.n, seed),
        _ => perturbed(&g0, p, seed.child(0))?,
    })
}

fn ln(n: usize) -> f64 {
    (n as f64).ln()
}

fn run_trial(spec: &ExperimentSpec, g0: &Graph, trial: u64) -> Result<TrialRecord, HarnessError> {
    let start = Instant::now();
    let seed = trial_seed(spec, trial);
    let p = spec.probability()?;
    let mut rec = TrialRecord {
        trial,
        seed: spec.seed,
        stream: trial,
        n: spec.n,
        p,
        ..Default::default()
    };
    match spec.kind {
        ExperimentKind::Bes | ExperimentKind::SmoothedCr => {
            let g = perturbed(g0, p, seed.child(0))?;
            let (c, trace) = stable(&g, &Colouring::trivial(g.n()))?;
            rec.m = g.m();
            rec.discrete = Some(c.is_discrete());
            rec.classes = Some(c.k());
            rec.rounds = Some(trace.rounds);
            rec.success = c.is_discrete();
            rec.metric = c.k() as f64;
        }
        ExperimentKind::DisparityComponents => {
            let g = perturbed(g0, p, seed.child(0))?;
            let c = wl2_vertex_colouring(&g, &Colouring::trivial(g.n()))?;
            let st = stats(&disparity(&g, &c)?, &c)?;
            let bound = spec
                .params
                .component_bound
                .unwrap_or_else(|| 2.0 * (spec.n as f64).log2());
            rec.m = g.m();
            rec.classes = Some(c.k());
            rec.max_component = Some(st.largest_component());
            rec.max_degree = Some(st.max_degree);
            rec.bound = Some(bound);
            rec.success = st.largest_component() as f64 <= bound;
            rec.metric = st.largest_component() as f64;
        }
        ExperimentKind::SparseV23 => {
            let g = perturbed(g0, p, seed.child(0))?;
            let dec = decompose(&g);
            let c = stable_colouring(&g);
            let mut cols: Vec<u32> = dec.v23.iter().map(|&v| c.colour(v)).collect();
            cols.sort_unstable();
            let collisions = dec
                .v23
                .iter()
                .filter(|&&v| {
                    let x = c.colour(v);
                    cols.partition_point(|&y| y < x) + 1 < cols.partition_point(|&y| y <= x)
                })
                .count();
            let (_, h) = relabelled(&g, seed.child(1));
            let (a, b) = (label_via_v23(&g), label_via_v23(&h));
            let invariant = match (&a, &b) {
                (Ok(a), Ok(b)) => a.certificate == b.certificate,
                (Err(_), Err(_)) => true,
                _ => false,
            };
            rec.m = g.m();
            rec.classes = Some(c.k());
            rec.v23_size = Some(dec.v23.len());
            rec.v23_collisions = Some(collisions);
            rec.v23_applicable = Some(a.is_ok());
            rec.v23_invariant = Some(invariant);
            rec.success = collisions == 0 && invariant;
            rec.metric = collisions as f64;
        }
        ExperimentKind::CanonicityFuzz => {
            let g = perturbed(g0, p, seed.child(0))?;
            let (_, h) = relabelled(&g, seed.child(1));
            let mut applicable = Vec::new();
            let mut mismatches = 0;
            // Refusals (not applicable, over a cap) must agree between the two
            // copies; any other error aborts the run.
            let attempt = |f: Labeller, x: &Graph| match f(x) {
                Ok(l) => Ok(Some(l)),
                Err(AlgoError::NotApplicable(_) | AlgoError::CapExceeded { .. }) => Ok(None),
                Err(e) => Err(HarnessError::from(e)),
            };
            for (name, f) in fuzz_schemes(g.n()) {
                match (attempt(f, &g)?, attempt(f, &h)?) {
                    (Some(x), Some(y)) => {
                        applicable.push(name);
                        if x.certificate != y.certificate {
                            mismatches += 1;
                        }
                    }
                    (None, None) => {}
                    _ => mismatches += 1,
                }
            }
            rec.m = g.m();
            rec.schemes_applicable = Some(applicable.join(";"));
            rec.canon_mismatches = Some(mismatches);
            rec.success = mismatches == 0;
            rec.metric = mismatches as f64;
        }
        ExperimentKind::AutomorphismCheck => {
            let g = perturbed(g0, p, seed.child(0))?;
            rec.m = g.m();
            if g.n() <= spec.params.aut_cap {
                let report = brute_aut(&g, AutMode::CoreActions)?;
                let ch = check_aut_characterisation(&g, &report);
                rec.aut_count = Some(report.automorphisms.len());
                rec.aut_violations = Some(ch.violations.len());
                rec.note = ch.violations.first().cloned();
                rec.success = ch.holds;
                rec.metric = ch.violations.len() as f64;
            } else {
                let built = construct_exception_automorphisms(&g);
                let verified = built.iter().filter(|e| e.verified).count();
                rec.exceptions_built = Some(built.len());
                rec.exceptions_verified = Some(verified);
                rec.success = verified == built.len();
                rec.metric = (built.len() - verified) as f64;
            }
        }
        ExperimentKind::SprinkleDegree => {
            let bound = spec.params.degree_factor * ln(spec.n);
            let (h, refined, unique) = match spec.params.sprinkle_mode {
                SprinkleMode::Literal => {
                    let half = ((p * spec.n as f64) / 2.0).round() as usize;
                    let h = random_circulant(spec.n, half, seed.child(0));
                    let c = stable_colouring(&h);
                    let mut rng = seed.child(1).rng();
                    let marks: Vec<bool> = (0..h.n())
                        .map(|_| rng.gen_bool(spec.params.unique_probability))
                        .collect();
                    let unique = marks.iter().filter(|&&x| x).count();
                    let refined = make_unique(&h, &c, &marks)?;
                    (h, refined, unique)
                }
                SprinkleMode::EndToEnd => {
                    let parts = sprinkle_parts(spec.n, p, seed)?;
                    let g = end_to_end_graph(g0, &parts)?;
                    let core3 = kcore(&parts[0], 3);
                    if core3.len() < spec.n / 2 {
                        rec.m = g.m();
                        rec.note = Some(format!("3-core of first sprinkle has {} < n/2 vertices", core3.len()));
                        rec.bound = Some(bound);
                        rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
                        return Ok(rec);
                    }
                    let mut in_core = vec![false; spec.n];
                    for &v in &core3[..spec.n / 2] {
                        in_core[v] = true;
                    }
                    let rest: Vec<usize> = (0..spec.n).filter(|&v| !in_core[v]).collect();
                    let marks: Vec<bool> = rest
                        .iter()
                        .map(|&v| parts[1].neighbors(v).filter(|&w| in_core[w]).count() >= 3)
                        .collect();
                    let h = g.induced_subgraph(&rest);
                    let c1 = stable_colouring(&h);
                    let unique = marks.iter().filter(|&&x| x).count();
                    let refined = make_unique(&h, &c1, &marks)?;
                    (h, refined, unique)
                }
            };
            let d = disparity(&h, &refined)?;
            rec.m = h.m();
            rec.classes = Some(refined.k());
            rec.unique_count = Some(unique);
            rec.max_degree = Some(d.max_degree());
            rec.bound = Some(bound);
            rec.success = d.max_degree() as f64 <= bound;
            rec.metric = d.max_degree() as f64;
        }
        ExperimentKind::Percolation => {
            let base = percolation_base(spec.n, seed);
            let mut rng = seed.child(1).rng();
            let removed: Vec<bool> = (0..spec.n).map(|_| !rng.gen_bool(p)).collect();
            let alive: Vec<usize> = (0..spec.n).filter(|&v| !removed[v]).collect();
            let survivor = base.induced_subgraph(&alive);
            let largest = components(&survivor).iter().map(Vec::len).max().unwrap_or(0);
            let l = ln(spec.n);
            let bound = l / (4.0 * l.ln()) * (1.0 + spec.params.slack);
            rec.m = base.m();
            rec.max_degree = Some(base.max_degree());
            rec.max_component = Some(largest);
            rec.unique_count = Some(alive.len());
            rec.bound = Some(bound);
            rec.success = largest as f64 <= bound;
            rec.metric = largest as f64;
        }
    }
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rec)
}

fn relabelled(g: &Graph, seed: RngSeed) -> (Vec<usize>, Graph) {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut seed.rng());
    let h = apply_permutation(g, &perm).expect("shuffled identity is a permutation");
    (perm, h)
}

/// Gives each marked vertex its own colour on top of `c`, then refines.
fn make_unique(g: &Graph, c: &Colouring, marks: &[bool]) -> Result<Colouring, HarnessError> {
    let ids: Vec<(u32, usize)> = (0..g.n())
        .map(|v| (c.colour(v), if marks[v] { v + 1 } else { 0 }))
        .collect();
    Ok(stable(g, &Colouring::from_ids(&ids))?.0)
}

/// Three independent random graphs whose union is G(n, p).
fn sprinkle_parts(n: usize, p: f64, seed: RngSeed) -> Result<Vec<Graph>, HarnessError> {
    let part_p = 1.0 - (1.0 - p).powf(1.0 / 3.0);
    (0..3)
        .map(|i| Ok(gnp(n, part_p, seed.child(10 + i))?))
        .collect()
}

fn end_to_end_graph(g0: &Graph, parts: &[Graph]) -> Result<Graph, HarnessError> {
    let mut edges: Vec<(usize, usize)> = parts.iter().flat_map(|g| g.edges()).collect();
    edges.sort_unstable();
    edges.dedup();
    let r = Graph::from_edges(g0.n(), edges)?;
    Ok(sym_diff(g0, &r)?)
}

/// A random circulant graph of degree at most `4 ln n`.
fn percolation_base(n: usize, seed: RngSeed) -> Graph {
    let half = (2.0 * ln(n.max(2))).floor() as usize;
    random_circulant(n, half, seed.child(0))
}

type Labeller = fn(&Graph) -> Result<CanonicalLabelling, AlgoError>;

/// Every scheme the canonicity fuzz exercises, within its size limits.
fn fuzz_schemes(n: usize) -> Vec<(&'static str, Labeller)> {
    let mut out: Vec<(&'static str, Labeller)> = vec![
        ("discrete-cr", label_discrete_cr),
        ("v23", label_via_v23),
        ("tree-unicyclic", label_tree_unicyclic),
        ("disparity-cr", |g| label_via_disparity(g, DisparityMode::Cr, None)),
    ];
    if n <= MAX_WL2_VERTICES {
        out.push(("disparity-wl2", |g| label_via_disparity(g, DisparityMode::Wl2, None)));
    }
    if n <= DEFAULT_EXHAUSTIVE_CAP {
        out.push(("exhaustive", |g| label_small_exhaustive(g, DEFAULT_EXHAUSTIVE_CAP)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circulants_are_regular() {
        for (n, half) in [(10, 5), (11, 3), (64, 7), (1024, 13)] {
            let g = random_circulant(n, half, RngSeed::new(n as u64, 0));
            let degs = g.degree_sequence();
            assert!(degs.iter().all(|&d| d == degs[0]), "n={n}");
            assert!(degs[0] == 2 * half || degs[0] == 2 * half - 1);
        }
    }

    #[test]
    fn record_fields_match_serde_order() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(TrialRecord::default()).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), RECORD_FIELDS.join(","));
    }
}
