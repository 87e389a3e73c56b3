use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use graphcanon::graph::io::{read_graph, Format};
use graphcanon::wl2::MAX_WL2_VERTICES;
use graphcanon::{AlgoError, Graph};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::pexpr::PExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Is the stable colouring of G(n, p) discrete?
    Bes,
    /// Is the stable colouring of G0 xor G(n, p) discrete?
    SmoothedCr,
    /// Largest component of the disparity graph under the 2-WL colouring.
    DisparityComponents,
    /// Do branch vertices of the 2-core of a sparse random graph get
    /// distinct stable colours?
    SparseV23,
    /// Do all schemes give relabelling-invariant verdicts and certificates?
    CanonicityFuzz,
    /// Automorphisms move 2-core vertices only in the known ways.
    AutomorphismCheck,
    /// Largest disparity degree after giving random vertices unique colours.
    SprinkleDegree,
    /// Largest surviving component after random vertex deletion.
    Percolation,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Bes => "bes",
            ExperimentKind::SmoothedCr => "smoothed-cr",
            ExperimentKind::DisparityComponents => "disparity-components",
            ExperimentKind::SparseV23 => "sparse-v23",
            ExperimentKind::CanonicityFuzz => "canonicity-fuzz",
            ExperimentKind::AutomorphismCheck => "automorphism-check",
            ExperimentKind::SprinkleDegree => "sprinkle-degree",
            ExperimentKind::Percolation => "percolation",
        }
    }

    /// Success fraction required when the spec sets no threshold.
    pub fn default_threshold(self) -> Threshold {
        let fraction = match self {
            ExperimentKind::Bes => 0.99,
            ExperimentKind::SmoothedCr => 0.9,
            ExperimentKind::DisparityComponents | ExperimentKind::SparseV23 => 0.95,
            ExperimentKind::CanonicityFuzz | ExperimentKind::AutomorphismCheck => 1.0,
            ExperimentKind::SprinkleDegree | ExperimentKind::Percolation => 0.94,
        };
        Threshold {
            fraction,
            direction: Direction::AtLeast,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The fixed graph that the random perturbation is applied to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Adversary {
    #[default]
    Empty,
    /// Disjoint K4s on consecutive ids; leftover vertices stay isolated.
    UnionK4,
    /// Disjoint Petersen graphs; leftover vertices stay isolated.
    UnionPetersen,
    /// A graph file, edge list or graph6 by extension.
    File(PathBuf),
}

impl Adversary {
    pub fn build(&self, n: usize) -> Result<Graph, HarnessError> {
        let blocks = |block: Graph| {
            let copies = n / block.n();
            let mut parts = vec![Graph::disjoint_copies(&block, copies)];
            parts.push(Graph::empty(n - copies * block.n()));
            Graph::disjoint_union(&parts)
        };
        match self {
            Adversary::Empty => Ok(Graph::empty(n)),
            Adversary::UnionK4 => Ok(blocks(Graph::complete(4))),
            Adversary::UnionPetersen => Ok(blocks(Graph::petersen())),
            Adversary::File(path) => {
                let g = read_graph(path, Format::from_path(path))?;
                if g.n() != n {
                    return Err(HarnessError::Spec(format!(
                        "{} has {} vertices, spec says {n}",
                        path.display(),
                        g.n()
                    )));
                }
                Ok(g)
            }
        }
    }
}

impl FromStr for Adversary {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "empty" => Ok(Adversary::Empty),
            "union-k4" => Ok(Adversary::UnionK4),
            "union-petersen" => Ok(Adversary::UnionPetersen),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Adversary::File(Path::new(path).to_path_buf())),
                _ => Err(HarnessError::Spec(format!(
                    "unknown adversary {s:?} (empty, union-k4, union-petersen, file:<path>)"
                ))),
            },
        }
    }
}

impl TryFrom<String> for Adversary {
    type Error = HarnessError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Adversary> for String {
    fn from(a: Adversary) -> String {
        a.to_string()
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::Empty => f.write_str("empty"),
            Adversary::UnionK4 => f.write_str("union-k4"),
            Adversary::UnionPetersen => f.write_str("union-petersen"),
            Adversary::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    AtLeast,
    AtMost,
}

/// Required fraction of successful trials; `AtMost` turns the experiment
/// into a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub fraction: f64,
    pub direction: Direction,
}

impl Threshold {
    pub fn met(&self, fraction: f64) -> bool {
        match self.direction {
            Direction::AtLeast => fraction >= self.fraction,
            Direction::AtMost => fraction <= self.fraction,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SprinkleMode {
    /// Random circulant graph with its (trivial) stable colouring, each
    /// vertex made unique independently.
    #[default]
    Literal,
    /// Perturbed graph split into a core half and the rest; vertices of the
    /// rest with three neighbours in the core under a fresh sprinkle of
    /// random edges are made unique.
    EndToEnd,
}

/// Knobs that only some kinds read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    /// Largest component allowed by `disparity-components`
    /// (default `2 log2 n`).
    pub component_bound: Option<f64>,
    /// Largest vertex count for full automorphism enumeration; above it the
    /// exception constructions are checked instead.
    pub aut_cap: usize,
    /// Probability of a unique colour in `sprinkle-degree`.
    pub unique_probability: f64,
    pub sprinkle_mode: SprinkleMode,
    /// Degree bound factor: the bound is `factor * ln n`.
    pub degree_factor: f64,
    /// Relative slack on the percolation component bound.
    pub slack: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            component_bound: None,
            aut_cap: graphcanon::canon::DEFAULT_AUT_CAP,
            unique_probability: 0.7,
            sprinkle_mode: SprinkleMode::Literal,
            degree_factor: 4.0,
            slack: 0.5,
        }
    }
}

/// One experiment: a kind, a graph size, an edge probability, an adversary
/// and a number of independently seeded trials.
///
/// `p` is the edge probability of the random graph, except in two kinds:
/// in literal `sprinkle-degree` it is the density of the circulant graph,
/// and in `percolation` it is the survival probability of each vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: PExpr,
    #[serde(default)]
    pub g0: Adversary,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threshold: Option<Threshold>,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, n: usize, p: &str, trials: usize, seed: u64) -> Result<Self, HarnessError> {
        Ok(ExperimentSpec {
            kind,
            n,
            p: p.parse()?,
            g0: Adversary::Empty,
            trials,
            seed,
            threshold: None,
            params: Params::default(),
        })
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold.unwrap_or_else(|| self.kind.default_threshold())
    }

    pub fn probability(&self) -> Result<f64, HarnessError> {
        self.p.probability(self.n)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Spec("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(HarnessError::Spec("n must be at least 1".into()));
        }
        self.probability()?;
        let t = self.threshold();
        if !(0.0..=1.0).contains(&t.fraction) {
            return Err(HarnessError::Spec(format!("threshold {} outside [0, 1]", t.fraction)));
        }
        if !(0.0..=1.0).contains(&self.params.unique_probability) {
            return Err(HarnessError::Spec("unique_probability outside [0, 1]".into()));
        }
        if self.kind == ExperimentKind::DisparityComponents && self.n > MAX_WL2_VERTICES {
            return Err(AlgoError::CapExceeded {
                n: self.n,
                cap: MAX_WL2_VERTICES,
            }
            .into());
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}
