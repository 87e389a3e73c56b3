//! Colour refinement, 2-dimensional Weisfeiler–Leman, core and disparity
//! decompositions, and canonical labelling schemes built on them.

pub mod canon;
pub mod cores;
pub mod disparity;
pub mod error;
pub mod graph;
pub mod refinement;
pub mod views;
pub mod wl2;

pub use error::{AlgoError, GraphError};
pub use graph::{Graph, Multigraph, RngSeed};
pub use refinement::{Colouring, RefinementTrace};
