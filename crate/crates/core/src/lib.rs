//! Exact symbolic dynamics for piecewise-linear self-maps of finite trees.
//!
//! The crate provides, in exact rational arithmetic: linear orderings on
//! rooted metric trees, piecewise-linear map evaluation and preimage solving,
//! regular values and monotone spanning sections, sampled shift systems with
//! word-counting entropy estimates, branch-graph colored-path combinatorics,
//! stump enumeration, periodic-orbit structure analysis, and a catalog of
//! named example maps with end-to-end entropy verification.

pub mod branch;
pub mod catalog;
pub mod markov;
pub mod periodic;
pub mod plmap;
pub mod rat;
pub mod sections;
pub mod shift;
pub mod stump;
pub mod tree;

pub use markov::{markov_entropy, EntropyEnclosure, IncidenceMatrix};
pub use plmap::{MapSpec, PLTreeMap, Preimages};
pub use rat::Rat;
pub use tree::{Arc, EdgeIx, Point, Tree, TreeSpec, VertexIx};
