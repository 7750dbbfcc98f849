//! Grothendieck classes, F1-zeta functions and automorphism groups of the
//! schemes attached to loose graphs, checked against rational-point counts
//! over small prime fields.

pub mod ambient;
pub mod aut;
pub mod class;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod field;
pub mod graph;
pub mod surgery;
pub mod zeta;

pub use ambient::{AmbientModel, CoordSet, ProjPoint};
pub use class::{affine_class, gm_class, interpolate_class, projective_class, tree_class, ClassPolynomial};
pub use error::{Error, Result};
pub use graph::{parse_loose_graph, Edge, LooseGraph, SpanningSelection};
