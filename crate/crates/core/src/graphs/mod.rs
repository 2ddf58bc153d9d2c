//! Feynman graphs: spanning forests, Symanzik polynomials, subgraph
//! classification, the set function `s_G` and Brown's factorization.

pub mod catalog;
mod graph;
mod kinematics;
mod structure;
mod symanzik;

pub use graph::{Edge, FeynmanGraph, MAX_BITS};
pub use kinematics::KinematicAssignment;
pub use structure::{BrownSplit, FacetSplit, SubgraphClass};
pub use symanzik::{mass_term, Symanzik};
