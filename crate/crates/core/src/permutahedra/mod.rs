//! Supermodular set functions, their base polytopes (generalized
//! permutahedra), building sets and nested-set fans.

mod building;
mod supermodular;

pub use building::{hepp_fan, hepp_sector_map, nested_set_fan, BuildingSet};
pub use supermodular::SupermodularFunction;
