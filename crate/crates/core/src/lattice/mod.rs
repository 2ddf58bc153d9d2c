//! Lattices, rational cones, fans and lattice polytopes with exact arithmetic.

pub mod cone;
pub mod fan;
mod hull;
pub mod linalg;
pub mod polytope;
pub mod projective;

pub use cone::{
    is_primitive, is_simplicial_cone, is_smooth_cone, pairing, primitive, Cone, LatticeVector,
};
pub use fan::{
    normal_fan, normal_fan_projective, refines, refines_fan, refines_polytope, total_multiplicity,
    vertex_for_cone, Fan, Refinement, RefinementTarget,
};
pub use polytope::{min_pairing, min_pairing_face, Equation, Facet, LatticePolytope};
