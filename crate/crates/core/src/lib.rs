//! Feynman polytopes, toric sector decompositions and ε-expansions of
//! dimensionally regularized Feynman integrals in the parametric
//! representation, together with a Mellin-transform engine for Laurent
//! polynomials.

#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod dimreg;
pub mod error;
pub mod graphs;
pub mod io;
pub mod lattice;
pub mod limits;
pub mod mellin;
pub mod numeric;
pub mod permutahedra;
pub mod poly;

pub use error::{Error, Result};
