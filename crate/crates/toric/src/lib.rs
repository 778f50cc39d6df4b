//! Exact computations with symplectic toric varieties described by Delzant
//! polytopes: equivariant fixed-point localization, fiber integrals of
//! characteristic classes of the vertical bundle, multiplicative genera, and
//! detection-rank lower bounds for the cohomology of classifying spaces.
//!
//! All arithmetic is exact over the rationals; there is no floating point
//! anywhere in the crate.

pub mod charclass;
pub mod detection;
pub mod exactalg;
pub mod expr;
pub mod families;
pub mod genera;
pub mod localization;
pub mod polytope;
pub mod render;

pub use exactalg::{MPoly, QMatrix, Rat, VarId};
pub use polytope::{DelzantPolytope, Facet, Vertex};
