//! Bounded chain complexes of free modules and the standard constructions on them.

mod complex;
pub mod constructions;
mod homology;
mod json;

pub use complex::{ChainComplex, ChainMap, Violation};
pub use constructions::{
    cone, cone_map, cylinder, direct_sum, hofib, kernel_subcomplex, loops, path_object, shift, tensor, Cone, Cylinder,
    DirectSum, Fiber, PathObject, Subcomplex,
};
pub use homology::{betti_numbers, homology, homology_all, induced_rank, is_acyclic, is_quasi_iso, Homology};
