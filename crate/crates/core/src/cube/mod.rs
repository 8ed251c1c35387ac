//! Cubical diagrams of chain complexes and their iterated and total fibers.

mod diagram;
mod fiber;
mod json;
mod random;

pub use diagram::{CubeMap, CubicalDiagram, Subset};
pub use fiber::{
    ifiber_closed, ifiber_degrees, ifiber_map, ifiber_map_between, ifiber_recursive, ifiber_sizes, tfiber_ifiber_iso, tfiber_square,
};
pub use random::{random_cube, random_cube_map};
