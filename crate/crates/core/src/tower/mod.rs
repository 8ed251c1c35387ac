//! The bar construction `⊥^{*+1} F(X)`, its fat realization, `Γ_n F`, degree
//! checks and the delooping comparisons.

mod bar;
mod degree;
mod deloop;
mod simplicial;

pub use bar::{bar_construction, gamma_n, Gamma, GammaFunctor};
pub use degree::degree_check;
pub use deloop::{deloop_degree1, deloop_excisive, sample_objects};
pub use simplicial::{augmentation_map, fat_realization, realization_map, FatRealization, SimplicialChainComplex};
