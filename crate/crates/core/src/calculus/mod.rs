//! Cross effects, the cotriple `(t, γ, ξ)` and the diagonal cross effect
//! `⊥_n` with its counit and comultiplication.

pub mod cotriple;
pub mod matrix01;
pub mod tcube;

pub use cotriple::{
    collapse_map, first_mismatch, gamma, split_map, tt_two_routes, verify_chain_maps, verify_coassoc,
    verify_counital, verify_naturality, xi, TPowers,
};
pub use matrix01::{enumerate_m, sgn2, sign_identity_counterexamples, sign_identity_sides, ZeroOneMatrix};
pub use tcube::{
    build_cube, cr_n, cube_map, multi_cube, replace_by_b, replacement_edge, t_apply, t_apply_morphism, TFunctor,
};
pub mod perp;
pub use perp::{
    delta, diagonal_coproduct, epsilon, kappa, perp_n, perp_power, verify_perp_cotriple, Delta, Epsilon, NatRef,
    NatTrans, Perp, PerpNat,
};
