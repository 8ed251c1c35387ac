//! Objects `A -> X -> B`, their coproducts and suspensions, and functors
//! out of them.

mod coproduct;
mod functor;
mod object;
mod schur;
mod sigma;

pub use coproduct::{copair, coproduct, coproduct_in, coproduct_map, coproduct_map_in, fold, Coproduct};
pub use functor::{
    apply1, apply1_morphism, check_arity, functor_by_name, AfterCoproduct, AfterSigma, ComplexOp, Constant, Functor, FunctorRef,
    Identity, PostCompose, SchurPower, SlotTensor, StructureFiber, TensorPower,
};
pub use object::{
    cofibrant_replace, ensure_cofibrant, ensure_cofibrant_morphism, terminal_map, Context, EtaContext, EtaMorphism,
    EtaObject, Replacement,
};
pub use schur::{schur_power, schur_power_map, tensor_power, tensor_power_map, Schur};
pub use sigma::{sigma_b, sigma_b_iter, sigma_b_map, SigmaSquare};
