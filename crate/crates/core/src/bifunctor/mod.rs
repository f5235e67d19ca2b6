//! Tensor, internal Hom and Ext, multi-variable functors and adjunctions.

mod adjunction;
mod ext;
mod functor;
mod hom;
mod tensor;

pub use adjunction::{
    base_change, restrict_adjunction, AdjunctionCheck, BaseChangePair, MultiAdjunction,
};
pub use ext::{ext, hom_cochain, ExtGroup};
pub use functor::{
    check_objects, identities, morphism_domain, Extension, FunctorRef, Identity, MultiFunctor,
    Restricted, Restriction, Tensor, TensorHom, Variance,
};
pub use hom::{hom_map, hom_module, HomModule};
pub use tensor::{tensor, tensor_all, tensor_map, tensor_map_all};
