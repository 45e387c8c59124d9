//! Finite category kernel: representation, validation, and brute-force
//! universal-property computation.

mod category;
mod constructions;
mod functor;
mod limits;

pub use category::{CatBuilder, FinCategory, Mor, Obj};
pub use constructions::{opposite, product_category, slice2, ProductCat, SliceCat};
pub use functor::{
    is_equivalence, preserves_pullbacks, EquivalenceReport, Functor, FunctorViolation, NatTrans,
};
pub use limits::{
    binary_product, is_iso, is_pullback_square, mediating_morphism, pullback, terminal_object,
    Cospan, PullbackData,
};
