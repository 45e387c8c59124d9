//! Finite-category kernel for correspondence bicategories.
//!
//! Everything here works with totally enumerated finite categories: objects,
//! morphisms, identities and a dense composition table. All universal
//! properties (pullbacks, terminal objects, Kan extensions, adjoints, lifts)
//! are decided by exhaustive enumeration and come with witnesses, so every
//! claim made by the higher-level modules is checkable.
//!
//! Module map:
//! - [`fincat`] — categories, functors, brute-force limits.
//! - [`twisted`] — twisted-arrow shapes, cartesian functors, Segal checks.
//! - [`spans`] — the bicategory of spans: 1-cells, 2-cells, coherence.
//! - [`adjdual`] — adjunction and duality witnesses among spans.
//! - [`fib`] — two-sided fibrations, the Grothendieck construction,
//!   Beck-Chevalley for fibrations.
//! - [`twocat`] — strict 2-categories, mates, square adjointability and the
//!   Beck-Chevalley checker for functors into 2-categories.
//! - [`fixtures`] — the shipped test categories (divisor lattice, groupoids,
//!   skeletal finite sets, walking shapes).

pub mod adjdual;
mod caps;
mod error;
pub mod fib;
pub mod fincat;
pub mod fixtures;
pub mod spans;
pub mod twisted;
pub mod twocat;

pub use caps::Caps;
pub use error::{CatError, LawViolation, ValidationReport};
