use std::fmt;

use thiserror::Error;

/// A single broken category law, with the witness that breaks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    DuplicateObjectName(String),
    DuplicateMorphismName(String),
    /// Identity morphism of an object is not an endomorphism of it.
    IdentityTyping { object: String, identity: String },
    /// `id ∘ f != f` or `f ∘ id != f`.
    IdentityNotNeutral { morphism: String, side: &'static str },
    /// A composable pair has no entry in the table.
    MissingComposite { g: String, f: String },
    /// A table entry for a pair that is not composable.
    SpuriousComposite { g: String, f: String },
    /// `g ∘ f` has the wrong source or target.
    CompositeTyping { g: String, f: String, composite: String },
    /// `(h ∘ g) ∘ f != h ∘ (g ∘ f)`.
    NotAssociative { h: String, g: String, f: String },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::DuplicateObjectName(n) => write!(f, "duplicate object name {n:?}"),
            LawViolation::DuplicateMorphismName(n) => write!(f, "duplicate morphism name {n:?}"),
            LawViolation::IdentityTyping { object, identity } => {
                write!(f, "identity {identity:?} of {object:?} is not an endomorphism")
            }
            LawViolation::IdentityNotNeutral { morphism, side } => {
                write!(f, "identity is not {side}-neutral on {morphism:?}")
            }
            LawViolation::MissingComposite { g, f: ff } => {
                write!(f, "missing composite ({g:?} . {ff:?})")
            }
            LawViolation::SpuriousComposite { g, f: ff } => {
                write!(f, "table entry for non-composable pair ({g:?} . {ff:?})")
            }
            LawViolation::CompositeTyping { g, f: ff, composite } => {
                write!(f, "composite ({g:?} . {ff:?}) = {composite:?} is mistyped")
            }
            LawViolation::NotAssociative { h, g, f: ff } => {
                write!(f, "associativity fails on ({h:?}, {g:?}, {ff:?})")
            }
        }
    }
}

/// Outcome of validating a category's laws. Empty iff the data is a category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<LawViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: &'static str, needed: usize, cap: usize },
    #[error("size overflow in {what}: {size} exceeds internal ceiling {limit}")]
    Overflow { what: &'static str, size: usize, limit: usize },
    #[error("category laws violated:\n{0}")]
    InvalidCategory(ValidationReport),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("morphisms {g:?} and {f:?} are not composable")]
    NotComposable { g: String, f: String },
    #[error("category {0:?} has no terminal object")]
    NoTerminal(String),
    #[error("cospan ({left:?}, {right:?}) has no pullback")]
    MissingPullback { left: String, right: String },
    #[error("missing binary product of ({0:?}, {1:?})")]
    MissingProduct(String, String),
    #[error("cone does not commute over the cospan")]
    NonCommutingCone,
    #[error("corrupt pullback data: {0}")]
    CorruptPullback(String),
    #[error("not a functor: {0}")]
    InvalidFunctor(String),
    #[error("not a natural transformation: {0}")]
    InvalidNatTrans(String),
    #[error("spans live in different ambient categories")]
    AmbientMismatch,
    #[error("feet do not match: expected {expected:?}, found {found:?}")]
    FootMismatch { expected: String, found: String },
    #[error("mismatched 2-cells: {0}")]
    CellMismatch(String),
    #[error("no mediating morphism exists where one was required: {0}")]
    NoMediator(String),
    #[error("triangle identity {which} failed; this indicates an engine bug")]
    TriangleFailure { which: &'static str },
    #[error("zig-zag identity {which} failed; this indicates an engine bug")]
    ZigzagFailure { which: &'static str },
    #[error("expected an isomorphism witness and found none: {0}")]
    NoIsoWitness(String),
    #[error("inconsistent elementary data: {0}")]
    InconsistentElementary(String),
    #[error("functor does not commute with the projections")]
    ProjectionMismatch,
    #[error("fibration is not a bifibration")]
    NotBifibration,
    #[error("fibration has no product factor structure")]
    NoFactorStructure,
    #[error("not a strict 2-category: {0}")]
    Invalid2Cat(String),
    #[error("{0}")]
    Other(String),
}
