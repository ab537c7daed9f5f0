//! Group backends with canonical normal forms, acting on their Bass–Serre
//! trees.

mod backend;
mod finite;
mod tree;
mod word;

pub use backend::{
    common_prefix, BackendKind, EdgeSpec, Element, GroupBackend, Letter, LetterKind, Path, Step, TreeVertex,
    VertexSpec, BASE,
};
#[cfg(test)]
pub(crate) use backend::z3_z5;
pub use finite::FiniteGroup;
pub(crate) use word::format_by;
pub use tree::{free_translation_length, translation_length, Axis, TreeBall};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("inconsistent group table: {0}")]
    Table(String),
    #[error("invalid homomorphism: {0}")]
    Hom(String),
    #[error("invalid backend: {0}")]
    Spec(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("word syntax: {0}")]
    Syntax(String),
    #[error("ball of radius {radius} is too small, need at least {needed}")]
    BallTooSmall { needed: usize, radius: usize },
    #[error("element {0} is elliptic")]
    Elliptic(String),
}
