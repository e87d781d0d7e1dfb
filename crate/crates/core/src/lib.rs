//! Kernel for machine-checked diagrammatic proofs in 1-categories.
//!
//! The crate is organized bottom-up: finite [`quiver`]s and their [`paths`],
//! the [`commerge`] decision procedure and the [`comcut`] synthesis
//! algorithm, the first-order [`formula`] language with its concrete
//! [`syntax`], executable [`model`]s built from finite categories, and the
//! proof [`kernel`].

pub mod comcut;
pub mod commerge;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod kernel;
pub mod formula;
pub mod model;
pub mod paths;
pub mod quiver;
pub mod syntax;
pub mod unionfind;

pub use error::QuiverError;
pub use quiver::{Path, Quiver, Subquiver, VertexPermutation};
