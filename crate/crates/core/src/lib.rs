//! Gradings on tame blocks of dihedral type: quiver presentations,
//! rewriting, grading lattices, outer automorphisms and derived transfer.

pub mod catalog;
pub mod cli;
pub mod complex;
pub mod dsl;
pub mod field;
pub mod graded;
pub mod hr;
pub mod grading;
pub mod lattice;
pub mod linalg;
pub mod outer;
pub mod quiver;
pub mod rewrite;
pub mod tightness;
