//! Combinatorial engine for handle decompositions of open books: profiles,
//! moves with logged bookkeeping, and exact integral homology.

pub mod calculus;
pub mod handle;
pub mod homology;
pub mod monodromy;
pub mod profile;
pub mod selection;
pub mod document;
pub mod engine;
pub mod report;
pub mod selftest;
