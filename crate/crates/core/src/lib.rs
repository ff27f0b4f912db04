//! Normal-form 3SAT transformations, occurrence classification, traced
//! truth assignments, and an exact metric on assignment space.

pub mod assignments;
pub mod classifier;
pub mod dimacs;
pub mod formula;
pub mod generate;
pub mod metric;
pub mod normalizer;
pub mod occurrence;
pub mod solvers;
