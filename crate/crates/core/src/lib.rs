//! Exact computation of delta-derivations of graded Lie algebras given by
//! bracket families, and of the transposed Poisson structures they induce.
//!
//! All arithmetic is over arbitrary-precision rationals. Infinite algebras
//! are handled on truncated index windows; see [`solver`] for how window
//! edge effects are kept out of the reported dimensions.

pub mod algebra;
pub mod catalog;
pub mod grading;
pub mod linalg;
pub mod oracle;
pub mod poisson;
pub mod rational;
pub mod solver;

pub use algebra::{
    validate_presentation, AffinePoly, AlgebraError, AlgebraPresentation, BasisElement, BasisKind,
    Element, PresentationBuilder, TermCoeff, ValidationReport,
};
pub use grading::GradingDegree;
pub use rational::Rational;
pub use solver::{
    scan, solve_degree, Classification, HomogeneousSolveProblem, ScanReport, SolveReport,
};
