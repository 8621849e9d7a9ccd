//! Numerical laboratory for planar quasilinear Dirichlet problems.
//!
//! The crate solves Dirichlet problems for the p-Laplace equation and for
//! quasilinear operators `div A(x, grad u) = B(x, grad u)` on grid
//! discretizations of planar Jordan domains, then checks structural
//! properties of the computed solutions: the Harnack inequality, the strong
//! maximum principle, nodal-domain structure (count bounds, boundary
//! contact, simple connectedness) and unique continuation via maximal
//! vanishing sets. A small plane-topology toolkit (ε-chains, ε-connectivity,
//! ball corridors) backs the connectivity diagnostics.
//!
//! Entry points:
//! - [`geometry`]: lattice domains, boundary cycles, boundary data,
//!   relative-extrema counting,
//! - [`operators`]: operator specifications, structural-condition
//!   validation, discrete weak residuals,
//! - [`solver`]: variational p-Laplace solves and Picard iteration,
//! - [`analysis`]: Harnack ratios and maximum-principle checks,
//! - [`nodal`]: nodal decompositions, vanishing sets, unique continuation,
//! - [`topology`]: ε-chains, ε-graphs, corridors, lattice paths,
//! - [`scenario`]: config-driven runner behind the `nodalab` binary.

pub mod analysis;
pub mod geometry;
pub mod nodal;
pub mod render;
pub mod scenario;
pub mod operators;
pub mod solver;
pub mod topology;
