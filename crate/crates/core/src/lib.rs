//! Numerical laboratory for boundary homogenization on uniformly convex
//! planar domains.
//!
//! The library solves the Laplace Dirichlet problem with rapidly oscillating
//! boundary data `g(x/eps)` (`g` 1-periodic on the torus), compares the
//! solution against the homogenized limit `u0 = mean(g)`, and measures the
//! convergence rate in `eps` both pointwise and in `L^p`. The supporting
//! machinery — Fourier representation of the boundary data, convex-curve
//! geometry, Poisson-kernel and boundary-integral solvers, stationary-phase
//! decay of oscillatory integrals — is exposed module by module so each
//! estimate can be probed on its own.
//!
//! Algorithm variants sit behind trait-object registries selected by name at
//! runtime: boundary curves ([`geometry::curve_registry`]), solver backends
//! ([`solver::backend_registry`]), and oscillatory-integral case families
//! ([`oscint::family_registry`]).

pub mod error;
pub mod fit;
pub mod fourier;
pub mod geometry;
pub mod lemmas;
pub mod oscint;
pub mod quad;
pub mod rates;
pub mod solver;

pub use error::{Error, Result};
