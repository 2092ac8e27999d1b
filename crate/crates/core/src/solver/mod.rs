//! Dirichlet solvers for the Laplacian on convex domains.
//!
//! Two interchangeable backends sit behind the [`SolverBackend`] trait and
//! are selected by name from [`backend_registry`]:
//!
//! * `disk` — closed-form Poisson kernel on a circle, trapezoid quadrature
//!   against sampled boundary data, with an FFT fast path for whole rings;
//! * `bie` — double-layer potential on any certified convex curve, with the
//!   density solved from the second-kind equation `(-I/2 + K) phi = h` by a
//!   spectrally accurate Nystrom discretization and matrix-free GMRES.
//!
//! Quadrature resolution for oscillating data `g(x/eps)` follows the rule
//! `N = max(256, ceil(ppw * perimeter * max_freq / eps))` so that every
//! boundary wavelength is covered by `ppw` nodes (default 20).

mod bie;
mod disk;
mod kernel_bounds;

pub use kernel_bounds::{kernel_derivative_check, KernelBoundSample};

use crate::error::{Error, Result};
use crate::fourier::FourierData;
use crate::geometry::{ConvexDomain, Location};

/// Hard cap on quadrature nodes.
pub const DEFAULT_NODE_CAP: usize = 1 << 20;
/// Default nodes per boundary wavelength of the oscillating data.
pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 20.0;

/// Resolution knobs threaded through from configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub points_per_wavelength: f64,
    pub node_cap: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            points_per_wavelength: DEFAULT_POINTS_PER_WAVELENGTH,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// A solved Dirichlet problem, ready for interior evaluation.
pub struct BoundarySolution {
    pub domain: ConvexDomain,
    backend: &'static dyn SolverBackend,
    /// Uniform quadrature parameters `t_k`.
    pub nodes: Vec<f64>,
    /// Boundary values at the nodes.
    pub data: Vec<f64>,
    /// Solved double-layer density (`bie` backend only).
    pub density: Option<Vec<f64>>,
    /// Normalized DFT coefficients of `data` (`disk` backend only).
    pub(crate) ring_coeffs: Option<Vec<num_complex::Complex64>>,
}

impl BoundarySolution {
    pub fn resolution(&self) -> usize {
        self.nodes.len()
    }

    pub fn backend_name(&self) -> &'static str {
        self.backend.name()
    }

    /// Harmonic extension at a strictly interior point.
    pub fn evaluate_interior(&self, x: &[f64; 2]) -> Result<f64> {
        if self.domain.contains(x) != Location::Inside {
            return Err(Error::NotInterior(x[0], x[1]));
        }
        Ok(self.backend.evaluate(self, x))
    }

    /// Values on the inward offset curve at distance `dist`, sampled at `m`
    /// equi-parameter points. Faster than point-by-point evaluation where
    /// the backend has a ring fast path.
    pub fn evaluate_ring(&self, dist: f64, m: usize) -> Result<Vec<f64>> {
        if !(dist > 0.0) || dist >= self.domain.inradius() {
            return Err(Error::InvalidInput {
                field: "dist",
                reason: format!("ring distance {dist} outside (0, inradius)"),
            });
        }
        self.backend.evaluate_ring(self, dist, m)
    }
}

/// Strategy interface for the Dirichlet solve.
pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, dom: &ConvexDomain) -> bool;
    fn solve(
        &'static self,
        dom: &ConvexDomain,
        h: &(dyn Fn(f64) -> f64 + Sync),
        n: usize,
    ) -> Result<BoundarySolution>;
    fn evaluate(&self, sol: &BoundarySolution, x: &[f64; 2]) -> f64;
    /// Default ring evaluation: point by point along the inward offset.
    fn evaluate_ring(&self, sol: &BoundarySolution, dist: f64, m: usize) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        let dom = &sol.domain;
        (0..m)
            .into_par_iter()
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let p = dom.point(t);
                let nrm = dom.normal(t);
                let x = [p[0] - dist * nrm[0], p[1] - dist * nrm[1]];
                Ok(self.evaluate(sol, &x))
            })
            .collect()
    }
}

/// All registered backends.
pub fn backend_registry() -> &'static [&'static dyn SolverBackend] {
    static REGISTRY: [&dyn SolverBackend; 2] = [&disk::DiskBackend, &bie::BieBackend];
    &REGISTRY
}

/// Look a backend up by name.
pub fn backend(name: &str) -> Result<&'static dyn SolverBackend> {
    backend_registry()
        .iter()
        .copied()
        .find(|b| b.name() == name)
        .ok_or_else(|| Error::UnknownStrategy {
            kind: "solver backend",
            name: name.into(),
            available: backend_registry().iter().map(|b| b.name()).collect::<Vec<_>>().join(", "),
        })
}

/// Solve the Dirichlet problem with boundary data `h(t)` given along the
/// parametrization, using `n` uniform nodes (`n` even, at least 16).
pub fn solve(
    dom: &ConvexDomain,
    h: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
    backend_name: &str,
) -> Result<BoundarySolution> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::InvalidInput {
            field: "n",
            reason: format!("node count must be even and >= 16, got {n}"),
        });
    }
    let be = backend(backend_name)?;
    if !be.supports(dom) {
        return Err(Error::UnsupportedDomain { backend: be.name(), domain: dom.descriptor() });
    }
    be.solve(dom, h, n)
}

/// Node count demanded by the oscillation content of `g(x/eps)`.
pub fn resolution_floor(
    dom: &ConvexDomain,
    g: &FourierData,
    eps: f64,
    settings: &SolverSettings,
) -> Result<usize> {
    let needed = settings.points_per_wavelength * dom.perimeter() * g.max_freq() as f64 / eps;
    let needed = needed.ceil().max(256.0);
    if needed > settings.node_cap as f64 {
        return Err(Error::ResolutionCap {
            needed: needed as u64,
            cap: settings.node_cap as u64,
            hint: "increase eps or raise the node cap",
        });
    }
    let mut n = needed as usize;
    if n % 2 == 1 {
        n += 1;
    }
    Ok(n)
}

/// Solve with oscillating boundary data `h(y) = g(y/eps)` at the resolution
/// demanded by the data. An explicit `n` is honored but never below the
/// resolution floor. `backend_name = None` picks `disk` on circles and
/// `bie` elsewhere.
pub fn solve_oscillating(
    dom: &ConvexDomain,
    g: &FourierData,
    eps: f64,
    n: Option<usize>,
    backend_name: Option<&str>,
    settings: &SolverSettings,
) -> Result<BoundarySolution> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput {
            field: "eps",
            reason: format!("must be in (0, 1], got {eps}"),
        });
    }
    let floor = resolution_floor(dom, g, eps, settings)?;
    let n = n.map_or(floor, |req| req.max(floor));
    let name = backend_name.unwrap_or(if dom.is_circle().is_some() { "disk" } else { "bie" });
    let h = move |t: f64| {
        let p = dom.point(t);
        g.evaluate_scaled(&p, eps).expect("band-limited data evaluates everywhere").re
    };
    solve(dom, &h, n, name)
}

#[cfg(test)]
mod tests;
