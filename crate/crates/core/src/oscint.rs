//! Oscillatory integrals over boundary charts and their decay in the
//! combined frequency `rho |xi|`.
//!
//! The object of study is
//!
//! ```text
//! J = int_{|z'| < a0} e^{2 pi i (xi'.z' + xi_d psi(rho z') / rho)} u(z') dz'
//! ```
//!
//! with a smooth phase graph `psi` (`psi(0) = 0`, Hessian determinant
//! bounded below) and a smooth bump amplitude `u` supported in the ball of
//! radius `(3/4) a0`. Stationary-phase scaling predicts
//! `|J| = O((rho |xi|)^{-(d-1)/2})` when the phase has a nondegenerate
//! critical point, and faster-than-polynomial decay when the gradient never
//! vanishes on the support. Case families reproducing each regime sit
//! behind the [`CaseFamily`] trait and are selected by name from
//! [`family_registry`].
//!
//! Quadrature is brute force: Gauss-Legendre panels (tensorized for the
//! two-dimensional charts) at no fewer than 30 nodes per phase wavelength,
//! refined by doubling until the self-reported error estimate
//! `|J_N - J_2N|` drops below tolerance.

use crate::error::{Error, Result};
use crate::fit::{loglog_fit, SlopeFit};
use crate::quad::{panel_integrate_complex, GaussLegendre};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Default quadrature self-check tolerance: the error estimate must fall
/// below `tol * (1 + |J|)`.
pub const DEFAULT_J_TOL: f64 = 1e-10;
/// Nodes per phase wavelength at the base resolution.
pub const NODES_PER_WAVELENGTH: f64 = 30.0;
/// Evaluations whose modulus sits below this are treated as fully decayed.
pub const J_FLOOR: f64 = 1e-14;

const PANEL_ORDER: usize = 16;
const MAX_NODES_1D: usize = 1 << 22;
const MAX_NODES_PER_DIM_2D: usize = 1 << 14;

/// Smooth graph function of the chart coordinate(s).
pub trait PhaseGraph: Send + Sync {
    fn name(&self) -> &'static str;
    fn eval(&self, z: &[f64]) -> f64;
    fn grad(&self, z: &[f64]) -> Vec<f64>;
    /// Upper bound for `|grad psi|` over the ball `|w| <= radius`.
    fn grad_bound(&self, radius: f64) -> f64;
}

/// `psi(z) = |z|^2 / 2` in any chart dimension.
pub struct Quadratic;

impl PhaseGraph for Quadratic {
    fn name(&self) -> &'static str {
        "quadratic"
    }
    fn eval(&self, z: &[f64]) -> f64 {
        0.5 * z.iter().map(|v| v * v).sum::<f64>()
    }
    fn grad(&self, z: &[f64]) -> Vec<f64> {
        z.to_vec()
    }
    fn grad_bound(&self, radius: f64) -> f64 {
        radius
    }
}

/// `psi(z) = 1 - sqrt(1 - z^2)`, the unit-circle boundary chart (1-D).
pub struct CircleChart;

impl PhaseGraph for CircleChart {
    fn name(&self) -> &'static str {
        "circle-chart"
    }
    fn eval(&self, z: &[f64]) -> f64 {
        1.0 - (1.0 - z[0] * z[0]).sqrt()
    }
    fn grad(&self, z: &[f64]) -> Vec<f64> {
        vec![z[0] / (1.0 - z[0] * z[0]).sqrt()]
    }
    fn grad_bound(&self, radius: f64) -> f64 {
        assert!(radius < 1.0, "circle chart is a graph only for |z| < 1");
        radius / (1.0 - radius * radius).sqrt()
    }
}

/// `base(z) + slope . z`; with a negative slope this is the recentered
/// phase `psi_1(z) = psi(z) - grad psi(0) . z`.
pub struct Tilted {
    pub base: Arc<dyn PhaseGraph>,
    pub slope: Vec<f64>,
}

impl PhaseGraph for Tilted {
    fn name(&self) -> &'static str {
        "tilted"
    }
    fn eval(&self, z: &[f64]) -> f64 {
        self.base.eval(z) + self.slope.iter().zip(z).map(|(s, v)| s * v).sum::<f64>()
    }
    fn grad(&self, z: &[f64]) -> Vec<f64> {
        let mut g = self.base.grad(z);
        for (gi, si) in g.iter_mut().zip(&self.slope) {
            *gi += si;
        }
        g
    }
    fn grad_bound(&self, radius: f64) -> f64 {
        let s = self.slope.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.base.grad_bound(radius) + s
    }
}

/// `C^inf` bump `exp(-1 / (1 - (|z|/radius)^2))`, identically zero outside.
pub struct Bump {
    pub radius: f64,
}

impl Bump {
    pub fn eval(&self, z: &[f64]) -> f64 {
        let w = z.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
        if w >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - w)).exp()
        }
    }
}

/// Phase data and amplitude of one integral `J`.
pub struct OscillatoryIntegrand {
    /// Chart dimension `d - 1`, 1 or 2.
    pub dim: usize,
    pub a0: f64,
    pub rho: f64,
    /// Tangential frequency `xi'` (length `dim`).
    pub xi_perp: Vec<f64>,
    pub xi_d: f64,
    pub psi: Arc<dyn PhaseGraph>,
    pub amp: Bump,
}

impl OscillatoryIntegrand {
    pub fn new(
        dim: usize,
        a0: f64,
        rho: f64,
        xi_perp: Vec<f64>,
        xi_d: f64,
        psi: Arc<dyn PhaseGraph>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput { field: "dim", reason: "chart dimension is 1 or 2".into() });
        }
        if xi_perp.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: xi_perp.len() });
        }
        if !(a0 > 0.0) || !(rho > 0.0) {
            return Err(Error::InvalidInput { field: "a0/rho", reason: "must be positive".into() });
        }
        Ok(OscillatoryIntegrand {
            dim,
            a0,
            rho,
            xi_perp,
            xi_d,
            psi,
            amp: Bump { radius: 0.75 * a0 },
        })
    }

    /// `|xi|` over all d components.
    pub fn xi_norm(&self) -> f64 {
        (self.xi_perp.iter().map(|v| v * v).sum::<f64>() + self.xi_d * self.xi_d).sqrt()
    }

    /// The decay variable `rho |xi|`.
    pub fn rho_xi(&self) -> f64 {
        self.rho * self.xi_norm()
    }

    /// `lambda = (|xi'|^2 + rho^2 xi_d^2)^{1/2}`; always `>= rho |xi|`.
    pub fn lambda(&self) -> f64 {
        (self.xi_perp.iter().map(|v| v * v).sum::<f64>() + (self.rho * self.xi_d).powi(2)).sqrt()
    }

    fn phase(&self, z: &[f64]) -> f64 {
        let lin: f64 = self.xi_perp.iter().zip(z).map(|(x, v)| x * v).sum();
        let scaled: Vec<f64> = z.iter().map(|v| self.rho * v).collect();
        2.0 * PI * (lin + self.xi_d * self.psi.eval(&scaled) / self.rho)
    }

    fn integrand(&self, z: &[f64]) -> Complex64 {
        let u = self.amp.eval(z);
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::cis(self.phase(z)) * u
    }

    /// Cycles per unit chart length, bounding the phase gradient over the
    /// integration box.
    fn frequency_bound(&self) -> f64 {
        let box_radius = self.amp.radius * (self.dim as f64).sqrt();
        let xi_perp_norm = self.xi_perp.iter().map(|v| v * v).sum::<f64>().sqrt();
        xi_perp_norm + self.xi_d.abs() * self.psi.grad_bound(self.rho * box_radius)
    }
}

/// Value of `J` with its self-reported quadrature error.
#[derive(Debug, Clone, Copy)]
pub struct JEval {
    pub value: Complex64,
    /// `|J_N - J_2N|` at the accepted resolution.
    pub error_estimate: f64,
    /// Gauss-Legendre nodes per dimension at the accepted resolution.
    pub nodes_per_dim: usize,
}

/// Evaluate `J` by panel quadrature, doubling the resolution until the
/// error estimate drops below `tol * (1 + |J|)`.
pub fn eval_j(q: &OscillatoryIntegrand, tol: f64) -> Result<JEval> {
    // u vanishes outside the support ball, so the ball integral equals the
    // integral over the bounding box of the support.
    let s = q.amp.radius.min(q.a0);
    let freq = q.frequency_bound();
    let base_nodes = (NODES_PER_WAVELENGTH * 2.0 * s * freq).ceil().max(64.0) as usize;
    let cap = match q.dim {
        1 => MAX_NODES_1D,
        _ => MAX_NODES_PER_DIM_2D,
    };
    let rule = GaussLegendre::new(PANEL_ORDER);

    let mut panels = base_nodes.div_ceil(PANEL_ORDER);
    if (panels * 2) * PANEL_ORDER > cap {
        return Err(Error::ResolutionCap {
            needed: (panels * 2 * PANEL_ORDER) as u64,
            cap: cap as u64,
            hint: "|xi| too large for the quadrature budget",
        });
    }
    let mut coarse = integrate_box(q, &rule, s, panels);
    loop {
        let fine_panels = panels * 2;
        if fine_panels * PANEL_ORDER > cap {
            return Err(Error::ResolutionCap {
                needed: (fine_panels * PANEL_ORDER) as u64,
                cap: cap as u64,
                hint: "|xi| too large for the quadrature budget",
            });
        }
        let fine = integrate_box(q, &rule, s, fine_panels);
        let est = (fine - coarse).norm();
        if est <= tol * (1.0 + fine.norm()) {
            return Ok(JEval {
                value: fine,
                error_estimate: est,
                nodes_per_dim: fine_panels * PANEL_ORDER,
            });
        }
        panels = fine_panels;
        coarse = fine;
    }
}

fn integrate_box(q: &OscillatoryIntegrand, rule: &GaussLegendre, s: f64, panels: usize) -> Complex64 {
    match q.dim {
        1 => panel_integrate_complex(rule, -s, s, panels, |z| q.integrand(&[z])),
        2 => {
            // tensor panels; row sums are reduced in index order
            let h = 2.0 * s / panels as f64;
            let mut nodes = Vec::with_capacity(panels * rule.nodes.len());
            let mut weights = Vec::with_capacity(panels * rule.nodes.len());
            for p in 0..panels {
                let lo = -s + p as f64 * h;
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    nodes.push(lo + 0.5 * h * (x + 1.0));
                    weights.push(0.5 * h * w);
                }
            }
            let rows: Vec<Complex64> = nodes
                .par_iter()
                .zip(&weights)
                .map(|(&z2, &w2)| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (&z1, &w1) in nodes.iter().zip(&weights) {
                        acc += q.integrand(&[z1, z2]) * w1;
                    }
                    acc * w2
                })
                .collect();
            rows.into_iter().sum()
        }
        _ => unreachable!("dim validated at construction"),
    }
}

/// Shift a tilted phase back to `grad psi_1(0) = 0`, moving the tilt into
/// the tangential frequency: `v' = xi' + xi_d grad psi(0)`.
pub fn case3_recenter(q: &OscillatoryIntegrand) -> OscillatoryIntegrand {
    let p = q.psi.grad(&vec![0.0; q.dim]);
    if p.iter().all(|&v| v == 0.0) {
        return OscillatoryIntegrand {
            dim: q.dim,
            a0: q.a0,
            rho: q.rho,
            xi_perp: q.xi_perp.clone(),
            xi_d: q.xi_d,
            psi: q.psi.clone(),
            amp: Bump { radius: q.amp.radius },
        };
    }
    let v_perp: Vec<f64> = q.xi_perp.iter().zip(&p).map(|(xi, pi)| xi + q.xi_d * pi).collect();
    let psi1 = Tilted {
        base: q.psi.clone(),
        slope: p.iter().map(|v| -v).collect(),
    };
    OscillatoryIntegrand {
        dim: q.dim,
        a0: q.a0,
        rho: q.rho,
        xi_perp: v_perp,
        xi_d: q.xi_d,
        psi: Arc::new(psi1),
        amp: Bump { radius: q.amp.radius },
    }
}

/// One row of a decay sweep.
#[derive(Debug, Clone, Copy)]
pub struct DecayRow {
    pub lambda: f64,
    pub rho: f64,
    pub abs_j: f64,
    /// `|J| (rho |xi|)^{(d-1)/2}`, bounded for stationary families.
    pub bound_product: f64,
    pub nodes_per_dim: usize,
}

/// Decay sweep of one family over a `rho |xi|` grid.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub family: String,
    /// Ambient dimension d (chart dimension + 1).
    pub dim: usize,
    pub rows: Vec<DecayRow>,
    /// Log-log fit of `|J|` against `rho |xi|`; absent when values fell
    /// below the floor.
    pub fit: Option<SlopeFit>,
    pub floor_hit: bool,
}

impl DecayReport {
    /// Fitted slope, with `-inf` as the fast-decay sentinel.
    pub fn slope(&self) -> f64 {
        if self.floor_hit {
            return f64::NEG_INFINITY;
        }
        match &self.fit {
            Some(SlopeFit::Fit { slope, .. }) => *slope,
            _ => f64::NEG_INFINITY,
        }
    }
}

/// Generator of integrands along a `rho |xi|` grid.
pub trait CaseFamily: Send + Sync {
    fn name(&self) -> &'static str;
    /// Chart dimension `d - 1`.
    fn dim(&self) -> usize;
    fn rho(&self) -> f64;
    /// Integrand with `rho |xi| = lambda`.
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand;
}

/// Stationary phase in one chart dimension: `psi(z) = z^2/2`, frequency
/// purely normal. Decays like `lambda^{-1/2}`.
pub struct Stationary2d {
    pub rho: f64,
}

impl CaseFamily for Stationary2d {
    fn name(&self) -> &'static str {
        "stationary2d"
    }
    fn dim(&self) -> usize {
        1
    }
    fn rho(&self) -> f64 {
        self.rho
    }
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand {
        OscillatoryIntegrand::new(1, 0.5, self.rho, vec![0.0], lambda / self.rho, Arc::new(Quadratic))
            .expect("valid family parameters")
    }
}

/// Stationary phase with the unit-circle chart instead of its quadratic
/// model; exercises the `rho` dependence of the rescaled graph.
pub struct Stationary2dCircle {
    pub rho: f64,
}

impl CaseFamily for Stationary2dCircle {
    fn name(&self) -> &'static str {
        "stationary2d-circle"
    }
    fn dim(&self) -> usize {
        1
    }
    fn rho(&self) -> f64 {
        self.rho
    }
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand {
        OscillatoryIntegrand::new(1, 0.5, self.rho, vec![0.0], lambda / self.rho, Arc::new(CircleChart))
            .expect("valid family parameters")
    }
}

/// Gradient bounded away from zero on the support: the frequency is nearly
/// tangential, there is no stationary point, and `J` decays faster than any
/// power.
pub struct NonStationary;

impl CaseFamily for NonStationary {
    fn name(&self) -> &'static str {
        "nonstationary"
    }
    fn dim(&self) -> usize {
        1
    }
    fn rho(&self) -> f64 {
        1.0
    }
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand {
        // xi = lambda (1, 0.01) / |(1, 0.01)|
        let norm = 1.0001f64.sqrt();
        OscillatoryIntegrand::new(
            1,
            0.5,
            1.0,
            vec![lambda / norm],
            0.01 * lambda / norm,
            Arc::new(Quadratic),
        )
        .expect("valid family parameters")
    }
}

/// Tilted chart `psi(z) = z + z^2/2` with the frequency chosen so the tilt
/// cancels after recentering; the decay matches the stationary rate.
pub struct TiltedFamily;

impl CaseFamily for TiltedFamily {
    fn name(&self) -> &'static str {
        "tilted"
    }
    fn dim(&self) -> usize {
        1
    }
    fn rho(&self) -> f64 {
        1.0
    }
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand {
        let scale = lambda / std::f64::consts::SQRT_2;
        let psi = Tilted { base: Arc::new(Quadratic), slope: vec![1.0] };
        OscillatoryIntegrand::new(1, 0.5, 1.0, vec![-scale], scale, Arc::new(psi))
            .expect("valid family parameters")
    }
}

/// Paraboloid chart in two dimensions; the stationary decay rate is
/// `lambda^{-1}`.
pub struct Stationary3d {
    pub rho: f64,
}

impl CaseFamily for Stationary3d {
    fn name(&self) -> &'static str {
        "stationary3d"
    }
    fn dim(&self) -> usize {
        2
    }
    fn rho(&self) -> f64 {
        self.rho
    }
    fn integrand(&self, lambda: f64) -> OscillatoryIntegrand {
        OscillatoryIntegrand::new(2, 0.5, self.rho, vec![0.0, 0.0], lambda / self.rho, Arc::new(Quadratic))
            .expect("valid family parameters")
    }
}

/// The registered case families, at their default `rho = 1`.
pub fn family_registry() -> Vec<Box<dyn CaseFamily>> {
    vec![
        Box::new(Stationary2d { rho: 1.0 }),
        Box::new(Stationary2dCircle { rho: 1.0 }),
        Box::new(NonStationary),
        Box::new(TiltedFamily),
        Box::new(Stationary3d { rho: 1.0 }),
    ]
}

/// Look a family up by name.
pub fn family(name: &str) -> Result<Box<dyn CaseFamily>> {
    family_with_rho(name, 1.0)
}

/// Look a family up by name, overriding `rho` where the family is
/// `rho`-parametrized (the non-stationary and tilted families are pinned
/// at `rho = 1`).
pub fn family_with_rho(name: &str, rho: f64) -> Result<Box<dyn CaseFamily>> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidInput {
            field: "rho",
            reason: format!("must be in (0, 1], got {rho}"),
        });
    }
    match name {
        "stationary2d" => Ok(Box::new(Stationary2d { rho })),
        "stationary2d-circle" => Ok(Box::new(Stationary2dCircle { rho })),
        "nonstationary" => Ok(Box::new(NonStationary)),
        "tilted" => Ok(Box::new(TiltedFamily)),
        "stationary3d" => Ok(Box::new(Stationary3d { rho })),
        other => Err(Error::UnknownStrategy {
            kind: "oscillatory case",
            name: other.into(),
            available: family_registry().iter().map(|f| f.name()).collect::<Vec<_>>().join(", "),
        }),
    }
}

/// Sweep one family over a geometric `rho |xi|` grid and fit the decay
/// exponent. The grid needs at least 6 points spanning at least a decade.
pub fn decay_exponent(family: &dyn CaseFamily, grid: &[f64], tol: f64) -> Result<DecayReport> {
    if grid.len() < 6 {
        return Err(Error::InvalidInput {
            field: "lambda_grid",
            reason: format!("need >= 6 points, got {}", grid.len()),
        });
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if !(lo > 0.0) || hi / lo < 10.0 {
        return Err(Error::InvalidInput {
            field: "lambda_grid",
            reason: format!("grid must span at least one decade (got {lo}..{hi})"),
        });
    }
    let exponent = family.dim() as f64 / 2.0;
    let mut rows = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let q = family.integrand(lambda);
        let j = eval_j(&q, tol)?;
        let abs_j = j.value.norm();
        rows.push(DecayRow {
            lambda,
            rho: q.rho,
            abs_j,
            bound_product: abs_j * q.rho_xi().powf(exponent),
            nodes_per_dim: j.nodes_per_dim,
        });
    }
    let floor_hit = rows.iter().any(|r| r.abs_j < J_FLOOR);
    let fit = if floor_hit {
        None
    } else {
        let xs: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.abs_j).collect();
        Some(loglog_fit(&xs, &ys))
    };
    Ok(DecayReport {
        family: family.name().into(),
        dim: family.dim() + 1,
        rows,
        fit,
        floor_hit,
    })
}

/// Geometric grid of ratio 2 from `lo` to `hi` inclusive.
pub fn dyadic_grid(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = vec![lo];
    let mut v = lo;
    while v * 2.0 <= hi * 1.0000001 {
        v *= 2.0;
        out.push(v);
    }
    out
}
