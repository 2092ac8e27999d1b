//! Smooth uniformly convex planar domains.
//!
//! A domain is built from a [`Curve`] — a smooth closed parametrization
//! `t in [0, 2pi) -> R^2` with first and second derivatives — and certified
//! at construction: the signed curvature must stay above a positive bound on
//! a fine grid, the tangent winding number must be one, and the curve must
//! close up. Curve variants (circle, ellipse, radial profile) are selected
//! by a `kind:args` descriptor string, see [`parse_domain`].

use crate::error::{Error, Result};
use serde::Deserialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Grid density used to certify curvature, perimeter, and winding number.
pub const CERTIFY_GRID: usize = 4096;

/// Width of the boundary classification band.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// A smooth closed boundary curve, counterclockwise over `t in [0, 2pi)`.
pub trait Curve: Send + Sync {
    /// Descriptor the curve was built from, e.g. `ellipse:2,1`.
    fn descriptor(&self) -> String;
    fn point(&self, t: f64) -> [f64; 2];
    fn velocity(&self, t: f64) -> [f64; 2];
    fn acceleration(&self, t: f64) -> [f64; 2];
    /// Hint for closest-point seeding; profiles with high angular modes
    /// need denser seed grids.
    fn seed_density(&self) -> usize {
        64
    }
}

pub struct Circle {
    pub radius: f64,
}

impl Curve for Circle {
    fn descriptor(&self) -> String {
        format!("circle:{}", self.radius)
    }
    fn point(&self, t: f64) -> [f64; 2] {
        [self.radius * t.cos(), self.radius * t.sin()]
    }
    fn velocity(&self, t: f64) -> [f64; 2] {
        [-self.radius * t.sin(), self.radius * t.cos()]
    }
    fn acceleration(&self, t: f64) -> [f64; 2] {
        [-self.radius * t.cos(), -self.radius * t.sin()]
    }
}

pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl Curve for Ellipse {
    fn descriptor(&self) -> String {
        format!("ellipse:{},{}", self.a, self.b)
    }
    fn point(&self, t: f64) -> [f64; 2] {
        [self.a * t.cos(), self.b * t.sin()]
    }
    fn velocity(&self, t: f64) -> [f64; 2] {
        [-self.a * t.sin(), self.b * t.cos()]
    }
    fn acceleration(&self, t: f64) -> [f64; 2] {
        [-self.a * t.cos(), -self.b * t.sin()]
    }
}

/// Star-shaped curve `gamma(t) = r(t) (cos t, sin t)` with a trigonometric
/// radial profile `r(t) = r0 + sum_k (a_k cos kt + b_k sin kt)`.
pub struct Radial {
    pub r0: f64,
    /// `(k, cos amplitude, sin amplitude)` triplets.
    pub modes: Vec<(u32, f64, f64)>,
}

impl Radial {
    fn r(&self, t: f64) -> (f64, f64, f64) {
        let mut r = self.r0;
        let mut dr = 0.0;
        let mut ddr = 0.0;
        for &(k, a, b) in &self.modes {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            r += a * c + b * s;
            dr += kf * (-a * s + b * c);
            ddr += kf * kf * (-a * c - b * s);
        }
        (r, dr, ddr)
    }
}

impl Curve for Radial {
    fn descriptor(&self) -> String {
        let modes: Vec<String> = self
            .modes
            .iter()
            .map(|(k, a, b)| format!("{k}:{a}:{b}"))
            .collect();
        format!("radial:r0={};{}", self.r0, modes.join(";"))
    }
    fn point(&self, t: f64) -> [f64; 2] {
        let (r, _, _) = self.r(t);
        [r * t.cos(), r * t.sin()]
    }
    fn velocity(&self, t: f64) -> [f64; 2] {
        let (r, dr, _) = self.r(t);
        let (s, c) = t.sin_cos();
        [dr * c - r * s, dr * s + r * c]
    }
    fn acceleration(&self, t: f64) -> [f64; 2] {
        let (r, dr, ddr) = self.r(t);
        let (s, c) = t.sin_cos();
        [(ddr - r) * c - 2.0 * dr * s, (ddr - r) * s + 2.0 * dr * c]
    }
    fn seed_density(&self) -> usize {
        let kmax = self.modes.iter().map(|m| m.0).max().unwrap_or(0) as usize;
        (32 * kmax.max(1)).max(64)
    }
}

/// JSON schema of a radial profile file.
#[derive(Deserialize)]
struct RadialFile {
    r0: f64,
    #[serde(default)]
    modes: Vec<RadialMode>,
}

#[derive(Deserialize)]
struct RadialMode {
    k: u32,
    #[serde(default)]
    cos: f64,
    #[serde(default)]
    sin: f64,
}

/// Point classification relative to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A certified uniformly convex domain.
#[derive(Clone)]
pub struct ConvexDomain {
    curve: Arc<dyn Curve>,
    perimeter: f64,
    min_curvature: f64,
    max_curvature: f64,
    inradius: f64,
    area: f64,
}

impl ConvexDomain {
    /// Certify and wrap a curve. Fails when the curvature lower bound on the
    /// certification grid is not positive, or the curve does not close up
    /// into a simple loop.
    pub fn new(curve: Arc<dyn Curve>) -> Result<Self> {
        let n = CERTIFY_GRID;
        let h = 2.0 * PI / n as f64;

        let p0 = curve.point(0.0);
        let p1 = curve.point(2.0 * PI);
        let gap = ((p0[0] - p1[0]).powi(2) + (p0[1] - p1[1]).powi(2)).sqrt();
        if gap > 1e-12 {
            return Err(Error::InvalidInput {
                field: "curve",
                reason: format!("parametrization does not close up (gap {gap:.3e})"),
            });
        }

        let mut min_k = f64::INFINITY;
        let mut max_k = f64::NEG_INFINITY;
        let mut perimeter = 0.0;
        let mut area2 = 0.0;
        let mut winding = 0.0;
        let mut prev_angle = {
            let v = curve.velocity(0.0);
            v[1].atan2(v[0])
        };
        for j in 0..n {
            let t = j as f64 * h;
            let p = curve.point(t);
            let v = curve.velocity(t);
            let a = curve.acceleration(t);
            let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let k = (v[0] * a[1] - v[1] * a[0]) / speed.powi(3);
            min_k = min_k.min(k);
            max_k = max_k.max(k);
            perimeter += speed * h;
            area2 += (p[0] * v[1] - p[1] * v[0]) * h;
            let angle = v[1].atan2(v[0]);
            let mut d = angle - prev_angle;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
            prev_angle = angle;
        }
        // close the tangent loop back to t = 2pi
        {
            let v = curve.velocity(2.0 * PI);
            let angle = v[1].atan2(v[0]);
            let mut d = angle - prev_angle;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
        }

        if !(min_k > 0.0) {
            return Err(Error::CurvatureBound(format!(
                "minimum signed curvature on the {n}-point grid is {min_k:.6e} for `{}`",
                curve.descriptor()
            )));
        }
        let turns = (winding / (2.0 * PI)).round();
        if (turns - 1.0).abs() > 1e-9 || (winding / (2.0 * PI) - turns).abs() > 1e-6 {
            return Err(Error::InvalidInput {
                field: "curve",
                reason: format!("tangent winding number is {} (need 1)", winding / (2.0 * PI)),
            });
        }

        let mut dom = ConvexDomain {
            curve,
            perimeter,
            min_curvature: min_k,
            max_curvature: max_k,
            inradius: 0.0,
            area: 0.5 * area2,
        };
        // Distance from the star center to the boundary; all registered
        // curve kinds are star-shaped about the origin.
        let (d, _) = dom.project(&[0.0, 0.0]);
        dom.inradius = d;
        Ok(dom)
    }

    pub fn descriptor(&self) -> String {
        self.curve.descriptor()
    }
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }
    /// Certified positive lower bound of the signed curvature.
    pub fn min_curvature(&self) -> f64 {
        self.min_curvature
    }
    pub fn max_curvature(&self) -> f64 {
        self.max_curvature
    }
    /// Distance from the origin anchor to the boundary; the reference length
    /// for distance bands.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }
    /// Enclosed area (shoelace integral on the certification grid).
    pub fn area(&self) -> f64 {
        self.area
    }
    pub fn is_circle(&self) -> Option<f64> {
        self.curve.descriptor().strip_prefix("circle:").map(|r| r.parse().unwrap())
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        self.curve.point(t)
    }
    pub fn velocity(&self, t: f64) -> [f64; 2] {
        self.curve.velocity(t)
    }

    /// Signed curvature, positive for the counterclockwise convex curves
    /// this type certifies.
    pub fn curvature(&self, t: f64) -> f64 {
        let v = self.curve.velocity(t);
        let a = self.curve.acceleration(t);
        let speed2 = v[0] * v[0] + v[1] * v[1];
        (v[0] * a[1] - v[1] * a[0]) / (speed2 * speed2.sqrt())
    }

    /// Outward unit normal.
    pub fn normal(&self, t: f64) -> [f64; 2] {
        let v = self.curve.velocity(t);
        let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[1] / speed, -v[0] / speed]
    }

    /// Closest boundary parameter and distance, for any point off the curve.
    /// Convexity makes the minimizer unique; ties (the disk center) resolve
    /// to the first grid seed, i.e. `t = 0`.
    fn project(&self, x: &[f64; 2]) -> (f64, f64) {
        let n = self.curve.seed_density();
        let h = 2.0 * PI / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for j in 0..n {
            let t = j as f64 * h;
            let p = self.curve.point(t);
            let d2 = (x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2);
            // strict relative improvement, so roundoff-level ties keep the
            // first seed (t = 0 at the disk center)
            if d2 < best.0 * (1.0 - 1e-12) {
                best = (d2, t);
            }
        }
        // F(t) = (x - gamma(t)) . gamma'(t) vanishes at the foot point and
        // decreases through it; Newton with a bisection bracket fallback.
        let obj = |t: f64| {
            let p = self.curve.point(t);
            let v = self.curve.velocity(t);
            (x[0] - p[0]) * v[0] + (x[1] - p[1]) * v[1]
        };
        let dobj = |t: f64| {
            let p = self.curve.point(t);
            let v = self.curve.velocity(t);
            let a = self.curve.acceleration(t);
            -(v[0] * v[0] + v[1] * v[1]) + (x[0] - p[0]) * a[0] + (x[1] - p[1]) * a[1]
        };
        let (mut lo, mut hi) = (best.1 - h, best.1 + h);
        let mut t = best.1;
        let mut converged = false;
        for _ in 0..100 {
            let f = obj(t);
            if f == 0.0 {
                // flat objective (equidistant boundary): keep the seed
                converged = true;
                break;
            }
            let df = dobj(t);
            if df == 0.0 {
                break;
            }
            let step = f / df;
            let tn = t - step;
            if tn < lo || tn > hi {
                break;
            }
            t = tn;
            if step.abs() < 1e-13 {
                converged = true;
                break;
            }
        }
        if !converged {
            // bracketed bisection on the sign of F
            let (mut flo, mut fhi) = (obj(lo), obj(hi));
            if flo >= 0.0 && fhi <= 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = obj(mid);
                    if fm >= 0.0 {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                        fhi = fm;
                    }
                    if hi - lo < 1e-13 {
                        break;
                    }
                }
                let _ = (flo, fhi);
                t = 0.5 * (lo + hi);
            } else {
                t = best.1; // flat objective: the tie-break seed
            }
        }
        let t = t.rem_euclid(2.0 * PI);
        let p = self.curve.point(t);
        let d = ((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2)).sqrt();
        (d, t)
    }

    /// Distance to the boundary together with the attaining parameter.
    /// Errors unless `x` is strictly interior.
    pub fn distance_to_boundary(&self, x: &[f64; 2]) -> Result<(f64, f64)> {
        let (d, t) = self.project(x);
        let nrm = self.normal(t);
        let p = self.curve.point(t);
        let signed = (x[0] - p[0]) * nrm[0] + (x[1] - p[1]) * nrm[1];
        if signed >= -BOUNDARY_BAND {
            return Err(Error::NotInterior(x[0], x[1]));
        }
        Ok((d, t))
    }

    pub fn contains(&self, x: &[f64; 2]) -> Location {
        let (d, t) = self.project(x);
        if d <= BOUNDARY_BAND {
            return Location::Boundary;
        }
        let nrm = self.normal(t);
        let p = self.curve.point(t);
        let signed = (x[0] - p[0]) * nrm[0] + (x[1] - p[1]) * nrm[1];
        if signed.abs() <= BOUNDARY_BAND {
            Location::Boundary
        } else if signed < 0.0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Local graph chart of the boundary over the tangent line at `t0`:
    /// `z' -> base + z' tangent + psi(z') (inward normal)` traces the curve,
    /// with `psi(0) = 0` exactly.
    pub fn local_graph(&self, t0: f64, half_width: f64) -> Result<LocalGraph> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidInput { field: "half_width", reason: "must be > 0".into() });
        }
        let chart = LocalGraph::build(self.clone(), t0, half_width)?;
        Ok(chart)
    }
}

/// Boundary patch written as a graph over the tangent line.
#[derive(Clone)]
pub struct LocalGraph {
    domain: ConvexDomain,
    t0: f64,
    pub base_point: [f64; 2],
    pub tangent: [f64; 2],
    /// Inward unit normal (the graph direction).
    pub inward: [f64; 2],
    pub half_width: f64,
    pub psi_grad0: f64,
    /// Certified lower bound of `|psi''|` on the chart sample grid.
    pub hess_lower: f64,
}

impl LocalGraph {
    fn build(domain: ConvexDomain, t0: f64, half_width: f64) -> Result<Self> {
        let base_point = domain.point(t0);
        let v = domain.velocity(t0);
        let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let tangent = [v[0] / speed, v[1] / speed];
        let n0 = domain.normal(t0);
        let inward = [-n0[0], -n0[1]];
        let mut chart = LocalGraph {
            domain,
            t0,
            base_point,
            tangent,
            inward,
            half_width,
            psi_grad0: 0.0,
            hess_lower: 0.0,
        };
        // Graph condition: the chart solve must converge and the normal must
        // not turn by a quarter circle anywhere on the patch.
        let samples = 64;
        let mut hess_min = f64::INFINITY;
        let fd = (half_width * 1e-4).max(1e-7);
        for j in 0..=samples {
            let zp = -half_width + 2.0 * half_width * j as f64 / samples as f64;
            let t = chart.solve_parameter(zp)?;
            let nt = chart.domain.normal(t);
            if nt[0] * n0[0] + nt[1] * n0[1] <= 0.0 {
                return Err(Error::ChartTooWide(format!(
                    "normal turns by >= pi/2 at chart coordinate {zp:.4}"
                )));
            }
            if zp.abs() + fd < half_width {
                let dd = (chart.psi(zp + fd)? - 2.0 * chart.psi(zp)? + chart.psi(zp - fd)?)
                    / (fd * fd);
                hess_min = hess_min.min(dd.abs());
            }
        }
        chart.hess_lower = hess_min;
        let g0 = (chart.psi(fd)? - chart.psi(-fd)?) / (2.0 * fd);
        chart.psi_grad0 = g0;
        Ok(chart)
    }

    /// Parameter t with tangential offset `zp` from the base point.
    fn solve_parameter(&self, zp: f64) -> Result<f64> {
        if zp == 0.0 {
            return Ok(self.t0);
        }
        let v0 = self.domain.velocity(self.t0);
        let speed0 = (v0[0] * v0[0] + v0[1] * v0[1]).sqrt();
        let mut t = self.t0 + zp / speed0;
        for _ in 0..100 {
            let p = self.domain.point(t);
            let s = (p[0] - self.base_point[0]) * self.tangent[0]
                + (p[1] - self.base_point[1]) * self.tangent[1];
            let v = self.domain.velocity(t);
            let ds = v[0] * self.tangent[0] + v[1] * self.tangent[1];
            if ds <= 0.0 {
                return Err(Error::ChartTooWide(format!(
                    "tangential coordinate is not monotone at offset {zp:.4}"
                )));
            }
            let step = (s - zp) / ds;
            t -= step;
            if step.abs() < 1e-14 {
                return Ok(t);
            }
        }
        Err(Error::ChartTooWide(format!("chart solve did not converge at offset {zp:.4}")))
    }

    /// Height of the curve over the tangent line at offset `zp`.
    pub fn psi(&self, zp: f64) -> Result<f64> {
        let t = self.solve_parameter(zp)?;
        let p = self.domain.point(t);
        Ok((p[0] - self.base_point[0]) * self.inward[0] + (p[1] - self.base_point[1]) * self.inward[1])
    }

    /// Point on the curve at chart coordinate `zp`.
    pub fn trace(&self, zp: f64) -> Result<[f64; 2]> {
        let h = self.psi(zp)?;
        Ok([
            self.base_point[0] + zp * self.tangent[0] + h * self.inward[0],
            self.base_point[1] + zp * self.tangent[1] + h * self.inward[1],
        ])
    }
}

/// Build a domain from a descriptor: `circle:R`, `ellipse:A,B`, or
/// `radial:<json file>`.
pub fn parse_domain(spec: &str) -> Result<ConvexDomain> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("domain spec `{spec}` has no `kind:args` form")))?;
    match kind {
        "circle" => {
            let r: f64 = args
                .parse()
                .map_err(|_| Error::Parse(format!("circle radius `{args}` is not a number")))?;
            if !(r > 0.0) {
                return Err(Error::CurvatureBound(format!("circle radius {r} must be positive")));
            }
            ConvexDomain::new(Arc::new(Circle { radius: r }))
        }
        "ellipse" => {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("ellipse spec `{args}` needs `a,b`")))?;
            let a: f64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad ellipse axis `{a}`")))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad ellipse axis `{b}`")))?;
            ConvexDomain::new(Arc::new(Ellipse { a, b }))
        }
        "radial" => {
            let text = std::fs::read_to_string(args)?;
            radial_from_json(&text)
        }
        other => Err(Error::UnknownStrategy {
            kind: "domain",
            name: other.into(),
            available: "circle, ellipse, radial".into(),
        }),
    }
}

/// Build a radial-profile domain from JSON text.
pub fn radial_from_json(text: &str) -> Result<ConvexDomain> {
    let file: RadialFile = serde_json::from_str(text)?;
    let modes = file.modes.iter().map(|m| (m.k, m.cos, m.sin)).collect();
    ConvexDomain::new(Arc::new(Radial { r0: file.r0, modes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn unit_circle() -> ConvexDomain {
        parse_domain("circle:1").unwrap()
    }

    fn ellipse21() -> ConvexDomain {
        parse_domain("ellipse:2,1").unwrap()
    }

    #[test]
    fn circle_curvature() {
        let dom = unit_circle();
        for t in [0.0, 1.0, 2.5, 6.0] {
            assert_abs_diff_eq!(dom.curvature(t), 1.0, epsilon = 1e-12);
        }
        let dom = parse_domain("circle:2.5").unwrap();
        assert_abs_diff_eq!(dom.curvature(0.7), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn ellipse_curvature_against_finite_differences() {
        let dom = ellipse21();
        // closed form at the flat end: a/b^2
        assert_abs_diff_eq!(dom.curvature(0.0), 2.0, epsilon = 1e-12);
        // oracle: second-order finite differences of the parametrization
        let h = 1e-5;
        for t in [0.3, 1.1, 2.0, 4.4] {
            let p = |t: f64| dom.point(t);
            let v = [
                (p(t + h)[0] - p(t - h)[0]) / (2.0 * h),
                (p(t + h)[1] - p(t - h)[1]) / (2.0 * h),
            ];
            let a = [
                (p(t + h)[0] - 2.0 * p(t)[0] + p(t - h)[0]) / (h * h),
                (p(t + h)[1] - 2.0 * p(t)[1] + p(t - h)[1]) / (h * h),
            ];
            let speed2 = v[0] * v[0] + v[1] * v[1];
            let k_fd = (v[0] * a[1] - v[1] * a[0]) / (speed2 * speed2.sqrt());
            assert_abs_diff_eq!(dom.curvature(t), k_fd, epsilon = 1e-5);
        }
    }

    #[test]
    fn certification_values() {
        let dom = unit_circle();
        assert_abs_diff_eq!(dom.perimeter(), 2.0 * PI, epsilon = 1e-10);
        assert_abs_diff_eq!(dom.min_curvature(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(dom.inradius(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(dom.area(), PI, epsilon = 1e-10);

        let dom = ellipse21();
        assert_abs_diff_eq!(dom.min_curvature(), 0.25, epsilon = 1e-6);
        assert_abs_diff_eq!(dom.max_curvature(), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(dom.inradius(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(dom.area(), 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_domains_are_rejected() {
        assert!(matches!(parse_domain("ellipse:1,-2"), Err(Error::CurvatureBound(_))));
        assert!(matches!(parse_domain("circle:0"), Err(Error::CurvatureBound(_))));
        assert!(parse_domain("square:1").is_err());
    }

    #[test]
    fn normals_are_unit_and_outward() {
        let dom = ellipse21();
        for j in 0..32 {
            let t = 2.0 * PI * j as f64 / 32.0;
            let n = dom.normal(t);
            assert_abs_diff_eq!((n[0] * n[0] + n[1] * n[1]).sqrt(), 1.0, epsilon = 1e-12);
            // outward: moving along n increases the distance from the origin
            let p = dom.point(t);
            assert!(p[0] * n[0] + p[1] * n[1] > 0.0);
        }
    }

    #[test]
    fn distance_on_circle() {
        let dom = unit_circle();
        let (d, t) = dom.distance_to_boundary(&[0.5, 0.0]).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-12);
        let p = dom.point(t);
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-10);
        // center: every parameter ties; the tie-break returns t = 0
        let (d, t) = dom.distance_to_boundary(&[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t, 0.0);
    }

    #[test]
    fn distance_on_ellipse_against_grid_oracle() {
        let dom = ellipse21();
        let x = [0.0, 0.25];
        let (d, _) = dom.distance_to_boundary(&x).unwrap();
        // oracle: dense grid + golden-section refinement, no derivatives
        let dist = |t: f64| {
            let p = dom.point(t);
            ((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2)).sqrt()
        };
        let n = 4096;
        let mut tbest = 0.0;
        let mut dbest = f64::INFINITY;
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let dj = dist(t);
            if dj < dbest {
                dbest = dj;
                tbest = t;
            }
        }
        let (mut lo, mut hi) = (tbest - 2.0 * PI / n as f64, tbest + 2.0 * PI / n as f64);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut c, mut dpt) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        for _ in 0..120 {
            if dist(c) < dist(dpt) {
                hi = dpt;
            } else {
                lo = c;
            }
            c = hi - phi * (hi - lo);
            dpt = lo + phi * (hi - lo);
        }
        let oracle = dist(0.5 * (lo + hi));
        assert_abs_diff_eq!(d, oracle, epsilon = 1e-9);
    }

    #[test]
    fn distance_rejects_exterior_points() {
        let dom = unit_circle();
        assert!(dom.distance_to_boundary(&[1.0, 0.0]).is_err());
        assert!(dom.distance_to_boundary(&[2.0, 0.0]).is_err());
    }

    #[test]
    fn contains_classification() {
        let dom = unit_circle();
        assert_eq!(dom.contains(&[0.0, 0.0]), Location::Inside);
        assert_eq!(dom.contains(&[1.0, 0.0]), Location::Boundary);
        assert_eq!(dom.contains(&[2.0, 0.0]), Location::Outside);
    }

    #[test]
    fn projection_consistency_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for dom in [unit_circle(), ellipse21()] {
            let mut tested = 0;
            while tested < 50 {
                let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)];
                if dom.contains(&x) != Location::Inside {
                    continue;
                }
                if let Ok((d, t)) = dom.distance_to_boundary(&x) {
                    let p = dom.point(t);
                    let r = [x[0] - p[0], x[1] - p[1]];
                    assert_abs_diff_eq!((r[0] * r[0] + r[1] * r[1]).sqrt(), d, epsilon = 1e-10);
                    let n = dom.normal(t);
                    // residual must be parallel to the normal
                    let cross = r[0] * n[1] - r[1] * n[0];
                    assert!(cross.abs() < 1e-9, "cross = {cross:e}");
                    tested += 1;
                }
            }
        }
    }

    #[test]
    fn local_graph_circle_closed_form() {
        let dom = unit_circle();
        let chart = dom.local_graph(0.0, 0.3).unwrap();
        assert_eq!(chart.psi(0.0).unwrap(), 0.0);
        for zp in [-0.29f64, -0.1, 0.05, 0.2, 0.29] {
            let expected = 1.0 - (1.0 - zp * zp).sqrt();
            assert_abs_diff_eq!(chart.psi(zp).unwrap(), expected, epsilon = 1e-10);
        }
        // psi''(0) equals the curvature
        let h = 1e-4;
        let dd = (chart.psi(h).unwrap() - 2.0 * chart.psi(0.0).unwrap() + chart.psi(-h).unwrap()) / (h * h);
        assert_abs_diff_eq!(dd, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(chart.psi_grad0, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn local_graph_ellipse_top() {
        let dom = ellipse21();
        let chart = dom.local_graph(PI / 2.0, 0.4).unwrap();
        let h = 1e-4;
        let dd = (chart.psi(h).unwrap() - 2.0 * chart.psi(0.0).unwrap() + chart.psi(-h).unwrap()) / (h * h);
        // curvature at (0, 1) is b/a^2 = 1/4
        assert_abs_diff_eq!(dd, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn local_graph_traces_lie_on_boundary() {
        let dom = ellipse21();
        let chart = dom.local_graph(1.0, 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let zp = rng.gen_range(-0.5..0.5);
            let p = chart.trace(zp).unwrap();
            // the traced point classifies as boundary up to the band
            let (d, _) = dom.project(&p);
            assert!(d < 1e-10, "traced point is {d:e} off the curve");
        }
    }

    #[test]
    fn local_graph_rejects_oversized_chart() {
        let dom = unit_circle();
        // a chart of half-width 2 would need the normal to turn past pi/2
        assert!(matches!(dom.local_graph(0.0, 2.0), Err(Error::ChartTooWide(_))));
    }

    #[test]
    fn radial_profiles() {
        let ok = radial_from_json(r#"{"r0": 1.0, "modes": [{"k": 3, "cos": 0.05}]}"#).unwrap();
        assert!(ok.min_curvature() > 0.0);
        // amplitude 0.2 at k = 3 drives the curvature negative at the troughs
        let bad = radial_from_json(r#"{"r0": 1.0, "modes": [{"k": 3, "cos": 0.2}]}"#);
        assert!(matches!(bad, Err(Error::CurvatureBound(_))));
    }
}
