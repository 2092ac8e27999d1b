//! Quadrature building blocks: Gauss–Legendre rules, panel composites, and
//! the periodic trapezoid rule.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights by Newton iteration on the Legendre polynomial,
    /// seeded with the Chebyshev-angle approximation.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi-style initial guess for the i-th positive root.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with this rule mapped affinely.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: F) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(mid + half * x) * w)
            .sum::<Complex64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre integration of a complex integrand over `[a, b]`
/// split into `panels` equal panels. Panel contributions are reduced in
/// panel order so the result does not depend on thread scheduling.
pub fn panel_integrate_complex<F>(rule: &GaussLegendre, a: f64, b: f64, panels: usize, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    let h = (b - a) / panels as f64;
    let partials: Vec<Complex64> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = a + k as f64 * h;
            rule.integrate_complex(lo, lo + h, &f)
        })
        .collect();
    partials.into_iter().sum()
}

/// Trapezoid rule for a 1-periodic smooth integrand sampled at `n` uniform
/// nodes over one period `[0, period)`. Spectrally accurate.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(n: usize, period: f64, f: F) -> f64 {
    let h = period / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        // An n-point rule integrates degree 2n-1 exactly.
        for n in [2usize, 5, 16, 31] {
            let rule = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let exact = |d: u32| if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            for d in 0..=deg as u32 {
                let val = rule.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert_abs_diff_eq!(val, exact(d), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn gauss_legendre_16_known_values() {
        // Abramowitz & Stegun table 25.4, n=16: largest node and its weight.
        let rule = GaussLegendre::new(16);
        assert_abs_diff_eq!(rule.nodes[15], 0.989400934991649932596, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.weights[15], 0.027152459411754094852, epsilon = 1e-14);
    }

    #[test]
    fn panel_integration_smooth() {
        let rule = GaussLegendre::new(12);
        let val = panel_integrate_complex(&rule, 0.0, 1.0, 8, |x| {
            Complex64::new((2.0 * PI * x).cos(), x)
        });
        assert_abs_diff_eq!(val.re, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(val.im, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn trapezoid_periodic_spectral() {
        // cos^2 integrates to pi over a full period with any n >= 3.
        let val = trapezoid_periodic(8, 2.0 * PI, |t| t.cos() * t.cos());
        assert_abs_diff_eq!(val, PI, epsilon = 1e-13);
    }
}
