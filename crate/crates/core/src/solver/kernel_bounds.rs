//! Derivative bounds of the closed-form Poisson kernel on the unit disk.
//!
//! For the unit circle, `P(x, y) = (1 - |x|^2) / (2 pi |x - y|^2)` extends
//! smoothly off the curve in `y`, so mixed derivatives along the boundary
//! frame (tangent, normal) can be formed by central finite differences and
//! tested against the scaling `|D^alpha_y P| <= C / |x - y|^{1 + |alpha|}`
//! (dimension 2). The check reports, per multi-index, the largest observed
//! product `|D^alpha_y P| * |x - y|^{1 + |alpha|}` over a grid of interior
//! points and boundary points.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Finite-difference step for the kernel derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Result row: one multi-index `(tangential, normal)` order and the largest
/// observed bound product.
#[derive(Debug, Clone, Copy)]
pub struct KernelBoundSample {
    pub alpha: [usize; 2],
    pub max_product: f64,
}

fn poisson(x: &[f64; 2], y: &[f64; 2]) -> f64 {
    let dx = x[0] - y[0];
    let dy = x[1] - y[1];
    (1.0 - x[0] * x[0] - x[1] * x[1]) / (2.0 * PI * (dx * dx + dy * dy))
}

/// Central stencil (offsets, coefficients) for d^k/dh^k, k <= 3.
fn stencil(order: usize) -> (&'static [i32], &'static [f64]) {
    match order {
        0 => (&[0], &[1.0]),
        1 => (&[-1, 1], &[-0.5, 0.5]),
        2 => (&[-1, 0, 1], &[1.0, -2.0, 1.0]),
        3 => (&[-2, -1, 1, 2], &[-0.5, 1.0, -1.0, 0.5]),
        _ => panic!("stencils implemented up to order 3"),
    }
}

/// Mixed finite-difference derivative of P in the boundary frame at
/// `y0 = (cos theta, sin theta)`: `alpha.0` tangential steps along the
/// parametrization direction, `alpha.1` steps along the outward normal.
fn kernel_derivative(x: &[f64; 2], theta: f64, alpha: [usize; 2]) -> f64 {
    let (s_off, s_co) = stencil(alpha[0]);
    let (n_off, n_co) = stencil(alpha[1]);
    let (sin_t, cos_t) = theta.sin_cos();
    let tau = [-sin_t, cos_t];
    let nrm = [cos_t, sin_t];
    let y0 = [cos_t, sin_t];
    let h = FD_STEP;
    let mut acc = 0.0;
    for (&i, &ci) in s_off.iter().zip(s_co) {
        for (&j, &cj) in n_off.iter().zip(n_co) {
            let y = [
                y0[0] + i as f64 * h * tau[0] + j as f64 * h * nrm[0],
                y0[1] + i as f64 * h * tau[1] + j as f64 * h * nrm[1],
            ];
            acc += ci * cj * poisson(x, &y);
        }
    }
    acc / h.powi((alpha[0] + alpha[1]) as i32)
}

/// Evaluate the bound products for each requested multi-index over the given
/// interior points and boundary parameters. Pairs closer than `1e-3` are
/// excluded (the finite-difference step needs room).
pub fn kernel_derivative_check(
    orders: &[[usize; 2]],
    x_set: &[[f64; 2]],
    y_params: &[f64],
) -> Result<Vec<KernelBoundSample>> {
    for a in orders {
        if a[0] + a[1] > 3 {
            return Err(Error::InvalidInput {
                field: "orders",
                reason: format!("|alpha| = {} exceeds 3", a[0] + a[1]),
            });
        }
    }
    for x in x_set {
        if x[0] * x[0] + x[1] * x[1] >= 1.0 {
            return Err(Error::NotInterior(x[0], x[1]));
        }
    }
    let mut out = Vec::with_capacity(orders.len());
    for &alpha in orders {
        let total = alpha[0] + alpha[1];
        let mut max_product = 0.0f64;
        for x in x_set {
            for &theta in y_params {
                let y = [theta.cos(), theta.sin()];
                let dist = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
                if dist < 1e-3 {
                    continue;
                }
                let d = kernel_derivative(x, theta, alpha);
                max_product = max_product.max(d.abs() * dist.powi(1 + total as i32));
            }
        }
        out.push(KernelBoundSample { alpha, max_product });
    }
    Ok(out)
}
