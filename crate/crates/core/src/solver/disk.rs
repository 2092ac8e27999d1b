//! Poisson-kernel backend for circles.
//!
//! On the circle of radius `R` the kernel is closed form,
//! `P(x, y) = (R^2 - |x|^2) / (2 pi R |x - y|^2)`, and the trapezoid rule
//! applied to `u(x) = int P(x, y) h(y) dsigma(y)` is spectrally accurate.
//! Whole offset rings are evaluated through the data's Fourier coefficients:
//! the mode of frequency `k` extends harmonically as `(r/R)^{|k|} e^{i k t}`.

use super::{BoundarySolution, SolverBackend};
use crate::error::Result;
use crate::geometry::ConvexDomain;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

pub struct DiskBackend;

impl SolverBackend for DiskBackend {
    fn name(&self) -> &'static str {
        "disk"
    }

    fn supports(&self, dom: &ConvexDomain) -> bool {
        dom.is_circle().is_some()
    }

    fn solve(
        &'static self,
        dom: &ConvexDomain,
        h: &(dyn Fn(f64) -> f64 + Sync),
        n: usize,
    ) -> Result<BoundarySolution> {
        let nodes: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        let data: Vec<f64> = nodes.iter().map(|&t| h(t)).collect();

        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in &mut buf {
            *c *= scale;
        }

        Ok(BoundarySolution {
            domain: dom.clone(),
            backend: self,
            nodes,
            data,
            density: None,
            ring_coeffs: Some(buf),
        })
    }

    fn evaluate(&self, sol: &BoundarySolution, x: &[f64; 2]) -> f64 {
        let radius = sol.domain.is_circle().expect("disk backend solution");
        let n = sol.nodes.len();
        let r2 = x[0] * x[0] + x[1] * x[1];
        // (2 pi R / N) * sum_j P(x, y_j) h_j  with the R^2 - |x|^2 factor
        // pulled out of the loop
        let mut acc = 0.0;
        for (t, hj) in sol.nodes.iter().zip(&sol.data) {
            let (s, c) = t.sin_cos();
            let dx = x[0] - radius * c;
            let dy = x[1] - radius * s;
            acc += hj / (dx * dx + dy * dy);
        }
        (radius * radius - r2) * acc / n as f64
    }

    fn evaluate_ring(&self, sol: &BoundarySolution, dist: f64, m: usize) -> Result<Vec<f64>> {
        let radius = sol.domain.is_circle().expect("disk backend solution");
        let coeffs = sol.ring_coeffs.as_ref().expect("disk solution stores coefficients");
        let n = coeffs.len();
        let ratio = (radius - dist) / radius;
        let mut bins = vec![Complex64::new(0.0, 0.0); m];
        for (k, &c) in coeffs.iter().enumerate() {
            // unnormalized frequency: k for k <= N/2, k - N beyond
            let freq = if k <= n / 2 { k as i64 } else { k as i64 - n as i64 };
            if 2 * freq.unsigned_abs() as usize == n {
                continue; // shared Nyquist mode, damped to nothing anyway
            }
            let damp = ratio.powi(freq.unsigned_abs() as i32);
            if damp < 1e-18 {
                continue;
            }
            let bin = freq.rem_euclid(m as i64) as usize;
            bins[bin] += c * damp;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut bins);
        Ok(bins.into_iter().map(|c| c.re).collect())
    }
}
