//! Band-limited 1-periodic functions on the d-torus.
//!
//! A [`FourierData`] stores finitely many Fourier coefficients `c_m` indexed
//! by integer frequency vectors `m`, so every evaluation is an exact finite
//! sum `sum_m c_m e^{2 pi i m.x}`. Alongside evaluation it provides the
//! coefficient-decay sums and derivative norms used by the multi-index and
//! coefficient-summability checks, where `||m||` is always the Euclidean
//! norm of the frequency vector.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Frequency vector on the integer lattice.
pub type Freq = Vec<i64>;

/// A function on the d-torus represented by finitely many Fourier modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    dim: usize,
    coeffs: BTreeMap<Freq, Complex64>,
    max_freq: i64,
}

impl FourierData {
    /// Build from `(m, c_m)` pairs. Zero coefficients are dropped; duplicate
    /// frequencies are rejected.
    pub fn new(dim: usize, modes: impl IntoIterator<Item = (Freq, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput { field: "dim", reason: "must be >= 1".into() });
        }
        let mut coeffs = BTreeMap::new();
        for (m, c) in modes {
            if m.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.len() });
            }
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if coeffs.insert(m.clone(), c).is_some() {
                return Err(Error::InvalidInput {
                    field: "coeffs",
                    reason: format!("duplicate frequency {m:?}"),
                });
            }
        }
        let max_freq = coeffs.keys().map(|m| linf(m)).max().unwrap_or(0);
        Ok(FourierData { dim, coeffs, max_freq })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest `||m||_inf` over the support.
    pub fn max_freq(&self) -> i64 {
        self.max_freq
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Freq, &Complex64)> {
        self.coeffs.iter()
    }

    /// True when `c_{-m}` is the complex conjugate of `c_m` for every mode,
    /// i.e. the represented function is real-valued.
    pub fn is_real_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(m, c)| {
            let neg: Freq = m.iter().map(|&mi| -mi).collect();
            match self.coeffs.get(&neg) {
                Some(cn) => (cn - c.conj()).norm() <= 1e-14 * (1.0 + c.norm()),
                None => c.norm() <= 1e-14,
            }
        })
    }

    /// `sum_m c_m e^{2 pi i m.x}`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput { field: "x", reason: "non-finite coordinate".into() });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.coeffs {
            let phase: f64 = m.iter().zip(x).map(|(&mi, &xi)| mi as f64 * xi).sum();
            acc += c * Complex64::cis(2.0 * PI * phase);
        }
        Ok(acc)
    }

    /// `g(x / eps)`.
    pub fn evaluate_scaled(&self, x: &[f64], eps: f64) -> Result<Complex64> {
        if !(eps > 0.0) {
            return Err(Error::InvalidInput { field: "eps", reason: format!("must be > 0, got {eps}") });
        }
        let scaled: Vec<f64> = x.iter().map(|&xi| xi / eps).collect();
        self.evaluate(&scaled)
    }

    /// Torus mean, i.e. the coefficient at `m = 0`.
    pub fn mean(&self) -> Complex64 {
        let zero: Freq = vec![0; self.dim];
        self.coeffs.get(&zero).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `sum_{0 < ||m||_inf <= cutoff} |c_m| / ||m||^beta` (Euclidean `||m||`).
    pub fn decay_sum(&self, beta: f64, cutoff: i64) -> Result<f64> {
        if cutoff < 1 {
            return Err(Error::InvalidInput { field: "cutoff", reason: "must be >= 1".into() });
        }
        let mut acc = 0.0;
        for (m, c) in &self.coeffs {
            let li = linf(m);
            if li == 0 || li > cutoff {
                continue;
            }
            acc += c.norm() / euclid(m).powf(beta);
        }
        Ok(acc)
    }

    /// `( sum_m sum_{|alpha|=k} |(2 pi m)^alpha|^2 |c_m|^2 )^{1/2}`, the
    /// Parseval value of the order-`k` derivative energy.
    pub fn sobolev_rhs(&self, k: usize) -> f64 {
        let scale = (2.0 * PI).powi(2 * k as i32);
        let mut acc = 0.0;
        for (m, c) in &self.coeffs {
            let msum: f64 = compositions(k, self.dim)
                .iter()
                .map(|alpha| {
                    let p = monomial_abs(m, alpha);
                    p * p
                })
                .sum();
            acc += scale * msum * c.norm_sqr();
        }
        acc.sqrt()
    }
}

fn linf(m: &[i64]) -> i64 {
    m.iter().map(|v| v.abs()).max().unwrap_or(0)
}

fn euclid(m: &[i64]) -> f64 {
    (m.iter().map(|&v| (v * v) as f64).sum::<f64>()).sqrt()
}

/// `prod_i |m_i|^{alpha_i}` as an exactly-representable float.
fn monomial_abs(m: &[i64], alpha: &[usize]) -> f64 {
    let mut p: i128 = 1;
    for (&mi, &ai) in m.iter().zip(alpha) {
        p *= (mi.unsigned_abs() as i128).pow(ai as u32);
    }
    p as f64
}

/// All multi-indices `alpha` in `Z_+^d` with `|alpha| = k`.
fn compositions(k: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    fn rec(rest: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() - 1 {
            cur[pos] = rest;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rest {
            cur[pos] = v;
            rec(rest - v, pos + 1, cur, out);
        }
    }
    rec(k, 0, &mut cur, &mut out);
    out
}

/// `sum_{|alpha|=k} |m^alpha|` together with its ratio to `||m||^k`.
///
/// The ratio is mathematically invariant under `m -> t m` (`t > 0`), and
/// the implementation makes that invariance exact in floating point by
/// reducing `m` by the gcd of its components before dividing.
pub fn multiindex_lower_bound(m: &[i64], k: usize) -> Result<(f64, f64)> {
    if m.iter().all(|&v| v == 0) {
        return Err(Error::InvalidInput { field: "m", reason: "must be nonzero".into() });
    }
    if k < 1 {
        return Err(Error::InvalidInput { field: "k", reason: "must be >= 1".into() });
    }
    let d = m.len();
    let alphas = compositions(k, d);
    let sum: f64 = alphas.iter().map(|a| monomial_abs(m, a)).sum();
    let g = m.iter().fold(0i64, |acc, &v| gcd(acc, v.abs()));
    let primitive: Vec<i64> = m.iter().map(|&v| v / g).collect();
    let psum: f64 = alphas.iter().map(|a| monomial_abs(&primitive, a)).sum();
    let ratio = psum / euclid(&primitive).powi(k as i32);
    Ok((sum, ratio))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One coefficient record of the JSON input format:
/// `{"m": [1, 0], "re": 0.5, "im": 0.0}`.
#[derive(Debug, Deserialize)]
struct CoeffRecord {
    m: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// Parse a coefficient list from JSON text. All records must share one
/// dimension.
pub fn from_json(text: &str) -> Result<FourierData> {
    let records: Vec<CoeffRecord> = serde_json::from_str(text)?;
    if records.is_empty() {
        return Err(Error::Parse("coefficient list is empty".into()));
    }
    let dim = records[0].m.len();
    FourierData::new(dim, records.into_iter().map(|r| (r.m, Complex64::new(r.re, r.im))))
}

/// Named built-in boundary data. `cos1` is `cos(2 pi x1)`, `cos-cos` is
/// `cos(2 pi x1) cos(2 pi x2)`, and `decay-p` has `|c_m| = ||m||^{-(d+1)}`
/// truncated at `||m||_inf <= 64` (d = 2).
pub fn builtin(name: &str) -> Result<FourierData> {
    match name {
        "cos1" => FourierData::new(
            2,
            [
                (vec![1, 0], Complex64::new(0.5, 0.0)),
                (vec![-1, 0], Complex64::new(0.5, 0.0)),
            ],
        ),
        "cos-cos" => FourierData::new(
            2,
            [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .into_iter()
                .map(|(a, b)| (vec![a, b], Complex64::new(0.25, 0.0))),
        ),
        "decay-p" => {
            let mut modes = Vec::new();
            for m1 in -64i64..=64 {
                for m2 in -64i64..=64 {
                    if m1 == 0 && m2 == 0 {
                        continue;
                    }
                    let c = euclid(&[m1, m2]).powi(-3);
                    modes.push((vec![m1, m2], Complex64::new(c, 0.0)));
                }
            }
            FourierData::new(2, modes)
        }
        other => Err(Error::UnknownStrategy {
            kind: "builtin data",
            name: other.into(),
            available: "cos1, cos-cos, decay-p".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cos1() -> FourierData {
        builtin("cos1").unwrap()
    }

    #[test]
    fn evaluate_constant() {
        let g = FourierData::new(2, [(vec![0, 0], Complex64::new(1.0, 0.0))]).unwrap();
        let v = g.evaluate(&[0.37, -1.2]).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn evaluate_cosine_mode() {
        let g = cos1();
        assert_abs_diff_eq!(g.evaluate(&[0.0, 0.0]).unwrap().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.evaluate(&[0.25, 0.7]).unwrap().re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_scaled_matches_rescaling() {
        let g = cos1();
        // cos(2 pi (1/8) / (1/8)) = cos(2 pi) = 1
        assert_abs_diff_eq!(g.evaluate_scaled(&[0.125, 0.0], 0.125).unwrap().re, 1.0, epsilon = 1e-12);
        // eps = 1 is the identity scaling
        let x = [0.11, 0.83];
        let a = g.evaluate_scaled(&x, 1.0).unwrap();
        let b = g.evaluate(&x).unwrap();
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        // cos(2 pi 0.025/0.1) = cos(pi/2) = 0
        assert_abs_diff_eq!(g.evaluate_scaled(&[0.025, 0.0], 0.1).unwrap().re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn evaluate_scaled_rejects_bad_eps() {
        let g = cos1();
        assert!(g.evaluate_scaled(&[0.0, 0.0], 0.0).is_err());
        assert!(g.evaluate_scaled(&[0.0, 0.0], -1.0).is_err());
    }

    #[test]
    fn mean_is_zeroth_coefficient() {
        assert_abs_diff_eq!(cos1().mean().re, 0.0);
        let g = FourierData::new(2, [(vec![0, 0], Complex64::new(3.5, 0.0))]).unwrap();
        assert_abs_diff_eq!(g.mean().re, 3.5);
        // 2 + cos cos: mean is 2 (the product modes have zero mean)
        let mut modes = vec![(vec![0, 0], Complex64::new(2.0, 0.0))];
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            modes.push((vec![a, b], Complex64::new(0.25, 0.0)));
        }
        let g = FourierData::new(2, modes).unwrap();
        assert_abs_diff_eq!(g.mean().re, 2.0);
    }

    #[test]
    fn decay_sum_two_mode() {
        // Two coefficients of modulus 1/2 at ||m|| = 1, any beta.
        for beta in [0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(cos1().decay_sum(beta, 1).unwrap(), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(cos1().decay_sum(beta, 8).unwrap(), 1.0, epsilon = 1e-15);
        }
        let constant = FourierData::new(2, [(vec![0, 0], Complex64::new(4.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(constant.decay_sum(1.0, 4).unwrap(), 0.0);
    }

    #[test]
    fn decay_sum_against_direct_summation() {
        // c_{(k,0)} = 1/k^2 for 1 <= |k| <= 4, beta = 1.
        let modes = (-4i64..=4)
            .filter(|&k| k != 0)
            .map(|k| (vec![k, 0], Complex64::new(1.0 / (k * k) as f64, 0.0)));
        let g = FourierData::new(2, modes).unwrap();
        // independent oracle: direct summation over the lattice box
        let mut oracle = 0.0;
        for k in -4i64..=4 {
            if k == 0 {
                continue;
            }
            oracle += (1.0 / (k * k) as f64) / euclid(&[k, 0]);
        }
        let expected = 2.0 * (1.0 + 1.0 / 8.0 + 1.0 / 27.0 + 1.0 / 64.0);
        assert_abs_diff_eq!(oracle, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(g.decay_sum(1.0, 4).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn sobolev_rhs_against_quadrature() {
        // Oracle: integrate the closed-form derivative energies of
        // cos(2 pi x1) over the unit square by the periodic trapezoid rule.
        let g = cos1();
        let n = 64;
        let h = 1.0 / n as f64;
        // k = 1: |d1 g|^2 + |d2 g|^2 with d1 g = -2 pi sin(2 pi x1), d2 g = 0
        let mut energy = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x1 = i as f64 * h;
                let _x2 = j as f64 * h;
                let d1 = -2.0 * PI * (2.0 * PI * x1).sin();
                energy += (d1 * d1) * h * h;
            }
        }
        let oracle_k1 = energy.sqrt();
        assert_abs_diff_eq!(oracle_k1, PI * std::f64::consts::SQRT_2, epsilon = 1e-10);
        assert_abs_diff_eq!(g.sobolev_rhs(1), oracle_k1, epsilon = 1e-10);

        // k = 0: plain L^2 norm
        let mut l2 = 0.0;
        for i in 0..n {
            let x1 = i as f64 * h;
            let v = (2.0 * PI * x1).cos();
            l2 += v * v * h;
        }
        assert_abs_diff_eq!(g.sobolev_rhs(0), l2.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(g.sobolev_rhs(0), 0.5f64.sqrt(), epsilon = 1e-12);

        // constants have vanishing derivatives of every positive order
        let c = FourierData::new(2, [(vec![0, 0], Complex64::new(7.0, 0.0))]).unwrap();
        for k in 1..=4 {
            assert_abs_diff_eq!(c.sobolev_rhs(k), 0.0);
        }
    }

    #[test]
    fn multiindex_examples() {
        // only alpha = (3, 0) contributes
        let (sum, ratio) = multiindex_lower_bound(&[1, 0], 3).unwrap();
        assert_abs_diff_eq!(sum, 1.0);
        assert_abs_diff_eq!(ratio, 1.0);
        // alpha in {(2,0),(1,1),(0,2)}: 1 + 1 + 1 = 3, ||m||^2 = 2
        let (sum, ratio) = multiindex_lower_bound(&[1, 1], 2).unwrap();
        assert_abs_diff_eq!(sum, 3.0);
        assert_abs_diff_eq!(ratio, 1.5);
        // scale invariance is exact
        let (_, r1) = multiindex_lower_bound(&[1, 1], 2).unwrap();
        let (_, r2) = multiindex_lower_bound(&[2, 2], 2).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn multiindex_rejects_zero() {
        assert!(multiindex_lower_bound(&[0, 0], 2).is_err());
    }

    #[test]
    fn multiindex_brute_force_cross_check() {
        // oracle: enumerate alpha by nested loops for d = 2
        for (m, k) in [([3i64, -2], 3usize), ([5, 1], 4), ([-4, 7], 2)] {
            let mut oracle = 0.0;
            for a1 in 0..=k {
                let a2 = k - a1;
                oracle += (m[0].abs() as f64).powi(a1 as i32) * (m[1].abs() as f64).powi(a2 as i32);
            }
            let (sum, ratio) = multiindex_lower_bound(&m, k).unwrap();
            assert_abs_diff_eq!(sum, oracle, epsilon = 1e-12);
            assert!(ratio > 0.0);
        }
    }

    #[test]
    fn json_input_round_trip() {
        let text = r#"[{"m": [1, 0], "re": 0.5}, {"m": [-1, 0], "re": 0.5, "im": 0.0}]"#;
        let g = from_json(text).unwrap();
        assert_eq!(g, cos1());
        assert!(from_json("[]").is_err());
        let dup = r#"[{"m": [1, 0], "re": 0.5}, {"m": [1, 0], "re": 0.5}]"#;
        assert!(from_json(dup).is_err());
    }

    #[test]
    fn builtins_are_real_symmetric() {
        for name in ["cos1", "cos-cos", "decay-p"] {
            assert!(builtin(name).unwrap().is_real_symmetric(), "{name}");
        }
        assert!(builtin("nope").is_err());
        // a deliberately asymmetric set fails the check
        let g = FourierData::new(2, [(vec![1, 0], Complex64::new(0.5, 0.1))]).unwrap();
        assert!(!g.is_real_symmetric());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = cos1();
        assert!(matches!(g.evaluate(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }
}
