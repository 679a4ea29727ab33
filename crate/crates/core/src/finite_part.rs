//! Hadamard finite-part quadrature for convolutions with `|u|^{-3/2}`.
//!
//! This is the slow reference path for the regularisation kernel. It works
//! directly in position space on a continuous profile, with no Fourier
//! transform anywhere, so it can check the spectral multiplier used by
//! [`crate::blip::RegularisationKernel`].
//!
//! ```text
//! FP int |u|^{-3/2} phi(x - u) du
//!   = int_0^inf u^{-3/2} [phi(x - u) + phi(x + u) - 2 phi(x)] du
//! ```
//!
//! The integrand behaves like `u^{1/2}` at the origin. Substituting
//! `u = v^2` gives `2 v^{-2} g(v^2)` which is smooth, and the tail beyond
//! the cutoff `U` (where `phi(x +- u)` has vanished) contributes
//! `-4 phi(x) / sqrt(U)` exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 0 { 1.0 } else { p1 };
            dp = n * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule on `[0, v_max]`.
#[derive(Debug, Clone)]
pub struct FinitePartQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    cutoff: f64,
}

impl FinitePartQuadrature {
    /// `cutoff` is the largest `|u|` sampled; `panels` panels of `order`
    /// points each are spread over `v = sqrt(u)`.
    pub fn new(cutoff: f64, panels: usize, order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let v_max = cutoff.sqrt();
        let h = v_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Self {
            nodes,
            weights,
            cutoff,
        }
    }

    /// `FP int |u|^{-3/2} phi(x - u) du` for a profile that vanishes beyond
    /// `|x - u| > cutoff - |x|`.
    pub fn apply(&self, phi: &impl Fn(f64) -> Complex64, x: f64) -> Complex64 {
        let centre = phi(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&v, &w) in self.nodes.iter().zip(&self.weights) {
            let u = v * v;
            let g = phi(x - u) + phi(x + u) - 2.0 * centre;
            acc += g * (2.0 * w / u);
        }
        acc - centre * (4.0 / self.cutoff.sqrt())
    }

    /// Finite-part transform `FP int |u|^{-3/2} exp(-i k u) du` by
    /// quadrature over `[0, cutoff]` plus the exact constant tail.
    pub fn transform_coefficient(&self, k: f64) -> Complex64 {
        // FP int |u|^{-3/2} (e^{-iku} - 1) du is what survives; the constant
        // part has zero finite part on the whole line.
        let mut acc = Complex64::new(0.0, 0.0);
        for (&v, &w) in self.nodes.iter().zip(&self.weights) {
            let u = v * v;
            acc += Complex64::new(2.0 * ((k * u).cos() - 1.0), 0.0) * (2.0 * w / u);
        }
        // Oscillating tail beyond the cutoff integrates to O(U^{-3/2} / k)
        // and is dropped; the constant tail is exact.
        acc - Complex64::new(4.0 / self.cutoff.sqrt(), 0.0)
    }
}

/// Closed-form finite-part transform of `|u|^{-3/2}`:
/// `2 Gamma(-1/2) sin(3 pi / 4) |k|^{1/2} = -2 sqrt(2 pi) |k|^{1/2}`.
pub fn closed_form_coefficient(k: f64) -> f64 {
    -2.0 * (2.0 * PI).sqrt() * k.abs().sqrt()
}
