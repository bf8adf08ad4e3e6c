//! All complex roots of an integer polynomial by Aberth-Ehrlich iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::algebra::IntPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_TARGET_RESIDUAL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 2000;

/// `(p(z), p'(z))` by Horner's rule; `coeffs` ascending.
fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn residual_ok(coeffs: &[f64], z: Complex64, target: f64) -> bool {
    let norm: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let d = coeffs.len() as i32 - 1;
    let (p, _) = eval_with_derivative(coeffs, z);
    p.norm() <= target * norm * z.norm().max(1.0).powi(d)
}

/// The `deg(p)` complex roots of `p`, each with
/// `|p(r)| <= target_residual * ||p||_1 * max(1, |r|)^deg`.
///
/// Repeated roots slow the iteration down and may exhaust the iteration cap.
pub fn poly_roots(p: &IntPolynomial, target_residual: f64) -> Result<Vec<Complex64>> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegreeTooSmall(1)),
    };
    let raw = p.to_f64_coeffs();
    let lead = raw[d];
    let coeffs: Vec<f64> = raw.iter().map(|c| c / lead).collect();

    // start on a circle of radius |a_0|^(1/d) (the geometric mean of the root
    // moduli), rotated off the real axis
    let radius = coeffs[0].abs().powf(1.0 / d as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_rel_step: f64 = 0.0;
        for k in 0..d {
            let (pk, dpk) = eval_with_derivative(&coeffs, z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / dpk;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_rel_step = max_rel_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_rel_step <= 4.0 * f64::EPSILON
            && z.iter().all(|&r| residual_ok(&coeffs, r, target_residual))
        {
            return Ok(z);
        }
    }
    if z.iter().all(|&r| residual_ok(&coeffs, r, target_residual)) {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Largest relative coefficient error of `lead * prod (x - r_i)` against `p`,
/// measured against the largest coefficient of `p`.
pub fn reconstruction_error(p: &IntPolynomial, roots: &[Complex64]) -> f64 {
    let raw = p.to_f64_coeffs();
    let lead = *raw.last().expect("nonzero polynomial");
    let mut prod = vec![Complex64::new(lead, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
        for (i, &c) in prod.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        prod = next;
    }
    let scale = raw.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    raw.iter()
        .zip(&prod)
        .map(|(&c, q)| (Complex64::new(c, 0.0) - q).norm() / scale)
        .fold(0.0, f64::max)
}
