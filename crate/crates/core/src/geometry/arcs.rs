//! Maxima of `prod_k |z - z_k|^{r_k}` over the arcs between consecutive points.
//!
//! On an open arc `(a, b)` containing none of the points,
//! `g(theta) = sum_k r_k log(2 |sin((theta - theta_k)/2)|)` is a positive
//! combination of functions concave on that arc, hence strictly concave, with
//! `g' -> +inf` at `a` and `g' -> -inf` at `b`. Its unique maximizer is the
//! root of `g'`, found by Newton steps safeguarded by bisection.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::config::{reduce_angle, CircleConfiguration};
use super::hedgehog::{Hedgehog, Spine};

/// Angular resolution of the maximizer.
pub const ARGMAX_TOLERANCE: f64 = 1e-14;
const MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcMax {
    pub arc_start_angle: f64,
    pub arc_end_angle: f64,
    pub argmax_angle: f64,
    /// `max prod_k |z - z_k|^{r_k}` over the arc.
    pub max_value: f64,
    pub log_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcMaxima {
    pub per_arc: Vec<ArcMax>,
}

impl ArcMaxima {
    pub fn log_objective(&self) -> f64 {
        self.per_arc.iter().map(|a| a.log_max.max(0.0)).sum()
    }
}

/// `g(theta)` for the weighted point set.
pub fn log_potential(theta: f64, angles: &[f64], weights: &[f64]) -> f64 {
    angles
        .iter()
        .zip(weights)
        .map(|(&a, &w)| w * (2.0 * ((theta - a) / 2.0).sin().abs()).ln())
        .sum()
}

/// `(g'(theta), g''(theta))`.
fn potential_slope(theta: f64, angles: &[f64], weights: &[f64]) -> (f64, f64) {
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (&a, &w) in angles.iter().zip(weights) {
        let (s, c) = ((theta - a) / 2.0).sin_cos();
        d1 += w * 0.5 * c / s;
        d2 -= w * 0.25 / (s * s);
    }
    (d1, d2)
}

/// Maximizer and maximum of `g` on the arc `(lo, hi)`, `lo < hi` as real
/// numbers (the arc may extend past `2pi`). Zero-length arcs have maximum
/// `-inf`.
pub fn arc_log_max(lo: f64, hi: f64, angles: &[f64], weights: &[f64]) -> (f64, f64) {
    if hi <= lo {
        return (lo, f64::NEG_INFINITY);
    }
    let (mut left, mut right) = (lo, hi);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_STEPS {
        let (d1, d2) = potential_slope(x, angles, weights);
        if d1 > 0.0 {
            left = x;
        } else if d1 < 0.0 {
            right = x;
        } else {
            break;
        }
        let newton = x - d1 / d2;
        let next = if newton > left && newton < right {
            newton
        } else {
            0.5 * (left + right)
        };
        let step = (next - x).abs();
        x = next;
        if step <= ARGMAX_TOLERANCE * 0.5 || right - left <= ARGMAX_TOLERANCE {
            break;
        }
    }
    (x, log_potential(x, angles, weights))
}

/// Raw arc bounds: arc `j` runs from point `j-1` to point `j`, and arc 0 from
/// the last point to the first point plus `2pi`. Repeated angles give
/// zero-length arcs.
fn arc_bounds(angles: &[f64], j: usize) -> (f64, f64) {
    let n = angles.len();
    if j == 0 {
        (angles[n - 1], angles[0] + TAU)
    } else {
        (angles[j - 1], angles[j])
    }
}

/// Per-arc maxima of an arbitrary sorted point list; repeated points are
/// allowed and bound arcs of length zero.
pub fn arc_maxima_raw(angles: &[f64], weights: &[f64]) -> Vec<ArcMax> {
    (0..angles.len())
        .map(|j| {
            let (lo, hi) = arc_bounds(angles, j);
            let (arg, log_max) = arc_log_max(lo, hi, angles, weights);
            ArcMax {
                arc_start_angle: angles[(j + angles.len() - 1) % angles.len()],
                arc_end_angle: angles[j],
                argmax_angle: reduce_angle(arg),
                max_value: log_max.exp(),
                log_max,
            }
        })
        .collect()
}

pub fn arc_maxima(c: &CircleConfiguration) -> ArcMaxima {
    ArcMaxima {
        per_arc: arc_maxima_raw(c.angles(), c.weights()),
    }
}

/// `prod_j max{1, arc max_j}`.
pub fn objective(c: &CircleConfiguration) -> f64 {
    log_objective(c).exp()
}

pub fn log_objective(c: &CircleConfiguration) -> f64 {
    log_objective_raw(c.angles(), c.weights())
}

/// Log objective of a sorted, possibly repeating point list.
pub fn log_objective_raw(angles: &[f64], weights: &[f64]) -> f64 {
    (0..angles.len())
        .map(|j| {
            let (lo, hi) = arc_bounds(angles, j);
            arc_log_max(lo, hi, angles, weights).1.max(0.0)
        })
        .sum()
}

/// Spine moduli `|beta_j| = (arc max_j)^2` of the capacity-1 hedgehog mapped
/// from the configuration. Spine arguments are not determined.
pub fn spine_moduli(c: &CircleConfiguration) -> Hedgehog {
    let spines = arc_maxima(c)
        .per_arc
        .iter()
        .map(|a| Spine {
            modulus: (2.0 * a.log_max).exp(),
            argument: None,
        })
        .collect();
    Hedgehog::from_spines_unchecked(spines)
}
