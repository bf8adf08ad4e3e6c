use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this (in radians, around the circle) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the weight sum from 1 before rescaling.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Weighted points `e^{i angle}` on the unit circle.
///
/// Angles lie in `[0, 2pi)`, strictly increasing; weights are positive and sum
/// to 1. Point `j` and point `j-1` (cyclically) bound arc `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleConfiguration {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

impl CircleConfiguration {
    /// Canonical form of a weighted point set: angles reduced mod `2pi` and
    /// sorted, points within [`MERGE_TOLERANCE`] merged with their weights
    /// added, and weights rescaled to sum to exactly 1.
    pub fn normalize(angles: &[f64], weights: &[f64]) -> Result<Self> {
        if angles.len() != weights.len() {
            return Err(Error::LengthMismatch {
                angles: angles.len(),
                weights: weights.len(),
            });
        }
        if angles.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::NonPositiveWeight(w));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightSumError(total));
        }

        let mut points: Vec<(f64, f64)> = angles
            .iter()
            .zip(weights)
            .map(|(&a, &w)| (reduce_angle(a), w))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for (a, w) in points {
            match merged.last_mut() {
                Some(last) if a - last.0 <= MERGE_TOLERANCE => last.1 += w,
                _ => merged.push((a, w)),
            }
        }
        // wraparound: a point just below 2pi coincides with one at 0
        if merged.len() > 1 {
            let first = merged[0].0;
            let last = merged[merged.len() - 1].0;
            if first + TAU - last <= MERGE_TOLERANCE {
                let (_, w) = merged.pop().expect("len > 1");
                merged[0].1 += w;
            }
        }

        let (angles, mut weights): (Vec<f64>, Vec<f64>) = merged.into_iter().unzip();
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        Ok(CircleConfiguration { angles, weights })
    }

    /// Equal weights `1/len` on the given angles.
    pub fn equal_weights(angles: &[f64]) -> Result<Self> {
        let w = 1.0 / angles.len().max(1) as f64;
        Self::normalize(angles, &vec![w; angles.len()])
    }

    /// The `n`-th roots of unity with equal weights.
    pub fn roots_of_unity(n: usize) -> Self {
        let angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        Self::equal_weights(&angles).expect("distinct angles with weights summing to 1")
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_equal_weight(&self) -> bool {
        let w = 1.0 / self.len() as f64;
        self.weights.iter().all(|x| (x - w).abs() <= 1e-12)
    }

    /// Every point rotated by `delta` radians.
    pub fn rotated(&self, delta: f64) -> Self {
        let angles: Vec<f64> = self.angles.iter().map(|a| a + delta).collect();
        Self::normalize(&angles, &self.weights).expect("rotation preserves validity")
    }

    /// Complex conjugate configuration (`angle -> -angle`).
    pub fn conjugated(&self) -> Self {
        let angles: Vec<f64> = self.angles.iter().map(|a| -a).collect();
        Self::normalize(&angles, &self.weights).expect("conjugation preserves validity")
    }

    /// Replaces each weight `r_j` by `a_j / denominator` with `a_j` a positive
    /// integer, when `r_j * denominator` is within `1e-9` of one.
    ///
    /// The result describes the multiset in which point `j` is repeated `a_j`
    /// times, each copy with weight `1/denominator`; merged points carry that
    /// multiplicity in their weight.
    pub fn rationalize_weights(&self, denominator: u64) -> Result<Self> {
        let m = denominator as f64;
        let mut weights = Vec::with_capacity(self.len());
        for &w in &self.weights {
            let scaled = w * m;
            let a = scaled.round();
            if a < 1.0 || (scaled - a).abs() > 1e-9 {
                return Err(Error::NonRationalWeights {
                    weight: w,
                    denominator,
                });
            }
            weights.push(a / m);
        }
        Self::normalize(&self.angles, &weights)
    }

    /// Multiplicities `a_j = r_j * denominator` after [`Self::rationalize_weights`].
    pub fn multiplicities(&self, denominator: u64) -> Result<Vec<u64>> {
        let r = self.rationalize_weights(denominator)?;
        Ok(r.weights
            .iter()
            .map(|w| (w * denominator as f64).round() as u64)
            .collect())
    }

    /// Parses `angle weight` lines (radians); `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut angles = Vec::new();
        let mut weights = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", lineno + 1)))
            };
            match fields.as_slice() {
                [a, w] => {
                    angles.push(parse(a)?);
                    weights.push(parse(w)?);
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `angle weight`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::normalize(&angles, &weights)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# angle weight\n");
        for (a, w) in self.angles.iter().zip(&self.weights) {
            let _ = writeln!(out, "{a:.17e} {w:.17e}");
        }
        out
    }
}

/// Angle reduced to `[0, 2pi)`.
pub fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles measured around the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = reduce_angle(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wraparound_merge() {
        let c = CircleConfiguration::normalize(&[0.0, TAU], &[0.5, 0.5]).unwrap();
        assert_eq!(c.angles(), &[0.0]);
        assert_eq!(c.weights(), &[1.0]);

        let c = CircleConfiguration::normalize(&[1e-13, TAU - 1e-13], &[0.5, 0.5]).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn sorts_and_reduces() {
        let c = CircleConfiguration::normalize(&[PI / 3.0, -PI / 3.0], &[0.5, 0.5]).unwrap();
        assert!((c.angles()[0] - PI / 3.0).abs() < 1e-15);
        assert!((c.angles()[1] - 5.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_add_weights() {
        let c = CircleConfiguration::normalize(&[1.0, 2.0, 1.0], &[0.25, 0.5, 0.25]).unwrap();
        assert_eq!(c.angles(), &[1.0, 2.0]);
        assert_eq!(c.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn weight_errors() {
        assert_eq!(
            CircleConfiguration::normalize(&[0.0, 1.0], &[0.3, 0.3]),
            Err(Error::WeightSumError(0.6))
        );
        assert_eq!(
            CircleConfiguration::normalize(&[], &[]),
            Err(Error::EmptyConfiguration)
        );
        assert!(matches!(
            CircleConfiguration::normalize(&[0.0, 1.0], &[1.5, -0.5]),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            CircleConfiguration::normalize(&[0.0], &[0.5, 0.5]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn near_unit_weight_sum_is_rescaled() {
        let c = CircleConfiguration::normalize(&[0.0, 1.0], &[0.5 + 4e-10, 0.5]).unwrap();
        let sum: f64 = c.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rationalize() {
        let c = CircleConfiguration::normalize(&[0.0, 2.0], &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let r = c.rationalize_weights(3).unwrap();
        assert!((r.weights()[0] - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(c.multiplicities(3).unwrap(), vec![1, 2]);
        assert_eq!(c.multiplicities(6).unwrap(), vec![2, 4]);

        let eq = CircleConfiguration::roots_of_unity(5);
        assert_eq!(eq.rationalize_weights(5).unwrap(), eq);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = CircleConfiguration::normalize(&[0.0, 1.0], &[s, 1.0 - s]).unwrap();
        assert!(matches!(
            c.rationalize_weights(10),
            Err(Error::NonRationalWeights { .. })
        ));
    }

    #[test]
    fn text_format() {
        let text = "# two points\n0.5 0.25  # first\n\n  4.0 0.75\n";
        let c = CircleConfiguration::from_text(text).unwrap();
        assert_eq!(c.angles(), &[0.5, 4.0]);
        let again = CircleConfiguration::from_text(&c.to_text()).unwrap();
        assert_eq!(again, c);
        assert!(CircleConfiguration::from_text("1.0\n").is_err());
        assert!(CircleConfiguration::from_text("a b\n").is_err());
    }

    #[test]
    fn circular_distance_wraps() {
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert_eq!(reduce_angle(TAU), 0.0);
        assert!(reduce_angle(-1e-20) < TAU);
    }
}
