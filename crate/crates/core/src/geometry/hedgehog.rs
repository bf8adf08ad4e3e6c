use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::reduce_angle;
use super::roots::{poly_roots, DEFAULT_TARGET_RESIDUAL};
use crate::algebra::IntPolynomial;
use crate::error::{Error, Result};
use num_traits::Zero;

/// Spines whose arguments differ by less than this are collinear and merged.
pub const SPINE_MERGE_TOLERANCE: f64 = 1e-9;

/// Segment `[0, beta]` of a hedgehog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spine {
    pub modulus: f64,
    pub argument: Option<f64>,
}

/// Union of segments from the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hedgehog {
    spines: Vec<Spine>,
}

impl Hedgehog {
    /// Validates moduli and merges collinear spines when arguments are known.
    pub fn new(spines: Vec<Spine>) -> Result<Self> {
        if spines.is_empty() {
            return Err(Error::Assertion(
                "a hedgehog needs at least one spine".into(),
            ));
        }
        if let Some(s) = spines
            .iter()
            .find(|s| !(s.modulus.is_finite() && s.modulus > 0.0))
        {
            return Err(Error::Assertion(format!(
                "spine modulus must be positive, got {}",
                s.modulus
            )));
        }
        if spines.iter().all(|s| s.argument.is_some()) {
            Ok(Self::merge_collinear(spines))
        } else {
            Ok(Hedgehog { spines })
        }
    }

    pub(crate) fn from_spines_unchecked(spines: Vec<Spine>) -> Self {
        Hedgehog { spines }
    }

    /// Spines from the origin to each point; collinear spines keep the longest.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| Spine {
                    modulus: p.norm(),
                    argument: Some(reduce_angle(p.arg())),
                })
                .collect(),
        )
    }

    /// Capacity-1 rotationally symmetric hedgehog on `n` spines of length `4^(1/n)`.
    pub fn symmetric(n: usize) -> Self {
        let modulus = 4f64.powf(1.0 / n as f64);
        Hedgehog {
            spines: (0..n)
                .map(|k| Spine {
                    modulus,
                    argument: Some(TAU * k as f64 / n as f64),
                })
                .collect(),
        }
    }

    fn merge_collinear(mut spines: Vec<Spine>) -> Self {
        spines.sort_by(|a, b| a.argument.unwrap().total_cmp(&b.argument.unwrap()));
        let mut merged: Vec<Spine> = Vec::with_capacity(spines.len());
        for s in spines {
            match merged.last_mut() {
                Some(last)
                    if s.argument.unwrap() - last.argument.unwrap() <= SPINE_MERGE_TOLERANCE =>
                {
                    if s.modulus > last.modulus {
                        last.modulus = s.modulus;
                    }
                }
                _ => merged.push(s),
            }
        }
        if merged.len() > 1 {
            let first = merged[0];
            let last = merged[merged.len() - 1];
            if first.argument.unwrap() + TAU - last.argument.unwrap() <= SPINE_MERGE_TOLERANCE {
                merged.pop();
                merged[0].modulus = first.modulus.max(last.modulus);
            }
        }
        Hedgehog { spines: merged }
    }

    pub fn spines(&self) -> &[Spine] {
        &self.spines
    }

    pub fn len(&self) -> usize {
        self.spines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spines.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.spines.iter().map(|s| s.modulus).fold(0.0, f64::max)
    }

    /// `sum_j log max{1, |beta_j|}`.
    pub fn log_measure(&self) -> f64 {
        self.spines.iter().map(|s| s.modulus.ln().max(0.0)).sum()
    }

    /// `prod_j max{1, |beta_j|}`.
    pub fn measure(&self) -> f64 {
        self.log_measure().exp()
    }

    /// Dubinin's upper bound `4^(-1/n) max_j |beta_j|` on the capacity.
    pub fn dubinin_bound(&self) -> f64 {
        4f64.powf(-1.0 / self.len() as f64) * self.max_modulus()
    }
}

/// Hedgehog with spines at `alpha^2` and `alpha^4` for every root `alpha` of `p`.
pub fn hedgehog_from_polynomial(p: &IntPolynomial) -> Result<Hedgehog> {
    if !p.is_monic() {
        return Err(Error::NonMonic);
    }
    if p.degree() == Some(0) {
        return Err(Error::DegreeTooSmall(1));
    }
    if p.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let roots = poly_roots(p, DEFAULT_TARGET_RESIDUAL)?;
    let points: Vec<Complex64> = roots
        .iter()
        .flat_map(|&a| {
            let a2 = a * a;
            [a2, a2 * a2]
        })
        .map(snap_to_real_axis)
        .collect();
    Hedgehog::from_points(&points)
}

/// Root-finder noise leaves tiny imaginary parts on real points; negative
/// reals would otherwise land on either side of the cut at `pi`.
fn snap_to_real_axis(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-14 * z.norm() {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}
