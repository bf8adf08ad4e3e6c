//! Extremal point configurations on the unit circle and the Mahler measure
//! of hedgehogs.
//!
//! * [`algebra`]: exact integer polynomials, truncated power series, Graeffe
//!   steps and fraction-free Hankel determinants.
//! * [`chebyshev`]: stable Chebyshev evaluation, the extremal constants
//!   `C_n* = T_n(2^(1/n))^(1/n)` and their `t`-scaled variants, the extremal
//!   configuration and the small-`nu` expansion of `C_n*`.
//! * [`geometry`]: circle configurations, arc maxima, spine moduli, hedgehogs
//!   built from integer polynomials, hedgehog measures and Dubinin's bound.
//! * [`optimize`]: multistart derivative-free minimization of the
//!   configuration objective.
//! * [`reproduce`]: the end-to-end numeric checks used by the CLI.

pub mod algebra;
pub mod chebyshev;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod reproduce;

pub use error::{Error, Result};

/// Formats `x` with at most `digits` significant digits, without trailing
/// zeros. Very large or very small magnitudes use exponent notation.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}
