//! Weighted point configurations on the unit circle and the hedgehogs they
//! (and integer polynomials) give rise to.

pub mod arcs;
pub mod config;
pub mod hedgehog;
pub mod roots;

pub use arcs::{arc_maxima, log_objective, objective, spine_moduli, ArcMax, ArcMaxima};
pub use config::CircleConfiguration;
pub use hedgehog::{hedgehog_from_polynomial, Hedgehog, Spine};
pub use roots::poly_roots;
