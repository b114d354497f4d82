//! Real-valued special functions needed by the fading model: the gamma family,
//! modified Bessel K of real order, and a Mellin–Barnes Meijer-G engine
//! restricted to the shapes used for the generalized-K distribution.

mod bessel;
mod gamma;
mod meijer;

pub use bessel::{bessel_k, ln_bessel_k};
pub use gamma::{
    digamma, gamma, ln_gamma_abs_sign, ln_gamma_complex, log_gamma, lower_incomplete_gamma,
    regularized_lower_gamma, regularized_upper_gamma, EULER_GAMMA,
};
pub use meijer::{
    meijer_g, meijer_g_contour_scaled, meijer_g_scaled, meijer_g_series_scaled, Backend,
    EvalDiagnostics, MeijerSpec, COLLISION_TOL, CONTOUR_PANEL_BUDGET, LARGE_SHAPE_LIMIT,
    REL_TARGET, REL_TARGET_COLLISION, SERIES_TERM_BUDGET,
};
