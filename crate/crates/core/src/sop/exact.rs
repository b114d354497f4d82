//! Direct numerical evaluation of P_sop = ∫₀^∞ F_{γ_d}(λ - 1 + λx) f_{γ_e}(x) dx.
//!
//! The half line is mapped onto (0, 1) with x = γ̄_e u²/(1 - u²). The square
//! absorbs the x^{min(k,m)-1} behaviour of the density at the origin (the
//! transformed integrand is bounded for every shape ≥ 1/2), and the γ̄_e scale
//! keeps the bulk of the mass away from the endpoints.

use crate::error::{Error, Result};
use crate::gk_model::{gk_cdf, gk_pdf, gk_variance};
use crate::quad::{integrate, QuadOptions, QuadResult};

use super::{SecrecyScenario, SopEstimate, SopMethod};

/// Relative accuracy requested from the quadrature.
pub const EXACT_REL_TOL: f64 = 1e-8;
/// Absolute floor, small enough that deep outages (1e-12) keep several digits.
pub const EXACT_ABS_TOL: f64 = 1e-18;
/// Integrand evaluation budget.
pub const EXACT_EVAL_BUDGET: usize = 1_000_000;

/// Exact SOP with the quadrature diagnostics (value, error estimate, evaluations).
pub fn sop_exact_detailed(s: &SecrecyScenario) -> Result<(SopEstimate, QuadResult)> {
    let scale = s.eve.mean_snr;
    let mut failure: Option<Error> = None;
    let integrand = |u: f64| -> f64 {
        if failure.is_some() || u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let one_minus = (1.0 - u) * (1.0 + u);
        let x = scale * u * u / one_minus;
        let jacobian = 2.0 * scale * u / (one_minus * one_minus);
        if !x.is_finite() || x <= 0.0 {
            return 0.0;
        }
        let weight = match gk_pdf(&s.eve, x) {
            Ok(f) => f * jacobian,
            Err(e) => {
                failure = Some(e);
                return 0.0;
            }
        };
        if weight == 0.0 || !weight.is_finite() {
            return 0.0;
        }
        match gk_cdf(&s.main, s.threshold(x)) {
            Ok(c) => c * weight,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let opts = QuadOptions {
        abs_tol: EXACT_ABS_TOL,
        rel_tol: EXACT_REL_TOL,
        max_evals: EXACT_EVAL_BUDGET,
    };
    let res = integrate(integrand, 0.0, 1.0, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res?;
    let estimate = SopEstimate::new(res.value, SopMethod::ExactQuadrature, gk_variance(&s.eve), s.eve.mean_snr);
    Ok((estimate, res))
}

/// Exact SOP by adaptive quadrature.
pub fn sop_exact(s: &SecrecyScenario) -> Result<SopEstimate> {
    sop_exact_detailed(s).map(|(e, _)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gk_model::GkParams;

    fn scenario(kd: f64, md: f64, ke: f64, me: f64, d: f64, e: f64, rs: f64) -> SecrecyScenario {
        SecrecyScenario::new(GkParams::new(kd, md, d).unwrap(), GkParams::new(ke, me, e).unwrap(), rs).unwrap()
    }

    #[test]
    fn symmetric_links_at_vanishing_rate() {
        let s = scenario(2.0, 2.5, 2.0, 2.5, 10.0, 10.0, 1e-9);
        let v = sop_exact(&s).unwrap().value;
        assert!((v - 0.5).abs() < 1e-3, "{v}");
    }

    #[test]
    fn rayleigh_limit_matches_exponential_laws() {
        // Exponential laws: 1 - γ̄_d/(γ̄_d + λγ̄_e) e^{-(λ-1)/γ̄_d}
        let s = scenario(500.0, 1.0, 500.0, 1.0, 10.0, 1.0, 1.0);
        let analytic = 1.0 - (10.0 / 12.0) * (-0.1f64).exp();
        assert!((analytic - 0.245_968_8).abs() < 1e-7);
        let v = sop_exact(&s).unwrap().value;
        assert!((v - analytic).abs() < 2e-3, "{v} vs {analytic}");
    }

    #[test]
    fn exponential_laws_through_k_distribution_shapes() {
        // m = 1 with large k is already nearly exponential; check against the
        // analytic value over a small grid of rates.
        for &rs in &[0.5, 1.0, 2.0] {
            let lambda: f64 = f64::exp2(rs);
            let (d, e) = (20.0, 2.0);
            let s = scenario(500.0, 1.0, 500.0, 1.0, d, e, rs);
            let analytic = 1.0 - d / (d + lambda * e) * (-(lambda - 1.0) / d).exp();
            let v = sop_exact(&s).unwrap().value;
            assert!((v - analytic).abs() < 2e-3, "rs = {rs}: {v} vs {analytic}");
        }
    }

    #[test]
    fn monotone_in_main_snr_eve_snr_and_rate() {
        let base = scenario(1.5, 2.5, 2.0, 1.0, 10.0, 1.0, 1.0);
        let mut prev = 1.0;
        for &d in &[1.0, 3.0, 10.0, 30.0, 100.0] {
            let v = sop_exact(&base.with_main_snr(d)).unwrap().value;
            assert!(v <= prev);
            prev = v;
        }
        let mut prev = 0.0;
        for &e in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = sop_exact(&base.with_eve_snr(e)).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 0.0;
        for &rs in &[0.25, 0.5, 1.0, 2.0] {
            let v = sop_exact(&SecrecyScenario { rs, ..base }).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn small_shapes_and_deep_outage() {
        let s = scenario(0.5, 1.5, 0.5, 0.5, 100.0, 0.3, 1.0);
        let (e, q) = sop_exact_detailed(&s).unwrap();
        assert!(e.value > 0.0 && e.value < 1.0);
        assert!(q.abs_error <= 1e-6);
        let deep = scenario(2.0, 2.0, 2.0, 2.0, 1e7, 3.0, 1.0);
        let (e, q) = sop_exact_detailed(&deep).unwrap();
        assert!(e.value > 0.0 && e.value < 1e-9, "{}", e.value);
        assert!(q.abs_error < 1e-3 * e.value);
    }
}
