//! High main-link SNR behaviour (γ̄_d → ∞ with γ̄_e fixed).
//!
//! Both the CDF and P'' are replaced by the leading term of the Meijer-G
//! residue series. With distinct shapes the leading pole is simple and the
//! SOP decays as γ̄_d^{-v}, v = min(k_d, m_d). With k_d = m_d the poles merge
//! into a double pole and a ln γ̄_d correction appears, so the log-log slope
//! only creeps towards -m_d.

use crate::error::{Error, Result};
use crate::gk_model::gk_variance;
use crate::specfun::{digamma, log_gamma, COLLISION_TOL};
use crate::db_to_linear;

use super::{sop_approx, sop_exact, SecrecyScenario, SopEstimate, SopMethod};

/// ASOP for k_d ≠ m_d:
/// γ̄_d^{-v} Γ(|k_d - m_d|)(k_d m_d y)^v / (Γ(k_d)Γ(m_d)) · [1/v + σ_e²(v - 1)λ²/(2y²)].
pub fn asop_distinct(s: &SecrecyScenario) -> Result<SopEstimate> {
    let (k, m) = (s.main.k, s.main.m);
    let diff = (k - m).abs();
    if diff < COLLISION_TOL {
        return Err(Error::Regime(format!(
            "asop_distinct needs k_d != m_d (got k_d = {k}, m_d = {m}); use asop_equal"
        )));
    }
    let v = k.min(m);
    let lambda = s.lambda();
    let y = s.threshold(s.eve.mean_snr);
    let variance = gk_variance(&s.eve);
    let ln_lead = log_gamma(diff)? + v * (k * m * y / s.main.mean_snr).ln() - log_gamma(k)? - log_gamma(m)?;
    let bracket = 1.0 / v + variance * (v - 1.0) * lambda * lambda / (2.0 * y * y);
    let raw = ln_lead.exp() * bracket;
    Ok(SopEstimate::new(raw, SopMethod::AsymptoticDistinct, variance, s.eve.mean_snr))
}

/// Leading behaviour of the CDF for k = m as γ/γ̄ → 0:
/// [ψ(m+1) + 2ψ(1) - ψ(m) - ln(m²γ/γ̄)] m^{2m-1} γ^m / (Γ(m)² γ̄^m).
pub fn asymptotic_cdf_equal(m: f64, mean_snr: f64, gamma: f64) -> Result<f64> {
    if !(m > 0.0) || !(mean_snr > 0.0) || !(gamma > 0.0) {
        return Err(Error::domain("asymptotic_cdf_equal", m.min(mean_snr).min(gamma), "positive arguments"));
    }
    let ratio = gamma / mean_snr;
    let bracket = digamma(m + 1.0)? + 2.0 * digamma(1.0)? - digamma(m)? - (m * m * ratio).ln();
    let ln_scale = (2.0 * m - 1.0) * m.ln() + m * ratio.ln() - 2.0 * log_gamma(m)?;
    Ok(bracket * ln_scale.exp())
}

/// ASOP for k_d = m_d > 1 (m_d = 1 is routed to [`asop_k1m1`]).
pub fn asop_equal(s: &SecrecyScenario) -> Result<SopEstimate> {
    let (k, m) = (s.main.k, s.main.m);
    if (k - m).abs() >= COLLISION_TOL {
        return Err(Error::Regime(format!(
            "asop_equal needs k_d = m_d (got k_d = {k}, m_d = {m}); use asop_distinct"
        )));
    }
    if (m - 1.0).abs() < COLLISION_TOL {
        return asop_k1m1(s);
    }
    if m < 1.0 {
        return Err(Error::Regime(format!(
            "asop_equal is not available for k_d = m_d < 1 (got {m})"
        )));
    }
    let lambda = s.lambda();
    let gd = s.main.mean_snr;
    let y = s.threshold(s.eve.mean_snr);
    let variance = gk_variance(&s.eve);
    let log_arg = (m * m * y / gd).ln();
    let psi1 = digamma(1.0)?;
    let psi_m = digamma(m)?;

    let cdf_term = asymptotic_cdf_equal(m, gd, y)?;
    // P'' ≈ λ² m^{2m} y^{m-2} [ψ(m-1) + 2ψ(1) - ψ(m) - ln(m²y/γ̄_d)] / (Γ(m)Γ(m-1) γ̄_d^m)
    let bracket2 = digamma(m - 1.0)? + 2.0 * psi1 - psi_m - log_arg;
    let ln_scale2 = 2.0 * m * m.ln() + (m - 2.0) * y.ln() - m * gd.ln() - log_gamma(m)? - log_gamma(m - 1.0)?;
    let p2 = lambda * lambda * bracket2 * ln_scale2.exp();

    let raw = cdf_term + 0.5 * variance * p2;
    Ok(SopEstimate::new(raw, SopMethod::AsymptoticEqual, variance, s.eve.mean_snr))
}

/// ASOP for k_d = m_d = 1 (K-distributed main link):
/// γ̄_d^{-1} [(ψ(1) + ψ(2) - ln(y/γ̄_d)) y - σ_e²λ²/(2y)].
pub fn asop_k1m1(s: &SecrecyScenario) -> Result<SopEstimate> {
    let (k, m) = (s.main.k, s.main.m);
    if (k - 1.0).abs() >= COLLISION_TOL || (m - 1.0).abs() >= COLLISION_TOL {
        return Err(Error::Regime(format!(
            "asop_k1m1 needs k_d = m_d = 1 (got k_d = {k}, m_d = {m})"
        )));
    }
    let lambda = s.lambda();
    let gd = s.main.mean_snr;
    let y = s.threshold(s.eve.mean_snr);
    let variance = gk_variance(&s.eve);
    // ψ(1) + ψ(2) = 1 - 2γ_E
    let psi_sum = digamma(1.0)? + digamma(2.0)?;
    let raw = ((psi_sum - (y / gd).ln()) * y - variance * lambda * lambda / (2.0 * y)) / gd;
    Ok(SopEstimate::new(raw, SopMethod::AsymptoticK1M1, variance, s.eve.mean_snr))
}

/// The asymptote that applies to the main-link shapes.
pub fn asop(s: &SecrecyScenario) -> Result<SopEstimate> {
    if s.main_shapes_equal() {
        asop_equal(s)
    } else {
        asop_distinct(s)
    }
}

/// Diversity order versus the slope measured between two main-link SNRs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityReport {
    /// min(k_d, m_d).
    pub analytic_order: f64,
    /// -Δlog₁₀ SOP / Δ(γ̄_d in dB / 10).
    pub empirical_slope: f64,
    pub snr_window_db: (f64, f64),
    /// True when k_d = m_d, where the asymptote carries a ln γ̄_d factor.
    pub log_correction_present: bool,
    /// Method used for the two SOP evaluations.
    pub method: SopMethod,
}

/// Two-point secant -(log₁₀ f(hi) - log₁₀ f(lo)) / ((hi - lo)/10) on a dB axis.
pub fn empirical_slope(sop_lo: f64, sop_hi: f64, snr_lo_db: f64, snr_hi_db: f64) -> f64 {
    -(sop_hi.log10() - sop_lo.log10()) / ((snr_hi_db - snr_lo_db) / 10.0)
}

/// Measures the SOP decay of `s` between two main-link SNRs (dB, at least 10 dB
/// apart) with the exact quadrature, falling back to the approximation if the
/// quadrature does not converge.
pub fn diversity_report(s: &SecrecyScenario, snr_lo_db: f64, snr_hi_db: f64) -> Result<DiversityReport> {
    if !(snr_hi_db - snr_lo_db >= 10.0) {
        return Err(Error::invalid("snr_hi_db", snr_hi_db, "must exceed snr_lo_db by at least 10 dB"));
    }
    let eval = |db: f64| -> Result<SopEstimate> {
        let at = s.with_main_snr(db_to_linear(db));
        match sop_exact(&at) {
            Err(e) if e.is_numerical() => sop_approx(&at),
            other => other,
        }
    };
    let lo = eval(snr_lo_db)?;
    let hi = eval(snr_hi_db)?;
    Ok(DiversityReport {
        analytic_order: s.main.k.min(s.main.m),
        empirical_slope: empirical_slope(lo.raw_value, hi.raw_value, snr_lo_db, snr_hi_db),
        snr_window_db: (snr_lo_db, snr_hi_db),
        log_correction_present: s.main_shapes_equal(),
        method: if lo.method == hi.method { lo.method } else { SopMethod::Approx },
    })
}
