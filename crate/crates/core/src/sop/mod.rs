//! Secrecy outage probability of the three-node wiretap channel.
//!
//! With λ = 2^{R_s}, an outage happens when (1 + γ_d) ≤ λ(1 + γ_e), so
//!
//! P_sop = E_{γ_e}{ F_{γ_d}(λ - 1 + λγ_e) } = E{ P(γ_e) }.
//!
//! [`sop_approx`] replaces the expectation with the second-order moment
//! expansion E{P(X)} ≈ P(μ) + σ² P''(μ)/2 taken at μ = γ̄_e, where P'' comes
//! from the Meijer-G derivative identity. [`sop_exact`] integrates the
//! expectation numerically; the `asymptotic` submodule holds the γ̄_d → ∞
//! forms.

mod asymptotic;
mod exact;

pub use asymptotic::{
    asop, asop_distinct, asop_equal, asop_k1m1, asymptotic_cdf_equal, diversity_report, empirical_slope,
    DiversityReport,
};
pub use exact::{sop_exact, sop_exact_detailed, EXACT_ABS_TOL, EXACT_EVAL_BUDGET, EXACT_REL_TOL};

use std::fmt;

use crate::error::{Error, Result};
use crate::gk_model::{gk_cdf, gk_variance, nakagami_cdf, GkParams};
use crate::specfun::{meijer_g_scaled, MeijerSpec, COLLISION_TOL};

/// Main link, eavesdropper link and target secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyScenario {
    pub main: GkParams,
    pub eve: GkParams,
    /// Target secrecy rate R_s in bits/s/Hz.
    pub rs: f64,
}

impl SecrecyScenario {
    pub fn new(main: GkParams, eve: GkParams, rs: f64) -> Result<Self> {
        if !(rs > 0.0) || !rs.is_finite() {
            return Err(Error::invalid("rs", rs, "must be > 0"));
        }
        Ok(SecrecyScenario { main, eve, rs })
    }

    /// λ = 2^{R_s}.
    pub fn lambda(&self) -> f64 {
        self.rs.exp2()
    }

    /// Main-link SNR threshold λ - 1 + λx for an eavesdropper SNR x.
    pub fn threshold(&self, x: f64) -> f64 {
        let lambda = self.lambda();
        (lambda - 1.0) + lambda * x
    }

    pub fn with_main_snr(self, mean_snr: f64) -> Self {
        SecrecyScenario {
            main: self.main.with_mean_snr(mean_snr),
            ..self
        }
    }

    pub fn with_eve_snr(self, mean_snr: f64) -> Self {
        SecrecyScenario {
            eve: self.eve.with_mean_snr(mean_snr),
            ..self
        }
    }

    /// True when the main link has k_d = m_d (within the pole-collision tolerance).
    pub fn main_shapes_equal(&self) -> bool {
        (self.main.k - self.main.m).abs() < COLLISION_TOL
    }
}

/// How an SOP value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SopMethod {
    Approx,
    ExactQuadrature,
    RayleighClosed,
    NakagamiClosed,
    AsymptoticDistinct,
    AsymptoticEqual,
    AsymptoticK1M1,
    MonteCarlo,
}

impl SopMethod {
    pub fn tag(self) -> &'static str {
        match self {
            SopMethod::Approx => "approx",
            SopMethod::ExactQuadrature => "exact-quadrature",
            SopMethod::RayleighClosed => "rayleigh-closed",
            SopMethod::NakagamiClosed => "nakagami-closed",
            SopMethod::AsymptoticDistinct => "asymptotic-distinct",
            SopMethod::AsymptoticEqual => "asymptotic-equal",
            SopMethod::AsymptoticK1M1 => "asymptotic-k1m1",
            SopMethod::MonteCarlo => "monte-carlo",
        }
    }

    /// Methods built on the second-order expansion, whose accuracy degrades
    /// when the eavesdropper SNR variance dominates.
    pub fn is_moment_expansion(self) -> bool {
        !matches!(self, SopMethod::ExactQuadrature | SopMethod::MonteCarlo)
    }
}

impl fmt::Display for SopMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An SOP value with its provenance and validity diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopEstimate {
    /// SOP clamped to [0, 1].
    pub value: f64,
    /// SOP before clamping.
    pub raw_value: f64,
    pub method: SopMethod,
    /// Variance of the eavesdropper SNR used by the expansion.
    pub sigma_e_sq: f64,
    pub validity_warning: bool,
}

impl SopEstimate {
    /// `eve_mean` is γ̄_e; the variance criterion σ_e²/γ̄_e² > 1 applies to
    /// moment-expansion methods only.
    pub fn new(raw_value: f64, method: SopMethod, sigma_e_sq: f64, eve_mean: f64) -> Self {
        let out_of_range = !(0.0..=1.0).contains(&raw_value);
        let variance_dominated = method.is_moment_expansion() && sigma_e_sq / (eve_mean * eve_mean) > 1.0;
        SopEstimate {
            value: if raw_value.is_nan() { raw_value } else { raw_value.clamp(0.0, 1.0) },
            raw_value,
            method,
            sigma_e_sq,
            validity_warning: out_of_range || variance_dominated,
        }
    }
}

/// E{P(X)} ≈ P(μ) + σ² P''(μ) / 2. `variance` must be non-negative.
pub fn holtzman_expectation(p_at_mu: f64, p2_at_mu: f64, variance: f64) -> f64 {
    debug_assert!(variance >= 0.0);
    p_at_mu + 0.5 * variance * p2_at_mu
}

/// P(x) = F_{γ_d}(λ - 1 + λx).
pub fn p_function(s: &SecrecyScenario, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("p_function", x, "x >= 0"));
    }
    gk_cdf(&s.main, s.threshold(x))
}

/// P''(x) = λ² G^{2,2}_{2,4}(k_d m_d y/γ̄_d | 0,1; k_d,m_d,0,2) / (Γ(k_d)Γ(m_d) y²), y = λ - 1 + λx.
pub fn p_second_derivative(s: &SecrecyScenario, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("p_second_derivative", x, "x >= 0"));
    }
    let y = s.threshold(x);
    if !(y > 0.0) {
        return Err(Error::domain("p_second_derivative", y, "lambda - 1 + lambda x > 0"));
    }
    let lambda = s.lambda();
    let main = &s.main;
    let g = match main.nakagami_reduction() {
        Some(shape) => {
            let z = shape * y / main.mean_snr;
            meijer_g_scaled(&MeijerSpec::nakagami_second_derivative(shape), z)?.0
        }
        None => {
            let z = main.k * main.m * y / main.mean_snr;
            meijer_g_scaled(&MeijerSpec::gk_cdf_second_derivative(main.k, main.m), z)?.0
        }
    };
    Ok(lambda * lambda * g / (y * y))
}

/// Second-order approximation of the SOP.
///
/// When both links are effectively Rayleigh (or Nakagami-m) the matching
/// closed form is used; otherwise see [`sop_approx_generic`].
pub fn sop_approx(s: &SecrecyScenario) -> Result<SopEstimate> {
    let (main, eve) = (&s.main, &s.eve);
    if main.is_effectively_rayleigh() && eve.is_effectively_rayleigh() {
        return sop_rayleigh(main.mean_snr, eve.mean_snr, s.rs);
    }
    if main.is_effectively_nakagami() && eve.is_effectively_nakagami() {
        return sop_nakagami(main.m, eve.m, main.mean_snr, eve.mean_snr, s.rs);
    }
    sop_approx_generic(s)
}

/// The expansion P(γ̄_e) + σ_e² P''(γ̄_e)/2 with per-link reductions only:
/// the exact generalized-K variance of the eavesdropper link is always used.
pub fn sop_approx_generic(s: &SecrecyScenario) -> Result<SopEstimate> {
    let mu = s.eve.mean_snr;
    let variance = gk_variance(&s.eve);
    let p = p_function(s, mu)?;
    let p2 = p_second_derivative(s, mu)?;
    Ok(SopEstimate::new(holtzman_expectation(p, p2, variance), SopMethod::Approx, variance, mu))
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be > 0"))
    }
}

/// Rayleigh closed form: 1 - [1 + (λγ̄_e/γ̄_d)²/2] exp(-(λ - 1 + λγ̄_e)/γ̄_d).
pub fn sop_rayleigh(gamma_d_bar: f64, gamma_e_bar: f64, rs: f64) -> Result<SopEstimate> {
    check_positive("gamma_d_bar", gamma_d_bar)?;
    check_positive("gamma_e_bar", gamma_e_bar)?;
    check_positive("rs", rs)?;
    let lambda = rs.exp2();
    let y = lambda - 1.0 + lambda * gamma_e_bar;
    let ratio = lambda * gamma_e_bar / gamma_d_bar;
    let raw = -(1.0 + 0.5 * ratio * ratio) * (-y / gamma_d_bar).exp() + 1.0;
    Ok(SopEstimate::new(raw, SopMethod::RayleighClosed, gamma_e_bar * gamma_e_bar, gamma_e_bar))
}

/// Nakagami-m closed form:
/// Υ(m_d, z)/Γ(m_d) + γ̄_e² λ² (1/m_e) G^{1,2}_{2,3}(z | 0,1; m_d,0,2) / (2Γ(m_d) y²),
/// with y = λ - 1 + λγ̄_e and z = m_d y/γ̄_d.
pub fn sop_nakagami(m_d: f64, m_e: f64, gamma_d_bar: f64, gamma_e_bar: f64, rs: f64) -> Result<SopEstimate> {
    check_positive("m_d", m_d)?;
    check_positive("m_e", m_e)?;
    check_positive("gamma_d_bar", gamma_d_bar)?;
    check_positive("gamma_e_bar", gamma_e_bar)?;
    check_positive("rs", rs)?;
    let lambda = rs.exp2();
    let y = lambda - 1.0 + lambda * gamma_e_bar;
    let cdf = nakagami_cdf(m_d, gamma_d_bar, y)?;
    let z = m_d * y / gamma_d_bar;
    let g = meijer_g_scaled(&MeijerSpec::nakagami_second_derivative(m_d), z)?.0;
    let variance = gamma_e_bar * gamma_e_bar / m_e;
    let raw = cdf + 0.5 * variance * lambda * lambda * g / (y * y);
    Ok(SopEstimate::new(raw, SopMethod::NakagamiClosed, variance, gamma_e_bar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(kd: f64, md: f64, ke: f64, me: f64, d_db: f64, e_db: f64, rs: f64) -> SecrecyScenario {
        SecrecyScenario::new(
            GkParams::from_db(kd, md, d_db).unwrap(),
            GkParams::from_db(ke, me, e_db).unwrap(),
            rs,
        )
        .unwrap()
    }

    #[test]
    fn holtzman_exactness() {
        assert_eq!(holtzman_expectation(0.3, 123.0, 0.0), 0.3);
        // P(x) = x²: E{X²} = μ² + σ²
        let (mu, var) = (1.7, 0.4);
        assert_eq!(holtzman_expectation(mu * mu, 2.0, var), mu * mu + var);
    }

    #[test]
    fn holtzman_against_gamma_expectation() {
        // P(x) = e^{-x}, X ~ Gamma(4, 1): exact E = 2^{-4}; expansion e^{-4}(1 + 4/2).
        let exact = crate::quad::integrate(
            |x| (-x).exp() * x.powi(3) * (-x).exp() / 6.0,
            0.0,
            80.0,
            crate::quad::QuadOptions::default(),
        )
        .unwrap()
        .value;
        assert!((exact - 0.0625).abs() < 1e-12);
        let approx = holtzman_expectation((-4.0f64).exp(), (-4.0f64).exp(), 4.0);
        assert!((approx - 3.0 * (-4.0f64).exp()).abs() < 1e-15);
        // The expansion misses the higher cumulants: about 12% low here.
        assert!(((approx - exact) / exact + 0.121).abs() < 0.01);
    }

    #[test]
    fn lambda_and_threshold() {
        let s = scenario(2.0, 2.5, 2.0, 2.5, 10.0, 0.0, 1.0);
        assert_eq!(s.lambda(), 2.0);
        assert_eq!(s.threshold(0.0), 1.0);
        assert_eq!(s.threshold(3.0), 7.0);
        assert!(SecrecyScenario::new(s.main, s.eve, 0.0).is_err());
        assert!(SecrecyScenario::new(s.main, s.eve, -1.0).is_err());
    }

    #[test]
    fn p_function_basics() {
        let s = scenario(2.0, 2.5, 2.0, 2.5, 10.0, 0.0, 1.0);
        assert_eq!(p_function(&s, 0.0).unwrap(), gk_cdf(&s.main, 1.0).unwrap());
        let mut prev = 0.0;
        for i in 0..40 {
            let v = p_function(&s, i as f64 * 0.5).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        // Rayleigh limit
        let r = scenario(500.0, 1.0, 500.0, 1.0, 10.0, 0.0, 1.0);
        for &x in &[0.0, 0.5, 2.0, 9.0] {
            let expected = 1.0 - (-(1.0 + 2.0 * x) / 10.0f64).exp();
            assert!((p_function(&r, x).unwrap() - expected).abs() < 2e-3);
        }
    }

    #[test]
    fn second_derivative_rayleigh_limit_analytic() {
        let r = scenario(500.0, 1.0, 500.0, 1.0, 10.0, 0.0, 1.0);
        for &x in &[0.0, 1.0, 4.0] {
            let expected = -(2.0f64 / 10.0).powi(2) * (-(1.0 + 2.0 * x) / 10.0f64).exp();
            let got = p_second_derivative(&r, x).unwrap();
            assert!(((got - expected) / expected).abs() < 2e-3, "x = {x}: {got} vs {expected}");
        }
    }

    #[test]
    fn rayleigh_closed_form_values() {
        // γ̄_e -> 0 limit
        let v = sop_rayleigh(10.0, 1e-12, 1.0).unwrap().value;
        assert!((v - (1.0 - (-0.1f64).exp())).abs() < 1e-10);
        assert!((v - 0.095_162_6).abs() < 1e-7);
        // 1 - 1.02 e^{-0.3}
        let e = sop_rayleigh(10.0, 1.0, 1.0).unwrap();
        assert!((e.value - 0.244_365_414_9).abs() < 1e-9, "{}", e.value);
        assert_eq!(e.method, SopMethod::RayleighClosed);
    }

    #[test]
    fn nakagami_one_is_rayleigh() {
        for &(d, e) in &[(10.0, 1.0), (3.0, 2.0), (1000.0, 0.3), (1.0, 5.0)] {
            let n = sop_nakagami(1.0, 1.0, d, e, 1.0).unwrap();
            let r = sop_rayleigh(d, e, 1.0).unwrap();
            assert!((n.raw_value - r.raw_value).abs() < 1e-10, "{d} {e}");
        }
    }

    #[test]
    fn nakagami_first_term_is_cdf_at_zero_eve() {
        let n = sop_nakagami(2.5, 1.5, 20.0, 1e-12, 1.0).unwrap();
        let cdf = nakagami_cdf(2.5, 20.0, 1.0).unwrap();
        assert!((n.value - cdf).abs() < 1e-12);
    }

    #[test]
    fn sigma_e_sq_at_fig1_params() {
        let s = scenario(2.0, 2.5, 2.0, 2.5, 20.0, 15.0, 1.0);
        let e = sop_approx(&s).unwrap();
        assert!((e.sigma_e_sq - 1100.0).abs() < 0.5);
        assert!(e.validity_warning);
    }

    #[test]
    fn routing() {
        let r = scenario(500.0, 1.0, 500.0, 1.0, 10.0, 0.0, 1.0);
        assert_eq!(sop_approx(&r).unwrap().method, SopMethod::RayleighClosed);
        let n = scenario(500.0, 2.0, 300.0, 1.5, 10.0, 0.0, 1.0);
        assert_eq!(sop_approx(&n).unwrap().method, SopMethod::NakagamiClosed);
        let mixed = scenario(500.0, 2.0, 2.0, 1.5, 10.0, 0.0, 1.0);
        assert_eq!(sop_approx(&mixed).unwrap().method, SopMethod::Approx);
    }

    #[test]
    fn warning_flags() {
        let e = SopEstimate::new(1.2, SopMethod::Approx, 0.1, 1.0);
        assert_eq!(e.value, 1.0);
        assert!(e.validity_warning);
        let e = SopEstimate::new(0.2, SopMethod::Approx, 0.5, 1.0);
        assert!(!e.validity_warning);
        let e = SopEstimate::new(0.2, SopMethod::Approx, 1.5, 1.0);
        assert!(e.validity_warning);
        let e = SopEstimate::new(0.2, SopMethod::ExactQuadrature, 1.5, 1.0);
        assert!(!e.validity_warning);
    }
}
