//! The generalized-K (Gamma–Gamma) fading distribution.
//!
//! An instantaneous SNR is γ = γ̄·X·Y/(k·m) with independent X ~ Gamma(k, 1)
//! (shadowing) and Y ~ Gamma(m, 1) (multipath). Its density is
//!
//! f(γ) = 2 (km/γ̄)^{(k+m)/2} γ^{(k+m)/2-1} K_{k-m}(2√(kmγ/γ̄)) / (Γ(k)Γ(m)),
//!
//! and its CDF is G^{2,1}_{1,3}(kmγ/γ̄ | 1; k, m, 0) / (Γ(k)Γ(m)).
//! Links whose shadowing shape exceeds [`NAKAGAMI_THRESHOLD`] are treated as
//! Nakagami-m (no shadowing), since the Meijer-G engine rejects such shapes.

use crate::error::{Error, Result};
use crate::specfun::{ln_bessel_k, log_gamma, meijer_g_scaled, regularized_lower_gamma, MeijerSpec};

/// Shapes above this are evaluated through the Nakagami-m reduction.
pub const NAKAGAMI_THRESHOLD: f64 = 200.0;
const RAYLEIGH_TOL: f64 = 1e-12;

/// Parameters of one generalized-K link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkParams {
    /// Shadowing (large-scale) shape.
    pub k: f64,
    /// Multipath (small-scale) shape.
    pub m: f64,
    /// Mean SNR γ̄, linear.
    pub mean_snr: f64,
}

/// An instantaneous SNR realization, linear.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrValue(pub f64);

impl SnrValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be > 0"))
    }
}

impl GkParams {
    pub fn new(k: f64, m: f64, mean_snr: f64) -> Result<Self> {
        positive("k", k)?;
        positive("m", m)?;
        positive("mean_snr", mean_snr)?;
        Ok(GkParams { k, m, mean_snr })
    }

    /// Same as [`GkParams::new`] with the mean SNR given in dB.
    pub fn from_db(k: f64, m: f64, mean_snr_db: f64) -> Result<Self> {
        if !mean_snr_db.is_finite() {
            return Err(Error::invalid("mean_snr_db", mean_snr_db, "must be finite"));
        }
        GkParams::new(k, m, crate::db_to_linear(mean_snr_db))
    }

    pub fn with_mean_snr(self, mean_snr: f64) -> Self {
        GkParams { mean_snr, ..self }
    }

    pub fn is_effectively_nakagami(&self) -> bool {
        self.k > NAKAGAMI_THRESHOLD
    }

    pub fn is_effectively_rayleigh(&self) -> bool {
        self.is_effectively_nakagami() && (self.m - 1.0).abs() < RAYLEIGH_TOL
    }

    /// The bracket (k+1)(m+1)/(km) - 1, i.e. variance / γ̄².
    pub fn variance_factor(&self) -> f64 {
        (self.k + 1.0) * (self.m + 1.0) / (self.k * self.m) - 1.0
    }

    /// Nakagami shape to use when the Meijer-G path is not available.
    pub(crate) fn nakagami_reduction(&self) -> Option<f64> {
        if self.is_effectively_nakagami() {
            Some(self.m)
        } else if self.m > NAKAGAMI_THRESHOLD {
            // The law is symmetric in (k, m).
            Some(self.k)
        } else {
            None
        }
    }
}

/// Probability density of the generalized-K SNR at γ > 0.
pub fn gk_pdf(p: &GkParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain("gk_pdf", gamma, "gamma > 0"));
    }
    if let Some(shape) = p.nakagami_reduction() {
        let rate = shape / p.mean_snr;
        let ln_f = shape * rate.ln() + (shape - 1.0) * gamma.ln() - rate * gamma - log_gamma(shape)?;
        return Ok(ln_f.exp());
    }
    let (k, m) = (p.k, p.m);
    let c = k * m / p.mean_snr;
    let half = 0.5 * (k + m);
    let y = 2.0 * (c * gamma).sqrt();
    let ln_f = std::f64::consts::LN_2 + half * c.ln() + (half - 1.0) * gamma.ln() + ln_bessel_k(k - m, y)?
        - log_gamma(k)?
        - log_gamma(m)?;
    Ok(ln_f.exp())
}

/// Cumulative distribution of the generalized-K SNR.
pub fn gk_cdf(p: &GkParams, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain("gk_cdf", gamma, "gamma >= 0"));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    if let Some(shape) = p.nakagami_reduction() {
        return nakagami_cdf(shape, p.mean_snr, gamma);
    }
    let z = p.k * p.m * gamma / p.mean_snr;
    if upper_tail_negligible(p.k, p.m, z) {
        return Ok(1.0);
    }
    let (v, _) = meijer_g_scaled(&MeijerSpec::gk_cdf(p.k, p.m), z)?;
    Ok(v.clamp(0.0, 1.0))
}

/// Chernoff bound Pr{XY > z} <= E{(XY)^t} / z^t; true when it proves the tail
/// is below 1e-17, so that 1 is the correctly rounded CDF.
fn upper_tail_negligible(k: f64, m: f64, z: f64) -> bool {
    let base = (z.sqrt() - 0.5 * (k + m)).max(1.0);
    let ln_norm = log_gamma(k).unwrap_or(0.0) + log_gamma(m).unwrap_or(0.0);
    [0.5 * base, base, 1.5 * base].iter().any(|&t| {
        let ln_bound = log_gamma(k + t).unwrap_or(f64::INFINITY) + log_gamma(m + t).unwrap_or(f64::INFINITY)
            - ln_norm
            - t * z.ln();
        ln_bound < -39.2
    })
}

/// CDF of the Nakagami-m SNR (a Gamma(m, γ̄/m) law): Υ(m, mγ/γ̄)/Γ(m).
pub fn nakagami_cdf(m: f64, mean_snr: f64, gamma: f64) -> Result<f64> {
    positive("m", m)?;
    positive("mean_snr", mean_snr)?;
    if !(gamma >= 0.0) {
        return Err(Error::domain("nakagami_cdf", gamma, "gamma >= 0"));
    }
    regularized_lower_gamma(m, m * gamma / mean_snr)
}

/// Raw moment E{γⁿ} = Γ(k+n)Γ(m+n)/(Γ(k)Γ(m)) · (γ̄/(km))ⁿ.
pub fn gk_moment(p: &GkParams, n: u32) -> f64 {
    if n <= 32 {
        // Telescoped product; exact for n = 0 and n = 1.
        let mut acc = 1.0;
        for i in 0..n {
            let i = i as f64;
            acc *= (p.k + i) / p.k * ((p.m + i) / p.m) * p.mean_snr;
        }
        return acc;
    }
    let nf = n as f64;
    let ln = log_gamma(p.k + nf).unwrap() + log_gamma(p.m + nf).unwrap() - log_gamma(p.k).unwrap() - log_gamma(p.m).unwrap()
        + nf * (p.mean_snr / (p.k * p.m)).ln();
    ln.exp()
}

/// Variance [(k+1)(m+1)/(km) - 1] γ̄².
pub fn gk_variance(p: &GkParams) -> f64 {
    p.variance_factor() * p.mean_snr * p.mean_snr
}
