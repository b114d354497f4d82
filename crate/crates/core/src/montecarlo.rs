//! Monte-Carlo estimation of the SOP straight from the outage event.
//!
//! The sample index space is cut into fixed blocks of [`BLOCK_SIZE`] draws.
//! Block `b` owns the ChaCha8 stream `b` under the user seed, so every block
//! produces the same numbers whichever thread runs it, and the per-block
//! tallies are reduced in block order. The result is therefore bit-identical
//! for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gk_model::{GkParams, SnrValue};
use crate::sop::SecrecyScenario;

pub const MIN_SAMPLES: u64 = 10_000;
pub const BLOCK_SIZE: u64 = 1 << 16;
pub const DEFAULT_SAMPLES: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, workers: usize) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::invalid("samples", samples as f64, "must be >= 10000"));
        }
        if workers == 0 {
            return Err(Error::invalid("workers", 0.0, "must be >= 1"));
        }
        Ok(McConfig { samples, seed, workers })
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    /// Binomial standard error √(p(1-p)/n).
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    /// Sample means of the two SNRs, a cheap self-check of the sampler.
    pub mean_gamma_d: f64,
    pub mean_gamma_e: f64,
}

/// Gamma(shape, 1) variate by Marsaglia–Tsang squeeze/rejection; shapes below
/// one use Gamma(a) = Gamma(a + 1) · U^{1/a}.
///
/// Panics in debug builds if `shape` is not positive.
pub fn sample_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        // 1 - U lies in (0, 1]
        let u: f64 = 1.0 - rng.random::<f64>();
        return sample_gamma_variate(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u: f64 = 1.0 - rng.random::<f64>();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// γ̄ X Y / (k m) with X ~ Gamma(k), Y ~ Gamma(m).
pub fn sample_gk_snr<R: Rng + ?Sized>(p: &GkParams, rng: &mut R) -> SnrValue {
    let x = sample_gamma_variate(p.k, rng);
    let y = sample_gamma_variate(p.m, rng);
    SnrValue(p.mean_snr * (x * y) / (p.k * p.m))
}

/// Secrecy outage test in the linear domain: (1 + γ_d) ≤ λ(1 + γ_e).
pub fn is_outage(gamma_d: f64, gamma_e: f64, lambda: f64) -> bool {
    1.0 + gamma_d <= lambda * (1.0 + gamma_e)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    outages: u64,
    sum_d: f64,
    sum_e: f64,
}

fn run_block(s: &SecrecyScenario, seed: u64, block: u64, len: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let lambda = s.lambda();
    let mut t = Tally::default();
    for _ in 0..len {
        let gd = sample_gk_snr(&s.main, &mut rng).0;
        let ge = sample_gk_snr(&s.eve, &mut rng).0;
        t.outages += is_outage(gd, ge, lambda) as u64;
        t.sum_d += gd;
        t.sum_e += ge;
    }
    t
}

/// Monte-Carlo SOP. Deterministic in (scenario, samples, seed).
pub fn sop_mc(s: &SecrecyScenario, cfg: &McConfig) -> Result<McResult> {
    let cfg = McConfig::new(cfg.samples, cfg.seed, cfg.workers)?;
    let blocks = cfg.samples.div_ceil(BLOCK_SIZE);
    let block_len = |b: u64| BLOCK_SIZE.min(cfg.samples - b * BLOCK_SIZE);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Regime(format!("cannot start {} worker threads: {e}", cfg.workers)))?;
    let tallies: Vec<Tally> = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| run_block(s, cfg.seed, b, block_len(b)))
            .collect()
    });
    let total = tallies.iter().fold(Tally::default(), |acc, t| Tally {
        outages: acc.outages + t.outages,
        sum_d: acc.sum_d + t.sum_d,
        sum_e: acc.sum_e + t.sum_e,
    });
    let n = cfg.samples as f64;
    let estimate = total.outages as f64 / n;
    Ok(McResult {
        estimate,
        stderr: (estimate * (1.0 - estimate) / n).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
        mean_gamma_d: total.sum_d / n,
        mean_gamma_e: total.sum_e / n,
    })
}
