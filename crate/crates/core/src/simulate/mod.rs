//! Monte Carlo estimation of average SNR and ergodic rate.
//!
//! Samples are generated in fixed blocks of [`BLOCK_SIZE`]. Block `k` draws
//! turbulence from ChaCha8 stream `2k` and pointing offsets from stream
//! `2k+1` of the configured seed, so every block is reproducible on its own.
//! Blocks run on a pool of `n_workers` threads and their accumulators are
//! merged pairwise in block order; the result does not depend on the worker
//! count or on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    EwParams, LinkBudget, PointingGeometry, PointingSampler, SnrModel, SnrVariant,
};
use crate::error::{Error, Result};

mod gamma_gamma;
mod stats;

pub use gamma_gamma::{gg_sample, GgParams, GgSampler};
pub use stats::{ks_critical_value, ks_statistic, Estimate, MIN_SAMPLES, Z95};

use stats::{pairwise_merge, Accumulator};

pub const BLOCK_SIZE: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub n_workers: usize,
}

impl MonteCarloConfig {
    pub fn new(n_samples: u64, seed: u64, n_workers: usize) -> Result<Self> {
        let c = Self {
            n_samples,
            seed,
            n_workers,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(Error::param("n_samples", "must be at least 1"));
        }
        if self.n_workers < 1 {
            return Err(Error::param("n_workers", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    AvgSnr,
    ErgodicRate,
}

/// Turbulence factor `h_a` of a simulated channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Turbulence {
    Ew(EwParams),
    Gg(GgParams),
    /// `h_a ≡ 1`.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub turbulence: Turbulence,
    pub pointing: Option<PointingGeometry>,
}

impl Channel {
    pub fn new(turbulence: Turbulence, pointing: Option<PointingGeometry>) -> Self {
        Self {
            turbulence,
            pointing,
        }
    }

    /// Physical channel behind an exact density model.
    pub fn from_model(m: &SnrModel) -> Result<Self> {
        match m.variant {
            SnrVariant::TurbExact | SnrVariant::CombinedSeries => {
                Ok(Self::new(Turbulence::Ew(m.ew), m.pointing))
            }
            v => Err(Error::Model(format!(
                "{v:?} is an asymptote with no physical sampler"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.turbulence {
            Turbulence::Ew(p) => p.validate()?,
            Turbulence::Gg(p) => p.validate()?,
            Turbulence::None => {}
        }
        if let Some(g) = &self.pointing {
            g.validate()?;
        }
        Ok(())
    }
}

enum TurbulenceDraw {
    Ew(EwParams),
    Gg(GgSampler),
    None,
}

impl TurbulenceDraw {
    fn new(t: &Turbulence) -> Result<Self> {
        Ok(match t {
            Turbulence::Ew(p) => Self::Ew(*p),
            Turbulence::Gg(p) => Self::Gg(GgSampler::new(p)?),
            Turbulence::None => Self::None,
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Ew(p) => crate::channels::ew_sample(p, rng),
            Self::Gg(s) => s.sample(rng),
            Self::None => 1.0,
        }
    }
}

/// Random stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-arm accumulators for both metrics.
type BlockStats = Vec<[Accumulator; 2]>;

/// Simulate every arm over the same pointing draws.
fn run_arms(
    arms: &[Turbulence],
    pointing: Option<&PointingGeometry>,
    link: &LinkBudget,
    cfg: &MonteCarloConfig,
) -> Result<Vec<[Estimate; 2]>> {
    cfg.validate()?;
    link.validate()?;
    for t in arms {
        Channel::new(*t, pointing.copied()).validate()?;
    }
    let draws = arms
        .iter()
        .map(TurbulenceDraw::new)
        .collect::<Result<Vec<_>>>()?;
    let sampler = pointing.map(PointingSampler::new);
    let l = link.path_loss();
    let g0 = link.gamma0();
    let n_blocks = cfg.n_samples.div_ceil(BLOCK_SIZE);

    let block = |k: u64| -> BlockStats {
        let len = BLOCK_SIZE.min(cfg.n_samples - k * BLOCK_SIZE);
        let mut stats: BlockStats = vec![[Accumulator::default(); 2]; draws.len()];
        let mut rng_p = stream_rng(cfg.seed, 2 * k + 1);
        let mut hp = vec![1.0; len as usize];
        if let Some(s) = &sampler {
            hp.iter_mut().for_each(|h| *h = s.sample(&mut rng_p));
        }
        for (draw, acc) in draws.iter().zip(stats.iter_mut()) {
            let mut rng_t = stream_rng(cfg.seed, 2 * k);
            for &p in &hp {
                let h = l * draw.sample(&mut rng_t) * p;
                let gamma = g0 * h * h;
                acc[0].push(gamma);
                acc[1].push(gamma.ln_1p() / std::f64::consts::LN_2);
            }
        }
        stats
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.n_workers)
        .build()
        .map_err(|e| Error::Model(format!("worker pool: {e}")))?;
    let blocks: Vec<BlockStats> =
        pool.install(|| (0..n_blocks).into_par_iter().map(block).collect());

    (0..arms.len())
        .map(|a| {
            let merge = |m: usize| {
                let parts: Vec<Accumulator> = blocks.iter().map(|b| b[a][m]).collect();
                Estimate::from_accumulator(&pairwise_merge(&parts), cfg.seed)
            };
            Ok([merge(0)?, merge(1)?])
        })
        .collect()
}

/// Both metrics of one channel: `(average SNR, ergodic rate)`.
pub fn mc_estimate_both(
    channel: &Channel,
    link: &LinkBudget,
    cfg: &MonteCarloConfig,
) -> Result<(Estimate, Estimate)> {
    let [avg, rate] = run_arms(&[channel.turbulence], channel.pointing.as_ref(), link, cfg)?[0];
    Ok((avg, rate))
}

/// Mean of `γ = γ₀(L h_a h_p)²` or of `log₂(1+γ)` over `cfg.n_samples` draws.
pub fn mc_estimate(
    metric: Metric,
    channel: &Channel,
    link: &LinkBudget,
    cfg: &MonteCarloConfig,
) -> Result<Estimate> {
    let (avg, rate) = mc_estimate_both(channel, link, cfg)?;
    Ok(match metric {
        Metric::AvgSnr => avg,
        Metric::ErgodicRate => rate,
    })
}

/// Paired estimates of two turbulence arms sharing pointing and turbulence streams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub first_avg_snr: Estimate,
    pub first_rate: Estimate,
    pub second_avg_snr: Estimate,
    pub second_rate: Estimate,
}

/// Two arms with common random numbers.
pub fn compare_channels(
    first: Turbulence,
    second: Turbulence,
    pointing: Option<&PointingGeometry>,
    link: &LinkBudget,
    cfg: &MonteCarloConfig,
) -> Result<ModelComparison> {
    let r = run_arms(&[first, second], pointing, link, cfg)?;
    Ok(ModelComparison {
        first_avg_snr: r[0][0],
        first_rate: r[0][1],
        second_avg_snr: r[1][0],
        second_rate: r[1][1],
    })
}

/// Exponentiated-Weibull arm first, Gamma-Gamma arm second.
pub fn compare_models(
    ew: &EwParams,
    gg: &GgParams,
    pointing: Option<&PointingGeometry>,
    link: &LinkBudget,
    cfg: &MonteCarloConfig,
) -> Result<ModelComparison> {
    compare_channels(
        Turbulence::Ew(*ew),
        Turbulence::Gg(*gg),
        pointing,
        link,
        cfg,
    )
}

/// Gamma-Gamma shapes with the scintillation index of a unit-mean EW law.
pub fn moment_matched_gg(ew: &EwParams) -> Result<GgParams> {
    let m1 = crate::channels::ew_moment(ew, 1.0)?;
    let m2 = crate::channels::ew_moment(ew, 2.0)?;
    GgParams::from_scintillation_index(m2 / (m1 * m1) - 1.0)
}
