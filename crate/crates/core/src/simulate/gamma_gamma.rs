use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shapes of the large- and small-scale factors of the Gamma-Gamma model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GgParams {
    pub a_gg: f64,
    pub b_gg: f64,
}

impl GgParams {
    pub fn new(a_gg: f64, b_gg: f64) -> Result<Self> {
        let p = Self { a_gg, b_gg };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a_gg", self.a_gg), ("b_gg", self.b_gg)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{v} must be positive and finite"),
                ));
            }
        }
        Ok(())
    }

    /// `1/a + 1/b + 1/(ab)`
    pub fn scintillation_index(&self) -> f64 {
        1.0 / self.a_gg + 1.0 / self.b_gg + 1.0 / (self.a_gg * self.b_gg)
    }

    /// Equal shapes `a = b = (1 + √(1+SI))/SI` reproducing a target index.
    pub fn from_scintillation_index(si: f64) -> Result<Self> {
        if !(si > 0.0 && si.is_finite()) {
            return Err(Error::param(
                "scintillation_index",
                format!("{si} must be positive and finite"),
            ));
        }
        let a = (1.0 + (1.0 + si).sqrt()) / si;
        Self::new(a, a)
    }
}

/// Two unit-mean Gamma laws, built once and reused for many draws.
#[derive(Debug, Clone, Copy)]
pub struct GgSampler {
    large: Gamma<f64>,
    small: Gamma<f64>,
}

impl GgSampler {
    pub fn new(p: &GgParams) -> Result<Self> {
        p.validate()?;
        let build = |shape: f64| {
            Gamma::new(shape, 1.0 / shape).map_err(|e| Error::param("gamma shape", e.to_string()))
        };
        Ok(Self {
            large: build(p.a_gg)?,
            small: build(p.b_gg)?,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.large.sample(rng) * self.small.sample(rng)
    }
}

/// Unit-mean Gamma-Gamma draw as the product of two Gamma variates.
pub fn gg_sample<R: Rng + ?Sized>(p: &GgParams, rng: &mut R) -> Result<f64> {
    Ok(GgSampler::new(p)?.sample(rng))
}
