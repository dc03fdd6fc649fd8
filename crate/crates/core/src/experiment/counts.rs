//! Seeded Poisson counting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interferometer::ExitPort;

/// Means at or above this use the normal approximation.
pub const INVERSION_LIMIT: f64 = 30.0;

/// Address of one simulated point: master seed, scan, point index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedPath {
    pub master: u64,
    pub scan: u64,
    pub index: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedPath {
    pub fn new(master: u64, scan: u64, index: u64) -> Self {
        Self {
            master,
            scan,
            index,
        }
    }

    pub fn seed(&self) -> u64 {
        let s = splitmix64(self.master);
        let s = splitmix64(s ^ self.scan);
        splitmix64(s ^ self.index.rotate_left(32))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed())
    }
}

/// Poisson draw with the given mean, deterministic per seed path.
pub fn simulate_counts(mean: f64, seed: SeedPath) -> Result<u64> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(LabError::NegativeMean(mean));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let mut rng = seed.rng();
    if mean < INVERSION_LIMIT {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut term = (-mean).exp();
        let mut cdf = term;
        while u > cdf && term > 0.0 {
            k += 1;
            term *= mean / k as f64;
            cdf += term;
        }
        Ok(k)
    } else {
        let z: f64 = rng.sample(StandardNormal);
        Ok((mean + mean.sqrt() * z + 0.5).floor().max(0.0) as u64)
    }
}

/// Noise switch. `Analytic` returns expected intensities with no shot
/// noise; `Counts(n)` draws Poisson counts with `n` expected counts at unit
/// intensity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exposure {
    Analytic,
    Counts(f64),
}

impl Exposure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Exposure::Analytic => Ok(()),
            Exposure::Counts(n) if n.is_finite() && n > 0.0 => Ok(()),
            Exposure::Counts(n) => Err(LabError::OutOfRange {
                name: "exposure",
                value: n,
                range: "(0, ∞)",
            }),
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Exposure::Analytic)
    }

    /// Expected counts at unit intensity; 1 in analytic mode.
    pub fn scale(&self) -> f64 {
        match *self {
            Exposure::Analytic => 1.0,
            Exposure::Counts(n) => n,
        }
    }

    /// Observation of an intensity: exact in analytic mode, a Poisson
    /// draw otherwise.
    pub fn observe(&self, intensity: f64, seed: SeedPath) -> Result<Option<u64>> {
        match *self {
            Exposure::Analytic => Ok(None),
            Exposure::Counts(n) => simulate_counts(n * intensity, seed).map(Some),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinAnalysis {
    UpX,
    DownX,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub chi: f64,
    pub beta: f64,
    pub port: ExitPort,
    pub spin: SpinAnalysis,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: Setting,
    pub exposure: Exposure,
    /// Expected counts, `exposure × intensity`.
    pub mean: f64,
    /// `None` in analytic mode.
    pub counts: Option<u64>,
    pub seed: SeedPath,
}

impl CountRecord {
    pub fn observe(setting: Setting, intensity: f64, exposure: Exposure, seed: SeedPath) -> Result<Self> {
        exposure.validate()?;
        Ok(Self {
            setting,
            exposure,
            mean: exposure.scale() * intensity,
            counts: exposure.observe(intensity, seed)?,
            seed,
        })
    }

    /// Intensity estimate, counts divided by the exposure.
    pub fn intensity(&self) -> f64 {
        match self.counts {
            Some(k) => k as f64 / self.exposure.scale(),
            None => self.mean,
        }
    }

    /// Poisson variance of [`Self::intensity`], zero in analytic mode. A
    /// zero count is given the variance of one count.
    pub fn variance(&self) -> f64 {
        match self.counts {
            Some(k) => {
                let n = self.exposure.scale();
                k.max(1) as f64 / (n * n)
            }
            None => 0.0,
        }
    }

    /// Least-squares weight: inverse variance, or 1 without noise.
    pub fn weight(&self) -> f64 {
        match self.counts {
            Some(_) => 1.0 / self.variance(),
            None => 1.0,
        }
    }
}
