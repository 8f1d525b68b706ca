//! Seeded random generation of physical two-mode states in standard form.
//!
//! Mixed states come from rejection sampling: `a`, `b` uniform on
//! `[1, a_max] × [1, b_max]`, `(c₁, c₂)` uniform in the box `|cᵢ| ≤ √(ab)`,
//! kept when the state is physical and `c₁ ≥ |c₂|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{make_family, Family, StandardFormCM};

/// Consecutive rejections before giving up.
pub const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PurityMode {
    #[default]
    Mixed,
    /// Two-mode squeezed vacua with `cosh 2r ≤ a_max`.
    Pure,
    /// Symmetric squeezed thermal states `b = a`, `c₁ = −c₂`.
    SymmetricSts,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub a_max: f64,
    pub b_max: f64,
    pub seed: u64,
    pub purity_mode: PurityMode,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            a_max: 10.0,
            b_max: 10.0,
            seed: 42,
            purity_mode: PurityMode::Mixed,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_max >= 1.0 && self.b_max >= 1.0) || !self.a_max.is_finite() || !self.b_max.is_finite() {
            return Err(Error::OutOfRange(format!(
                "a_max = {}, b_max = {} must be finite and ≥ 1",
                self.a_max, self.b_max
            )));
        }
        Ok(())
    }
}

/// Draws one state; `rejections` counts the failed candidates.
pub fn random_state_counted<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    rng: &mut R,
    rejections: &mut usize,
) -> Result<StandardFormCM> {
    cfg.validate()?;
    match cfg.purity_mode {
        PurityMode::Pure => {
            let r_max = 0.5 * cfg.a_max.min(cfg.b_max).acosh();
            make_family(&Family::PureTmsv {
                r: rng.random_range(0.0..=r_max),
            })
        }
        PurityMode::SymmetricSts => {
            let a = rng.random_range(1.0..=cfg.a_max);
            let cnorm = rng.random_range(0.0..1.0);
            make_family(&Family::StsSym { a, cnorm })
        }
        PurityMode::Mixed => {
            for _ in 0..MAX_REJECTIONS {
                let a: f64 = rng.random_range(1.0..=cfg.a_max);
                let b: f64 = rng.random_range(1.0..=cfg.b_max);
                let m = (a * b).sqrt();
                let c1 = rng.random_range(-m..=m);
                let c2 = rng.random_range(-m..=m);
                if c1 >= c2.abs() {
                    if let Ok(sf) = StandardFormCM::new(a, b, c1, c2) {
                        return Ok(sf);
                    }
                }
                *rejections += 1;
            }
            Err(Error::SamplingExhausted(MAX_REJECTIONS))
        }
    }
}

pub fn random_state<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> Result<StandardFormCM> {
    random_state_counted(cfg, rng, &mut 0)
}

/// Deterministic stream of states. Independent streams for parallel workers
/// come from [`Sampler::substream`].
#[derive(Debug, Clone)]
pub struct Sampler {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    accepted: usize,
    rejected: usize,
}

impl Sampler {
    pub fn new(cfg: SamplerConfig) -> Result<Self> {
        Self::substream(cfg, 0)
    }

    pub fn substream(cfg: SamplerConfig, stream: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Ok(Self {
            cfg,
            rng,
            accepted: 0,
            rejected: 0,
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn next_state(&mut self) -> Result<StandardFormCM> {
        let s = random_state_counted(&self.cfg, &mut self.rng, &mut self.rejected)?;
        self.accepted += 1;
        Ok(s)
    }

    pub fn acceptance_rate(&self) -> f64 {
        let total = self.accepted + self.rejected;
        if total == 0 {
            1.0
        } else {
            self.accepted as f64 / total as f64
        }
    }

    pub fn take(&mut self, n: usize) -> Result<Vec<StandardFormCM>> {
        (0..n).map(|_| self.next_state()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::validate;

    #[test]
    fn deterministic() {
        let cfg = SamplerConfig::default();
        let a = Sampler::new(cfg).unwrap().take(20).unwrap();
        let b = Sampler::new(cfg).unwrap().take(20).unwrap();
        assert_eq!(a, b);
        let c = Sampler::substream(cfg, 1).unwrap().take(20).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn all_physical_and_in_standard_form() {
        let mut s = Sampler::new(SamplerConfig::default()).unwrap();
        for sf in s.take(2000).unwrap() {
            assert!(validate(&sf.to_cm()).is_positive);
            assert!(sf.c1 >= sf.c2.abs());
            assert!((1.0..=10.0).contains(&sf.a) && (1.0..=10.0).contains(&sf.b));
        }
        assert!(s.acceptance_rate() > 0.01);
    }

    #[test]
    fn both_entangled_and_separable() {
        let mut s = Sampler::new(SamplerConfig::default()).unwrap();
        let (mut ent, mut sep) = (0, 0);
        for sf in s.take(10_000).unwrap() {
            if sf.pt_nu_minus().unwrap() < 1.0 {
                ent += 1;
            } else {
                sep += 1;
            }
        }
        assert!(ent > 100 && sep > 100, "entangled {ent}, separable {sep}");
    }

    #[test]
    fn pure_and_symmetric_modes() {
        let cfg = SamplerConfig {
            purity_mode: PurityMode::Pure,
            ..Default::default()
        };
        for sf in Sampler::new(cfg).unwrap().take(50).unwrap() {
            assert_eq!(sf.a, sf.b);
            assert_eq!(sf.c1, -sf.c2);
            assert!((sf.a * sf.a - sf.c1 * sf.c1 - 1.0).abs() < 1e-9 * sf.a * sf.a);
        }
        let cfg = SamplerConfig {
            purity_mode: PurityMode::SymmetricSts,
            ..Default::default()
        };
        for sf in Sampler::new(cfg).unwrap().take(50).unwrap() {
            assert!(sf.is_symmetric(0.0) && sf.is_squeezed_thermal(0.0));
        }
    }

    #[test]
    fn bad_config() {
        let cfg = SamplerConfig {
            a_max: 0.5,
            ..Default::default()
        };
        assert!(Sampler::new(cfg).is_err());
    }
}
