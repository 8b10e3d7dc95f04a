//! Run configuration for the command line front end, read from TOML.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::NumMode;
use crate::num::{fmt_rat, parse_rat, Rat};
use crate::synthesis::{SpikeEngine, UrchinParams};
use crate::{Error, Result};

pub const MODE_ENV: &str = "PARITY_FORGE_MODE";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub mode: NumMode,
    /// Interval width for float mode.
    pub tolerance: f64,
    /// Truncation horizon for lazily presented models.
    pub horizon: usize,
    pub branch_cap: usize,
    /// Overrides the plastering γ = ε/(e_max+2).
    pub gamma: Option<String>,
    pub urchin: UrchinConfig,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UrchinConfig {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    /// err in round i is 2^-(i + err_shift).
    pub err_shift: u32,
    pub max_radius: usize,
    /// "plaster" or "exact".
    pub spikes: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mode: NumMode::Exact,
            tolerance: 1e-9,
            horizon: 10,
            branch_cap: 16,
            gamma: None,
            urchin: UrchinConfig::default(),
            seed: 0,
        }
    }
}

impl Default for UrchinConfig {
    fn default() -> Self {
        let p = UrchinParams::default();
        UrchinConfig {
            alpha: fmt_rat(&p.alpha),
            beta: fmt_rat(&p.beta),
            gamma: fmt_rat(&p.gamma),
            err_shift: p.err_shift,
            max_radius: p.max_radius,
            spikes: "plaster".into(),
        }
    }
}

impl UrchinConfig {
    pub fn params(&self) -> Result<UrchinParams> {
        let engine = match self.spikes.as_str() {
            "plaster" => SpikeEngine::Plaster,
            "exact" => SpikeEngine::Exact,
            s => return Err(Error::BadParams(format!("spikes must be plaster or exact, got {s:?}"))),
        };
        let p = UrchinParams {
            alpha: parse_rat(&self.alpha)?,
            beta: parse_rat(&self.beta)?,
            gamma: parse_rat(&self.gamma)?,
            err_shift: self.err_shift,
            max_radius: self.max_radius,
            engine,
        };
        p.validate()?;
        Ok(p)
    }
}

impl Config {
    pub fn from_toml(s: &str) -> Result<Config> {
        let c: Config = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: Option<&std::path::Path>) -> Result<Config> {
        let mut c = match path {
            Some(p) => Config::from_toml(&std::fs::read_to_string(p)?)?,
            None => Config::default(),
        };
        c.apply_env(std::env::var(MODE_ENV).ok().as_deref())?;
        Ok(c)
    }

    /// Applies the value of the mode environment variable, if set.
    pub fn apply_env(&mut self, mode: Option<&str>) -> Result<()> {
        match mode {
            None | Some("") => Ok(()),
            Some("exact") => {
                self.mode = NumMode::Exact;
                Ok(())
            }
            Some("float") => {
                self.mode = NumMode::Float;
                self.validate()
            }
            Some(v) => Err(Error::BadParams(format!("{MODE_ENV} must be exact or float, got {v:?}"))),
        }
    }

    pub fn gamma(&self) -> Result<Option<Rat>> {
        self.gamma.as_deref().map(parse_rat).transpose()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == NumMode::Float && (self.tolerance.is_nan() || self.tolerance <= 0.0) {
            return Err(Error::BadParams("tolerance must be positive in float mode".into()));
        }
        if self.branch_cap == 0 {
            return Err(Error::BadParams("branch_cap must be at least 1".into()));
        }
        if let Some(g) = self.gamma()? {
            if g <= Rat::zero() || g >= Rat::one() {
                return Err(Error::BadParams("gamma must lie in (0,1)".into()));
            }
        }
        self.urchin.params()?;
        Ok(())
    }
}
