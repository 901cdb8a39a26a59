use serde::{Deserialize, Serialize};

use crate::allocator::TrimConfig;
use crate::error::{AllocError, Result};
use crate::pipeline::PipelineConfig;

/// Bounds of the uniform distributions behind random scenarios, plus the
/// algorithm constants the batch runs with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationParams {
    pub min_weight_seed: f64,
    pub max_weight_seed: f64,
    pub delta: f64,
    pub max_bridge_stretch: f64,
    pub min_network_weight_trim: f64,
    pub max_network_weight_trim: f64,
    pub min_bridge_capacity: f64,
    pub max_bridge_capacity: f64,
    pub min_current_amount: f64,
    pub max_current_amount: f64,
    /// Asset slots that may be listed on P.
    pub n_assets_p: usize,
    /// Asset slots that may be listed on Q.
    pub n_assets_q: usize,
    /// Probability that an asset slot is listed on its network.
    pub asset_availability: f64,
    /// Random rows after the manual ones.
    pub n_scenarios: usize,
    pub rng_seed: u64,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            min_weight_seed: 0.01,
            max_weight_seed: 0.40,
            delta: crate::DEFAULT_DELTA,
            max_bridge_stretch: crate::DEFAULT_MAX_BRIDGE_STRETCH,
            min_network_weight_trim: 0.0,
            max_network_weight_trim: 1.0,
            min_bridge_capacity: 0.0,
            max_bridge_capacity: 100_000.0,
            min_current_amount: 10_000.0,
            max_current_amount: 100_000.0,
            n_assets_p: 5,
            n_assets_q: 5,
            asset_availability: 0.8,
            n_scenarios: 20,
            rng_seed: 42,
        }
    }
}

impl SimulationParams {
    pub fn from_toml(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain struct serializes")
    }

    pub fn validate(&self) -> Result<()> {
        ordered("weight seeds", self.min_weight_seed, self.max_weight_seed)?;
        if self.min_weight_seed < 0.0 {
            return Err(AllocError::invalid("min_weight_seed", "must be >= 0"));
        }
        ordered("bridge capacity", self.min_bridge_capacity, self.max_bridge_capacity)?;
        if self.min_bridge_capacity < 0.0 {
            return Err(AllocError::invalid("min_bridge_capacity", "must be >= 0"));
        }
        ordered("current amount", self.min_current_amount, self.max_current_amount)?;
        if self.min_current_amount < 0.0 {
            return Err(AllocError::invalid("min_current_amount", "must be >= 0"));
        }
        if self.n_assets_p == 0 || self.n_assets_q == 0 {
            return Err(AllocError::invalid("n_assets", "each network needs at least one asset slot"));
        }
        if !(0.0..=1.0).contains(&self.asset_availability) {
            return Err(AllocError::invalid("asset_availability", "must lie in [0, 1]"));
        }
        self.pipeline_config().validate()
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            trim: TrimConfig {
                min_weight: self.min_network_weight_trim,
                max_weight: self.max_network_weight_trim,
            },
            max_stretch: self.max_bridge_stretch,
            delta: self.delta,
        }
    }
}

fn ordered(name: &'static str, lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(AllocError::invalid(name, format!("expected min <= max, got [{lo}, {hi}]")))
    }
}
