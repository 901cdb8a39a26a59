//! Scenario simulation: seeded random scenarios, the fixed manual cases, and
//! the input/primary/intermediate report tables.

mod generator;
mod manual;
mod params;
mod report;

pub use generator::{sample_scenario, MAX_RESAMPLES};
pub use manual::{manual_scenarios, MANUAL_SCENARIO_COUNT};
pub use params::SimulationParams;
pub use report::{
    format_amount, intermediate_values, primary_values, run_batch, Batch, ScenarioRow,
    INPUT_COLUMNS, INTERMEDIATE_COLUMNS, INTERMEDIATE_FILE, INPUTS_FILE, PRIMARY_COLUMNS,
    PRIMARY_FILE,
};

use crate::pipeline::{pipeline, AssetListing, PipelineConfig, PipelineOutcome};
use crate::types::{BridgeLink, NetworkState};

/// Where a scenario came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Manual(&'static str),
    Random { seed: u64, index: u64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Manual(name) => write!(f, "manual:{name}"),
            Provenance::Random { seed, index } => write!(f, "random:{seed}:{index}"),
        }
    }
}

/// Everything needed to run the two-network calculation once.
#[derive(Debug, Clone, PartialEq)]
pub struct RebalanceScenario {
    pub p: NetworkState,
    pub q: NetworkState,
    pub bridge: BridgeLink,
    pub assets: Vec<AssetListing>,
    pub provenance: Provenance,
}

impl RebalanceScenario {
    pub fn run(&self, cfg: &PipelineConfig) -> crate::Result<PipelineOutcome> {
        pipeline(&self.p, &self.q, &self.bridge, &self.assets, cfg)
    }

    pub fn mean_raw_min(&self) -> f64 {
        mean(self.assets.iter().map(|a| a.band.raw_min))
    }

    pub fn mean_raw_max(&self) -> f64 {
        mean(self.assets.iter().map(|a| a.band.raw_max))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}
