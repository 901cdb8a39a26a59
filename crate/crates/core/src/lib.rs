//! Bridge-constrained fund flow allocation across investment networks.
//!
//! At each rebalancing event the library widens the global asset weight
//! bands according to the deposit/withdrawal imbalance between two networks,
//! turns them into per-network capacity bands, and computes how much money
//! has to cross the bridge in each direction. A greedy router extends the
//! pairwise calculus to more than two networks, and a seeded scenario
//! simulator produces the input, primary and intermediate tables.

pub mod allocator;
pub mod error;
pub mod forecast;
pub mod pipeline;
pub mod router;
pub mod sim;
pub mod stretch;
pub mod transfer;
pub mod types;

pub use error::{AllocError, Result};
pub use pipeline::{pipeline, AssetListing, PipelineConfig, PipelineOutcome};
pub use types::{
    AssetPosition, AssetWeightBand, BandAssessment, BridgeLink, NetworkState, StretchResult,
    TransferDecision,
};

/// Recommended cap on the bridge stretch factor.
pub const DEFAULT_MAX_BRIDGE_STRETCH: f64 = 0.2;

/// Default gate width for the positivity indicator, in USD.
pub const DEFAULT_DELTA: f64 = 0.0001;

/// Relative tolerance used for amount comparisons: `1e-9 * max(1, |x|)`.
pub fn amount_tolerance(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

/// Approximate equality under [`amount_tolerance`].
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= amount_tolerance(a.abs().max(b.abs()))
}
