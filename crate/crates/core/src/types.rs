//! Shared domain values for the two-network transfer calculus.

use crate::error::{AllocError, Result};

/// One asset held on a network.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetPosition {
    pub asset_id: String,
    /// Token units.
    pub quantity: f64,
    /// USD per token.
    pub price: f64,
    /// Whether the asset can be held on this network at all.
    pub available: bool,
}

impl AssetPosition {
    pub fn new(asset_id: impl Into<String>, quantity: f64, price: f64) -> Result<Self> {
        non_negative("quantity", quantity)?;
        non_negative("price", price)?;
        Ok(AssetPosition {
            asset_id: asset_id.into(),
            quantity,
            price,
            available: true,
        })
    }

    pub fn notional(&self) -> f64 {
        self.quantity * self.price
    }
}

/// Invested amount and pending net flow on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub network_id: String,
    /// Notional currently invested, USD.
    pub current_total: f64,
    /// Deposits minus withdrawals since the last rebalance, USD.
    pub tbd: f64,
    /// Empty for aggregate-only scenarios.
    pub positions: Vec<AssetPosition>,
}

impl NetworkState {
    pub fn new(network_id: impl Into<String>, current_total: f64, tbd: f64) -> Self {
        NetworkState {
            network_id: network_id.into(),
            current_total,
            tbd,
            positions: Vec::new(),
        }
    }

    /// Builds the state from positions; the current total is the sum of notionals.
    pub fn from_positions(
        network_id: impl Into<String>,
        positions: Vec<AssetPosition>,
        tbd: f64,
    ) -> Self {
        let current_total = positions.iter().map(AssetPosition::notional).sum();
        NetworkState {
            network_id: network_id.into(),
            current_total,
            tbd,
            positions,
        }
    }

    /// Amount that will be held after the pending flow is actioned. May be negative
    /// when withdrawals on this network exceed what it holds.
    pub fn total_with_tbd(&self) -> f64 {
        self.current_total + self.tbd
    }

    fn check(&self) -> Result<()> {
        finite("tbd", self.tbd)?;
        non_negative("current_total", self.current_total)?;
        for pos in &self.positions {
            non_negative("quantity", pos.quantity)?;
            non_negative("price", pos.price)?;
        }
        if !self.positions.is_empty() {
            let sum: f64 = self.positions.iter().map(AssetPosition::notional).sum();
            if !crate::approx_eq(sum, self.current_total) {
                return Err(AllocError::invalid(
                    "current_total",
                    format!(
                        "network {} reports {} but positions sum to {}",
                        self.network_id, self.current_total, sum
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Directed capacities of the bridge between networks P and Q, USD.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BridgeLink {
    pub cap_pq: f64,
    pub cap_qp: f64,
}

impl BridgeLink {
    pub fn new(cap_pq: f64, cap_qp: f64) -> Self {
        BridgeLink { cap_pq, cap_qp }
    }

    /// The same link seen from Q.
    pub fn reversed(self) -> Self {
        BridgeLink {
            cap_pq: self.cap_qp,
            cap_qp: self.cap_pq,
        }
    }

    fn check(&self) -> Result<()> {
        non_negative("cap_pq", self.cap_pq)?;
        non_negative("cap_qp", self.cap_qp)
    }
}

/// Weight triples for one asset at every stage of the band computation.
///
/// Raw values come from the global weight engine. Stretched values are the
/// raw band widened by the capped stretch factor; network values are the
/// stretched ones scaled by the asset's share on a particular network.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AssetWeightBand {
    pub raw_min: f64,
    pub raw_ideal: f64,
    pub raw_max: f64,
    pub stretched_min: f64,
    pub stretched_max: f64,
    pub network_min: f64,
    pub network_ideal: f64,
    pub network_max: f64,
}

impl AssetWeightBand {
    /// A band with only the raw triple set; stretched fields start equal to raw.
    pub fn raw(min: f64, ideal: f64, max: f64) -> Result<Self> {
        for (name, v) in [("raw_min", min), ("raw_ideal", ideal), ("raw_max", max)] {
            finite(name, v)?;
        }
        if !(0.0 <= min && min <= ideal && ideal <= max) {
            return Err(AllocError::invalid(
                "raw weights",
                format!("expected 0 <= min <= ideal <= max, got ({min}, {ideal}, {max})"),
            ));
        }
        Ok(AssetWeightBand {
            raw_min: min,
            raw_ideal: ideal,
            raw_max: max,
            stretched_min: min,
            stretched_max: max,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchResult {
    pub collect_deploy_diff: f64,
    pub raw_stretch: f64,
    pub capped_stretch: f64,
    pub cap: f64,
}

/// Where a network's post-flow total sits relative to its capacity band.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BandAssessment {
    pub total_with_tbd: f64,
    pub min_capacity: f64,
    pub max_capacity: f64,
    /// Negative: must receive. Positive: must send.
    pub outside_band: f64,
    pub max_send: f64,
    pub max_receive: f64,
}

/// Signed bridge transfers. Positive `*_pq` is a P to Q flow.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransferDecision {
    pub simple_pq: f64,
    pub simple_qp: f64,
    pub delta_pq: f64,
    pub delta_qp: f64,
}

/// Checks the withdrawal condition and sign constraints for a two-network scenario.
///
/// Accepts iff `-(tbd_p + tbd_q) <= current_p + current_q` (within the amount
/// tolerance), both totals and both capacities are non-negative.
pub fn validate_scenario(p: &NetworkState, q: &NetworkState, bridge: &BridgeLink) -> Result<()> {
    p.check()?;
    q.check()?;
    bridge.check()?;
    let withdrawal = -(p.tbd + q.tbd);
    let invested = p.current_total + q.current_total;
    if withdrawal > invested + crate::amount_tolerance(invested) {
        return Err(AllocError::WithdrawalExceedsInvestment {
            withdrawal,
            invested,
        });
    }
    Ok(())
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(AllocError::invalid(what, format!("must be finite, got {value}")))
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<()> {
    finite(what, value)?;
    if value < 0.0 {
        return Err(AllocError::NegativeAmount { what, value });
    }
    Ok(())
}
