//! End-to-end two-network rebalancing calculation.

use crate::allocator::{
    network_band, network_capacity, network_weight, trim_network_weight, CapacityBand, TrimConfig,
};
use crate::error::{AllocError, Result};
use crate::stretch::{compute_stretch, stretch_band, NetworkFlowEstimate};
use crate::transfer::{assess_band, decide, DirectedTerms};
use crate::types::{
    validate_scenario, AssetWeightBand, BandAssessment, BridgeLink, NetworkState, StretchResult,
    TransferDecision,
};

/// A global asset with its raw band and where it can be held.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetListing {
    pub asset_id: String,
    pub band: AssetWeightBand,
    pub on_p: bool,
    pub on_q: bool,
}

impl AssetListing {
    pub fn new(
        asset_id: impl Into<String>,
        min: f64,
        ideal: f64,
        max: f64,
        on_p: bool,
        on_q: bool,
    ) -> Result<Self> {
        Ok(AssetListing {
            asset_id: asset_id.into(),
            band: AssetWeightBand::raw(min, ideal, max)?,
            on_p,
            on_q,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub trim: TrimConfig,
    pub max_stretch: f64,
    pub delta: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            trim: TrimConfig::default(),
            max_stretch: crate::DEFAULT_MAX_BRIDGE_STRETCH,
            delta: crate::DEFAULT_DELTA,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        TrimConfig::new(self.trim.min_weight, self.trim.max_weight)?;
        if !(self.max_stretch.is_finite() && self.max_stretch >= 0.0) {
            return Err(AllocError::invalid("max_stretch", "must be finite and >= 0"));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(AllocError::invalid("delta", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// One asset's split across the two networks.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkAllocation {
    pub asset_id: String,
    pub share_p: f64,
    pub share_q: f64,
    pub band_p: AssetWeightBand,
    pub band_q: AssetWeightBand,
}

/// Single-direction summary of the two simple transfer expressions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Netting {
    /// Signed P to Q amount after merging both views, within the directed capacities.
    pub net_pq: f64,
    /// A network still sits below its minimum after the netted transfer.
    pub multi_round: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// One network's minimum capacity exceeds the other's maximum.
    pub min_above_other_max: bool,
    /// The pooled total cannot fit both bands at once.
    pub band_range_too_narrow: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub stretch: StretchResult,
    pub total_pq_with_tbd: f64,
    pub allocations: Vec<NetworkAllocation>,
    pub capacity_p: CapacityBand,
    pub capacity_q: CapacityBand,
    pub assessment_p: BandAssessment,
    pub assessment_q: BandAssessment,
    pub decision: TransferDecision,
    pub terms_pq: DirectedTerms,
    pub terms_qp: DirectedTerms,
    pub netting: Netting,
    pub diagnostics: Diagnostics,
}

/// Splits each stretched asset band across P and Q.
///
/// Assets held on both networks are split by post-flow totals and trimmed;
/// single-network assets keep their full stretched band on that network.
pub fn allocate_assets(
    p: &NetworkState,
    q: &NetworkState,
    assets: &[AssetListing],
    stretch: f64,
    trim: TrimConfig,
) -> Vec<NetworkAllocation> {
    let tot_p = p.total_with_tbd();
    let tot_q = q.total_with_tbd();
    assets
        .iter()
        .map(|asset| {
            let stretched = stretch_band(asset.band, stretch);
            let (share_p, share_q) = match (asset.on_p, asset.on_q) {
                (true, true) => {
                    // A zero pooled total zeroes both capacities, so any share will do.
                    let w = network_weight(true, true, tot_p, tot_q).unwrap_or(0.0);
                    trim_network_weight(w, trim)
                }
                (true, false) => (1.0, 0.0),
                (false, true) => (0.0, 1.0),
                (false, false) => (0.0, 0.0),
            };
            NetworkAllocation {
                asset_id: asset.asset_id.clone(),
                share_p,
                share_q,
                band_p: network_band(stretched, share_p),
                band_q: network_band(stretched, share_q),
            }
        })
        .collect()
}

/// Capacity bands of P and Q from their asset allocations.
pub fn capacities(
    total_pq_with_tbd: f64,
    allocations: &[NetworkAllocation],
    assets: &[AssetListing],
) -> (CapacityBand, CapacityBand) {
    let bands_p: Vec<_> = allocations
        .iter()
        .zip(assets)
        .filter(|(_, a)| a.on_p)
        .map(|(al, _)| al.band_p)
        .collect();
    let bands_q: Vec<_> = allocations
        .iter()
        .zip(assets)
        .filter(|(_, a)| a.on_q)
        .map(|(al, _)| al.band_q)
        .collect();
    (
        network_capacity(total_pq_with_tbd, &bands_p),
        network_capacity(total_pq_with_tbd, &bands_q),
    )
}

/// Runs the full calculation for one rebalancing event between P and Q.
pub fn pipeline(
    p: &NetworkState,
    q: &NetworkState,
    bridge: &BridgeLink,
    assets: &[AssetListing],
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    cfg.validate()?;
    validate_scenario(p, q, bridge)?;

    let stretch = compute_stretch(
        &NetworkFlowEstimate::from(p),
        &NetworkFlowEstimate::from(q),
        bridge.cap_pq,
        cfg.max_stretch,
    )?;

    let total_pq_with_tbd = p.current_total + q.current_total + p.tbd + q.tbd;
    let allocations = allocate_assets(p, q, assets, stretch.capped_stretch, cfg.trim);
    let (capacity_p, capacity_q) = capacities(total_pq_with_tbd, &allocations, assets);

    let assessment_p = assess_band(p.total_with_tbd(), capacity_p);
    let assessment_q = assess_band(q.total_with_tbd(), capacity_q);
    let (decision, terms_pq, terms_qp) = decide(&assessment_p, &assessment_q, bridge, cfg.delta);

    let netting = net_simple(&terms_pq, &terms_qp, &assessment_p, &assessment_q, bridge);
    let diagnostics = Diagnostics {
        min_above_other_max: capacity_p.min_capacity > capacity_q.max_capacity
            || capacity_q.min_capacity > capacity_p.max_capacity,
        band_range_too_narrow: capacity_p.min_capacity + capacity_q.min_capacity
            > total_pq_with_tbd + crate::amount_tolerance(total_pq_with_tbd)
            || capacity_p.max_capacity + capacity_q.max_capacity
                < total_pq_with_tbd - crate::amount_tolerance(total_pq_with_tbd),
    };

    Ok(PipelineOutcome {
        stretch,
        total_pq_with_tbd,
        allocations,
        capacity_p,
        capacity_q,
        assessment_p,
        assessment_q,
        decision,
        terms_pq,
        terms_qp,
        netting,
        diagnostics,
    })
}

/// Merges the two simple expressions into one signed P to Q amount.
///
/// P pushing its excess and Q pulling its shortfall describe the same P to Q
/// flow, so the larger of the two is taken rather than their sum; likewise
/// for Q to P.
fn net_simple(
    pq: &DirectedTerms,
    qp: &DirectedTerms,
    a_p: &BandAssessment,
    a_q: &BandAssessment,
    bridge: &BridgeLink,
) -> Netting {
    let to_q = pq.first_simple.max(-qp.second);
    let to_p = qp.first_simple.max(-pq.second);
    let net_pq = crate::transfer::unsigned_zero((to_q - to_p).max(-bridge.cap_qp).min(bridge.cap_pq));
    let short_p = (-a_p.outside_band).max(0.0) - (-net_pq).max(0.0);
    let short_q = (-a_q.outside_band).max(0.0) - net_pq.max(0.0);
    Netting {
        net_pq,
        multi_round: short_p > crate::amount_tolerance(a_p.total_with_tbd)
            || short_q > crate::amount_tolerance(a_q.total_with_tbd),
    }
}
