//! Collect/deploy imbalance and the bridge stretch applied to raw weight bands.

use crate::error::{AllocError, Result};
use crate::types::{AssetWeightBand, NetworkState, StretchResult};

/// Point estimates of a network's pending flow and invested total over the
/// forecast horizon. Either actuals or forecasts; see [`crate::forecast`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkFlowEstimate {
    pub tbd_estimate: f64,
    pub current_estimate: f64,
}

impl NetworkFlowEstimate {
    pub fn new(tbd_estimate: f64, current_estimate: f64) -> Self {
        NetworkFlowEstimate {
            tbd_estimate,
            current_estimate,
        }
    }

    /// Pending flow relative to invested capital. A network with neither
    /// capital nor flow has ratio 0.
    fn flow_ratio(&self, label: &str) -> Result<f64> {
        if self.current_estimate == 0.0 {
            if self.tbd_estimate == 0.0 {
                return Ok(0.0);
            }
            return Err(AllocError::UndefinedRatio {
                network: label.to_string(),
                tbd: self.tbd_estimate,
            });
        }
        Ok(self.tbd_estimate / self.current_estimate)
    }
}

impl From<&NetworkState> for NetworkFlowEstimate {
    fn from(state: &NetworkState) -> Self {
        NetworkFlowEstimate::new(state.tbd, state.current_total)
    }
}

/// `|tbd_p / curr_p - tbd_q / curr_q|`.
pub fn collect_deploy_diff(p: &NetworkFlowEstimate, q: &NetworkFlowEstimate) -> Result<f64> {
    let rp = p.flow_ratio("P")?;
    let rq = q.flow_ratio("Q")?;
    Ok((rp - rq).abs())
}

/// Imbalance scaled by one plus the pooled flow over pooled capital plus the
/// P to Q bridge capacity. Non-negative whenever the withdrawal condition holds.
pub fn bridge_stretch(
    p: &NetworkFlowEstimate,
    q: &NetworkFlowEstimate,
    bridge_capacity_pq: f64,
) -> Result<f64> {
    let numer = p.tbd_estimate + q.tbd_estimate;
    let denom = p.current_estimate + q.current_estimate + bridge_capacity_pq;
    if denom == 0.0 && numer != 0.0 {
        return Err(AllocError::DegenerateDenominator { tbd_sum: numer });
    }
    let diff = collect_deploy_diff(p, q)?;
    if denom == 0.0 {
        return Ok(diff);
    }
    Ok(diff * (1.0 + numer / denom))
}

/// `min(|raw_stretch|, max_stretch)`.
pub fn cap_stretch(raw_stretch: f64, max_stretch: f64) -> f64 {
    raw_stretch.abs().min(max_stretch)
}

/// Runs the three stretch steps and keeps every intermediate.
pub fn compute_stretch(
    p: &NetworkFlowEstimate,
    q: &NetworkFlowEstimate,
    bridge_capacity_pq: f64,
    max_stretch: f64,
) -> Result<StretchResult> {
    if !(max_stretch >= 0.0 && max_stretch.is_finite()) {
        return Err(AllocError::invalid(
            "max_stretch",
            format!("must be a finite non-negative number, got {max_stretch}"),
        ));
    }
    let collect_deploy_diff = collect_deploy_diff(p, q)?;
    let raw_stretch = bridge_stretch(p, q, bridge_capacity_pq)?;
    Ok(StretchResult {
        collect_deploy_diff,
        raw_stretch,
        capped_stretch: cap_stretch(raw_stretch, max_stretch),
        cap: max_stretch,
    })
}

/// Widens the raw band: min shrinks by `stretch`, max grows by it, ideal is untouched.
pub fn stretch_band(band: AssetWeightBand, stretch: f64) -> AssetWeightBand {
    AssetWeightBand {
        stretched_min: band.raw_min * (1.0 - stretch),
        stretched_max: band.raw_max * (1.0 + stretch),
        ..band
    }
}
