//! Greedy pairwise routing of bridge transfers across more than two networks.
//!
//! Networks are assessed against their capacity bands once, then the network
//! with the largest surplus is paired with the one with the largest shortfall
//! and the two-network alternate formulation decides the amount. Each
//! directed pair is used at most once and bridge capacity is consumed as
//! flows are booked.

use std::collections::{BTreeMap, HashSet};

use crate::allocator::{network_band, network_capacity, CapacityBand};
use crate::error::{AllocError, Result};
use crate::pipeline::{pipeline, AssetListing, PipelineConfig};
use crate::stretch::{compute_stretch, stretch_band, NetworkFlowEstimate};
use crate::transfer::{assess_band, decide, directed_terms};
use crate::types::{
    AssetWeightBand, BandAssessment, BridgeLink, NetworkState, TransferDecision,
};

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkNeed {
    pub network_id: String,
    /// Pending flow over invested capital. Infinite when `bootstrap` is set.
    pub need_ratio: f64,
    /// The network has pending flow but no invested capital.
    pub bootstrap: bool,
    pub assessment: BandAssessment,
}

impl NetworkNeed {
    pub fn from_state(state: &NetworkState, assessment: BandAssessment) -> Self {
        let (c, t) = (state.current_total, state.tbd);
        let (need_ratio, bootstrap) = if c != 0.0 {
            (t / c, false)
        } else if t == 0.0 {
            (0.0, false)
        } else {
            (t.signum() * f64::INFINITY, true)
        };
        NetworkNeed {
            network_id: state.network_id.clone(),
            need_ratio,
            bootstrap,
            assessment,
        }
    }
}

/// Descending need ratio; equal ratios fall back to network id order.
pub fn sort_by_need(mut networks: Vec<NetworkNeed>) -> Vec<NetworkNeed> {
    networks.sort_by(|a, b| {
        b.need_ratio
            .total_cmp(&a.need_ratio)
            .then_with(|| a.network_id.cmp(&b.network_id))
    });
    networks
}

/// An asset of the global portfolio and the networks that can hold it.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiAsset {
    pub asset_id: String,
    pub band: AssetWeightBand,
    pub networks: Vec<String>,
}

/// Directed bridge capacities keyed by `(from, to)` network id. Missing links have capacity 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BridgeMap {
    caps: BTreeMap<(String, String), f64>,
}

impl BridgeMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, from: impl Into<String>, to: impl Into<String>, capacity: f64) -> Result<()> {
        crate::types::non_negative("bridge capacity", capacity)?;
        self.caps.insert((from.into(), to.into()), capacity);
        Ok(())
    }

    pub fn capacity(&self, from: &str, to: &str) -> f64 {
        self.caps
            .get(&(from.to_string(), to.to_string()))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn link(&self, p: &str, q: &str) -> BridgeLink {
        BridgeLink::new(self.capacity(p, q), self.capacity(q, p))
    }

    fn ids(&self) -> impl Iterator<Item = &String> {
        self.caps.keys().flat_map(|(a, b)| [a, b])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RouteConfig {
    pub pipeline: PipelineConfig,
    /// Defaults to `N * (N - 1)`.
    pub max_iterations: Option<usize>,
}

/// One booked transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedTransfer {
    pub from: String,
    pub to: String,
    /// Positive amount moved from `from` to `to`.
    pub amount: f64,
    /// The pair in input order; `decision` is expressed in this orientation.
    pub pair: (String, String),
    pub decision: TransferDecision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub network_id: String,
    pub total_after: f64,
    /// Remaining amount outside the band after routing; 0 when satisfied.
    pub outside_band: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteOutcome {
    pub initial: Vec<NetworkNeed>,
    pub transfers: Vec<RoutedTransfer>,
    pub residuals: Vec<Residual>,
    /// Total absolute outside-band amount before routing and after each booked transfer.
    pub progress: Vec<f64>,
}

impl RouteOutcome {
    /// Signed net flow from `p` to `q` over all booked transfers.
    pub fn net_flow(&self, p: &str, q: &str) -> f64 {
        self.transfers
            .iter()
            .map(|t| {
                if t.from == p && t.to == q {
                    t.amount
                } else if t.from == q && t.to == p {
                    -t.amount
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn total_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.outside_band.abs()).sum()
    }
}

/// Capacity band of every network. Two networks reuse the two-network
/// calculation verbatim.
pub fn assess_networks(
    networks: &[NetworkState],
    assets: &[MultiAsset],
    bridges: &BridgeMap,
    cfg: &PipelineConfig,
) -> Result<Vec<(CapacityBand, BandAssessment)>> {
    check_inputs(networks, assets, bridges)?;
    if networks.len() == 2 {
        let (p, q) = (&networks[0], &networks[1]);
        let listings = assets
            .iter()
            .map(|a| AssetListing {
                asset_id: a.asset_id.clone(),
                band: a.band,
                on_p: a.networks.contains(&p.network_id),
                on_q: a.networks.contains(&q.network_id),
            })
            .collect::<Vec<_>>();
        let out = pipeline(p, q, &bridges.link(&p.network_id, &q.network_id), &listings, cfg)?;
        return Ok(vec![
            (out.capacity_p, out.assessment_p),
            (out.capacity_q, out.assessment_q),
        ]);
    }

    cfg.validate()?;
    let pooled_current: f64 = networks.iter().map(|n| n.current_total).sum();
    let pooled_tbd: f64 = networks.iter().map(|n| n.tbd).sum();
    for n in networks {
        crate::types::non_negative("current_total", n.current_total)?;
        crate::types::finite("tbd", n.tbd)?;
    }
    if -pooled_tbd > pooled_current + crate::amount_tolerance(pooled_current) {
        return Err(AllocError::WithdrawalExceedsInvestment {
            withdrawal: -pooled_tbd,
            invested: pooled_current,
        });
    }

    // The widest pairwise stretch covers every bridge.
    let mut stretch: f64 = 0.0;
    for (i, a) in networks.iter().enumerate() {
        for b in &networks[i + 1..] {
            let s = compute_stretch(
                &NetworkFlowEstimate::from(a),
                &NetworkFlowEstimate::from(b),
                bridges.capacity(&a.network_id, &b.network_id),
                cfg.max_stretch,
            )?;
            stretch = stretch.max(s.capped_stretch);
        }
    }

    let pooled_total = pooled_current + pooled_tbd;
    let mut bands: Vec<Vec<AssetWeightBand>> = vec![Vec::new(); networks.len()];
    for asset in assets {
        let stretched = stretch_band(asset.band, stretch);
        let holders: Vec<usize> = networks
            .iter()
            .enumerate()
            .filter(|(_, n)| asset.networks.contains(&n.network_id))
            .map(|(k, _)| k)
            .collect();
        let denom: f64 = holders.iter().map(|&k| networks[k].total_with_tbd()).sum();
        for &k in &holders {
            let share = if holders.len() == 1 {
                1.0
            } else {
                let w = if denom == 0.0 {
                    0.0
                } else {
                    networks[k].total_with_tbd() / denom
                };
                w.max(cfg.trim.min_weight).min(cfg.trim.max_weight)
            };
            bands[k].push(network_band(stretched, share));
        }
    }

    Ok(networks
        .iter()
        .zip(&bands)
        .map(|(n, b)| {
            let cap = network_capacity(pooled_total, b);
            (cap, assess_band(n.total_with_tbd(), cap))
        })
        .collect())
}

fn check_inputs(networks: &[NetworkState], assets: &[MultiAsset], bridges: &BridgeMap) -> Result<()> {
    if networks.len() < 2 {
        return Err(AllocError::invalid("networks", "routing needs at least two networks"));
    }
    let ids: HashSet<&str> = networks.iter().map(|n| n.network_id.as_str()).collect();
    if ids.len() != networks.len() {
        return Err(AllocError::invalid("networks", "network ids must be unique"));
    }
    for id in assets.iter().flat_map(|a| &a.networks).chain(bridges.ids()) {
        if !ids.contains(id.as_str()) {
            return Err(AllocError::UnknownNetwork(id.clone()));
        }
    }
    Ok(())
}

/// Routes transfers until no directed pair can move money or the iteration
/// budget runs out. Unsatisfied amounts are reported as residuals.
pub fn round_robin_route(
    networks: &[NetworkState],
    assets: &[MultiAsset],
    bridges: &BridgeMap,
    cfg: &RouteConfig,
) -> Result<RouteOutcome> {
    let assessed = assess_networks(networks, assets, bridges, &cfg.pipeline)?;
    let n = networks.len();
    let max_iterations = cfg.max_iterations.unwrap_or(n * (n - 1));
    if max_iterations == 0 {
        return Err(AllocError::invalid("max_iterations", "must be at least 1"));
    }
    let delta = cfg.pipeline.delta;

    let initial: Vec<NetworkNeed> = networks
        .iter()
        .zip(&assessed)
        .map(|(s, (_, a))| NetworkNeed::from_state(s, *a))
        .collect();
    let ratio: Vec<f64> = initial.iter().map(|x| x.need_ratio).collect();
    let id = |k: usize| networks[k].network_id.as_str();

    let bands: Vec<CapacityBand> = assessed.iter().map(|(c, _)| *c).collect();
    let mut state: Vec<BandAssessment> = assessed.iter().map(|(_, a)| *a).collect();
    let mut remaining: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| bridges.capacity(id(i), id(j))).collect())
        .collect();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let residual_sum = |st: &[BandAssessment]| st.iter().map(|a| a.outside_band.abs()).sum::<f64>();
    let mut progress = vec![residual_sum(&state)];
    let mut transfers = Vec::new();

    for _ in 0..max_iterations {
        let mut senders: Vec<usize> = (0..n).collect();
        senders.sort_by(|&a, &b| {
            state[b].outside_band.total_cmp(&state[a].outside_band)
                .then_with(|| ratio[b].total_cmp(&ratio[a]))
                .then_with(|| id(a).cmp(id(b)))
        });
        let mut receivers: Vec<usize> = (0..n).collect();
        receivers.sort_by(|&a, &b| {
            state[a].outside_band.total_cmp(&state[b].outside_band)
                .then_with(|| ratio[a].total_cmp(&ratio[b]))
                .then_with(|| id(a).cmp(id(b)))
        });

        let pick = senders.iter().find_map(|&s| {
            receivers.iter().find_map(|&r| {
                if s == r || used.contains(&(s, r)) {
                    return None;
                }
                let flow = directed_terms(&state[s], &state[r], remaining[s][r], remaining[r][s], delta).delta();
                (flow > 0.0).then_some((s, r, flow))
            })
        });
        let Some((s, r, flow)) = pick else { break };

        let (lo, hi) = if s < r { (s, r) } else { (r, s) };
        let link = BridgeLink::new(remaining[lo][hi], remaining[hi][lo]);
        let (decision, _, _) = decide(&state[lo], &state[hi], &link, delta);
        transfers.push(RoutedTransfer {
            from: id(s).to_string(),
            to: id(r).to_string(),
            amount: flow,
            pair: (id(lo).to_string(), id(hi).to_string()),
            decision,
        });

        used.insert((s, r));
        remaining[s][r] -= flow;
        state[s] = assess_band(state[s].total_with_tbd - flow, bands[s]);
        state[r] = assess_band(state[r].total_with_tbd + flow, bands[r]);
        progress.push(residual_sum(&state));
    }

    let residuals = networks
        .iter()
        .zip(&state)
        .map(|(net, a)| Residual {
            network_id: net.network_id.clone(),
            total_after: a.total_with_tbd,
            outside_band: a.outside_band,
        })
        .collect();

    Ok(RouteOutcome {
        initial,
        transfers,
        residuals,
        progress,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn need(id: &str, ratio: f64) -> NetworkNeed {
        NetworkNeed {
            network_id: id.into(),
            need_ratio: ratio,
            bootstrap: false,
            assessment: BandAssessment::default(),
        }
    }

    fn ids(v: &[NetworkNeed]) -> Vec<&str> {
        v.iter().map(|n| n.network_id.as_str()).collect()
    }

    #[test]
    fn sorts_descending_with_id_ties() {
        let sorted = sort_by_need(vec![need("a", 0.1), need("b", -0.2), need("c", 0.3)]);
        assert_eq!(ids(&sorted), ["c", "a", "b"]);
        let sorted = sort_by_need(vec![need("z", 0.5), need("m", 0.5), need("a", 0.5)]);
        assert_eq!(ids(&sorted), ["a", "m", "z"]);
        let sorted = sort_by_need(vec![need("q", -1.0), need("p", 1.0)]);
        assert_eq!(ids(&sorted), ["p", "q"]);
    }

    #[test]
    fn bootstrap_need_sorts_first() {
        let state = NetworkState::new("new", 0.0, 100.0);
        let n = NetworkNeed::from_state(&state, BandAssessment::default());
        assert!(n.bootstrap);
        let sorted = sort_by_need(vec![need("old", 3.0), n]);
        assert_eq!(ids(&sorted), ["new", "old"]);
    }

    #[test]
    fn rejects_unknown_and_duplicate_networks() {
        let nets = vec![NetworkState::new("P", 1.0, 0.0), NetworkState::new("P", 1.0, 0.0)];
        assert!(round_robin_route(&nets, &[], &BridgeMap::new(), &RouteConfig::default()).is_err());
        let nets = vec![NetworkState::new("P", 1.0, 0.0), NetworkState::new("Q", 1.0, 0.0)];
        let mut bridges = BridgeMap::new();
        bridges.set("P", "X", 1.0).unwrap();
        assert_eq!(
            round_robin_route(&nets, &[], &bridges, &RouteConfig::default()),
            Err(AllocError::UnknownNetwork("X".into()))
        );
    }
}
