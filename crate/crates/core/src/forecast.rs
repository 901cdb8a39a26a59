//! Flow estimates for the stretch calculation: realized flows since the last
//! rebalance, equal-weight historical averages, and seeded samplers for
//! positive-valued quantities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{AllocError, Result};

/// Pending-flow increments observed between consecutive time points.
///
/// `values[k]` is the change over `(timestamps[k], timestamps[k + 1]]`, so
/// there is one fewer value than timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSeries {
    timestamps: Vec<f64>,
    values: Vec<f64>,
    rebalance_marks: Vec<f64>,
}

impl FlowSeries {
    pub fn new(timestamps: Vec<f64>, values: Vec<f64>, rebalance_marks: Vec<f64>) -> Result<Self> {
        if timestamps.is_empty() || values.len() + 1 != timestamps.len() {
            return Err(AllocError::invalid(
                "series",
                format!(
                    "need one more timestamp than values, got {} and {}",
                    timestamps.len(),
                    values.len()
                ),
            ));
        }
        if timestamps.windows(2).any(|w| !(w[0] < w[1])) || !timestamps.iter().all(|t| t.is_finite()) {
            return Err(AllocError::invalid("timestamps", "must be finite and strictly increasing"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(AllocError::invalid("values", "must be finite"));
        }
        Ok(FlowSeries {
            timestamps,
            values,
            rebalance_marks,
        })
    }

    /// Evenly spaced series starting at `start` with unit `step`.
    pub fn regular(start: f64, step: f64, values: Vec<f64>, rebalance_marks: Vec<f64>) -> Result<Self> {
        let timestamps = (0..=values.len()).map(|k| start + step * k as f64).collect();
        FlowSeries::new(timestamps, values, rebalance_marks)
    }

    pub fn start(&self) -> f64 {
        self.timestamps[0]
    }

    pub fn end(&self) -> f64 {
        *self.timestamps.last().expect("non-empty")
    }

    fn window_sum(&self, start: f64, end: f64) -> f64 {
        self.timestamps[1..]
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| start < t && t <= end)
            .map(|(_, v)| v)
            .sum()
    }
}

/// Sum of increments whose interval ends in `(last_rebalance, now]`.
pub fn actuals_since_rebalance(series: &FlowSeries, last_rebalance: f64, now: f64) -> Result<f64> {
    if !(last_rebalance < now) {
        return Err(AllocError::invalid(
            "window",
            format!("last rebalance {last_rebalance} must precede now {now}"),
        ));
    }
    if last_rebalance < series.start() || now > series.end() {
        return Err(AllocError::OutOfRange {
            start: last_rebalance,
            end: now,
            span_start: series.start(),
            span_end: series.end(),
        });
    }
    Ok(series.window_sum(last_rebalance, now))
}

/// Equal-weight mean of the changes over non-overlapping `horizon`-length
/// windows that end at the last timestamp and fit inside the series.
///
/// Windows containing a rebalance mark are dropped.
pub fn historical_average_forecast(series: &FlowSeries, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(AllocError::invalid("horizon", format!("must be positive, got {horizon}")));
    }
    let now = series.end();
    let mut changes = Vec::new();
    for k in 0.. {
        let end = now - horizon * k as f64;
        let start = now - horizon * (k + 1) as f64;
        if start < series.start() - crate::amount_tolerance(horizon) {
            break;
        }
        let jumped = series.rebalance_marks.iter().any(|&m| start < m && m <= end);
        if !jumped {
            changes.push(series.window_sum(start, end));
        }
    }
    if changes.is_empty() {
        return Err(AllocError::InsufficientHistory { horizon });
    }
    Ok(changes.iter().sum::<f64>() / changes.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    pub initial: f64,
    pub drift: f64,
    pub volatility: f64,
    pub horizon: f64,
    pub steps: usize,
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial > 0.0 && self.initial.is_finite()) {
            return Err(AllocError::invalid("initial", "must be positive"));
        }
        if !(self.volatility >= 0.0 && self.volatility.is_finite()) {
            return Err(AllocError::invalid("volatility", "must be non-negative"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(AllocError::invalid("horizon", "must be positive"));
        }
        if self.steps == 0 {
            return Err(AllocError::invalid("steps", "must be at least 1"));
        }
        if !self.drift.is_finite() {
            return Err(AllocError::invalid("drift", "must be finite"));
        }
        Ok(())
    }
}

/// Draws geometric Brownian motion paths from one seeded stream.
///
/// Steps are exact in log space, so every value stays strictly positive.
pub struct GbmSampler {
    params: GbmParams,
    rng: ChaCha8Rng,
}

impl GbmSampler {
    pub fn new(params: GbmParams, seed: u64) -> Result<Self> {
        params.validate()?;
        Ok(GbmSampler {
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn next_path(&mut self) -> Vec<f64> {
        let GbmParams {
            initial,
            drift,
            volatility,
            horizon,
            steps,
        } = self.params;
        let dt = horizon / steps as f64;
        let mean = (drift - 0.5 * volatility * volatility) * dt;
        let sd = volatility * dt.sqrt();
        let mut log_growth = 0.0;
        let mut path = Vec::with_capacity(steps + 1);
        path.push(initial);
        for _ in 0..steps {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            log_growth += mean + sd * z;
            path.push(initial * f64::exp(log_growth));
        }
        path
    }
}

/// One GBM path of `steps + 1` points starting at `params.initial`.
pub fn gbm_sample_path(params: GbmParams, seed: u64) -> Result<Vec<f64>> {
    Ok(GbmSampler::new(params, seed)?.next_path())
}

/// Absolute value of a normal draw.
pub struct FoldedNormal {
    mu: f64,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl FoldedNormal {
    pub fn new(mu: f64, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite() && mu.is_finite()) {
            return Err(AllocError::invalid("sigma", "must be finite and >= 0"));
        }
        Ok(FoldedNormal {
            mu,
            sigma,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn sample(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        (self.mu + self.sigma * z).abs()
    }
}

pub fn folded_normal_sample(mu: f64, sigma: f64, seed: u64) -> Result<f64> {
    Ok(FoldedNormal::new(mu, sigma, seed)?.sample())
}
