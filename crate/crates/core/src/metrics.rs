//! Rescaling factors for runs batted in.
//!
//! `alpha = f(ΔWE)` maps the change in win expectancy onto [0, 2] and gives
//! ARBI = alpha · RBI. `beta = g(ΔWE, WE_end)` rescales again by where the
//! event left the batting team: for ΔWE > 0 it is a Gaussian in `WE_end`
//! centred on `mu = (1 + ΔWE) / 2` with `sigma = min((mu - ΔWE) / 2, (1 - mu) / 2)`,
//! scaled so that CRBI = beta · alpha · RBI peaks at exactly 2 · RBI.
//! For ΔWE <= 0, beta is 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::DeltaWe;

/// Below this sigma the Gaussian collapses to a spike at `mu`.
pub const SIGMA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
}

fn domain(name: &'static str, value: f64, domain: &'static str) -> MetricError {
    MetricError::Domain {
        name,
        value,
        domain,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaKind {
    /// `2 ((Δ + 1) / 2)^k`
    Power,
    /// `2 / (1 + e^(-kΔ))`
    Sigmoid,
}

impl FromStr for AlphaKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "power" => Ok(AlphaKind::Power),
            "sigmoid" => Ok(AlphaKind::Sigmoid),
            other => Err(format!("unknown alpha family `{other}`")),
        }
    }
}

impl fmt::Display for AlphaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaKind::Power => "power",
            AlphaKind::Sigmoid => "sigmoid",
        })
    }
}

/// A monotone map from ΔWE to alpha, chosen by family and shape parameter `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaFamily {
    kind: AlphaKind,
    k: f64,
}

impl AlphaFamily {
    pub fn new(kind: AlphaKind, k: f64) -> Result<AlphaFamily, MetricError> {
        if !(k.is_finite() && k > 0.0) {
            return Err(domain("k", k, "(0, inf)"));
        }
        Ok(AlphaFamily { kind, k })
    }

    pub fn power(k: f64) -> Result<AlphaFamily, MetricError> {
        AlphaFamily::new(AlphaKind::Power, k)
    }

    pub fn sigmoid(k: f64) -> Result<AlphaFamily, MetricError> {
        AlphaFamily::new(AlphaKind::Sigmoid, k)
    }

    pub fn kind(&self) -> AlphaKind {
        self.kind
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

impl Default for AlphaFamily {
    /// Sigmoid with k = 4.
    fn default() -> Self {
        AlphaFamily {
            kind: AlphaKind::Sigmoid,
            k: 4.0,
        }
    }
}

fn check_delta(delta: f64) -> Result<(), MetricError> {
    if (-1.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(domain("delta", delta, "[-1, 1]"))
    }
}

fn check_we(we_end: f64) -> Result<(), MetricError> {
    if (0.0..=1.0).contains(&we_end) {
        Ok(())
    } else {
        Err(domain("we_end", we_end, "[0, 1]"))
    }
}

pub fn alpha(family: &AlphaFamily, delta: f64) -> Result<f64, MetricError> {
    check_delta(delta)?;
    Ok(match family.kind {
        AlphaKind::Power => 2.0 * ((delta + 1.0) / 2.0).powf(family.k),
        AlphaKind::Sigmoid => 2.0 / (1.0 + (-family.k * delta).exp()),
    })
}

/// Centre and width of the Gaussian for a positive delta.
pub fn gaussian_params(delta: f64) -> (f64, f64) {
    let mu = (1.0 + delta) / 2.0;
    let sigma = f64::min((mu - delta) / 2.0, (1.0 - mu) / 2.0);
    (mu, sigma)
}

// Gaussian weight in [0, 1]; `None` when delta <= 0 and beta is fixed at 1.
fn gaussian_weight(delta: f64, we_end: f64) -> Option<f64> {
    if delta <= 0.0 {
        return None;
    }
    let (mu, sigma) = gaussian_params(delta);
    let offset = we_end - mu;
    if sigma < SIGMA_FLOOR {
        return Some(if offset.abs() < SIGMA_FLOOR { 1.0 } else { 0.0 });
    }
    Some((-(offset * offset) / (2.0 * sigma * sigma)).exp())
}

fn beta_from(alpha: f64, weight: Option<f64>) -> f64 {
    match weight {
        None => 1.0,
        Some(w) => (2.0 / alpha * w).max(f64::MIN_POSITIVE),
    }
}

/// The CRBI rescaler. Never returns 0: vanishing weights are floored at the
/// smallest positive normal `f64`.
pub fn beta(family: &AlphaFamily, delta: f64, we_end: f64) -> Result<f64, MetricError> {
    check_delta(delta)?;
    check_we(we_end)?;
    let a = alpha(family, delta)?;
    Ok(beta_from(a, gaussian_weight(delta, we_end)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricWarning {
    /// delta is so close to 1 that sigma collapsed; beta is a spike at mu.
    SigmaDegenerate { delta: f64 },
    /// `we_end` cannot follow a positive `delta` under a consistent WE model.
    InfeasibleWeEnd { delta: f64, we_end: f64 },
}

impl fmt::Display for MetricWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricWarning::SigmaDegenerate { delta } => {
                write!(f, "sigma degenerate at delta = {delta}; beta evaluated as a spike")
            }
            MetricWarning::InfeasibleWeEnd { delta, we_end } => write!(
                f,
                "we_end = {we_end} lies outside [{delta}, 1] for delta = {delta}"
            ),
        }
    }
}

/// Data-quality warnings for one (delta, we_end) pair.
pub fn metric_warnings(delta: f64, we_end: f64) -> Vec<MetricWarning> {
    let mut out = Vec::new();
    if delta > 0.0 {
        if gaussian_params(delta).1 < SIGMA_FLOOR {
            out.push(MetricWarning::SigmaDegenerate { delta });
        }
        if we_end < delta - 1e-12 || we_end > 1.0 {
            out.push(MetricWarning::InfeasibleWeEnd { delta, we_end });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricValues {
    pub alpha: f64,
    pub beta: f64,
    pub arbi: f64,
    pub crbi: f64,
    pub rbi: u32,
}

/// Alpha and beta once per event, applied to each of its `rbi` runs.
pub fn score_event_metrics(
    family: &AlphaFamily,
    delta_we: &DeltaWe,
    rbi: u32,
) -> Result<MetricValues, MetricError> {
    if rbi == 0 {
        return Err(domain("rbi", 0.0, "[1, inf)"));
    }
    let delta = delta_we.delta;
    check_delta(delta)?;
    check_we(delta_we.we_end)?;

    let a = alpha(family, delta)?;
    let weight = gaussian_weight(delta, delta_we.we_end);
    let b = beta_from(a, weight);
    let runs = f64::from(rbi);
    let arbi = a * runs;
    // beta * alpha collapses to 2w, which keeps the peak at exactly 2 per run
    let crbi = match weight {
        None => arbi,
        Some(w) if w > 0.0 => 2.0 * w * runs,
        Some(_) => b * arbi,
    };
    Ok(MetricValues {
        alpha: a,
        beta: b,
        arbi,
        crbi,
        rbi,
    })
}
