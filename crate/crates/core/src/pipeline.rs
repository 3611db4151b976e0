use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::game::{compute_delta_we, credit_rbis, DeltaWe, GameError};
use crate::ingest::EventRecord;
use crate::metrics::{metric_warnings, score_event_metrics, AlphaFamily, MetricError, MetricValues, MetricWarning};
use crate::we_model::WinExpectancy;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("event {game_id}/{event_id}: {source}")]
    Game {
        game_id: String,
        event_id: String,
        #[source]
        source: GameError,
    },
    #[error("event {game_id}/{event_id}: {source}")]
    Metric {
        game_id: String,
        event_id: String,
        #[source]
        source: MetricError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventResult {
    pub game_id: String,
    pub event_id: String,
    pub batter_id: String,
    pub delta_we: DeltaWe,
    pub metrics: MetricValues,
    #[serde(skip)]
    pub warnings: Vec<MetricWarning>,
}

/// Season totals for one batter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatterLedger {
    pub batter_id: String,
    pub batter_name: String,
    pub rbi: u64,
    pub arbi: f64,
    pub crbi: f64,
    pub arbi_per_rbi: f64,
    pub crbi_per_rbi: f64,
    pub event_count: u64,
}

impl BatterLedger {
    fn new(batter_id: &str, batter_name: &str) -> BatterLedger {
        BatterLedger {
            batter_id: batter_id.to_string(),
            batter_name: batter_name.to_string(),
            rbi: 0,
            arbi: 0.0,
            crbi: 0.0,
            arbi_per_rbi: 0.0,
            crbi_per_rbi: 0.0,
            event_count: 0,
        }
    }

    fn add(&mut self, m: &MetricValues) {
        self.rbi += u64::from(m.rbi);
        self.arbi += m.arbi;
        self.crbi += m.crbi;
        self.event_count += 1;
        let rbi = self.rbi as f64;
        self.arbi_per_rbi = self.arbi / rbi;
        self.crbi_per_rbi = self.crbi / rbi;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub family: AlphaFamily,
    /// Sorted by `(game_id, event_id)`.
    pub events: Vec<EventResult>,
    pub ledgers: BTreeMap<String, BatterLedger>,
}

impl PipelineOutput {
    pub fn warnings(&self) -> impl Iterator<Item = (&EventResult, &MetricWarning)> {
        self.events
            .iter()
            .flat_map(|e| e.warnings.iter().map(move |w| (e, w)))
    }
}

/// Scores every event and accumulates per-batter ledgers.
///
/// Events are processed in `(game_id, event_id)` order whatever the input
/// order, so floating-point totals do not depend on how the file was sorted.
pub fn run_pipeline<M>(
    model: &M,
    family: &AlphaFamily,
    events: &[EventRecord],
) -> Result<PipelineOutput, PipelineError>
where
    M: WinExpectancy + ?Sized,
{
    let mut order: Vec<&EventRecord> = events.iter().collect();
    order.sort_by(|a, b| (&a.game_id, &a.event_id).cmp(&(&b.game_id, &b.event_id)));

    let mut results = Vec::with_capacity(order.len());
    let mut ledgers: BTreeMap<String, BatterLedger> = BTreeMap::new();
    for record in order {
        let game_err = |source| PipelineError::Game {
            game_id: record.game_id.clone(),
            event_id: record.event_id.clone(),
            source,
        };
        let event = record.to_scoring_event().map_err(game_err)?;
        let delta_we = compute_delta_we(model, &event).map_err(game_err)?;
        let (batter, rbi) = credit_rbis(&event);
        let metrics =
            score_event_metrics(family, &delta_we, rbi).map_err(|source| PipelineError::Metric {
                game_id: record.game_id.clone(),
                event_id: record.event_id.clone(),
                source,
            })?;

        ledgers
            .entry(batter.to_string())
            .or_insert_with(|| BatterLedger::new(batter, &record.batter_name))
            .add(&metrics);
        results.push(EventResult {
            game_id: record.game_id.clone(),
            event_id: record.event_id.clone(),
            batter_id: batter.to_string(),
            delta_we,
            metrics,
            warnings: metric_warnings(delta_we.delta, delta_we.we_end),
        });
    }

    Ok(PipelineOutput {
        family: *family,
        events: results,
        ledgers,
    })
}
