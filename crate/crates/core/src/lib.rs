//! Context-aware run valuation.
//!
//! An empirical win-expectancy table is extended to a smooth monotone curve
//! over every score differential ([`we_model`]). Each scoring event's change in
//! the batting team's win expectancy ([`game`]) rescales its runs batted in:
//! ARBI by `alpha`, CRBI by `alpha · beta` ([`metrics`]). Season ledgers,
//! leaderboards and distribution summaries come from [`pipeline`] and
//! [`report`].

pub mod game;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod we_model;

pub use game::{
    batting_team_we, compute_delta_we, credit_rbis, DeltaWe, GameError, GameState, ScoringEvent,
    Team,
};
pub use ingest::{parse_events, write_events, EventRecord, IngestError, RowError, RowErrorKind};
pub use metrics::{
    alpha, beta, score_event_metrics, AlphaFamily, AlphaKind, MetricError, MetricValues,
    MetricWarning,
};
pub use pipeline::{run_pipeline, BatterLedger, EventResult, PipelineError, PipelineOutput};
pub use report::{emit_report, summarize, OutputFormat, Report, SeasonSummary, SummaryOptions};
pub use we_model::{
    build_curve, compute_slopes, parse_we_table, Bases, Half, LookupError, StateKey, WeCurve,
    WeModel, WeTable, WinExpectancy,
};
