//! Season summary, leaderboards and their file outputs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::metrics::AlphaFamily;
use crate::pipeline::{BatterLedger, PipelineOutput};
use crate::stats::{histogram, mean, percentile, sample_sd, Bin};

pub const DEFAULT_MIN_RBI: u64 = 30;
pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_TOP_N: usize = 10;
pub const PERCENTILES: [f64; 3] = [0.25, 0.50, 0.75];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryOptions {
    pub min_rbi: u64,
    pub bins: usize,
    pub top_n: usize,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            min_rbi: DEFAULT_MIN_RBI,
            bins: DEFAULT_BINS,
            top_n: DEFAULT_TOP_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentileRow {
    pub percentile: f64,
    pub arbi_per_rbi: f64,
    pub crbi_per_rbi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub stat: &'static str,
    pub bins: Vec<Bin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeasonSummary {
    pub event_count: usize,
    pub delta_mean: Option<f64>,
    pub delta_sd: Option<f64>,
    pub alpha_mean: Option<f64>,
    pub beta_mean: Option<f64>,
    pub min_rbi: u64,
    pub qualifying_batters: usize,
    /// Over qualifying batters; empty when none qualify.
    pub percentiles: Vec<PercentileRow>,
    pub histograms: Vec<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Leaderboards {
    /// All batters.
    pub rbi: Vec<BatterLedger>,
    /// Qualifying batters only.
    pub arbi_per_rbi: Vec<BatterLedger>,
    pub crbi_per_rbi: Vec<BatterLedger>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub alpha_family: AlphaFamily,
    pub summary: SeasonSummary,
    pub leaderboards: Leaderboards,
    /// Every batter, ordered by RBI descending then batter id.
    pub ledgers: Vec<BatterLedger>,
}

/// Descending by `metric`, ties broken by ascending batter id.
pub fn rank_by<F>(ledgers: &mut [BatterLedger], metric: F)
where
    F: Fn(&BatterLedger) -> f64,
{
    ledgers.sort_by(|a, b| {
        metric(b)
            .total_cmp(&metric(a))
            .then_with(|| a.batter_id.cmp(&b.batter_id))
    });
}

fn top(mut ledgers: Vec<BatterLedger>, n: usize, metric: impl Fn(&BatterLedger) -> f64) -> Vec<BatterLedger> {
    rank_by(&mut ledgers, metric);
    ledgers.truncate(n);
    ledgers
}

pub fn summarize(output: &PipelineOutput, opts: &SummaryOptions) -> Report {
    let deltas: Vec<f64> = output.events.iter().map(|e| e.delta_we.delta).collect();
    let alphas: Vec<f64> = output.events.iter().map(|e| e.metrics.alpha).collect();
    let betas: Vec<f64> = output.events.iter().map(|e| e.metrics.beta).collect();

    let mut all: Vec<BatterLedger> = output.ledgers.values().cloned().collect();
    rank_by(&mut all, |l| l.rbi as f64);
    let qualifying: Vec<BatterLedger> = all
        .iter()
        .filter(|l| l.rbi >= opts.min_rbi)
        .cloned()
        .collect();

    let sorted = |f: fn(&BatterLedger) -> f64| {
        let mut v: Vec<f64> = qualifying.iter().map(f).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let arbi_ratios = sorted(|l| l.arbi_per_rbi);
    let crbi_ratios = sorted(|l| l.crbi_per_rbi);
    let percentiles = PERCENTILES
        .iter()
        .filter_map(|&q| {
            Some(PercentileRow {
                percentile: q * 100.0,
                arbi_per_rbi: percentile(&arbi_ratios, q)?,
                crbi_per_rbi: percentile(&crbi_ratios, q)?,
            })
        })
        .collect();

    let histograms = vec![
        Histogram { stat: "delta_we", bins: histogram(&deltas, opts.bins) },
        Histogram { stat: "alpha", bins: histogram(&alphas, opts.bins) },
        Histogram { stat: "beta", bins: histogram(&betas, opts.bins) },
        Histogram { stat: "arbi_per_rbi", bins: histogram(&arbi_ratios, opts.bins) },
        Histogram { stat: "crbi_per_rbi", bins: histogram(&crbi_ratios, opts.bins) },
    ];

    let summary = SeasonSummary {
        event_count: output.events.len(),
        delta_mean: mean(&deltas),
        delta_sd: sample_sd(&deltas),
        alpha_mean: mean(&alphas),
        beta_mean: mean(&betas),
        min_rbi: opts.min_rbi,
        qualifying_batters: qualifying.len(),
        percentiles,
        histograms,
    };
    let leaderboards = Leaderboards {
        rbi: all.iter().take(opts.top_n).cloned().collect(),
        arbi_per_rbi: top(qualifying.clone(), opts.top_n, |l| l.arbi_per_rbi),
        crbi_per_rbi: top(qualifying, opts.top_n, |l| l.crbi_per_rbi),
    };
    Report {
        alpha_family: output.family,
        summary,
        leaderboards,
        ledgers: all,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    /// `ledgers.csv`, `leaders_<metric>.csv`, `percentiles.csv`
    Csv,
    /// `summary.json`
    Json,
    /// `hist_<stat>.csv`, `event_metrics.csv`
    PlotData,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [OutputFormat::Csv, OutputFormat::Json, OutputFormat::PlotData];
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

const LEDGER_HEADER: [&str; 8] = [
    "batter_id", "Batter", "RBI", "ARBI", "ARBI/RBI", "CRBI", "CRBI/RBI", "Events",
];

fn write_ledgers(path: &Path, ledgers: &[BatterLedger]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(LEDGER_HEADER).map_err(csv_err)?;
    for l in ledgers {
        w.write_record([
            l.batter_id.clone(),
            l.batter_name.clone(),
            l.rbi.to_string(),
            l.arbi.to_string(),
            l.arbi_per_rbi.to_string(),
            l.crbi.to_string(),
            l.crbi_per_rbi.to_string(),
            l.event_count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

fn write_histogram(path: &Path, bins: &[Bin]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["bin_left", "bin_right", "count"]).map_err(csv_err)?;
    for b in bins {
        w.write_record([b.left.to_string(), b.right.to_string(), b.count.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()
}

fn write_event_metrics(path: &Path, output: &PipelineOutput) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record([
        "game_id", "event_id", "batter_id", "rbi", "we_start", "we_end", "delta_we", "alpha",
        "beta", "arbi", "crbi",
    ])
    .map_err(csv_err)?;
    for e in &output.events {
        let m = &e.metrics;
        let d = &e.delta_we;
        w.write_record([
            e.game_id.clone(),
            e.event_id.clone(),
            e.batter_id.clone(),
            m.rbi.to_string(),
            d.we_start.to_string(),
            d.we_end.to_string(),
            d.delta.to_string(),
            m.alpha.to_string(),
            m.beta.to_string(),
            m.arbi.to_string(),
            m.crbi.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

/// Writes the requested outputs into `dir` (created if missing) and returns the paths written.
/// Output bytes depend only on the inputs.
pub fn emit_report(
    report: &Report,
    output: &PipelineOutput,
    dir: &Path,
    formats: &[OutputFormat],
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut out = |name: String| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };

    if formats.contains(&OutputFormat::Csv) {
        write_ledgers(&out("ledgers.csv".into()), &report.ledgers)?;
        let boards = &report.leaderboards;
        write_ledgers(&out("leaders_rbi.csv".into()), &boards.rbi)?;
        write_ledgers(&out("leaders_arbi_per_rbi.csv".into()), &boards.arbi_per_rbi)?;
        write_ledgers(&out("leaders_crbi_per_rbi.csv".into()), &boards.crbi_per_rbi)?;

        let mut w = csv::Writer::from_path(out("percentiles.csv".into())).map_err(csv_err)?;
        w.write_record(["percentile", "ARBI/RBI", "CRBI/RBI"]).map_err(csv_err)?;
        for p in &report.summary.percentiles {
            w.write_record([
                p.percentile.to_string(),
                p.arbi_per_rbi.to_string(),
                p.crbi_per_rbi.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
    }
    if formats.contains(&OutputFormat::Json) {
        let mut json = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
        json.push('\n');
        fs::write(out("summary.json".into()), json)?;
    }
    if formats.contains(&OutputFormat::PlotData) {
        for h in &report.summary.histograms {
            write_histogram(&out(format!("hist_{}.csv", h.stat)), &h.bins)?;
        }
        write_event_metrics(&out("event_metrics.csv".into()), output)?;
    }
    Ok(written)
}
