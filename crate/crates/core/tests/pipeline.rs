mod common;

use std::collections::BTreeMap;
use std::fs;

use ctx_rbi::report::DEFAULT_BINS;
use ctx_rbi::{
    emit_report, parse_events, parse_we_table, run_pipeline, summarize, write_events,
    AlphaFamily, EventRecord, OutputFormat, PipelineOutput, SummaryOptions, WeModel,
};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model() -> WeModel {
    WeModel::new(parse_we_table(fs::File::open(fixture("we_synthetic.csv")).unwrap()).unwrap())
}

fn events(name: &str) -> Vec<EventRecord> {
    parse_events(fs::File::open(fixture(name)).unwrap()).unwrap()
}

fn run(events: &[EventRecord]) -> PipelineOutput {
    run_pipeline(&model(), &AlphaFamily::default(), events).unwrap()
}

fn emitted(output: &PipelineOutput, opts: &SummaryOptions) -> BTreeMap<String, Vec<u8>> {
    let dir = tempfile::tempdir().unwrap();
    emit_report(&summarize(output, opts), output, dir.path(), &OutputFormat::ALL)
        .unwrap()
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn five_event_fixture_round_trips() {
    let first = events("events_5.csv");
    assert_eq!(first.len(), 5);
    assert!(first[4].terminal_after);
    assert_eq!(first[0].batter_name, "Gray, Jo");
    let mut buf = Vec::new();
    write_events(&mut buf, &first).unwrap();
    let second = parse_events(buf.as_slice()).unwrap();
    assert_eq!(first, second);
    assert_eq!(String::from_utf8(buf).unwrap(), read_fixture("events_5.csv"));
}

#[test]
fn season_matches_independent_recomputation() {
    let out = run(&events("events_20.csv"));
    let oracle = oracle_season(&read_fixture("we_synthetic.csv"), &read_fixture("events_20.csv"), 4.0);
    let golden = golden_ledgers();
    assert_eq!(oracle.keys().collect::<Vec<_>>(), golden.keys().collect::<Vec<_>>());
    assert_eq!(out.ledgers.len(), oracle.len());
    for (id, (rbi, arbi, crbi, n)) in oracle.into_iter().chain(golden) {
        let l = &out.ledgers[&id];
        assert_eq!((l.rbi, l.event_count), (rbi, n), "{id}");
        assert!((l.arbi - arbi).abs() <= 1e-9, "{id}: {} vs {arbi}", l.arbi);
        assert!((l.crbi - crbi).abs() <= 1e-9, "{id}: {} vs {crbi}", l.crbi);
    }
}

#[test]
fn ledgers_are_sums_of_event_metrics() {
    let out = run(&events("events_20.csv"));
    for (id, l) in &out.ledgers {
        let mine: Vec<_> = out.events.iter().filter(|e| &e.batter_id == id).collect();
        let arbi: f64 = mine.iter().map(|e| e.metrics.alpha * f64::from(e.metrics.rbi)).sum();
        let crbi: f64 = mine.iter().map(|e| e.metrics.crbi).sum();
        assert!((l.arbi - arbi).abs() <= 1e-9);
        assert!((l.crbi - crbi).abs() <= 1e-9);
        assert_eq!(l.event_count as usize, mine.len());
        assert!((l.arbi_per_rbi - l.arbi / l.rbi as f64).abs() <= 1e-15);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let evs = events("events_20.csv");
    let opts = SummaryOptions { min_rbi: 3, ..SummaryOptions::default() };
    assert_eq!(emitted(&run(&evs), &opts), emitted(&run(&evs), &opts));
}

#[test]
fn histograms_conserve_counts() {
    let out = run(&events("events_20.csv"));
    let report = summarize(&out, &SummaryOptions { min_rbi: 4, ..SummaryOptions::default() });
    let s = &report.summary;
    for h in &s.histograms {
        assert_eq!(h.bins.len(), DEFAULT_BINS);
        let total: u64 = h.bins.iter().map(|b| b.count).sum();
        let want = if h.stat.ends_with("per_rbi") { s.qualifying_batters } else { s.event_count };
        assert_eq!(total as usize, want, "{}", h.stat);
    }
}

#[test]
fn empty_season_yields_empty_summary() {
    let out = run(&[]);
    let report = summarize(&out, &SummaryOptions::default());
    assert_eq!(report.summary.event_count, 0);
    assert!(report.ledgers.is_empty());
    assert!(report.summary.delta_mean.is_none());
    emitted(&out, &SummaryOptions::default());
}

#[test]
fn unknown_state_names_the_event() {
    let table = "inning,half,outs,runners,m5,m4,m3,m2,m1,tie,p1,p2,p3,p4,p5\n\
                 1,Top,0,Empty,0.1,0.2,0.3,0.4,0.45,0.5,0.55,0.6,0.7,0.8,0.9\n";
    let model = WeModel::new(parse_we_table(table.as_bytes()).unwrap());
    let err = run_pipeline(&model, &AlphaFamily::default(), &events("events_5.csv")).unwrap_err();
    assert!(err.to_string().contains("e01") || err.to_string().contains("e02"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn order_does_not_matter(seed in any::<u64>()) {
        let evs = events("events_20.csv");
        let mut shuffled = evs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let opts = SummaryOptions { min_rbi: 2, ..SummaryOptions::default() };
        let (a, b) = (run(&evs), run(&shuffled));
        prop_assert_eq!(&a.ledgers, &b.ledgers);
        prop_assert_eq!(emitted(&a, &opts), emitted(&b, &opts));
    }

    #[test]
    fn raising_threshold_never_adds_batters(seed in any::<u64>(), lo in 0u64..20, step in 0u64..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let evs: Vec<_> = (0..300).map(|i| random_event(&mut rng, i / 10, i % 10)).collect();
        let out = run(&evs);
        let count = |min_rbi| summarize(&out, &SummaryOptions { min_rbi, ..SummaryOptions::default() })
            .summary
            .qualifying_batters;
        prop_assert!(count(lo + step) <= count(lo));
    }

    #[test]
    fn random_seasons_stay_in_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let evs: Vec<_> = (0..200).map(|i| random_event(&mut rng, i / 10, i % 10)).collect();
        for l in run(&evs).ledgers.values() {
            prop_assert!(l.arbi_per_rbi > 0.0 && l.arbi_per_rbi <= 2.0);
            prop_assert!(l.crbi_per_rbi > 0.0 && l.crbi_per_rbi <= 2.0);
        }
    }
}
