//! Synthetic inputs shared by the benchmarks.

use std::path::PathBuf;

use ctx_rbi::{parse_we_table, Bases, EventRecord, Half, Team, WeModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The synthetic 24-state-by-9-inning table bundled with the core tests.
pub fn fixture_model() -> WeModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/we_synthetic.csv");
    let file = std::fs::File::open(&path).expect("bundled WE table");
    WeModel::new(parse_we_table(file).expect("valid WE table"))
}

/// `n` valid scoring events spread over `n / 40` games and 400 batters.
pub fn synthetic_events(n: usize, seed: u64) -> Vec<EventRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let inning: u8 = rng.gen_range(1..=9);
            let half = if rng.gen_bool(0.5) { Half::Top } else { Half::Bottom };
            let team = Team::batting_in(half);
            let last = inning == 9 && half == Half::Bottom;
            let bases_before = Bases::new(rng.gen(), rng.gen(), rng.gen());
            let runs = rng.gen_range(1..=u32::from(bases_before.runners()) + 1);
            let before: i32 = if last { rng.gen_range(-6..=0) } else { rng.gen_range(-6..=6) };
            let after = match team {
                Team::Home => before + runs as i32,
                Team::Away => before - runs as i32,
            };
            let outs = rng.gen_range(0..=2);
            EventRecord {
                game_id: format!("g{:05}", i / 40),
                event_id: format!("e{:02}", i % 40),
                batter_id: format!("b{:03}", rng.gen_range(0..400)),
                batter_name: String::new(),
                batting_team: team,
                inning,
                half,
                outs_before: outs,
                outs_after: outs,
                bases_before,
                bases_after: Bases::new(rng.gen(), rng.gen(), rng.gen()),
                score_diff_before: before,
                score_diff_after: after,
                runs_scored: runs,
                terminal_after: last && after > 0,
            }
        })
        .collect()
}
