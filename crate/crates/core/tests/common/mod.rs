//! Test-only oracles. Nothing here calls into the library's numeric paths.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use ctx_rbi::{Bases, EventRecord, Half, Team};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Fritsch–Carlson slopes written out loop by loop from the textbook rule.
pub fn oracle_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if d0 == 0.0 || s == 0.0 || s.signum() != d0.signum() {
            0.0
        } else if s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

/// Cubic Hermite basis evaluation by linear scan over segments.
pub fn oracle_hermite(xs: &[f64], ys: &[f64], m: &[f64], x: f64) -> f64 {
    let mut k = 0;
    while k + 2 < xs.len() && x >= xs[k + 1] {
        k += 1;
    }
    let h = xs[k + 1] - xs[k];
    let t = (x - xs[k]) / h;
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    h00 * ys[k] + h10 * h * m[k] + h01 * ys[k + 1] + h11 * h * m[k + 1]
}

/// Full extended curve: Hermite interior plus closed-form exponential tails.
pub fn oracle_curve(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let m = oracle_slopes(xs, ys);
    let n = xs.len();
    if x < xs[0] {
        if ys[0] == 0.0 {
            return 0.0;
        }
        let k = m[0] / ys[0];
        ys[0] * (k * (x - xs[0])).exp()
    } else if x > xs[n - 1] {
        if ys[n - 1] == 1.0 {
            return 1.0;
        }
        let k = m[n - 1] / (1.0 - ys[n - 1]);
        1.0 - (1.0 - ys[n - 1]) * (k * (xs[n - 1] - x)).exp()
    } else {
        oracle_hermite(xs, ys, &m, x)
    }
}

/// Random monotone knot set: n in [2, 11], spacing in [0.5, 2], sorted values in (0, 1).
pub fn random_knots<R: Rng>(rng: &mut R) -> Vec<(f64, f64)> {
    let n = rng.gen_range(2..=11);
    let mut x = rng.gen_range(-6.0..0.0);
    let mut ys: Vec<f64> = (0..n)
        .map(|_| {
            let mut y: f64 = rng.gen();
            while y == 0.0 {
                y = rng.gen();
            }
            y
        })
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.into_iter()
        .map(|y| {
            let knot = (x, y);
            x += rng.gen_range(0.5..2.0);
            knot
        })
        .collect()
}

/// One-sided derivative at `x` from finite differences with base step `h`,
/// sharpened by Richardson extrapolation over `levels` halvings.
/// `dir` is +1 (right side) or -1 (left side).
pub fn one_sided_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64, dir: f64, levels: usize) -> f64 {
    let fx = f(x);
    let mut table: Vec<Vec<f64>> = Vec::new();
    for i in 0..=levels {
        let step = h / f64::powi(2.0, i as i32);
        let mut row = vec![(f(x + dir * step) - fx) / (dir * step)];
        for j in 1..=i {
            let scale = f64::powi(2.0, j as i32) - 1.0;
            let prev = table[i - 1][j - 1];
            row.push(row[j - 1] + (row[j - 1] - prev) / scale);
        }
        table.push(row);
    }
    table[levels][levels]
}

pub fn oracle_alpha_sigmoid(k: f64, delta: f64) -> f64 {
    2.0 / (1.0 + (-k * delta).exp())
}

pub fn oracle_alpha_power(k: f64, delta: f64) -> f64 {
    2.0 * ((delta + 1.0) / 2.0).powf(k)
}

/// (alpha, beta, arbi, crbi) as one expression each, with sigma = (1 - delta) / 4.
pub fn oracle_metrics(alpha: f64, delta: f64, we_end: f64, rbi: f64) -> (f64, f64, f64, f64) {
    let beta = if delta <= 0.0 {
        1.0
    } else {
        2.0 / alpha
            * (-(we_end - (1.0 + delta) / 2.0).powi(2) / (2.0 * ((1.0 - delta) / 4.0).powi(2))).exp()
    };
    (alpha, beta, alpha * rbi, beta * alpha * rbi)
}

/// Spreadsheet-style season recomputation straight from the two CSV files.
/// Returns batter_id -> (rbi, arbi, crbi, events).
pub fn oracle_season(table_csv: &str, events_csv: &str, k: f64) -> BTreeMap<String, (u64, f64, f64, u64)> {
    let labels = [
        ("Empty", "000"),
        ("1B Only", "100"),
        ("2B Only", "010"),
        ("3B Only", "001"),
        ("1B 2B", "110"),
        ("1B 3B", "101"),
        ("2B 3B", "011"),
        ("Loaded", "111"),
    ];
    let mut table: BTreeMap<(i32, String, i32, String), Vec<f64>> = BTreeMap::new();
    for line in table_csv.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let c: Vec<&str> = line.split(',').collect();
        let bits = labels.iter().find(|(l, _)| *l == c[3]).unwrap().1;
        let key = (c[0].parse().unwrap(), c[1].to_string(), c[2].parse().unwrap(), bits.to_string());
        table.insert(key, c[4..].iter().map(|v| v.parse().unwrap()).collect());
    }
    let xs: Vec<f64> = (-5..=5).map(f64::from).collect();
    let home_we = |inning: i32, half: &str, outs: i32, bases: &str, diff: i32| -> f64 {
        let ys = &table[&(inning, half.to_string(), outs, bases.to_string())];
        if (-5..=5).contains(&diff) {
            ys[(diff + 5) as usize]
        } else {
            oracle_curve(&xs, ys, f64::from(diff))
        }
    };

    let mut out: BTreeMap<String, (u64, f64, f64, u64)> = BTreeMap::new();
    for line in events_csv.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let c: Vec<&str> = line.split(',').collect();
        let inning: i32 = c[5].parse().unwrap();
        let half = c[6];
        let (outs0, outs1): (i32, i32) = (c[7].parse().unwrap(), c[8].parse().unwrap());
        let (d0, d1): (i32, i32) = (c[11].parse().unwrap(), c[12].parse().unwrap());
        let runs: u64 = c[13].parse().unwrap();
        let start = home_we(inning, half, outs0, c[9], d0);
        let end = if c[14] == "true" {
            if d1 > 0 { 1.0 } else { 0.0 }
        } else if outs1 == 3 {
            if half == "Top" {
                home_we(inning, "Bottom", 0, "000", d1)
            } else {
                home_we(inning + 1, "Top", 0, "000", d1)
            }
        } else {
            home_we(inning, half, outs1, c[10], d1)
        };
        let (start, end) = if c[4] == "Home" { (start, end) } else { (1.0 - start, 1.0 - end) };
        let delta = end - start;
        let (_, _, arbi, crbi) = oracle_metrics(oracle_alpha_sigmoid(k, delta), delta, end, runs as f64);
        let entry = out.entry(c[2].to_string()).or_default();
        entry.0 += runs;
        entry.1 += arbi;
        entry.2 += crbi;
        entry.3 += 1;
    }
    out
}

/// Parses `golden_ledgers.csv` into batter_id -> (rbi, arbi, crbi, events).
pub fn golden_ledgers() -> BTreeMap<String, (u64, f64, f64, u64)> {
    read_fixture("golden_ledgers.csv")
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (
                c[0].to_string(),
                (c[1].parse().unwrap(), c[2].parse().unwrap(), c[3].parse().unwrap(), c[4].parse().unwrap()),
            )
        })
        .collect()
}

/// A random event that passes ingest validation. Bottom-9th events never start
/// with the home team ahead and end the game when it takes the lead.
pub fn random_event<R: Rng>(rng: &mut R, game: usize, idx: usize) -> EventRecord {
    let inning: u8 = rng.gen_range(1..=9);
    let half = if rng.gen_bool(0.5) { Half::Top } else { Half::Bottom };
    let team = match half {
        Half::Top => Team::Away,
        Half::Bottom => Team::Home,
    };
    let last = inning == 9 && half == Half::Bottom;
    let outs_before: u8 = rng.gen_range(0..=2);
    let bits = |r: &mut R| Bases::new(r.gen(), r.gen(), r.gen());
    let bases_before = bits(rng);
    let runs: u32 = rng.gen_range(1..=u32::from(bases_before.runners()) + 1);
    let diff_before: i32 = if last { rng.gen_range(-8..=0) } else { rng.gen_range(-8..=8) };
    let sign = if team == Team::Home { 1 } else { -1 };
    let diff_after = diff_before + sign * runs as i32;
    let mut outs_after = outs_before + u8::from(rng.gen_bool(0.3));
    if last && outs_after == 3 && diff_after == 0 {
        outs_after = outs_before;
    }
    let terminal_after = last && diff_after > 0 || last && outs_after == 3;
    EventRecord {
        game_id: format!("r{game:04}"),
        event_id: format!("e{idx:03}"),
        batter_id: format!("b{:02}", rng.gen_range(0..40)),
        batter_name: String::new(),
        batting_team: team,
        inning,
        half,
        outs_before,
        outs_after,
        bases_before,
        bases_after: bits(rng),
        score_diff_before: diff_before,
        score_diff_after: diff_after,
        runs_scored: runs,
        terminal_after,
    }
}
