//! Scoring-event CSV reader and writer.
//!
//! One row per plate appearance on which runs scored:
//!
//! ```text
//! game_id,event_id,batter_id,batter_name,batting_team,inning,half,outs_before,outs_after,
//! bases_before,bases_after,score_diff_before,score_diff_after,runs_scored,terminal_after
//! ```
//!
//! Bases are three `0`/`1` characters for first, second and third base.
//! Score differentials are home minus away. `outs_after = 3` means the
//! half-inning ended on the play; the after-state is then the first state of
//! the next half-inning.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};

use thiserror::Error;

use crate::game::{GameError, GameState, ScoringEvent, Team};
use crate::we_model::{Bases, Half, StateKey, MAX_INNING};

pub const EVENT_HEADER: [&str; 15] = [
    "game_id",
    "event_id",
    "batter_id",
    "batter_name",
    "batting_team",
    "inning",
    "half",
    "outs_before",
    "outs_after",
    "bases_before",
    "bases_after",
    "score_diff_before",
    "score_diff_after",
    "runs_scored",
    "terminal_after",
];

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub game_id: String,
    pub event_id: String,
    pub batter_id: String,
    pub batter_name: String,
    pub batting_team: Team,
    pub inning: u8,
    pub half: Half,
    pub outs_before: u8,
    pub outs_after: u8,
    pub bases_before: Bases,
    pub bases_after: Bases,
    pub score_diff_before: i32,
    pub score_diff_after: i32,
    pub runs_scored: u32,
    pub terminal_after: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowErrorKind {
    Malformed(String),
    InconsistentScore(String),
    RangeViolation(String),
    DuplicateEvent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub kind: RowErrorKind,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, msg) = match &self.kind {
            RowErrorKind::Malformed(m) => ("malformed row", m),
            RowErrorKind::InconsistentScore(m) => ("inconsistent score", m),
            RowErrorKind::RangeViolation(m) => ("range violation", m),
            RowErrorKind::DuplicateEvent(m) => ("duplicate event", m),
        };
        write!(f, "line {}: {what}: {msg}", self.line)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("bad header: expected `{}`", EVENT_HEADER.join(","))]
    BadHeader,
    #[error("{} invalid row(s); first: {}", .0.len(), .0[0])]
    Rows(Vec<RowError>),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl EventRecord {
    fn check(&self) -> Result<(), RowErrorKind> {
        use RowErrorKind::*;
        if !(1..=MAX_INNING).contains(&self.inning) {
            return Err(RangeViolation(format!(
                "inning {} outside regulation 1..=9",
                self.inning
            )));
        }
        if self.outs_before > 2 || self.outs_after > 3 || self.outs_after < self.outs_before {
            return Err(RangeViolation(format!(
                "outs {} -> {} not allowed",
                self.outs_before, self.outs_after
            )));
        }
        if self.runs_scored == 0 {
            return Err(RangeViolation("runs_scored must be at least 1".into()));
        }
        if Team::batting_in(self.half) != self.batting_team {
            return Err(RangeViolation(format!(
                "{} team does not bat in the {} half",
                self.batting_team, self.half
            )));
        }
        let change = i64::from(self.score_diff_after) - i64::from(self.score_diff_before);
        let runs = i64::from(self.runs_scored);
        let expected = match self.batting_team {
            Team::Home => runs,
            Team::Away => -runs,
        };
        if change != expected {
            return Err(InconsistentScore(format!(
                "differential {} -> {} does not match {} run(s) by {}",
                self.score_diff_before, self.score_diff_after, self.runs_scored, self.batting_team
            )));
        }
        if self.terminal_after && self.score_diff_after == 0 {
            return Err(RangeViolation("game marked over with a tied score".into()));
        }
        if !self.terminal_after
            && self.outs_after == 3
            && self.inning == MAX_INNING
            && self.half == Half::Bottom
        {
            return Err(RangeViolation(
                "half-inning ends after the bottom of the 9th without a result (extra innings)"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Game states on both sides of the event.
    pub fn to_scoring_event(&self) -> Result<ScoringEvent, GameError> {
        let bad = |what: &str| GameError::InvalidEvent(format!("{what} in event {}", self.event_id));
        let key_before = StateKey::new(self.inning, self.half, self.outs_before, self.bases_before)
            .ok_or_else(|| bad("state before out of range"))?;
        let state_after = if self.terminal_after {
            // the after-state key is irrelevant once the game is decided
            let key = StateKey::new(
                self.inning,
                self.half,
                self.outs_after.min(2),
                self.bases_after,
            )
            .ok_or_else(|| bad("state after out of range"))?;
            GameState::finished(key, self.score_diff_after)?
        } else if self.outs_after == 3 {
            let key = key_before
                .next_half_inning()
                .ok_or_else(|| bad("no half-inning after the bottom of the 9th"))?;
            GameState::live(key, self.score_diff_after)
        } else {
            let key = StateKey::new(self.inning, self.half, self.outs_after, self.bases_after)
                .ok_or_else(|| bad("state after out of range"))?;
            GameState::live(key, self.score_diff_after)
        };
        let event = ScoringEvent {
            event_id: self.event_id.clone(),
            game_id: self.game_id.clone(),
            batter_id: self.batter_id.clone(),
            batting_team: self.batting_team,
            state_before: GameState::live(key_before, self.score_diff_before),
            state_after,
            runs_scored: self.runs_scored,
        };
        event.validate()?;
        Ok(event)
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

fn parse_record(record: &csv::StringRecord) -> Result<EventRecord, RowErrorKind> {
    fn num<T: std::str::FromStr>(record: &csv::StringRecord, i: usize) -> Result<T, RowErrorKind> {
        record[i].parse().map_err(|_| {
            RowErrorKind::Malformed(format!("{} = `{}` is not a valid number", EVENT_HEADER[i], &record[i]))
        })
    }
    let text = |i: usize| -> Result<String, RowErrorKind> {
        if record[i].is_empty() {
            Err(RowErrorKind::Malformed(format!("{} is empty", EVENT_HEADER[i])))
        } else {
            Ok(record[i].to_string())
        }
    };
    let bases = |i: usize| {
        Bases::from_bits(&record[i]).ok_or_else(|| {
            RowErrorKind::Malformed(format!("{} = `{}` is not a 3-bit base state", EVENT_HEADER[i], &record[i]))
        })
    };

    Ok(EventRecord {
        game_id: text(0)?,
        event_id: text(1)?,
        batter_id: text(2)?,
        batter_name: record[3].to_string(),
        batting_team: record[4].parse().map_err(RowErrorKind::Malformed)?,
        inning: num(record, 5)?,
        half: record[6].parse().map_err(RowErrorKind::Malformed)?,
        outs_before: num(record, 7)?,
        outs_after: num(record, 8)?,
        bases_before: bases(9)?,
        bases_after: bases(10)?,
        score_diff_before: num(record, 11)?,
        score_diff_after: num(record, 12)?,
        runs_scored: num(record, 13)?,
        terminal_after: parse_bool(&record[14]).ok_or_else(|| {
            RowErrorKind::Malformed(format!("terminal_after = `{}` is not a boolean", &record[14]))
        })?,
    })
}

/// Reads and validates every row. Returns all row errors, with line numbers, if any row fails.
pub fn parse_events<R: Read>(source: R) -> Result<Vec<EventRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = reader.headers()?;
    if header.len() != EVENT_HEADER.len() || header.iter().zip(EVENT_HEADER).any(|(a, b)| a != b) {
        return Err(IngestError::BadHeader);
    }

    let mut events = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != EVENT_HEADER.len() {
            errors.push(RowError {
                line,
                kind: RowErrorKind::Malformed(format!(
                    "expected {} columns, found {}",
                    EVENT_HEADER.len(),
                    record.len()
                )),
            });
            continue;
        }
        let parsed = parse_record(&record).and_then(|ev| {
            ev.check()?;
            if !seen.insert((ev.game_id.clone(), ev.event_id.clone())) {
                return Err(RowErrorKind::DuplicateEvent(format!(
                    "{}/{} appears more than once",
                    ev.game_id, ev.event_id
                )));
            }
            Ok(ev)
        });
        match parsed {
            Ok(ev) => events.push(ev),
            Err(kind) => errors.push(RowError { line, kind }),
        }
    }
    if errors.is_empty() {
        Ok(events)
    } else {
        Err(IngestError::Rows(errors))
    }
}

/// Writes records in the same format [`parse_events`] reads.
pub fn write_events<W: Write>(sink: W, events: &[EventRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(EVENT_HEADER)?;
    for e in events {
        w.write_record([
            e.game_id.as_str(),
            &e.event_id,
            &e.batter_id,
            &e.batter_name,
            e.batting_team.as_str(),
            &e.inning.to_string(),
            e.half.as_str(),
            &e.outs_before.to_string(),
            &e.outs_after.to_string(),
            &e.bases_before.to_bits(),
            &e.bases_after.to_bits(),
            &e.score_diff_before.to_string(),
            &e.score_diff_after.to_string(),
            &e.runs_scored.to_string(),
            if e.terminal_after { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}
