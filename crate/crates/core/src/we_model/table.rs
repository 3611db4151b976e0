use std::collections::BTreeMap;
use std::io::Read;

use thiserror::Error;

use super::state::{Bases, Half, StateKey};

/// Score differentials (home minus away) covered by the table columns.
pub const TABLE_DIFFS: [i32; 11] = [-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5];

/// Expected CSV header, one column per differential in [`TABLE_DIFFS`].
pub const TABLE_HEADER: [&str; 15] = [
    "inning", "half", "outs", "runners", "m5", "m4", "m3", "m2", "m1", "tie", "p1", "p2", "p3",
    "p4", "p5",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub diff: i32,
    pub we: f64,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: win expectancy decreases with score differential for {state}")]
    NonMonotoneRow { line: u64, state: StateKey },
    #[error("line {line}: duplicate state {state}")]
    DuplicateState { line: u64, state: StateKey },
    #[error("bad header: expected `{}`", TABLE_HEADER.join(","))]
    BadHeader,
    #[error("{state} has {count} knots, need at least 2")]
    TooFewKnots { state: StateKey, count: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Empirical home-team win expectancy by game state and score differential.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeTable {
    entries: BTreeMap<StateKey, Vec<Knot>>,
}

impl WeTable {
    /// Builds a table from knot rows, checking the same invariants as the CSV reader.
    ///
    /// Knots are sorted by differential; `line` numbers in errors are 1-based row indices.
    pub fn from_rows<I>(rows: I) -> Result<WeTable, TableError>
    where
        I: IntoIterator<Item = (StateKey, Vec<Knot>)>,
    {
        let mut table = WeTable::default();
        for (i, (state, knots)) in rows.into_iter().enumerate() {
            table.insert(i as u64 + 1, state, knots)?;
        }
        Ok(table)
    }

    fn insert(&mut self, line: u64, state: StateKey, mut knots: Vec<Knot>) -> Result<(), TableError> {
        knots.sort_by_key(|k| k.diff);
        if knots.len() < 2 {
            return Err(TableError::TooFewKnots {
                state,
                count: knots.len(),
            });
        }
        for k in &knots {
            if !(0.0..=1.0).contains(&k.we) {
                return Err(TableError::MalformedRow {
                    line,
                    reason: format!("win expectancy {} outside [0, 1]", k.we),
                });
            }
        }
        if knots.windows(2).any(|w| w[0].diff == w[1].diff) {
            return Err(TableError::MalformedRow {
                line,
                reason: "repeated score differential".into(),
            });
        }
        if knots.windows(2).any(|w| w[1].we < w[0].we) {
            return Err(TableError::NonMonotoneRow { line, state });
        }
        if self.entries.contains_key(&state) {
            return Err(TableError::DuplicateState { line, state });
        }
        self.entries.insert(state, knots);
        Ok(())
    }

    pub fn get(&self, state: &StateKey) -> Option<&[Knot]> {
        self.entries.get(state).map(Vec::as_slice)
    }

    /// Table value for an exact integer differential, if that cell exists.
    pub fn cell(&self, state: &StateKey, diff: i32) -> Option<f64> {
        let knots = self.get(state)?;
        knots
            .binary_search_by_key(&diff, |k| k.diff)
            .ok()
            .map(|i| knots[i].we)
    }

    pub fn states(&self) -> impl Iterator<Item = &StateKey> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateKey, &[Knot])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads the WE table CSV (`inning,half,outs,runners,m5,...,tie,...,p5`).
pub fn parse_we_table<R: Read>(source: R) -> Result<WeTable, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader.headers()?;
    if header.len() != TABLE_HEADER.len()
        || header
            .iter()
            .zip(TABLE_HEADER)
            .any(|(got, want)| !got.eq_ignore_ascii_case(want))
    {
        return Err(TableError::BadHeader);
    }

    let mut table = WeTable::default();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |reason: String| TableError::MalformedRow { line, reason };

        if record.len() != TABLE_HEADER.len() {
            return Err(malformed(format!(
                "expected {} columns, found {}",
                TABLE_HEADER.len(),
                record.len()
            )));
        }
        let inning: u8 = record[0]
            .parse()
            .map_err(|_| malformed(format!("bad inning `{}`", &record[0])))?;
        let half: Half = record[1].parse().map_err(malformed)?;
        let outs: u8 = record[2]
            .parse()
            .map_err(|_| malformed(format!("bad outs `{}`", &record[2])))?;
        let bases = Bases::from_label(&record[3])
            .ok_or_else(|| malformed(format!("unknown runners label `{}`", &record[3])))?;
        let state = StateKey::new(inning, half, outs, bases).ok_or_else(|| {
            malformed(format!("inning {inning} / outs {outs} outside the 9-inning grid"))
        })?;

        let mut knots = Vec::with_capacity(TABLE_DIFFS.len());
        for (cell, diff) in record.iter().skip(4).zip(TABLE_DIFFS) {
            if cell.is_empty() {
                return Err(malformed(format!("missing value for diff {diff}")));
            }
            let we: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| malformed(format!("non-numeric win expectancy `{cell}`")))?;
            knots.push(Knot { diff, we });
        }
        table.insert(line, state, knots)?;
    }
    Ok(table)
}
