use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::pchip::{build_curve, CurveError, WeCurve};
use super::state::StateKey;
use super::table::WeTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LookupError {
    #[error("no win-expectancy row for {0}")]
    UnknownState(StateKey),
    #[error("cannot build curve for {state}: {source}")]
    Curve {
        state: StateKey,
        #[source]
        source: CurveError,
    },
}

/// Source of home-team win expectancy.
pub trait WinExpectancy {
    fn home_we(&self, state: &StateKey, score_diff: f64) -> Result<f64, LookupError>;
}

/// A [`WeTable`] plus its per-state curves, built lazily on first use.
///
/// Safe to share between threads; each curve is built at most once.
#[derive(Debug)]
pub struct WeModel {
    table: WeTable,
    curves: BTreeMap<StateKey, OnceLock<Result<WeCurve, CurveError>>>,
}

impl WeModel {
    pub fn new(table: WeTable) -> WeModel {
        let curves = table.states().map(|s| (*s, OnceLock::new())).collect();
        WeModel { table, curves }
    }

    pub fn table(&self) -> &WeTable {
        &self.table
    }

    pub fn curve(&self, state: &StateKey) -> Result<&WeCurve, LookupError> {
        let cell = self
            .curves
            .get(state)
            .ok_or(LookupError::UnknownState(*state))?;
        cell.get_or_init(|| {
            let knots: Vec<(f64, f64)> = self
                .table
                .get(state)
                .unwrap_or_default()
                .iter()
                .map(|k| (f64::from(k.diff), k.we))
                .collect();
            build_curve(&knots)
        })
        .as_ref()
        .map_err(|e| LookupError::Curve {
            state: *state,
            source: e.clone(),
        })
    }

    /// Builds every curve up front.
    pub fn precompute(&self) -> Result<(), LookupError> {
        self.curves.keys().try_for_each(|s| self.curve(s).map(|_| ()))
    }

    /// Home win expectancy. Integer differentials that are table cells return the
    /// stored value; everything else goes through the state's curve.
    pub fn lookup_we(&self, state: &StateKey, score_diff: f64) -> Result<f64, LookupError> {
        if !self.curves.contains_key(state) {
            return Err(LookupError::UnknownState(*state));
        }
        if score_diff.fract() == 0.0 && score_diff.abs() <= f64::from(i32::MAX) {
            if let Some(we) = self.table.cell(state, score_diff as i32) {
                return Ok(we);
            }
        }
        Ok(self.curve(state)?.eval(score_diff))
    }
}

impl WinExpectancy for WeModel {
    fn home_we(&self, state: &StateKey, score_diff: f64) -> Result<f64, LookupError> {
        self.lookup_we(state, score_diff)
    }
}
