//! Empirical win-expectancy table and its smooth extension to every score differential.

mod lookup;
mod pchip;
mod state;
mod table;

pub use lookup::{LookupError, WeModel, WinExpectancy};
pub use pchip::{build_curve, compute_slopes, CurveError, Tail, WeCurve};
pub use state::{Bases, Half, StateKey, MAX_INNING, MAX_OUTS};
pub use table::{parse_we_table, Knot, TableError, WeTable, TABLE_DIFFS, TABLE_HEADER};
