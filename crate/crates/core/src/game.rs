//! Game states, scoring events and the batting team's change in win expectancy.
//!
//! Table values are from the home team's point of view; everything here is
//! converted to the batting team's point of view. Runs are credited to the
//! batter of record for every run that scores during his plate appearance,
//! including runs on errors, wild pitches and double plays. Deciding which
//! plate appearance a run belongs to is left to whoever produces the events.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::we_model::{Half, LookupError, StateKey, WinExpectancy};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Team {
    Home,
    Away,
}

impl Team {
    /// The team at bat in the given half-inning.
    pub fn batting_in(half: Half) -> Team {
        match half {
            Half::Top => Team::Away,
            Half::Bottom => Team::Home,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Team::Home => "Home",
            Team::Away => "Away",
        }
    }

    /// +1 when runs by this team raise the home-minus-away differential.
    fn sign(self) -> i64 {
        match self {
            Team::Home => 1,
            Team::Away => -1,
        }
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Team {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "home" => Ok(Team::Home),
            "away" => Ok(Team::Away),
            other => Err(format!("unknown team `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameState {
    pub key: StateKey,
    /// Home minus away.
    pub score_diff: i32,
    /// The game is over; the sign of `score_diff` names the winner.
    pub terminal: bool,
}

impl GameState {
    pub fn live(key: StateKey, score_diff: i32) -> GameState {
        GameState {
            key,
            score_diff,
            terminal: false,
        }
    }

    /// A finished game. Regulation games cannot end tied.
    pub fn finished(key: StateKey, score_diff: i32) -> Result<GameState, GameError> {
        if score_diff == 0 {
            return Err(GameError::InvalidEvent(
                "a finished game needs a winner (score differential 0)".into(),
            ));
        }
        Ok(GameState {
            key,
            score_diff,
            terminal: true,
        })
    }
}

/// Win expectancy of `team` in `state`. Finished games return exactly 1 or 0.
pub fn batting_team_we<M>(model: &M, state: &GameState, team: Team) -> Result<f64, GameError>
where
    M: WinExpectancy + ?Sized,
{
    let home = if state.terminal {
        match state.score_diff {
            d if d > 0 => 1.0,
            d if d < 0 => 0.0,
            _ => {
                return Err(GameError::InvalidEvent(
                    "finished game with a tied score".into(),
                ))
            }
        }
    } else {
        model.home_we(&state.key, f64::from(state.score_diff))?
    };
    Ok(match team {
        Team::Home => home,
        Team::Away => 1.0 - home,
    })
}

/// One plate appearance on which at least one run scored.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringEvent {
    pub event_id: String,
    pub game_id: String,
    pub batter_id: String,
    pub batting_team: Team,
    pub state_before: GameState,
    pub state_after: GameState,
    pub runs_scored: u32,
}

impl ScoringEvent {
    /// Checks that the event is internally consistent.
    pub fn validate(&self) -> Result<(), GameError> {
        let bad = |msg: String| Err(GameError::InvalidEvent(msg));
        if self.runs_scored == 0 {
            return bad("runs_scored must be at least 1".into());
        }
        if self.state_before.terminal {
            return bad("event starts from a finished game".into());
        }
        if Team::batting_in(self.state_before.key.half) != self.batting_team {
            return bad(format!(
                "{} team cannot bat in the {} half",
                self.batting_team, self.state_before.key.half
            ));
        }
        let change =
            i64::from(self.state_after.score_diff) - i64::from(self.state_before.score_diff);
        let expected = self.batting_team.sign() * i64::from(self.runs_scored);
        if change != expected {
            return bad(format!(
                "score differential moved by {change}, expected {expected} for {} runs by {}",
                self.runs_scored, self.batting_team
            ));
        }
        Ok(())
    }
}

/// Win expectancy of the batting team before and after an event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaWe {
    pub we_start: f64,
    pub we_end: f64,
    /// `we_end - we_start`: positive when the event helped the batting team.
    pub delta: f64,
}

impl DeltaWe {
    pub fn new(we_start: f64, we_end: f64) -> DeltaWe {
        DeltaWe {
            we_start,
            we_end,
            delta: we_end - we_start,
        }
    }
}

pub fn compute_delta_we<M>(model: &M, event: &ScoringEvent) -> Result<DeltaWe, GameError>
where
    M: WinExpectancy + ?Sized,
{
    let start = batting_team_we(model, &event.state_before, event.batting_team)?;
    let end = batting_team_we(model, &event.state_after, event.batting_team)?;
    Ok(DeltaWe::new(start, end))
}

/// Every run that scored on the event is credited to its batter.
pub fn credit_rbis(event: &ScoringEvent) -> (&str, u32) {
    (&event.batter_id, event.runs_scored)
}
