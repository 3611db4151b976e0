use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Last regulation inning covered by the model.
pub const MAX_INNING: u8 = 9;
/// Highest out count of an in-play state.
pub const MAX_OUTS: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Half {
    Top,
    Bottom,
}

impl Half {
    pub fn as_str(self) -> &'static str {
        match self {
            Half::Top => "Top",
            Half::Bottom => "Bottom",
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Half {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "top" => Ok(Half::Top),
            "bottom" | "bot" => Ok(Half::Bottom),
            other => Err(format!("unknown half-inning `{other}`")),
        }
    }
}

/// Runner occupancy of first, second and third base.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bases {
    pub first: bool,
    pub second: bool,
    pub third: bool,
}

impl Bases {
    pub const EMPTY: Bases = Bases::new(false, false, false);
    pub const LOADED: Bases = Bases::new(true, true, true);

    pub const fn new(first: bool, second: bool, third: bool) -> Self {
        Bases {
            first,
            second,
            third,
        }
    }

    pub fn runners(self) -> u8 {
        self.first as u8 + self.second as u8 + self.third as u8
    }

    /// Parses the 3-character `0`/`1` encoding, first base leftmost (`101` = 1st and 3rd).
    pub fn from_bits(s: &str) -> Option<Bases> {
        let b = s.trim().as_bytes();
        if b.len() != 3 {
            return None;
        }
        let bit = |c: u8| match c {
            b'0' => Some(false),
            b'1' => Some(true),
            _ => None,
        };
        Some(Bases::new(bit(b[0])?, bit(b[1])?, bit(b[2])?))
    }

    pub fn to_bits(self) -> String {
        [self.first, self.second, self.third]
            .iter()
            .map(|&on| if on { '1' } else { '0' })
            .collect()
    }

    /// Parses a table label such as `Empty`, `1B Only`, `1B 3B` or `Loaded`.
    /// Case and inner whitespace are normalized.
    pub fn from_label(s: &str) -> Option<Bases> {
        let norm = s
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
            .to_ascii_lowercase();
        let bases = match norm.as_str() {
            "empty" => Bases::EMPTY,
            "1b only" => Bases::new(true, false, false),
            "2b only" => Bases::new(false, true, false),
            "3b only" => Bases::new(false, false, true),
            "1b 2b" => Bases::new(true, true, false),
            "1b 3b" => Bases::new(true, false, true),
            "2b 3b" => Bases::new(false, true, true),
            "loaded" => Bases::LOADED,
            _ => return None,
        };
        Some(bases)
    }

    pub fn label(self) -> &'static str {
        match (self.first, self.second, self.third) {
            (false, false, false) => "Empty",
            (true, false, false) => "1B Only",
            (false, true, false) => "2B Only",
            (false, false, true) => "3B Only",
            (true, true, false) => "1B 2B",
            (true, false, true) => "1B 3B",
            (false, true, true) => "2B 3B",
            (true, true, true) => "Loaded",
        }
    }

    pub fn all() -> impl Iterator<Item = Bases> {
        (0u8..8).map(|b| Bases::new(b & 1 != 0, b & 2 != 0, b & 4 != 0))
    }
}

impl fmt::Display for Bases {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Inning, half, outs and base occupancy: everything but the score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub inning: u8,
    pub half: Half,
    pub outs: u8,
    pub bases: Bases,
}

impl StateKey {
    /// Returns `None` when the inning is outside 1..=9 or outs outside 0..=2.
    pub fn new(inning: u8, half: Half, outs: u8, bases: Bases) -> Option<StateKey> {
        if !(1..=MAX_INNING).contains(&inning) || outs > MAX_OUTS {
            return None;
        }
        Some(StateKey {
            inning,
            half,
            outs,
            bases,
        })
    }

    /// First state of the following half-inning, or `None` past the bottom of the 9th.
    pub fn next_half_inning(self) -> Option<StateKey> {
        let (inning, half) = match self.half {
            Half::Top => (self.inning, Half::Bottom),
            Half::Bottom => (self.inning + 1, Half::Top),
        };
        StateKey::new(inning, half, 0, Bases::EMPTY)
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}, {} out, {}",
            self.half, self.inning, self.outs, self.bases
        )
    }
}
