//! Guide functions ranking search nodes. Lower is better.
//!
//! Values are exact rationals; nodes whose guide is undefined (the root, or a
//! knapsack node without profit) rank ahead of every defined value.

use std::cmp::{Ordering, Reverse};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, GuideError};
use crate::state::PatternState;

pub type GuideValue = Ratio<u128>;

/// Additive constant of c2 and c3, as `KAPPA_NUM / KAPPA_DEN`.
pub const KAPPA_NUM: u128 = 1;
pub const KAPPA_DEN: u128 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuideId {
    C0,
    C1,
    C2,
    C3,
    C4,
}

impl GuideId {
    pub const ALL: [GuideId; 5] = [GuideId::C0, GuideId::C1, GuideId::C2, GuideId::C3, GuideId::C4];

    pub fn index(&self) -> u8 {
        match self {
            GuideId::C0 => 0,
            GuideId::C1 => 1,
            GuideId::C2 => 2,
            GuideId::C3 => 3,
            GuideId::C4 => 4,
        }
    }
}

impl fmt::Display for GuideId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.index())
    }
}

impl FromStr for GuideId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "c0" | "0" => Ok(GuideId::C0),
            "c1" | "1" => Ok(GuideId::C1),
            "c2" | "2" => Ok(GuideId::C2),
            "c3" | "3" => Ok(GuideId::C3),
            "c4" | "4" => Ok(GuideId::C4),
            _ => Err(ConfigError::Parse(format!("unknown guide '{s}'"))),
        }
    }
}

fn ratio(num: u128, den: u128) -> GuideValue {
    Ratio::new(num, den)
}

/// Evaluates guide `g` on `state`.
///
/// * c0 = waste / area
/// * c1 = c0 / mean item area
/// * c2 = (1/10 + c0) / mean item area
/// * c3 = (1/10 + c0) / mean squared item area
/// * c4 = area / profit
pub fn guide_value(g: GuideId, state: &PatternState) -> Result<GuideValue, GuideError> {
    let area = state.area() as u128;
    let waste = state.waste() as u128;
    let count = state.item_count() as u128;
    let item_area = state.item_area() as u128;
    if g == GuideId::C4 {
        let profit = state.profit();
        if profit <= 0 {
            return Err(GuideError::UndefinedGuide("zero profit"));
        }
        if area == 0 {
            return Err(GuideError::UndefinedGuide("zero area"));
        }
        return Ok(ratio(area, profit as u128));
    }
    if area == 0 || count == 0 {
        return Err(GuideError::UndefinedGuide("empty solution"));
    }
    let waste_ratio = ratio(waste, area);
    let kappa_plus = || ratio(KAPPA_NUM, KAPPA_DEN) + waste_ratio;
    Ok(match g {
        GuideId::C0 => waste_ratio,
        GuideId::C1 => waste_ratio * ratio(count, item_area),
        GuideId::C2 => kappa_plus() * ratio(count, item_area),
        GuideId::C3 => kappa_plus() * ratio(count, state.sum_squared_item_area()),
        GuideId::C4 => unreachable!(),
    })
}

/// Guide value with undefined values ordered first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GuideKey {
    Undefined,
    Value(GuideValue),
}

impl GuideKey {
    pub fn of(g: GuideId, state: &PatternState) -> Self {
        match guide_value(g, state) {
            Ok(v) => GuideKey::Value(v),
            Err(_) => GuideKey::Undefined,
        }
    }
}

/// Strict total order on nodes of one search: guide value ascending, then more
/// items, then more item area, then earlier creation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeKey {
    pub guide: GuideKey,
    pub item_count: Reverse<u64>,
    pub item_area: Reverse<i64>,
    pub seq: u64,
}

impl NodeKey {
    pub fn of(g: GuideId, state: &PatternState) -> Self {
        Self {
            guide: GuideKey::of(g, state),
            item_count: Reverse(state.item_count()),
            item_area: Reverse(state.item_area()),
            seq: state.seq(),
        }
    }
}

/// `Less` when `a` should be expanded before `b`.
pub fn compare(g: GuideId, a: &PatternState, b: &PatternState) -> Ordering {
    NodeKey::of(g, a).cmp(&NodeKey::of(g, b))
}
