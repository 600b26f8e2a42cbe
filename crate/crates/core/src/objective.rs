use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::Objective;

/// Objective value with its tie-break.
///
/// * bin packing: `primary` = bins used (minimized), `secondary` = waste (minimized)
/// * knapsack: `primary` = profit (maximized), `secondary` = area (minimized)
/// * strip packing: `primary` = used strip length (minimized), `secondary` = waste (minimized)
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub objective: Objective,
    pub primary: i64,
    pub secondary: i64,
}

impl ObjectiveValue {
    pub fn new(objective: Objective, primary: i64, secondary: i64) -> Self {
        Self {
            objective,
            primary,
            secondary,
        }
    }

    /// `Less` means `self` is the better solution.
    pub fn rank(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.objective, other.objective);
        let primary = match self.objective {
            Objective::Knapsack => other.primary.cmp(&self.primary),
            _ => self.primary.cmp(&other.primary),
        };
        primary.then(self.secondary.cmp(&other.secondary))
    }

    pub fn is_better_than(&self, other: &Self) -> bool {
        self.rank(other) == Ordering::Less
    }
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.primary)
    }
}
