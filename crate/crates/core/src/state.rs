//! Search nodes: partial staged patterns with their front coordinates and
//! cached aggregates.
//!
//! Coordinates of the open bin are kept in a canonical frame in which the
//! level-one cuts are vertical: level-one sub-plates run left to right,
//! level-two sub-plates bottom to top inside them, and level-three sub-plates
//! left to right inside those. Bins whose real layout differs are stored
//! transposed; [`Placement`] always carries real coordinates.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::instance::{Area, CutOrientation, Exactness, Instance, Length, Objective, Profit};
use crate::objective::ObjectiveValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionKind {
    NewBinV,
    NewBinH,
    NewFirstLevel,
    NewSecondLevel,
    NewThirdLevel,
}

impl InsertionKind {
    pub fn opens_bin(&self) -> bool {
        matches!(self, InsertionKind::NewBinV | InsertionKind::NewBinH)
    }

    /// Sub-plate level whose sibling list this insertion extends, if any.
    /// A new bin starts every level afresh.
    pub fn level(&self) -> Option<usize> {
        match self {
            InsertionKind::NewBinV | InsertionKind::NewBinH => None,
            InsertionKind::NewFirstLevel => Some(1),
            InsertionKind::NewSecondLevel => Some(2),
            InsertionKind::NewThirdLevel => Some(3),
        }
    }
}

/// Boundaries of the last level-one, level-two and level-three sub-plates,
/// in the canonical frame of the open bin.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Front {
    pub x1_prev: Length,
    pub x1_curr: Length,
    pub y2_prev: Length,
    pub y2_curr: Length,
    pub x3_prev: Length,
    pub x3_curr: Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpenBin {
    /// Ordinal of the bin among the bins opened so far.
    pub index: usize,
    pub bin_type: usize,
    /// Real direction of the first-stage cuts.
    pub orientation: CutOrientation,
    /// Whether canonical coordinates are the transpose of real ones.
    pub transposed: bool,
    /// Canonical extents.
    pub width: Length,
    pub height: Length,
}

/// One placed item copy, in real bin coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub item: usize,
    pub bin: usize,
    pub x: Length,
    pub y: Length,
    pub w: Length,
    pub h: Length,
    pub rotated: bool,
    pub kind: InsertionKind,
}

impl Placement {
    pub fn area(&self) -> Area {
        self.w * self.h
    }
}

#[derive(Debug, Clone)]
pub struct PatternState {
    pub(crate) parent: Option<Arc<PatternState>>,
    pub(crate) last: Option<Placement>,
    pub(crate) seq: u64,
    pub(crate) depth: u64,
    pub(crate) bins_used: usize,
    pub(crate) current_bin: Option<OpenBin>,
    pub(crate) prev_bins_area: Area,
    pub(crate) front: Front,
    pub(crate) item_area: Area,
    pub(crate) item_profit: Profit,
    pub(crate) sum_squared_item_area: u128,
    pub(crate) used_copies: Vec<u32>,
    /// Smallest symmetry index in the current level-1/2/3 sub-plates.
    pub(crate) sym_min: [usize; 3],
    /// Largest real `y + h` over placed items.
    pub(crate) strip_extent: Length,
    pub(crate) complete: bool,
}

impl PatternState {
    /// The empty solution.
    pub fn root(instance: &Instance) -> Self {
        Self {
            parent: None,
            last: None,
            seq: 0,
            depth: 0,
            bins_used: 0,
            current_bin: None,
            prev_bins_area: 0,
            front: Front::default(),
            item_area: 0,
            item_profit: 0,
            sum_squared_item_area: 0,
            used_copies: vec![0; instance.items().len()],
            sym_min: [usize::MAX; 3],
            strip_extent: 0,
            complete: false,
        }
    }

    pub fn parent(&self) -> Option<&Arc<PatternState>> {
        self.parent.as_ref()
    }

    pub fn last_placement(&self) -> Option<&Placement> {
        self.last.as_ref()
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }

    pub fn front(&self) -> Front {
        self.front
    }

    pub fn current_bin(&self) -> Option<&OpenBin> {
        self.current_bin.as_ref()
    }

    pub fn bins_used(&self) -> usize {
        self.bins_used
    }

    /// Sum of the areas of all bins but the open one.
    pub fn prev_bins_area(&self) -> Area {
        self.prev_bins_area
    }

    pub fn item_area(&self) -> Area {
        self.item_area
    }

    pub fn profit(&self) -> Profit {
        self.item_profit
    }

    pub fn item_count(&self) -> u64 {
        self.depth
    }

    pub fn sum_squared_item_area(&self) -> u128 {
        self.sum_squared_item_area
    }

    pub fn used_copies(&self, item: usize) -> u32 {
        self.used_copies[item]
    }

    pub fn strip_extent(&self) -> Length {
        self.strip_extent
    }

    /// Whether every copy of every item has been placed.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Height of the current level-two sub-plate once it is fixed by an
    /// exact-cut insertion.
    pub fn fixed_row_height(&self, exactness: Exactness) -> Option<Length> {
        match (exactness, self.current_bin) {
            (Exactness::Exact, Some(_)) => Some(self.front.y2_curr - self.front.y2_prev),
            _ => None,
        }
    }

    /// Area committed by the partial pattern.
    pub fn area(&self) -> Area {
        let Some(bin) = self.current_bin else {
            return self.prev_bins_area;
        };
        let f = &self.front;
        let h = bin.height;
        if self.complete {
            self.prev_bins_area + f.x1_curr * h
        } else {
            self.prev_bins_area
                + f.x1_prev * h
                + (f.x1_curr - f.x1_prev) * f.y2_prev
                + (f.x3_curr - f.x1_prev) * (f.y2_curr - f.y2_prev)
        }
    }

    pub fn waste(&self) -> Area {
        self.area() - self.item_area
    }

    /// Objective value of this node read as a solution.
    pub fn objective_value(&self, objective: Objective) -> ObjectiveValue {
        match objective {
            Objective::BinPacking => ObjectiveValue::new(
                objective,
                self.bins_used as i64,
                self.waste(),
            ),
            Objective::Knapsack => ObjectiveValue::new(objective, self.item_profit, self.area()),
            Objective::StripPacking => {
                ObjectiveValue::new(objective, self.strip_extent, self.waste())
            }
        }
    }

    /// Placements from the root to this node, in insertion order.
    pub fn placements(&self) -> Vec<Placement> {
        let mut out = Vec::with_capacity(self.depth as usize);
        let mut node = Some(self);
        while let Some(n) = node {
            if let Some(p) = n.last {
                out.push(p);
            }
            node = n.parent.as_deref();
        }
        out.reverse();
        out
    }

    /// Open bins from the root to this node: (ordinal, bin type, real first-stage
    /// orientation, transposed).
    pub fn bin_history(&self) -> Vec<OpenBin> {
        let mut out = Vec::new();
        let mut node = Some(self);
        while let Some(n) = node {
            if let (Some(p), Some(bin)) = (n.last, n.current_bin) {
                if p.kind.opens_bin() {
                    out.push(bin);
                }
            }
            node = n.parent.as_deref();
        }
        out.reverse();
        out
    }

    pub fn solution(&self, instance: &Instance) -> Solution {
        Solution {
            bins: self
                .bin_history()
                .into_iter()
                .map(|b| SolutionBin {
                    bin_type: b.bin_type,
                    orientation: b.orientation,
                    transposed: b.transposed,
                })
                .collect(),
            placements: self.placements(),
            value: self.objective_value(instance.objective()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionBin {
    pub bin_type: usize,
    pub orientation: CutOrientation,
    pub transposed: bool,
}

/// A materialized solution extracted from a search node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub bins: Vec<SolutionBin>,
    pub placements: Vec<Placement>,
    pub value: ObjectiveValue,
}
