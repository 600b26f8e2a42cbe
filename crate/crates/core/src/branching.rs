//! Child generation for staged guillotine patterns.
//!
//! A child adds one item copy to its parent, either in a new bin, in a new
//! level-one sub-plate right of the current one, in a new level-two sub-plate
//! above the current one, or in a new level-three sub-plate right of the last
//! placed item. Identical items are consumed in index order, rotated twins of
//! square items are skipped, and the symmetry and dominance filters below
//! prune the rest.

use std::sync::Arc;

use crate::instance::{CutOrientation, Exactness, Instance, Length, Objective, Stages};
use crate::state::{Front, InsertionKind, OpenBin, PatternState, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchingOptions {
    /// Symmetry breaking applies to sub-plate levels `>= symmetry_depth`;
    /// 4 disables it.
    pub symmetry_depth: u8,
    /// Enables the dominance filters.
    pub dominance: bool,
}

impl Default for BranchingOptions {
    fn default() -> Self {
        Self {
            symmetry_depth: 2,
            dominance: true,
        }
    }
}

/// One branching decision, with the front it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub item: usize,
    pub rotated: bool,
    pub kind: InsertionKind,
    /// Front of the child.
    pub front: Front,
    /// Canonical position and extents of the item.
    pub x: Length,
    pub y: Length,
    pub w: Length,
    pub h: Length,
    /// Bin opened by a new-bin insertion.
    pub new_bin: Option<OpenBin>,
}

/// Whether bins opened with first-stage cuts `orientation` are stored transposed.
///
/// In three stages the level-one cuts are the first-stage cuts. In two stages
/// the level-one sub-plate spans the whole bin, so the real first stage is the
/// level-two cuts, which are horizontal in the canonical frame.
pub fn is_transposed(stages: Stages, orientation: CutOrientation) -> bool {
    match stages {
        Stages::Three => orientation == CutOrientation::Horizontal,
        Stages::Two => orientation == CutOrientation::Vertical,
    }
}

#[derive(Debug, Clone)]
pub struct BranchingScheme<'a> {
    instance: &'a Instance,
    options: BranchingOptions,
}

impl<'a> BranchingScheme<'a> {
    pub fn new(instance: &'a Instance, options: BranchingOptions) -> Self {
        Self { instance, options }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn options(&self) -> BranchingOptions {
        self.options
    }

    pub fn root(&self) -> Arc<PatternState> {
        Arc::new(PatternState::root(self.instance))
    }

    fn item_dims(&self, item: usize, rotated: bool, transposed: bool) -> (Length, Length) {
        let it = self.instance.item(item);
        let (w, h) = if rotated {
            (it.height, it.width)
        } else {
            (it.width, it.height)
        };
        if transposed {
            (h, w)
        } else {
            (w, h)
        }
    }

    fn open_bin(&self, node: &PatternState, orientation: CutOrientation) -> Option<OpenBin> {
        let bin_type = self.instance.bin_type_at(node.bins_used)?;
        let bin = self.instance.bin(bin_type);
        let transposed = is_transposed(self.instance.variant().stages, orientation);
        let (width, height) = if transposed {
            (bin.height, bin.width)
        } else {
            (bin.width, bin.height)
        };
        Some(OpenBin {
            index: node.bins_used,
            bin_type,
            orientation,
            transposed,
            width,
            height,
        })
    }

    /// Geometric insertion of `item` at the structural position `kind`, without
    /// any filter. `None` when the item does not fit there.
    pub fn insertion(
        &self,
        node: &PatternState,
        item: usize,
        rotated: bool,
        kind: InsertionKind,
    ) -> Option<Insertion> {
        if node.used_copies[item] >= self.instance.item(item).copies {
            return None;
        }
        if rotated && !self.instance.can_rotate(item) {
            return None;
        }
        let variant = self.instance.variant();
        let two_staged = variant.stages == Stages::Two;
        let exact = variant.exactness == Exactness::Exact;
        let f = node.front;
        match kind {
            InsertionKind::NewBinV | InsertionKind::NewBinH => {
                let orientation = if kind == InsertionKind::NewBinV {
                    CutOrientation::Vertical
                } else {
                    CutOrientation::Horizontal
                };
                if !variant.first_cut.allows(orientation) {
                    return None;
                }
                let bin = self.open_bin(node, orientation)?;
                let (w, h) = self.item_dims(item, rotated, bin.transposed);
                if w > bin.width || h > bin.height {
                    return None;
                }
                let front = Front {
                    x1_prev: 0,
                    x1_curr: if two_staged { bin.width } else { w },
                    y2_prev: 0,
                    y2_curr: h,
                    x3_prev: 0,
                    x3_curr: w,
                };
                Some(Insertion {
                    item,
                    rotated,
                    kind,
                    front,
                    x: 0,
                    y: 0,
                    w,
                    h,
                    new_bin: Some(bin),
                })
            }
            InsertionKind::NewFirstLevel => {
                let bin = node.current_bin?;
                if two_staged {
                    return None;
                }
                let (w, h) = self.item_dims(item, rotated, bin.transposed);
                if f.x1_curr + w > bin.width || h > bin.height {
                    return None;
                }
                let front = Front {
                    x1_prev: f.x1_curr,
                    x1_curr: f.x1_curr + w,
                    y2_prev: 0,
                    y2_curr: h,
                    x3_prev: f.x1_curr,
                    x3_curr: f.x1_curr + w,
                };
                Some(Insertion {
                    item,
                    rotated,
                    kind,
                    front,
                    x: f.x1_curr,
                    y: 0,
                    w,
                    h,
                    new_bin: None,
                })
            }
            InsertionKind::NewSecondLevel => {
                let bin = node.current_bin?;
                let (w, h) = self.item_dims(item, rotated, bin.transposed);
                if f.x1_prev + w > bin.width || f.y2_curr + h > bin.height {
                    return None;
                }
                let x3_curr = f.x1_prev + w;
                let front = Front {
                    x1_prev: f.x1_prev,
                    x1_curr: if two_staged {
                        bin.width
                    } else {
                        f.x1_curr.max(x3_curr)
                    },
                    y2_prev: f.y2_curr,
                    y2_curr: f.y2_curr + h,
                    x3_prev: f.x1_prev,
                    x3_curr,
                };
                Some(Insertion {
                    item,
                    rotated,
                    kind,
                    front,
                    x: f.x1_prev,
                    y: f.y2_curr,
                    w,
                    h,
                    new_bin: None,
                })
            }
            InsertionKind::NewThirdLevel => {
                let bin = node.current_bin?;
                let (w, h) = self.item_dims(item, rotated, bin.transposed);
                if f.x3_curr + w > bin.width {
                    return None;
                }
                if exact {
                    if h != f.y2_curr - f.y2_prev {
                        return None;
                    }
                } else if f.y2_prev + h > bin.height {
                    return None;
                }
                let x3_curr = f.x3_curr + w;
                let front = Front {
                    x1_prev: f.x1_prev,
                    x1_curr: if two_staged {
                        bin.width
                    } else {
                        f.x1_curr.max(x3_curr)
                    },
                    y2_prev: f.y2_prev,
                    y2_curr: f.y2_curr.max(f.y2_prev + h),
                    x3_prev: f.x3_curr,
                    x3_curr,
                };
                Some(Insertion {
                    item,
                    rotated,
                    kind,
                    front,
                    x: f.x3_curr,
                    y: f.y2_prev,
                    w,
                    h,
                    new_bin: None,
                })
            }
        }
    }

    /// Every geometrically feasible insertion, before symmetry and dominance
    /// filtering. Only the first member of each identical-item group with
    /// copies left is considered.
    pub fn candidate_insertions(&self, node: &PatternState) -> Vec<Insertion> {
        const KINDS: [InsertionKind; 5] = [
            InsertionKind::NewThirdLevel,
            InsertionKind::NewSecondLevel,
            InsertionKind::NewFirstLevel,
            InsertionKind::NewBinV,
            InsertionKind::NewBinH,
        ];
        let mut out = Vec::new();
        for group in self.instance.item_groups() {
            let Some(&item) = group
                .iter()
                .find(|&&id| node.used_copies[id] < self.instance.item(id).copies)
            else {
                continue;
            };
            let rotations: &[bool] =
                if self.instance.can_rotate(item) && !self.instance.item(item).is_square() {
                    &[false, true]
                } else {
                    &[false]
                };
            for &rotated in rotations {
                for kind in KINDS {
                    if kind.opens_bin() || node.current_bin.is_some() {
                        if let Some(ins) = self.insertion(node, item, rotated, kind) {
                            out.push(ins);
                        }
                    }
                }
            }
        }
        out
    }

    /// Admissible insertions in generation order.
    pub fn insertions(&self, node: &PatternState) -> Vec<Insertion> {
        let s = self.options.symmetry_depth;
        let mut candidates = self.candidate_insertions(node);
        candidates.retain(|ins| symmetry_admissible(self.instance, node, ins, s));
        if self.options.dominance {
            candidates = filter_dominated(self.instance, node, candidates);
        }
        candidates
    }

    /// Applies an insertion produced for `parent`.
    pub fn child(&self, parent: &Arc<PatternState>, ins: &Insertion, seq: u64) -> PatternState {
        let instance = self.instance;
        let item = instance.item(ins.item);
        let mut used_copies = parent.used_copies.clone();
        used_copies[ins.item] += 1;

        let (bins_used, current_bin, prev_bins_area) = match ins.new_bin {
            Some(bin) => {
                let closed = parent
                    .current_bin
                    .map(|b| instance.bin(b.bin_type).area())
                    .unwrap_or(0);
                (
                    parent.bins_used + 1,
                    Some(bin),
                    parent.prev_bins_area + closed,
                )
            }
            None => (parent.bins_used, parent.current_bin, parent.prev_bins_area),
        };
        let bin = current_bin.expect("insertion into a missing bin");

        let (x, y, w, h) = if bin.transposed {
            (ins.y, ins.x, ins.h, ins.w)
        } else {
            (ins.x, ins.y, ins.w, ins.h)
        };
        let placement = Placement {
            item: ins.item,
            bin: bin.index,
            x,
            y,
            w,
            h,
            rotated: ins.rotated,
            kind: ins.kind,
        };

        let i = instance.symmetry_index(ins.item);
        let m = parent.sym_min;
        let sym_min = match ins.kind {
            InsertionKind::NewBinV | InsertionKind::NewBinH | InsertionKind::NewFirstLevel => {
                [i, i, i]
            }
            InsertionKind::NewSecondLevel => [m[0].min(i), i, i],
            InsertionKind::NewThirdLevel => [m[0].min(i), m[1].min(i), i],
        };

        let area = item.area();
        let depth = parent.depth + 1;
        PatternState {
            parent: Some(Arc::clone(parent)),
            last: Some(placement),
            seq,
            depth,
            bins_used,
            current_bin,
            prev_bins_area,
            front: ins.front,
            item_area: parent.item_area + area,
            item_profit: parent.item_profit + item.profit,
            sum_squared_item_area: parent.sum_squared_item_area + (area as u128) * (area as u128),
            used_copies,
            sym_min,
            strip_extent: parent.strip_extent.max(y + h),
            complete: depth == instance.total_item_count(),
        }
    }

    /// Children of `node`; sequence numbers are drawn from `next_seq`.
    pub fn children(&self, node: &Arc<PatternState>, next_seq: &mut u64) -> Vec<Arc<PatternState>> {
        self.insertions(node)
            .iter()
            .map(|ins| {
                *next_seq += 1;
                Arc::new(self.child(node, ins, *next_seq))
            })
            .collect()
    }
}

/// Symmetry rule: a new level-`k` sub-plate may not start with an item whose
/// index is smaller than the smallest index of its previous sibling, for
/// `k >= depth`. Depth 4 disables the rule.
pub fn symmetry_admissible(
    instance: &Instance,
    node: &PatternState,
    ins: &Insertion,
    depth: u8,
) -> bool {
    if depth >= 4 {
        return true;
    }
    match ins.kind.level() {
        None => true,
        Some(k) => {
            k < depth as usize || instance.symmetry_index(ins.item) >= node.sym_min[k - 1]
        }
    }
}

/// Removes insertions dominated by a sibling insertion:
///
/// * any insertion into the open bin removes the new-bin insertions;
/// * an insertion keeping `x1_curr` removes new level-one sub-plates;
/// * a level-three insertion keeping both `y2_curr` and `x1_curr` removes new
///   level-two sub-plates;
/// * of two orientations of one item at one position, the one whose front is
///   component-wise larger is removed (in exact mode only when both leave the
///   same level-two height).
pub fn filter_dominated(
    instance: &Instance,
    node: &PatternState,
    candidates: Vec<Insertion>,
) -> Vec<Insertion> {
    let f = node.front;
    // in strip packing a dominating insertion must not lengthen the strip
    let strip = instance.objective() == Objective::StripPacking;
    let keeps_strip = |c: &Insertion| !strip || strip_extent_after(node, c) <= node.strip_extent;
    let in_bin = candidates
        .iter()
        .any(|c| !c.kind.opens_bin() && keeps_strip(c));
    let keeps_first = candidates.iter().any(|c| {
        matches!(
            c.kind,
            InsertionKind::NewSecondLevel | InsertionKind::NewThirdLevel
        ) && c.front.x1_curr == f.x1_curr
            && keeps_strip(c)
    });
    let keeps_second = candidates.iter().any(|c| {
        c.kind == InsertionKind::NewThirdLevel
            && c.front.y2_curr == f.y2_curr
            && c.front.x1_curr == f.x1_curr
            && keeps_strip(c)
    });
    let exact = instance.variant().exactness == Exactness::Exact;

    let mut kept: Vec<Insertion> = candidates
        .into_iter()
        .filter(|c| match c.kind {
            InsertionKind::NewBinV | InsertionKind::NewBinH => !in_bin,
            InsertionKind::NewFirstLevel => !keeps_first,
            InsertionKind::NewSecondLevel => !keeps_second,
            InsertionKind::NewThirdLevel => true,
        })
        .collect();

    let dominated: Vec<bool> = kept
        .iter()
        .map(|b| {
            kept.iter().any(|a| {
                a.item == b.item
                    && a.kind == b.kind
                    && a.rotated != b.rotated
                    && front_dominates(&a.front, &b.front, exact)
                    && (!strip || strip_extent_after(node, a) <= strip_extent_after(node, b))
            })
        })
        .collect();
    let mut flags = dominated.into_iter();
    kept.retain(|_| !flags.next().unwrap_or(false));
    kept
}

/// Largest real `y + h` once `ins` is applied to `node`.
fn strip_extent_after(node: &PatternState, ins: &Insertion) -> Length {
    let transposed = ins
        .new_bin
        .or(node.current_bin)
        .is_some_and(|b| b.transposed);
    let top = if transposed { ins.x + ins.w } else { ins.y + ins.h };
    node.strip_extent.max(top)
}

fn front_dominates(a: &Front, b: &Front, exact: bool) -> bool {
    if exact && a.y2_curr != b.y2_curr {
        return false;
    }
    let le = a.x1_curr <= b.x1_curr && a.x3_curr <= b.x3_curr && a.y2_curr <= b.y2_curr;
    let lt = a.x1_curr < b.x1_curr || a.x3_curr < b.x3_curr || a.y2_curr < b.y2_curr;
    le && lt
}
