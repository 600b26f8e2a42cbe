//! Feasibility checker for solution documents.
//!
//! The checker trusts only the flat placement list. Staged feasibility is
//! decided by rebuilding the finest guillotine partition of every bin, stage by
//! stage, and the declared cut trees are only compared against the placements.

use std::collections::HashSet;
use std::fmt;

use guillotine_core::{BinCopies, CutOrientation, Exactness, Instance, Objective};
use serde::{Deserialize, Serialize};

use crate::document::{instance_digest, CutNode, NodeKind, PlacementRecord, Rect, SolutionDocument};
use crate::io::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    OutOfBounds,
    Overlap,
    Stages,
    ExactCut,
    Rotation,
    Dimensions,
    Copies,
    BinCopies,
    UnknownItem,
    UnknownBin,
    Objective,
    Orientation,
    Incomplete,
    TreeMismatch,
    Digest,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_string(self).expect("codes serialize");
        f.write_str(s.trim_matches('"'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.code, v.detail)?;
        }
        Ok(())
    }
}

struct Checker<'a> {
    instance: &'a Instance,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn report(&mut self, code: ViolationCode, detail: impl Into<String>) {
        self.violations.push(Violation {
            code,
            detail: detail.into(),
        });
    }

    /// Splits `region` by the finest cuts of direction `dir` and recurses.
    /// `level` is the stage about to be cut.
    fn stages(&mut self, bin: usize, region: Rect, items: &[&PlacementRecord], dir: CutOrientation, level: usize) {
        let variant = self.instance.variant();
        if items.is_empty() {
            return;
        }
        if level > variant.stages.count() {
            if items.len() > 1 {
                self.report(
                    ViolationCode::Stages,
                    format!(
                        "bin {bin}: {} items still share a sub-plate after {} stages",
                        items.len(),
                        variant.stages.count()
                    ),
                );
                return;
            }
            let r = items[0].rect();
            if r == region {
                return;
            }
            // one trim cut: full extent along one axis, flush with one edge
            let fills_x = r.x == region.x && r.w == region.w;
            let fills_y = r.y == region.y && r.h == region.h;
            let flush_x = r.x == region.x || r.x + r.w == region.x + region.w;
            let flush_y = r.y == region.y || r.y + r.h == region.y + region.h;
            let one_cut = (fills_x && flush_y) || (fills_y && flush_x);
            if !one_cut {
                self.report(
                    ViolationCode::Stages,
                    format!("bin {bin}: item {} needs more than one trim cut", items[0].item),
                );
            } else if variant.exactness == Exactness::Exact {
                self.report(
                    ViolationCode::ExactCut,
                    format!("bin {bin}: item {} does not fill its sub-plate", items[0].item),
                );
            }
            return;
        }
        // item intervals along the axis crossed by the cuts
        let span = |r: Rect| match dir {
            CutOrientation::Vertical => (r.x, r.x + r.w),
            CutOrientation::Horizontal => (r.y, r.y + r.h),
        };
        let mut sorted: Vec<&PlacementRecord> = items.to_vec();
        sorted.sort_by_key(|p| span(p.rect()));
        let mut groups: Vec<(i64, i64, Vec<&PlacementRecord>)> = Vec::new();
        for p in sorted {
            let (a, b) = span(p.rect());
            match groups.last_mut() {
                Some(g) if a < g.1 => {
                    g.1 = g.1.max(b);
                    g.2.push(p);
                }
                _ => groups.push((a, b, vec![p])),
            }
        }
        for (a, b, members) in groups {
            let sub = match dir {
                CutOrientation::Vertical => Rect::new(a, region.y, b - a, region.h),
                CutOrientation::Horizontal => Rect::new(region.x, a, region.w, b - a),
            };
            self.stages(bin, sub, &members, dir.flip(), level + 1);
        }
    }

    fn tree(&mut self, bin: usize, node: &CutNode, placements: &mut Vec<Rect>) {
        if !(node.w > 0 && node.h > 0) {
            self.report(ViolationCode::TreeMismatch, format!("bin {bin}: empty tree node"));
            return;
        }
        match node.kind {
            NodeKind::Item => placements.push(node.rect()),
            NodeKind::Waste => {}
            NodeKind::Plate => {
                let parent = node.rect();
                let mut area = 0;
                for (i, c) in node.children.iter().enumerate() {
                    if !parent.contains(&c.rect()) {
                        self.report(ViolationCode::TreeMismatch, format!("bin {bin}: child outside its plate"));
                    }
                    if node.children[..i].iter().any(|o| o.rect().overlaps(&c.rect())) {
                        self.report(ViolationCode::TreeMismatch, format!("bin {bin}: overlapping tree nodes"));
                    }
                    area += c.w * c.h;
                    self.tree(bin, c, placements);
                }
                if area != parent.area() {
                    self.report(
                        ViolationCode::TreeMismatch,
                        format!("bin {bin}: plate children do not cover the plate"),
                    );
                }
            }
        }
    }
}

/// Checks `doc` against `instance`. Never fails on semantic problems; they are
/// listed in the report.
pub fn validate(instance: &Instance, doc: &SolutionDocument) -> ValidationReport {
    let mut c = Checker {
        instance,
        violations: Vec::new(),
    };
    let variant = instance.variant();
    if doc.instance_digest != instance_digest(instance) {
        c.report(ViolationCode::Digest, "document belongs to another instance");
    }

    // bins
    let mut bin_counts = vec![0u64; instance.bins().len()];
    for (i, b) in doc.bins.iter().enumerate() {
        if b.bin_type >= instance.bins().len() {
            c.report(ViolationCode::UnknownBin, format!("bin {i}: unknown bin type {}", b.bin_type));
            continue;
        }
        bin_counts[b.bin_type] += 1;
        let t = instance.bin(b.bin_type);
        if (b.width, b.height) != (t.width, t.height) {
            c.report(ViolationCode::Dimensions, format!("bin {i}: wrong bin extents"));
        }
        if !variant.first_cut.allows(b.first_stage) {
            c.report(ViolationCode::Orientation, format!("bin {i}: first stage {:?} not allowed", b.first_stage));
        }
    }
    for (t, &n) in bin_counts.iter().enumerate() {
        if let BinCopies::Limited(max) = instance.bin(t).copies {
            if n > max as u64 {
                c.report(ViolationCode::BinCopies, format!("bin type {t} used {n} times, {max} available"));
            }
        }
    }

    // placements one by one
    let mut used = vec![0u64; instance.items().len()];
    let mut sound: Vec<&PlacementRecord> = Vec::new();
    for (i, p) in doc.placements.iter().enumerate() {
        if p.item >= instance.items().len() {
            c.report(ViolationCode::UnknownItem, format!("placement {i}: unknown item {}", p.item));
            continue;
        }
        if p.bin >= doc.bins.len() || doc.bins[p.bin].bin_type >= instance.bins().len() {
            c.report(ViolationCode::UnknownBin, format!("placement {i}: unknown bin {}", p.bin));
            continue;
        }
        used[p.item] += 1;
        let it = instance.item(p.item);
        let expected = if p.rotated {
            (it.height, it.width)
        } else {
            (it.width, it.height)
        };
        if (p.w, p.h) != expected {
            c.report(ViolationCode::Dimensions, format!("placement {i}: wrong extents for item {}", p.item));
        }
        if p.rotated && !instance.can_rotate(p.item) {
            c.report(ViolationCode::Rotation, format!("placement {i}: item {} may not be rotated", p.item));
        }
        let b = &doc.bins[p.bin];
        let bin_rect = Rect::new(0, 0, b.width, b.height);
        if p.w <= 0 || p.h <= 0 || !bin_rect.contains(&p.rect()) {
            c.report(ViolationCode::OutOfBounds, format!("placement {i}: outside bin {}", p.bin));
            continue;
        }
        sound.push(p);
    }
    for (id, &n) in used.iter().enumerate() {
        let copies = instance.item(id).copies as u64;
        if n > copies {
            c.report(ViolationCode::Copies, format!("item {id} placed {n} times, {copies} available"));
        } else if n < copies && variant.objective != Objective::Knapsack {
            c.report(ViolationCode::Incomplete, format!("item {id} placed {n} of {copies} times"));
        }
    }

    // per-bin geometry
    for (bi, b) in doc.bins.iter().enumerate() {
        let items: Vec<&PlacementRecord> = sound.iter().copied().filter(|p| p.bin == bi).collect();
        let mut overlap = false;
        for (k, p) in items.iter().enumerate() {
            for q in &items[..k] {
                if p.rect().overlaps(&q.rect()) {
                    overlap = true;
                    c.report(
                        ViolationCode::Overlap,
                        format!("bin {bi}: items {} and {} overlap", q.item, p.item),
                    );
                }
            }
        }
        if !overlap && items.len() == doc.placements.iter().filter(|p| p.bin == bi).count() {
            c.stages(bi, Rect::new(0, 0, b.width, b.height), &items, b.first_stage, 1);
        }

        // declared cut tree
        let mut leaves = Vec::new();
        let mut area = 0;
        for (k, n) in b.plates.iter().enumerate() {
            if !Rect::new(0, 0, b.width, b.height).contains(&n.rect()) {
                c.report(ViolationCode::TreeMismatch, format!("bin {bi}: plate outside the bin"));
            }
            if b.plates[..k].iter().any(|o| o.rect().overlaps(&n.rect())) {
                c.report(ViolationCode::TreeMismatch, format!("bin {bi}: overlapping plates"));
            }
            area += n.w * n.h;
            c.tree(bi, n, &mut leaves);
        }
        if area != b.width * b.height {
            c.report(ViolationCode::TreeMismatch, format!("bin {bi}: plates do not cover the bin"));
        }
        let from_tree: HashSet<(Option<usize>, Rect)> = b
            .plates
            .iter()
            .flat_map(|n| n.leaves())
            .filter(|l| l.kind == NodeKind::Item)
            .map(|l| (l.item, l.rect()))
            .collect();
        let from_list: HashSet<(Option<usize>, Rect)> = doc
            .placements
            .iter()
            .filter(|p| p.bin == bi)
            .map(|p| (Some(p.item), p.rect()))
            .collect();
        if from_tree != from_list || leaves.len() != from_list.len() {
            c.report(
                ViolationCode::TreeMismatch,
                format!("bin {bi}: cut tree items differ from the placement list"),
            );
        }
    }

    let recomputed = doc.recompute_objective(instance);
    if recomputed != doc.objective {
        c.report(
            ViolationCode::Objective,
            format!("declared objective {} but placements give {recomputed}", doc.objective),
        );
    }

    ValidationReport {
        ok: c.violations.is_empty(),
        violations: c.violations,
    }
}

pub fn validate_json(instance: &Instance, text: &str) -> Result<ValidationReport, ParseError> {
    Ok(validate(instance, &SolutionDocument::from_json(text)?))
}
