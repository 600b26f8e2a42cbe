//! JSON solution documents.
//!
//! A document lists every used bin with its cut tree (sub-plates down to item
//! and waste leaves, in real bin coordinates) next to the flat placement list.

use guillotine_core::search::SearchReport;
use guillotine_core::{
    BinCopies, CutOrientation, Instance, InsertionKind, Length, Objective, Solution, Stages,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::io::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub instance_digest: String,
    pub variant: String,
    pub objective: i64,
    pub bins: Vec<BinRecord>,
    pub placements: Vec<PlacementRecord>,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinRecord {
    pub bin_type: usize,
    pub first_stage: CutOrientation,
    pub width: Length,
    pub height: Length,
    /// First-stage sub-plates and waste, left to right or bottom to top.
    pub plates: Vec<CutNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Plate,
    Item,
    Waste,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutNode {
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
    pub x: Length,
    pub y: Length,
    pub w: Length,
    pub h: Length,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<CutNode>,
}

impl CutNode {
    fn leaf(kind: NodeKind, r: Rect) -> Self {
        Self {
            kind,
            item: None,
            x: r.x,
            y: r.y,
            w: r.w,
            h: r.h,
            children: Vec::new(),
        }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x, self.y, self.w, self.h)
    }

    /// Item and waste leaves below this node, in tree order.
    pub fn leaves(&self) -> Vec<&CutNode> {
        if self.kind == NodeKind::Plate {
            self.children.iter().flat_map(|c| c.leaves()).collect()
        } else {
            vec![self]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlacementRecord {
    pub item: usize,
    pub bin: usize,
    pub x: Length,
    pub y: Length,
    pub w: Length,
    pub h: Length,
    pub rotated: bool,
}

impl PlacementRecord {
    pub fn rect(&self) -> Rect {
        Rect::new(self.x, self.y, self.w, self.h)
    }
}

/// Search metadata. Wall-clock times are left out so that equal searches give
/// byte-identical documents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub settings: String,
    pub thresholds: Vec<Vec<usize>>,
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_to_best: Option<u64>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: Length,
    pub y: Length,
    pub w: Length,
    pub h: Length,
}

impl Rect {
    pub fn new(x: Length, y: Length, w: Length, h: Length) -> Self {
        Self { x, y, w, h }
    }

    pub fn area(&self) -> i64 {
        self.w * self.h
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.y, self.x, self.h, self.w)
    }

    pub fn contains(&self, o: &Rect) -> bool {
        o.x >= self.x && o.y >= self.y && o.x + o.w <= self.x + self.w && o.y + o.h <= self.y + self.h
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.y + o.h && o.y < self.y + self.h
    }
}

/// Hex SHA-256 of the instance contents and variant.
pub fn instance_digest(instance: &Instance) -> String {
    let mut text = format!("{}\n", instance.variant().name());
    for it in instance.items() {
        text.push_str(&format!(
            "item {} {} {} {} {}\n",
            it.width,
            it.height,
            it.profit,
            it.copies,
            u8::from(it.oriented)
        ));
    }
    for b in instance.bins() {
        let copies = match b.copies {
            BinCopies::Unbounded => "inf".to_string(),
            BinCopies::Limited(n) => n.to_string(),
        };
        text.push_str(&format!("bin {} {} {}\n", b.width, b.height, copies));
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Tree builder working in the canonical frame of one bin, where first-level
/// cuts are vertical.
struct TreeBuilder {
    transposed: bool,
}

impl TreeBuilder {
    fn node(&self, kind: NodeKind, r: Rect) -> CutNode {
        CutNode::leaf(kind, if self.transposed { r.transpose() } else { r })
    }

    fn plate(&self, r: Rect, children: Vec<CutNode>) -> CutNode {
        let mut n = self.node(NodeKind::Plate, r);
        n.children = children;
        n
    }

    /// Item leaf inside its level-three sub-plate, with trim waste if any.
    fn item(&self, item: usize, cell: Rect, r: Rect) -> CutNode {
        let mut leaf = self.node(NodeKind::Item, r);
        leaf.item = Some(item);
        if cell == r {
            return leaf;
        }
        let mut children = Vec::new();
        if r.y > cell.y {
            children.push(self.node(NodeKind::Waste, Rect::new(r.x, cell.y, r.w, r.y - cell.y)));
        }
        children.push(leaf);
        let top = cell.y + cell.h;
        if r.y + r.h < top {
            children.push(self.node(NodeKind::Waste, Rect::new(r.x, r.y + r.h, r.w, top - r.y - r.h)));
        }
        self.plate(cell, children)
    }

    /// A row of items left to right, padded with waste to `width`.
    fn row(&self, x0: Length, width: Length, y0: Length, height: Length, cells: &[(usize, Rect)]) -> CutNode {
        let mut children = Vec::new();
        let mut x = x0;
        for &(item, r) in cells {
            if r.x > x {
                children.push(self.node(NodeKind::Waste, Rect::new(x, y0, r.x - x, height)));
            }
            children.push(self.item(item, Rect::new(r.x, y0, r.w, height), r));
            x = r.x + r.w;
        }
        if x < x0 + width {
            children.push(self.node(NodeKind::Waste, Rect::new(x, y0, x0 + width - x, height)));
        }
        self.plate(Rect::new(x0, y0, width, height), children)
    }

    /// Rows bottom to top inside a column, padded with waste to `height`.
    fn column(&self, x0: Length, width: Length, height: Length, rows: &[Vec<(usize, Rect)>]) -> Vec<CutNode> {
        let mut out = Vec::new();
        let mut y = 0;
        for cells in rows {
            let y0 = cells[0].1.y;
            let top = cells.iter().map(|(_, r)| r.y + r.h).max().unwrap();
            if y0 > y {
                out.push(self.node(NodeKind::Waste, Rect::new(x0, y, width, y0 - y)));
            }
            out.push(self.row(x0, width, y0, top - y0, cells));
            y = top;
        }
        if y < height {
            out.push(self.node(NodeKind::Waste, Rect::new(x0, y, width, height - y)));
        }
        out
    }
}

/// Builds the cut trees of `solution`, one per used bin.
fn bin_records(instance: &Instance, solution: &Solution) -> Vec<BinRecord> {
    let stages = instance.variant().stages;
    let mut records = Vec::new();
    for (index, sb) in solution.bins.iter().enumerate() {
        let bin = instance.bin(sb.bin_type);
        let tb = TreeBuilder {
            transposed: sb.transposed,
        };
        let (cw, ch) = if sb.transposed {
            (bin.height, bin.width)
        } else {
            (bin.width, bin.height)
        };
        // columns -> rows -> cells, in canonical coordinates
        let mut columns: Vec<Vec<Vec<(usize, Rect)>>> = Vec::new();
        for p in solution.placements.iter().filter(|p| p.bin == index) {
            let real = Rect::new(p.x, p.y, p.w, p.h);
            let r = if sb.transposed { real.transpose() } else { real };
            match p.kind {
                InsertionKind::NewBinV | InsertionKind::NewBinH | InsertionKind::NewFirstLevel => {
                    columns.push(vec![vec![(p.item, r)]])
                }
                InsertionKind::NewSecondLevel => {
                    columns.last_mut().expect("open column").push(vec![(p.item, r)])
                }
                InsertionKind::NewThirdLevel => columns
                    .last_mut()
                    .and_then(|c| c.last_mut())
                    .expect("open row")
                    .push((p.item, r)),
            }
        }
        let plates = match stages {
            Stages::Two => columns
                .first()
                .map(|rows| tb.column(0, cw, ch, rows))
                .unwrap_or_default(),
            Stages::Three => {
                let mut out = Vec::new();
                let mut x = 0;
                for rows in &columns {
                    let x0 = rows[0][0].1.x;
                    let right = rows
                        .iter()
                        .flatten()
                        .map(|(_, r)| r.x + r.w)
                        .max()
                        .unwrap();
                    if x0 > x {
                        out.push(tb.node(NodeKind::Waste, Rect::new(x, 0, x0 - x, ch)));
                    }
                    let children = tb.column(x0, right - x0, ch, rows);
                    out.push(tb.plate(Rect::new(x0, 0, right - x0, ch), children));
                    x = right;
                }
                if x < cw {
                    out.push(tb.node(NodeKind::Waste, Rect::new(x, 0, cw - x, ch)));
                }
                out
            }
        };
        records.push(BinRecord {
            bin_type: sb.bin_type,
            first_stage: sb.orientation,
            width: bin.width,
            height: bin.height,
            plates,
        });
    }
    records
}

impl SolutionDocument {
    pub fn from_solution(instance: &Instance, solution: &Solution, meta: Meta) -> Self {
        let placements = solution
            .placements
            .iter()
            .map(|p| PlacementRecord {
                item: p.item,
                bin: p.bin,
                x: p.x,
                y: p.y,
                w: p.w,
                h: p.h,
                rotated: p.rotated,
            })
            .collect();
        Self {
            instance_digest: instance_digest(instance),
            variant: instance.variant().name(),
            objective: solution.value.primary,
            bins: bin_records(instance, solution),
            placements,
            meta,
        }
    }

    /// Document of the best solution of a search, if any.
    pub fn from_report(instance: &Instance, report: &SearchReport, seed: Option<u64>) -> Option<Self> {
        let solution = report.incumbent.solution.as_ref()?;
        let summary = report.summary();
        let meta = Meta {
            settings: summary.settings,
            thresholds: summary.thresholds,
            nodes: summary.expansions,
            nodes_to_best: report.incumbent.log.last().map(|i| i.expansions),
            certified: summary.certified,
            seed,
        };
        Some(Self::from_solution(instance, solution, meta))
    }

    /// An empty knapsack document, or the starting point for hand-made ones.
    pub fn empty(instance: &Instance) -> Self {
        Self {
            instance_digest: instance_digest(instance),
            variant: instance.variant().name(),
            objective: 0,
            bins: Vec::new(),
            placements: Vec::new(),
            meta: Meta::default(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Objective recomputed from the placement list.
    pub fn recompute_objective(&self, instance: &Instance) -> i64 {
        match instance.objective() {
            Objective::BinPacking => self.bins.len() as i64,
            Objective::Knapsack => self
                .placements
                .iter()
                .filter(|p| p.item < instance.items().len())
                .map(|p| instance.item(p.item).profit)
                .sum(),
            Objective::StripPacking => self.placements.iter().map(|p| p.y + p.h).max().unwrap_or(0),
        }
    }
}
