//! Problem model: item and bin types, variant configuration and the validated
//! [`Instance`] shared by every search worker.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, InstanceError};
use crate::guide::GuideId;

/// Integer length unit.
pub type Length = i64;
/// Integer area unit.
pub type Area = i64;
/// Item profit.
pub type Profit = i64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemType {
    pub id: usize,
    pub width: Length,
    pub height: Length,
    pub profit: Profit,
    pub copies: u32,
    /// Forbids rotation of this item even when the variant allows it.
    pub oriented: bool,
}

impl ItemType {
    /// Item with the default profit (its area), one copy, rotation not forbidden.
    pub fn new(id: usize, width: Length, height: Length) -> Self {
        Self {
            id,
            width,
            height,
            profit: width * height,
            copies: 1,
            oriented: false,
        }
    }

    pub fn with_profit(mut self, profit: Profit) -> Self {
        self.profit = profit;
        self
    }

    pub fn with_copies(mut self, copies: u32) -> Self {
        self.copies = copies;
        self
    }

    pub fn oriented(mut self, oriented: bool) -> Self {
        self.oriented = oriented;
        self
    }

    pub fn area(&self) -> Area {
        self.width * self.height
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinCopies {
    Limited(u32),
    Unbounded,
}

impl BinCopies {
    pub fn allows(&self, used: usize) -> bool {
        match self {
            BinCopies::Limited(n) => used < *n as usize,
            BinCopies::Unbounded => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinType {
    pub id: usize,
    pub width: Length,
    pub height: Length,
    pub copies: BinCopies,
}

impl BinType {
    pub fn new(id: usize, width: Length, height: Length, copies: BinCopies) -> Self {
        Self {
            id,
            width,
            height,
            copies,
        }
    }

    pub fn area(&self) -> Area {
        self.width * self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    BinPacking,
    Knapsack,
    StripPacking,
}

impl Objective {
    pub fn short_name(&self) -> &'static str {
        match self {
            Objective::BinPacking => "BPP",
            Objective::Knapsack => "KP",
            Objective::StripPacking => "SPP",
        }
    }
}

impl FromStr for Objective {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bpp" | "binpacking" | "bin-packing" => Ok(Objective::BinPacking),
            "kp" | "knapsack" => Ok(Objective::Knapsack),
            "spp" | "strippacking" | "strip-packing" => Ok(Objective::StripPacking),
            _ => Err(ConfigError::Parse(format!("unknown objective '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stages {
    Two,
    Three,
}

impl Stages {
    pub fn count(&self) -> usize {
        match self {
            Stages::Two => 2,
            Stages::Three => 3,
        }
    }
}

impl FromStr for Stages {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(Stages::Two),
            "3" => Ok(Stages::Three),
            _ => Err(ConfigError::Parse(format!("stages must be 2 or 3, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    NonExact,
}

impl FromStr for Exactness {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Exactness::Exact),
            "nonexact" | "non-exact" => Ok(Exactness::NonExact),
            _ => Err(ConfigError::Parse(format!("unknown exactness '{s}'"))),
        }
    }
}

/// Direction of the first-stage cuts of a bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutOrientation {
    /// Vertical cuts: first-stage sub-plates are laid out left to right.
    #[serde(rename = "V")]
    Vertical,
    /// Horizontal cuts: first-stage sub-plates are laid out bottom to top.
    #[serde(rename = "H")]
    Horizontal,
}

impl CutOrientation {
    pub fn letter(&self) -> char {
        match self {
            CutOrientation::Vertical => 'V',
            CutOrientation::Horizontal => 'H',
        }
    }

    pub fn flip(&self) -> Self {
        match self {
            CutOrientation::Vertical => CutOrientation::Horizontal,
            CutOrientation::Horizontal => CutOrientation::Vertical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstCut {
    Horizontal,
    Vertical,
    Any,
}

impl FirstCut {
    pub fn allows(&self, orientation: CutOrientation) -> bool {
        matches!(
            (self, orientation),
            (FirstCut::Any, _)
                | (FirstCut::Vertical, CutOrientation::Vertical)
                | (FirstCut::Horizontal, CutOrientation::Horizontal)
        )
    }

    /// Orientations tried when opening a bin, vertical first.
    pub fn orientations(&self) -> &'static [CutOrientation] {
        match self {
            FirstCut::Vertical => &[CutOrientation::Vertical],
            FirstCut::Horizontal => &[CutOrientation::Horizontal],
            FirstCut::Any => &[CutOrientation::Vertical, CutOrientation::Horizontal],
        }
    }
}

impl FromStr for FirstCut {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" | "horizontal" => Ok(FirstCut::Horizontal),
            "v" | "vertical" => Ok(FirstCut::Vertical),
            "any" => Ok(FirstCut::Any),
            _ => Err(ConfigError::Parse(format!("unknown first cut '{s}'"))),
        }
    }
}

/// Queue threshold growth factor, a rational strictly greater than one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFactor {
    num: u64,
    den: u64,
}

impl GrowthFactor {
    pub fn new(num: u64, den: u64) -> Result<Self, ConfigError> {
        if den == 0 || num <= den {
            return Err(ConfigError::BadVariant(format!(
                "growth factor must be > 1, got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// `ceil(threshold * f)`, bumped by one when rounding would not grow it.
    pub fn next_threshold(&self, threshold: usize) -> usize {
        let scaled = (threshold as u128 * self.num as u128).div_ceil(self.den as u128);
        let scaled = usize::try_from(scaled).unwrap_or(usize::MAX);
        if scaled <= threshold {
            threshold.saturating_add(1)
        } else {
            scaled
        }
    }
}

impl Default for GrowthFactor {
    fn default() -> Self {
        Self { num: 3, den: 2 }
    }
}

impl fmt::Display for GrowthFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for GrowthFactor {
    type Err = ConfigError;

    /// Accepts `a/b`, an integer, or a plain decimal such as `1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ConfigError::Parse(format!("invalid growth factor '{s}'"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return GrowthFactor::new(n, d);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if frac_part.len() > 12 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac_part.len() as u32);
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        GrowthFactor::new(num, den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantConfig {
    pub objective: Objective,
    pub stages: Stages,
    pub exactness: Exactness,
    pub first_cut: FirstCut,
    pub rotation_allowed: bool,
    pub symmetry_depth: u8,
    pub guide: GuideId,
    pub growth_factor: GrowthFactor,
    pub initial_threshold: usize,
}

impl VariantConfig {
    /// Three-staged non-exact, free first cut, oriented items; default search settings.
    pub fn new(objective: Objective) -> Self {
        Self {
            objective,
            stages: Stages::Three,
            exactness: Exactness::NonExact,
            first_cut: FirstCut::Any,
            rotation_allowed: false,
            symmetry_depth: 2,
            guide: match objective {
                Objective::Knapsack => GuideId::C4,
                _ => GuideId::C0,
            },
            growth_factor: GrowthFactor::default(),
            initial_threshold: 2,
        }
    }

    pub fn with_stages(mut self, stages: Stages) -> Self {
        self.stages = stages;
        self
    }

    pub fn with_exactness(mut self, exactness: Exactness) -> Self {
        self.exactness = exactness;
        self
    }

    pub fn with_first_cut(mut self, first_cut: FirstCut) -> Self {
        self.first_cut = first_cut;
        self
    }

    pub fn with_rotation(mut self, allowed: bool) -> Self {
        self.rotation_allowed = allowed;
        self
    }

    pub fn with_symmetry_depth(mut self, depth: u8) -> Self {
        self.symmetry_depth = depth;
        self
    }

    pub fn with_guide(mut self, guide: GuideId) -> Self {
        self.guide = guide;
        self
    }

    pub fn with_growth_factor(mut self, f: GrowthFactor) -> Self {
        self.growth_factor = f;
        self
    }

    /// Variant name in the usual notation, e.g. `3NEGH-SPP-O`.
    pub fn name(&self) -> String {
        let exact = match self.exactness {
            Exactness::Exact => "",
            Exactness::NonExact => "NE",
        };
        let first = match self.first_cut {
            FirstCut::Any => "",
            FirstCut::Horizontal => "H",
            FirstCut::Vertical => "V",
        };
        let rot = if self.rotation_allowed { "R" } else { "O" };
        format!(
            "{}{}G{}-{}-{}",
            self.stages.count(),
            exact,
            first,
            self.objective.short_name(),
            rot
        )
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if !(1..=4).contains(&self.symmetry_depth) {
            return Err(ConfigError::BadVariant(format!(
                "symmetry depth must be in 1..=4, got {}",
                self.symmetry_depth
            )));
        }
        if self.initial_threshold == 0 {
            return Err(ConfigError::BadVariant(
                "initial threshold must be at least 1".into(),
            ));
        }
        if self.growth_factor.num <= self.growth_factor.den {
            return Err(ConfigError::BadVariant("growth factor must be > 1".into()));
        }
        Ok(())
    }
}

/// A validated, immutable packing instance.
#[derive(Debug, Clone)]
pub struct Instance {
    items: Vec<ItemType>,
    bins: Vec<BinType>,
    variant: VariantConfig,
    total_item_count: u64,
    total_item_area: Area,
    total_profit: Profit,
    /// Position of each item id in the canonical order.
    canonical_rank: Vec<usize>,
    /// Items grouped by identical (width, height, profit, oriented), groups in canonical order.
    groups: Vec<Vec<usize>>,
    /// Canonical rank of the first member of the item's group.
    symmetry_index: Vec<usize>,
}

impl Instance {
    /// Validates the raw lists and computes derived aggregates.
    ///
    /// Item and bin ids are reassigned to their list positions. Strip packing
    /// instances get a single bin whose height is the sum over all item copies
    /// of `max(width, height)`.
    pub fn build(
        items: Vec<ItemType>,
        bins: Vec<BinType>,
        variant: VariantConfig,
    ) -> Result<Self, InstanceError> {
        if items.is_empty() || bins.is_empty() {
            return Err(InstanceError::EmptyInstance);
        }
        variant.check()?;
        let mut items = items;
        for (i, item) in items.iter_mut().enumerate() {
            item.id = i;
            if item.width < 1 || item.height < 1 || item.copies < 1 || item.profit < 0 {
                return Err(InstanceError::InvalidItem {
                    id: i,
                    reason: format!(
                        "width={} height={} profit={} copies={}",
                        item.width, item.height, item.profit, item.copies
                    ),
                });
            }
        }
        let mut bins = bins;
        for (i, bin) in bins.iter_mut().enumerate() {
            bin.id = i;
            if bin.width < 1 || bin.height < 1 || bin.copies == BinCopies::Limited(0) {
                return Err(InstanceError::InvalidBin {
                    id: i,
                    reason: format!("width={} height={}", bin.width, bin.height),
                });
            }
        }
        match variant.objective {
            Objective::Knapsack => {
                if bins.iter().any(|b| b.copies == BinCopies::Unbounded) {
                    return Err(ConfigError::BadVariant(
                        "knapsack requires a finite number of bin copies".into(),
                    )
                    .into());
                }
            }
            Objective::StripPacking => {
                if bins.len() != 1 {
                    return Err(ConfigError::BadVariant(
                        "strip packing requires exactly one bin type".into(),
                    )
                    .into());
                }
                let extent: Length = items
                    .iter()
                    .map(|it| it.copies as Length * it.width.max(it.height))
                    .sum();
                bins[0].height = extent;
                bins[0].copies = BinCopies::Limited(1);
            }
            Objective::BinPacking => {}
        }

        for item in &items {
            let rot = variant.rotation_allowed && !item.oriented;
            let fits = bins.iter().any(|b| {
                (item.width <= b.width && item.height <= b.height)
                    || (rot && item.height <= b.width && item.width <= b.height)
            });
            if !fits {
                return Err(InstanceError::ItemTooLarge(item.id));
            }
        }

        let total_item_count = items.iter().map(|it| it.copies as u64).sum();
        let total_item_area = items.iter().map(|it| it.copies as Area * it.area()).sum();
        let total_profit = items.iter().map(|it| it.copies as Profit * it.profit).sum();

        let order = canonical_order_of(&items);
        let mut canonical_rank = vec![0; items.len()];
        for (rank, &id) in order.iter().enumerate() {
            canonical_rank[id] = rank;
        }
        let mut group_of_key: HashMap<(Length, Length, Profit, bool), usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut symmetry_index = vec![0; items.len()];
        for &id in &order {
            let it = &items[id];
            let g = *group_of_key
                .entry((it.width, it.height, it.profit, it.oriented))
                .or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
            groups[g].push(id);
            symmetry_index[id] = canonical_rank[groups[g][0]];
        }

        Ok(Self {
            items,
            bins,
            variant,
            total_item_count,
            total_item_area,
            total_profit,
            canonical_rank,
            groups,
            symmetry_index,
        })
    }

    /// Rebuilds the instance from its own parts with a different variant.
    pub fn with_variant(&self, variant: VariantConfig) -> Result<Self, InstanceError> {
        Instance::build(self.items.clone(), self.bins.clone(), variant)
    }

    pub fn items(&self) -> &[ItemType] {
        &self.items
    }

    pub fn item(&self, id: usize) -> &ItemType {
        &self.items[id]
    }

    pub fn bins(&self) -> &[BinType] {
        &self.bins
    }

    pub fn bin(&self, id: usize) -> &BinType {
        &self.bins[id]
    }

    pub fn variant(&self) -> &VariantConfig {
        &self.variant
    }

    pub fn objective(&self) -> Objective {
        self.variant.objective
    }

    pub fn total_item_count(&self) -> u64 {
        self.total_item_count
    }

    pub fn total_item_area(&self) -> Area {
        self.total_item_area
    }

    pub fn total_profit(&self) -> Profit {
        self.total_profit
    }

    /// Whether the item may be placed rotated in this variant.
    pub fn can_rotate(&self, item: usize) -> bool {
        self.variant.rotation_allowed && !self.items[item].oriented
    }

    /// Item ids sorted by (width desc, height desc, profit desc, id).
    pub fn canonical_item_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.items.len()];
        for (id, &rank) in self.canonical_rank.iter().enumerate() {
            order[rank] = id;
        }
        order
    }

    /// Groups of interchangeable items, members in index order.
    pub fn item_groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Index used by the symmetry-breaking rule; identical items share it.
    pub fn symmetry_index(&self, item: usize) -> usize {
        self.symmetry_index[item]
    }

    /// Bin type of the `index`-th opened bin, bins being consumed in list order.
    pub fn bin_type_at(&self, index: usize) -> Option<usize> {
        let mut remaining = index;
        for bin in &self.bins {
            match bin.copies {
                BinCopies::Unbounded => return Some(bin.id),
                BinCopies::Limited(n) => {
                    if remaining < n as usize {
                        return Some(bin.id);
                    }
                    remaining -= n as usize;
                }
            }
        }
        None
    }
}

fn canonical_order_of(items: &[ItemType]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (&items[a], &items[b]);
        ib.width
            .cmp(&ia.width)
            .then(ib.height.cmp(&ia.height))
            .then(ib.profit.cmp(&ia.profit))
            .then(a.cmp(&b))
    });
    order
}
