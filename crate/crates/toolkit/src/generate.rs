//! Random instance generation for benches and tests.

use guillotine_core::{
    BinCopies, BinType, Exactness, FirstCut, Instance, ItemType, Objective, Stages, VariantConfig,
};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    /// Total number of item copies.
    pub copies: u32,
    pub max_side: i64,
    pub bin_width: i64,
    pub bin_height: i64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            copies: 5,
            max_side: 10,
            bin_width: 10,
            bin_height: 10,
        }
    }
}

/// Item types with dimensions in `1..=max_side` and `spec.copies` copies in
/// total. Knapsack profits are random, other objectives keep the area.
pub fn random_items<R: Rng>(rng: &mut R, spec: RandomSpec, objective: Objective) -> Vec<ItemType> {
    let mut items = Vec::new();
    let mut left = spec.copies;
    while left > 0 {
        let copies = rng.gen_range(1..=left.min(3));
        left -= copies;
        let mut item = ItemType::new(
            items.len(),
            rng.gen_range(1..=spec.max_side.min(spec.bin_width)),
            rng.gen_range(1..=spec.max_side.min(spec.bin_height)),
        )
        .with_copies(copies);
        if objective == Objective::Knapsack {
            item = item.with_profit(rng.gen_range(1..=100));
        }
        items.push(item);
    }
    items
}

pub fn random_instance<R: Rng>(rng: &mut R, spec: RandomSpec, variant: VariantConfig) -> Instance {
    let objective = variant.objective;
    let copies = match objective {
        Objective::BinPacking => BinCopies::Unbounded,
        _ => BinCopies::Limited(1),
    };
    let items = random_items(rng, spec, objective);
    let bin = BinType::new(0, spec.bin_width, spec.bin_height, copies);
    Instance::build(items, vec![bin], variant).expect("generated items fit the bin")
}

pub fn random_first_cut<R: Rng>(rng: &mut R) -> FirstCut {
    match rng.gen_range(0..3) {
        0 => FirstCut::Horizontal,
        1 => FirstCut::Vertical,
        _ => FirstCut::Any,
    }
}

/// Every (stages, exactness, rotation) combination.
pub fn variant_grid(objective: Objective) -> Vec<VariantConfig> {
    let mut out = Vec::new();
    for stages in [Stages::Two, Stages::Three] {
        for exactness in [Exactness::Exact, Exactness::NonExact] {
            for rotation in [false, true] {
                out.push(
                    VariantConfig::new(objective)
                        .with_stages(stages)
                        .with_exactness(exactness)
                        .with_rotation(rotation),
                );
            }
        }
    }
    out
}
