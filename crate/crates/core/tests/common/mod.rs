#![allow(dead_code)]

use std::sync::Arc;

use guillotine_core::{
    BinCopies, BinType, BranchingScheme, Exactness, FirstCut, Instance, InsertionKind, ItemType,
    Objective, PatternState, Stages, VariantConfig,
};
use rand::Rng;

/// Bin 8x6 with four items in three levels of sub-plates, plus a spare
/// unit item so that the state is not complete.
pub fn four_item_instance() -> Instance {
    Instance::build(
        vec![
            ItemType::new(0, 2, 6),
            ItemType::new(1, 4, 2),
            ItemType::new(2, 2, 2),
            ItemType::new(3, 3, 1),
            ItemType::new(4, 1, 1),
        ],
        vec![BinType::new(0, 8, 6, BinCopies::Unbounded)],
        VariantConfig::new(Objective::BinPacking).with_first_cut(FirstCut::Vertical),
    )
    .unwrap()
}

pub fn four_item_state(inst: &Instance) -> Arc<PatternState> {
    let scheme = BranchingScheme::new(inst, Default::default());
    let mut node = scheme.root();
    for (i, (item, kind)) in [
        (0, InsertionKind::NewBinV),
        (1, InsertionKind::NewFirstLevel),
        (2, InsertionKind::NewSecondLevel),
        (3, InsertionKind::NewThirdLevel),
    ]
    .into_iter()
    .enumerate()
    {
        let ins = scheme.insertion(&node, item, false, kind).unwrap();
        node = Arc::new(scheme.child(&node, &ins, i as u64 + 1));
    }
    node
}

pub fn random_variant<R: Rng>(rng: &mut R, objective: Objective) -> VariantConfig {
    VariantConfig::new(objective)
        .with_stages(if rng.gen_bool(0.5) { Stages::Two } else { Stages::Three })
        .with_exactness(if rng.gen_bool(0.5) {
            Exactness::Exact
        } else {
            Exactness::NonExact
        })
        .with_first_cut(match rng.gen_range(0..3) {
            0 => FirstCut::Vertical,
            1 => FirstCut::Horizontal,
            _ => FirstCut::Any,
        })
        .with_rotation(rng.gen_bool(0.5))
        .with_symmetry_depth(rng.gen_range(1..=4))
}

pub fn random_instance<R: Rng>(rng: &mut R, max_items: usize, objective: Objective) -> Instance {
    let variant = random_variant(rng, objective);
    let n = rng.gen_range(1..=max_items);
    let items = (0..n)
        .map(|i| {
            ItemType::new(i, rng.gen_range(1..=10), rng.gen_range(1..=10))
                .with_profit(rng.gen_range(0..=100))
                .with_copies(rng.gen_range(1..=2))
                .oriented(rng.gen_bool(0.2))
        })
        .collect();
    let copies = match objective {
        Objective::BinPacking => BinCopies::Unbounded,
        _ => BinCopies::Limited(rng.gen_range(1..=2)),
    };
    Instance::build(items, vec![BinType::new(0, 10, 10, copies)], variant).unwrap()
}
