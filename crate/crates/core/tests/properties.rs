mod common;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use common::random_instance;
use guillotine_core::guide::NodeKey;
use guillotine_core::{
    compare, guide_value, BranchingOptions, BranchingScheme, GuideId, Instance,
    InsertionKind, ItemType, Objective, PatternState,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn objective_of(i: u8) -> Objective {
    match i % 3 {
        0 => Objective::BinPacking,
        1 => Objective::Knapsack,
        _ => Objective::StripPacking,
    }
}

/// Random root-to-leaf walk; returns every node visited.
fn random_walk(inst: &Instance, rng: &mut ChaCha8Rng) -> Vec<Arc<PatternState>> {
    let scheme = BranchingScheme::new(
        inst,
        BranchingOptions {
            symmetry_depth: inst.variant().symmetry_depth,
            dominance: rng.gen_bool(0.7),
        },
    );
    let mut seq = 0;
    let mut node = scheme.root();
    let mut path = vec![Arc::clone(&node)];
    loop {
        let children = scheme.children(&node, &mut seq);
        if children.is_empty() {
            return path;
        }
        let pick = rng.gen_range(0..children.len());
        node = Arc::clone(&children[pick]);
        path.push(Arc::clone(&node));
    }
}

fn check_node(inst: &Instance, node: &PatternState) -> Result<(), TestCaseError> {
    let placements = node.placements();
    let item_area: i64 = placements.iter().map(|p| p.area()).sum();
    let profit: i64 = placements.iter().map(|p| inst.item(p.item).profit).sum();
    let sq: u128 = placements.iter().map(|p| (p.area() as u128).pow(2)).sum();
    prop_assert_eq!(node.item_area(), item_area);
    prop_assert_eq!(node.profit(), profit);
    prop_assert_eq!(node.sum_squared_item_area(), sq);
    prop_assert_eq!(node.item_count(), placements.len() as u64);
    prop_assert_eq!(node.waste(), node.area() - item_area);
    prop_assert!(node.waste() >= 0);
    if let Some(bin) = node.current_bin() {
        let f = node.front();
        prop_assert!(0 <= f.x1_prev && f.x1_prev <= f.x3_prev);
        prop_assert!(f.x3_prev <= f.x3_curr && f.x3_curr <= f.x1_curr);
        prop_assert!(f.x1_curr <= bin.width);
        prop_assert!(0 <= f.y2_prev && f.y2_prev <= f.y2_curr && f.y2_curr <= bin.height);
        if let Some(row) = node.fixed_row_height(inst.variant().exactness) {
            // every item of the current level-two sub-plate has the row height
            let mut n = Some(node);
            while let Some(cur) = n {
                let p = cur.last_placement().unwrap();
                let h = if bin.transposed { p.w } else { p.h };
                prop_assert_eq!(h, row);
                if p.kind != InsertionKind::NewThirdLevel {
                    break;
                }
                n = cur.parent().map(|a| a.as_ref());
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn walks_preserve_state_invariants(seed in any::<u64>(), obj in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, objective_of(obj));
        let path = random_walk(&inst, &mut rng);
        for w in path.windows(2) {
            let (parent, child) = (&w[0], &w[1]);
            prop_assert_eq!(child.item_count(), parent.item_count() + 1);
            prop_assert!(child.area() >= parent.area());
        }
        for node in &path {
            check_node(&inst, node)?;
        }
    }

    #[test]
    fn children_are_distinct(seed in any::<u64>(), obj in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, objective_of(obj));
        let scheme = BranchingScheme::new(&inst, BranchingOptions {
            symmetry_depth: 4,
            dominance: false,
        });
        let path = random_walk(&inst, &mut rng);
        for node in &path {
            let ins = scheme.insertions(node);
            let keys: HashSet<_> = ins.iter().map(|i| (i.item, i.rotated, i.kind)).collect();
            prop_assert_eq!(keys.len(), ins.len());
        }
    }

    #[test]
    fn compare_is_a_total_order(seed in any::<u64>(), g in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, Objective::Knapsack);
        let guide = GuideId::ALL[g];
        let mut nodes = random_walk(&inst, &mut rng);
        nodes.extend(random_walk(&inst, &mut rng));
        for _ in 0..30 {
            let a = &nodes[rng.gen_range(0..nodes.len())];
            let b = &nodes[rng.gen_range(0..nodes.len())];
            let c = &nodes[rng.gen_range(0..nodes.len())];
            let ab = compare(guide, a, b);
            prop_assert_eq!(ab, compare(guide, b, a).reverse());
            let ka = NodeKey::of(guide, a);
            let kb = NodeKey::of(guide, b);
            if ab == Ordering::Equal {
                prop_assert_eq!(ka, kb);
            }
            if ab != Ordering::Greater && compare(guide, b, c) != Ordering::Greater {
                prop_assert_ne!(compare(guide, a, c), Ordering::Greater);
            }
        }
    }

    #[test]
    fn c4_order_is_profit_scale_invariant(seed in any::<u64>(), k in 2i64..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, Objective::Knapsack);
        let scaled_items: Vec<ItemType> = inst
            .items()
            .iter()
            .map(|it| it.clone().with_profit(it.profit * k))
            .collect();
        let scaled = Instance::build(scaled_items, inst.bins().to_vec(), inst.variant().clone()).unwrap();
        // replay the same walk in both instances
        let a = random_walk(&inst, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let b = random_walk(&scaled, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        prop_assert_eq!(a.len(), b.len());
        for i in 0..a.len() {
            for j in 0..a.len() {
                prop_assert_eq!(
                    compare(GuideId::C4, &a[i], &a[j]),
                    compare(GuideId::C4, &b[i], &b[j])
                );
            }
        }
    }

    #[test]
    fn zero_waste_child_does_not_worsen_c0(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, Objective::BinPacking);
        let path = random_walk(&inst, &mut rng);
        for w in path.windows(2) {
            let (p, c) = (&w[0], &w[1]);
            if p.is_root() || c.waste() != p.waste() {
                continue;
            }
            let gp = guide_value(GuideId::C0, p).unwrap();
            let gc = guide_value(GuideId::C0, c).unwrap();
            prop_assert!(gc <= gp);
        }
    }
}

#[test]
fn instance_aggregates_match_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let inst = random_instance(&mut rng, 12, objective_of(i as u8));
        let count: u64 = inst.items().iter().map(|it| it.copies as u64).sum();
        let area: i64 = inst.items().iter().map(|it| it.copies as i64 * it.width * it.height).sum();
        let profit: i64 = inst.items().iter().map(|it| it.copies as i64 * it.profit).sum();
        assert_eq!(inst.total_item_count(), count);
        assert_eq!(inst.total_item_area(), area);
        assert_eq!(inst.total_profit(), profit);

        let mut order = inst.canonical_item_order();
        order.sort_unstable();
        assert_eq!(order, (0..inst.items().len()).collect::<Vec<_>>());

        let again = inst.with_variant(inst.variant().clone()).unwrap();
        assert_eq!(again.items(), inst.items());
        assert_eq!(again.bins(), inst.bins());
        assert_eq!(again.canonical_item_order(), inst.canonical_item_order());
    }
}

#[test]
fn identical_copies_are_consumed_in_index_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let inst = random_instance(&mut rng, 5, Objective::Knapsack);
        let path = random_walk(&inst, &mut rng);
        let last = path.last().unwrap();
        for group in inst.item_groups() {
            // a later member is only used once earlier members are used up
            for w in group.windows(2) {
                if last.used_copies(w[1]) > 0 {
                    assert_eq!(last.used_copies(w[0]), inst.item(w[0]).copies);
                }
            }
        }
    }
}
