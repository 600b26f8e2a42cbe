use guillotine_core::{
    portfolio_run, BinCopies, BinType, Budget, CutOrientation, Exactness, FirstCut, Instance,
    ItemType, Objective, Stages, VariantConfig, WorkerConfig,
};
use guillotine_toolkit::document::{BinRecord, CutNode, NodeKind, PlacementRecord};
use guillotine_toolkit::generate::{random_first_cut, random_instance, variant_grid, RandomSpec};
use guillotine_toolkit::{validate, SolutionDocument, ViolationCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solve(inst: &Instance, nodes: u64) -> Option<SolutionDocument> {
    let configs = [WorkerConfig::new(inst.variant().guide, 2)];
    let report = portfolio_run(inst, &configs, &Budget::unlimited().with_node_limit(nodes));
    SolutionDocument::from_report(inst, &report, None)
}

#[test]
fn solver_documents_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    for round in 0..10 {
        for objective in [Objective::BinPacking, Objective::Knapsack, Objective::StripPacking] {
            for variant in variant_grid(objective) {
                let spec = RandomSpec {
                    copies: 4 + round,
                    ..RandomSpec::default()
                };
                let variant = variant.with_first_cut(random_first_cut(&mut rng));
                let inst = random_instance(&mut rng, spec, variant);
                let Some(doc) = solve(&inst, 300) else { continue };
                let report = validate(&inst, &doc);
                assert!(report.ok, "{}\n{report}\n{}", inst.variant().name(), doc.to_json());
                checked += 1;
            }
        }
    }
    assert!(checked > 200);
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = VariantConfig::new(Objective::BinPacking).with_rotation(true);
    let inst = random_instance(&mut rng, RandomSpec::default(), v);
    let doc = solve(&inst, 1000).unwrap();
    let text = doc.to_json();
    assert_eq!(SolutionDocument::from_json(&text).unwrap(), doc);
    assert!(text.ends_with("}\n"));
    assert!(!text.contains('\r'));
}

fn instance(items: Vec<ItemType>, w: i64, h: i64, variant: VariantConfig) -> Instance {
    Instance::build(items, vec![BinType::new(0, w, h, BinCopies::Unbounded)], variant).unwrap()
}

/// Document with one bin whose cut tree is a single waste-free list of leaves;
/// tree checks are not the point of these cases.
fn doc(inst: &Instance, first: CutOrientation, placements: &[(usize, i64, i64, i64, i64, bool)]) -> SolutionDocument {
    let bin = inst.bin(0);
    let mut d = SolutionDocument::empty(inst);
    d.bins.push(BinRecord {
        bin_type: 0,
        first_stage: first,
        width: bin.width,
        height: bin.height,
        plates: Vec::new(),
    });
    d.placements = placements
        .iter()
        .map(|&(item, x, y, w, h, rotated)| PlacementRecord {
            item,
            bin: 0,
            x,
            y,
            w,
            h,
            rotated,
        })
        .collect();
    d.objective = d.recompute_objective(inst);
    d
}

fn codes_without_tree(inst: &Instance, d: &SolutionDocument) -> Vec<ViolationCode> {
    let mut codes = validate(inst, d).codes();
    codes.retain(|c| *c != ViolationCode::TreeMismatch);
    codes.dedup();
    codes
}

#[test]
fn pinwheel_is_not_guillotine() {
    let items = vec![
        ItemType::new(0, 2, 1),
        ItemType::new(1, 1, 2),
        ItemType::new(2, 2, 1),
        ItemType::new(3, 1, 2),
        ItemType::new(4, 1, 1),
    ];
    let inst = instance(items, 3, 3, VariantConfig::new(Objective::BinPacking));
    let d = doc(
        &inst,
        CutOrientation::Vertical,
        &[
            (0, 0, 0, 2, 1, false),
            (1, 2, 0, 1, 2, false),
            (2, 1, 2, 2, 1, false),
            (3, 0, 1, 1, 2, false),
            (4, 1, 1, 1, 1, false),
        ],
    );
    assert_eq!(codes_without_tree(&inst, &d), vec![ViolationCode::Stages]);
}

#[test]
fn three_stage_layout_under_two_stages() {
    // the right column holds a row of two items under a wider item
    let items = vec![ItemType::new(0, 2, 4), ItemType::new(1, 1, 2).with_copies(2), ItemType::new(2, 2, 2)];
    let layout = [
        (0, 0, 0, 2, 4, false),
        (1, 2, 0, 1, 2, false),
        (1, 3, 0, 1, 2, false),
        (2, 2, 2, 2, 2, false),
    ];
    let v = VariantConfig::new(Objective::BinPacking);
    let three = instance(items.clone(), 4, 4, v.clone().with_stages(Stages::Three));
    assert!(codes_without_tree(&three, &doc(&three, CutOrientation::Vertical, &layout)).is_empty());
    let two = instance(items, 4, 4, v.with_stages(Stages::Two));
    let d = doc(&two, CutOrientation::Vertical, &layout);
    assert_eq!(codes_without_tree(&two, &d), vec![ViolationCode::Stages]);
}

#[test]
fn exactness_and_trim_cuts() {
    // a row of a 2x3 and a 2x2 item under a 4x1 item
    let items = vec![ItemType::new(0, 2, 3), ItemType::new(1, 2, 2), ItemType::new(2, 4, 1)];
    let layout = [(0, 0, 0, 2, 3, false), (1, 2, 0, 2, 2, false), (2, 0, 3, 4, 1, false)];
    let v = VariantConfig::new(Objective::BinPacking).with_stages(Stages::Three);
    let ne = instance(items.clone(), 4, 4, v.clone().with_exactness(Exactness::NonExact));
    assert!(codes_without_tree(&ne, &doc(&ne, CutOrientation::Vertical, &layout)).is_empty());
    let ex = instance(items, 4, 4, v.with_exactness(Exactness::Exact));
    assert_eq!(
        codes_without_tree(&ex, &doc(&ex, CutOrientation::Vertical, &layout)),
        vec![ViolationCode::ExactCut]
    );
    // the trimmed item may also sit at the top of its sub-plate
    let floating = [(0, 0, 0, 2, 3, false), (1, 2, 1, 2, 1 + 1, false), (2, 0, 3, 4, 1, false)];
    let d = doc(&ne, CutOrientation::Vertical, &floating);
    assert!(codes_without_tree(&ne, &d).is_empty());
}

#[test]
fn two_trim_cuts_are_rejected() {
    // 2-stage, horizontal strip of height 3 holding a 1x1 item that touches
    // neither the strip top nor bottom
    let items = vec![ItemType::new(0, 2, 3), ItemType::new(1, 1, 1)];
    let layout = [(0, 0, 0, 2, 3, false), (1, 2, 1, 1, 1, false)];
    let v = VariantConfig::new(Objective::BinPacking).with_stages(Stages::Two);
    let inst = instance(items, 3, 3, v);
    let d = doc(&inst, CutOrientation::Horizontal, &layout);
    assert_eq!(codes_without_tree(&inst, &d), vec![ViolationCode::Stages]);
}

#[test]
fn item_level_violations() {
    let v = VariantConfig::new(Objective::BinPacking).with_first_cut(FirstCut::Vertical);
    let inst = instance(vec![ItemType::new(0, 2, 1), ItemType::new(1, 1, 1)], 4, 4, v);
    let ok = doc(&inst, CutOrientation::Vertical, &[(0, 0, 0, 2, 1, false), (1, 2, 0, 1, 1, false)]);
    assert!(codes_without_tree(&inst, &ok).is_empty());

    let rotated = doc(&inst, CutOrientation::Vertical, &[(0, 0, 0, 1, 2, true), (1, 2, 0, 1, 1, false)]);
    assert_eq!(codes_without_tree(&inst, &rotated), vec![ViolationCode::Rotation]);

    let overlap = doc(&inst, CutOrientation::Vertical, &[(0, 0, 0, 2, 1, false), (1, 1, 0, 1, 1, false)]);
    assert_eq!(codes_without_tree(&inst, &overlap), vec![ViolationCode::Overlap]);

    let outside = doc(&inst, CutOrientation::Vertical, &[(0, 3, 0, 2, 1, false), (1, 0, 0, 1, 1, false)]);
    assert_eq!(codes_without_tree(&inst, &outside), vec![ViolationCode::OutOfBounds]);

    let missing = doc(&inst, CutOrientation::Vertical, &[(0, 0, 0, 2, 1, false)]);
    assert_eq!(codes_without_tree(&inst, &missing), vec![ViolationCode::Incomplete]);

    let twice = doc(
        &inst,
        CutOrientation::Vertical,
        &[(0, 0, 0, 2, 1, false), (1, 2, 0, 1, 1, false), (1, 3, 0, 1, 1, false)],
    );
    assert_eq!(codes_without_tree(&inst, &twice), vec![ViolationCode::Copies]);

    let horizontal = doc(&inst, CutOrientation::Horizontal, &[(0, 0, 0, 2, 1, false), (1, 2, 0, 1, 1, false)]);
    assert_eq!(codes_without_tree(&inst, &horizontal), vec![ViolationCode::Orientation]);

    let mut wrong = ok.clone();
    wrong.objective = 2;
    assert_eq!(codes_without_tree(&inst, &wrong), vec![ViolationCode::Objective]);

    let mut unknown = ok.clone();
    unknown.placements[1].item = 7;
    assert!(codes_without_tree(&inst, &unknown).contains(&ViolationCode::UnknownItem));

    let mut digest = ok.clone();
    digest.instance_digest = "00".into();
    assert_eq!(codes_without_tree(&inst, &digest), vec![ViolationCode::Digest]);

    // the bare document has no cut tree
    assert!(validate(&inst, &ok).has(ViolationCode::TreeMismatch));
}

#[test]
fn tree_must_match_placements() {
    let v = VariantConfig::new(Objective::BinPacking).with_rotation(true);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = random_instance(&mut rng, RandomSpec::default(), v);
    let doc = solve(&inst, 500).unwrap();
    assert!(validate(&inst, &doc).ok);
    let mut moved = doc.clone();
    fn first_item(nodes: &mut [CutNode]) -> Option<&mut CutNode> {
        for n in nodes {
            if n.kind == NodeKind::Item {
                return Some(n);
            }
            if let Some(found) = first_item(&mut n.children) {
                return Some(found);
            }
        }
        None
    }
    first_item(&mut moved.bins[0].plates).unwrap().item = Some(99);
    assert_eq!(validate(&inst, &moved).codes(), vec![ViolationCode::TreeMismatch]);
}

#[test]
fn bin_copy_limit() {
    let inst = Instance::build(
        vec![ItemType::new(0, 3, 3).with_copies(2)],
        vec![BinType::new(0, 3, 3, BinCopies::Limited(1))],
        VariantConfig::new(Objective::Knapsack),
    )
    .unwrap();
    let mut d = doc(&inst, CutOrientation::Vertical, &[(0, 0, 0, 3, 3, false)]);
    d.bins.push(d.bins[0].clone());
    d.placements.push(PlacementRecord { bin: 1, ..d.placements[0] });
    d.objective = d.recompute_objective(&inst);
    assert_eq!(codes_without_tree(&inst, &d), vec![ViolationCode::BinCopies]);
}
