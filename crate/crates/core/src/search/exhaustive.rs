use std::collections::HashMap;
use std::sync::Arc;

use crate::branching::{BranchingOptions, BranchingScheme};
use crate::instance::{Instance, Objective};
use crate::objective::ObjectiveValue;
use crate::search::incumbent::Incumbent;
use crate::state::{Front, OpenBin, PatternState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOutcome {
    pub best: Option<ObjectiveValue>,
    /// Distinct subtrees expanded.
    pub nodes: u64,
    /// False when the node limit cut the enumeration short.
    pub complete: bool,
}

/// Everything the subtree below a node depends on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct SubtreeKey {
    used_copies: Vec<u32>,
    bins_used: usize,
    current_bin: Option<OpenBin>,
    front: Front,
    sym_min: [usize; 3],
    strip_extent: i64,
}

impl SubtreeKey {
    fn of(objective: Objective, node: &PatternState) -> Self {
        Self {
            used_copies: node.used_copies.clone(),
            bins_used: node.bins_used,
            current_bin: node.current_bin,
            front: node.front,
            sym_min: node.sym_min,
            strip_extent: match objective {
                Objective::StripPacking => node.strip_extent,
                _ => 0,
            },
        }
    }
}

/// Value of a descendant relative to the subtree root. The offset is shared by
/// every descendant, so comparing relative values ranks absolute ones.
fn relative(objective: Objective, root: &PatternState, leaf: &PatternState) -> ObjectiveValue {
    let area = leaf.area() - root.prev_bins_area;
    match objective {
        Objective::BinPacking => {
            ObjectiveValue::new(objective, (leaf.bins_used - root.bins_used) as i64, area)
        }
        Objective::Knapsack => {
            ObjectiveValue::new(objective, leaf.item_profit - root.item_profit, area)
        }
        Objective::StripPacking => ObjectiveValue::new(objective, leaf.strip_extent, area),
    }
}

/// Turns a relative value back into the value of a solution below `root`.
fn absolute(instance: &Instance, root: &PatternState, rel: ObjectiveValue) -> ObjectiveValue {
    let objective = instance.objective();
    let area = rel.secondary + root.prev_bins_area;
    match objective {
        Objective::BinPacking => ObjectiveValue::new(
            objective,
            rel.primary + root.bins_used as i64,
            area - instance.total_item_area(),
        ),
        Objective::Knapsack => ObjectiveValue::new(objective, rel.primary + root.item_profit, area),
        Objective::StripPacking => {
            ObjectiveValue::new(objective, rel.primary, area - instance.total_item_area())
        }
    }
}

fn better(a: Option<ObjectiveValue>, b: Option<ObjectiveValue>) -> Option<ObjectiveValue> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.is_better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

struct Enumerator<'a> {
    scheme: BranchingScheme<'a>,
    objective: Objective,
    memo: HashMap<SubtreeKey, Option<ObjectiveValue>>,
    seq: u64,
    nodes: u64,
    node_limit: u64,
}

impl Enumerator<'_> {
    /// Best relative value in the subtree of `node`, `Err` once over the limit.
    fn visit(&mut self, node: &Arc<PatternState>) -> Result<Option<ObjectiveValue>, ()> {
        let key = SubtreeKey::of(self.objective, node);
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(());
        }
        let mut best = if Incumbent::is_reportable(self.objective, node) {
            Some(relative(self.objective, node, node))
        } else {
            None
        };
        for child in self.scheme.children(node, &mut self.seq) {
            let sub = self.visit(&child)?;
            // re-anchor the child's relative value at `node`
            let shifted = sub.map(|v| {
                let mut v = v;
                v.secondary += child.prev_bins_area - node.prev_bins_area;
                match self.objective {
                    Objective::BinPacking => v.primary += (child.bins_used - node.bins_used) as i64,
                    Objective::Knapsack => v.primary += child.item_profit - node.item_profit,
                    Objective::StripPacking => {}
                }
                v
            });
            best = better(best, shifted);
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Exhaustive enumeration of the whole branching tree. Subtrees reached
/// through different insertion orders are solved once.
pub fn exhaustive_search(
    instance: &Instance,
    options: BranchingOptions,
    node_limit: u64,
) -> ExhaustiveOutcome {
    let scheme = BranchingScheme::new(instance, options);
    let root = scheme.root();
    let mut e = Enumerator {
        scheme,
        objective: instance.objective(),
        memo: HashMap::new(),
        seq: 0,
        nodes: 0,
        node_limit,
    };
    match e.visit(&root) {
        Ok(rel) => ExhaustiveOutcome {
            best: rel.map(|v| absolute(instance, &root, v)),
            nodes: e.nodes,
            complete: true,
        },
        Err(()) => ExhaustiveOutcome {
            best: None,
            nodes: e.nodes,
            complete: false,
        },
    }
}
