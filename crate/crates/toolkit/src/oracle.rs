//! Brute-force optima for tiny instances.
//!
//! [`brute_force_optimum`] enumerates the full branching tree with symmetry
//! breaking and dominance disabled. [`pattern_family_optimum`] computes the
//! primary objective from scratch by dynamic programming over item subsets,
//! without using the solver's branching code at all.

use guillotine_core::search::exhaustive_search;
use guillotine_core::{
    BranchingOptions, CutOrientation, Exactness, Instance, Objective, ObjectiveValue, Stages,
};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_items: u64,
    pub max_nodes: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_items: 5,
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("instance has no feasible solution")]
    Infeasible,
}

fn check_items(instance: &Instance, caps: OracleCaps) -> Result<(), OracleError> {
    if instance.total_item_count() > caps.max_items {
        return Err(OracleError::CapExceeded(format!(
            "{} item copies, at most {} allowed",
            instance.total_item_count(),
            caps.max_items
        )));
    }
    Ok(())
}

/// Optimum over the solver's pattern family by exhaustive enumeration.
pub fn brute_force_optimum(
    instance: &Instance,
    caps: OracleCaps,
) -> Result<ObjectiveValue, OracleError> {
    check_items(instance, caps)?;
    let options = BranchingOptions {
        symmetry_depth: 4,
        dominance: false,
    };
    let out = exhaustive_search(instance, options, caps.max_nodes);
    if !out.complete {
        return Err(OracleError::CapExceeded(format!(
            "more than {} nodes",
            caps.max_nodes
        )));
    }
    out.best.ok_or(OracleError::Infeasible)
}

/// One item copy with its admissible (width, height) shapes.
#[derive(Debug, Clone)]
struct Unit {
    shapes: Vec<(i64, i64)>,
    profit: i64,
}

fn units(instance: &Instance) -> Vec<Unit> {
    let mut out = Vec::new();
    for item in instance.items() {
        let mut shapes = vec![(item.width, item.height)];
        if instance.can_rotate(item.id) && item.width != item.height {
            shapes.push((item.height, item.width));
        }
        for _ in 0..item.copies {
            out.push(Unit {
                shapes: shapes.clone(),
                profit: item.profit,
            });
        }
    }
    out
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// Every combination of shapes for the units of `mask`.
fn shape_choices(units: &[Unit], mask: usize) -> Vec<Vec<(i64, i64)>> {
    let mut out = vec![Vec::new()];
    for i in members(mask, units.len()) {
        let mut next = Vec::new();
        for partial in &out {
            for &s in &units[i].shapes {
                let mut p = partial.clone();
                p.push(s);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn pareto_insert(set: &mut Vec<(i64, i64)>, c: (i64, i64)) {
    if set.iter().any(|&(w, h)| w <= c.0 && h <= c.1) {
        return;
    }
    set.retain(|&(w, h)| !(c.0 <= w && c.1 <= h));
    set.push(c);
}

/// Proper non-empty submasks of `mask` that contain its lowest member.
fn anchored_splits(mask: usize) -> impl Iterator<Item = usize> {
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut sub = rest;
    let mut done = false;
    std::iter::from_fn(move || {
        while !done {
            let cur = sub;
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & rest;
            }
            let part = cur | low;
            if part != mask {
                return Some(part);
            }
        }
        None
    })
}

/// For each subset, the narrowest total width of a staged pattern of height at
/// most `height` whose first cuts are parallel to the height axis.
fn min_widths(units: &[Unit], stages: Stages, exact: bool, height: i64) -> Vec<Option<i64>> {
    let n = units.len();
    let full = 1usize << n;
    // column options: minimal (width, height) pairs
    let mut column: Vec<Vec<(i64, i64)>> = vec![Vec::new(); full];
    match stages {
        Stages::Two => {
            // items stacked along the height, trimmed to the column width
            for (mask, options) in column.iter_mut().enumerate().skip(1) {
                for shapes in shape_choices(units, mask) {
                    let w = shapes.iter().map(|s| s.0).max().unwrap();
                    let h: i64 = shapes.iter().map(|s| s.1).sum();
                    if exact && shapes.iter().any(|s| s.0 != w) {
                        continue;
                    }
                    if h <= height {
                        pareto_insert(options, (w, h));
                    }
                }
            }
        }
        Stages::Three => {
            // rows: items side by side, trimmed to the row height
            let mut row: Vec<Vec<(i64, i64)>> = vec![Vec::new(); full];
            for (mask, options) in row.iter_mut().enumerate().skip(1) {
                for shapes in shape_choices(units, mask) {
                    let w: i64 = shapes.iter().map(|s| s.0).sum();
                    let h = shapes.iter().map(|s| s.1).max().unwrap();
                    if exact && shapes.iter().any(|s| s.1 != h) {
                        continue;
                    }
                    if h <= height {
                        pareto_insert(options, (w, h));
                    }
                }
            }
            // columns: rows stacked along the height
            for mask in 1..full {
                let mut opts = row[mask].clone();
                for part in anchored_splits(mask) {
                    for &(rw, rh) in &row[part] {
                        for &(cw, ch) in &column[mask ^ part] {
                            if rh + ch <= height {
                                pareto_insert(&mut opts, (rw.max(cw), rh + ch));
                            }
                        }
                    }
                }
                column[mask] = opts;
            }
        }
    }
    // bin: columns side by side
    let mut best: Vec<Option<i64>> = vec![None; full];
    best[0] = Some(0);
    for mask in 1..full {
        let mut b = column[mask].iter().map(|c| c.0).min();
        for part in anchored_splits(mask) {
            let own = column[part].iter().map(|c| c.0).min();
            if let (Some(a), Some(r)) = (own, best[mask ^ part]) {
                b = Some(b.map_or(a + r, |x: i64| x.min(a + r)));
            }
        }
        best[mask] = b;
    }
    best
}

/// Which subsets fit in a `width` x `height` bin.
fn feasible_subsets(instance: &Instance, units: &[Unit], width: i64, height: i64) -> Vec<bool> {
    let variant = instance.variant();
    let exact = variant.exactness == Exactness::Exact;
    let mut ok = vec![false; 1 << units.len()];
    ok[0] = true;
    for &o in variant.first_cut.orientations() {
        // first cuts vertical: they run along the height
        let (w, h) = match o {
            CutOrientation::Vertical => (width, height),
            CutOrientation::Horizontal => (height, width),
        };
        let turned: Vec<Unit>;
        let us = match o {
            CutOrientation::Vertical => units,
            CutOrientation::Horizontal => {
                turned = units
                    .iter()
                    .map(|u| Unit {
                        shapes: u.shapes.iter().map(|&(a, b)| (b, a)).collect(),
                        profit: u.profit,
                    })
                    .collect();
                &turned
            }
        };
        for (mask, mw) in min_widths(us, variant.stages, exact, h).into_iter().enumerate() {
            if mw.is_some_and(|mw| mw <= w) {
                ok[mask] = true;
            }
        }
    }
    ok
}

/// Primary objective of an optimal solution, computed independently of the
/// branching scheme.
pub fn pattern_family_optimum(instance: &Instance, caps: OracleCaps) -> Result<i64, OracleError> {
    check_items(instance, caps)?;
    let units = units(instance);
    let n = units.len();
    let full = (1usize << n) - 1;
    let profit = |mask: usize| -> i64 { members(mask, n).iter().map(|&i| units[i].profit).sum() };
    match instance.objective() {
        Objective::StripPacking => {
            let bin = &instance.bins()[0];
            let fits = |h: i64| feasible_subsets(instance, &units, bin.width, h)[full];
            let (mut lo, mut hi) = (1, bin.height);
            if !fits(hi) {
                return Err(OracleError::Infeasible);
            }
            while lo < hi {
                let mid = (lo + hi) / 2;
                if fits(mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok(lo)
        }
        objective => {
            // reach[m]: item sets packable into the bins opened so far
            let mut reach = vec![false; full + 1];
            reach[0] = true;
            let mut best_profit = 0;
            let mut cache: Vec<(usize, Vec<bool>)> = Vec::new();
            for k in 0..n {
                let Some(t) = instance.bin_type_at(k) else {
                    break;
                };
                if !cache.iter().any(|(id, _)| *id == t) {
                    let b = instance.bin(t);
                    cache.push((t, feasible_subsets(instance, &units, b.width, b.height)));
                }
                let fit = &cache.iter().find(|(id, _)| *id == t).unwrap().1;
                let mut next = vec![false; full + 1];
                for m in 0..=full {
                    if !reach[m] {
                        continue;
                    }
                    let rest = full ^ m;
                    let mut s = rest;
                    while s != 0 {
                        if fit[s] {
                            next[m | s] = true;
                        }
                        s = (s - 1) & rest;
                    }
                }
                if objective == Objective::BinPacking && next[full] {
                    return Ok(k as i64 + 1);
                }
                for m in 0..=full {
                    if next[m] {
                        best_profit = best_profit.max(profit(m));
                        reach[m] = true;
                    }
                }
            }
            match objective {
                Objective::Knapsack => Ok(best_profit),
                _ => Err(OracleError::Infeasible),
            }
        }
    }
}
