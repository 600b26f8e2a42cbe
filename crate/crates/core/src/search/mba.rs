//! Memory-bounded A*: best-first search whose queue is trimmed to a threshold,
//! restarted with a larger threshold each time the queue runs dry.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::incumbent::{Incumbent, IncumbentSink, OfferContext};
use super::queue::NodeQueue;
use crate::branching::{BranchingOptions, BranchingScheme};
use crate::error::ConfigError;
use crate::guide::GuideId;
use crate::instance::{GrowthFactor, Instance};
use crate::state::PatternState;

/// Settings of one search worker, written `cG:S` (guide `cG`, symmetry depth `S`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkerConfig {
    pub guide: GuideId,
    pub symmetry_depth: u8,
    #[serde(default = "default_true")]
    pub dominance: bool,
}

fn default_true() -> bool {
    true
}

impl WorkerConfig {
    pub fn new(guide: GuideId, symmetry_depth: u8) -> Self {
        Self {
            guide,
            symmetry_depth,
            dominance: true,
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn branching_options(&self) -> BranchingOptions {
        BranchingOptions {
            symmetry_depth: self.symmetry_depth,
            dominance: self.dominance,
        }
    }

    /// Parses a comma-separated list of one to three workers.
    pub fn parse_list(s: &str) -> Result<Vec<WorkerConfig>, ConfigError> {
        let workers = s
            .split(',')
            .map(|w| w.trim().parse())
            .collect::<Result<Vec<_>, _>>()?;
        if workers.is_empty() || workers.len() > 3 {
            return Err(ConfigError::Parse(format!(
                "expected 1 to 3 workers, got {}",
                workers.len()
            )));
        }
        Ok(workers)
    }
}

impl fmt::Display for WorkerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.guide, self.symmetry_depth)
    }
}

impl FromStr for WorkerConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (g, d) = s
            .split_once(':')
            .ok_or_else(|| ConfigError::Parse(format!("worker '{s}' is not of the form cG:S")))?;
        if !g.starts_with(['c', 'C']) {
            return Err(ConfigError::Parse(format!("worker '{s}' is not of the form cG:S")));
        }
        let guide: GuideId = g.parse()?;
        let symmetry_depth: u8 = d
            .parse()
            .map_err(|_| ConfigError::Parse(format!("bad symmetry depth in '{s}'")))?;
        if !(1..=4).contains(&symmetry_depth) {
            return Err(ConfigError::BadVariant(format!(
                "symmetry depth must be in 1..=4, got {symmetry_depth}"
            )));
        }
        Ok(WorkerConfig::new(guide, symmetry_depth))
    }
}

/// When to stop searching.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    /// Maximum node expansions per worker, across restarts.
    pub node_limit: Option<u64>,
    stops: Vec<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn until(deadline: Instant) -> Self {
        Self {
            deadline: Some(deadline),
            ..Self::default()
        }
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    /// Also stop once `flag` is raised.
    pub fn with_stop_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stops.push(flag);
        self
    }

    pub fn is_over(&self, expansions: u64) -> bool {
        if self.node_limit.is_some_and(|l| expansions >= l) {
            return true;
        }
        if self.stops.iter().any(|s| s.load(Ordering::Relaxed)) {
            return true;
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Outcome of one bounded best-first pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbaOutcome {
    pub threshold: usize,
    /// The queue emptied before the budget ran out.
    pub exhausted: bool,
    /// At least one node was discarded by the threshold.
    pub trimmed: bool,
    pub expanded: u64,
    /// Largest queue size observed after trimming.
    pub peak_queue: usize,
}

/// Running statistics of one worker.
#[derive(Debug, Clone, Default)]
pub struct WorkerState {
    pub worker: usize,
    pub restart: usize,
    pub expansions: u64,
    /// FNV-1a digest of the expansion sequence.
    pub digest: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

impl WorkerState {
    pub fn new(worker: usize) -> Self {
        Self {
            worker,
            digest: FNV_OFFSET,
            ..Self::default()
        }
    }

    fn record(&mut self, node: &PatternState) {
        self.expansions += 1;
        let (item, kind) = node
            .last_placement()
            .map(|p| (p.item as u64 + 1, p.kind as u64 + 1))
            .unwrap_or((0, 0));
        for v in [node.seq(), item, kind] {
            for b in v.to_le_bytes() {
                self.digest ^= b as u64;
                self.digest = self.digest.wrapping_mul(FNV_PRIME);
            }
        }
    }

    fn ctx(&self) -> OfferContext {
        OfferContext {
            worker: self.worker,
            restart: self.restart,
            expansions: self.expansions,
        }
    }
}

/// One pass of memory-bounded A* with queue threshold `threshold`.
///
/// Every generated reportable node is offered to `sink`. Complete nodes are
/// not queued since they have no children.
pub fn mba_star(
    scheme: &BranchingScheme<'_>,
    guide: GuideId,
    threshold: usize,
    budget: &Budget,
    sink: &dyn IncumbentSink,
    state: &mut WorkerState,
) -> MbaOutcome {
    let objective = scheme.instance().objective();
    let mut queue = NodeQueue::new(guide);
    let root = scheme.root();
    if Incumbent::is_reportable(objective, &root) {
        sink.offer(&root, state.ctx());
    }
    queue.push(root);
    let mut next_seq = 0u64;
    let mut outcome = MbaOutcome {
        threshold,
        exhausted: false,
        trimmed: false,
        expanded: 0,
        peak_queue: 1,
    };
    loop {
        if queue.is_empty() {
            outcome.exhausted = true;
            break;
        }
        if budget.is_over(state.expansions) {
            break;
        }
        let node = queue.pop_best().expect("queue is not empty");
        state.record(&node);
        outcome.expanded += 1;
        for child in scheme.children(&node, &mut next_seq) {
            if Incumbent::is_reportable(objective, &child) {
                sink.offer(&child, state.ctx());
            }
            if !child.is_complete() {
                queue.push(child);
            }
        }
        if queue.trim(threshold) > 0 {
            outcome.trimmed = true;
        }
        outcome.peak_queue = outcome.peak_queue.max(queue.len());
    }
    outcome
}

/// Threshold sequence `D0, ceil(D0*f), ...` with strict growth.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdSchedule {
    next: usize,
    factor: GrowthFactor,
}

impl ThresholdSchedule {
    pub fn new(initial: usize, factor: GrowthFactor) -> Self {
        Self {
            next: initial.max(1),
            factor,
        }
    }
}

impl Iterator for ThresholdSchedule {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let current = self.next;
        self.next = self.factor.next_threshold(current);
        Some(current)
    }
}

/// Statistics of one worker's restart loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerReport {
    pub worker: usize,
    pub label: String,
    pub restarts: Vec<MbaOutcome>,
    pub expansions: u64,
    /// A pass explored the whole tree without trimming.
    pub certified: bool,
    pub expansion_digest: u64,
}

impl WorkerReport {
    pub fn thresholds(&self) -> Vec<usize> {
        self.restarts.iter().map(|r| r.threshold).collect()
    }
}

/// Runs memory-bounded A* with growing thresholds until the budget runs out or
/// a pass exhausts the tree without trimming.
pub fn restart_loop(
    instance: &Instance,
    config: &WorkerConfig,
    worker: usize,
    budget: &Budget,
    sink: &dyn IncumbentSink,
) -> WorkerReport {
    let scheme = BranchingScheme::new(instance, config.branching_options());
    let variant = instance.variant();
    let mut state = WorkerState::new(worker);
    let mut restarts = Vec::new();
    let mut certified = false;
    for (restart, threshold) in
        ThresholdSchedule::new(variant.initial_threshold, variant.growth_factor).enumerate()
    {
        if budget.is_over(state.expansions) {
            break;
        }
        state.restart = restart;
        let outcome = mba_star(&scheme, config.guide, threshold, budget, sink, &mut state);
        log::info!(
            "worker {worker} ({config}) threshold {threshold}: {} expansions, exhausted={} trimmed={}",
            outcome.expanded,
            outcome.exhausted,
            outcome.trimmed
        );
        restarts.push(outcome);
        if outcome.exhausted && !outcome.trimmed {
            certified = true;
            break;
        }
        if !outcome.exhausted {
            break;
        }
    }
    WorkerReport {
        worker,
        label: config.label(),
        restarts,
        expansions: state.expansions,
        certified,
        expansion_digest: state.digest,
    }
}
