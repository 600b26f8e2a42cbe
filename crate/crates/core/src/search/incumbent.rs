use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::instance::{Instance, Objective};
use crate::objective::ObjectiveValue;
use crate::state::{PatternState, Solution};

/// One accepted improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub value: ObjectiveValue,
    /// Seconds since the search started.
    pub time: f64,
    pub worker: usize,
    /// Index of the restart (threshold) during which the solution was found.
    pub restart: usize,
    /// Expansions performed by the worker when the solution was found.
    pub expansions: u64,
}

/// Where a candidate solution was found.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OfferContext {
    pub worker: usize,
    pub restart: usize,
    pub expansions: u64,
}

/// Best solution found so far.
#[derive(Debug, Clone, Default)]
pub struct Incumbent {
    pub solution: Option<Solution>,
    pub time_to_best: Option<f64>,
    pub log: Vec<Improvement>,
}

impl Incumbent {
    pub fn value(&self) -> Option<ObjectiveValue> {
        self.solution.as_ref().map(|s| s.value)
    }

    /// Whether `candidate` may be reported at all for this objective.
    pub fn is_reportable(objective: Objective, candidate: &PatternState) -> bool {
        match objective {
            Objective::Knapsack => true,
            Objective::BinPacking | Objective::StripPacking => candidate.is_complete(),
        }
    }

    /// Whether `candidate` is reportable and strictly better than the incumbent.
    pub fn accepts(&self, objective: Objective, candidate: &PatternState) -> bool {
        if !Self::is_reportable(objective, candidate) {
            return false;
        }
        match self.value() {
            None => true,
            Some(current) => candidate.objective_value(objective).is_better_than(&current),
        }
    }
}

/// Pure update: the new incumbent when `candidate` strictly wins, else `current`.
pub fn incumbent_update(
    instance: &Instance,
    current: Incumbent,
    candidate: &PatternState,
    time: f64,
    ctx: OfferContext,
) -> Incumbent {
    if !current.accepts(instance.objective(), candidate) {
        return current;
    }
    let solution = candidate.solution(instance);
    let mut next = current;
    next.log.push(Improvement {
        value: solution.value,
        time,
        worker: ctx.worker,
        restart: ctx.restart,
        expansions: ctx.expansions,
    });
    next.time_to_best = Some(time);
    next.solution = Some(solution);
    next
}

/// Receives candidate solutions from search workers.
pub trait IncumbentSink: Sync {
    /// Returns true when the candidate became the new incumbent.
    fn offer(&self, candidate: &PatternState, ctx: OfferContext) -> bool;
}

/// Incumbent shared by concurrent workers. Offers are linearized by a mutex
/// and only strict improvements are kept.
#[derive(Debug)]
pub struct SharedIncumbent<'a> {
    instance: &'a Instance,
    start: Instant,
    inner: Mutex<Incumbent>,
}

impl<'a> SharedIncumbent<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self::starting_at(instance, Instant::now())
    }

    pub fn starting_at(instance: &'a Instance, start: Instant) -> Self {
        Self {
            instance,
            start,
            inner: Mutex::new(Incumbent::default()),
        }
    }

    pub fn start(&self) -> Instant {
        self.start
    }

    pub fn snapshot(&self) -> Incumbent {
        self.inner.lock().expect("incumbent lock poisoned").clone()
    }

    pub fn value(&self) -> Option<ObjectiveValue> {
        self.inner.lock().expect("incumbent lock poisoned").value()
    }

    pub fn into_inner(self) -> Incumbent {
        self.inner.into_inner().expect("incumbent lock poisoned")
    }
}

impl IncumbentSink for SharedIncumbent<'_> {
    fn offer(&self, candidate: &PatternState, ctx: OfferContext) -> bool {
        let objective = self.instance.objective();
        if !Incumbent::is_reportable(objective, candidate) {
            return false;
        }
        let mut guard = self.inner.lock().expect("incumbent lock poisoned");
        if !guard.accepts(objective, candidate) {
            return false;
        }
        let time = self.start.elapsed().as_secs_f64();
        let current = std::mem::take(&mut *guard);
        *guard = incumbent_update(self.instance, current, candidate, time, ctx);
        log::debug!(
            "worker {} improved to {} at {:.3}s",
            ctx.worker,
            candidate.objective_value(objective).primary,
            time
        );
        true
    }
}
