use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Instant;

use serde::Serialize;

use super::incumbent::{Incumbent, SharedIncumbent};
use super::mba::{restart_loop, Budget, WorkerConfig, WorkerReport};
use crate::instance::Instance;

/// Result of a portfolio run.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub workers: Vec<WorkerReport>,
    pub incumbent: Incumbent,
    /// Some worker exhausted its tree without trimming.
    pub certified: bool,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub settings: String,
    pub thresholds: Vec<Vec<usize>>,
    pub expansions: u64,
    pub certified: bool,
}

impl SearchReport {
    pub fn expansions(&self) -> u64 {
        self.workers.iter().map(|w| w.expansions).sum()
    }

    pub fn settings_label(&self) -> String {
        self.workers
            .iter()
            .map(|w| w.label.clone())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            settings: self.settings_label(),
            thresholds: self.workers.iter().map(|w| w.thresholds()).collect(),
            expansions: self.expansions(),
            certified: self.certified,
        }
    }
}

/// Runs one restart loop per configuration, concurrently, sharing one
/// incumbent. Workers stop early once any of them certifies its tree.
pub fn portfolio_run(instance: &Instance, configs: &[WorkerConfig], budget: &Budget) -> SearchReport {
    assert!(
        (1..=3).contains(&configs.len()),
        "a portfolio runs one to three workers"
    );
    let start = Instant::now();
    let sink = SharedIncumbent::starting_at(instance, start);
    let done = Arc::new(AtomicBool::new(false));
    let budget = budget.clone().with_stop_flag(Arc::clone(&done));

    let workers: Vec<WorkerReport> = if configs.len() == 1 {
        vec![restart_loop(instance, &configs[0], 0, &budget, &sink)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = configs
                .iter()
                .enumerate()
                .map(|(i, config)| {
                    let sink = &sink;
                    let budget = &budget;
                    let done = &done;
                    scope.spawn(move || {
                        let report = restart_loop(instance, config, i, budget, sink);
                        if report.certified {
                            done.store(true, Ordering::Relaxed);
                        }
                        report
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };
    let certified = workers.iter().any(|w| w.certified);
    SearchReport {
        workers,
        incumbent: sink.into_inner(),
        certified,
        elapsed: start.elapsed().as_secs_f64(),
    }
}
