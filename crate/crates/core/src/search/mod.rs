//! Anytime search: memory-bounded A* with restarts, and the worker portfolio.

mod exhaustive;
mod incumbent;
mod mba;
mod portfolio;
mod queue;

pub use exhaustive::{exhaustive_search, ExhaustiveOutcome};
pub use incumbent::{
    incumbent_update, Improvement, Incumbent, IncumbentSink, OfferContext, SharedIncumbent,
};
pub use mba::{
    mba_star, restart_loop, Budget, MbaOutcome, ThresholdSchedule, WorkerConfig, WorkerReport,
    WorkerState,
};
pub use portfolio::{portfolio_run, SearchReport, SearchSummary};
pub use queue::NodeQueue;
