//! Anytime tree search for two- and three-staged guillotine bin packing,
//! knapsack and strip packing.
//!
//! The search explores partial patterns built item by item
//! ([`branching::BranchingScheme`]) with a memory-bounded best-first search
//! ([`search::restart_loop`]) ranked by a guide function ([`guide::GuideId`]).

pub mod branching;
pub mod error;
pub mod guide;
pub mod instance;
pub mod objective;
pub mod search;
pub mod state;

pub use branching::{BranchingOptions, BranchingScheme, Insertion};
pub use error::{ConfigError, GuideError, InstanceError};
pub use guide::{compare, guide_value, GuideId, GuideValue};
pub use instance::{
    Area, BinCopies, BinType, CutOrientation, Exactness, FirstCut, GrowthFactor, Instance,
    ItemType, Length, Objective, Profit, Stages, VariantConfig,
};
pub use objective::ObjectiveValue;
pub use search::{portfolio_run, restart_loop, Budget, SearchReport, WorkerConfig};
pub use state::{InsertionKind, PatternState, Placement, Solution, SolutionBin};
