//! The `packingsolver` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use guillotine_core::{
    portfolio_run, Budget, Exactness, FirstCut, GrowthFactor, Instance, Objective, Stages,
    VariantConfig, WorkerConfig,
};

use crate::document::SolutionDocument;
use crate::oracle::{brute_force_optimum, OracleCaps};
use crate::svg::render_svg;
use crate::validate::validate;
use crate::io;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

/// Variant and search flags shared by the solver and the bench harness.
#[derive(Debug, Clone, clap::Args)]
pub struct SolverArgs {
    /// bpp, kp or spp.
    #[arg(long)]
    pub objective: Objective,
    /// Number of stages, 2 or 3.
    #[arg(long, default_value = "3")]
    pub stages: Stages,
    /// exact or nonexact.
    #[arg(long, default_value = "nonexact")]
    pub exactness: Exactness,
    /// Direction of the first-stage cuts: h, v or any.
    #[arg(long, default_value = "any")]
    pub first_cut: FirstCut,
    #[arg(long, value_enum, default_value = "off")]
    pub rotation: Switch,
    /// Up to three workers as guide:symmetry-depth, e.g. c4:2,c4:3.
    #[arg(long)]
    pub workers: Option<String>,
    /// Seconds.
    #[arg(long, default_value_t = 10.0)]
    pub time_limit: f64,
    /// Stop each worker after this many node expansions.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Queue threshold growth factor, e.g. 3/2 or 1.5.
    #[arg(long, default_value = "3/2")]
    pub growth_factor: GrowthFactor,
    #[arg(long, default_value_t = 2)]
    pub initial_threshold: usize,
}

impl SolverArgs {
    pub fn variant(&self) -> Result<VariantConfig, String> {
        if self.initial_threshold == 0 {
            return Err("--initial-threshold must be positive".into());
        }
        if !(self.time_limit.is_finite() && self.time_limit >= 0.0) {
            return Err("--time-limit must be a non-negative number of seconds".into());
        }
        let mut v = VariantConfig::new(self.objective)
            .with_stages(self.stages)
            .with_exactness(self.exactness)
            .with_first_cut(self.first_cut)
            .with_rotation(self.rotation == Switch::On)
            .with_growth_factor(self.growth_factor);
        v.initial_threshold = self.initial_threshold;
        Ok(v)
    }

    pub fn workers(&self, variant: &VariantConfig) -> Result<Vec<WorkerConfig>, String> {
        match &self.workers {
            Some(spec) => WorkerConfig::parse_list(spec).map_err(|e| e.to_string()),
            None => Ok(vec![WorkerConfig::new(variant.guide, variant.symmetry_depth)]),
        }
    }

    /// Budget starting now.
    pub fn budget(&self) -> Budget {
        let budget = Budget::until(Instant::now() + Duration::from_secs_f64(self.time_limit));
        match self.node_limit {
            Some(n) => budget.with_node_limit(n),
            None => budget,
        }
    }

    /// Reads and builds an instance from item and bin files.
    pub fn load(&self, items: &Path, bins: &Path) -> Result<Instance, String> {
        let variant = self.variant()?;
        let items = io::read_items(items).map_err(|e| e.to_string())?;
        let bins = io::read_bins(bins, self.objective).map_err(|e| e.to_string())?;
        Instance::build(items, bins, variant).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "packingsolver",
    about = "Anytime tree search for two- and three-staged guillotine packing"
)]
pub struct Args {
    /// Item CSV file.
    #[arg(long)]
    pub items: PathBuf,
    /// Bin CSV file.
    #[arg(long)]
    pub bins: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Solution JSON file.
    #[arg(long)]
    pub output: PathBuf,
    /// Also draw the solution.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Compare with the brute-force optimum (tiny instances only).
    #[arg(long)]
    pub oracle: bool,
    /// Recorded in the solution metadata.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Prints a clap error; help and version requests are not errors.
pub(crate) fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = write!(err, "{text}");
        EXIT_USAGE
    } else {
        let _ = write!(out, "{text}");
        EXIT_OK
    }
}

/// Runs the solver as the binary would; returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => return clap_exit(e, out, err),
    };
    let loaded = args
        .solver
        .load(&args.items, &args.bins)
        .and_then(|inst| args.solver.workers(inst.variant()).map(|w| (inst, w)));
    let (instance, workers) = match loaded {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    log::info!("{} with {} item copies", instance.variant().name(), instance.total_item_count());

    let budget = args.solver.budget();
    let report = portfolio_run(&instance, &workers, &budget);
    let Some(doc) = SolutionDocument::from_report(&instance, &report, args.seed) else {
        let _ = writeln!(err, "error: no solution found within the limits");
        return EXIT_INVALID;
    };

    let mut code = EXIT_OK;
    let check = validate(&instance, &doc);
    if !check.ok {
        let _ = writeln!(err, "error: solution failed validation\n{check}");
        code = EXIT_INVALID;
    }
    if let Err(e) = fs::write(&args.output, doc.to_json()) {
        let _ = writeln!(err, "error: {}: {e}", args.output.display());
        return EXIT_USAGE;
    }
    if let Some(path) = &args.svg {
        if let Err(e) = fs::write(path, render_svg(&doc)) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let time = report.incumbent.time_to_best.unwrap_or(0.0);
    let _ = writeln!(
        out,
        "objective={} time_to_best={time:.3} nodes={}",
        doc.objective,
        report.expansions()
    );
    if args.oracle {
        match brute_force_optimum(&instance, OracleCaps::default()) {
            Ok(v) => {
                let _ = writeln!(out, "oracle={} match={}", v.primary, v.primary == doc.objective);
            }
            Err(e) => {
                let _ = writeln!(out, "oracle=unavailable ({e})");
            }
        }
    }
    code
}
