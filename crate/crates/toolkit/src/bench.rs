//! The `packingsolver-bench` harness: solves many instances with one setting
//! and prints one CSV row per instance.
//!
//! Instances come from a manifest (CSV with `NAME,ITEMS,BINS` columns, paths
//! relative to the manifest), from a directory of `<name>_items.csv` /
//! `<name>_bins.csv` pairs, or from the random generator.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use guillotine_core::{portfolio_run, BinCopies, BinType, Instance, Objective};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cli::{clap_exit, SolverArgs, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use crate::document::SolutionDocument;
use crate::generate::{random_items, RandomSpec};
use crate::validate::validate;

#[derive(Debug, Clone, Parser)]
#[command(name = "packingsolver-bench", about = "Batch runs of the packing solver")]
pub struct BenchArgs {
    /// CSV manifest with NAME,ITEMS,BINS columns.
    #[arg(long, conflicts_with_all = ["dir", "random"])]
    pub manifest: Option<PathBuf>,
    /// Directory of <name>_items.csv and <name>_bins.csv pairs.
    #[arg(long, conflicts_with = "random")]
    pub dir: Option<PathBuf>,
    /// Number of random instances to generate.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Item copies per random instance.
    #[arg(long, default_value_t = 20)]
    pub copies: u32,
    /// Random bin width and height.
    #[arg(long, default_value_t = 100)]
    pub bin_size: i64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub variant: String,
    pub objective: Option<i64>,
    pub time_to_best: Option<f64>,
    pub nodes: u64,
    pub certified: bool,
    pub valid: bool,
}

impl BenchRow {
    pub const HEADER: &'static str = "name,variant,objective,time_to_best,nodes,certified,valid";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.name,
            self.variant,
            self.objective.map(|v| v.to_string()).unwrap_or_default(),
            self.time_to_best.map(|t| format!("{t:.3}")).unwrap_or_default(),
            self.nodes,
            self.certified,
            self.valid
        )
    }
}

/// Named instance sources of a bench run.
fn sources(args: &BenchArgs) -> Result<Vec<(String, PathBuf, PathBuf)>, String> {
    if let Some(manifest) = &args.manifest {
        let base = manifest.parent().unwrap_or(Path::new("."));
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(manifest)
            .map_err(|e| e.to_string())?;
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(|h| h.to_ascii_uppercase())
            .collect();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or(format!("manifest lacks a {name} column"))
        };
        let (n, i, b) = (col("NAME")?, col("ITEMS")?, col("BINS")?);
        let mut out = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            out.push((rec[n].to_string(), base.join(&rec[i]), base.join(&rec[b])));
        }
        return Ok(out);
    }
    if let Some(dir) = &args.dir {
        let mut out = Vec::new();
        for entry in fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))? {
            let path = entry.map_err(|e| e.to_string())?.path();
            let Some(name) = path
                .file_name()
                .and_then(|f| f.to_str())
                .and_then(|f| f.strip_suffix("_items.csv"))
            else {
                continue;
            };
            let bins = dir.join(format!("{name}_bins.csv"));
            if bins.exists() {
                out.push((name.to_string(), path.clone(), bins));
            }
        }
        out.sort();
        return Ok(out);
    }
    Ok(Vec::new())
}

fn solve(name: String, instance: &Instance, args: &SolverArgs) -> Result<BenchRow, String> {
    let workers = args.workers(instance.variant())?;
    let report = portfolio_run(instance, &workers, &args.budget());
    let doc = SolutionDocument::from_report(instance, &report, None);
    Ok(BenchRow {
        name,
        variant: instance.variant().name(),
        objective: doc.as_ref().map(|d| d.objective),
        time_to_best: report.incumbent.time_to_best,
        nodes: report.expansions(),
        certified: report.certified,
        valid: doc.as_ref().is_some_and(|d| validate(instance, d).ok),
    })
}

pub fn run_bench<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match BenchArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => return clap_exit(e, out, err),
    };
    let fail = |err: &mut dyn Write, e: String| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    };
    let variant = match args.solver.variant() {
        Ok(v) => v,
        Err(e) => return fail(err, e),
    };
    let mut instances: Vec<(String, Instance)> = Vec::new();
    match sources(&args) {
        Ok(list) => {
            for (name, items, bins) in list {
                match args.solver.load(&items, &bins) {
                    Ok(inst) => instances.push((name, inst)),
                    Err(e) => return fail(err, format!("{name}: {e}")),
                }
            }
        }
        Err(e) => return fail(err, e),
    }
    if let Some(n) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let spec = RandomSpec {
            copies: args.copies,
            max_side: args.bin_size,
            bin_width: args.bin_size,
            bin_height: args.bin_size,
        };
        for k in 0..n {
            let items = random_items(&mut rng, spec, variant.objective);
            let copies = match variant.objective {
                Objective::BinPacking => BinCopies::Unbounded,
                _ => BinCopies::Limited(1),
            };
            let bins = vec![BinType::new(0, args.bin_size, args.bin_size, copies)];
            match Instance::build(items, bins, variant.clone()) {
                Ok(inst) => instances.push((format!("random-{}-{k}", args.seed), inst)),
                Err(e) => return fail(err, e.to_string()),
            }
        }
    }
    if instances.is_empty() {
        return fail(err, "no instances: give --manifest, --dir or --random".into());
    }

    let _ = writeln!(out, "{}", BenchRow::HEADER);
    let mut code = EXIT_OK;
    for (name, inst) in instances {
        match solve(name, &inst, &args.solver) {
            Ok(row) => {
                if !row.valid && row.objective.is_some() {
                    code = EXIT_INVALID;
                }
                let _ = writeln!(out, "{}", row.to_csv());
            }
            Err(e) => return fail(err, e),
        }
    }
    code
}
