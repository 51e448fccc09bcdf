//! `swim` command line: `run`, `sweep` and `validate`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Parser, Subcommand};

use super::writers::{remove_files, write_outputs};
use super::ScenarioConfig;
use crate::engine::Simulation;
use crate::error::{Error, Result};
use crate::grid::{build_grid, LocationClass};
use crate::metrics::selection_stats;

pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Parser)]
#[command(name = "swim", about = "SWIM human mobility simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write traces, contacts and metrics.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Simulated horizon in seconds (defaults to simDuration).
        #[arg(long)]
        until: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matched-seed runs over several alpha values.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        until: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a config and report the grid and location classes.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        home: usize,
    },
}

/// Entry point shared by the binary and the tests. Returns the exit status.
pub fn cli_run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Run {
            config,
            seed,
            until,
            out,
        } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = output_dir(&cfg, out)?;
            run_scenario(&cfg, until, &out)
        }
        Command::Sweep {
            config,
            alpha,
            replicates,
            seed,
            until,
            out,
        } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = output_dir(&cfg, out)?;
            sweep(&cfg, &alpha, replicates, until, &out)
        }
        Command::Validate { config, home } => {
            let cfg = ScenarioConfig::load(&config)?;
            validate(&cfg, home)
        }
    }
}

fn output_dir(cfg: &ScenarioConfig, out: Option<PathBuf>) -> Result<PathBuf> {
    out.or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| Error::invalid("outputDir", "no output directory given (use --out)"))
}

fn horizon(cfg: &ScenarioConfig, until: Option<f64>) -> Result<f64> {
    let t = until.unwrap_or(cfg.sim_duration);
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::invalid(
            "until",
            format!("must be a non-negative time, got {t}"),
        ))
    }
}

/// Runs one scenario and writes all outputs into `out`.
pub fn run_scenario(cfg: &ScenarioConfig, until: Option<f64>, out: &Path) -> Result<String> {
    let until = horizon(cfg, until)?;
    let sim = Simulation::initialize(cfg.params())?;
    let report = sim.run(until);
    let created_dir = !out.exists();
    let files = write_outputs(&report, out).inspect_err(|_| {
        if created_dir {
            let _ = fs::remove_dir(out);
        }
    })?;
    let stats = selection_stats(&report.selections, report.nodes.len());
    Ok(format!(
        "processed {} events up to t={until}; {} contacts; neighbouring fraction {:.6}; wrote {} files to {}\n",
        report.events_processed(),
        report.contacts.len(),
        stats.aggregate.neighbouring_fraction(),
        files.len(),
        out.display()
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub seed: u64,
    pub selections: u64,
    pub neighbouring: u64,
    pub visiting: u64,
    pub fallbacks: u64,
}

impl SweepRow {
    pub fn neighbouring_fraction(&self) -> f64 {
        if self.selections == 0 {
            0.0
        } else {
            self.neighbouring as f64 / self.selections as f64
        }
    }
}

/// Runs every `(seed, alpha)` combination concurrently. Row order is seed
/// major, then the order of `alphas`.
pub fn sweep_rows(
    cfg: &ScenarioConfig,
    alphas: &[f64],
    replicates: u64,
    until: f64,
) -> Result<Vec<SweepRow>> {
    let mut jobs = Vec::new();
    for r in 0..replicates {
        for &alpha in alphas {
            let mut c = cfg.clone();
            c.alpha = alpha;
            c.seed = cfg.seed.wrapping_add(r);
            c.validate()?;
            jobs.push(c);
        }
    }
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|c| {
                s.spawn(move || -> Result<SweepRow> {
                    let report = Simulation::initialize(c.params())?.run(until);
                    let agg = selection_stats(&report.selections, report.nodes.len()).aggregate;
                    Ok(SweepRow {
                        alpha: c.alpha,
                        seed: c.seed,
                        selections: agg.total(),
                        neighbouring: agg.neighbouring,
                        visiting: agg.visiting,
                        fallbacks: agg.fallbacks,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "alpha,seed,selections,neighbouring,visiting,fallbacks,neighbouring_fraction\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6}",
            r.alpha,
            r.seed,
            r.selections,
            r.neighbouring,
            r.visiting,
            r.fallbacks,
            r.neighbouring_fraction()
        )
        .unwrap();
    }
    out
}

fn sweep(
    cfg: &ScenarioConfig,
    alphas: &[f64],
    replicates: u64,
    until: Option<f64>,
    out: &Path,
) -> Result<String> {
    if replicates == 0 {
        return Err(Error::invalid("replicates", "must be at least 1"));
    }
    let until = horizon(cfg, until)?;
    let rows = sweep_rows(cfg, alphas, replicates, until)?;
    let table = sweep_table(&rows);
    let created_dir = !out.exists();
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = out.join(SWEEP_FILE);
    if let Err(e) = fs::write(&path, &table) {
        remove_files(std::slice::from_ref(&path));
        if created_dir {
            let _ = fs::remove_dir(out);
        }
        return Err(Error::io(path, e));
    }
    Ok(table)
}

fn validate(cfg: &ScenarioConfig, home: usize) -> Result<String> {
    let map = build_grid(cfg.area(), cfg.no_of_locations)?;
    if home >= map.len() {
        return Err(Error::invalid(
            "home",
            format!("cell {home} does not exist ({} cells)", map.len()),
        ));
    }
    let classes = map.classify_locations(home, cfg.neighbour_location_limit);
    let count = |k: LocationClass| classes.iter().filter(|c| **c == k).count();
    let (w, h) = map.cell_size();
    Ok(format!(
        "grid: {} rows x {} cols ({} cells of {w:.6} m x {h:.6} m)\nhome cell {home}: {} neighbouring, {} visiting (limit {} m)\n",
        map.rows(),
        map.cols(),
        map.len(),
        count(LocationClass::Neighbouring),
        count(LocationClass::Visiting),
        cfg.neighbour_location_limit,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_reports_grid_shape() {
        let text = validate(&ScenarioConfig::reference_scenario(0.3), 0).unwrap();
        assert!(text.starts_with("grid: 3 rows x 7 cols"), "{text}");
        assert!(text.contains("13 neighbouring, 7 visiting"));
        assert!(validate(&ScenarioConfig::reference_scenario(0.3), 21).is_err());
    }

    #[test]
    fn sweep_rows_are_matched() {
        let mut cfg = ScenarioConfig::reference_scenario(0.3);
        cfg.node_count = 3;
        let rows = sweep_rows(&cfg, &[0.3, 0.8], 2, 2000.0).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].seed, rows[1].seed, rows[2].seed), (0, 0, 1));
        assert_eq!(rows[1].alpha, 0.8);
        assert!(sweep_rows(&cfg, &[1.3], 1, 10.0).is_err());
    }
}
