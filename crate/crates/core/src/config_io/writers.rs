//! Trace and plot-data writers. All numeric fields use 6 fixed decimals.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::encounters::ContactRecord;
use crate::engine::SimulationReport;
use crate::error::{Error, Result};
use crate::metrics::{DistributionSummary, MetricsReport, SelectionStats};

pub const LOCATIONS_FILE: &str = "locations.txt";
pub const WAYPOINTS_FILE: &str = "waypoints.csv";
pub const CONTACTS_FILE: &str = "contacts.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const SELECTION_FILE: &str = "selection.json";
pub const ICT_CCDF_FILE: &str = "ict_ccdf.csv";
pub const DURATION_CCDF_FILE: &str = "duration_ccdf.csv";
pub const CONTACTS_PER_PAIR_CCDF_FILE: &str = "contacts_per_pair_ccdf.csv";

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn waypoints_csv(report: &SimulationReport) -> String {
    let mut out = String::from("time,node,x,y,event\n");
    for w in &report.waypoints {
        writeln!(
            out,
            "{:.6},{},{:.6},{:.6},{}",
            w.time,
            w.node,
            w.position.x,
            w.position.y,
            w.event.as_str()
        )
        .unwrap();
    }
    out
}

pub fn write_waypoints(report: &SimulationReport, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &waypoints_csv(report))
}

pub fn contacts_csv(log: &[ContactRecord]) -> String {
    let mut out = String::from("a,b,cell,start,end,censored\n");
    for r in log {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6},{}",
            r.a, r.b, r.cell, r.start, r.end, r.censored as u8
        )
        .unwrap();
    }
    out
}

pub fn write_contacts(log: &[ContactRecord], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &contacts_csv(log))
}

pub fn ccdf_csv(summary: &DistributionSummary) -> String {
    let mut out = String::from("value,fraction\n");
    for p in &summary.ccdf {
        writeln!(out, "{:.6},{:.6}", p.value, p.fraction).unwrap();
    }
    out
}

pub fn write_ccdf(summary: &DistributionSummary, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &ccdf_csv(summary))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("metrics types always serialize");
    s.push('\n');
    s
}

pub fn write_metrics(metrics: &MetricsReport, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &to_json(metrics))
}

pub fn write_selection(stats: &SelectionStats, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &to_json(stats))
}

/// Writes every output of a run into `dir`, returning the files written.
/// On failure the files already written are removed.
pub fn write_outputs(report: &SimulationReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut written = Vec::new();
    let result = write_all(report, dir, &mut written);
    if result.is_err() {
        remove_files(&written);
        written.clear();
    }
    result.map(|()| written)
}

fn write_all(report: &SimulationReport, dir: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let metrics = MetricsReport::compute(&report.contacts, &report.selections, report.nodes.len());
    let mut emit = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        write_text(&path, &text)?;
        written.push(path);
        Ok(())
    };
    emit(LOCATIONS_FILE, report.map.to_locations_text())?;
    emit(WAYPOINTS_FILE, waypoints_csv(report))?;
    emit(CONTACTS_FILE, contacts_csv(&report.contacts))?;
    emit(METRICS_FILE, to_json(&metrics))?;
    emit(SELECTION_FILE, to_json(&metrics.selection))?;
    emit(ICT_CCDF_FILE, ccdf_csv(&metrics.inter_contact_time))?;
    emit(DURATION_CCDF_FILE, ccdf_csv(&metrics.contact_duration))?;
    emit(
        CONTACTS_PER_PAIR_CCDF_FILE,
        ccdf_csv(&metrics.contacts_per_pair),
    )?;
    Ok(())
}

pub(crate) fn remove_files(paths: &[PathBuf]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}
