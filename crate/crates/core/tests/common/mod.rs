//! Brute-force oracles shared by the integration suites. None of these reuse
//! the library code paths they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use swim_mobility::engine::{PauseRecord, SimulationReport};
use swim_mobility::{ContactRecord, ScenarioConfig, Simulation};

pub fn reference_config(alpha: f64, nodes: usize, seed: u64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::reference_scenario(alpha);
    cfg.node_count = nodes;
    cfg.seed = seed;
    cfg
}

pub fn run(cfg: &ScenarioConfig, until: f64) -> SimulationReport {
    Simulation::initialize(cfg.params()).unwrap().run(until)
}

/// Contacts as the pairwise intersection of same-cell pauses. Two pauses
/// overlap when the later one starts before the earlier one ends in signal
/// order; a contact is censored when both pauses are still open.
pub fn contacts_from_pauses(pauses: &[PauseRecord]) -> Vec<ContactRecord> {
    let mut out = Vec::new();
    for (i, p) in pauses.iter().enumerate() {
        for q in &pauses[i + 1..] {
            if p.node == q.node || p.cell != q.cell {
                continue;
            }
            let start_order = p.start_order.max(q.start_order);
            let end_order = match (p.end_order, q.end_order) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => u64::MAX,
            };
            if start_order >= end_order {
                continue;
            }
            let (a, b) = if p.node < q.node {
                (p.node, q.node)
            } else {
                (q.node, p.node)
            };
            let end = match (p.end_order, q.end_order) {
                (Some(_), Some(_)) => p.end.min(q.end),
                (Some(_), None) => p.end,
                (None, Some(_)) => q.end,
                (None, None) => p.end.min(q.end),
            };
            out.push(ContactRecord {
                a,
                b,
                cell: p.cell,
                start: p.start.max(q.start),
                end,
                censored: p.end_order.is_none() && q.end_order.is_none(),
            });
        }
    }
    out
}

pub fn sorted_contacts(mut v: Vec<ContactRecord>) -> Vec<ContactRecord> {
    v.sort_by(|x, y| {
        (x.a, x.b)
            .cmp(&(y.a, y.b))
            .then(x.start.total_cmp(&y.start))
            .then(x.end.total_cmp(&y.end))
            .then(x.cell.cmp(&y.cell))
    });
    v
}

/// Brute-force inter-contact gaps: for each pair, sort its records by start
/// with a plain insertion sort and take gaps between uncensored neighbours.
pub fn brute_ict(log: &[ContactRecord]) -> Vec<f64> {
    let mut pairs: Vec<(usize, usize)> = log.iter().map(|r| (r.a, r.b)).collect();
    pairs.sort();
    pairs.dedup();
    let mut out = Vec::new();
    for (a, b) in pairs {
        let mut recs: Vec<ContactRecord> = Vec::new();
        for r in log.iter().filter(|r| r.a == a && r.b == b) {
            let pos = recs
                .iter()
                .position(|x| (x.start, x.end) > (r.start, r.end))
                .unwrap_or(recs.len());
            recs.insert(pos, *r);
        }
        for k in 1..recs.len() {
            if !recs[k - 1].censored && !recs[k].censored {
                out.push(recs[k].start - recs[k - 1].end);
            }
        }
    }
    out
}

pub fn brute_durations(log: &[ContactRecord]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in log {
        if !r.censored && r.end > r.start {
            out.push(r.end - r.start);
        }
    }
    out
}

pub fn brute_per_pair(log: &[ContactRecord]) -> Vec<f64> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in log {
        *counts.entry((r.a, r.b)).or_insert(0) += 1;
    }
    counts.values().map(|&c| c as f64).collect()
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// `|p - frac| <= 3 sigma` for a binomial proportion.
pub fn within_three_sigma(hits: u64, n: u64, p: f64) -> bool {
    let frac = hits as f64 / n as f64;
    (frac - p).abs() <= 3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
