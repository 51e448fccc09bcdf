//! Contact statistics and destination-type frequencies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::encounters::ContactRecord;
use crate::engine::SelectionRecord;
use crate::mobility::{DestinationType, NodeId};

/// Number of log-spaced CCDF thresholds.
pub const CCDF_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub value: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub samples: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub ccdf: Vec<CcdfPoint>,
}

impl DistributionSummary {
    pub fn from_samples(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self {
                samples: 0,
                mean: 0.0,
                min: 0.0,
                max: 0.0,
                ccdf: Vec::new(),
            };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let min = sorted[0];
        let max = sorted[n - 1];
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let ccdf = log_thresholds(&sorted)
            .into_iter()
            .map(|value| {
                let below = sorted.partition_point(|&x| x < value);
                CcdfPoint {
                    value,
                    fraction: (n - below) as f64 / n as f64,
                }
            })
            .collect();
        Self {
            samples: n,
            mean,
            min,
            max,
            ccdf,
        }
    }

    /// `max / min_positive` expressed in decades, from the CCDF support.
    pub fn decades_spanned(&self) -> f64 {
        match (self.ccdf.first(), self.ccdf.last()) {
            (Some(a), Some(b)) if a.value > 0.0 => (b.value / a.value).log10(),
            _ => 0.0,
        }
    }
}

/// Log-spaced thresholds from the smallest positive sample to the maximum.
fn log_thresholds(sorted: &[f64]) -> Vec<f64> {
    let Some(&lo) = sorted.iter().find(|&&x| x > 0.0) else {
        return Vec::new();
    };
    let hi = sorted[sorted.len() - 1];
    if lo == hi {
        return vec![lo];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..CCDF_POINTS)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == CCDF_POINTS - 1 {
                hi
            } else {
                (llo + (lhi - llo) * i as f64 / (CCDF_POINTS - 1) as f64).exp()
            }
        })
        .collect()
}

/// Contacts grouped by unordered pair, each group ordered by start time.
pub fn contacts_by_pair(log: &[ContactRecord]) -> BTreeMap<(NodeId, NodeId), Vec<ContactRecord>> {
    let mut pairs: BTreeMap<(NodeId, NodeId), Vec<ContactRecord>> = BTreeMap::new();
    for rec in log {
        pairs.entry((rec.a, rec.b)).or_default().push(*rec);
    }
    for recs in pairs.values_mut() {
        recs.sort_by(|x, y| x.start.total_cmp(&y.start).then(x.end.total_cmp(&y.end)));
    }
    pairs
}

/// Gaps between consecutive contacts of each pair, pooled in pair order.
/// Gaps touching a censored contact are dropped.
pub fn inter_contact_samples(log: &[ContactRecord]) -> Vec<f64> {
    contacts_by_pair(log)
        .values()
        .flat_map(|recs| {
            recs.windows(2)
                .filter(|w| !w[0].censored && !w[1].censored)
                .map(|w| w[1].start - w[0].end)
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn inter_contact_times(log: &[ContactRecord]) -> DistributionSummary {
    DistributionSummary::from_samples(&inter_contact_samples(log))
}

/// Durations of completed contacts with positive length.
pub fn duration_samples(log: &[ContactRecord]) -> Vec<f64> {
    log.iter()
        .filter(|r| !r.censored && r.duration() > 0.0)
        .map(ContactRecord::duration)
        .collect()
}

pub fn contact_durations(log: &[ContactRecord]) -> DistributionSummary {
    DistributionSummary::from_samples(&duration_samples(log))
}

pub fn contacts_per_pair_samples(log: &[ContactRecord]) -> Vec<f64> {
    contacts_by_pair(log)
        .values()
        .map(|recs| recs.len() as f64)
        .collect()
}

pub fn contacts_per_pair(log: &[ContactRecord]) -> DistributionSummary {
    DistributionSummary::from_samples(&contacts_per_pair_samples(log))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    /// Home or Neighbouring destinations.
    pub neighbouring: u64,
    pub visiting: u64,
    pub fallbacks: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.neighbouring + self.visiting
    }

    pub fn neighbouring_fraction(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.neighbouring as f64 / self.total() as f64
        }
    }

    fn add(&mut self, rec: &SelectionRecord) {
        match rec.chosen {
            DestinationType::Neighbouring => self.neighbouring += 1,
            DestinationType::Visiting => self.visiting += 1,
        }
        if rec.fallback {
            self.fallbacks += 1;
        }
    }

    fn merge(&mut self, other: &ClassCounts) {
        self.neighbouring += other.neighbouring;
        self.visiting += other.visiting;
        self.fallbacks += other.fallbacks;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStats {
    pub aggregate: ClassCounts,
    pub per_node: Vec<ClassCounts>,
}

impl SelectionStats {
    /// Aggregate over nodes that never fell back.
    pub fn without_fallback_nodes(&self) -> ClassCounts {
        let mut acc = ClassCounts::default();
        for c in self.per_node.iter().filter(|c| c.fallbacks == 0) {
            acc.merge(c);
        }
        acc
    }
}

pub fn selection_stats(selections: &[SelectionRecord], node_count: usize) -> SelectionStats {
    let mut per_node = vec![ClassCounts::default(); node_count];
    let mut aggregate = ClassCounts::default();
    for rec in selections {
        per_node[rec.node].add(rec);
        aggregate.add(rec);
    }
    SelectionStats {
        aggregate,
        per_node,
    }
}

/// Everything exported as the metrics JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub contacts: usize,
    pub censored_contacts: usize,
    pub zero_length_contacts: usize,
    pub inter_contact_time: DistributionSummary,
    pub contact_duration: DistributionSummary,
    pub contacts_per_pair: DistributionSummary,
    pub selection: SelectionStats,
}

impl MetricsReport {
    pub fn compute(
        log: &[ContactRecord],
        selections: &[SelectionRecord],
        node_count: usize,
    ) -> Self {
        Self {
            contacts: log.len(),
            censored_contacts: log.iter().filter(|r| r.censored).count(),
            zero_length_contacts: log.iter().filter(|r| r.duration() == 0.0).count(),
            inter_contact_time: inter_contact_times(log),
            contact_duration: contact_durations(log),
            contacts_per_pair: contacts_per_pair(log),
            selection: selection_stats(selections, node_count),
        }
    }
}
