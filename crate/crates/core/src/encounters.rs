//! Arrival-signal handling: popularity counters and contact intervals.
//!
//! A node is "in" a cell only while paused there. Nodes crossing a cell on a
//! trip neither send nor receive signals.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::grid::CellId;
use crate::mobility::{NodeId, NodeState, SeenUpdate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactRecord {
    pub a: NodeId,
    pub b: NodeId,
    pub cell: CellId,
    pub start: f64,
    pub end: f64,
    pub censored: bool,
}

impl ContactRecord {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone)]
pub struct EncounterBook {
    mode: SeenUpdate,
    paused: Vec<BTreeSet<NodeId>>,
    /// Indices into `log` of contacts still open, per node.
    open: Vec<Vec<usize>>,
    log: Vec<ContactRecord>,
}

impl EncounterBook {
    pub fn new(cells: usize, nodes: usize, mode: SeenUpdate) -> Self {
        Self {
            mode,
            paused: vec![BTreeSet::new(); cells],
            open: vec![Vec::new(); nodes],
            log: Vec::new(),
        }
    }

    pub fn paused_at(&self, cell: CellId) -> impl Iterator<Item = NodeId> + '_ {
        self.paused[cell].iter().copied()
    }

    /// `arriving` has just reached `cell` and is about to pause. Returns the
    /// number of nodes it encountered.
    pub fn on_arrival_signal(
        &mut self,
        nodes: &mut [NodeState],
        arriving: NodeId,
        cell: CellId,
        now: f64,
    ) -> usize {
        let present: Vec<NodeId> = self.paused[cell]
            .iter()
            .copied()
            .filter(|&p| p != arriving)
            .collect();
        for &p in &present {
            nodes[p].record_seen(cell, 1);
            let (a, b) = if p < arriving {
                (p, arriving)
            } else {
                (arriving, p)
            };
            let idx = self.log.len();
            self.log.push(ContactRecord {
                a,
                b,
                cell,
                start: now,
                end: now,
                censored: false,
            });
            self.open[p].push(idx);
            self.open[arriving].push(idx);
        }
        if self.mode == SeenUpdate::Symmetric && !present.is_empty() {
            nodes[arriving].record_seen(cell, present.len() as u64);
        }
        self.paused[cell].insert(arriving);
        present.len()
    }

    /// `leaving` ends its pause at `cell`; all of its open contacts close.
    pub fn on_departure_signal(&mut self, leaving: NodeId, cell: CellId, now: f64) {
        self.paused[cell].remove(&leaving);
        let closing = std::mem::take(&mut self.open[leaving]);
        for idx in closing {
            let rec = &mut self.log[idx];
            debug_assert_eq!(rec.cell, cell);
            rec.end = now;
            let other = if rec.a == leaving { rec.b } else { rec.a };
            self.open[other].retain(|&i| i != idx);
        }
    }

    /// Closes every open contact at `until` and marks it censored.
    pub fn close_all(&mut self, until: f64) {
        for list in &mut self.open {
            for idx in list.drain(..) {
                let rec = &mut self.log[idx];
                rec.end = until;
                rec.censored = true;
            }
        }
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn log(&self) -> &[ContactRecord] {
        &self.log
    }

    pub fn into_log(self) -> Vec<ContactRecord> {
        self.log
    }
}
