//! Event-driven SWIM run loop.
//!
//! Positions are analytic along straight segments, so the only events are a
//! node finishing its pause (departure) and a node reaching its destination
//! (arrival). Events are ordered by `(time, seq)` where `seq` is the insertion
//! counter.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::encounters::{ContactRecord, EncounterBook};
use crate::error::Result;
use crate::grid::{build_grid, CellId, LocationMap, Point2D};
use crate::mobility::{
    draw_wait_time, select_destination, DestinationType, ModelParams, NodeId, NodeState, Phase,
    Selection, Trip,
};
use crate::rng::{node_stream, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Arrival(NodeId),
    Departure(NodeId),
}

impl EventKind {
    pub fn node(self) -> NodeId {
        match self {
            EventKind::Arrival(n) | EventKind::Departure(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub seq: u64,
    pub kind: EventKind,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Default, Clone)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Event>>,
    next_seq: u64,
}

impl EventQueue {
    pub fn schedule(&mut self, time: f64, kind: EventKind) -> Event {
        let ev = Event {
            time,
            seq: self.next_seq,
            kind,
        };
        self.next_seq += 1;
        self.heap.push(Reverse(ev));
        ev
    }

    pub fn peek(&self) -> Option<&Event> {
        self.heap.peek().map(|r| &r.0)
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop().map(|r| r.0)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Event> {
        self.heap.iter().map(|r| &r.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaypointEvent {
    Depart,
    Arrive,
}

impl WaypointEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            WaypointEvent::Depart => "depart",
            WaypointEvent::Arrive => "arrive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaypointRecord {
    pub time: f64,
    pub node: NodeId,
    pub position: Point2D,
    pub event: WaypointEvent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripRecord {
    pub node: NodeId,
    pub trip: Trip,
}

/// One pause of one node. `start_order`/`end_order` are positions in the
/// global signal order (initial placements first, then events as processed),
/// which resolves simultaneous timestamps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauseRecord {
    pub node: NodeId,
    pub cell: CellId,
    pub start: f64,
    pub end: f64,
    pub start_order: u64,
    pub end_order: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionRecord {
    pub node: NodeId,
    pub time: f64,
    pub cell: CellId,
    pub drawn: DestinationType,
    pub chosen: DestinationType,
    pub fallback: bool,
}

/// Everything produced by one run.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub params: ModelParams,
    pub map: LocationMap,
    pub until: f64,
    pub initial_positions: Vec<Point2D>,
    pub events: Vec<Event>,
    pub waypoints: Vec<WaypointRecord>,
    pub trips: Vec<TripRecord>,
    pub pauses: Vec<PauseRecord>,
    pub contacts: Vec<ContactRecord>,
    pub selections: Vec<SelectionRecord>,
    pub nodes: Vec<NodeState>,
}

impl SimulationReport {
    pub fn events_processed(&self) -> usize {
        self.events.len()
    }

    pub fn total_seen(&self) -> u64 {
        self.nodes.iter().map(|n| n.seen_total).sum()
    }
}

pub struct Simulation {
    params: ModelParams,
    map: LocationMap,
    now: f64,
    nodes: Vec<NodeState>,
    rngs: Vec<SimRng>,
    queue: EventQueue,
    book: EncounterBook,
    signal_order: u64,
    open_pause: Vec<usize>,
    initial_positions: Vec<Point2D>,
    events: Vec<Event>,
    waypoints: Vec<WaypointRecord>,
    trips: Vec<TripRecord>,
    pauses: Vec<PauseRecord>,
    selections: Vec<SelectionRecord>,
}

impl Simulation {
    /// Places every node uniformly over the area, classifies its locations
    /// and starts it paused at home. Initial placements fire arrival signals
    /// at t = 0 in node order.
    pub fn initialize(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let map = build_grid(params.area, params.no_of_locations)?;
        let n = params.node_count;
        let mut sim = Simulation {
            book: EncounterBook::new(map.len(), n, params.seen_update),
            now: 0.0,
            nodes: Vec::with_capacity(n),
            rngs: Vec::with_capacity(n),
            queue: EventQueue::default(),
            signal_order: 0,
            open_pause: vec![0; n],
            initial_positions: Vec::with_capacity(n),
            events: Vec::new(),
            waypoints: Vec::new(),
            trips: Vec::new(),
            pauses: Vec::new(),
            selections: Vec::new(),
            params,
            map,
        };
        for id in 0..n {
            let mut rng = node_stream(sim.params.seed, id);
            let position = sim.params.area.random_point(&mut rng);
            sim.nodes
                .push(NodeState::new(id, position, &sim.map, &sim.params)?);
            sim.rngs.push(rng);
            sim.initial_positions.push(position);
        }
        for id in 0..n {
            let home = sim.nodes[id].home;
            sim.begin_pause(id, home);
        }
        Ok(sim)
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn map(&self) -> &LocationMap {
        &self.map
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn queue(&self) -> &EventQueue {
        &self.queue
    }

    pub fn contacts(&self) -> &[ContactRecord] {
        self.book.log()
    }

    /// Number of pending events per node.
    pub fn pending_per_node(&self) -> Vec<usize> {
        let mut counts = vec![0; self.nodes.len()];
        for ev in self.queue.iter() {
            counts[ev.kind.node()] += 1;
        }
        counts
    }

    fn next_signal(&mut self) -> u64 {
        let o = self.signal_order;
        self.signal_order += 1;
        o
    }

    /// Arrival signal, then pause with a fresh wait time.
    fn begin_pause(&mut self, id: NodeId, cell: CellId) {
        let now = self.now;
        self.book.on_arrival_signal(&mut self.nodes, id, cell, now);
        let wait = draw_wait_time(&self.params.wait_time, &mut self.rngs[id]);
        let until = now + wait;
        self.nodes[id].phase = Phase::Paused {
            at: cell,
            since: now,
            until,
        };
        let order = self.next_signal();
        self.open_pause[id] = self.pauses.len();
        self.pauses.push(PauseRecord {
            node: id,
            cell,
            start: now,
            end: until,
            start_order: order,
            end_order: None,
        });
        self.queue.schedule(until, EventKind::Departure(id));
    }

    pub fn handle_departure(&mut self, id: NodeId) {
        let Phase::Paused { at, .. } = self.nodes[id].phase else {
            panic!("departure for node {id} which is not paused");
        };
        let now = self.now;
        self.book.on_departure_signal(id, at, now);
        let order = self.next_signal();
        let pause = &mut self.pauses[self.open_pause[id]];
        pause.end = now;
        pause.end_order = Some(order);

        let selection = select_destination(
            &self.nodes[id],
            &self.map,
            self.params.alpha,
            &mut self.rngs[id],
        );
        self.begin_trip(id, at, selection);
    }

    fn begin_trip(&mut self, id: NodeId, from_cell: CellId, selection: Selection) {
        let now = self.now;
        let from = self.nodes[id].position;
        let to = selection.point;
        let travel = from.distance(to) / self.params.speed;
        let trip = Trip {
            from,
            to,
            from_cell,
            to_cell: selection.cell,
            depart_at: now,
            arrive_at: now + travel,
        };
        self.nodes[id].phase = Phase::Moving(trip);
        self.queue.schedule(trip.arrive_at, EventKind::Arrival(id));
        self.selections.push(SelectionRecord {
            node: id,
            time: now,
            cell: selection.cell,
            drawn: selection.drawn,
            chosen: selection.chosen,
            fallback: selection.fallback,
        });
        self.trips.push(TripRecord { node: id, trip });
        self.waypoints.push(WaypointRecord {
            time: now,
            node: id,
            position: from,
            event: WaypointEvent::Depart,
        });
    }

    pub fn handle_arrival(&mut self, id: NodeId) {
        let Phase::Moving(trip) = self.nodes[id].phase else {
            panic!("arrival for node {id} which is not moving");
        };
        self.nodes[id].position = trip.to;
        self.waypoints.push(WaypointRecord {
            time: self.now,
            node: id,
            position: trip.to,
            event: WaypointEvent::Arrive,
        });
        self.begin_pause(id, trip.to_cell);
    }

    /// Processes the next event if it is due no later than `until`.
    pub fn step(&mut self, until: f64) -> Option<Event> {
        if self.queue.peek()?.time > until {
            return None;
        }
        let ev = self.queue.pop()?;
        debug_assert!(ev.time >= self.now);
        self.now = ev.time;
        match ev.kind {
            EventKind::Departure(id) => self.handle_departure(id),
            EventKind::Arrival(id) => self.handle_arrival(id),
        }
        self.events.push(ev);
        Some(ev)
    }

    pub fn run(mut self, until: f64) -> SimulationReport {
        assert!(
            until >= self.now,
            "horizon {until} precedes clock {}",
            self.now
        );
        while self.step(until).is_some() {}
        self.finish(until)
    }

    /// Closes open contacts and pauses at `until` and returns the report.
    pub fn finish(mut self, until: f64) -> SimulationReport {
        self.book.close_all(until);
        for (id, node) in self.nodes.iter().enumerate() {
            if let Phase::Paused { .. } = node.phase {
                let pause = &mut self.pauses[self.open_pause[id]];
                if pause.end_order.is_none() {
                    pause.end = until;
                }
            }
        }
        SimulationReport {
            params: self.params,
            map: self.map,
            until,
            initial_positions: self.initial_positions,
            events: self.events,
            waypoints: self.waypoints,
            trips: self.trips,
            pauses: self.pauses,
            contacts: self.book.into_log(),
            selections: self.selections,
            nodes: self.nodes,
        }
    }
}
