//! SWIM decision kernel: cell weights, two-step destination choice and pause
//! times.

use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{random_point_in_cell, AreaBounds, CellId, LocationClass, LocationMap, Point2D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaitTimeDist {
    Uniform { min: f64, max: f64 },
    TruncatedPowerLaw { exponent: f64, min: f64, max: f64 },
}

impl WaitTimeDist {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            WaitTimeDist::Uniform { min, max } => (min, max),
            WaitTimeDist::TruncatedPowerLaw { min, max, .. } => (min, max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (min, max) = self.bounds();
        if !(min.is_finite() && max.is_finite() && min > 0.0 && min <= max) {
            return Err(Error::invalid(
                "waitTime",
                format!("bounds must satisfy 0 < min <= max, got min={min}, max={max}"),
            ));
        }
        if let WaitTimeDist::TruncatedPowerLaw { exponent, .. } = *self {
            if !(exponent.is_finite() && exponent > 1.0) {
                return Err(Error::invalid(
                    "waitTime",
                    format!("power-law exponent must be > 1, got {exponent}"),
                ));
            }
        }
        Ok(())
    }

    /// Inverse CDF. `u` is expected in `[0, 1)`; the result is clamped to the
    /// support.
    pub fn quantile(&self, u: f64) -> f64 {
        let t = match *self {
            WaitTimeDist::Uniform { min, max } => min + u * (max - min),
            WaitTimeDist::TruncatedPowerLaw { exponent, min, max } => {
                if min == max {
                    return min;
                }
                let e = 1.0 - exponent;
                let lo = min.powf(e);
                let hi = max.powf(e);
                (lo + u * (hi - lo)).powf(1.0 / e)
            }
        };
        let (min, max) = self.bounds();
        t.clamp(min, max)
    }
}

impl Distribution<f64> for WaitTimeDist {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

pub fn draw_wait_time<R: Rng + ?Sized>(dist: &WaitTimeDist, rng: &mut R) -> f64 {
    dist.sample(rng)
}

/// Who increments `seen` when a node arrives at an occupied cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeenUpdate {
    /// Both the arriving node and every node paused there.
    #[default]
    Symmetric,
    /// Only the nodes already paused there.
    BystandersOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub speed: f64,
    pub neighbour_location_limit: f64,
    pub no_of_locations: usize,
    pub area: AreaBounds,
    pub wait_time: WaitTimeDist,
    /// Distance decay scale in 1/m.
    pub distance_decay_scale: f64,
    pub seed: u64,
    pub node_count: usize,
    pub sim_duration: f64,
    pub seen_update: SeenUpdate,
}

impl ModelParams {
    /// Default decay scale: the far corner of the area decays to 1/9.
    pub fn default_decay_scale(area: AreaBounds) -> f64 {
        2.0 / area.diagonal()
    }

    pub fn validate(&self) -> Result<()> {
        self.area.validate()?;
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(Error::invalid(
                "speed",
                format!("must be positive, got {}", self.speed),
            ));
        }
        if self.neighbour_location_limit.is_nan() || self.neighbour_location_limit < 0.0 {
            return Err(Error::invalid(
                "neighbourLocationLimit",
                format!(
                    "must be non-negative, got {}",
                    self.neighbour_location_limit
                ),
            ));
        }
        if self.no_of_locations < 2 {
            return Err(Error::invalid(
                "noOfLocations",
                format!("must be at least 2, got {}", self.no_of_locations),
            ));
        }
        self.wait_time.validate()?;
        if !(self.distance_decay_scale.is_finite() && self.distance_decay_scale > 0.0) {
            return Err(Error::invalid(
                "k",
                format!("must be positive, got {}", self.distance_decay_scale),
            ));
        }
        if self.node_count < 1 {
            return Err(Error::invalid("nodeCount", "must be at least 1"));
        }
        if !(self.sim_duration.is_finite() && self.sim_duration > 0.0) {
            return Err(Error::invalid(
                "simDuration",
                format!("must be positive, got {}", self.sim_duration),
            ));
        }
        Ok(())
    }
}

/// Kinematic phase of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Paused { at: CellId, since: f64, until: f64 },
    Moving(Trip),
}

/// One straight-line constant-speed leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trip {
    pub from: Point2D,
    pub to: Point2D,
    pub from_cell: CellId,
    pub to_cell: CellId,
    pub depart_at: f64,
    pub arrive_at: f64,
}

impl Trip {
    pub fn length(&self) -> f64 {
        self.from.distance(self.to)
    }

    pub fn position_at(&self, t: f64) -> Result<Point2D> {
        if !(self.depart_at..=self.arrive_at).contains(&t) {
            return Err(Error::TimeOutsidePhase {
                t,
                start: self.depart_at,
                end: self.arrive_at,
            });
        }
        let span = self.arrive_at - self.depart_at;
        if span == 0.0 {
            return Ok(self.to);
        }
        let f = (t - self.depart_at) / span;
        Ok(Point2D::new(
            self.from.x + f * (self.to.x - self.from.x),
            self.from.y + f * (self.to.y - self.from.y),
        ))
    }
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    pub home: CellId,
    pub classes: Vec<LocationClass>,
    /// Last waypoint: the pause point, or the start of the current trip.
    pub position: Point2D,
    pub phase: Phase,
    pub seen: Vec<u64>,
    pub seen_total: u64,
    /// `distance_decay(home, c)` for every cell.
    pub decay: Vec<f64>,
}

impl NodeState {
    /// Fresh node paused at `position` with zeroed counters.
    pub fn new(
        id: NodeId,
        position: Point2D,
        map: &LocationMap,
        params: &ModelParams,
    ) -> Result<Self> {
        let home = map.cell_of(position)?;
        let classes = map.classify_locations(home, params.neighbour_location_limit);
        let decay = (0..map.len())
            .map(|c| distance_decay(home, c, map, params.distance_decay_scale))
            .collect();
        Ok(Self {
            id,
            home,
            classes,
            position,
            phase: Phase::Paused {
                at: home,
                since: 0.0,
                until: 0.0,
            },
            seen: vec![0; map.len()],
            seen_total: 0,
            decay,
        })
    }

    pub fn current_cell(&self) -> CellId {
        match self.phase {
            Phase::Paused { at, .. } => at,
            Phase::Moving(trip) => trip.from_cell,
        }
    }

    pub fn record_seen(&mut self, cell: CellId, n: u64) {
        self.seen[cell] += n;
        self.seen_total += n;
    }

    pub fn position_at(&self, t: f64) -> Result<Point2D> {
        match self.phase {
            Phase::Paused { since, until, .. } => {
                if (since..=until).contains(&t) {
                    Ok(self.position)
                } else {
                    Err(Error::TimeOutsidePhase {
                        t,
                        start: since,
                        end: until,
                    })
                }
            }
            Phase::Moving(trip) => trip.position_at(t),
        }
    }
}

/// `1 / (1 + k d)^2` of the center-to-center distance from `home` to `c`.
pub fn distance_decay(home: CellId, c: CellId, map: &LocationMap, k: f64) -> f64 {
    let d = map.center_distance(home, c);
    let s = 1.0 + k * d;
    1.0 / (s * s)
}

pub fn seen_normalized(node: &NodeState, c: CellId) -> f64 {
    node.seen[c] as f64 / (1.0 + node.seen_total as f64)
}

pub fn weight(node: &NodeState, c: CellId, alpha: f64) -> f64 {
    alpha * node.decay[c] + (1.0 - alpha) * seen_normalized(node, c)
}

/// Destination type drawn in the first step; Home counts as near.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DestinationType {
    Neighbouring,
    Visiting,
}

impl DestinationType {
    pub fn of(class: LocationClass) -> Self {
        match class {
            LocationClass::Home | LocationClass::Neighbouring => DestinationType::Neighbouring,
            LocationClass::Visiting => DestinationType::Visiting,
        }
    }

    fn other(self) -> Self {
        match self {
            DestinationType::Neighbouring => DestinationType::Visiting,
            DestinationType::Visiting => DestinationType::Neighbouring,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub cell: CellId,
    pub point: Point2D,
    /// Type drawn in the first step.
    pub drawn: DestinationType,
    /// Type of the chosen cell.
    pub chosen: DestinationType,
    /// The drawn type had no cells and the other type was used.
    pub fallback: bool,
}

/// Cells of `node` belonging to `kind`, in id order.
pub fn candidate_cells(node: &NodeState, kind: DestinationType) -> Vec<CellId> {
    node.classes
        .iter()
        .enumerate()
        .filter(|(_, class)| DestinationType::of(**class) == kind)
        .map(|(c, _)| c)
        .collect()
}

/// Index chosen by `u in [0, 1)` proportionally to `weights`; uniform when
/// every weight is zero.
pub fn pick_weighted(weights: &[f64], u: f64) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return ((u * weights.len() as f64) as usize).min(weights.len() - 1);
    }
    let target = u * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if target < acc {
            return i;
        }
    }
    last_positive
}

/// Two-step SWIM choice. Always consumes exactly four uniform draws, so the
/// random stream stays aligned regardless of weights or fallbacks.
pub fn select_destination<R: Rng + ?Sized>(
    node: &NodeState,
    map: &LocationMap,
    alpha: f64,
    rng: &mut R,
) -> Selection {
    let u_type: f64 = rng.random();
    let u_cell: f64 = rng.random();
    let drawn = if u_type < alpha {
        DestinationType::Neighbouring
    } else {
        DestinationType::Visiting
    };
    let mut chosen = drawn;
    let mut candidates = candidate_cells(node, drawn);
    let fallback = candidates.is_empty();
    if fallback {
        chosen = drawn.other();
        candidates = candidate_cells(node, chosen);
    }
    let weights: Vec<f64> = candidates.iter().map(|&c| weight(node, c, alpha)).collect();
    let cell = candidates[pick_weighted(&weights, u_cell)];
    let point = random_point_in_cell(map.cell(cell), rng);
    Selection {
        cell,
        point,
        drawn,
        chosen,
        fallback,
    }
}
