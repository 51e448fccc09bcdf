//! Event-driven simulator of the SWIM (Small Worlds In Motion) mobility model.
//!
//! Nodes live on a grid of equal locations. Each node picks its next
//! destination by first drawing a destination type (near home with
//! probability `alpha`, remote otherwise) and then a cell within that type
//! proportionally to
//!
//! ```text
//! w(C) = alpha * decay(home, C) + (1 - alpha) * seen(C)
//! ```
//!
//! walks there in a straight line at constant speed, and pauses. Nodes paused
//! in the same cell are in contact; the contact log drives inter-contact time
//! and contact duration statistics.

pub mod config_io;
pub mod encounters;
pub mod engine;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod mobility;
pub mod rng;

pub use config_io::ScenarioConfig;
pub use encounters::ContactRecord;
pub use engine::{Simulation, SimulationReport};
pub use error::{Error, Result};
pub use grid::{build_grid, AreaBounds, CellId, LocationClass, LocationMap, Point2D};
pub use mobility::{ModelParams, NodeState, SeenUpdate, WaitTimeDist};
