use thiserror::Error;

use crate::sim::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub at: SimTime,
    pub position: Position,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobilityError {
    #[error("a node needs at least one waypoint")]
    Empty,
    #[error("waypoint times must be strictly increasing (waypoint {index} at {at})")]
    NotIncreasing { index: usize, at: SimTime },
    #[error("waypoint {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// Piecewise-linear trajectory. Before the first waypoint the node sits at
/// the first position; after the last it parks at the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeKinematics {
    waypoints: Vec<Waypoint>,
}

impl NodeKinematics {
    pub fn new(waypoints: Vec<Waypoint>) -> Result<Self, MobilityError> {
        if waypoints.is_empty() {
            return Err(MobilityError::Empty);
        }
        for (index, w) in waypoints.iter().enumerate() {
            if !w.position.x.is_finite() || !w.position.y.is_finite() {
                return Err(MobilityError::NonFinite { index });
            }
            if index > 0 && w.at <= waypoints[index - 1].at {
                return Err(MobilityError::NotIncreasing { index, at: w.at });
            }
        }
        Ok(NodeKinematics { waypoints })
    }

    pub fn stationary(position: Position) -> Self {
        NodeKinematics {
            waypoints: vec![Waypoint {
                at: SimTime::ZERO,
                position,
            }],
        }
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn position_at(&self, t: SimTime) -> Position {
        let first = self.waypoints[0];
        if t <= first.at {
            return first.position;
        }
        // index of the first waypoint strictly after t
        let next = self.waypoints.partition_point(|w| w.at <= t);
        if next == self.waypoints.len() {
            return self.waypoints[next - 1].position;
        }
        let (a, b) = (self.waypoints[next - 1], self.waypoints[next]);
        let span = (b.at - a.at).as_micros() as f64;
        let frac = (t - a.at).as_micros() as f64 / span;
        Position::new(
            a.position.x + (b.position.x - a.position.x) * frac,
            a.position.y + (b.position.y - a.position.y) * frac,
        )
    }
}
